# This file is part of voa_pseudotrace.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""Regression suite of known results, loaded from a packaged YAML file.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import yaml
from lsst.resources import ResourcePath

from .exact import parse_rat
from .heisenberg import HeisModuleSpec, pstr_bruteforce, pstr_closed_form, vacuum_log_coefficients
from .induced import (KernelVector, block_det_check, block_gram, classify, is_singular,
                      jacobi_criterion, kappa, kernel_J, same_span, singular_vector,
                      socle_radical_dims)
from .qseries import q_ddq, vir_pstr_bruteforce, vir_pstr_closed
from .sample import default_rng, random_curve_sample
from .shapovalov import c_of_t, curves_through, gram_matrix, h_rs_of_t, kac_det_formula
from .virasoro import LWVectorExpr

__all__ = ["CASES_URI", "CaseOutcome", "load_cases", "run_case", "run_verify"]

_LOG = logging.getLogger(__name__)

CASES_URI = "resource://voa.pseudotrace/data/verify_cases.yaml"


@dataclass(frozen=True)
class CaseOutcome:
    name: str
    passed: bool
    detail: str


def load_cases(uri=CASES_URI):
    """Load the regression cases.

    Returns
    -------
    cases : `list` of `dict`
        Each case has ``name``, ``op`` and operation parameters.

    Raises
    ------
    RuntimeError
        Raised if the file cannot be read or parsed.
    """
    try:
        data = yaml.safe_load(ResourcePath(uri).read())
    except Exception as e:
        raise RuntimeError(f"failed to load verification cases from {uri}") from e
    return list(data["cases"])


def _rats(case, *names):
    return [parse_rat(case[name]) for name in names]


def _expr(terms):
    return LWVectorExpr({tuple(parts): parse_rat(coeff) for parts, coeff in terms})


def _check_gram(case):
    got = gram_matrix(case["degree"]).matrix.text_rows()
    return got == case["expect"], f"matrix {got}"


def _check_kacdet(case):
    kac = kac_det_formula(case["degree"])
    ok = kac.holds
    if "constant" in case:
        ok = ok and kac.constant == parse_rat(case["constant"])
    return ok, f"constant {kac.constant}"


def _check_curves(case):
    c, h = _rats(case, "c", "h")
    got = curves_through(c, h, case["bound"])
    return got == [tuple(p) for p in case["expect"]], f"pairs {got}"


def _check_blockgram(case):
    got = block_gram(case["degree"], case["k"]).matrix.text_rows()
    return got == case["expect"], f"matrix {got}"


def _check_blockdet(case):
    check = block_det_check(case["degree"], case["k"])
    return check.equal, f"lhs {check.lhs}"


def _check_kernel(case):
    c, h = _rats(case, "c", "h")
    ell, k = case["degree"], case["k"]
    vectors = kernel_J(ell, k, c, h, cross_check=True)
    ok = len(vectors) == case["dimension"]
    basis = [v.coordinates for v in vectors]
    for wanted in case.get("contains", []):
        target = KernelVector.from_components(
            ell, k, {int(level): _expr(terms) for level, terms in wanted.items()})
        ok = ok and same_span(basis, basis + [target.coordinates])
    return ok, f"dimension {len(vectors)}: " + "; ".join(v.to_text() for v in vectors)


def _check_singvec(case):
    (t,) = _rats(case, "t")
    r, s = case["r"], case["s"]
    vector = singular_vector(r, s, t)
    ok = vector.to_text() == case["expect"] and is_singular(vector, c_of_t(t), h_rs_of_t(r, s, t))
    return ok, vector.to_text()


def _check_kappa(case):
    result = kappa(case["r"], case["s"], case["sign"], case.get("cap", 8))
    reps = [rep.to_text() for rep in result.representatives]
    ok = result.kappa == case["kappa"] and not result.at_least
    if "representatives" in case:
        ok = ok and reps == case["representatives"]
    return ok, f"kappa {result.text}, representatives {reps}"


def _check_classify(case):
    c, h = _rats(case, "c", "h")
    found = classify(c, h, case["k"], case.get("bound", 12))
    ok = found.case == case["case"] and found.interlocked == case["interlocked"]
    return ok, f"case {found.case}, interlocked {found.interlocked}"


def _check_socrad(case):
    c, h = _rats(case, "c", "h")
    rows = socle_radical_dims(c, h, case["k"], case["ell_max"])
    got = [[row.degree, row.dim_w, row.dim_soc, row.dim_rad] for row in rows]
    return got == case["expect"], f"rows {got}"


def _check_heis_pstr(case):
    a, lam = _rats(case, "a", "lambda")
    spec = HeisModuleSpec(a, lam, case["k"])
    ell_max = case.get("ell_max", 6)
    ok = True
    for v in case.get("v", ["vacuum", "alpha", "omega"]):
        ok = ok and pstr_bruteforce(spec, v, ell_max) == pstr_closed_form(spec, v, ell_max)
    if case.get("vanishes"):
        ok = ok and pstr_bruteforce(spec, "vacuum", ell_max).is_zero()
    return ok, f"a={a}, lambda={lam}, k={spec.k}"


def _check_heis_log_terms(case):
    got = [[j, str(coeff), power] for j, coeff, power in vacuum_log_coefficients(case["k"])]
    return got == case["expect"], f"terms {got}"


def _check_vir_pstr(case):
    c, h = _rats(case, "c", "h")
    k, ell_max = case["k"], case.get("ell_max", 6)
    brute = vir_pstr_bruteforce(c, h, k, ell_max)
    closed = vir_pstr_closed(c, h, k, case["case"], ell_max)
    omega = vir_pstr_bruteforce(c, h, k, ell_max, v="omega")
    shift = c / 24
    log_derivative = q_ddq(brute.shift(shift)).shift(-shift)
    ok = (brute == closed and omega == log_derivative
          and omega == vir_pstr_closed(c, h, k, case["case"], ell_max, v="omega"))
    return ok, f"vacuum {brute}"


def _check_jacobi(case):
    rng = default_rng(case.get("seed", 0))
    failures = []
    for _ in range(case.get("samples", 20)):
        r, s, t = random_curve_sample(rng, case.get("max_rs", 4))
        if not jacobi_criterion(r, s, t).agrees:
            failures.append((r, s, str(t)))
    return not failures, f"failures {failures}"


_CHECKS = {
    "gram": _check_gram,
    "kacdet": _check_kacdet,
    "curves": _check_curves,
    "blockgram": _check_blockgram,
    "blockdet": _check_blockdet,
    "kernel": _check_kernel,
    "singvec": _check_singvec,
    "kappa": _check_kappa,
    "classify": _check_classify,
    "socrad": _check_socrad,
    "heis_pstr": _check_heis_pstr,
    "heis_log_terms": _check_heis_log_terms,
    "vir_pstr": _check_vir_pstr,
    "jacobi": _check_jacobi,
}


def run_case(case):
    """Run one case; errors count as failures.

    Returns
    -------
    outcome : `CaseOutcome`
    """
    name = case.get("name", case.get("op", "?"))
    check = _CHECKS.get(case.get("op"))
    if check is None:
        return CaseOutcome(name, False, f"unknown operation {case.get('op')!r}")
    try:
        passed, detail = check(case)
    except (ValueError, KeyError, ArithmeticError, RuntimeError) as e:
        _LOG.exception("Case %s raised", name)
        return CaseOutcome(name, False, f"{type(e).__name__}: {e}")
    _LOG.info("Case %s: %s", name, "ok" if passed else "FAILED")
    return CaseOutcome(name, bool(passed), detail)


def run_verify(names=None, uri=CASES_URI):
    """Run all cases, or those named in ``names``.

    Raises
    ------
    KeyError
        Raised if a requested case name does not exist.
    """
    cases = load_cases(uri)
    if names:
        known = {case["name"] for case in cases}
        missing = sorted(set(names) - known)
        if missing:
            raise KeyError(f"unknown verification cases: {missing}")
        cases = [case for case in cases if case["name"] in names]
    return [run_case(case) for case in cases]

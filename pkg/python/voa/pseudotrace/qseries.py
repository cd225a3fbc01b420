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

"""Routines for truncated q-series with polynomial coefficients in
``L = log q``, and for Virasoro graded pseudo-traces.
"""

from __future__ import annotations

import functools
import logging
import math
from fractions import Fraction

from .exact import RatMatrix, format_rat, format_terms, rat_kernel, rat_rank, rat_solve
from .induced import block_gram, classify
from .parallel import parallel_map
from .virasoro import LWVectorExpr, apply_mode, partition_count, partitions_of

__all__ = ["OffsetMismatchError", "NotInterlockedError", "LogQSeries", "log_poly_text",
           "pstr_block_trace", "eta_inverse", "euler_product", "q_ddq", "vir_verma_trace",
           "vir_L_trace_case1", "normalize_case", "vir_pstr_closed", "vir_pstr_bruteforce"]

_LOG = logging.getLogger(__name__)


class OffsetMismatchError(ValueError):
    """Raised when adding series whose offsets differ by a non-integer."""


class NotInterlockedError(ValueError):
    """Raised when a pseudo-trace is requested for a module that is not
    interlocked.
    """


def _trim(poly):
    poly = [Fraction(x) for x in poly]
    while poly and not poly[-1]:
        poly.pop()
    return tuple(poly)


def _poly_add(first, second):
    size = max(len(first), len(second))
    return _trim([(first[i] if i < len(first) else 0) + (second[i] if i < len(second) else 0)
                  for i in range(size)])


def _poly_mul(first, second):
    if not first or not second:
        return ()
    out = [Fraction(0)] * (len(first) + len(second) - 1)
    for i, x in enumerate(first):
        for j, y in enumerate(second):
            out[i + j] += x * y
    return _trim(out)


def _poly_diff(poly):
    return _trim([i * poly[i] for i in range(1, len(poly))])


def log_poly_text(poly):
    """Text form of a polynomial in ``L``, lowest power given first."""
    monomials = ["", "L"] + [f"L^{i}" for i in range(2, len(poly))]
    return format_terms((monomials[i], value) for i, value in enumerate(poly) if value)


class LogQSeries:
    """A truncated series ``sum_ell p_ell(L) q^(offset + ell)``.

    Parameters
    ----------
    offset : `fractions.Fraction`
        Exponent of the leading term.
    coeffs : sequence of sequences of `fractions.Fraction`
        ``coeffs[ell]`` lists the coefficients of ``p_ell``, lowest power
        of ``L`` first. The series is known through ``ell_max = len(coeffs) - 1``.
    """
    __slots__ = ("offset", "coeffs")

    def __init__(self, offset, coeffs):
        self.offset = Fraction(offset)
        self.coeffs = tuple(_trim(poly) for poly in coeffs)

    @property
    def ell_max(self):
        return len(self.coeffs) - 1

    def coefficient(self, ell):
        """The polynomial multiplying ``q^(offset + ell)``; empty if zero."""
        return self.coeffs[ell] if 0 <= ell < len(self.coeffs) else ()

    def term(self, ell, power):
        poly = self.coefficient(ell)
        return poly[power] if power < len(poly) else Fraction(0)

    @property
    def log_degree(self):
        return max((len(poly) - 1 for poly in self.coeffs), default=-1)

    def is_zero(self):
        return not any(self.coeffs)

    def truncate(self, ell_max):
        return LogQSeries(self.offset, self.coeffs[:ell_max + 1])

    def shift(self, alpha):
        """Multiply by ``q^alpha``."""
        return LogQSeries(self.offset + Fraction(alpha), self.coeffs)

    def scale(self, factor):
        factor = Fraction(factor)
        return LogQSeries(self.offset, [[factor * x for x in poly] for poly in self.coeffs])

    def times_log_poly(self, poly):
        """Multiply every coefficient by a polynomial in ``L``."""
        poly = _trim(poly)
        return LogQSeries(self.offset, [_poly_mul(p, poly) for p in self.coeffs])

    def __add__(self, other):
        if not isinstance(other, LogQSeries):
            return NotImplemented
        delta = other.offset - self.offset
        if delta.denominator != 1:
            raise OffsetMismatchError(f"cannot add series with offsets {self.offset} and "
                                      f"{other.offset}")
        base = min(self.offset, other.offset)
        top = min(self.offset + self.ell_max, other.offset + other.ell_max)
        length = int(top - base) + 1
        first_shift, second_shift = int(self.offset - base), int(other.offset - base)
        return LogQSeries(base, [_poly_add(self.coefficient(ell - first_shift),
                                           other.coefficient(ell - second_shift))
                                 for ell in range(max(length, 0))])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, LogQSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LogQSeries):
            return NotImplemented
        length = min(self.ell_max, other.ell_max) + 1
        coeffs = []
        for ell in range(length):
            total = ()
            for i in range(ell + 1):
                total = _poly_add(total, _poly_mul(self.coeffs[i], other.coeffs[ell - i]))
            coeffs.append(total)
        return LogQSeries(self.offset + other.offset, coeffs)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LogQSeries):
            return NotImplemented
        return self.offset == other.offset and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.offset, self.coeffs))

    def to_record(self):
        """Plain-data form used by the JSON and Avro writers."""
        return {
            "offset": format_rat(self.offset),
            "terms": [{"ell": ell, "coefficients": [format_rat(x) for x in poly],
                       "text": log_poly_text(poly)}
                      for ell, poly in enumerate(self.coeffs)],
        }

    @classmethod
    def from_record(cls, record):
        terms = sorted(record["terms"], key=lambda term: term["ell"])
        return cls(Fraction(record["offset"]),
                   [[Fraction(x) for x in term["coefficients"]] for term in terms])

    def __str__(self):
        pieces = [f"({log_poly_text(poly)})*q^({format_rat(self.offset + ell)})"
                  for ell, poly in enumerate(self.coeffs) if poly]
        return (" + ".join(pieces) or "0") + f" + O(q^({format_rat(self.offset + len(self.coeffs))}))"

    def __repr__(self):
        return f"LogQSeries(offset={format_rat(self.offset)!r}, coeffs={self.coeffs!r})"


def pstr_block_trace(operator, nilpotent, block):
    """Trace of the upper-right ``block`` square of ``operator q^nilpotent``.

    Parameters
    ----------
    operator : `RatMatrix`
        Zero-mode matrix ``o(v)`` in an interlocked basis.
    nilpotent : `RatMatrix`
        The nilpotent part of ``L_0`` in the same basis.
    block : `int`
        Socle dimension.

    Returns
    -------
    poly : `tuple` of `fractions.Fraction`
        Coefficients in ``L``, lowest power first.
    """
    size = operator.rows
    corner = size - block
    out = []
    term = operator
    for j in range(size + 1):
        if term.is_zero():
            break
        trace = sum((term[i, corner + i] for i in range(block)), Fraction(0))
        out.append(trace / math.factorial(j))
        term = term @ nilpotent
    return _trim(out)


def eta_inverse(ell_max):
    """``1/eta(q)``: offset ``-1/24`` and partition-number coefficients."""
    return LogQSeries(Fraction(-1, 24), [[partition_count(ell)] for ell in range(ell_max + 1)])


def euler_product(ell_max):
    """The truncated product ``prod_{j >= 1} (1 - q^j)``."""
    result = LogQSeries(0, [[1]] + [[]] * ell_max)
    for j in range(1, ell_max + 1):
        factor = LogQSeries(0, [[1]] + [[]] * (j - 1) + [[-1]] + [[]] * (ell_max - j))
        result = result * factor
    return result


def q_ddq(series):
    """Apply ``q d/dq``, which sends ``q^m p(L)`` to ``q^m (m p(L) + p'(L))``."""
    return LogQSeries(series.offset, [
        _poly_add([(series.offset + ell) * x for x in poly], _poly_diff(poly))
        for ell, poly in enumerate(series.coeffs)
    ])


def vir_verma_trace(c, h, ell_max):
    """Graded dimension of the Verma module ``M(c, h)``."""
    return eta_inverse(ell_max).shift(Fraction(h) - Fraction(c) / 24 + Fraction(1, 24))


def vir_L_trace_case1(c, h, rs, ell_max):
    """Graded dimension of the quotient by one singular vector at degree ``rs``."""
    return LogQSeries(Fraction(h) - Fraction(c) / 24,
                      [[partition_count(ell) - partition_count(ell - rs)]
                       for ell in range(ell_max + 1)])


_CASE_ALIASES = {"0": "0", "case0": "0", "1(ii)": "1(ii)", "1ii": "1(ii)", "case1ii": "1(ii)"}


def normalize_case(case):
    """Map a case tag such as ``"Case1ii"`` onto ``"0"`` or ``"1(ii)"``.

    Raises
    ------
    ValueError
        Raised for tags without a closed-form pseudo-trace.
    """
    key = str(case).strip().lower().replace(" ", "").replace("_", "")
    if key not in _CASE_ALIASES:
        raise ValueError(f"no closed-form pseudo-trace for case {case!r}")
    return _CASE_ALIASES[key]


def _log_derivative(vacuum, c):
    shift = Fraction(c) / 24
    return q_ddq(vacuum.shift(shift)).shift(-shift)


def vir_pstr_closed(c, h, k, case, ell_max, rs=None, v="vacuum", check=True):
    """Closed-form graded pseudo-trace of the interlocked Virasoro module.

    Parameters
    ----------
    c, h : `fractions.Fraction`
        Rational point.
    k : `int`
        Jordan block size.
    case : `str`
        ``"0"`` or ``"1(ii)"``.
    ell_max : `int`
        Truncation degree.
    rs : `int`, optional
        Singular vector degree for case ``"1(ii)"``; taken from the
        classification when omitted.
    v : `str`
        ``"vacuum"`` or ``"omega"``.
    check : `bool`
        Classify ``(c, h, k)`` up to degree ``ell_max`` and reject a case
        tag that disagrees.

    Returns
    -------
    series : `LogQSeries`

    Raises
    ------
    ValueError
        Raised for an inconsistent case tag or ``rs``.
    NotInterlockedError
        Raised if the classification says the module is not interlocked.
    """
    case = normalize_case(case)
    if v not in ("vacuum", "omega"):
        raise ValueError(f"Virasoro pseudo-traces support v in (vacuum, omega), not {v!r}")
    if check:
        found = classify(c, h, k, bound=max(ell_max, rs or ell_max, 12))
        if found.case != case:
            raise ValueError(f"case tag {case!r} disagrees with classification {found.case!r} "
                             f"at (c, h)=({c}, {h})")
        if found.interlocked is False:
            raise NotInterlockedError(f"(c, h, k)=({c}, {h}, {k}) is not interlocked")
        if case == "1(ii)":
            minimal_rs = found.minimal[0] * found.minimal[1]
            if rs is not None and rs != minimal_rs:
                raise ValueError(f"rs={rs} disagrees with the minimal curve degree {minimal_rs}")
            rs = minimal_rs
    if case == "1(ii)":
        if rs is None:
            raise ValueError("case 1(ii) needs the singular vector degree rs")
        base = vir_L_trace_case1(c, h, rs, ell_max)
    else:
        base = vir_verma_trace(c, h, ell_max)
    vacuum = base.times_log_poly([0] * (k - 1) + [Fraction(1, math.factorial(k - 1))])
    return vacuum if v == "vacuum" else _log_derivative(vacuum, c)


def _unit(size, index):
    vector = [Fraction(0)] * size
    vector[index] = Fraction(1)
    return vector


def _level_zero_action(c, h, k, ell):
    """Matrix of ``L(0)`` on degree ``ell`` of ``M(c, h, k)``.

    Built from the mode action on each basis monomial with the
    lowest-weight Jordan block substituted for ``h``; the index of
    ``L_{-B_i} u_m`` is ``i * k + m``.
    """
    basis = partitions_of(ell)
    jordan = RatMatrix.identity(k).scale(h) + RatMatrix.shift(k)
    columns = [apply_mode(0, LWVectorExpr.basis(parts)).coordinates(ell) for parts in basis]
    blocks = [[columns[j][i].evaluate_at_matrix(c, jordan) for j in range(len(basis))]
              for i in range(len(basis))]
    return RatMatrix.from_blocks(blocks)


def _vir_pstr_degree(c, h, k, v, ell):
    p = partition_count(ell)
    size = k * p
    kernel = [list(vector) for vector in rat_kernel(block_gram(ell, k, c, h).matrix)]
    socle = []
    current = rat_rank(RatMatrix.from_rows(kernel, size))
    for i in range(p):
        trial = rat_rank(RatMatrix.from_rows(
            kernel + [_unit(size, j * k) for j in socle + [i]], size))
        if trial > current:
            socle.append(i)
            current = trial
    columns = [(i, m) for m in range(k) for i in socle]
    full = [_unit(size, i * k + m) for i, m in columns] + kernel
    if len(full) != size or rat_rank(RatMatrix.from_rows(full, size)) != size:
        raise NotInterlockedError(
            f"degree {ell} of (c, h, k)=({c}, {h}, {k}) has no interlocked basis: "
            f"dim W={size - len(kernel)}, socle dimension {len(socle)}")
    change = RatMatrix.from_rows(full, size).T
    dim = len(columns)
    # The kernel is L(0)-stable, so the leading coordinates give the quotient action.
    action = _level_zero_action(c, h, k, ell)
    level_zero = RatMatrix.zeros(dim, dim)
    for col, (i, m) in enumerate(columns):
        coords = rat_solve(change, action @ _unit(size, i * k + m))
        for row in range(dim):
            level_zero[row, col] = coords[row]
    nilpotent = level_zero - RatMatrix.identity(dim).scale(Fraction(h) + ell)
    for row in range(dim):
        for col in range(dim):
            if nilpotent[row, col] and columns[row][1] >= columns[col][1]:
                raise NotInterlockedError(
                    f"L(0) - (h + {ell}) on degree {ell} of (c, h, k)=({c}, {h}, {k}) "
                    "does not lower the Jordan level")
    operator = level_zero if v == "omega" else RatMatrix.identity(dim)
    _LOG.debug("Degree %d: socle %d, quotient dimension %d", ell, len(socle), dim)
    return pstr_block_trace(operator, nilpotent, len(socle))


def vir_pstr_bruteforce(c, h, k, ell_max, v="vacuum"):
    """Graded pseudo-trace built degree by degree from explicit quotients.

    At each degree the kernel submodule is computed, an interlocked basis
    of the quotient is assembled level by level above a socle basis, and
    the upper-right socle block of ``o(v) q^N`` is traced.

    Raises
    ------
    NotInterlockedError
        Raised if ``(c, h, k)`` is not interlocked or a degree has no
        interlocked basis.
    """
    c, h = Fraction(c), Fraction(h)
    if v not in ("vacuum", "omega"):
        raise ValueError(f"Virasoro pseudo-traces support v in (vacuum, omega), not {v!r}")
    found = classify(c, h, k, bound=max(ell_max, 12))
    if found.interlocked is False:
        raise NotInterlockedError(f"(c, h, k)=({c}, {h}, {k}) is not interlocked "
                                  f"(case {found.case})")
    polys = parallel_map(functools.partial(_vir_pstr_degree, c, h, k, v), range(ell_max + 1))
    return LogQSeries(h - c / 24, polys)

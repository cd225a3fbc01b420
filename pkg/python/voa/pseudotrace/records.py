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

"""Conversion of computed results into plain records matching the
packaged Avro schemas.
"""

from .exact import format_rat

__all__ = ["point_record", "matrix_record", "gram_record", "kacdet_record", "curves_record",
           "blockgram_record", "kernel_record", "singvec_record", "kappa_record",
           "classify_record", "socrad_record", "pstr_record", "verify_record"]


def point_record(c, h):
    return {"c": format_rat(c), "h": format_rat(h)}


def matrix_record(matrix):
    """Text entries of a `PolyMatrix` or `RatMatrix`."""
    rows = [[str(value) for value in row] for row in matrix.tolist()]
    return {"rows": matrix.rows, "cols": matrix.cols, "entries": rows}


def _pair(pair):
    return {"r": pair[0], "s": pair[1]}


def gram_record(gram, c=None, h=None):
    matrix = gram.matrix if c is None else gram.matrix.evaluate(c, h)
    return {"degree": gram.degree, "basis": [list(parts) for parts in gram.basis],
            "point": None if c is None else point_record(c, h), "matrix": matrix_record(matrix)}


def kacdet_record(kac):
    return {"degree": kac.degree, "determinant": str(kac.determinant),
            "product": str(kac.product), "constant": format_rat(kac.constant),
            "factors": [{"r": r, "s": s, "exponent": e} for r, s, e in kac.factors],
            "holds": kac.holds}


def curves_record(c, h, bound, pairs):
    return {"point": point_record(c, h), "bound": bound, "pairs": [_pair(p) for p in pairs]}


def blockgram_record(gram, c=None, h=None, det_equal=None):
    return {"degree": gram.degree, "k": gram.k,
            "basis": [{"partition": list(parts), "level": level} for parts, level in gram.basis],
            "point": None if c is None else point_record(c, h),
            "matrix": matrix_record(gram.matrix), "detEqual": det_equal}


def kernel_record(ell, k, c, h, vectors):
    return {"degree": ell, "k": k, "point": point_record(c, h), "dimension": len(vectors),
            "vectors": [{"components": v.to_json()} for v in vectors]}


def singvec_record(r, s, t, c, h, vector):
    return {"r": r, "s": s, "t": format_rat(t), "point": point_record(c, h),
            "expression": vector.to_text(), "terms": vector.to_json()}


def kappa_record(result):
    return {"r": result.r, "s": result.s, "sign": result.sign,
            "point": point_record(result.c, result.h), "kappa": result.kappa,
            "atLeast": result.at_least, "cap": result.cap, "singular": result.singular.to_text(),
            "representatives": [rep.to_text() for rep in result.representatives]}


def classify_record(found):
    return {"case": found.case,
            "kappa": found.kappa.kappa if found.kappa else None,
            "interlocked": found.interlocked,
            "point": point_record(found.c, found.h), "k": found.k, "bound": found.bound,
            "interlockedFor": found.interlocked_for,
            "kappaAtLeast": bool(found.kappa and found.kappa.at_least),
            "minimal": _pair(found.minimal) if found.minimal else None,
            "curves": [_pair(p) for p in found.curves],
            "tValues": [format_rat(t) for t in found.t_values],
            "notes": list(found.notes)}


def socrad_record(c, h, k, rows):
    return {"point": point_record(c, h), "k": k,
            "rows": [{"degree": row.degree, "dimW": row.dim_w, "dimSoc": row.dim_soc,
                      "dimRad": row.dim_rad, "regular": row.regular} for row in rows]}


def pstr_record(algebra, parameters, k, v, brute=None, closed=None):
    agree = None if brute is None or closed is None else brute == closed
    return {"algebra": algebra,
            "parameters": {key: format_rat(value) for key, value in parameters.items()},
            "k": k, "v": v,
            "brute": brute.to_record() if brute is not None else None,
            "closed": closed.to_record() if closed is not None else None,
            "agree": agree}


def verify_record(outcomes):
    """Summarize `voa.pseudotrace.verify.CaseOutcome` values."""
    cases = [{"name": o.name, "passed": o.passed, "detail": o.detail} for o in outcomes]
    passed = sum(1 for o in outcomes if o.passed)
    return {"passed": passed, "failed": len(cases) - passed, "cases": cases}

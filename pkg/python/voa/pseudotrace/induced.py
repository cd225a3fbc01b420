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

"""Routines for level-zero induced modules built on a Jordan block of
size ``k``: block Gram matrices, their kernels, singular vectors, the
kappa iteration and the interlocked classification.

Vectors of ``M(c, h, k)(ell)`` are written in the basis
``B_1 u_1, ..., B_1 u_k, B_2 u_1, ...`` (partition slowest), where ``u_1``
spans the socle of the Jordan block and ``(L_0 - h) u_j = u_{j-1}``.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (BivarPoly, PolyMatrix, RatMatrix, fraction_free_det, rat_kernel,
                    rat_rank, rat_solve)
from .shapovalov import (c_of_t, curves_through, gram_determinant, gram_matrix, h_rs_of_t,
                         phi_h_derivative_closed_form, phi_h_derivative_on_curve, t_of_c)
from .virasoro import LWVectorExpr, apply_mode, partition_count, partitions_of

__all__ = ["BlockGram", "block_gram", "BlockDetCheck", "block_det_check", "KernelVector",
           "KernelDimensionError", "kernel_J", "kernel_J_cascade", "same_span", "singular_vector",
           "is_singular", "KappaResult", "kappa", "Classification", "classify",
           "SocleRadicalRow", "socle_radical_dims", "DegreeNextCheck", "degree_next_check",
           "JacobiCriterion", "jacobi_criterion"]

_LOG = logging.getLogger(__name__)

SPECIAL_CENTRAL_CHARGES = {Fraction(1): -1, Fraction(25): 1}
"""Central charges at which kappa is defined, with the matching sign of t."""


class KernelDimensionError(ValueError):
    """Raised when a kernel expected to be one-dimensional is not."""


@dataclass(frozen=True)
class BlockGram:
    """Gram matrix of ``M(c, h, k)(ell)``, symbolic or evaluated."""

    degree: int
    k: int
    matrix: PolyMatrix | RatMatrix
    basis: tuple

    @property
    def size(self):
        return len(self.basis)


def _block_basis(ell, k):
    return tuple((parts, level) for parts in partitions_of(ell) for level in range(1, k + 1))


@functools.lru_cache(maxsize=None)
def _scaled_derivatives(ell, k):
    gram = gram_matrix(ell).matrix
    return tuple(gram.diff_h(n).scale(Fraction(1, math.factorial(n))) for n in range(k))


def block_gram(ell, k, c=None, h=None, mode="derivative"):
    """Gram matrix of the degree-``ell`` part of ``M(c, h, k)``.

    Parameters
    ----------
    ell : `int`
        Degree.
    k : `int`
        Jordan block size.
    c, h : `fractions.Fraction`, optional
        Evaluation point. Both omitted gives the symbolic matrix.
    mode : `str`
        ``"derivative"`` fills block ``(i, j)`` with ``a_ij`` on the
        diagonal and ``(1/n!) d^n a_ij/dh^n`` on superdiagonal ``n``.
        ``"direct"`` instead substitutes the Jordan matrix ``hI + E`` for
        ``h`` in each ``a_ij`` and needs a rational point.

    Returns
    -------
    gram : `BlockGram`
    """
    if k < 1:
        raise ValueError(f"Jordan block size must be positive, not {k}")
    if (c is None) != (h is None):
        raise ValueError("give both c and h, or neither")
    basis = _block_basis(ell, k)
    p = partition_count(ell)
    if mode == "derivative":
        derivatives = _scaled_derivatives(ell, k)
        if c is not None:
            derivatives = tuple(d.evaluate(c, h) for d in derivatives)
            matrix = RatMatrix.zeros(p * k, p * k)
        else:
            matrix = PolyMatrix.zeros(p * k, p * k)
        for i in range(p):
            for j in range(p):
                for m in range(k):
                    for n in range(k - m):
                        matrix[i * k + m, j * k + m + n] = derivatives[n][i, j]
    elif mode == "direct":
        if c is None:
            raise ValueError("direct block Gram construction needs a rational (c, h)")
        jordan = RatMatrix.identity(k).scale(h) + RatMatrix.shift(k)
        gram = gram_matrix(ell).matrix
        blocks = [[gram[i, j].evaluate_at_matrix(c, jordan) for j in range(p)] for i in range(p)]
        matrix = RatMatrix.from_blocks(blocks)
    else:
        raise ValueError(f"unknown block Gram mode {mode!r}")
    return BlockGram(degree=ell, k=k, matrix=matrix, basis=basis)


@dataclass(frozen=True)
class BlockDetCheck:
    """Outcome of comparing ``det`` of the block Gram matrix with the
    ``k``-th power of the Gram determinant.
    """

    degree: int
    k: int
    lhs: BivarPoly
    rhs: BivarPoly

    @property
    def equal(self):
        return self.lhs == self.rhs


def block_det_check(ell, k):
    """Compute both sides of ``det(block Gram) = det(Gram)^k`` symbolically.
    """
    lhs = fraction_free_det(block_gram(ell, k).matrix)
    rhs = gram_determinant(ell) ** k
    _LOG.debug("Block determinant check at degree %d, k=%d: equal=%s", ell, k, lhs == rhs)
    return BlockDetCheck(degree=ell, k=k, lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class KernelVector:
    """An element ``sum_j R^j u_j`` of the kernel submodule at one degree.

    ``components`` holds ``(level, expression)`` pairs for the nonzero
    ``R^j`` in increasing level.
    """

    degree: int
    k: int
    coordinates: tuple
    components: tuple = field(compare=False)

    @classmethod
    def from_coordinates(cls, ell, k, coords):
        basis = partitions_of(ell)
        components = []
        for level in range(1, k + 1):
            values = [coords[i * k + level - 1] for i in range(len(basis))]
            if any(values):
                components.append((level, LWVectorExpr.from_coordinates(ell, values)))
        return cls(degree=ell, k=k, coordinates=tuple(coords), components=tuple(components))

    @classmethod
    def from_components(cls, ell, k, components):
        """Build from a mapping of level to `LWVectorExpr`."""
        p = partition_count(ell)
        coords = [Fraction(0)] * (p * k)
        for level, expr in dict(components).items():
            for i, value in enumerate(expr.rat_coordinates(ell)):
                coords[i * k + level - 1] = value
        return cls.from_coordinates(ell, k, coords)

    @property
    def leading_level(self):
        """Largest level with a nonzero component."""
        return self.components[-1][0] if self.components else 0

    def component(self, level):
        return dict(self.components).get(level, LWVectorExpr())

    def lower(self):
        """Apply ``L(-1)``, giving a vector one degree higher."""
        return KernelVector.from_components(
            self.degree + 1, self.k,
            {level: apply_mode(-1, expr) for level, expr in self.components})

    def to_text(self):
        return " + ".join(f"[{expr.to_text()}]u_{level}" for level, expr in self.components) or "0"

    def to_json(self):
        return [{"level": level, "expression": expr.to_text()} for level, expr in self.components]


def same_span(first, second):
    """Whether two lists of equal-length rational vectors span one space."""
    if not first and not second:
        return True
    width = len((first or second)[0])
    rank_first = rat_rank(RatMatrix.from_rows(first, width))
    rank_second = rat_rank(RatMatrix.from_rows(second, width))
    if rank_first != rank_second:
        return False
    return rat_rank(RatMatrix.from_rows(list(first) + list(second), width)) == rank_first


def kernel_J(ell, k, c, h, cross_check=False):
    """Basis of the kernel submodule ``J(c, h, k)`` at degree ``ell``.

    Parameters
    ----------
    ell, k : `int`
        Degree and Jordan block size.
    c, h : `fractions.Fraction`
        Rational point.
    cross_check : `bool`
        If set, also solve the level-by-level cascade and require that it
        spans the same space.

    Returns
    -------
    vectors : `list` of `KernelVector`

    Raises
    ------
    RuntimeError
        Raised if ``cross_check`` finds the two methods disagree.
    """
    c, h = Fraction(c), Fraction(h)
    matrix = block_gram(ell, k, c, h).matrix
    basis = rat_kernel(matrix)
    if cross_check:
        cascade = [v.coordinates for v in kernel_J_cascade(ell, k, c, h)]
        if not same_span(basis, cascade):
            raise RuntimeError(f"cascade and direct kernels differ at degree {ell}, k={k}, "
                               f"(c, h)=({c}, {h})")
    _LOG.debug("Kernel at degree %d, k=%d, (c, h)=(%s, %s) has dimension %d", ell, k, c, h,
               len(basis))
    return [KernelVector.from_coordinates(ell, k, v) for v in basis]


def kernel_J_cascade(ell, k, c, h):
    """Solve the derivative cascade for the kernel, top level first.

    The top level must lie in the kernel of ``A = A_ell(c, h)``; each lower
    level ``x_m`` then solves ``A x_m = -sum_n (1/n!) A^(n) x_{m+n}``,
    which constrains the higher levels through the left null space of
    ``A``.

    Returns
    -------
    vectors : `list` of `KernelVector`
    """
    c, h = Fraction(c), Fraction(h)
    p = partition_count(ell)
    derivatives = [d.evaluate(c, h) for d in _scaled_derivatives(ell, k)]
    a = derivatives[0]
    null = rat_kernel(a)
    left_null = rat_kernel(a.T)
    # Each solution is a list of level vectors from level m up to level k.
    solutions = [[vector] for vector in null]
    for m in range(k - 2, -1, -1):
        rhs = []
        for solution in solutions:
            total = [Fraction(0)] * p
            for n, upper in enumerate(solution, start=1):
                for i, value in enumerate(derivatives[n] @ upper):
                    total[i] -= value
            rhs.append(total)
        if left_null and rhs:
            constraint = RatMatrix.from_rows(
                [[sum(y * r for y, r in zip(row, column)) for column in rhs] for row in left_null],
                len(rhs))
            combos = rat_kernel(constraint)
        else:
            combos = [tuple(Fraction(int(i == j)) for j in range(len(rhs))) for i in range(len(rhs))]
        extended = []
        for combo in combos:
            target = [sum(w * r[i] for w, r in zip(combo, rhs)) for i in range(p)]
            lowest = rat_solve(a, target)
            uppers = [[sum(w * s[level][i] for w, s in zip(combo, solutions)) for i in range(p)]
                      for level in range(k - 1 - m)]
            extended.append([lowest] + uppers)
        extended.extend([vector] + [[Fraction(0)] * p for _ in range(k - 1 - m)] for vector in null)
        solutions = extended
    vectors = []
    for solution in solutions:
        coords = [Fraction(0)] * (p * k)
        for level, values in enumerate(solution):
            for i, value in enumerate(values):
                coords[i * k + level] = Fraction(value)
        vectors.append(KernelVector.from_coordinates(ell, k, coords))
    return vectors


@functools.lru_cache(maxsize=None)
def singular_vector(r, s, t):
    """The singular vector at degree ``rs`` on the curve point with parameter ``t``.

    Parameters
    ----------
    r, s : `int`
        Curve pair.
    t : `fractions.Fraction`
        Nonzero rational curve parameter.

    Returns
    -------
    vector : `LWVectorExpr`
        Spans the kernel of the degree-``rs`` Gram matrix at
        ``(c_of_t(t), h_rs_of_t(r, s, t))``, normalized so the
        ``L(-1)^(rs)`` coefficient is 1.

    Raises
    ------
    KernelDimensionError
        Raised if that kernel is not one-dimensional, which happens when
        the point also lies on another curve of equal or lower degree.
    """
    t = Fraction(t)
    degree = r * s
    c, h = c_of_t(t), h_rs_of_t(r, s, t)
    kernel = rat_kernel(gram_matrix(degree).matrix.evaluate(c, h))
    if len(kernel) != 1:
        raise KernelDimensionError(
            f"degree {degree} kernel at (c, h)=({c}, {h}) has dimension {len(kernel)}; "
            f"curves through the point up to rs={degree}: {curves_through(c, h, degree)}")
    vector = kernel[0]
    if vector[0] == 0:
        raise KernelDimensionError(f"singular vector for ({r}, {s}) at t={t} has no "
                                   f"L(-1)^{degree} term")
    return LWVectorExpr.from_coordinates(degree, [value / vector[0] for value in vector])


def is_singular(expr, c, h):
    """Whether ``L(1)`` and ``L(2)`` both annihilate ``expr`` at ``(c, h)``."""
    return all(apply_mode(n, expr).evaluate(c, h).is_zero() for n in (1, 2))


@dataclass(frozen=True)
class KappaResult:
    """Depth of the derivative cascade started from a singular vector."""

    r: int
    s: int
    sign: int
    c: Fraction
    h: Fraction
    kappa: int
    at_least: bool
    cap: int
    singular: LWVectorExpr
    representatives: tuple

    @property
    def text(self):
        return f">={self.kappa}" if self.at_least else str(self.kappa)


def kappa(r, s, sign, cap=8):
    """Run the kappa iteration for curve ``(r, s)`` at ``t = sign``.

    Starting from the singular vector ``b_1``, each step solves
    ``A b_n = -sum_{j=1}^{n-1} (1/j!) A^(j) b_{n-j}`` at
    ``(c, h) = (c_of_t(sign), h_rs_of_t(r, s, sign))``.

    Parameters
    ----------
    r, s : `int`
        Distinct curve indices.
    sign : `int`
        ``+1`` (``c = 25``) or ``-1`` (``c = 1``).
    cap : `int`
        Largest kappa tried.

    Returns
    -------
    result : `KappaResult`
        ``kappa`` is the last ``n`` whose system was consistent; when every
        system up to ``cap`` is consistent it is ``cap`` with ``at_least``
        set. ``representatives`` holds ``b_2, ..., b_kappa``.
    """
    if r == s:
        raise ValueError(f"kappa is undefined for r == s (got ({r}, {s}))")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, not {sign}")
    if cap < 1:
        raise ValueError(f"kappa cap must be positive, not {cap}")
    t = Fraction(sign)
    degree = r * s
    c, h = c_of_t(t), h_rs_of_t(r, s, t)
    derivatives = [d.evaluate(c, h) for d in _scaled_derivatives(degree, cap)]
    a = derivatives[0]
    singular = singular_vector(r, s, t)
    solved = [singular.rat_coordinates(degree)]
    at_least = True
    for n in range(2, cap + 1):
        rhs = [Fraction(0)] * len(solved[0])
        for j in range(1, n):
            for i, value in enumerate(derivatives[j] @ solved[n - j - 1]):
                rhs[i] -= value
        step = rat_solve(a, rhs)
        if step is None:
            at_least = False
            break
        solved.append(step)
    value = len(solved)
    if at_least:
        _LOG.warning("kappa for (%d, %d, %+d) reached the cap %d", r, s, sign, cap)
    else:
        _LOG.info("kappa for (%d, %d, %+d) is %d", r, s, sign, value)
    return KappaResult(r=r, s=s, sign=sign, c=c, h=h, kappa=value, at_least=at_least, cap=cap,
                       singular=singular,
                       representatives=tuple(LWVectorExpr.from_coordinates(degree, b)
                                             for b in solved[1:]))


@dataclass(frozen=True)
class Classification:
    """Interlocked classification of ``M(c, h, k)`` modulo its kernel.

    ``case`` is one of ``"0"``, ``"1(i)"``, ``"1(ii)"`` or ``"2-or-deeper"``.
    ``interlocked`` is `None` when the kappa cap leaves it undecided.
    """

    c: Fraction
    h: Fraction
    k: int
    bound: int
    case: str
    interlocked: bool | None
    interlocked_for: str
    minimal: tuple | None
    curves: tuple
    t_values: tuple
    kappa: KappaResult | None = None
    notes: tuple = ()


def _is_minimal_model_charge(t_values):
    return any(t < 0 and -t.numerator >= 2 and t.denominator >= 2 for t in t_values)


def classify(c, h, k, bound=12, cap=8):
    """Decide whether the quotient of ``M(c, h, k)`` is interlocked.

    Parameters
    ----------
    c, h : `fractions.Fraction`
        Rational point.
    k : `int`
        Jordan block size.
    bound : `int`
        Curves are searched up to ``rs <= bound``.
    cap : `int`
        Cap passed to `kappa`.

    Returns
    -------
    classification : `Classification`
    """
    c, h = Fraction(c), Fraction(h)
    if k < 1:
        raise ValueError(f"Jordan block size must be positive, not {k}")
    curves = tuple(curves_through(c, h, bound))
    t_values = t_of_c(c)
    if not curves:
        _LOG.info("(%s, %s) lies on no curve up to rs=%d: case 0", c, h, bound)
        return Classification(c=c, h=h, k=k, bound=bound, case="0", interlocked=True,
                              interlocked_for="all k", minimal=None, curves=curves,
                              t_values=t_values,
                              notes=(f"no singular vector found below degree {bound + 1}",
                                     "radical is the span of u_2, ..., u_k"))
    minimal = curves[0]
    rs = minimal[0] * minimal[1]
    notes = []
    tied = [pair for pair in curves if pair[0] * pair[1] == rs]
    if len(tied) > 1:
        notes.append(f"{len(tied)} curves share the minimal degree {rs}: {tied}")
    sign = SPECIAL_CENTRAL_CHARGES.get(c)
    r, s = minimal
    if sign is not None and r != s and len(tied) == 1:
        result = kappa(r, s, sign, cap)
        if k <= result.kappa:
            interlocked = True
        elif result.at_least:
            interlocked = None
            notes.append(f"kappa reached the cap {cap}; k={k} is undecided")
        else:
            interlocked = False
        notes.append(f"radical generated by u_2, ..., u_k and S_{r},{s} u_1")
        _LOG.info("(%s, %s, k=%d) is case 1(ii) with kappa %s", c, h, k, result.text)
        return Classification(c=c, h=h, k=k, bound=bound, case="1(ii)", interlocked=interlocked,
                              interlocked_for="k <= kappa", minimal=minimal, curves=curves,
                              t_values=t_values, kappa=result, notes=tuple(notes))
    case = "2-or-deeper" if _is_minimal_model_charge(t_values) else "1(i)"
    if k == 1:
        notes.append("k = 1 is always interlocked")
    _LOG.info("(%s, %s, k=%d) is case %s", c, h, k, case)
    return Classification(c=c, h=h, k=k, bound=bound, case=case, interlocked=(k == 1),
                          interlocked_for="k = 1", minimal=minimal, curves=curves,
                          t_values=t_values, notes=tuple(notes))


@dataclass(frozen=True)
class SocleRadicalRow:
    """Dimensions of ``W = M(c, h, k)/J``, its socle and radical at one degree."""

    degree: int
    dim_w: int
    dim_soc: int
    dim_rad: int
    regular: bool


def socle_radical_dims(c, h, k, ell_max):
    """Socle and radical dimensions of ``W`` for degrees ``0..ell_max``.

    Returns
    -------
    rows : `list` of `SocleRadicalRow`
        ``dim_w = k p(ell) - dim J(ell)``, ``dim_soc`` is the rank of the
        Gram matrix at ``(c, h)`` and ``regular`` records whether
        ``dim_w == k * dim_soc``.
    """
    c, h = Fraction(c), Fraction(h)
    rows = []
    for ell in range(ell_max + 1):
        dim_j = len(rat_kernel(block_gram(ell, k, c, h).matrix))
        dim_w = k * partition_count(ell) - dim_j
        dim_soc = rat_rank(gram_matrix(ell).matrix.evaluate(c, h))
        rows.append(SocleRadicalRow(degree=ell, dim_w=dim_w, dim_soc=dim_soc,
                                    dim_rad=dim_w - dim_soc, regular=(dim_w == k * dim_soc)))
    return rows


@dataclass(frozen=True)
class DegreeNextCheck:
    """Comparison of ``J(rs + 1)`` with ``L(-1) J(rs)``."""

    degree: int
    dim_j: int
    dim_next: int
    image_dim: int
    equal: bool


def degree_next_check(c, h, k, bound=12):
    """Check that the kernel one degree above the minimal curve is ``L(-1)``
    applied to the kernel at the curve degree.

    Raises
    ------
    ValueError
        Raised if ``(c, h)`` lies on no curve up to ``bound``.
    """
    c, h = Fraction(c), Fraction(h)
    curves = curves_through(c, h, bound)
    if not curves:
        raise ValueError(f"({c}, {h}) lies on no curve with rs <= {bound}")
    degree = curves[0][0] * curves[0][1]
    here = kernel_J(degree, k, c, h)
    above = [v.coordinates for v in kernel_J(degree + 1, k, c, h)]
    image = [v.lower().coordinates for v in here]
    width = k * partition_count(degree + 1)
    image_dim = rat_rank(RatMatrix.from_rows(image, width))
    return DegreeNextCheck(degree=degree, dim_j=len(here), dim_next=len(above),
                           image_dim=image_dim, equal=same_span(image, above))


@dataclass(frozen=True)
class JacobiCriterion:
    """Consistency of the first derivative equation at a curve point."""

    r: int
    s: int
    t: Fraction
    consistent: bool
    phi_derivative: Fraction
    closed_form: Fraction
    det_derivative: Fraction

    @property
    def predicate(self):
        return self.r != self.s and abs(self.t) == 1

    @property
    def agrees(self):
        return (self.consistent == self.predicate == (self.det_derivative == 0)
                and self.phi_derivative == self.closed_form)


def jacobi_criterion(r, s, t):
    """Evaluate the derivative criterion at ``(c_of_t(t), h_rs_of_t(r, s, t))``.

    Returns
    -------
    criterion : `JacobiCriterion`
        Whether ``A b = -A' S`` is solvable, the exact ``d phi/dh`` with
        its closed form, and ``d det A/dh`` at the point.
    """
    t = Fraction(t)
    degree = r * s
    c, h = c_of_t(t), h_rs_of_t(r, s, t)
    gram = gram_matrix(degree).matrix
    singular = singular_vector(r, s, t).rat_coordinates(degree)
    rhs = [-value for value in gram.diff_h().evaluate(c, h) @ singular]
    consistent = rat_solve(gram.evaluate(c, h), rhs) is not None
    return JacobiCriterion(r=r, s=s, t=t, consistent=consistent,
                           phi_derivative=phi_h_derivative_on_curve(r, s, t),
                           closed_form=phi_h_derivative_closed_form(r, s, t),
                           det_derivative=gram_determinant(degree).diff_h().evaluate(c, h))

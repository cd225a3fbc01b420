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

"""Routines for Shapovalov Gram matrices, Kac determinants and the curves
on which they vanish.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .exact import BivarPoly, PolyMatrix, fraction_free_det
from .virasoro import partition_count, partitions_of, shapovalov_entry

__all__ = ["GramMatrix", "gram_matrix", "gram_determinant", "phi", "sqrt_phi", "c_of_t",
           "h_rs_of_t", "t_of_c", "CurveParams", "KacDeterminant", "kac_det_formula",
           "curves_through", "phi_h_derivative_on_curve", "phi_h_derivative_closed_form"]

_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class GramMatrix:
    """The Shapovalov form on one degree of the Verma module."""

    degree: int
    matrix: PolyMatrix
    basis: tuple

    @property
    def size(self):
        return len(self.basis)


@functools.lru_cache(maxsize=None)
def gram_matrix(ell):
    """Symbolic Gram matrix of the Shapovalov form at degree ``ell``.

    Parameters
    ----------
    ell : `int`
        Degree; 0 gives the 1x1 matrix ``[[1]]``.

    Returns
    -------
    gram : `GramMatrix`
        Entry ``(i, j)`` pairs ``basis[i]`` with ``basis[j]``, the basis
        being `partitions_of` ``(ell)``.
    """
    if ell < 0:
        raise ValueError(f"Gram matrix degree must be non-negative, not {ell}")
    basis = partitions_of(ell)
    size = len(basis)
    matrix = PolyMatrix.zeros(size, size)
    for i in range(size):
        for j in range(i, size):
            entry = shapovalov_entry(basis[i], basis[j])
            matrix[i, j] = entry
            matrix[j, i] = entry
    _LOG.debug("Built degree %d Gram matrix of size %d", ell, size)
    return GramMatrix(degree=ell, matrix=matrix, basis=basis)


@functools.lru_cache(maxsize=None)
def gram_determinant(ell):
    """Exact determinant of `gram_matrix` ``(ell)`` as a `BivarPoly`."""
    return fraction_free_det(gram_matrix(ell).matrix)


def phi(r, s):
    """The Kac curve polynomial for the pair ``(r, s)``.

    Returns
    -------
    phi : `BivarPoly`
        ``(h + (r^2-1)(c-13)/24 + (rs-1)/2)(h + (s^2-1)(c-13)/24 + (rs-1)/2)
        + (r^2-s^2)^2/16``.
    """
    if r < 1 or s < 1:
        raise ValueError(f"curve indices must be positive, got ({r}, {s})")
    c, h = BivarPoly.c(), BivarPoly.h()
    shift = Fraction(r * s - 1, 2)
    first = h + (c - 13).scale(Fraction(r * r - 1, 24)) + shift
    second = h + (c - 13).scale(Fraction(s * s - 1, 24)) + shift
    return first * second + Fraction((r * r - s * s) ** 2, 16)


def sqrt_phi(r):
    """The square root ``h + (r^2-1)(c-1)/24`` of ``phi(r, r)``."""
    if r < 1:
        raise ValueError(f"curve index must be positive, got {r}")
    return BivarPoly.h() + (BivarPoly.c() - 1).scale(Fraction(r * r - 1, 24))


def c_of_t(t):
    """Central charge ``13 + 6t + 6/t`` on the curve parametrization."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("curve parameter t must be nonzero")
    return 13 + 6 * t + 6 / t


def h_rs_of_t(r, s, t):
    """Weight ``(1-r^2)t/4 + (1-rs)/2 + (1-s^2)/(4t)`` on curve ``(r, s)``."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("curve parameter t must be nonzero")
    return Fraction(1 - r * r) * t / 4 + Fraction(1 - r * s, 2) + Fraction(1 - s * s) / (4 * t)


def t_of_c(c):
    """Rational parameters ``t`` with ``c_of_t(t) == c``.

    Parameters
    ----------
    c : `fractions.Fraction`
        Central charge.

    Returns
    -------
    roots : `tuple` of `fractions.Fraction`
        Sorted distinct rational roots of ``6t^2 + (13 - c)t + 6``; empty
        when they are irrational or complex.
    """
    c = Fraction(c)
    discriminant = (13 - c) ** 2 - 144
    if discriminant < 0:
        return ()
    root = sympy.sqrt(sympy.Rational(discriminant.numerator, discriminant.denominator))
    if not root.is_Rational:
        return ()
    root = Fraction(int(root.p), int(root.q))
    return tuple(sorted({(c - 13 + root) / 12, (c - 13 - root) / 12}))


@dataclass(frozen=True)
class CurveParams:
    """A point ``(c(t), h_{r,s}(t))`` on the curve of the pair ``(r, s)``."""

    r: int
    s: int
    t: Fraction | None = None

    @property
    def rs(self):
        return self.r * self.s

    @property
    def c(self):
        return c_of_t(self.t)

    @property
    def h(self):
        return h_rs_of_t(self.r, self.s, self.t)

    @property
    def polynomial(self):
        return sqrt_phi(self.r) if self.r == self.s else phi(self.r, self.s)


@dataclass(frozen=True)
class KacDeterminant:
    """Product formula for the Kac determinant and the constant relating it
    to the computed determinant.
    """

    degree: int
    product: BivarPoly
    determinant: BivarPoly
    constant: Fraction
    factors: tuple

    @property
    def holds(self):
        return self.constant != 0 and self.determinant == self.product.scale(self.constant)


def _kac_factors(ell):
    factors = []
    for r in range(1, ell + 1):
        for s in range(1, r + 1):
            if r * s > ell:
                continue
            exponent = partition_count(ell - r * s)
            if exponent:
                factors.append((r, s, exponent))
    return tuple(factors)


def kac_det_formula(ell):
    """Compare the Gram determinant with the Kac product formula.

    Parameters
    ----------
    ell : `int`
        Positive degree.

    Returns
    -------
    kac : `KacDeterminant`
        The product over ``r > s`` of ``phi(r, s)^p(ell - rs)`` times the
        product of ``sqrt_phi(r)^p(ell - r^2)``, the exact determinant and
        their quotient, which is a nonzero rational constant.

    Raises
    ------
    ArithmeticError
        Raised if the determinant is not a constant multiple of the product.
    """
    if ell < 1:
        raise ValueError(f"Kac determinant degree must be positive, not {ell}")
    factors = _kac_factors(ell)
    product = BivarPoly.one()
    for r, s, exponent in factors:
        base = sqrt_phi(r) if r == s else phi(r, s)
        product = product * base ** exponent
    determinant = gram_determinant(ell)
    quotient = determinant.exact_div(product)
    if not quotient.is_constant():
        raise ArithmeticError(f"degree {ell} determinant is not a constant multiple of the "
                              f"Kac product; quotient {quotient}")
    return KacDeterminant(degree=ell, product=product, determinant=determinant,
                          constant=quotient.constant_value, factors=factors)


def curves_through(c, h, bound):
    """Pairs ``(r, s)``, ``r >= s``, ``rs <= bound``, whose curve holds ``(c, h)``.

    Returns
    -------
    pairs : `list` of `tuple` of `int`
        Sorted by ``rs`` and then by ``r``.
    """
    c, h = Fraction(c), Fraction(h)
    found = []
    for s in range(1, bound + 1):
        for r in range(s, bound // s + 1):
            poly = sqrt_phi(r) if r == s else phi(r, s)
            if poly.evaluate(c, h) == 0:
                found.append((r, s))
    found.sort(key=lambda pair: (pair[0] * pair[1], pair[0]))
    return found


def phi_h_derivative_on_curve(r, s, t):
    """Exact ``d phi(r, s)/dh`` at ``(c_of_t(t), h_rs_of_t(r, s, t))``."""
    return phi(r, s).diff_h().evaluate(c_of_t(t), h_rs_of_t(r, s, t))


def phi_h_derivative_closed_form(r, s, t):
    """The value ``(s^2 - r^2)(t^2 - 1)/(4t)`` of the same derivative."""
    t = Fraction(t)
    if t == 0:
        raise ValueError("curve parameter t must be nonzero")
    return Fraction(s * s - r * r) * (t * t - 1) / (4 * t)

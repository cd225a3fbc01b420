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

"""Routines for the rank-one Heisenberg vertex operator algebra with
conformal vector shifted by ``a`` and its Jordan-block modules
``W(a, lambda, k)``.

A basis vector of ``W(ell)`` is a pair ``(partition, level)`` standing
for ``alpha(-n_1)...alpha(-n_m) u_level``. Bases are ordered with the
level slowest, so the ``u_1`` block comes first.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import RatMatrix
from .parallel import parallel_map
from .qseries import LogQSeries, pstr_block_trace, q_ddq
from .virasoro import normalize_partition, partition_count, partitions_of

__all__ = ["VERTEX_TAGS", "HeisModuleSpec", "module_basis", "alpha_action", "alpha_zero_matrix",
           "DegreeOperator", "virasoro_mode", "interlocked_shape", "pstr_bruteforce",
           "vacuum_log_coefficients", "alpha_log_coefficients", "pstr_closed_form",
           "graded_dimension"]

_LOG = logging.getLogger(__name__)

VERTEX_TAGS = ("vacuum", "alpha", "omega")


@dataclass(frozen=True)
class HeisModuleSpec:
    """Parameters of ``W(a, lambda, k)``."""

    a: Fraction
    lam: Fraction
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.k < 1:
            raise ValueError(f"Jordan block size must be positive, not {self.k}")

    @property
    def central_charge(self):
        return 1 - 12 * self.a ** 2

    @property
    def lowest_weight(self):
        return self.lam ** 2 / 2 - self.a * self.lam

    @property
    def offset(self):
        """Exponent ``lowest_weight - c/24`` of the degree-zero term."""
        return self.lowest_weight - self.central_charge / 24


def module_basis(spec, ell):
    """Basis of ``W(ell)`` as ``(partition, level)`` pairs, level slowest."""
    return tuple((parts, level) for level in range(1, spec.k + 1) for parts in partitions_of(ell))


def _as_vector(elem):
    if isinstance(elem, dict):
        return elem
    elem = tuple(elem)
    if len(elem) == 2 and isinstance(elem[0], tuple):
        return {(normalize_partition(elem[0]), int(elem[1])): Fraction(1)}
    return {(normalize_partition(elem), 1): Fraction(1)}


def alpha_action(n, elem, spec=None):
    """Apply the Heisenberg mode ``alpha(n)``.

    Parameters
    ----------
    n : `int`
        Mode index.
    elem : `dict`, `tuple`
        A vector as a ``{(partition, level): coefficient}`` map, a single
        ``(partition, level)`` pair, or a bare partition (level 1).
    spec : `HeisModuleSpec`, optional
        Needed for ``n == 0``, which acts as ``lambda`` plus the shift
        ``u_j -> u_{j-1}``.

    Returns
    -------
    vector : `dict`
        The image as a ``{(partition, level): coefficient}`` map.
    """
    out = {}

    def add(key, value):
        total = out.get(key, Fraction(0)) + value
        if total:
            out[key] = total
        else:
            out.pop(key, None)

    for (parts, level), coeff in _as_vector(elem).items():
        if n < 0:
            add((normalize_partition((-n,) + parts), level), coeff)
        elif n > 0:
            count = parts.count(n)
            if count:
                index = parts.index(n)
                add((parts[:index] + parts[index + 1:], level), coeff * n * count)
        else:
            if spec is None:
                raise ValueError("alpha(0) needs the module parameters")
            add((parts, level), coeff * spec.lam)
            if level > 1:
                add((parts, level - 1), coeff)
    return out


def _combine(target, vector, factor):
    for key, value in vector.items():
        total = target.get(key, Fraction(0)) + factor * value
        if total:
            target[key] = total
        else:
            target.pop(key, None)


def alpha_zero_matrix(spec, ell):
    """Matrix of ``alpha(0)`` on ``W(ell)``: ``lambda I`` plus the level shift."""
    p = partition_count(ell)
    size = spec.k * p
    return RatMatrix.identity(size).scale(spec.lam) + RatMatrix.shift(size, p)


@dataclass(frozen=True)
class DegreeOperator:
    """Matrix of a mode from ``W(degree)`` to ``W(degree - n)``."""

    degree: int
    n: int
    matrix: RatMatrix

    @property
    def target_degree(self):
        return self.degree - self.n


def _virasoro_image(spec, n, ell, key):
    image = {}
    source = {key: Fraction(1)}
    for j in range(-(-n // 2), ell + 1):
        i = n - j
        coef = Fraction(1, 2) if i == j else Fraction(1)
        _combine(image, alpha_action(i, alpha_action(j, source, spec), spec), coef)
    _combine(image, alpha_action(n, source, spec), -spec.a * (n + 1))
    return image


def virasoro_mode(spec, n, ell):
    """Matrix of ``L^a(n)`` on ``W(ell)``.

    ``L^a(n)`` is the normal-ordered quadratic in the Heisenberg modes
    minus ``a (n + 1) alpha(n)``; for ``n = 0`` it is
    ``sum_m alpha(-m) alpha(m) + alpha(0)^2/2 - a alpha(0)``.

    Parameters
    ----------
    spec : `HeisModuleSpec`
        Module parameters.
    n : `int`
        Mode index.
    ell : `int`
        Source degree.

    Returns
    -------
    operator : `DegreeOperator`
    """
    source = module_basis(spec, ell)
    target = module_basis(spec, ell - n) if ell - n >= 0 else ()
    index = {key: row for row, key in enumerate(target)}
    matrix = RatMatrix.zeros(len(target), len(source))
    for col, key in enumerate(source):
        for image_key, value in _virasoro_image(spec, n, ell, key).items():
            matrix[index[image_key], col] = value
    return DegreeOperator(degree=ell, n=n, matrix=matrix)


def interlocked_shape(matrix, block, k):
    """Whether ``matrix`` is block upper-triangular with ``k`` equal
    diagonal blocks of size ``block``.
    """
    if matrix.shape != (block * k, block * k):
        return False
    for row in range(k):
        for col in range(row + 1):
            piece = matrix[row * block:(row + 1) * block, col * block:(col + 1) * block]
            if col < row and not piece.is_zero():
                return False
            if col == row and piece != matrix[:block, :block]:
                return False
    return True


def _zero_mode(spec, v, ell, l_zero):
    if v == "vacuum":
        return RatMatrix.identity(l_zero.rows)
    if v == "alpha":
        return alpha_zero_matrix(spec, ell)
    return l_zero


def _pstr_degree(spec, v, ell):
    l_zero = virasoro_mode(spec, 0, ell).matrix
    nilpotent = l_zero - RatMatrix.identity(l_zero.rows).scale(spec.lowest_weight + ell)
    return pstr_block_trace(_zero_mode(spec, v, ell, l_zero), nilpotent, partition_count(ell))


def _check_tag(v):
    if v not in VERTEX_TAGS:
        raise ValueError(f"vertex operator tag must be one of {VERTEX_TAGS}, not {v!r}")


def pstr_bruteforce(spec, v="vacuum", ell_max=6):
    """Graded pseudo-trace of ``o(v)`` computed from explicit matrices.

    For each degree the nilpotent part ``N`` of ``L^a(0)`` is formed, and
    the upper-right ``p(ell)`` block of ``o(v) q^N`` is traced.

    Parameters
    ----------
    spec : `HeisModuleSpec`
        Module parameters.
    v : `str`
        ``"vacuum"`` (``o(v)`` the identity), ``"alpha"`` (``alpha(0)``)
        or ``"omega"`` (``L^a(0)``).
    ell_max : `int`
        Truncation degree.

    Returns
    -------
    series : `LogQSeries`
    """
    _check_tag(v)
    polys = parallel_map(functools.partial(_pstr_degree, spec, v), range(ell_max + 1))
    return LogQSeries(spec.offset, polys)


def vacuum_log_coefficients(k):
    """Terms of the vacuum pseudo-trace polynomial for block size ``k``.

    Returns
    -------
    terms : `tuple` of (`int`, `fractions.Fraction`, `int`)
        ``(j, coefficient, e)`` meaning ``coefficient (lambda - a)^e L^j``.
    """
    return tuple(
        (j, Fraction(math.comb(j, k - j - 1), math.factorial(j)) / 2 ** (k - j - 1), 2 * j - k + 1)
        for j in range(k // 2, k)
    )


def alpha_log_coefficients(k):
    """Terms added to ``lambda`` times the vacuum polynomial for ``o(alpha(-1) 1)``;
    same layout as `vacuum_log_coefficients`.
    """
    return tuple(
        (j, Fraction(math.comb(j, k - j - 2), math.factorial(j)) / 2 ** (k - j - 2), 2 * j - k + 2)
        for j in range(max(k - 1, 0) // 2, k - 1)
    )


def _evaluate_terms(terms, shift):
    poly = [Fraction(0)] * (max((j for j, _, _ in terms), default=-1) + 1)
    for j, coeff, power in terms:
        poly[j] += coeff * shift ** power
    return poly


def pstr_closed_form(spec, v="vacuum", ell_max=6):
    """Graded pseudo-trace of ``o(v)`` from its closed form.

    The vacuum series is ``q^offset / prod (1 - q^j)`` times the polynomial
    of `vacuum_log_coefficients` at ``lambda - a``; for ``alpha`` the
    polynomial is ``lambda`` times that plus the one of
    `alpha_log_coefficients`; ``omega`` is the logarithmic derivative
    ``q^(-c/24) q d/dq (q^(c/24) vacuum)``.
    """
    _check_tag(v)
    shift = spec.lam - spec.a
    poly = _evaluate_terms(vacuum_log_coefficients(spec.k), shift)
    if v == "alpha":
        extra = _evaluate_terms(alpha_log_coefficients(spec.k), shift)
        size = max(len(poly), len(extra))
        poly = [spec.lam * (poly[i] if i < len(poly) else 0) + (extra[i] if i < len(extra) else 0)
                for i in range(size)]
    series = LogQSeries(spec.offset, [[partition_count(ell)] for ell in range(ell_max + 1)])
    series = series.times_log_poly(poly)
    if v == "omega":
        charge = spec.central_charge / 24
        series = q_ddq(series.shift(charge)).shift(-charge)
    return series


def graded_dimension(spec, ell_max=6):
    """Ordinary graded dimension ``k p(ell)`` of ``W(a, lambda, k)``."""
    return LogQSeries(spec.offset, [[spec.k * partition_count(ell)] for ell in range(ell_max + 1)])

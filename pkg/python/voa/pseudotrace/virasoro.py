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

"""Routines for Virasoro words, PBW monomials and their action on a
lowest-weight vector.

A partition ``(n_1, ..., n_m)`` with ``n_1 >= ... >= n_m`` stands for the
monomial ``L(-n_1)...L(-n_m)`` applied to the lowest-weight vector of a
Verma module with formal central charge ``c`` and weight ``h``.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby

from sympy.functions.combinatorial.numbers import partition as _sympy_partition
from sympy.utilities.iterables import partitions as _sympy_partitions

from .exact import BivarPoly, format_rat

__all__ = ["partitions_of", "partition_count", "normalize_partition", "partition_text",
           "VirWord", "word_of", "adjoint", "LWVectorExpr", "apply_mode", "act_on_lw",
           "shapovalov_entry", "mode_cache_info"]

_LOG = logging.getLogger(__name__)


@functools.lru_cache(maxsize=None)
def partitions_of(ell):
    """All partitions of ``ell`` in canonical order.

    Parameters
    ----------
    ell : `int`
        Non-negative weight.

    Returns
    -------
    partitions : `tuple` of `tuple` of `int`
        Partitions as non-increasing tuples, sorted lexicographically, so
        the all-ones partition is first and ``(ell,)`` is last. The only
        partition of 0 is the empty tuple.
    """
    if ell < 0:
        raise ValueError(f"cannot partition a negative weight {ell}")
    found = []
    # sympy reuses the yielded dict, so expand it immediately.
    for multiplicities in _sympy_partitions(ell):
        parts = []
        for part in sorted(multiplicities, reverse=True):
            parts.extend([part] * multiplicities[part])
        found.append(tuple(parts))
    return tuple(sorted(found))


def partition_count(ell):
    """Number of partitions of ``ell``; zero for negative ``ell``."""
    if ell < 0:
        return 0
    return int(_sympy_partition(ell))


def normalize_partition(parts):
    """Sort a sequence of positive integers into a partition.

    Raises
    ------
    ValueError
        Raised if any part is not a positive integer.
    """
    parts = tuple(int(p) for p in parts)
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive, got {list(parts)}")
    return tuple(sorted(parts, reverse=True))


def partition_text(parts):
    """Text form such as ``L(-3)L(-2)L(-1)^2``; ``1`` for the empty partition.
    """
    if not parts:
        return "1"
    pieces = []
    for part, run in groupby(parts):
        count = len(list(run))
        pieces.append(f"L(-{part})" + (f"^{count}" if count > 1 else ""))
    return "".join(pieces)


@dataclass(frozen=True)
class VirWord:
    """An ordered product ``L(f_1) L(f_2) ... L(f_m)`` of Virasoro modes.

    The rightmost factor acts first.
    """

    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(f) for f in self.factors))

    def __mul__(self, other):
        return VirWord(self.factors + other.factors)

    def __str__(self):
        return "".join(f"L({f})" for f in self.factors) or "1"


def word_of(parts):
    """The word ``L(-n_1)...L(-n_m)`` of a partition."""
    return VirWord(tuple(-p for p in parts))


def adjoint(word):
    """Apply the anti-involution: reverse the factors and negate each index.

    Parameters
    ----------
    word : `VirWord`
        The word to transform.

    Returns
    -------
    adjoint : `VirWord`
        For example ``L(-2)L(-1)`` maps to ``L(1)L(2)``.
    """
    return VirWord(tuple(-f for f in reversed(word.factors)))


def _coefficient_text(coeff, body):
    if coeff.is_constant():
        value = coeff.constant_value
        if not body:
            return format_rat(value)
        if value == 1:
            return body
        if value == -1:
            return f"-{body}"
        return f"{format_rat(value)}*{body}"
    poly = f"({coeff})"
    return f"{poly}*{body}" if body else poly


class LWVectorExpr:
    """A combination of PBW monomials on the lowest-weight vector.

    Parameters
    ----------
    terms : `dict`, optional
        Map from partitions to coefficients (`BivarPoly` or rationals).
        Zero coefficients are pruned.
    """
    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for parts, coeff in (terms or {}).items():
            if not isinstance(coeff, BivarPoly):
                coeff = BivarPoly.constant(coeff)
            if coeff:
                key = normalize_partition(parts)
                clean[key] = clean.get(key, BivarPoly.zero()) + coeff
        self._terms = {key: value for key, value in clean.items() if value}

    @classmethod
    def _wrap(cls, terms):
        expr = cls.__new__(cls)
        expr._terms = terms
        return expr

    @classmethod
    def vacuum(cls):
        """The lowest-weight vector itself."""
        return cls._wrap({(): BivarPoly.one()})

    @classmethod
    def basis(cls, parts):
        return cls({parts: 1})

    @classmethod
    def from_coordinates(cls, ell, coords):
        """Build the expression with the given coordinates in the canonical
        degree-``ell`` basis.
        """
        basis = partitions_of(ell)
        if len(coords) != len(basis):
            raise ValueError(f"degree {ell} needs {len(basis)} coordinates, got {len(coords)}")
        return cls(dict(zip(basis, coords)))

    @property
    def terms(self):
        return dict(self._terms)

    def degrees(self):
        return sorted({sum(parts) for parts in self._terms})

    def coefficient(self, parts):
        return self._terms.get(tuple(parts), BivarPoly.zero())

    def coordinates(self, ell):
        """Coefficients in the canonical degree-``ell`` basis.

        Raises
        ------
        ValueError
            Raised if the expression has a component outside degree ``ell``.
        """
        stray = [parts for parts in self._terms if sum(parts) != ell]
        if stray:
            raise ValueError(f"expression has terms outside degree {ell}: {stray}")
        return tuple(self.coefficient(parts) for parts in partitions_of(ell))

    def rat_coordinates(self, ell):
        coords = self.coordinates(ell)
        if not all(p.is_constant() for p in coords):
            raise ValueError("expression has non-constant coefficients; evaluate it first")
        return tuple(p.constant_value for p in coords)

    def evaluate(self, c, h):
        """Substitute rational ``(c, h)`` into every coefficient."""
        return LWVectorExpr({parts: coeff.evaluate(c, h) for parts, coeff in self._terms.items()})

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        out = dict(self._terms)
        for parts, coeff in other._terms.items():
            value = out.get(parts, BivarPoly.zero()) + coeff
            if value:
                out[parts] = value
            else:
                out.pop(parts, None)
        return LWVectorExpr._wrap(out)

    def __neg__(self):
        return LWVectorExpr._wrap({parts: -coeff for parts, coeff in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        if not isinstance(factor, BivarPoly):
            factor = BivarPoly.constant(factor)
        return LWVectorExpr._wrap({parts: value for parts, coeff in self._terms.items()
                                   if (value := coeff * factor)})

    def __mul__(self, factor):
        if isinstance(factor, (int, Fraction, BivarPoly)):
            return self.scale(factor)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LWVectorExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def to_text(self):
        """Render as, for example, ``L(-1)^2 - L(-2)`` in canonical order."""
        if not self._terms:
            return "0"
        out = []
        for parts in sorted(self._terms, key=lambda p: (sum(p), p)):
            body = "" if not parts else partition_text(parts)
            piece = _coefficient_text(self._terms[parts], body)
            if not out:
                out.append(piece)
            elif piece.startswith("-"):
                out.append(f" - {piece[1:]}")
            else:
                out.append(f" + {piece}")
        return "".join(out)

    def to_json(self):
        """List of ``{"partition": [...], "coefficient": text}`` items."""
        return [{"partition": list(parts), "coefficient": str(self._terms[parts])}
                for parts in sorted(self._terms, key=lambda p: (sum(p), p))]

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LWVectorExpr({self.to_text()!r})"


def _accumulate(acc, items, factor):
    for parts, coeff in items:
        value = acc.get(parts, BivarPoly.zero()) + coeff * factor
        if value:
            acc[parts] = value
        else:
            acc.pop(parts, None)


@functools.lru_cache(maxsize=None)
def _mode_on_basis(n, parts):
    """``L(n)`` applied to one PBW monomial, as ``(partition, coefficient)``
    pairs in normal order.
    """
    if n == 0:
        return ((parts, BivarPoly.h() + sum(parts)),)
    if not parts:
        return () if n > 0 else (((-n,), BivarPoly.one()),)
    first, rest = parts[0], parts[1:]
    acc = {}
    if n < 0:
        if -n >= first:
            return (((-n,) + parts, BivarPoly.one()),)
        # L(n) L(-first) = L(-first) L(n) + (first + n) L(n - first)
        for inner, coeff in _mode_on_basis(n, rest):
            _accumulate(acc, _mode_on_basis(-first, inner), coeff)
        _accumulate(acc, _mode_on_basis(n - first, rest), BivarPoly.constant(first + n))
    else:
        # L(n) L(-first) = L(-first) L(n) + (n + first) L(n - first) + central term
        for inner, coeff in _mode_on_basis(n, rest):
            _accumulate(acc, _mode_on_basis(-first, inner), coeff)
        _accumulate(acc, _mode_on_basis(n - first, rest), BivarPoly.constant(n + first))
        if n == first:
            central = BivarPoly.c().scale(Fraction(n**3 - n, 12))
            _accumulate(acc, ((rest, BivarPoly.one()),), central)
    return tuple(acc.items())


def mode_cache_info():
    """Hit and miss statistics of the single-mode normal-ordering cache."""
    return _mode_on_basis.cache_info()


def apply_mode(n, expr):
    """Apply the single mode ``L(n)`` to an expression.

    Parameters
    ----------
    n : `int`
        Mode index; positive modes lower the degree by ``n``.
    expr : `LWVectorExpr`
        Vector to act on.

    Returns
    -------
    result : `LWVectorExpr`
        The normal-ordered result.
    """
    acc = {}
    for parts, coeff in expr._terms.items():
        _accumulate(acc, _mode_on_basis(int(n), parts), coeff)
    return LWVectorExpr._wrap(acc)


def act_on_lw(word, expr=None):
    """Apply a word to an expression, rightmost factor first.

    Parameters
    ----------
    word : `VirWord` or sequence of `int`
        The word ``L(f_1)...L(f_m)``.
    expr : `LWVectorExpr`, optional
        Vector to act on; the lowest-weight vector if omitted.

    Returns
    -------
    result : `LWVectorExpr`
    """
    factors = word.factors if isinstance(word, VirWord) else tuple(word)
    result = LWVectorExpr.vacuum() if expr is None else expr
    for factor in reversed(factors):
        result = apply_mode(factor, result)
        if not result:
            break
    return result


@functools.lru_cache(maxsize=None)
def shapovalov_entry(b_i, b_j):
    """The Shapovalov pairing of two PBW monomials of equal weight.

    Parameters
    ----------
    b_i, b_j : `tuple` of `int`
        Partitions of the same weight.

    Returns
    -------
    entry : `BivarPoly`
        The coefficient of the lowest-weight vector in
        ``adjoint(word_of(b_i)) word_of(b_j)`` applied to it.

    Raises
    ------
    ValueError
        Raised if the weights differ.
    """
    b_i, b_j = tuple(b_i), tuple(b_j)
    if sum(b_i) != sum(b_j):
        raise ValueError(f"partitions {list(b_i)} and {list(b_j)} have different weights")
    result = act_on_lw(adjoint(word_of(b_i)), LWVectorExpr.basis(b_j))
    return result.coefficient(())

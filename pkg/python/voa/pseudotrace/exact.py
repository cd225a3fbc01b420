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

"""Routines for exact arithmetic over the rationals and over Q[c, h].
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

import numpy
import sympy

__all__ = ["Rat", "parse_rat", "format_rat", "format_terms", "BivarPoly",
           "RatMatrix", "PolyMatrix", "poly_diff_h", "rat_kernel", "rat_solve",
           "rat_rank", "fraction_free_det"]

_LOG = logging.getLogger(__name__)

Rat = Fraction
"""Exact rational scalar; always reduced, denominator positive."""


def parse_rat(text):
    """Parse a rational written as ``p/q`` or as an integer.

    Parameters
    ----------
    text : `str` or `int` or `fractions.Fraction`
        The value to parse.

    Returns
    -------
    value : `fractions.Fraction`
        The parsed value.

    Raises
    ------
    ValueError
        Raised if ``text`` is not a valid rational.
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"invalid rational {text!r}") from e


def format_rat(value):
    """Format a rational as ``p/q``, omitting ``q`` when it is 1.
    """
    return str(Fraction(value))


def format_terms(terms):
    """Join ``(monomial, coefficient)`` pairs into a signed sum.

    Parameters
    ----------
    terms : iterable of (`str`, `fractions.Fraction`)
        Monomials (the empty string for a constant) with their nonzero
        coefficients, in display order.

    Returns
    -------
    text : `str`
        For example ``"8*h^2 + 4*h"`` or ``"c/2"``; ``"0"`` if empty.
    """
    pieces = []
    for monomial, coeff in terms:
        magnitude = abs(coeff)
        if not monomial:
            body = format_rat(magnitude)
        else:
            body = monomial if magnitude.numerator == 1 else f"{magnitude.numerator}*{monomial}"
            if magnitude.denominator != 1:
                body += f"/{magnitude.denominator}"
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces) if pieces else "0"


def _power_text(name, exponent):
    if exponent == 0:
        return ""
    return name if exponent == 1 else f"{name}^{exponent}"


class BivarPoly:
    """A sparse polynomial with rational coefficients in ``c`` and ``h``.

    Parameters
    ----------
    terms : `dict`, optional
        Map from exponent pairs ``(e_c, e_h)`` to coefficients. Zero
        coefficients are dropped.

    Notes
    -----
    Instances are immutable and hashable, so they can be used as cache
    values and as entries of `numpy` object arrays.
    """
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for key, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                clean[(int(key[0]), int(key[1]))] = coeff
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms):
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def constant(cls, value):
        value = Fraction(value)
        return cls._wrap({(0, 0): value} if value else {})

    @classmethod
    def zero(cls):
        return cls._wrap({})

    @classmethod
    def one(cls):
        return cls._wrap({(0, 0): Fraction(1)})

    @classmethod
    def c(cls):
        """The central charge as a polynomial."""
        return cls._wrap({(1, 0): Fraction(1)})

    @classmethod
    def h(cls):
        """The lowest weight as a polynomial."""
        return cls._wrap({(0, 1): Fraction(1)})

    @property
    def terms(self):
        """A copy of the ``(e_c, e_h) -> coefficient`` map."""
        return dict(self._terms)

    def is_constant(self):
        return not self._terms or set(self._terms) == {(0, 0)}

    @property
    def constant_value(self):
        """The ``c^0 h^0`` coefficient."""
        return self._terms.get((0, 0), Fraction(0))

    @property
    def degree_h(self):
        """Degree in ``h``; -1 for the zero polynomial."""
        return max((eh for _, eh in self._terms), default=-1)

    @property
    def degree_c(self):
        return max((ec for ec, _ in self._terms), default=-1)

    @staticmethod
    def _coerce(other):
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BivarPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            value = out.get(key, 0) + coeff
            if value:
                out[key] = value
            else:
                out.pop(key, None)
        return BivarPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly._wrap({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, factor):
        factor = Fraction(factor)
        if not factor:
            return BivarPoly.zero()
        return BivarPoly._wrap({key: coeff * factor for key, coeff in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, BivarPoly):
            return NotImplemented
        out = {}
        for (ec, eh), x in self._terms.items():
            for (fc, fh), y in other._terms.items():
                key = (ec + fc, eh + fh)
                out[key] = out.get(key, 0) + x * y
        return BivarPoly._wrap({key: coeff for key, coeff in out.items() if coeff})

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = BivarPoly.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def evaluate(self, c, h):
        """Evaluate at rational ``(c, h)``.

        Returns
        -------
        value : `fractions.Fraction`
        """
        c, h = Fraction(c), Fraction(h)
        return sum((coeff * c**ec * h**eh for (ec, eh), coeff in self._terms.items()),
                   Fraction(0))

    def evaluate_at_matrix(self, c, y):
        """Evaluate at rational ``c`` with ``h`` replaced by a square matrix.

        Parameters
        ----------
        c : `fractions.Fraction`
            Central charge.
        y : `RatMatrix`
            Square matrix substituted for ``h``.

        Returns
        -------
        value : `RatMatrix`
        """
        c = Fraction(c)
        size = y.rows
        powers = [RatMatrix.identity(size)]
        for _ in range(max(self.degree_h, 0)):
            powers.append(powers[-1] @ y)
        total = RatMatrix.zeros(size, size)
        for (ec, eh), coeff in self._terms.items():
            total = total + powers[eh].scale(coeff * c**ec)
        return total

    def diff_h(self, order=1):
        """Return ``(d/dh)^order`` of this polynomial."""
        if order < 0:
            raise ValueError(f"derivative order must be non-negative, not {order}")
        out = {}
        for (ec, eh), coeff in self._terms.items():
            if eh >= order:
                out[(ec, eh - order)] = coeff * math.perm(eh, order)
        return BivarPoly._wrap(out)

    def exact_div(self, other):
        """Divide exactly by another polynomial.

        Raises
        ------
        ZeroDivisionError
            Raised if ``other`` is zero.
        ArithmeticError
            Raised if the division leaves a remainder.
        """
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_constant():
            return self.scale(1 / other.constant_value)
        # Lex order with h leading.
        order = (lambda key: (key[1], key[0]))
        lead = max(other._terms, key=order)
        lead_coeff = other._terms[lead]
        remainder = dict(self._terms)
        quotient = {}
        while remainder:
            top = max(remainder, key=order)
            shift = (top[0] - lead[0], top[1] - lead[1])
            if shift[0] < 0 or shift[1] < 0:
                raise ArithmeticError(f"{other} does not divide {self}")
            factor = remainder[top] / lead_coeff
            quotient[shift] = factor
            for (oc, oh), coeff in other._terms.items():
                key = (oc + shift[0], oh + shift[1])
                value = remainder.get(key, 0) - factor * coeff
                if value:
                    remainder[key] = value
                else:
                    remainder.pop(key, None)
        return BivarPoly._wrap(quotient)

    def as_sympy(self, c=None, h=None):
        """Convert to a `sympy` expression in the given (or default) symbols.
        """
        c = c if c is not None else sympy.Symbol("c")
        h = h if h is not None else sympy.Symbol("h")
        return sympy.Add(*(sympy.Rational(coeff.numerator, coeff.denominator) * c**ec * h**eh
                           for (ec, eh), coeff in self._terms.items()))

    def __str__(self):
        ordered = sorted(self._terms.items(), key=lambda item: (-item[0][1], -item[0][0]))
        return format_terms(
            ("*".join(filter(None, (_power_text("c", ec), _power_text("h", eh)))), coeff)
            for (ec, eh), coeff in ordered
        )

    def __repr__(self):
        return f"BivarPoly({str(self)!r})"


def poly_diff_h(p, order=1):
    """Return ``(d/dh)^order p`` exactly.

    Parameters
    ----------
    p : `BivarPoly`
        Polynomial to differentiate.
    order : `int`
        Non-negative derivative order.

    Returns
    -------
    derivative : `BivarPoly`
    """
    return p.diff_h(order)


def _object_array(rows, cols, fill):
    array = numpy.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            array[i, j] = fill
    return array


class RatMatrix:
    """A dense matrix of exact rationals backed by a `numpy` object array.

    Parameters
    ----------
    entries : array-like
        Nested sequence (or 2-d array) of values convertible to
        `fractions.Fraction`.
    """
    def __init__(self, entries):
        array = numpy.array(entries, dtype=object)
        if array.ndim != 2:
            if array.size == 0:
                array = array.reshape(0, 0)
            else:
                raise ValueError(f"matrix entries must be two-dimensional, got shape {array.shape}")
        for index in numpy.ndindex(array.shape):
            array[index] = Fraction(array[index])
        self._array = array

    @classmethod
    def _wrap(cls, array):
        matrix = cls.__new__(cls)
        matrix._array = array
        return matrix

    @classmethod
    def zeros(cls, rows, cols):
        return cls._wrap(_object_array(rows, cols, Fraction(0)))

    @classmethod
    def identity(cls, size):
        matrix = cls.zeros(size, size)
        for i in range(size):
            matrix._array[i, i] = Fraction(1)
        return matrix

    @classmethod
    def shift(cls, size, offset=1):
        """Matrix with ones on superdiagonal ``offset``."""
        matrix = cls.zeros(size, size)
        for i in range(size - offset):
            matrix._array[i, i + offset] = Fraction(1)
        return matrix

    @classmethod
    def from_blocks(cls, blocks):
        return cls._wrap(numpy.block([[block._array for block in row] for row in blocks]))

    @classmethod
    def from_rows(cls, rows, cols):
        """Stack row vectors; ``cols`` fixes the width when there are none."""
        matrix = cls.zeros(len(rows), cols)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                matrix._array[i, j] = Fraction(value)
        return matrix

    @property
    def rows(self):
        return self._array.shape[0]

    @property
    def cols(self):
        return self._array.shape[1]

    @property
    def shape(self):
        return self._array.shape

    @property
    def array(self):
        """A copy of the underlying object array."""
        return self._array.copy()

    @property
    def T(self):
        return RatMatrix._wrap(self._array.T.copy())

    def __getitem__(self, index):
        value = self._array[index]
        if isinstance(value, numpy.ndarray):
            return RatMatrix._wrap(value.copy()) if value.ndim == 2 else tuple(value)
        return value

    def __setitem__(self, index, value):
        self._array[index] = Fraction(value)

    def tolist(self):
        return self._array.tolist()

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(numpy.all(self._array == other._array))

    def __add__(self, other):
        return RatMatrix._wrap(self._array + other._array)

    def __sub__(self, other):
        return RatMatrix._wrap(self._array - other._array)

    def __neg__(self):
        return RatMatrix._wrap(-self._array)

    def scale(self, factor):
        return RatMatrix._wrap(self._array * Fraction(factor))

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            if self.cols == 0:
                return RatMatrix.zeros(self.rows, other.cols)
            return RatMatrix._wrap(self._array @ other._array)
        vector = numpy.array([Fraction(x) for x in other], dtype=object)
        if len(vector) != self.cols:
            raise ValueError(f"cannot multiply {self.shape} by a vector of length {len(vector)}")
        if self.cols == 0:
            return tuple(Fraction(0) for _ in range(self.rows))
        return tuple(self._array @ vector)

    def is_zero(self):
        return not any(value for value in self._array.flat)

    def trace(self):
        return sum((self._array[i, i] for i in range(min(self.shape))), Fraction(0))

    def rref(self):
        """Reduced row echelon form with leftmost pivots.

        Returns
        -------
        reduced : `RatMatrix`
            The reduced matrix.
        pivots : `list` of `int`
            Pivot column of each nonzero row.
        """
        a = self._array.copy()
        rows, cols = a.shape
        pivots = []
        r = 0
        for col in range(cols):
            if r == rows:
                break
            found = next((i for i in range(r, rows) if a[i, col] != 0), None)
            if found is None:
                continue
            if found != r:
                a[[r, found]] = a[[found, r]]
            a[r] = a[r] / a[r, col]
            for i in range(rows):
                if i != r and a[i, col] != 0:
                    a[i] = a[i] - a[i, col] * a[r]
            pivots.append(col)
            r += 1
        return RatMatrix._wrap(a), pivots

    def rank(self):
        return len(self.rref()[1])

    def __repr__(self):
        return f"RatMatrix({[[format_rat(x) for x in row] for row in self.tolist()]})"


class PolyMatrix:
    """A dense matrix of `BivarPoly` entries.

    Parameters
    ----------
    entries : nested sequence
        Rows of polynomials (or rationals, promoted to constants).
    """
    def __init__(self, entries):
        rows = [list(row) for row in entries]
        width = len(rows[0]) if rows else 0
        if any(len(row) != width for row in rows):
            raise ValueError("polynomial matrix rows must have equal length")
        array = _object_array(len(rows), width, BivarPoly.zero())
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                array[i, j] = value if isinstance(value, BivarPoly) else BivarPoly.constant(value)
        self._array = array

    @classmethod
    def _wrap(cls, array):
        matrix = cls.__new__(cls)
        matrix._array = array
        return matrix

    @classmethod
    def zeros(cls, rows, cols):
        return cls._wrap(_object_array(rows, cols, BivarPoly.zero()))

    @classmethod
    def identity(cls, size):
        matrix = cls.zeros(size, size)
        for i in range(size):
            matrix._array[i, i] = BivarPoly.one()
        return matrix

    @property
    def rows(self):
        return self._array.shape[0]

    @property
    def cols(self):
        return self._array.shape[1]

    @property
    def shape(self):
        return self._array.shape

    def __getitem__(self, index):
        return self._array[index]

    def __setitem__(self, index, value):
        self._array[index] = value if isinstance(value, BivarPoly) else BivarPoly.constant(value)

    def tolist(self):
        return self._array.tolist()

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            x == y for x, y in zip(self._array.flat, other._array.flat))

    def __matmul__(self, other):
        return PolyMatrix._wrap(self._array @ other._array)

    def map(self, func):
        """Apply ``func`` entrywise, returning a new matrix."""
        out = _object_array(self.rows, self.cols, BivarPoly.zero())
        for index in numpy.ndindex(self.shape):
            out[index] = func(self._array[index])
        return PolyMatrix._wrap(out)

    def diff_h(self, order=1):
        return self.map(lambda p: p.diff_h(order))

    def scale(self, factor):
        return self.map(lambda p: p.scale(factor))

    def evaluate(self, c, h):
        """Evaluate every entry at rational ``(c, h)``.

        Returns
        -------
        matrix : `RatMatrix`
        """
        out = _object_array(self.rows, self.cols, Fraction(0))
        for index in numpy.ndindex(self.shape):
            out[index] = self._array[index].evaluate(c, h)
        return RatMatrix._wrap(out)

    def is_symmetric(self):
        return self.rows == self.cols and all(
            self._array[i, j] == self._array[j, i]
            for i in range(self.rows) for j in range(i + 1, self.cols))

    def as_sympy(self):
        return sympy.Matrix(self.rows, self.cols, [p.as_sympy() for p in self._array.flat])

    def text_rows(self):
        """Entries as nested lists of polynomial text."""
        return [[str(p) for p in row] for row in self._array.tolist()]

    def __repr__(self):
        return f"PolyMatrix({self.text_rows()})"


def rat_kernel(m):
    """Return a basis of the right kernel of a rational matrix.

    Parameters
    ----------
    m : `RatMatrix`
        The matrix.

    Returns
    -------
    basis : `list` of `tuple` of `fractions.Fraction`
        One vector per free column (in increasing column order), with that
        free variable set to 1, the other free variables 0 and the pivot
        variables solved. Empty if the kernel is trivial.
    """
    reduced, pivots = m.rref()
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vector = [Fraction(0)] * m.cols
        vector[free] = Fraction(1)
        for row, col in enumerate(pivots):
            vector[col] = -reduced[row, free]
        basis.append(tuple(vector))
    return basis


def rat_solve(m, rhs):
    """Return one solution of ``m b = rhs``, or `None` if inconsistent.

    Parameters
    ----------
    m : `RatMatrix`
        Coefficient matrix.
    rhs : sequence of `fractions.Fraction`
        Right-hand side.

    Returns
    -------
    solution : `tuple` of `fractions.Fraction` or `None`
        The solution with every free variable set to 0 (leftmost pivot
        elimination), or `None` when the augmented column holds a pivot.
    """
    rhs = [Fraction(x) for x in rhs]
    if len(rhs) != m.rows:
        raise ValueError(f"right-hand side has length {len(rhs)}, expected {m.rows}")
    augmented = RatMatrix._wrap(numpy.concatenate(
        [m._array, numpy.array(rhs, dtype=object).reshape(m.rows, 1)], axis=1))
    reduced, pivots = augmented.rref()
    if pivots and pivots[-1] == m.cols:
        return None
    solution = [Fraction(0)] * m.cols
    for row, col in enumerate(pivots):
        solution[col] = reduced[row, m.cols]
    return tuple(solution)


def rat_rank(m):
    """Rank of a rational matrix."""
    return m.rank()


def fraction_free_det(m):
    """Determinant of a square polynomial matrix by Bareiss elimination.

    Every intermediate entry is a minor of ``m``, so each division by the
    previous pivot is exact over Q[c, h].

    Parameters
    ----------
    m : `PolyMatrix`
        Square matrix.

    Returns
    -------
    det : `BivarPoly`

    Raises
    ------
    ValueError
        Raised if ``m`` is not square.
    """
    if m.rows != m.cols:
        raise ValueError(f"determinant needs a square matrix, got {m.shape}")
    n = m.rows
    if n == 0:
        return BivarPoly.one()
    a = [list(row) for row in m.tolist()]
    sign = 1
    previous = BivarPoly.one()
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return BivarPoly.zero()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                value = a[i][j] * pivot
                if a[i][k]:
                    value = value - a[i][k] * a[k][j]
                a[i][j] = value.exact_div(previous)
        previous = pivot
        _LOG.debug("Bareiss step %d of %d done", k + 1, n - 1)
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det

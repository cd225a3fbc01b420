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

"""Generation of random exact objects for property checks.
"""

from fractions import Fraction

import numpy

from .exact import BivarPoly, PolyMatrix
from .qseries import LogQSeries
from .shapovalov import c_of_t, curves_through, h_rs_of_t

__all__ = ["default_rng", "random_rat", "random_poly", "random_poly_matrix",
           "random_curve_sample", "random_logq_series"]

CURVE_T_CHOICES = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-3), Fraction(3, 2),
                   Fraction(-5, 3), Fraction(7, 2), Fraction(-2, 5), Fraction(4))
"""Curve parameters drawn by `random_curve_sample`; includes both of +1 and -1."""


def default_rng(seed=None):
    """A `numpy.random.Generator`; seeded for reproducible checks."""
    return numpy.random.default_rng(seed)


def random_rat(rng, max_numerator=9, max_denominator=4, nonzero=False):
    """Provide a random rational with bounded numerator and denominator.
    """
    while True:
        value = Fraction(int(rng.integers(-max_numerator, max_numerator + 1)),
                         int(rng.integers(1, max_denominator + 1)))
        if value or not nonzero:
            return value


def random_poly(rng, terms=3, max_degree=2):
    """Provide a random `BivarPoly` with up to ``terms`` monomials of
    degree at most ``max_degree`` in each variable.
    """
    return BivarPoly({(int(rng.integers(0, max_degree + 1)), int(rng.integers(0, max_degree + 1))):
                      random_rat(rng) for _ in range(terms)})


def random_poly_matrix(rng, size, terms=2, max_degree=1):
    """Provide a random square `PolyMatrix`."""
    return PolyMatrix([[random_poly(rng, terms, max_degree) for _ in range(size)]
                       for _ in range(size)])


def random_curve_sample(rng, max_rs=4, t_choices=CURVE_T_CHOICES, attempts=200):
    """Provide ``(r, s, t)`` with ``r >= s`` whose curve point lies on no
    other curve of degree at most ``rs``.

    Raises
    ------
    RuntimeError
        Raised if no acceptable sample is found within ``attempts`` draws.
    """
    pairs = [(r, s) for s in range(1, max_rs + 1) for r in range(s, max_rs // s + 1)]
    for _ in range(attempts):
        r, s = pairs[int(rng.integers(0, len(pairs)))]
        t = t_choices[int(rng.integers(0, len(t_choices)))]
        if curves_through(c_of_t(t), h_rs_of_t(r, s, t), r * s) == [(r, s)]:
            return r, s, t
    raise RuntimeError(f"no isolated curve sample found in {attempts} draws")


def random_logq_series(rng, ell_max=3, log_degree=2, offset=None):
    """Provide a random `LogQSeries` with small rational coefficients."""
    offset = random_rat(rng, 5, 24) if offset is None else offset
    return LogQSeries(offset, [[random_rat(rng, 4, 3) for _ in range(log_degree + 1)]
                               for _ in range(ell_max + 1)])

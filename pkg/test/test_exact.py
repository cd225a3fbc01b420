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

import unittest
from fractions import Fraction

import sympy

from voa.pseudotrace import (BivarPoly, PolyMatrix, RatMatrix, default_rng, format_rat,
                             fraction_free_det, parse_rat, poly_diff_h, random_poly,
                             random_poly_matrix, rat_kernel, rat_rank, rat_solve)

C, H = BivarPoly.c(), BivarPoly.h()


class RationalTextTestCase(unittest.TestCase):
    """Test parsing and formatting of exact rationals.
    """

    def test_parse(self):
        self.assertEqual(parse_rat("-5/4"), Fraction(-5, 4))
        self.assertEqual(parse_rat(" 3 "), Fraction(3))
        self.assertEqual(parse_rat(7), Fraction(7))
        self.assertEqual(parse_rat("6/4"), Fraction(3, 2))

    def test_parse_rejects_garbage(self):
        for text in ("1/0", "abc", "1.5.2", ""):
            with self.assertRaises(ValueError):
                parse_rat(text)

    def test_format(self):
        self.assertEqual(format_rat(Fraction(-4, 3)), "-4/3")
        self.assertEqual(format_rat(Fraction(6, 3)), "2")


class BivarPolyTestCase(unittest.TestCase):
    """Test sparse polynomial arithmetic in c and h.
    """

    def test_text(self):
        self.assertEqual(str(8 * H**2 + 4 * H), "8*h^2 + 4*h")
        self.assertEqual(str(4 * H + C.scale(Fraction(1, 2))), "4*h + c/2")
        self.assertEqual(str(H.scale(Fraction(3, 2))), "3*h/2")
        self.assertEqual(str(BivarPoly.zero()), "0")
        self.assertEqual(str(-H + 1), "-h + 1")

    def test_arithmetic(self):
        p = (C + H) * (C - H)
        self.assertEqual(p, C**2 - H**2)
        self.assertEqual(p - p, BivarPoly.zero())
        self.assertFalse(p - p)
        self.assertEqual(2 - H, -(H - 2))
        self.assertEqual((H + 1) ** 0, BivarPoly.one())
        self.assertTrue(BivarPoly.constant(5).is_constant())
        self.assertEqual(BivarPoly.constant(5).constant_value, 5)

    def test_degrees(self):
        p = C**2 * H + H**3
        self.assertEqual(p.degree_h, 3)
        self.assertEqual(p.degree_c, 2)

    def test_evaluate(self):
        p = 8 * H**2 + 4 * H + C * H
        self.assertEqual(p.evaluate(1, Fraction(1, 4)), Fraction(7, 4))

    def test_diff_h(self):
        p = C * H**3 + H**2 + 7
        self.assertEqual(p.diff_h(), 3 * C * H**2 + 2 * H)
        self.assertEqual(p.diff_h(2), 6 * C * H + 2)
        self.assertEqual(poly_diff_h(p, 4), BivarPoly.zero())
        with self.assertRaises(ValueError):
            p.diff_h(-1)

    def test_exact_div(self):
        divisor = H**2 + C * H - 3
        quotient = C**2 + H - 1
        self.assertEqual((divisor * quotient).exact_div(divisor), quotient)
        self.assertEqual((6 * H).exact_div(3), 2 * H)
        with self.assertRaises(ArithmeticError):
            (H**2 + 1).exact_div(H + 1)
        with self.assertRaises(ZeroDivisionError):
            H.exact_div(BivarPoly.zero())

    def test_random_products_divide(self):
        """Products of random polynomials divide back exactly."""
        rng = default_rng(11)
        for _ in range(20):
            first, second = random_poly(rng), random_poly(rng)
            if not second:
                continue
            self.assertEqual((first * second).exact_div(second), first)

    def test_sympy_agrees(self):
        rng = default_rng(3)
        c, h = sympy.symbols("c h")
        for _ in range(10):
            first, second = random_poly(rng), random_poly(rng)
            product = (first * second).as_sympy(c, h)
            self.assertEqual(sympy.expand(product - first.as_sympy(c, h) * second.as_sympy(c, h)), 0)


class RatMatrixTestCase(unittest.TestCase):
    """Test exact rational linear algebra.
    """

    def setUp(self):
        self.singular = RatMatrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])

    def test_rank(self):
        self.assertEqual(rat_rank(self.singular), 2)
        self.assertEqual(rat_rank(RatMatrix.identity(4)), 4)
        self.assertEqual(rat_rank(RatMatrix.zeros(2, 3)), 0)

    def test_rref(self):
        reduced, pivots = self.singular.rref()
        self.assertEqual(pivots, [0, 1])
        self.assertEqual(reduced, RatMatrix([[1, 0, 1], [0, 1, 1], [0, 0, 0]]))

    def test_kernel(self):
        basis = rat_kernel(self.singular)
        self.assertEqual(basis, [(Fraction(-1), Fraction(-1), Fraction(1))])
        for vector in basis:
            self.assertEqual(self.singular @ vector, (0, 0, 0))
        self.assertEqual(rat_kernel(RatMatrix.identity(3)), [])

    def test_solve(self):
        solution = rat_solve(self.singular, [4, 8, 2])
        self.assertEqual(self.singular @ solution, (4, 8, 2))
        self.assertIsNone(rat_solve(self.singular, [1, 0, 0]))
        with self.assertRaises(ValueError):
            rat_solve(self.singular, [1, 2])

    def test_shift_and_blocks(self):
        shift = RatMatrix.shift(3)
        self.assertTrue((shift @ shift @ shift).is_zero())
        self.assertEqual((shift @ shift)[0, 2], 1)
        blocks = RatMatrix.from_blocks([[RatMatrix.identity(2), RatMatrix.zeros(2, 1)],
                                        [RatMatrix.zeros(1, 2), RatMatrix.identity(1)]])
        self.assertEqual(blocks, RatMatrix.identity(3))
        self.assertEqual(blocks.trace(), 3)

    def test_evaluate_at_jordan_block(self):
        """Substituting h by hI + E gives Taylor coefficients above the
        diagonal.
        """
        p = H**3 + C * H
        y = RatMatrix.identity(3).scale(2) + RatMatrix.shift(3)
        value = p.evaluate_at_matrix(5, y)
        self.assertEqual(value[0, 0], p.evaluate(5, 2))
        self.assertEqual(value[0, 1], p.diff_h().evaluate(5, 2))
        self.assertEqual(value[0, 2], p.diff_h(2).evaluate(5, 2) / 2)
        self.assertEqual(value[2, 0], 0)


class DeterminantTestCase(unittest.TestCase):
    """Test the fraction-free determinant against sympy.
    """

    def test_two_by_two(self):
        m = PolyMatrix([[8 * H**2 + 4 * H, 6 * H], [6 * H, 4 * H + C.scale(Fraction(1, 2))]])
        det = fraction_free_det(m)
        self.assertEqual(str(det), "32*h^3 + 4*c*h^2 - 20*h^2 + 2*c*h")

    def test_random_matrices(self):
        rng = default_rng(5)
        for size in (1, 2, 3, 4):
            m = random_poly_matrix(rng, size)
            expected = sympy.expand(m.as_sympy().det(method="berkowitz"))
            self.assertEqual(sympy.expand(fraction_free_det(m).as_sympy() - expected), 0)

    def test_needs_pivot_swap(self):
        m = PolyMatrix([[0, H], [C, 1]])
        self.assertEqual(fraction_free_det(m), -(C * H))

    def test_edge_cases(self):
        self.assertEqual(fraction_free_det(PolyMatrix([])), BivarPoly.one())
        self.assertEqual(fraction_free_det(PolyMatrix([[H, H], [H, H]])), BivarPoly.zero())
        with self.assertRaises(ValueError):
            fraction_free_det(PolyMatrix([[H, C]]))

    def test_evaluate_commutes(self):
        m = PolyMatrix([[H, C], [C * H, H**2 - 1]])
        self.assertEqual(m.evaluate(2, 3), RatMatrix([[3, 2], [6, 8]]))
        self.assertFalse(m.is_symmetric())
        self.assertEqual(m.diff_h()[1, 1], 2 * H)


if __name__ == "__main__":
    unittest.main()

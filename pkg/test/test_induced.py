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

import os
import unittest
from fractions import Fraction

from voa.pseudotrace import (KernelDimensionError, KernelVector, LWVectorExpr, block_det_check,
                             block_gram, c_of_t, classify, default_rng, degree_next_check,
                             h_rs_of_t, is_singular, jacobi_criterion, kappa, kernel_J,
                             kernel_J_cascade, partition_count, random_curve_sample,
                             random_rat, same_span, singular_vector, socle_radical_dims)

SLOW_TESTS_ENV = "VOA_PSEUDOTRACE_SLOW_TESTS"


def slow_tests_enabled():
    return bool(os.environ.get(SLOW_TESTS_ENV))


def s21(t):
    return LWVectorExpr({(1, 1): 1, (2,): t})


def s31(t):
    return LWVectorExpr({(1, 1, 1): 1, (2, 1): 4 * t, (3,): 4 * t**2 + 2 * t})


def s41(t):
    return LWVectorExpr({(1, 1, 1, 1): 1, (2, 1, 1): 10 * t, (2, 2): 9 * t**2,
                         (3, 1): 24 * t**2 + 10 * t, (4,): 36 * t**3 + 24 * t**2 + 6 * t})


def s22(t):
    u = t + 1 / t
    return LWVectorExpr({(1, 1, 1, 1): 1, (2, 1, 1): 2 * u, (2, 2): u**2 - 4,
                         (3, 1): 2 * u + 6, (4,): 3 * u + 6})


class BlockGramTestCase(unittest.TestCase):
    """Test Gram matrices of the induced Jordan-block modules.
    """

    def test_degree_one(self):
        gram = block_gram(1, 3)
        self.assertEqual(gram.matrix.text_rows(),
                         [["2*h", "2", "0"], ["0", "2*h", "2"], ["0", "0", "2*h"]])
        self.assertEqual(gram.basis, (((1,), 1), ((1,), 2), ((1,), 3)))

    def test_degree_two(self):
        rows = block_gram(2, 3).matrix.text_rows()
        self.assertEqual(rows[0], ["8*h^2 + 4*h", "16*h + 4", "8", "6*h", "6", "0"])
        self.assertEqual(rows[3], ["6*h", "6", "0", "4*h + c/2", "4", "0"])
        self.assertEqual(rows[5], ["0", "0", "6*h", "0", "0", "4*h + c/2"])

    def test_k_one_is_gram(self):
        self.assertEqual(block_gram(2, 1).matrix.text_rows(),
                         [["8*h^2 + 4*h", "6*h"], ["6*h", "4*h + c/2"]])

    def test_direct_agrees_with_derivatives(self):
        """Substituting the Jordan matrix gives the same evaluated matrix."""
        rng = default_rng(17)
        for ell, k in ((1, 3), (2, 2), (3, 3), (4, 2)):
            c, h = random_rat(rng), random_rat(rng)
            self.assertEqual(block_gram(ell, k, c, h).matrix,
                             block_gram(ell, k, c, h, mode="direct").matrix)

    def test_bad_arguments(self):
        with self.assertRaises(ValueError):
            block_gram(2, 0)
        with self.assertRaises(ValueError):
            block_gram(2, 2, c=1)
        with self.assertRaises(ValueError):
            block_gram(2, 2, mode="direct")
        with self.assertRaises(ValueError):
            block_gram(2, 2, 1, 0, mode="sideways")


class BlockDeterminantTestCase(unittest.TestCase):
    """Test det of the block Gram matrix against the k-th power of the
    Gram determinant.
    """

    def _cases(self):
        for ell in range(1, 5):
            for k in range(1, 5):
                if (ell, k) != (4, 4) or slow_tests_enabled():
                    yield ell, k

    def test_power_identity(self):
        for ell, k in self._cases():
            with self.subTest(ell=ell, k=k):
                self.assertTrue(block_det_check(ell, k).equal)


class KernelTestCase(unittest.TestCase):
    """Test the kernel submodule at fixed degrees.
    """

    def test_case_one_point(self):
        vectors = kernel_J(2, 2, 1, Fraction(1, 4), cross_check=True)
        self.assertEqual(len(vectors), 2)
        basis = [v.coordinates for v in vectors]
        socle = KernelVector.from_components(2, 2, {1: s21(-1)})
        lifted = KernelVector.from_components(
            2, 2, {2: s21(-1), 1: LWVectorExpr({(1, 1): Fraction(-4, 3)})})
        self.assertTrue(same_span(basis, [socle.coordinates, lifted.coordinates]))

    def test_anomalous_central_charge(self):
        vectors = kernel_J(3, 2, -2, 0, cross_check=True)
        self.assertEqual(len(vectors), 3)
        extra = KernelVector.from_components(
            3, 2, {2: LWVectorExpr({(1, 1, 1): 1, (2, 1): -2}), 1: LWVectorExpr.basis((3,))})
        basis = [v.coordinates for v in vectors]
        self.assertTrue(same_span(basis, basis + [extra.coordinates]))
        self.assertEqual(extra.leading_level, 2)
        self.assertEqual(extra.to_text(), "[L(-3)]u_1 + [L(-1)^3 - 2*L(-2)L(-1)]u_2")

    def test_generic_central_charge(self):
        self.assertEqual(len(kernel_J(3, 2, 5, 0)), 2)
        self.assertEqual(len(kernel_J(3, 3, 5, 0)), 2)

    def test_generic_point(self):
        self.assertEqual(kernel_J(2, 3, Fraction(1, 2), Fraction(1, 3)), [])

    def test_cascade_matches_direct(self):
        for ell, k, c, h in ((2, 2, 1, Fraction(1, 4)), (3, 3, -2, 0), (2, 3, 25, Fraction(-5, 4)),
                             (3, 2, 1, Fraction(1, 4)), (4, 2, 1, 1)):
            direct = [v.coordinates for v in kernel_J(ell, k, c, h)]
            cascade = [v.coordinates for v in kernel_J_cascade(ell, k, c, h)]
            self.assertTrue(same_span(direct, cascade))

    def test_lower_stays_in_kernel(self):
        """L(-1) maps the kernel at one degree into the next."""
        here = kernel_J(2, 2, 1, Fraction(1, 4))
        above = [v.coordinates for v in kernel_J(3, 2, 1, Fraction(1, 4))]
        for vector in here:
            self.assertTrue(same_span(above, above + [vector.lower().coordinates]))

    def test_degree_next(self):
        check = degree_next_check(1, Fraction(1, 4), 2)
        self.assertEqual(check.degree, 2)
        self.assertTrue(check.equal)
        self.assertEqual(check.image_dim, check.dim_j)
        with self.assertRaises(ValueError):
            degree_next_check(Fraction(1, 2), Fraction(1, 5), 2, bound=6)


class SingularVectorTestCase(unittest.TestCase):
    """Test singular vectors on the curves of degree up to four.
    """

    def _check(self, r, s, t, expected):
        vector = singular_vector(r, s, t)
        self.assertEqual(vector, expected)
        self.assertTrue(is_singular(vector, c_of_t(t), h_rs_of_t(r, s, t)))

    def test_degree_two(self):
        for t in (Fraction(-1), Fraction(1), Fraction(-2), Fraction(3, 2)):
            self._check(2, 1, t, s21(t))
        self.assertEqual(singular_vector(2, 1, -1).to_text(), "L(-1)^2 - L(-2)")

    def test_degree_three(self):
        for t in (Fraction(-1), Fraction(2), Fraction(-5, 3)):
            self._check(3, 1, t, s31(t))

    def test_degree_four(self):
        for t in (Fraction(-1), Fraction(3), Fraction(-7, 2)):
            self._check(4, 1, t, s41(t))
        for t in (Fraction(3), Fraction(5, 2), Fraction(-3)):
            self._check(2, 2, t, s22(t))

    def test_not_singular_off_curve(self):
        self.assertFalse(is_singular(s21(-1), 1, Fraction(1, 3)))

    def test_point_on_two_curves(self):
        with self.assertRaises(KernelDimensionError):
            singular_vector(3, 1, Fraction(-1, 2))


class KappaTestCase(unittest.TestCase):
    """Test the depth of the derivative cascade.
    """

    def test_c_one(self):
        result = kappa(2, 1, -1, cap=6)
        self.assertEqual(result.kappa, 2)
        self.assertFalse(result.at_least)
        self.assertEqual((result.c, result.h), (1, Fraction(1, 4)))
        self.assertEqual([rep.to_text() for rep in result.representatives], ["-4/3*L(-1)^2"])
        self.assertEqual(result.text, "2")

    def test_c_twenty_five(self):
        result = kappa(2, 1, 1, cap=6)
        self.assertEqual(result.kappa, 2)
        self.assertEqual((result.c, result.h), (25, Fraction(-5, 4)))
        self.assertEqual([rep.to_text() for rep in result.representatives], ["4/3*L(-1)^2"])

    def test_cap_reached(self):
        result = kappa(2, 1, -1, cap=2)
        self.assertTrue(result.at_least)
        self.assertEqual(result.text, ">=2")

    def test_preconditions(self):
        with self.assertRaises(ValueError):
            kappa(2, 2, -1)
        with self.assertRaises(ValueError):
            kappa(2, 1, 0)
        with self.assertRaises(ValueError):
            kappa(2, 1, 1, cap=0)


class ClassifyTestCase(unittest.TestCase):
    """Test the interlocked classification on a grid of points.
    """

    grid = [
        (1, Fraction(1, 4), 1, "1(ii)", True),
        (1, Fraction(1, 4), 2, "1(ii)", True),
        (1, Fraction(1, 4), 3, "1(ii)", False),
        (25, Fraction(-5, 4), 2, "1(ii)", True),
        (25, Fraction(-5, 4), 3, "1(ii)", False),
        (-2, 0, 1, "1(i)", True),
        (-2, 0, 2, "1(i)", False),
        (1, 0, 2, "1(i)", False),
        (Fraction(1, 2), Fraction(1, 16), 2, "2-or-deeper", False),
    ] + [(Fraction(1, 2), Fraction(1, 5), k, "0", True) for k in range(1, 6)]

    def test_grid(self):
        for c, h, k, case, interlocked in self.grid:
            with self.subTest(c=c, h=h, k=k):
                found = classify(c, h, k)
                self.assertEqual(found.case, case)
                self.assertEqual(found.interlocked, interlocked)

    def test_details(self):
        found = classify(1, Fraction(1, 4), 2)
        self.assertEqual(found.minimal, (2, 1))
        self.assertEqual(found.kappa.kappa, 2)
        self.assertEqual(found.t_values, (Fraction(-1),))
        self.assertEqual(found.curves[0], (2, 1))
        generic = classify(Fraction(1, 2), Fraction(1, 5), 3)
        self.assertIsNone(generic.minimal)
        self.assertEqual(generic.curves, ())

    def test_bad_block_size(self):
        with self.assertRaises(ValueError):
            classify(1, 0, 0)


class SocleRadicalTestCase(unittest.TestCase):
    """Test socle and radical dimensions of the quotient.
    """

    def test_case_one_point(self):
        rows = socle_radical_dims(1, Fraction(1, 4), 2, 3)
        self.assertEqual([(r.dim_w, r.dim_soc, r.dim_rad) for r in rows],
                         [(2, 1, 1), (2, 1, 1), (2, 1, 1), (4, 2, 2)])
        self.assertTrue(all(r.regular for r in rows))

    def test_generic_point(self):
        rows = socle_radical_dims(Fraction(1, 2), Fraction(1, 5), 3, 3)
        for row in rows:
            self.assertEqual(row.dim_w, 3 * partition_count(row.degree))
            self.assertEqual(row.dim_rad, 2 * row.dim_soc)


class JacobiCriterionTestCase(unittest.TestCase):
    """Test the derivative criterion against its closed-form predicate.
    """

    def test_special_points(self):
        self.assertTrue(jacobi_criterion(2, 1, -1).consistent)
        self.assertTrue(jacobi_criterion(2, 1, 1).consistent)
        self.assertFalse(jacobi_criterion(2, 1, 2).consistent)
        self.assertFalse(jacobi_criterion(2, 2, 3).consistent)

    def test_random_samples(self):
        rng = default_rng(2024)
        for _ in range(20):
            r, s, t = random_curve_sample(rng, max_rs=4)
            with self.subTest(r=r, s=s, t=t):
                criterion = jacobi_criterion(r, s, t)
                self.assertTrue(criterion.agrees)
                self.assertEqual(criterion.phi_derivative,
                                 Fraction(s * s - r * r) * (t * t - 1) / (4 * t))


if __name__ == "__main__":
    unittest.main()

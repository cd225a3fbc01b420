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

from voa.pseudotrace import (LogQSeries, NotInterlockedError, OffsetMismatchError, RatMatrix,
                             default_rng, eta_inverse, euler_product, log_poly_text,
                             normalize_case, partition_count, q_ddq, random_logq_series,
                             vir_L_trace_case1, vir_pstr_bruteforce, vir_pstr_closed,
                             vir_verma_trace)
from voa.pseudotrace.qseries import _level_zero_action


class LogQSeriesTestCase(unittest.TestCase):
    """Test truncated series in q with polynomial coefficients in log q.
    """

    def test_text(self):
        self.assertEqual(log_poly_text((Fraction(1), Fraction(-1, 2), Fraction(3))),
                         "1 - L/2 + 3*L^2")
        self.assertEqual(log_poly_text(()), "0")
        series = LogQSeries(0, [[1], [], [0, 2]])
        self.assertEqual(str(series), "(1)*q^(0) + (2*L)*q^(2) + O(q^(3))")
        self.assertEqual(series.log_degree, 1)
        self.assertEqual(series.term(2, 1), 2)
        self.assertEqual(series.term(2, 5), 0)

    def test_add(self):
        first = LogQSeries(Fraction(1, 2), [[1], [0, 1]])
        second = LogQSeries(Fraction(3, 2), [[2]])
        self.assertEqual(first + second, LogQSeries(Fraction(1, 2), [[1], [2, 1]]))
        self.assertTrue((first - first).is_zero())

    def test_offset_mismatch(self):
        with self.assertRaises(OffsetMismatchError):
            LogQSeries(0, [[1]]) + LogQSeries(Fraction(1, 2), [[1]])
        self.assertTrue(issubclass(OffsetMismatchError, ValueError))

    def test_product(self):
        ell_max = 8
        product = eta_inverse(ell_max) * euler_product(ell_max)
        self.assertEqual(product, LogQSeries(Fraction(-1, 24), [[1]] + [[]] * ell_max))
        self.assertEqual(eta_inverse(5).coefficient(5), (partition_count(5),))
        self.assertEqual([euler_product(5).term(ell, 0) for ell in range(6)], [1, -1, -1, 0, 0, 1])

    def test_log_poly_product(self):
        series = LogQSeries(0, [[1], [2]]).times_log_poly([0, 1])
        self.assertEqual(series.coeffs, ((0, 1), (0, 2)))
        self.assertEqual(3 * series, series.scale(3))

    def test_q_ddq(self):
        series = q_ddq(LogQSeries(Fraction(1, 2), [[0, 1], [3]]))
        self.assertEqual(series, LogQSeries(Fraction(1, 2), [[1, Fraction(1, 2)], [Fraction(9, 2)]]))

    def test_q_ddq_leibniz(self):
        """q d/dq is a derivation on random series."""
        rng = default_rng(11)
        for _ in range(5):
            first = random_logq_series(rng, offset=Fraction(1, 3))
            second = random_logq_series(rng, offset=Fraction(-1, 4))
            self.assertEqual(q_ddq(first * second),
                             q_ddq(first) * second + first * q_ddq(second))

    def test_record(self):
        series = LogQSeries(Fraction(11, 24), [[], [0, 1]])
        record = series.to_record()
        self.assertEqual(record["offset"], "11/24")
        self.assertEqual(record["terms"][1], {"ell": 1, "coefficients": ["0", "1"], "text": "L"})
        self.assertEqual(LogQSeries.from_record(record), series)


class CharacterTestCase(unittest.TestCase):
    """Test graded dimensions of Virasoro modules.
    """

    def test_verma(self):
        series = vir_verma_trace(Fraction(1, 2), Fraction(1, 5), 4)
        self.assertEqual(series.offset, Fraction(1, 5) - Fraction(1, 48))
        self.assertEqual([series.term(ell, 0) for ell in range(5)], [1, 1, 2, 3, 5])

    def test_quotient(self):
        series = vir_L_trace_case1(1, Fraction(1, 4), 2, 5)
        self.assertEqual([series.term(ell, 0) for ell in range(6)], [1, 1, 1, 2, 3, 4])


class CaseTagTestCase(unittest.TestCase):

    def test_normalize(self):
        self.assertEqual(normalize_case("Case1ii"), "1(ii)")
        self.assertEqual(normalize_case("1(ii)"), "1(ii)")
        self.assertEqual(normalize_case("case 0"), "0")
        with self.assertRaises(ValueError):
            normalize_case("1(i)")


class VirasoroPseudoTraceTestCase(unittest.TestCase):
    """Compare pseudo-traces from explicit quotients with the closed forms.
    """

    def test_generic(self):
        c, h = Fraction(1, 2), Fraction(1, 5)
        for k in (1, 2, 3, 4):
            for v in ("vacuum", "omega"):
                with self.subTest(k=k, v=v):
                    self.assertEqual(vir_pstr_bruteforce(c, h, k, 6, v=v),
                                     vir_pstr_closed(c, h, k, "0", 6, v=v))

    def test_generic_omega(self):
        c, h = Fraction(1, 2), Fraction(1, 5)
        brute = vir_pstr_bruteforce(c, h, 2, 4, v="omega")
        vacuum = vir_pstr_bruteforce(c, h, 2, 4)
        self.assertEqual(brute, q_ddq(vacuum.shift(c / 24)).shift(-c / 24))

    def test_single_singular_vector(self):
        c, h = Fraction(1), Fraction(1, 4)
        brute = vir_pstr_bruteforce(c, h, 2, 6)
        self.assertEqual(brute, vir_pstr_closed(c, h, 2, "1(ii)", 6))
        self.assertEqual(brute, vir_pstr_closed(c, h, 2, "Case1ii", 6, rs=2))
        self.assertEqual(brute.coefficient(2), (0, 1))
        self.assertEqual(vir_pstr_bruteforce(c, h, 2, 6, v="omega"),
                         vir_pstr_closed(c, h, 2, "1(ii)", 6, v="omega"))

    def test_level_zero_action(self):
        """L(0) on M(c, h, k) acts as h + ell plus the Jordan shift."""
        c, h, k = Fraction(1, 2), Fraction(1, 5), 3
        for ell in range(4):
            size = k * partition_count(ell)
            expected = RatMatrix.identity(size).scale(h + ell)
            for index in range(size):
                if index % k:
                    expected[index - 1, index] = 1
            with self.subTest(ell=ell):
                self.assertEqual(_level_zero_action(c, h, k, ell), expected)

    def test_singular_degree_above_truncation(self):
        """A case 1(ii) point whose singular vector lies above the truncation."""
        c, h = Fraction(1), Fraction(9, 4)
        series = vir_pstr_closed(c, h, 1, "1(ii)", 3)
        self.assertEqual(series, vir_pstr_closed(c, h, 1, "0", 3, check=False))
        self.assertEqual(series, vir_pstr_closed(c, h, 1, "1(ii)", 3, rs=4))
        with self.assertRaises(ValueError):
            vir_pstr_closed(c, h, 1, "0", 3)

    def test_vanishing_socle_term(self):
        """For k = 2 the pseudo-trace has no constant term in L."""
        series = vir_pstr_closed(Fraction(1, 2), Fraction(1, 5), 2, "0", 3)
        self.assertTrue(all(series.term(ell, 0) == 0 for ell in range(4)))

    def test_not_interlocked(self):
        with self.assertRaises(NotInterlockedError):
            vir_pstr_bruteforce(-2, 0, 2, 3)
        with self.assertRaises(NotInterlockedError):
            vir_pstr_closed(1, Fraction(1, 4), 3, "1(ii)", 3)

    def test_bad_arguments(self):
        with self.assertRaises(ValueError):
            vir_pstr_closed(Fraction(1, 2), Fraction(1, 5), 2, "1(ii)", 3)
        with self.assertRaises(ValueError):
            vir_pstr_closed(1, Fraction(1, 4), 2, "1(ii)", 4, rs=4)
        with self.assertRaises(ValueError):
            vir_pstr_closed(1, Fraction(1, 4), 2, "1(ii)", 4, check=False)
        with self.assertRaises(ValueError):
            vir_pstr_closed(Fraction(1, 2), Fraction(1, 5), 2, "0", 3, v="alpha")
        with self.assertRaises(ValueError):
            vir_pstr_bruteforce(Fraction(1, 2), Fraction(1, 5), 2, 3, v="alpha")


if __name__ == "__main__":
    unittest.main()

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
from unittest import mock

from voa.pseudotrace import WORKERS_ENV, get_worker_count, parallel_map, partition_count


class WorkerCountTestCase(unittest.TestCase):

    def test_default(self):
        with mock.patch.dict(os.environ, clear=False):
            os.environ.pop(WORKERS_ENV, None)
            self.assertEqual(get_worker_count(), 1)

    def test_values(self):
        with mock.patch.dict(os.environ, {WORKERS_ENV: "3"}):
            self.assertEqual(get_worker_count(), 3)
        for bad in ("0", "two", "-1"):
            with mock.patch.dict(os.environ, {WORKERS_ENV: bad}):
                with self.assertRaises(ValueError):
                    get_worker_count()


class ParallelMapTestCase(unittest.TestCase):
    """Results keep input order serially and over processes.
    """

    def test_order(self):
        expected = [1, 1, 2, 3, 5, 7, 11, 15]
        self.assertEqual(parallel_map(partition_count, range(8), workers=1), expected)
        self.assertEqual(parallel_map(partition_count, range(8), workers=2), expected)


if __name__ == "__main__":
    unittest.main()

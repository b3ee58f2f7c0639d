###############################################################################
#
# Licensed to the Apache Software Foundation (ASF) under one
# or more contributor license agreements.  See the NOTICE file
# distributed with this work for additional information
# regarding copyright ownership.  The ASF licenses this file
# to you under the Apache License, Version 2.0 (the
# "License"); you may not use this file except in compliance
# with the License.  You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing,
# software distributed under the License is distributed on an
# "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, either express or implied.  See the License for the
# specific language governing permissions and limitations
# under the License.
#
###############################################################################

from pathlib import Path
import tempfile
import unittest

import numpy as np

from gsgp_bench.dataset import (Dataset, benchmark_table, inner_split,
                                load_dataset, outer_split, write_dataset)
from gsgp_bench.errors import (DatasetTooSmall, EmptyDataset,
                               FileUnreadable, MalformedRow, X2Empty)

THISDIR = Path(__file__).resolve().parent


class DatasetTest(unittest.TestCase):
    def setUp(self):
        """setup test fixtures, etc."""

        self.tmpdir = tempfile.TemporaryDirectory()
        self.tmp = Path(self.tmpdir.name)

    def tearDown(self):
        """return to pristine state"""

        self.tmpdir.cleanup()

    def test_load(self):
        dataset = load_dataset(get_abspath('data/tiny.csv'))

        self.assertEqual(dataset.name, 'tiny')
        self.assertEqual(dataset.num_vars, 2)
        self.assertEqual(dataset.num_cases, 3)
        self.assertEqual(dataset.columns, ('x0', 'x1', 'y'))
        np.testing.assert_array_equal(dataset.y, [3.0, 9.0, -1.25])
        inputs, target = list(dataset.cases)[2]
        np.testing.assert_array_equal(inputs, [-1.5, 0.25])
        self.assertEqual(target, -1.25)

    def test_load_benchmark_sized(self):
        rng = np.random.default_rng(3)
        data = rng.normal(size=(1029, 9))
        path = self.tmp / 'concrete.csv'
        with path.open('w') as fh:
            fh.write(','.join(f'c{i}' for i in range(9)) + '\n')
            for row in data:
                fh.write(','.join(repr(float(v)) for v in row) + '\n')

        dataset = load_dataset(path)
        self.assertEqual(dataset.num_vars, 8)
        self.assertEqual(dataset.num_cases, 1029)

    def test_load_errors(self):
        with self.assertRaises(EmptyDataset):
            load_dataset(get_abspath('data/header_only.csv'))

        with self.assertRaises(MalformedRow) as ctx:
            load_dataset(get_abspath('data/malformed.csv'))
        self.assertEqual(ctx.exception.row, 3)

        with self.assertRaises(MalformedRow) as ctx:
            load_dataset(get_abspath('data/truncated.csv'))
        self.assertEqual(ctx.exception.row, 3)

        with self.assertRaises(MalformedRow):
            load_dataset(get_abspath('data/missing.csv'))

        with self.assertRaises(FileUnreadable):
            load_dataset(self.tmp / 'nope.csv')

        empty = self.tmp / 'empty.csv'
        empty.write_text('')
        with self.assertRaises(EmptyDataset):
            load_dataset(empty)

    def test_non_finite_rejected(self):
        path = self.tmp / 'nan.csv'
        path.write_text('x0,y\n1.0,nan\n')
        with self.assertRaises(MalformedRow):
            load_dataset(path)

    def test_round_trip(self):
        dataset = load_dataset(get_abspath('data/tiny.csv'))
        rng = np.random.default_rng(0)
        noisy = Dataset(name='tiny', columns=dataset.columns,
                        X=rng.normal(size=(20, 2)),
                        y=rng.normal(size=20) / 3.0)

        path = write_dataset(noisy, self.tmp / 'tiny.csv')
        self.assertEqual(load_dataset(path), noisy)

    def test_outer_split(self):
        split = outer_split(102, seed=7)
        self.assertEqual(len(split.train), 71)
        self.assertEqual(len(split.test), 31)

        for n in (2, 3, 10, 57):
            for seed in range(5):
                split = outer_split(n, seed)
                self.assertEqual(len(split.train), n * 7 // 10)
                self.assertEqual(
                    set(split.train) | set(split.test), set(range(n)))
                self.assertFalse(set(split.train) & set(split.test))

        a, b = outer_split(50, 11), outer_split(50, 11)
        np.testing.assert_array_equal(a.train, b.train)
        np.testing.assert_array_equal(a.test, b.test)

        with self.assertRaises(DatasetTooSmall):
            outer_split(1, 0)

    def test_inner_split(self):
        train = np.arange(100, 200)
        inner = inner_split(train, seed=3)
        self.assertEqual(len(inner.x1), 90)
        self.assertEqual(len(inner.x2), 10)
        self.assertEqual(set(inner.x1) | set(inner.x2), set(train))
        self.assertFalse(set(inner.x1) & set(inner.x2))

        for size in (10, 11, 19, 42, 71):
            inner = inner_split(np.arange(size), seed=size)
            self.assertEqual(len(inner.x1), -(-9 * size // 10))
            self.assertEqual(len(inner.x2), size // 10)

        np.testing.assert_array_equal(inner_split(train, 3).x2,
                                      inner_split(train, 3).x2)

        with self.assertRaises(X2Empty):
            inner_split(np.arange(5), seed=0)

    def test_benchmark_table(self):
        table = benchmark_table()
        self.assertEqual(len(table), 7)
        self.assertEqual(table['airfoil'][:2], (5, 1502))
        self.assertEqual(table['parkinson'][:2], (18, 5875))
        # both stated variable counts are kept
        self.assertEqual(table['ppb'], (628, 131, 626))
        self.assertEqual(table['LD50'], (6, 307, 626))


def get_abspath(filepath):
    """helper function absolute file access"""

    return Path(THISDIR) / filepath


if __name__ == '__main__':
    unittest.main()

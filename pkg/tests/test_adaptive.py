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

import unittest

import numpy as np

from gsgp_bench.adaptive import (P_MIN, GenState, attempt_local_search,
                                 end_generation, ls_probability)
from gsgp_bench.dataset import InnerSplit
from gsgp_bench.errors import X2Empty
from gsgp_bench.semops import Problem, initial_individual


class AdaptiveTest(unittest.TestCase):
    def setUp(self):
        """setup test fixtures, etc."""

        self.rng = np.random.default_rng(11)
        self.targets = np.arange(10, dtype=float)
        self.problem = Problem(targets=self.targets, train=np.arange(10),
                               test=np.arange(10))
        self.inner = InnerSplit(x1=np.arange(8), x2=np.array([8, 9]))
        self.parent = initial_individual(np.zeros(10), self.problem)

    def constant_step(self, value):
        def step(individual, fit_indices):
            return initial_individual(np.full(10, value), self.problem)
        return step

    def test_initial_probability(self):
        self.assertEqual(ls_probability(GenState()), 1.0)

    def test_probability(self):
        self.assertEqual(ls_probability(GenState(3, 4)), 0.75)
        self.assertEqual(ls_probability(GenState(0, 50)), P_MIN)
        self.assertEqual(ls_probability(GenState(0, 50, p_min=0.2)), 0.2)

    def test_probability_range(self):
        for _ in range(1000):
            total = int(self.rng.integers(0, 10000))
            accepted = int(self.rng.integers(0, total + 1))
            p = ls_probability(GenState(accepted, total))
            self.assertGreaterEqual(p, P_MIN)
            self.assertLessEqual(p, 1.0)

    def test_probability_scale_invariant(self):
        for _ in range(200):
            total = int(self.rng.integers(1, 500))
            accepted = int(self.rng.integers(0, total + 1))
            c = int(self.rng.integers(2, 50))
            self.assertAlmostEqual(
                ls_probability(GenState(accepted, total)),
                ls_probability(GenState(c * accepted, c * total)))

    def test_invalid_counters(self):
        with self.assertRaises(ValueError):
            GenState(5, 4)
        with self.assertRaises(ValueError):
            GenState(0, 0, n_acc_current=2, n_current=1)

    def test_accept(self):
        # close to the x2 targets 8 and 9
        child, state = attempt_local_search(
            self.parent, self.constant_step(8.5), self.inner,
            self.targets, GenState())
        self.assertIsNot(child, self.parent)
        self.assertEqual((state.n_acc_current, state.n_current), (1, 1))

    def test_reject(self):
        child, state = attempt_local_search(
            self.parent, self.constant_step(-1.0), self.inner,
            self.targets, GenState())
        self.assertIs(child, self.parent)
        self.assertEqual((state.n_acc_current, state.n_current), (0, 1))

    def test_tie_rejects(self):
        child, state = attempt_local_search(
            self.parent, self.constant_step(0.0), self.inner,
            self.targets, GenState())
        self.assertIs(child, self.parent)
        self.assertEqual(state.n_acc_current, 0)

    def test_step_sees_only_x1(self):
        seen = []

        def step(individual, fit_indices):
            seen.append(fit_indices)
            return individual

        attempt_local_search(self.parent, step, self.inner, self.targets,
                             GenState())
        np.testing.assert_array_equal(seen[0], self.inner.x1)

    def test_empty_x2(self):
        inner = InnerSplit(x1=np.arange(10), x2=np.array([], dtype=int))
        with self.assertRaises(X2Empty):
            attempt_local_search(self.parent, self.constant_step(1.0),
                                 inner, self.targets, GenState())

    def test_end_generation(self):
        state = GenState(2, 5, n_acc_current=1, n_current=3)
        folded = end_generation(state)
        self.assertEqual(folded, GenState(3, 8))
        # the running counters do not feed the probability
        self.assertEqual(ls_probability(state), 0.4)
        self.assertEqual(ls_probability(folded), 3 / 8)

        folded = end_generation(GenState(3, 10, n_acc_current=2,
                                         n_current=5))
        self.assertEqual(folded, GenState(5, 15, 0, 0))
        self.assertAlmostEqual(ls_probability(folded), 1 / 3)

    def test_probability_change_bounded(self):
        for _ in range(200):
            state = GenState()
            previous = ls_probability(state)
            for _ in range(30):
                attempts = int(self.rng.integers(0, 50))
                accepted = int(self.rng.integers(0, attempts + 1))
                state = end_generation(GenState(
                    state.n_acc_cumulative, state.n_total_cumulative,
                    n_acc_current=accepted, n_current=attempts))
                current = ls_probability(state)
                if state.n_total_cumulative == 0:
                    self.assertEqual(current, previous)
                else:
                    bound = attempts / state.n_total_cumulative
                    self.assertLessEqual(abs(current - previous),
                                         bound + 1e-12)
                previous = current


if __name__ == '__main__':
    unittest.main()

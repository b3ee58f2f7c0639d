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

from gsgp_bench.errors import DimensionMismatch
from gsgp_bench.regression import (LinearSystem, Method, RegressionConfig,
                                   fit, predict)


def minimum_norm(X, y):
    """Least-squares oracle through the SVD"""

    return np.linalg.lstsq(X, y, rcond=1e-8)[0]


class RegressionTest(unittest.TestCase):
    def setUp(self):
        """setup test fixtures, etc."""

        self.rng = np.random.default_rng(2024)

    def random_system(self, m=60, k=4):
        X = self.rng.normal(size=(m, k))
        y = self.rng.normal(size=m)
        return LinearSystem(X, y)

    def test_config(self):
        self.assertIs(RegressionConfig.ols().method, Method.OLS)
        self.assertEqual(RegressionConfig.ridge().lam, 0.001)
        with self.assertRaises(ValueError):
            RegressionConfig(Method.RIDGE, 0.0)
        with self.assertRaises(ValueError):
            RegressionConfig(Method.OLS, -1.0)

    def test_system_validation(self):
        with self.assertRaises(DimensionMismatch):
            LinearSystem(np.ones((5, 2)), np.ones(4))
        with self.assertRaises(ValueError):
            LinearSystem(np.array([[1.0], [np.inf]]), np.ones(2))

        system = LinearSystem.from_columns([np.ones(3), np.arange(3.0)],
                                           np.arange(3.0))
        self.assertEqual(system.columns.shape, (3, 2))

    def test_ols_matches_lstsq(self):
        for _ in range(20):
            system = self.random_system()
            expected = np.linalg.lstsq(system.columns, system.response,
                                       rcond=None)[0]
            np.testing.assert_allclose(fit(system, RegressionConfig.ols()),
                                       expected, atol=1e-8)

    def test_ols_normal_equations(self):
        system = self.random_system(m=200, k=3)
        beta = fit(system, RegressionConfig.ols())
        residual = system.response - system.columns @ beta
        np.testing.assert_allclose(system.columns.T @ residual, 0.0,
                                   atol=1e-8)

    def test_rank_deficient_minimum_norm(self):
        for _ in range(20):
            p = self.rng.normal(size=40)
            y = self.rng.normal(size=40)
            cases = (
                # duplicated column
                np.column_stack((np.ones(40), p, p)),
                # constant semantics, the same as the intercept column
                np.column_stack((np.ones(40), np.full(40, 2.0), p)),
                # zero difference vector
                np.column_stack((np.ones(40), p, np.zeros(40))),
            )
            for X in cases:
                beta = fit(LinearSystem(X, y), RegressionConfig.ols())
                np.testing.assert_allclose(beta, minimum_norm(X, y),
                                           atol=1e-8)

    def test_single_row(self):
        beta = fit(LinearSystem(np.array([[1.0, 2.0, 0.0]]), [3.0]),
                   RegressionConfig.ols())
        self.assertAlmostEqual(float(beta @ [1.0, 2.0, 0.0]), 3.0)

    def test_ridge_residual(self):
        for i in range(500):
            lam = (1e-4, 1e-3, 1e-2)[i % 3]
            m, k = self.rng.integers(1, 51), self.rng.integers(1, 5)
            system = self.random_system(m=m, k=k)
            X, y = system.columns, system.response
            beta = fit(system, RegressionConfig.ridge(lam))
            residual = (X.T @ X + lam * np.eye(k)) @ beta - X.T @ y
            self.assertLess(np.linalg.norm(residual),
                            1e-8 * max(1.0, np.linalg.norm(X.T @ y)))

    def test_ridge_handles_singular(self):
        p = self.rng.normal(size=30)
        X = np.column_stack((np.ones(30), p, p))
        beta = fit(LinearSystem(X, p), RegressionConfig.ridge(0.001))
        self.assertTrue(np.isfinite(beta).all())
        # equal columns share the weight
        self.assertAlmostEqual(beta[1], beta[2])

    def test_tiny_ridge_approaches_ols(self):
        system = self.random_system()
        ols = fit(system, RegressionConfig.ols())
        ridge = fit(system, RegressionConfig.ridge(1e-12))
        np.testing.assert_allclose(ridge, ols, atol=1e-9)

    def test_predict(self):
        X = np.array([[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_allclose(predict(X, [1.0, -1.0]), [-1.0, -1.0])
        np.testing.assert_allclose(predict(np.array([1.0, 2.0]), [2.0]),
                                   [2.0, 4.0])
        with self.assertRaises(DimensionMismatch):
            predict(X, [1.0, 2.0, 3.0])


if __name__ == '__main__':
    unittest.main()

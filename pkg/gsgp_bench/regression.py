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

from dataclasses import dataclass
from enum import Enum
import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh

from gsgp_bench.errors import DimensionMismatch

LOGGER = logging.getLogger(__name__)

# eigenvalues of the Gram matrix below RCOND * largest are treated as zero
RCOND = 1e-10


class Method(Enum):
    OLS = 'ols'
    RIDGE = 'ridge'


@dataclass(frozen=True)
class RegressionConfig:
    method: Method = Method.OLS
    lam: float = 0.0

    def __post_init__(self):
        if self.method is Method.RIDGE and not self.lam > 0:
            raise ValueError('ridge regression needs lambda > 0')
        if self.lam < 0:
            raise ValueError('lambda must be non-negative')

    @classmethod
    def ols(cls) -> 'RegressionConfig':
        return cls(Method.OLS, 0.0)

    @classmethod
    def ridge(cls, lam: float = 0.001) -> 'RegressionConfig':
        return cls(Method.RIDGE, lam)


@dataclass(frozen=True)
class LinearSystem:
    """Design matrix (m x k, one column per basis function) and response"""

    columns: np.ndarray
    response: np.ndarray

    def __post_init__(self):
        columns = np.asarray(self.columns, dtype=float)
        response = np.asarray(self.response, dtype=float)
        if columns.ndim == 1:
            columns = columns.reshape(-1, 1)
        if columns.ndim != 2 or response.ndim != 1:
            raise DimensionMismatch('columns must be 2-D, response 1-D')
        if columns.shape[0] != response.shape[0] or columns.shape[0] < 1:
            raise DimensionMismatch(
                f'{columns.shape[0]} rows in columns, '
                f'{response.shape[0]} in response')
        if not (np.isfinite(columns).all() and np.isfinite(response).all()):
            raise ValueError('linear system has non-finite entries')
        object.__setattr__(self, 'columns', columns)
        object.__setattr__(self, 'response', response)

    @classmethod
    def from_columns(cls, columns, response) -> 'LinearSystem':
        """Build a system from a sequence of column vectors"""

        return cls(np.column_stack(columns), response)


def _minimum_norm(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = eigh(gram)
    cutoff = RCOND * max(eigenvalues.max(initial=0.0), 0.0)
    keep = eigenvalues > cutoff
    projected = vectors[:, keep].T @ rhs
    return vectors[:, keep] @ (projected / eigenvalues[keep])


def fit(system: LinearSystem, config: RegressionConfig) -> np.ndarray:
    """
    Least-squares coefficients of a linear system

    Works on the k x k normal equations. Ridge adds lam to every
    diagonal entry, the constant column included. Rank-deficient OLS
    systems get the minimum-norm solution.

    :param system: `gsgp_bench.regression.LinearSystem`
    :param config: `gsgp_bench.regression.RegressionConfig`

    :returns: `numpy.ndarray` of k coefficients
    """

    X = system.columns
    gram = X.T @ X
    rhs = X.T @ system.response
    k = gram.shape[0]

    if config.method is Method.RIDGE:
        return cho_solve(cho_factor(gram + config.lam * np.eye(k)), rhs)

    eigenvalues = np.linalg.eigvalsh(gram)
    if eigenvalues[0] > RCOND * eigenvalues[-1]:
        try:
            return cho_solve(cho_factor(gram), rhs)
        except LinAlgError:
            pass

    LOGGER.debug('Rank-deficient system, using minimum-norm solution')
    return _minimum_norm(gram, rhs)


def predict(columns: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    """
    Linear combination of columns

    :param columns: `numpy.ndarray` (m x k) or 1-D for a single column
    :param coefficients: k coefficients

    :returns: `numpy.ndarray` of m values
    """

    columns = np.asarray(columns, dtype=float)
    if columns.ndim == 1:
        columns = columns.reshape(-1, 1)
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.shape != (columns.shape[1],):
        raise DimensionMismatch(
            f'{coefficients.size} coefficient(s) for '
            f'{columns.shape[1]} column(s)')
    return columns @ coefficients

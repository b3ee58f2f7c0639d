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

import logging

import numpy as np

from gsgp_bench.dataset import Dataset

LOGGER = logging.getLogger(__name__)


def concrete_surrogate(n: int = 1000, seed: int = 0,
                       noise: float = 0.5) -> Dataset:
    """
    Smooth nonlinear response of 8 positive inputs with mild noise

    Stands in for the concrete compressive strength benchmark.

    :param n: number of cases
    :param seed: RNG seed
    :param noise: standard deviation of the additive Gaussian noise

    :returns: `gsgp_bench.dataset.Dataset`
    """

    rng = np.random.default_rng(seed)
    X = rng.uniform(0.5, 5.0, size=(n, 8))
    y = (2.0 * X[:, 0] * X[:, 1] / (1.0 + X[:, 2])
         + X[:, 3] ** 2 / 4.0
         - X[:, 4] * X[:, 5] / 3.0
         + 3.0 * X[:, 6] / X[:, 7]
         + rng.normal(0.0, noise, size=n))

    columns = tuple(f'x{i}' for i in range(8)) + ('y',)
    return Dataset(name='concrete_surrogate', columns=columns, X=X, y=y)


def wide_noise(n: int = 60, num_vars: int = 50, informative: int = 5,
               seed: int = 0, noise: float = 2.0) -> Dataset:
    """
    Few cases, many inputs, most of them pure noise, and a noisy target

    Only the first `informative` inputs influence the target. The
    default noise level is of the same order as the signal, so a model
    that fits the training cases closely ends up fitting the noise.

    :param n: number of cases
    :param num_vars: number of inputs
    :param informative: number of inputs the target depends on
    :param seed: RNG seed
    :param noise: standard deviation of the additive Gaussian noise

    :returns: `gsgp_bench.dataset.Dataset`
    """

    if not 1 <= informative <= num_vars:
        raise ValueError('informative must be in 1..num_vars')

    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n, num_vars))
    weights = np.linspace(1.0, 2.0, informative)
    y = (X[:, :informative] @ weights
         + X[:, 0] * X[:, informative - 1]
         + rng.normal(0.0, noise, size=n))

    columns = tuple(f'x{i}' for i in range(num_vars)) + ('y',)
    return Dataset(name='wide_noise', columns=columns, X=X, y=y)


GENERATORS = {
    'concrete': concrete_surrogate,
    'wide': wide_noise
}

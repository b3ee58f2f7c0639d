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

from dataclasses import dataclass, replace
import logging
from typing import Callable, Tuple

import numpy as np

from gsgp_bench.dataset import InnerSplit
from gsgp_bench.errors import X2Empty
from gsgp_bench.semops import Individual, rmse

LOGGER = logging.getLogger(__name__)

P_MIN = 0.01

# a local-search operation: (individual, fit indices) -> candidate
LocalSearch = Callable[[Individual, np.ndarray], Individual]


@dataclass(frozen=True)
class GenState:
    """Accepted/attempted local-search counters of one run"""

    n_acc_cumulative: int = 0
    n_total_cumulative: int = 0
    n_acc_current: int = 0
    n_current: int = 0
    p_min: float = P_MIN

    def __post_init__(self):
        if not (0 <= self.n_acc_cumulative <= self.n_total_cumulative):
            raise ValueError('cumulative accepted count out of range')
        if not (0 <= self.n_acc_current <= self.n_current):
            raise ValueError('current accepted count out of range')


def ls_probability(state: GenState) -> float:
    """
    Probability of attempting a local search in the current generation

    :param state: `gsgp_bench.adaptive.GenState`

    :returns: `float` in [p_min, 1]
    """

    if state.n_total_cumulative == 0:
        return 1.0
    return max(state.p_min,
               state.n_acc_cumulative / state.n_total_cumulative)


def attempt_local_search(parent: Individual, step: LocalSearch,
                         inner: InnerSplit, targets: np.ndarray,
                         state: GenState) -> Tuple[Individual, GenState]:
    """
    Fit a local-search step on x1 and keep it only if x2 error improves

    :param parent: individual the step is applied to
    :param step: local-search operation
    :param inner: `gsgp_bench.dataset.InnerSplit`
    :param targets: targets over all cases
    :param state: `gsgp_bench.adaptive.GenState`

    :returns: `tuple` of (returned individual, updated state)
    """

    if len(inner.x2) == 0:
        raise X2Empty('no validation cases for the acceptance test')

    candidate = step(parent, inner.x1)
    candidate_error = rmse(candidate.semantics, targets, inner.x2)
    parent_error = rmse(parent.semantics, targets, inner.x2)

    if candidate_error < parent_error:
        return candidate, replace(state,
                                  n_acc_current=state.n_acc_current + 1,
                                  n_current=state.n_current + 1)

    LOGGER.debug(f'Local search rejected: x2 rmse {candidate_error:.6g} '
                 f'vs parent {parent_error:.6g}')
    return parent, replace(state, n_current=state.n_current + 1)


def end_generation(state: GenState) -> GenState:
    """
    Fold the running generation's counters into the cumulative ones

    :param state: `gsgp_bench.adaptive.GenState`

    :returns: `gsgp_bench.adaptive.GenState`
    """

    return replace(
        state,
        n_acc_cumulative=state.n_acc_cumulative + state.n_acc_current,
        n_total_cumulative=state.n_total_cumulative + state.n_current,
        n_acc_current=0,
        n_current=0)

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

from collections import defaultdict
from dataclasses import dataclass
import logging
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
from scipy.stats import mannwhitneyu, permutation_test, rankdata

from gsgp_bench.errors import EmptySample

LOGGER = logging.getLogger(__name__)

# samples up to this size use the exact permutation distribution
EXACT_MAX_SIZE = 8


@dataclass(frozen=True)
class SampleSummary:
    """Boxplot statistics of one sample"""

    count: int
    median: float
    q1: float
    q2: float
    q3: float
    min: float
    max: float
    whisker_low: float
    whisker_high: float
    outliers: Tuple[float, ...]


@dataclass(frozen=True)
class SignificanceMatrix:
    labels: Tuple[str, ...]
    p_values: np.ndarray  # NaN on the diagonal

    def p(self, row: str, column: str) -> float:
        return float(self.p_values[self.labels.index(row),
                                   self.labels.index(column)])


def _sample(values: Iterable[float]) -> np.ndarray:
    sample = np.asarray(list(values), dtype=float)
    if sample.size == 0:
        raise EmptySample('empty sample')
    return sample


def _u_statistic(x: np.ndarray, y: np.ndarray, axis: int = -1) -> np.ndarray:
    """Mann-Whitney U of `x` from midranks of the pooled sample"""

    ranks = rankdata(np.concatenate((x, y), axis=axis), axis=axis)
    n1 = x.shape[axis]
    rank_sum = np.take(ranks, np.arange(n1), axis=axis).sum(axis=axis)
    return rank_sum - n1 * (n1 + 1) / 2


def mann_whitney_one_tailed(a: Sequence[float], b: Sequence[float]) -> float:
    """
    p-value for "a is stochastically smaller than b"

    Pairs of small samples use the exact permutation distribution of U
    over midranks, so ties are handled exactly. Larger samples use the
    normal approximation with tie and continuity corrections. Samples
    with no spread at all give 1.0.

    :param a: first sample (e.g. RMSE values, lower is better)
    :param b: second sample

    :returns: `float` p-value
    """

    a = _sample(a)
    b = _sample(b)
    pooled = np.concatenate((a, b))
    if np.all(pooled == pooled[0]):
        return 1.0

    if max(a.size, b.size) <= EXACT_MAX_SIZE:
        result = permutation_test((a, b), _u_statistic,
                                  permutation_type='independent',
                                  vectorized=True, n_resamples=np.inf,
                                  alternative='less')
    else:
        result = mannwhitneyu(a, b, alternative='less',
                              use_continuity=True, method='asymptotic')
    p = float(result.pvalue)
    if not np.isfinite(p):
        return 1.0
    return min(max(p, 0.0), 1.0)


def bonferroni(p: float, m: int) -> float:
    """
    Bonferroni-adjusted p-value

    :param p: raw p-value
    :param m: number of comparisons

    :returns: `float` min(1, m * p)
    """

    if m < 1:
        raise ValueError('comparison count must be at least 1')
    return min(1.0, m * p)


def significance_matrix(results: Mapping[str, Sequence[float]]
                        ) -> SignificanceMatrix:
    """
    Pairwise one-tailed tests with Bonferroni over all off-diagonal cells

    Entry (i, j) tests whether algorithm i has lower values than j.

    :param results: `dict` of label -> final test RMSE sample

    :returns: `gsgp_bench.stats.SignificanceMatrix`
    """

    labels = tuple(results)
    k = len(labels)
    if k < 2:
        raise ValueError('need at least two algorithms to compare')

    m = k * (k - 1)
    p_values = np.full((k, k), np.nan)
    for i, row in enumerate(labels):
        for j, column in enumerate(labels):
            if i != j:
                p_values[i, j] = bonferroni(
                    mann_whitney_one_tailed(results[row], results[column]), m)
    return SignificanceMatrix(labels=labels, p_values=p_values)


def summarize(sample: Sequence[float]) -> SampleSummary:
    """
    Quartiles (linear interpolation) and 1.5 IQR outliers

    :param sample: values

    :returns: `gsgp_bench.stats.SampleSummary`
    """

    sample = _sample(sample)
    q1, q2, q3 = np.percentile(sample, [25, 50, 75])
    iqr = q3 - q1
    low, high = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = sample[(sample >= low) & (sample <= high)]
    outliers = np.sort(sample[(sample < low) | (sample > high)])

    return SampleSummary(count=int(sample.size), median=float(q2),
                         q1=float(q1), q2=float(q2), q3=float(q3),
                         min=float(sample.min()), max=float(sample.max()),
                         whisker_low=float(inside.min()),
                         whisker_high=float(inside.max()),
                         outliers=tuple(float(v) for v in outliers))


def convergence(records: Iterable[Mapping]) -> Dict[str, List[tuple]]:
    """
    Median best train and test RMSE per generation

    :param records: rows with variant, generation, train_rmse, test_rmse

    :returns: `dict` of variant -> [(generation, median train,
              median test)] sorted by generation
    """

    grouped = defaultdict(lambda: defaultdict(list))
    for record in records:
        grouped[record['variant']][int(record['generation'])].append(
            (float(record['train_rmse']), float(record['test_rmse'])))

    curves = {}
    for variant, generations in grouped.items():
        curve = []
        for generation in sorted(generations):
            values = np.array(generations[generation])
            curve.append((generation, float(np.median(values[:, 0])),
                          float(np.median(values[:, 1]))))
        curves[variant] = curve
    return curves


def probability_trace(records: Iterable[Mapping]
                      ) -> Dict[str, List[tuple]]:
    """
    Mean and standard deviation of the local-search probability

    Rows without a probability are ignored.

    :param records: rows with variant, generation, ls_prob

    :returns: `dict` of variant -> [(generation, mean, std)]
    """

    grouped = defaultdict(lambda: defaultdict(list))
    for record in records:
        probability = record.get('ls_prob')
        if probability in (None, ''):
            continue
        grouped[record['variant']][int(record['generation'])].append(
            float(probability))

    traces = {}
    for variant, generations in grouped.items():
        traces[variant] = [
            (generation, float(np.mean(generations[generation])),
             float(np.std(generations[generation])))
            for generation in sorted(generations)]
    return traces

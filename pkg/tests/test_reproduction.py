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

from gsgp_bench.engine import EvolutionConfig, Variant, run
from gsgp_bench.env import GSGP_BENCH_SLOW_TESTS
from gsgp_bench.stats import mann_whitney_one_tailed
from gsgp_bench.synthetic import concrete_surrogate, wide_noise

RUNS = 30


def final_records(variant, dataset):
    config = EvolutionConfig(variant=variant, population_size=50,
                             generations=50)
    return [run(config, dataset, seed=seed) for seed in range(RUNS)]


@unittest.skipUnless(GSGP_BENCH_SLOW_TESTS, 'set GSGP_BENCH_SLOW_TESTS')
class ReproductionTest(unittest.TestCase):
    """Desk-scale runs, minutes each"""

    @classmethod
    def setUpClass(cls):
        """runs on the wide dataset, shared by the overfitting checks"""

        dataset = wide_noise(seed=0)
        cls.wide_logs = {variant: final_records(variant, dataset)
                         for variant in (Variant.GPLS, Variant.GPLS_g)}

    def test_local_search_wins_on_smooth_data(self):
        dataset = concrete_surrogate(n=1000, seed=0)
        gsgp = [log.records[-1].train_rmse
                for log in final_records(Variant.GSGP, dataset)]
        gpls = [log.records[-1].train_rmse
                for log in final_records(Variant.GPLS, dataset)]

        self.assertLess(np.median(gpls), np.median(gsgp))
        self.assertLessEqual(mann_whitney_one_tailed(gpls, gsgp), 0.05)

    def test_gen_limits_overfitting_on_wide_data(self):
        gaps = {variant: [log.records[-1].test_rmse
                          - log.records[-1].train_rmse for log in runs]
                for variant, runs in self.wide_logs.items()}
        tests = {variant: [log.records[-1].test_rmse for log in runs]
                 for variant, runs in self.wide_logs.items()}

        strict = (np.median(gaps[Variant.GPLS])
                  > np.median(gaps[Variant.GPLS_g]))
        significant = mann_whitney_one_tailed(
            gaps[Variant.GPLS_g], gaps[Variant.GPLS]) <= 0.05
        self.assertTrue(strict or significant)
        self.assertLessEqual(np.median(tests[Variant.GPLS_g]),
                             np.median(tests[Variant.GPLS]))

    def test_gen_probability_declines_on_wide_data(self):
        declined = 0
        for log in self.wide_logs[Variant.GPLS_g]:
            probability = [r.ls_prob for r in log.records]
            early = np.mean(probability[2:12])
            late = np.mean(probability[-10:])
            declined += late < early
        self.assertGreaterEqual(declined, 0.8 * RUNS)


if __name__ == '__main__':
    unittest.main()

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

import os

GSGP_BENCH_LOGLEVEL = os.environ.get('GSGP_BENCH_LOGLEVEL', 'WARNING')
GSGP_BENCH_WORKERS = int(os.environ.get('GSGP_BENCH_WORKERS', 1))
GSGP_BENCH_OUTPUT_DIR = os.environ.get('GSGP_BENCH_OUTPUT_DIR', './results')

# opt-in for the desk-scale reproduction tests
GSGP_BENCH_SLOW_TESTS = os.environ.get('GSGP_BENCH_SLOW_TESTS')

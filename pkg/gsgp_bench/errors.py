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


class GSGPBenchError(Exception):
    """Base class of all gsgp-bench errors"""


class ConfigError(GSGPBenchError):
    """Invalid experiment configuration"""


# dataset

class FileUnreadable(GSGPBenchError):
    pass


class MalformedRow(GSGPBenchError):
    def __init__(self, row: int, reason: str):
        """
        :param row: 1-based line number in the file
        :param reason: what is wrong with the row
        """

        self.row = row
        self.reason = reason
        super().__init__(f'row {row}: {reason}')


class EmptyDataset(GSGPBenchError):
    pass


class DatasetTooSmall(GSGPBenchError):
    pass


class SplitTooSmall(GSGPBenchError):
    pass


class X2Empty(GSGPBenchError):
    """Validation portion of the inner split is empty"""


# trees and semantics

class VariableOutOfRange(GSGPBenchError):
    pass


class LengthMismatch(GSGPBenchError):
    pass


class NegativeStep(GSGPBenchError):
    pass


class EmptyIndexSet(GSGPBenchError):
    pass


# regression

class DimensionMismatch(GSGPBenchError):
    pass


# engine and stats

class EmptyPopulation(GSGPBenchError):
    pass


class EmptySample(GSGPBenchError):
    pass

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

import csv
from dataclasses import dataclass
import logging
import math
from pathlib import Path
from typing import Iterator, Tuple, Union

import numpy as np

from gsgp_bench.errors import (DatasetTooSmall, EmptyDataset,
                               FileUnreadable, MalformedRow,
                               SplitTooSmall, X2Empty)

LOGGER = logging.getLogger(__name__)

# name: (variables, instances, variables as stated in the dataset prose)
BENCHMARK_TABLE = {
    'airfoil': (5, 1502, None),
    'bioav': (241, 359, None),
    'concrete': (8, 1029, None),
    'parkinson': (18, 5875, None),
    'ppb': (628, 131, 626),
    'slump': (9, 102, None),
    'LD50': (6, 307, 626)
}

Seed = Union[int, np.random.SeedSequence]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Regression dataset: inputs X (n x num_vars) and targets y (n)"""

    name: str
    columns: Tuple[str, ...]
    X: np.ndarray
    y: np.ndarray

    @property
    def num_vars(self) -> int:
        return self.X.shape[1]

    @property
    def num_cases(self) -> int:
        return self.X.shape[0]

    @property
    def cases(self) -> Iterator[Tuple[np.ndarray, float]]:
        for inputs, target in zip(self.X, self.y):
            yield inputs, float(target)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.name == other.name and self.columns == other.columns
                and np.array_equal(self.X, other.X)
                and np.array_equal(self.y, other.y))


@dataclass(frozen=True)
class IndexSplit:
    train: np.ndarray
    test: np.ndarray


@dataclass(frozen=True)
class InnerSplit:
    x1: np.ndarray
    x2: np.ndarray


def benchmark_table() -> dict:
    """
    Variable and instance counts of the seven benchmark datasets

    :returns: `dict` of name -> (num_vars, num_cases, alt_num_vars)
    """

    return dict(BENCHMARK_TABLE)


def load_dataset(path: Union[str, Path]) -> Dataset:
    """
    Load a regression dataset from CSV

    One header row, comma separated, target in the last column.

    :param path: CSV file location

    :returns: `gsgp_bench.dataset.Dataset`
    """

    path = Path(path)
    LOGGER.debug(f'Loading dataset from {path}')

    try:
        with path.open(newline='', encoding='utf8') as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as err:
        msg = f'Cannot read {path}: {err}'
        LOGGER.error(msg)
        raise FileUnreadable(msg)

    # trailing blank lines are tolerated, inner ones are not
    while rows and not ''.join(rows[-1]).strip():
        rows.pop()

    if not rows:
        raise EmptyDataset(f'{path} has no header')

    header = tuple(col.strip() for col in rows[0])
    if len(header) < 2:
        raise MalformedRow(1, 'header needs at least one input and a target')

    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not ''.join(row).strip():
            raise MalformedRow(lineno, 'blank row')
        if len(row) != len(header):
            raise MalformedRow(
                lineno, f'expected {len(header)} fields, found {len(row)}')
        parsed = []
        for col, field in zip(header, row):
            field = field.strip()
            if not field:
                raise MalformedRow(lineno, f'missing value in column {col}')
            try:
                value = float(field)
            except ValueError:
                raise MalformedRow(lineno, f'non-numeric value {field!r} '
                                           f'in column {col}')
            if not math.isfinite(value):
                raise MalformedRow(lineno, f'non-finite value {field!r} '
                                           f'in column {col}')
            parsed.append(value)
        values.append(parsed)

    if not values:
        raise EmptyDataset(f'{path} contains no data rows')

    data = np.array(values, dtype=float)
    dataset = Dataset(name=path.stem, columns=header,
                      X=data[:, :-1].copy(), y=data[:, -1].copy())
    LOGGER.info(f'Loaded {dataset.name}: {dataset.num_vars} variables, '
                f'{dataset.num_cases} instances')
    return dataset


def write_dataset(dataset: Dataset, path: Union[str, Path]) -> Path:
    """
    Write a dataset back to CSV using the loader's conventions

    :param dataset: `gsgp_bench.dataset.Dataset`
    :param path: destination file

    :returns: `pathlib.Path` of written file
    """

    path = Path(path)
    with path.open('w', newline='', encoding='utf8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(dataset.columns)
        for inputs, target in dataset.cases:
            writer.writerow([repr(float(v)) for v in inputs] + [repr(target)])

    LOGGER.debug(f'Wrote {dataset.num_cases} rows to {path}')
    return path


def outer_split(n: int, seed: Seed) -> IndexSplit:
    """
    Random train/test partition with |train| = floor(0.7 n)

    :param n: dataset size
    :param seed: RNG seed

    :returns: `gsgp_bench.dataset.IndexSplit`
    """

    if n < 2:
        raise DatasetTooSmall(f'cannot split {n} case(s)')

    permutation = np.random.default_rng(seed).permutation(n)
    n_train = n * 7 // 10
    return IndexSplit(train=np.sort(permutation[:n_train]),
                      test=np.sort(permutation[n_train:]))


def inner_split(train: np.ndarray, seed: Seed) -> InnerSplit:
    """
    Split training indices into fit (x1) and validation (x2) portions

    :param train: training index set
    :param seed: RNG seed

    :returns: `gsgp_bench.dataset.InnerSplit`
    """

    train = np.asarray(train)
    size = len(train)
    if size < 2:
        raise SplitTooSmall(f'cannot split {size} training case(s)')

    n_x2 = size // 10
    if n_x2 == 0:
        raise X2Empty(f'{size} training cases leave no validation cases')

    permutation = np.random.default_rng(seed).permutation(size)
    n_x1 = size - n_x2
    return InnerSplit(x1=np.sort(train[permutation[:n_x1]]),
                      x2=np.sort(train[permutation[n_x1:]]))

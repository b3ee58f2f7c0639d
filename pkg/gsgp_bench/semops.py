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
from functools import cached_property
import itertools
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from gsgp_bench.errors import EmptyIndexSet, LengthMismatch, NegativeStep
from gsgp_bench.exprtree import RandomTree, node_count, saturate
from gsgp_bench.regression import (LinearSystem, RegressionConfig, fit,
                                   predict)

LOGGER = logging.getLogger(__name__)

_INDIVIDUAL_IDS = itertools.count()


class LineageKind(Enum):
    INITIAL_TREE = 'InitialTree'
    CROSSOVER = 'Crossover'
    MUTATION = 'Mutation'
    MUTATION_LS = 'MutationLS'
    REG_LS = 'RegLS'
    COPY = 'Copy'


@dataclass(frozen=True)
class Lineage:
    """How an individual was produced"""

    kind: LineageKind
    parent_ids: Tuple[int, ...] = ()
    random_tree_ids: Tuple[Optional[int], ...] = ()
    coefficients: Tuple[float, ...] = ()
    ms: Optional[float] = None


@dataclass(frozen=True)
class Problem:
    """Targets over all cases plus the train and test index sets"""

    targets: np.ndarray
    train: np.ndarray
    test: np.ndarray


@dataclass(frozen=True, eq=False)
class Individual:
    """
    Semantics with lineage; no syntax tree is kept for offspring

    `size` is the node count of the expression the lineage describes.
    """

    id: int
    semantics: np.ndarray
    lineage: Lineage
    problem: Problem
    size: int = 1

    @cached_property
    def train_fitness(self) -> float:
        return rmse(self.semantics, self.problem.targets, self.problem.train)

    @cached_property
    def test_fitness(self) -> float:
        return rmse(self.semantics, self.problem.targets, self.problem.test)


def _new(semantics: np.ndarray, lineage: Lineage, problem: Problem,
         size: int) -> Individual:
    semantics = np.array(semantics, dtype=float)
    semantics.setflags(write=False)
    return Individual(id=next(_INDIVIDUAL_IDS), semantics=semantics,
                      lineage=lineage, problem=problem, size=size)


def _check_lengths(*vectors: np.ndarray):
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise LengthMismatch(f'semantic vectors of lengths {sorted(lengths)}')


def _tree_refs(trees: Optional[Sequence[RandomTree]], count: int):
    if trees is None:
        return (None,) * count, (1,) * count
    if len(trees) != count:
        raise ValueError(f'expected {count} random tree(s)')
    return tuple(t.id for t in trees), tuple(node_count(t) for t in trees)


def _apply(columns: np.ndarray, coefficients: np.ndarray) -> np.ndarray:
    with np.errstate(over='ignore', invalid='ignore'):
        values = predict(columns, coefficients)
    return saturate(np.nan_to_num(values, nan=0.0))


def rmse(semantics: np.ndarray, targets: np.ndarray,
         indices: np.ndarray) -> float:
    """
    Root mean squared error over an index set

    :param semantics: program outputs over all cases
    :param targets: targets over all cases
    :param indices: cases to score

    :returns: `float` RMSE
    """

    indices = np.asarray(indices, dtype=int)
    if indices.size == 0:
        raise EmptyIndexSet('rmse over an empty index set')
    residual = np.asarray(semantics)[indices] - np.asarray(targets)[indices]
    return float(np.sqrt(np.mean(residual ** 2)))


def initial_individual(semantics: np.ndarray, problem: Problem,
                       tree: Optional[RandomTree] = None) -> Individual:
    """
    Individual for an explicit tree of the initial population

    :param semantics: tree outputs over all cases
    :param problem: `gsgp_bench.semops.Problem`
    :param tree: the tree, recorded for size accounting

    :returns: `gsgp_bench.semops.Individual`
    """

    _check_lengths(semantics, problem.targets)
    ids, sizes = _tree_refs(None if tree is None else [tree], 1)
    return _new(semantics, Lineage(LineageKind.INITIAL_TREE,
                                   random_tree_ids=ids),
                problem, sizes[0])


def copy_of(parent: Individual) -> Individual:
    """Unchanged copy of an individual with its own identity"""

    return _new(parent.semantics,
                Lineage(LineageKind.COPY, parent_ids=(parent.id,)),
                parent.problem, parent.size)


def gsc(p1: Individual, p2: Individual, tr: np.ndarray,
        tree: Optional[RandomTree] = None) -> Individual:
    """
    Geometric semantic crossover: p1 * tr + (1 - tr) * p2

    :param p1: first parent
    :param p2: second parent
    :param tr: bounded random semantics, entries in (0, 1)
    :param tree: random tree behind `tr`, for lineage

    :returns: `gsgp_bench.semops.Individual`
    """

    tr = np.asarray(tr, dtype=float)
    _check_lengths(p1.semantics, p2.semantics, tr)

    child = p1.semantics * tr + (1.0 - tr) * p2.semantics
    ids, sizes = _tree_refs(None if tree is None else [tree], 1)
    lineage = Lineage(LineageKind.CROSSOVER, parent_ids=(p1.id, p2.id),
                      random_tree_ids=ids)
    return _new(child, lineage, p1.problem,
                p1.size + p2.size + 2 * sizes[0] + 5)


def gsm(p: Individual, r1: np.ndarray, r2: np.ndarray, ms: float,
        trees: Optional[Sequence[RandomTree]] = None) -> Individual:
    """
    Geometric semantic mutation: p + ms * (r1 - r2)

    :param p: parent
    :param r1: bounded random semantics
    :param r2: bounded random semantics
    :param ms: mutation step
    :param trees: random trees behind r1 and r2, for lineage

    :returns: `gsgp_bench.semops.Individual`
    """

    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    _check_lengths(p.semantics, r1, r2)
    if ms < 0:
        raise NegativeStep(f'mutation step {ms} < 0')

    child = p.semantics + ms * (r1 - r2)
    ids, sizes = _tree_refs(trees, 2)
    lineage = Lineage(LineageKind.MUTATION, parent_ids=(p.id,),
                      random_tree_ids=ids, ms=float(ms))
    return _new(child, lineage, p.problem, p.size + sum(sizes) + 4)


def gsm_ls(p: Individual, r1: np.ndarray, r2: np.ndarray,
           targets: np.ndarray, fit_indices: np.ndarray,
           reg: RegressionConfig,
           trees: Optional[Sequence[RandomTree]] = None) -> Individual:
    """
    Mutation with local search: a0 + a1 * p + a2 * (r1 - r2)

    The coefficients are fitted on `fit_indices` only and the fitted map
    is applied to every case.

    :param p: parent
    :param r1: bounded random semantics
    :param r2: bounded random semantics
    :param targets: targets over all cases
    :param fit_indices: cases used for fitting
    :param reg: `gsgp_bench.regression.RegressionConfig`
    :param trees: random trees behind r1 and r2, for lineage

    :returns: `gsgp_bench.semops.Individual`
    """

    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    _check_lengths(p.semantics, r1, r2, targets)
    fit_indices = np.asarray(fit_indices, dtype=int)
    if fit_indices.size == 0:
        raise EmptyIndexSet('gsm_ls needs fitting cases')

    columns = np.column_stack(
        (np.ones_like(p.semantics), p.semantics, r1 - r2))
    system = LinearSystem(columns[fit_indices],
                          np.asarray(targets, dtype=float)[fit_indices])
    alpha = fit(system, reg)
    child = _apply(columns, alpha)

    ids, sizes = _tree_refs(trees, 2)
    lineage = Lineage(LineageKind.MUTATION_LS, parent_ids=(p.id,),
                      random_tree_ids=ids,
                      coefficients=tuple(float(a) for a in alpha))
    return _new(child, lineage, p.problem, p.size + sum(sizes) + 8)


def reg_basis(semantics: np.ndarray) -> np.ndarray:
    """Columns T, 1, min(0, T), max(0, T)"""

    return np.column_stack((semantics, np.ones_like(semantics),
                            np.minimum(0.0, semantics),
                            np.maximum(0.0, semantics)))


def reg_ls(p: Individual, targets: np.ndarray, fit_indices: np.ndarray,
           reg: RegressionConfig) -> Individual:
    """
    Basis-function local search on an individual

    :param p: individual to refine
    :param targets: targets over all cases
    :param fit_indices: cases used for fitting
    :param reg: `gsgp_bench.regression.RegressionConfig`

    :returns: `gsgp_bench.semops.Individual`
    """

    _check_lengths(p.semantics, targets)
    fit_indices = np.asarray(fit_indices, dtype=int)
    if fit_indices.size == 0:
        raise EmptyIndexSet('reg_ls needs fitting cases')

    columns = reg_basis(p.semantics)
    system = LinearSystem(columns[fit_indices],
                          np.asarray(targets, dtype=float)[fit_indices])
    beta = fit(system, reg)
    child = _apply(columns, beta)

    lineage = Lineage(LineageKind.REG_LS, parent_ids=(p.id,),
                      coefficients=tuple(float(b) for b in beta))
    return _new(child, lineage, p.problem, 3 * p.size + 14)

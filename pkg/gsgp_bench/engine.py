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

from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from functools import partial
import logging
from numbers import Integral, Real
from typing import List, Optional, Tuple

import numpy as np

from gsgp_bench.adaptive import (GenState, attempt_local_search,
                                 end_generation, ls_probability)
from gsgp_bench.dataset import (Dataset, IndexSplit, InnerSplit,
                                inner_split, outer_split)
from gsgp_bench.errors import ConfigError, EmptyPopulation
from gsgp_bench.exprtree import (RampedHalfAndHalf, semantics_of_tree,
                                 to_infix)
from gsgp_bench.regression import RegressionConfig
from gsgp_bench.semops import (Individual, Problem, copy_of, gsc, gsm,
                               gsm_ls, initial_individual, reg_ls)

LOGGER = logging.getLogger(__name__)


class Variant(Enum):
    GSGP = 'GSGP'
    GPLS = 'GPLS'
    GPLS_r = 'GPLS_r'
    GPLS_g = 'GPLS_g'
    GPLS_rg = 'GPLS_rg'
    HYBRID = 'HYBRID'
    HYBRID_r = 'HYBRID_r'
    REG_FULL = 'REG_FULL'
    REG_FULL_r = 'REG_FULL_r'
    REG = 'REG'
    REG_r = 'REG_r'
    REG_g = 'REG_g'
    REG_rg = 'REG_rg'

    @property
    def traits(self) -> 'VariantTraits':
        return VARIANT_TRAITS[self]


@dataclass(frozen=True)
class VariantTraits:
    local_mutation: bool  # GSM-LS instead of GSM
    reg_step: bool  # reg_ls over the new population
    ridge: bool
    gen: bool  # validation-gated local search
    cutoff: bool  # local search only up to hybrid_cutoff


VARIANT_TRAITS = {
    Variant.GSGP: VariantTraits(False, False, False, False, False),
    Variant.GPLS: VariantTraits(True, False, False, False, False),
    Variant.GPLS_r: VariantTraits(True, False, True, False, False),
    Variant.GPLS_g: VariantTraits(True, False, False, True, False),
    Variant.GPLS_rg: VariantTraits(True, False, True, True, False),
    Variant.HYBRID: VariantTraits(True, False, False, False, True),
    Variant.HYBRID_r: VariantTraits(True, False, True, False, True),
    Variant.REG_FULL: VariantTraits(False, True, False, False, False),
    Variant.REG_FULL_r: VariantTraits(False, True, True, False, False),
    Variant.REG: VariantTraits(False, True, False, False, True),
    Variant.REG_r: VariantTraits(False, True, True, False, True),
    Variant.REG_g: VariantTraits(False, True, False, True, False),
    Variant.REG_rg: VariantTraits(False, True, True, True, False)
}

INTEGER_FIELDS = ('seed', 'population_size', 'generations',
                  'tournament_size', 'max_depth', 'hybrid_cutoff')
REAL_FIELDS = ('p_crossover', 'p_mutation', 'ms', 'ridge_lambda')


@dataclass(frozen=True)
class EvolutionConfig:
    variant: Variant = Variant.GSGP
    seed: int = 0
    population_size: int = 100
    generations: int = 100
    tournament_size: int = 4
    p_crossover: float = 0.4
    p_mutation: float = 0.6
    ms: float = 0.1
    max_depth: int = 6
    ridge_lambda: float = 0.001
    hybrid_cutoff: int = 10

    def __post_init__(self):
        if not isinstance(self.variant, Variant):
            object.__setattr__(self, 'variant', parse_variant(self.variant))
        for name in INTEGER_FIELDS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, Integral):
                raise ConfigError(f'{name} must be an integer, '
                                  f'got {value!r}')
        for name in REAL_FIELDS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, Real):
                raise ConfigError(f'{name} must be a number, got {value!r}')
        for name in ('population_size', 'tournament_size', 'max_depth',
                     'hybrid_cutoff'):
            if getattr(self, name) < 1:
                raise ConfigError(f'{name} must be positive')
        if self.generations < 0:
            raise ConfigError('generations must be non-negative')
        if not (0 <= self.p_crossover <= 1 and 0 <= self.p_mutation <= 1):
            raise ConfigError('variation probabilities must be in [0, 1]')
        if abs(self.p_crossover + self.p_mutation - 1.0) > 1e-9:
            raise ConfigError('p_crossover + p_mutation must equal 1')
        if not self.ms > 0:
            raise ConfigError('ms must be positive')
        if not self.ridge_lambda > 0:
            raise ConfigError('ridge_lambda must be positive')

    @classmethod
    def from_dict(cls, values: dict) -> 'EvolutionConfig':
        """
        Build a config from a mapping, rejecting unknown keys

        :param values: `dict` of field overrides

        :returns: `gsgp_bench.engine.EvolutionConfig`
        """

        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f'unknown evolution key(s): {sorted(unknown)}')
        values = dict(values)
        # the two probabilities are complementary, one of them is enough
        for given, other in (('p_crossover', 'p_mutation'),
                             ('p_mutation', 'p_crossover')):
            if (given in values and other not in values
                    and isinstance(values[given], Real)):
                values[other] = 1.0 - values[given]
                break
        return cls(**values)

    def to_dict(self) -> dict:
        values = asdict(self)
        values['variant'] = self.variant.value
        return values

    @property
    def regression(self) -> RegressionConfig:
        if self.variant.traits.ridge:
            return RegressionConfig.ridge(self.ridge_lambda)
        return RegressionConfig.ols()

    def local_search_active(self, generation: int) -> bool:
        """Whether the variant's local search runs at a generation"""

        return (not self.variant.traits.cutoff
                or generation <= self.hybrid_cutoff)


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    train_rmse: float
    test_rmse: float
    ls_prob: Optional[float]
    size: int


@dataclass
class RunLog:
    dataset: str
    variant: Variant
    seed: int
    records: List[GenerationRecord] = field(default_factory=list)


def parse_variant(tag) -> Variant:
    """
    Variant from its tag

    :param tag: `str` tag such as 'GPLS_rg'

    :returns: `gsgp_bench.engine.Variant`
    """

    if isinstance(tag, Variant):
        return tag
    try:
        return Variant(tag)
    except ValueError:
        raise ConfigError(f'unknown variant {tag!r}')


def problem_of(dataset: Dataset, split: IndexSplit) -> Problem:
    return Problem(targets=dataset.y, train=split.train, test=split.test)


def initialize_population(config: EvolutionConfig, dataset: Dataset,
                          split: IndexSplit,
                          rng: np.random.Generator) -> List[Individual]:
    """
    Ramped half-and-half initial population with cached fitness

    :param config: `gsgp_bench.engine.EvolutionConfig`
    :param dataset: `gsgp_bench.dataset.Dataset`
    :param split: `gsgp_bench.dataset.IndexSplit`
    :param rng: `numpy.random.Generator`

    :returns: `list` of `gsgp_bench.semops.Individual`
    """

    problem = problem_of(dataset, split)
    trees = RampedHalfAndHalf(dataset.num_vars, config.max_depth)

    population = []
    for _ in range(config.population_size):
        tree = trees(rng)
        semantics = semantics_of_tree(tree, dataset, bounded=False)
        if LOGGER.isEnabledFor(logging.DEBUG):
            LOGGER.debug(f'Initial tree {tree.id}: {to_infix(tree)}')
        population.append(initial_individual(semantics, problem, tree))
    return population


def tournament_select(population: List[Individual], k: int,
                      rng: np.random.Generator) -> Individual:
    """
    Tournament with replacement; lowest train RMSE wins

    :param population: `list` of `gsgp_bench.semops.Individual`
    :param k: tournament size
    :param rng: `numpy.random.Generator`

    :returns: `gsgp_bench.semops.Individual`
    """

    if not population:
        raise EmptyPopulation('tournament on an empty population')
    if k < 1:
        raise ValueError('tournament size must be positive')

    drawn = rng.integers(len(population), size=k)
    fitness = [population[i].train_fitness for i in drawn]
    return population[drawn[int(np.argmin(fitness))]]


def best_of(population: List[Individual]) -> Individual:
    """Best individual on train (first one on ties)"""

    if not population:
        raise EmptyPopulation('empty population')
    return population[int(np.argmin([i.train_fitness for i in population]))]


def _random_pair(trees: RampedHalfAndHalf, dataset: Dataset,
                 rng: np.random.Generator):
    pair = (trees(rng), trees(rng))
    return pair, [semantics_of_tree(t, dataset, bounded=True) for t in pair]


def step_generation(population: List[Individual], config: EvolutionConfig,
                    dataset: Dataset, split: IndexSplit,
                    state: Optional[GenState], rng: np.random.Generator,
                    generation: int = 1,
                    inner: Optional[InnerSplit] = None
                    ) -> Tuple[List[Individual], Optional[GenState]]:
    """
    Produce the next population

    :param population: current population
    :param config: `gsgp_bench.engine.EvolutionConfig`
    :param dataset: `gsgp_bench.dataset.Dataset`
    :param split: `gsgp_bench.dataset.IndexSplit`
    :param state: `gsgp_bench.adaptive.GenState` for gen variants
    :param rng: `numpy.random.Generator`
    :param generation: index of the generation being produced (from 1)
    :param inner: `gsgp_bench.dataset.InnerSplit` for gen variants

    :returns: `tuple` of (new population, updated state)
    """

    if not population:
        raise EmptyPopulation('cannot evolve an empty population')

    traits = config.variant.traits
    if traits.gen and (state is None or inner is None):
        raise ValueError(f'{config.variant.value} needs a GenState '
                         f'and an inner split')

    targets = dataset.y
    reg = config.regression
    trees = RampedHalfAndHalf(dataset.num_vars, config.max_depth)
    active = config.local_search_active(generation)
    probability = ls_probability(state) if traits.gen else 1.0
    fit_indices = inner.x1 if traits.gen else split.train

    offspring = []
    for _ in range(config.population_size):
        if rng.random() < config.p_crossover:
            p1 = tournament_select(population, config.tournament_size, rng)
            p2 = tournament_select(population, config.tournament_size, rng)
            tree = trees(rng)
            tr = semantics_of_tree(tree, dataset, bounded=True)
            offspring.append(gsc(p1, p2, tr, tree=tree))
            continue

        parent = tournament_select(population, config.tournament_size, rng)
        if not (traits.local_mutation and active):
            pair, (r1, r2) = _random_pair(trees, dataset, rng)
            offspring.append(gsm(parent, r1, r2, config.ms, trees=pair))
        elif not traits.gen:
            pair, (r1, r2) = _random_pair(trees, dataset, rng)
            offspring.append(gsm_ls(parent, r1, r2, targets, fit_indices,
                                    reg, trees=pair))
        elif rng.random() < probability:
            pair, (r1, r2) = _random_pair(trees, dataset, rng)
            step = partial(_mutation_step, r1=r1, r2=r2, targets=targets,
                           reg=reg, trees=pair)
            child, state = attempt_local_search(parent, step, inner,
                                                targets, state)
            offspring.append(copy_of(child) if child is parent else child)
        else:
            offspring.append(copy_of(parent))

    if traits.reg_step and active:
        refined = []
        for individual in offspring:
            if not traits.gen:
                refined.append(reg_ls(individual, targets, fit_indices, reg))
            elif rng.random() < probability:
                step = partial(_reg_step, targets=targets, reg=reg)
                individual, state = attempt_local_search(
                    individual, step, inner, targets, state)
                refined.append(individual)
            else:
                refined.append(individual)
        offspring = refined

    elite = best_of(population)
    fitness = [i.train_fitness for i in offspring]
    if elite.train_fitness < min(fitness):
        worst = int(np.argmax(fitness))
        LOGGER.debug(f'Elite {elite.id} replaces offspring {worst}')
        offspring[worst] = elite

    if traits.gen:
        state = end_generation(state)
    return offspring, state


def _mutation_step(parent, fit_indices, r1, r2, targets, reg, trees):
    return gsm_ls(parent, r1, r2, targets, fit_indices, reg, trees=trees)


def _reg_step(individual, fit_indices, targets, reg):
    return reg_ls(individual, targets, fit_indices, reg)


def _record(population: List[Individual], generation: int,
            probability: Optional[float]) -> GenerationRecord:
    best = best_of(population)
    return GenerationRecord(generation=generation,
                            train_rmse=best.train_fitness,
                            test_rmse=best.test_fitness,
                            ls_prob=probability, size=best.size)


def run(config: EvolutionConfig, dataset: Dataset,
        seed: Optional[int] = None) -> RunLog:
    """
    One seeded evolutionary run

    The outer split uses the seed directly; the inner split and the
    evolution draw from separate streams derived from it.

    :param config: `gsgp_bench.engine.EvolutionConfig`
    :param dataset: `gsgp_bench.dataset.Dataset`
    :param seed: run seed, defaults to `config.seed`

    :returns: `gsgp_bench.engine.RunLog`
    """

    seed = config.seed if seed is None else seed
    traits = config.variant.traits
    LOGGER.info(f'Run {config.variant.value} on {dataset.name}, '
                f'seed={seed}')

    split = outer_split(dataset.num_cases, seed)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 2]))

    state, inner = None, None
    if traits.gen:
        state = GenState()
        inner = inner_split(split.train, np.random.SeedSequence([seed, 1]))

    population = initialize_population(config, dataset, split, rng)
    log = RunLog(dataset=dataset.name, variant=config.variant, seed=seed)
    log.records.append(_record(
        population, 0, ls_probability(state) if traits.gen else None))

    for generation in range(1, config.generations + 1):
        probability = ls_probability(state) if traits.gen else None
        population, state = step_generation(
            population, config, dataset, split, state, rng,
            generation=generation, inner=inner)
        record = _record(population, generation, probability)
        log.records.append(record)
        LOGGER.debug(f'gen {generation}: train={record.train_rmse:.6g} '
                     f'test={record.test_rmse:.6g} p={probability}')

    return log

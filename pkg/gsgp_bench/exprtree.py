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

from dataclasses import dataclass, field
import itertools
import logging
from typing import Optional, Sequence, Union

import numpy as np
from scipy.special import expit

from gsgp_bench.dataset import Dataset
from gsgp_bench.errors import VariableOutOfRange

LOGGER = logging.getLogger(__name__)

FUNCTIONS = ('+', '-', '*', '/')

DIVISION_EPSILON = 1e-9
SATURATION = 1e150
# keeps logistic outputs strictly inside (0, 1) in float64
BOUND_MARGIN = 1e-12

_TREE_IDS = itertools.count()


@dataclass(frozen=True)
class Variable:
    index: int


@dataclass(frozen=True)
class Function:
    symbol: str
    left: 'Node'
    right: 'Node'


Node = Union[Variable, Function]


@dataclass(frozen=True)
class RandomTree:
    """Explicit expression tree over the input variables"""

    root: Node
    id: int = field(default_factory=lambda: next(_TREE_IDS))


def saturate(values: np.ndarray) -> np.ndarray:
    """
    Clamp values to +/- SATURATION

    :param values: `numpy.ndarray`

    :returns: `numpy.ndarray` of clamped values
    """

    return np.clip(values, -SATURATION, SATURATION)


def _grow(num_vars: int, depth: int, full: bool,
          rng: np.random.Generator, root: bool = True) -> Node:
    # below the root, grow may stop early; the root of a deeper tree
    # is always a function
    if depth == 1 or (not full and not root and rng.random() < 0.5):
        return Variable(int(rng.integers(num_vars)))

    symbol = FUNCTIONS[rng.integers(len(FUNCTIONS))]
    return Function(symbol,
                    _grow(num_vars, depth - 1, full, rng, root=False),
                    _grow(num_vars, depth - 1, full, rng, root=False))


def generate_ramped(num_vars: int, max_depth: int,
                    rng: np.random.Generator,
                    full: Optional[bool] = None) -> RandomTree:
    """
    Generate one tree of a ramped half-and-half population

    The target depth is drawn uniformly from 1..max_depth. Full trees
    reach the target depth on every branch, grown trees may stop early.

    :param num_vars: number of input variables (the terminal set)
    :param max_depth: maximum depth, a lone terminal having depth 1
    :param rng: `numpy.random.Generator`
    :param full: use the full method; drawn from rng when `None`

    :returns: `gsgp_bench.exprtree.RandomTree`
    """

    if num_vars < 1 or max_depth < 1:
        raise ValueError('num_vars and max_depth must be positive')

    depth = int(rng.integers(1, max_depth + 1))
    if full is None:
        full = bool(rng.random() < 0.5)
    return RandomTree(_grow(num_vars, depth, full, rng))


class RampedHalfAndHalf:
    """Tree source alternating the grow and full methods"""

    def __init__(self, num_vars: int, max_depth: int):
        self.num_vars = num_vars
        self.max_depth = max_depth
        self._full = False

    def __call__(self, rng: np.random.Generator) -> RandomTree:
        tree = generate_ramped(self.num_vars, self.max_depth, rng,
                               full=self._full)
        self._full = not self._full
        return tree


def _evaluate(node: Node, X: np.ndarray) -> np.ndarray:
    if isinstance(node, Variable):
        if not 0 <= node.index < X.shape[1]:
            raise VariableOutOfRange(
                f'x{node.index} with {X.shape[1]} input(s)')
        return X[:, node.index]

    left = _evaluate(node.left, X)
    right = _evaluate(node.right, X)
    with np.errstate(over='ignore', invalid='ignore'):
        if node.symbol == '+':
            out = left + right
        elif node.symbol == '-':
            out = left - right
        elif node.symbol == '*':
            out = left * right
        else:
            protected = np.abs(right) < DIVISION_EPSILON
            out = np.where(protected, 1.0,
                           left / np.where(protected, 1.0, right))
    return saturate(out)


def evaluate(tree: RandomTree, inputs: Sequence[float]) -> float:
    """
    Evaluate a tree on one input vector

    :param tree: `gsgp_bench.exprtree.RandomTree`
    :param inputs: input values, indexed by variable

    :returns: `float` output
    """

    X = np.asarray(inputs, dtype=float).reshape(1, -1)
    return float(_evaluate(tree.root, X)[0])


def semantics_of_tree(tree: RandomTree, dataset: Union[Dataset, np.ndarray],
                      bounded: bool = False) -> np.ndarray:
    """
    Output vector of a tree over every case of a dataset

    :param tree: `gsgp_bench.exprtree.RandomTree`
    :param dataset: `gsgp_bench.dataset.Dataset` or input matrix
    :param bounded: pass outputs through the logistic map

    :returns: `numpy.ndarray` semantics
    """

    X = dataset.X if isinstance(dataset, Dataset) else np.asarray(dataset)
    out = np.asarray(_evaluate(tree.root, X), dtype=float)
    if out.shape != (X.shape[0],):
        out = np.broadcast_to(out, (X.shape[0],)).copy()

    if bounded:
        out = np.clip(expit(out), BOUND_MARGIN, 1.0 - BOUND_MARGIN)
    return out


def node_count(tree: Union[RandomTree, Node]) -> int:
    """
    Total number of nodes

    :param tree: `gsgp_bench.exprtree.RandomTree` or node

    :returns: `int`
    """

    stack = [tree.root if isinstance(tree, RandomTree) else tree]
    count = 0
    while stack:
        node = stack.pop()
        count += 1
        if isinstance(node, Function):
            stack.extend((node.left, node.right))
    return count


def depth(tree: Union[RandomTree, Node]) -> int:
    """Depth of a tree, a lone terminal having depth 1"""

    node = tree.root if isinstance(tree, RandomTree) else tree
    if isinstance(node, Variable):
        return 1
    return 1 + max(depth(node.left), depth(node.right))


def to_infix(tree: Union[RandomTree, Node]) -> str:
    """Readable infix form, used in debug logging"""

    node = tree.root if isinstance(tree, RandomTree) else tree
    if isinstance(node, Variable):
        return f'x{node.index}'
    return f'({to_infix(node.left)} {node.symbol} {to_infix(node.right)})'

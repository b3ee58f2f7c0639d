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
from dataclasses import dataclass, field
from functools import wraps
import json
import logging
from numbers import Integral
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import click
from joblib import Parallel, delayed
import yaml

from gsgp_bench import __version__
from gsgp_bench.dataset import (Dataset, benchmark_table, load_dataset,
                                write_dataset)
from gsgp_bench.engine import (EvolutionConfig, Variant, parse_variant,
                               run as run_evolution)
from gsgp_bench.env import (GSGP_BENCH_LOGLEVEL, GSGP_BENCH_OUTPUT_DIR,
                            GSGP_BENCH_WORKERS)
from gsgp_bench.errors import ConfigError, GSGPBenchError
from gsgp_bench.stats import (convergence, probability_trace,
                              significance_matrix, summarize)
from gsgp_bench.synthetic import GENERATORS

LOGGER = logging.getLogger(__name__)

RUNS_HEADER = ['dataset', 'variant', 'run', 'generation', 'train_rmse',
               'test_rmse', 'ls_prob']

EXPERIMENT_KEYS = {'datasets', 'variants', 'runs', 'seed', 'output_dir',
                   'workers', 'evolution'}


def fmt(value: Optional[float]) -> str:
    """Number as text with 17 significant digits, '' for None"""

    if value is None:
        return ''
    return f'{value:.17g}'


@dataclass
class ExperimentSpec:
    datasets: List[str]
    variants: List[Variant] = field(default_factory=lambda: list(Variant))
    runs: int = 100
    seed: int = 0
    output_dir: str = GSGP_BENCH_OUTPUT_DIR
    workers: int = GSGP_BENCH_WORKERS
    evolution: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ('datasets', 'variants'):
            if not isinstance(getattr(self, name), (list, tuple)):
                raise ConfigError(f'{name} must be a list')
        if not self.datasets:
            raise ConfigError('at least one dataset is required')
        if not self.variants:
            raise ConfigError('at least one variant is required')
        self.datasets = [str(path) for path in self.datasets]
        self.variants = [parse_variant(tag) for tag in self.variants]
        for name in ('runs', 'seed', 'workers'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, Integral):
                raise ConfigError(f'{name} must be an integer, '
                                  f'got {value!r}')
            setattr(self, name, int(value))
        if self.runs < 1:
            raise ConfigError('runs must be at least 1')
        if self.workers < 1:
            raise ConfigError('workers must be at least 1')
        if self.evolution is None:
            self.evolution = {}
        if not isinstance(self.evolution, dict):
            raise ConfigError('evolution must be a mapping')
        self.evolution = dict(self.evolution)
        if {'variant', 'seed'} & set(self.evolution):
            raise ConfigError('variant and seed are set per run, '
                              'not under evolution')
        # validate overrides early
        self.config_for(self.variants[0], self.seed)

    @classmethod
    def from_dict(cls, values: dict) -> 'ExperimentSpec':
        """
        Build an experiment spec, rejecting unknown keys

        A manifest written by `run` is accepted as well.

        :param values: `dict` of experiment settings

        :returns: `gsgp_bench.cli.ExperimentSpec`
        """

        if not isinstance(values, dict):
            raise ConfigError('experiment config must be a mapping')
        if 'experiment' in values:
            values = values['experiment']
            if not isinstance(values, dict):
                raise ConfigError('experiment section must be a mapping')
        unknown = set(values) - EXPERIMENT_KEYS
        if unknown:
            raise ConfigError(f'unknown config key(s): {sorted(unknown)}')
        if 'datasets' not in values:
            raise ConfigError('config needs a datasets list')
        return cls(**values)

    def config_for(self, variant: Variant, seed: int) -> EvolutionConfig:
        return EvolutionConfig.from_dict(
            dict(self.evolution, variant=variant, seed=seed))

    def to_dict(self) -> dict:
        return {
            'datasets': self.datasets,
            'variants': [v.value for v in self.variants],
            'runs': self.runs,
            'seed': self.seed,
            'output_dir': self.output_dir,
            'workers': self.workers,
            'evolution': self.evolution
        }


def load_experiment(path) -> ExperimentSpec:
    """
    Read an experiment spec from a YAML (or JSON manifest) file

    :param path: config file location

    :returns: `gsgp_bench.cli.ExperimentSpec`
    """

    LOGGER.debug(f'Reading experiment config {path}')
    try:
        with open(path, encoding='utf8') as fh:
            values = yaml.safe_load(fh)
    except OSError as err:
        raise ConfigError(f'cannot read {path}: {err}')
    except yaml.YAMLError as err:
        raise ConfigError(f'cannot parse {path}: {err}')
    return ExperimentSpec.from_dict(values or {})


def _execute(dataset: Dataset, config: EvolutionConfig,
             run_index: int) -> List[list]:
    log = run_evolution(config, dataset, config.seed)
    return [[dataset.name, config.variant.value, run_index,
             record.generation, fmt(record.train_rmse),
             fmt(record.test_rmse), fmt(record.ls_prob)]
            for record in log.records]


def cmd_run(spec: ExperimentSpec) -> Tuple[Path, Path]:
    """
    Execute every (dataset, variant, run) and write runs.csv + manifest

    Run r uses seed base_seed + r. Rows are ordered by dataset, variant,
    run and generation whatever the number of workers.

    :param spec: `gsgp_bench.cli.ExperimentSpec`

    :returns: `tuple` of (runs.csv path, manifest.json path)
    """

    output_dir = Path(spec.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    datasets = [load_dataset(path) for path in spec.datasets]
    seeds = [spec.seed + r for r in range(spec.runs)]
    jobs = [(dataset, spec.config_for(variant, seeds[r]), r)
            for dataset in datasets
            for variant in spec.variants
            for r in range(spec.runs)]

    LOGGER.info(f'Executing {len(jobs)} runs with {spec.workers} worker(s)')
    results = Parallel(n_jobs=spec.workers, prefer='processes')(
        delayed(_execute)(*job) for job in jobs)

    runs_path = output_dir / 'runs.csv'
    with runs_path.open('w', newline='', encoding='utf8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(RUNS_HEADER)
        for rows in results:
            writer.writerows(rows)

    manifest = {
        'version': __version__,
        'experiment': spec.to_dict(),
        'resolved': {
            variant.value: spec.config_for(variant, spec.seed).to_dict()
            for variant in spec.variants
        },
        'datasets': {
            dataset.name: {'path': path, 'num_vars': dataset.num_vars,
                           'num_cases': dataset.num_cases}
            for path, dataset in zip(spec.datasets, datasets)
        },
        'seeds': seeds
    }
    manifest_path = output_dir / 'manifest.json'
    with manifest_path.open('w', encoding='utf8') as fh:
        json.dump(manifest, fh, indent=4)
        fh.write('\n')

    LOGGER.info(f'Wrote {runs_path} and {manifest_path}')
    return runs_path, manifest_path


def read_runs(path) -> List[dict]:
    """
    Rows of a runs.csv file

    :param path: runs.csv location

    :returns: `list` of `dict` rows
    """

    with open(path, newline='', encoding='utf8') as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RUNS_HEADER:
            raise ConfigError(f'{path} is not a runs.csv file')
        return list(reader)


def final_samples(rows: Sequence[dict], column: str = 'test_rmse') -> dict:
    """
    Last-generation value of every run, grouped by dataset and variant

    :param rows: runs.csv rows
    :param column: value to collect

    :returns: `dict` of dataset -> {variant -> [values by run]}
    """

    last = {}
    for row in rows:
        key = (row['dataset'], row['variant'], int(row['run']))
        generation = int(row['generation'])
        if key not in last or generation > last[key][0]:
            last[key] = (generation, float(row[column]))

    samples = {}
    for (dataset, variant, run), (_, value) in sorted(
            last.items(), key=lambda item: item[0][2]):
        samples.setdefault(dataset, {}).setdefault(variant, []).append(value)

    # keep variants in order of first appearance
    order = {}
    for row in rows:
        order.setdefault(row['dataset'], {}).setdefault(row['variant'], None)
    return {dataset: {variant: samples[dataset][variant]
                      for variant in order[dataset]}
            for dataset in order}


def _write_csv(path: Path, header: list, rows: list) -> Path:
    with path.open('w', newline='', encoding='utf8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
    return path


def cmd_compare(in_dir, alpha: float = 0.01) -> List[Path]:
    """
    Significance matrix, summaries and curves for every dataset

    :param in_dir: directory holding runs.csv (outputs go there too)
    :param alpha: significance level used for the wins count

    :returns: `list` of written files
    """

    in_dir = Path(in_dir)
    rows = read_runs(in_dir / 'runs.csv')
    written = []

    for dataset, samples in final_samples(rows).items():
        if len(samples) < 2:
            LOGGER.warning(f'Skipping {dataset}: only one variant')
            continue

        matrix = significance_matrix(samples)
        labels = list(matrix.labels)
        matrix_rows = []
        for i, label in enumerate(labels):
            matrix_rows.append([label] + [
                '' if i == j else fmt(matrix.p_values[i, j])
                for j in range(len(labels))])
        written.append(_write_csv(in_dir / f'matrix_{dataset}.csv',
                                  ['variant'] + labels, matrix_rows))

        summary_rows = []
        for i, label in enumerate(labels):
            summary = summarize(samples[label])
            wins = sum(1 for j in range(len(labels))
                       if i != j and matrix.p_values[i, j] <= alpha)
            summary_rows.append([
                label, summary.count, fmt(summary.median), fmt(summary.q1),
                fmt(summary.q3), fmt(summary.min), fmt(summary.max),
                fmt(summary.whisker_low), fmt(summary.whisker_high),
                len(summary.outliers), wins])
        written.append(_write_csv(
            in_dir / f'summary_{dataset}.csv',
            ['variant', 'runs', 'median', 'q1', 'q3', 'min', 'max',
             'whisker_low', 'whisker_high', 'outliers', 'wins'],
            summary_rows))

        dataset_rows = [row for row in rows if row['dataset'] == dataset]
        curves = convergence(dataset_rows)
        written.append(_write_csv(
            in_dir / f'convergence_{dataset}.csv',
            ['variant', 'generation', 'median_train_rmse',
             'median_test_rmse'],
            [[variant, generation, fmt(train), fmt(test)]
             for variant in labels
             for generation, train, test in curves[variant]]))

        traces = probability_trace(dataset_rows)
        if traces:
            written.append(_write_csv(
                in_dir / f'probability_{dataset}.csv',
                ['variant', 'generation', 'mean_ls_prob', 'std_ls_prob'],
                [[variant, generation, fmt(mean), fmt(std)]
                 for variant in labels if variant in traces
                 for generation, mean, std in traces[variant]]))

        LOGGER.info(f'{dataset}: compared {len(labels)} variants')

    if not written:
        raise ConfigError('fewer than 2 variants share a dataset')
    return written


def read_expected(path) -> dict:
    """
    Expected counts table: name,num_vars,num_cases[,alt_num_vars]

    :param path: CSV file location

    :returns: `dict` of name -> (num_vars, num_cases, alt_num_vars)
    """

    expected = {}
    with open(path, newline='', encoding='utf8') as fh:
        for row in csv.DictReader(fh):
            alt = (row.get('alt_num_vars') or '').strip()
            expected[row['name']] = (int(row['num_vars']),
                                     int(row['num_cases']),
                                     int(alt) if alt else None)
    return expected


def cmd_datasets(paths: Sequence, expected: Optional[dict] = None
                 ) -> Tuple[List[list], int]:
    """
    Variable and instance counts of dataset files

    :param paths: CSV file locations
    :param expected: optional `dict` from `read_expected` or
                     `gsgp_bench.dataset.benchmark_table`

    :returns: `tuple` of (rows of name, num_vars, num_cases, status;
              number of files that failed to load)
    """

    rows = []
    failures = 0
    for path in paths:
        try:
            dataset = load_dataset(path)
        except GSGPBenchError as err:
            LOGGER.error(f'{path}: {err}')
            rows.append([Path(path).stem, '', '', f'error: {err}'])
            failures += 1
            continue

        status = ''
        if expected is not None:
            status = 'unknown'
            if dataset.name in expected:
                num_vars, num_cases, alt = expected[dataset.name]
                if (dataset.num_vars, dataset.num_cases) == (num_vars,
                                                             num_cases):
                    status = 'ok'
                elif (alt is not None and dataset.num_vars == alt
                      and dataset.num_cases == num_cases):
                    status = f'ok (table lists {num_vars} variables)'
                else:
                    status = (f'mismatch: expected {num_vars} variables, '
                              f'{num_cases} instances')
                if alt is not None:
                    LOGGER.warning(f'{dataset.name}: variable count stated '
                                   f'as both {num_vars} and {alt}')
        rows.append([dataset.name, dataset.num_vars, dataset.num_cases,
                     status])
    return rows, failures


def cli_errors(func):
    """Turn library errors into a non-zero exit with a message"""

    @wraps(func)
    def inner(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (GSGPBenchError, OSError) as err:
            LOGGER.error(err)
            raise click.ClickException(str(err))

    return inner


@click.group()
@click.version_option(version=__version__)
@click.option('--verbosity', '-v',
              type=click.Choice(['ERROR', 'WARNING', 'INFO', 'DEBUG']),
              default=None, help='Verbosity')
def cli(verbosity):
    """Geometric semantic GP benchmark harness"""

    logging.basicConfig(level=verbosity or GSGP_BENCH_LOGLEVEL,
                        format='%(asctime)s %(levelname)s %(name)s '
                               '%(message)s')


@cli.command()
@click.option('--config', 'config_file', required=True,
              type=click.Path(exists=True, dir_okay=False),
              help='Experiment config (YAML) or manifest.json')
@click.option('--runs', type=int, default=None, help='Runs per variant')
@click.option('--seed', type=int, default=None, help='Base seed')
@click.option('--out', 'output_dir', default=None, help='Output directory')
@click.option('--workers', type=int, default=None,
              help='Parallel run workers')
@cli_errors
def run(config_file, runs, seed, output_dir, workers):
    """Execute seeded run batches and write runs.csv"""

    spec = load_experiment(config_file)
    overrides = {'runs': runs, 'seed': seed, 'output_dir': output_dir,
                 'workers': workers}
    values = spec.to_dict()
    values.update({k: v for k, v in overrides.items() if v is not None})
    spec = ExperimentSpec.from_dict(values)

    runs_path, manifest_path = cmd_run(spec)
    click.echo(f'Wrote {runs_path}')
    click.echo(f'Wrote {manifest_path}')


@cli.command()
@click.option('--in', 'in_dir', required=True,
              type=click.Path(exists=True, file_okay=False),
              help='Directory with runs.csv')
@click.option('--alpha', type=float, default=0.01, show_default=True,
              help='Significance level')
@cli_errors
def compare(in_dir, alpha):
    """Significance matrices and summaries of final test RMSE"""

    for path in cmd_compare(in_dir, alpha):
        click.echo(f'Wrote {path}')


@cli.command()
@click.argument('paths', nargs=-1, required=True)
@click.option('--expect', 'expect_file', default=None,
              type=click.Path(exists=True, dir_okay=False),
              help='CSV table of expected counts')
@click.option('--benchmark-table', 'use_benchmark_table', is_flag=True,
              help='Compare against the seven-dataset benchmark table')
@cli_errors
def datasets(paths, expect_file, use_benchmark_table):
    """Report variable and instance counts of dataset files"""

    expected = None
    if expect_file is not None:
        expected = read_expected(expect_file)
    elif use_benchmark_table:
        expected = benchmark_table()

    rows, failures = cmd_datasets(paths, expected)
    for name, num_vars, num_cases, status in rows:
        click.echo(f'{name}\t{num_vars}\t{num_cases}\t{status}'.rstrip())
    if failures:
        raise click.ClickException(f'{failures} dataset(s) failed to load')


@cli.command()
@click.argument('kind', type=click.Choice(sorted(GENERATORS)))
@click.option('--out', 'output_file', required=True,
              help='Destination CSV file')
@click.option('--seed', type=int, default=0, show_default=True)
@cli_errors
def synthetic(kind, output_file, seed):
    """Write a synthetic benchmark dataset"""

    dataset = GENERATORS[kind](seed=seed)
    click.echo(f'Wrote {write_dataset(dataset, output_file)}')

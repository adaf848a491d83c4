"""
Randomized verification campaigns.

A campaign runs one or more suites over a (q, dim) grid, trials_per_cell
trials per cell. Every trial draws its inputs from its own seed

    derive_seed(campaign seed, crc32(suite), q index, dim index, trial index)

so any single trial can be regenerated or replayed without running the
ones before it, and parallel runs merge into the same report as serial ones.
"""
import os
import time
import zlib
import logging
import functools
import multiprocessing
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np
import yaml

import qgt
from qgt.conf import settings
from qgt.deformed import as_density, deformation, random_density
from qgt.functionals import (EXACT, SUB, FunctionalPoint, IsometryFamily,
                             make_isometry_family, phi, phi_closed_form)
from qgt.inequalities import (check_carlen_lieb_concavity, check_classical_gt,
                              check_corollary6, check_differential_inequality,
                              check_entropy_forms, check_homogeneity,
                              check_phi_concavity, check_phi_with_l_concavity,
                              check_reduced_pair, check_theorem1,
                              decoupled_bound, equality_verdict,
                              theorem1_sides, verdict)
from qgt.result import decode_inputs, encode_inputs, encode_spectra, load_json
from qgt.spectral import (RandomEnsembleSpec, generator, random_pd,
                          random_symmetric)
from qgt.utils import MASK64, derive_seed

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


OUTPUT_FORMATS = ('json', 'csv')


class ConfigError(ValueError):
    pass


class ReplayError(ValueError):
    pass


# --- suites -----------------------------------------------------------------

class Suite(object):
    '''
    One family of randomized checks. generate() turns a trial seed into a
    dict of inputs (matrices, lists of matrices, scalars); evaluate() turns
    those inputs into an InequalityVerdict. Replay feeds decoded inputs
    straight to evaluate().
    '''
    name = None

    def cells(self, q_grid, dims):
        '''(q index, q, dim index, dim) for every cell the suite runs'''
        for qi, q in enumerate(q_grid):
            for di, dim in enumerate(dims):
                yield qi, q, di, dim

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        raise NotImplementedError

    def evaluate(self, inputs, q, tolerance_scale):
        raise NotImplementedError


def _pd(dim, seed, eigenvalue_range):
    return random_pd(RandomEnsembleSpec(dim, eigenvalue_range, seed))


def _point(k, dim, seed, eigenvalue_range):
    return [_pd(dim, derive_seed(seed, i), eigenvalue_range)
            for i in range(k)]


def _family(k, dim, seed, completeness=EXACT):
    return list(make_isometry_family(k, dim, seed, completeness).members)


def _segment_lambda(trial_index, seed):
    '''the fixed SEGMENT_LAMBDAS in turn, then SEGMENT_RANDOM_DRAWS seeded ones'''
    fixed = settings.SEGMENT_LAMBDAS
    slot = trial_index % (len(fixed) + settings.SEGMENT_RANDOM_DRAWS)
    if slot < len(fixed):
        return float(fixed[slot])
    return float(generator(seed).uniform(0.05, 0.95))


def worst(*verdicts):
    '''the verdict with the smallest relative margin'''
    return min(verdicts, key=lambda v: v.relative_margin)


class Theorem1Suite(Suite):
    name = 'theorem1'

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        return {'a': _pd(dim, derive_seed(seed, 0), eigenvalue_range),
                'b': _pd(dim, derive_seed(seed, 1), eigenvalue_range)}

    def evaluate(self, inputs, q, tolerance_scale):
        if deformation(q).q == 2.0:
            lhs, rhs = theorem1_sides(inputs['a'], inputs['b'], q)
            return equality_verdict(lhs, rhs, min(
                tolerance_scale, settings.EQUALITY_TOLERANCE_SCALE))
        return check_theorem1(inputs['a'], inputs['b'], q, tolerance_scale)


class ClassicalGoldenThompsonSuite(Suite):
    name = 'classical_gt'

    def cells(self, q_grid, dims):
        for di, dim in enumerate(dims):
            yield 0, 1.0, di, dim

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        return {'a': random_symmetric(dim, derive_seed(seed, 0)).entries,
                'b': random_symmetric(dim, derive_seed(seed, 1)).entries}

    def evaluate(self, inputs, q, tolerance_scale):
        return check_classical_gt(inputs['a'], inputs['b'], tolerance_scale)


class PhiConcavitySuite(Suite):
    name = 'phi_concavity'
    completeness = EXACT

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        k = settings.FAMILY_SIZE
        return {'family': _family(k, dim, derive_seed(seed, 0),
                                  self.completeness),
                'x': _point(k, dim, derive_seed(seed, 1), eigenvalue_range),
                'y': _point(k, dim, derive_seed(seed, 2), eigenvalue_range),
                'lam': _segment_lambda(trial_index, derive_seed(seed, 3))}

    def evaluate(self, inputs, q, tolerance_scale):
        family = IsometryFamily(inputs['family'], self.completeness)
        return check_phi_concavity(family, FunctionalPoint(inputs['x']),
                                   FunctionalPoint(inputs['y']), q,
                                   inputs['lam'], tolerance_scale)


class PhiWithLSuite(PhiConcavitySuite):
    '''concavity/convexity of Tr exp_q(L + sum H_i^T log_q(A_i) H_i)'''
    name = 'phi_with_l'
    completeness = SUB

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        inputs = super(PhiWithLSuite, self).generate(
            q, dim, seed, trial_index, eigenvalue_range)
        if deformation(q).is_classical:
            inputs['l'] = random_symmetric(dim, derive_seed(seed, 4)).entries
        else:
            inputs['l'] = _pd(dim, derive_seed(seed, 4), eigenvalue_range)
        return inputs

    def evaluate(self, inputs, q, tolerance_scale):
        family = IsometryFamily(inputs['family'], self.completeness)
        return check_phi_with_l_concavity(
            family, inputs['l'], FunctionalPoint(inputs['x']),
            FunctionalPoint(inputs['y']), q, inputs['lam'], tolerance_scale)


class PhiHomogeneitySuite(Suite):
    '''phi(t x) == t phi(x), and phi agrees with its closed form'''
    name = 'phi_homogeneity'

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        k = settings.FAMILY_SIZE
        factors = settings.HOMOGENEITY_FACTORS
        return {'family': _family(k, dim, derive_seed(seed, 0)),
                'x': _point(k, dim, derive_seed(seed, 1), eigenvalue_range),
                'factor': float(factors[trial_index % len(factors)])}

    def evaluate(self, inputs, q, tolerance_scale):
        family = IsometryFamily(inputs['family'], EXACT)
        x = FunctionalPoint(inputs['x'])
        homogeneity = check_homogeneity(family, x, q, inputs['factor'],
                                        tolerance_scale)
        closed_form = equality_verdict(phi(family, x, q),
                                       phi_closed_form(family, x, q),
                                       tolerance_scale)
        return worst(homogeneity, closed_form)


class CarlenLiebSuite(Suite):
    '''
    Tr (sum H_i^T A_i^p H_i)^(1/p) with arbitrary H_i, run at p = q - 1:
    concave below p = 1, convex from p = 1 to 2. q = 1 is skipped.
    '''
    name = 'carlen_lieb'

    def cells(self, q_grid, dims):
        for qi, q, di, dim in super(CarlenLiebSuite, self).cells(q_grid,
                                                                 dims):
            if not deformation(q).is_classical:
                yield qi, q, di, dim

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        k = settings.FAMILY_SIZE
        rng = generator(derive_seed(seed, 0))
        return {'weights': [rng.standard_normal((dim, dim))
                            for _ in range(k)],
                'x': _point(k, dim, derive_seed(seed, 1), eigenvalue_range),
                'y': _point(k, dim, derive_seed(seed, 2), eigenvalue_range),
                'lam': _segment_lambda(trial_index, derive_seed(seed, 3))}

    def evaluate(self, inputs, q, tolerance_scale):
        return check_carlen_lieb_concavity(
            inputs['weights'], FunctionalPoint(inputs['x']),
            FunctionalPoint(inputs['y']), deformation(q).q - 1.0,
            inputs['lam'], tolerance_scale)


class Corollary6Suite(Suite):
    name = 'corollary6'

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        k = settings.FAMILY_SIZE
        return {'family': _family(k, dim, derive_seed(seed, 0)),
                'a': _point(k, dim, derive_seed(seed, 1), eigenvalue_range),
                'b': _point(k, dim, derive_seed(seed, 2), eigenvalue_range)}

    def evaluate(self, inputs, q, tolerance_scale):
        return check_corollary6(IsometryFamily(inputs['family'], EXACT),
                                FunctionalPoint(inputs['a']),
                                FunctionalPoint(inputs['b']), q,
                                tolerance_scale)


class ReducedPairSuite(Suite):
    name = 'reduced_pair'

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        return {'family': _family(2, dim, derive_seed(seed, 0)),
                'b': _point(2, dim, derive_seed(seed, 1), eigenvalue_range)}

    def evaluate(self, inputs, q, tolerance_scale):
        return check_reduced_pair(IsometryFamily(inputs['family'], EXACT),
                                  FunctionalPoint(inputs['b']), q,
                                  tolerance_scale)


class DifferentialSuite(Suite):
    name = 'differential'

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        k = settings.FAMILY_SIZE
        return {'family': _family(k, dim, derive_seed(seed, 0)),
                'x': _point(k, dim, derive_seed(seed, 1), eigenvalue_range),
                'h': _point(k, dim, derive_seed(seed, 2), eigenvalue_range)}

    def evaluate(self, inputs, q, tolerance_scale):
        return check_differential_inequality(
            IsometryFamily(inputs['family'], EXACT),
            FunctionalPoint(inputs['x']), FunctionalPoint(inputs['h']), q,
            tolerance_scale)


class DecouplingSuite(Suite):
    '''the decoupled bound, epsilon cycling through EPSILON_GRID'''
    name = 'decoupling'

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        grid = settings.EPSILON_GRID
        return {'l1': _pd(dim, derive_seed(seed, 0), eigenvalue_range),
                'l2': _pd(dim, derive_seed(seed, 1), eigenvalue_range),
                'epsilon': float(grid[trial_index % len(grid)])}

    def evaluate(self, inputs, q, tolerance_scale):
        return decoupled_bound(inputs['l1'], inputs['l2'], q,
                               inputs['epsilon'], tolerance_scale)


class EntropySuite(Suite):
    name = 'entropy'

    def generate(self, q, dim, seed, trial_index, eigenvalue_range):
        spec = RandomEnsembleSpec(dim, eigenvalue_range, derive_seed(seed, 0))
        return {'rho': random_density(spec)}

    def evaluate(self, inputs, q, tolerance_scale):
        return check_entropy_forms(as_density(inputs['rho']), q,
                                   tolerance_scale)


class _SuiteRegister(object):

    def __init__(self):
        self._suites = {}

    def register(self, cls):
        self._suites[cls.name] = cls()

    def get(self, name):
        return self._suites[name]

    def names(self):
        return tuple(self._suites)

    def all(self):
        return tuple(self._suites.values())


def register_default_suites():
    for suite in (Theorem1Suite,
                  ClassicalGoldenThompsonSuite,
                  PhiConcavitySuite,
                  PhiHomogeneitySuite,
                  PhiWithLSuite,
                  CarlenLiebSuite,
                  Corollary6Suite,
                  ReducedPairSuite,
                  DifferentialSuite,
                  DecouplingSuite,
                  EntropySuite,
                  ):
        suites.register(suite)

suites = _SuiteRegister()
register_default_suites()


def suite_choices():
    return suites.names() + ('all',)


# --- configuration ----------------------------------------------------------

@dataclass(frozen=True)
class CampaignConfig:
    '''
    What to run. Fields left as None take their DEFAULT_* setting.
    '''
    suite: str = 'all'
    q_grid: Optional[tuple] = None
    dims: Optional[tuple] = None
    trials_per_cell: Optional[int] = None
    seed: Optional[int] = None
    eigenvalue_range: Optional[tuple] = None
    tolerance_scale: Optional[float] = None
    output_format: Optional[str] = None

    def __post_init__(self):
        defaults = {
            'q_grid': settings.DEFAULT_Q_GRID,
            'dims': settings.DEFAULT_DIMS,
            'trials_per_cell': settings.DEFAULT_TRIALS,
            'seed': settings.DEFAULT_SEED,
            'eigenvalue_range': settings.DEFAULT_EIGENVALUE_RANGE,
            'tolerance_scale': settings.TOLERANCE_SCALE,
            'output_format': settings.DEFAULT_OUTPUT_FORMAT,
        }
        for name, default in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, default)
        try:
            self._normalize()
        except (TypeError, ValueError) as err:
            if isinstance(err, ConfigError):
                raise
            raise ConfigError('invalid campaign config: %s' % err)

    def _normalize(self):
        if self.suite not in suite_choices():
            raise ConfigError('unknown suite %r, choose from %s'
                              % (self.suite, ', '.join(suite_choices())))

        q_grid = tuple(float(q) for q in self.q_grid)
        if not q_grid:
            raise ConfigError('q_grid is empty')
        for q in q_grid:
            if not 1.0 <= q <= 3.0:
                raise ConfigError('q=%r outside [1, 3]' % q)
        self._set('q_grid', q_grid)

        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ConfigError('dims is empty')
        for dim in dims:
            if not 1 <= dim <= settings.MAX_DIM:
                raise ConfigError('dim=%r outside [1, %d]'
                                  % (dim, settings.MAX_DIM))
        self._set('dims', dims)

        trials = int(self.trials_per_cell)
        if trials < 1:
            raise ConfigError('trials_per_cell must be at least 1, got %r'
                              % trials)
        self._set('trials_per_cell', trials)

        seed = int(self.seed)
        if not 0 <= seed <= MASK64:
            raise ConfigError('seed must be a 64-bit unsigned integer, got %r'
                              % seed)
        self._set('seed', seed)

        low, high = (float(i) for i in self.eigenvalue_range)
        if not 0 < low <= high:
            raise ConfigError('eigenvalue range must satisfy 0 < low <= high, '
                              'got (%r, %r)' % (low, high))
        self._set('eigenvalue_range', (low, high))

        tolerance_scale = float(self.tolerance_scale)
        if not tolerance_scale > 0:
            raise ConfigError('tolerance_scale must be positive, got %r'
                              % tolerance_scale)
        self._set('tolerance_scale', tolerance_scale)

        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError('output_format must be one of %s, got %r'
                              % (', '.join(OUTPUT_FORMATS),
                                 self.output_format))

    def _set(self, name, value):
        object.__setattr__(self, name, value)

    @property
    def suite_names(self):
        if self.suite == 'all':
            return suites.names()
        return (self.suite,)

    @classmethod
    def load(cls, path, **overrides):
        '''
        Read a YAML campaign file; non-None `overrides` (command line flags)
        win over the file.
        '''
        try:
            with open(path) as fobj:
                data = yaml.safe_load(fobj)
        except (IOError, OSError, yaml.YAMLError) as err:
            raise ConfigError("could not read campaign file '%s': %s"
                              % (path, err))
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("campaign file '%s' must hold a mapping" % path)
        known = set(f.name for f in fields(cls))
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError("campaign file '%s': unknown keys %s"
                              % (path, ', '.join(unknown)))
        data.update((k, v) for k, v in overrides.items() if v is not None)
        return cls(**data)

    def to_dict(self):
        return {
            'suite': self.suite,
            'q_grid': list(self.q_grid),
            'dims': list(self.dims),
            'trials_per_cell': self.trials_per_cell,
            'seed': self.seed,
            'eigenvalue_range': list(self.eigenvalue_range),
            'tolerance_scale': self.tolerance_scale,
            'output_format': self.output_format,
        }


# --- records and reports ----------------------------------------------------

@dataclass
class TrialRecord:
    suite: str
    q: float
    dim: int
    trial_index: int
    seed: int
    lhs: Optional[float]
    rhs: Optional[float]
    gap: Optional[float]
    relative_margin: Optional[float]
    holds: bool
    wall_time_ns: int
    tolerance_scale: float
    eigenvalue_range: tuple
    error: Optional[str] = None
    inputs: Optional[dict] = field(default=None, repr=False)

    def to_dict(self):
        data = {
            'suite': self.suite,
            'q': self.q,
            'dim': self.dim,
            'trial_index': self.trial_index,
            'seed': self.seed,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'gap': self.gap,
            'relative_margin': self.relative_margin,
            'holds': self.holds,
            'wall_time_ns': self.wall_time_ns,
            'tolerance_scale': self.tolerance_scale,
            'eigenvalue_range': list(self.eigenvalue_range),
            'error': self.error,
        }
        if self.inputs is not None:
            data['inputs'] = encode_inputs(self.inputs)
            spectra = encode_spectra(self.inputs)
            if spectra:
                data['spectra'] = spectra
        return data


@dataclass(frozen=True)
class CellSummary:
    suite: str
    q: float
    dim: int
    trials: int
    violations: int
    errors: int
    min_margin: Optional[float]
    median_margin: Optional[float]
    max_margin: Optional[float]

    @classmethod
    def of(cls, suite, q, dim, records):
        margins = [r.relative_margin for r in records
                   if r.relative_margin is not None]
        stats = (None, None, None)
        if margins:
            stats = (float(min(margins)), float(np.median(margins)),
                     float(max(margins)))
        return cls(suite, q, dim, len(records),
                   sum(1 for r in records if not r.holds),
                   sum(1 for r in records if r.error is not None), *stats)

    def to_dict(self):
        return {
            'suite': self.suite,
            'q': self.q,
            'dim': self.dim,
            'aggregates': {
                'trials': self.trials,
                'min_relative_margin': self.min_margin,
                'median_relative_margin': self.median_margin,
                'max_relative_margin': self.max_margin,
                'errors': self.errors,
            },
            'violations': self.violations,
        }


class CampaignReport(object):

    def __init__(self, config, cells, records, version=qgt.__version__):
        self.config = config
        self.cells = cells
        self.records = records
        self.version = version

    @property
    def failures(self):
        return [r for r in self.records if not r.holds]

    @property
    def errors(self):
        return sum(1 for r in self.records if r.error is not None)

    @property
    def total_trials(self):
        return len(self.records)

    @property
    def passed(self):
        return all(cell.violations == 0 for cell in self.cells)

    def to_dict(self):
        return {
            'config': self.config.to_dict(),
            'cells': [cell.to_dict() for cell in self.cells],
            'failures': [r.to_dict() for r in self.failures],
            'pass': self.passed,
            'version': self.version,
        }


# --- running ----------------------------------------------------------------

def trial_seed(seed, suite_name, q_index, dim_index, trial_index):
    return derive_seed(seed, zlib.crc32(suite_name.encode('utf8')),
                       q_index, dim_index, trial_index)


@dataclass(frozen=True)
class _Task:
    suite: Suite
    q_index: int
    q: float
    dim_index: int
    dim: int
    trial_index: int


def _tasks(config):
    for name in config.suite_names:
        suite = suites.get(name)
        for qi, q, di, dim in suite.cells(config.q_grid, config.dims):
            for trial in range(config.trials_per_cell):
                yield _Task(suite, qi, q, di, dim, trial)


def run_trial(config, task):
    suite = task.suite
    seed = trial_seed(config.seed, suite.name, task.q_index, task.dim_index,
                      task.trial_index)
    start = time.perf_counter_ns()
    inputs = result = error = None
    try:
        inputs = suite.generate(task.q, task.dim, seed, task.trial_index,
                                config.eigenvalue_range)
        result = suite.evaluate(inputs, task.q, config.tolerance_scale)
    except (ArithmeticError, ValueError) as err:
        error = '%s: %s' % (err.__class__.__name__, err)
    elapsed = time.perf_counter_ns() - start

    record = TrialRecord(
        suite=suite.name, q=task.q, dim=task.dim,
        trial_index=task.trial_index, seed=seed,
        lhs=None, rhs=None, gap=None, relative_margin=None, holds=False,
        wall_time_ns=elapsed, tolerance_scale=config.tolerance_scale,
        eigenvalue_range=config.eigenvalue_range, error=error)
    if result is not None:
        record.lhs = result.lhs
        record.rhs = result.rhs
        record.gap = result.gap
        record.relative_margin = result.relative_margin
        record.holds = result.holds
    if not record.holds:
        record.inputs = inputs
        log.warning('%s q=%g dim=%d trial=%d seed=%d failed: %s', suite.name,
                    task.q, task.dim, task.trial_index, seed,
                    error or 'gap %r below -%r' % (result.gap, result.tol))
    return record


def worker_count(workers=None):
    '''`workers`, else the THREADS setting, as a positive int'''
    if workers is None:
        workers = settings.THREADS
    try:
        count = int(workers)
    except (TypeError, ValueError):
        count = 0
    if count < 1:
        raise ConfigError('worker count must be a positive integer, got %r '
                          '(QGT_THREADS, --threads)' % (workers,))
    return count


def _executor(workers):
    # forked workers inherit the loaded settings
    if 'fork' in multiprocessing.get_all_start_methods():
        context = multiprocessing.get_context('fork')
        return ProcessPoolExecutor(max_workers=workers, mp_context=context)
    return ThreadPoolExecutor(max_workers=workers)


def run_campaign(config, workers=None):
    '''
    Run every (suite, q, dim) cell of `config`. workers=1 is serial; more
    fan the trials out over worker processes. The report does not depend on
    the worker count.
    '''
    tasks = list(_tasks(config))
    workers = min(worker_count(workers), len(tasks))
    log.info('campaign %s: %d trials, seed %d, %d worker(s)', config.suite,
             len(tasks), config.seed, workers)
    if workers > 1:
        chunksize = max(1, len(tasks) // (workers * 8))
        with _executor(workers) as pool:
            records = list(pool.map(functools.partial(run_trial, config),
                                    tasks, chunksize=chunksize))
    else:
        records = [run_trial(config, t) for t in tasks]

    cells = []
    # tasks come grouped by cell, trials in index order
    for start in range(0, len(records), config.trials_per_cell):
        group = records[start:start + config.trials_per_cell]
        first = group[0]
        cell = CellSummary.of(first.suite, first.q, first.dim, group)
        if cell.violations:
            log.info('%s q=%g dim=%d: %d of %d trials violated', cell.suite,
                     cell.q, cell.dim, cell.violations, cell.trials)
        cells.append(cell)

    report = CampaignReport(config, cells, records)
    log.info('campaign %s finished: %d violations, %s', config.suite,
             len(report.failures), 'pass' if report.passed else 'FAIL')
    return report


# --- q sweep ----------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    q: float
    lhs: float
    rhs: float
    gap: float
    relative_margin: float


def seeded_pair(dim, seed, eigenvalue_range=None, a_seed=None, b_seed=None):
    '''
    the (A, B) pair a sweep uses for `seed`. a_seed (b_seed) replaces A (B)
    with the one `seed=a_seed` (`seed=b_seed`) would give, so one side can
    stay fixed while the other varies.
    '''
    if eigenvalue_range is None:
        eigenvalue_range = settings.DEFAULT_EIGENVALUE_RANGE
    a_seed = seed if a_seed is None else a_seed
    b_seed = seed if b_seed is None else b_seed
    return (random_pd(RandomEnsembleSpec(dim, eigenvalue_range,
                                         derive_seed(a_seed, 0))),
            random_pd(RandomEnsembleSpec(dim, eigenvalue_range,
                                         derive_seed(b_seed, 1))))


def sweep_gap(a, b, q_grid):
    '''
    Both sides of the deformed Golden-Thompson bound along q_grid for one
    fixed pair. gap is always rhs - lhs, so its sign flips across q = 2.
    '''
    rows = []
    for q in q_grid:
        lhs, rhs = theorem1_sides(a, b, q)
        v = verdict(lhs, rhs, rhs - lhs)
        rows.append(SweepRow(deformation(q).q, v.lhs, v.rhs, v.gap,
                             v.relative_margin))
    return rows


# --- replay -----------------------------------------------------------------

@dataclass(frozen=True)
class ReplayOutcome:
    record: dict
    verdict: object
    lhs_drift: float
    rhs_drift: float
    error: Optional[str] = None

    @property
    def exact(self):
        '''bit-for-bit the recorded lhs and rhs'''
        return self.lhs_drift == 0.0 and self.rhs_drift == 0.0

    @property
    def matches(self):
        if self.record.get('error') is not None:
            return self.error is not None
        tol = settings.REPLAY_TOLERANCE
        return (self.error is None and self.lhs_drift <= tol and
                self.rhs_drift <= tol)


def _drift(value, recorded):
    if value is None or recorded is None:
        return float('inf')
    return abs(value - recorded) / max(1.0, abs(recorded))


_REQUIRED = ('suite', 'q', 'dim', 'trial_index', 'seed', 'lhs', 'rhs')


def replay_record(record):
    '''Re-evaluate one serialized TrialRecord.'''
    if not isinstance(record, dict):
        raise ReplayError('a trial record must be a mapping')
    missing = [key for key in _REQUIRED if key not in record]
    if missing:
        raise ReplayError('trial record lacks %s' % ', '.join(missing))
    if record['suite'] not in suites.names():
        raise ReplayError('unknown suite %r' % record['suite'])
    suite = suites.get(record['suite'])
    tolerance_scale = record.get('tolerance_scale') or settings.TOLERANCE_SCALE
    try:
        q = deformation(record['q']).q
        if 'inputs' in record:
            inputs = decode_inputs(record['inputs'], record.get('spectra'))
        else:
            inputs = suite.generate(
                q, int(record['dim']), int(record['seed']),
                int(record['trial_index']),
                tuple(record.get('eigenvalue_range') or
                      settings.DEFAULT_EIGENVALUE_RANGE))
    except (TypeError, ValueError) as err:
        raise ReplayError('malformed trial record: %s' % err)

    try:
        result = suite.evaluate(inputs, q, tolerance_scale)
    except (ArithmeticError, ValueError) as err:
        return ReplayOutcome(record, None, float('inf'), float('inf'),
                             '%s: %s' % (err.__class__.__name__, err))
    except (KeyError, TypeError) as err:
        raise ReplayError('malformed trial inputs: %r' % err)
    return ReplayOutcome(record, result, _drift(result.lhs, record['lhs']),
                         _drift(result.rhs, record['rhs']))


def replay(path):
    '''
    Replay a failure file, or every failure of a whole JSON report.
    Returns a list of ReplayOutcome.
    '''
    try:
        data = load_json(path)
    except (IOError, OSError, ValueError) as err:
        raise ReplayError("could not read '%s': %s" % (path, err))
    if isinstance(data, dict) and 'failures' in data and 'cells' in data:
        records = data['failures']
    else:
        records = [data]
    outcomes = [replay_record(record) for record in records]
    for outcome in outcomes:
        if not outcome.exact:
            log.info('%s trial %s: replay drift lhs %r rhs %r',
                     outcome.record['suite'], outcome.record['trial_index'],
                     outcome.lhs_drift, outcome.rhs_drift)
    return outcomes

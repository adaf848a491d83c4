"""
Oracle cross-checks run by `qgt selftest`: every composed derivative against
central finite differences, the dim-1 deformed Golden-Thompson bound against
a direct scalar evaluation, the continuity of phi and the Tsallis entropy
at q = 1, and the first-order decay of the decoupling limit.
"""
import os
import logging
from dataclasses import dataclass

from qgt.conf import settings
from qgt.deformed import (power_function, q_exp_function, q_log_function,
                          random_density, tsallis_entropy,
                          von_neumann_entropy)
from qgt.frechet import (frechet, frechet_finite_difference, relative_error,
                         trace_derivative_identity_check, derivative_function)
from qgt.functionals import (FunctionalPoint, classical_limit_gap,
                             make_isometry_family)
from qgt.inequalities import (check_euler_relation, check_theorem1,
                              decoupling_limit_profile,
                              decoupling_monotonicity,
                              directional_derivative_phi,
                              phi_finite_difference, theorem1_scalar_sides)
from qgt.spectral import (RandomEnsembleSpec, apply_function, random_pd,
                          random_symmetric, trace_of_product)
from qgt.utils import derive_seed

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


# well inside every domain so h = FINITE_DIFFERENCE_STEP stays accurate
ORACLE_EIGENVALUE_RANGE = (0.5, 5.0)
DERIVATIVE_Q_GRID = (1.2, 1.5, 2.0, 2.5, 3.0)
PHI_Q_GRID = (1.0, 1.3, 1.7, 2.0, 2.5, 3.0)
SCALAR_ORACLE_POINTS = (0.05, 0.5, 1.0, 3.0, 20.0)
SCALAR_ORACLE_Q_GRID = (1.0, 1.5, 2.0, 2.5)
CLASSICAL_LIMIT_DELTA = 1e-7
DECOUPLING_Q_GRID = (1.0, 1.5, 2.0, 2.5, 3.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    cases: int
    worst: float
    tolerance: float
    note: str = ''

    @property
    def passed(self):
        return self.worst <= self.tolerance


def _dim(trial):
    return 2 + trial % 7


def _pd(dim, seed):
    return random_pd(RandomEnsembleSpec(dim, ORACLE_EIGENVALUE_RANGE, seed))


def _matrix_functions(q):
    return (q_exp_function(q), q_log_function(q), power_function(q - 1.0))


def check_frechet_finite_difference(seed, trials):
    worst = 0.0
    cases = 0
    for trial in range(trials):
        q = DERIVATIVE_Q_GRID[trial % len(DERIVATIVE_Q_GRID)]
        dim = _dim(trial)
        a = _pd(dim, derive_seed(seed, 1, trial))
        b = random_symmetric(dim, derive_seed(seed, 2, trial), (-1.0, 1.0))
        for f in _matrix_functions(q):
            error = relative_error(frechet(a, f, b).entries,
                                   frechet_finite_difference(a, f, b).entries)
            worst = max(worst, error)
            cases += 1
    return CheckResult('frechet_finite_difference', cases, worst, 1e-6)


def check_trace_identity(seed, trials):
    worst = 0.0
    cases = 0
    for trial in range(trials):
        q = DERIVATIVE_Q_GRID[trial % len(DERIVATIVE_Q_GRID)]
        dim = _dim(trial)
        a = _pd(dim, derive_seed(seed, 3, trial))
        b = random_symmetric(dim, derive_seed(seed, 4, trial), (-1.0, 1.0))
        for f in _matrix_functions(q):
            f_prime = apply_function(a, derivative_function(f))
            scale = max(1.0, abs(trace_of_product(f_prime, b)))
            worst = max(worst,
                        trace_derivative_identity_check(a, f, b) / scale)
            cases += 1
    return CheckResult('trace_identity', cases, worst, 1e-9)


def check_scalar_oracle():
    '''dim-1 matrices against plain scalar arithmetic, a 100-point grid'''
    worst = 0.0
    cases = 0
    for q in SCALAR_ORACLE_Q_GRID:
        for a in SCALAR_ORACLE_POINTS:
            for b in SCALAR_ORACLE_POINTS:
                result = check_theorem1([[a]], [[b]], q)
                lhs, rhs = theorem1_scalar_sides(a, b, q)
                worst = max(worst, abs(result.lhs - lhs) / abs(lhs),
                            abs(result.rhs - rhs) / abs(rhs))
                cases += 1
    return CheckResult('scalar_oracle', cases, worst, 1e-12)


def _family_and_points(seed, trial, count):
    dim = 1 + trial % 5
    k = settings.FAMILY_SIZE
    family = make_isometry_family(k, dim, derive_seed(seed, trial, 0))
    points = [FunctionalPoint(_pd(dim, derive_seed(seed, trial, i, j))
                              for j in range(k))
              for i in range(1, count + 1)]
    return family, points


def check_euler(seed, trials):
    worst = 0.0
    for trial in range(trials):
        q = PHI_Q_GRID[trial % len(PHI_Q_GRID)]
        family, (x,) = _family_and_points(derive_seed(seed, 5), trial, 1)
        result = check_euler_relation(family, x, q)
        worst = max(worst, -result.relative_margin)
    return CheckResult('euler_relation', trials, worst, 1e-8)


def check_phi_derivative(seed, trials):
    worst = 0.0
    for trial in range(trials):
        q = PHI_Q_GRID[trial % len(PHI_Q_GRID)]
        family, (x, h) = _family_and_points(derive_seed(seed, 6), trial, 2)
        derivative = directional_derivative_phi(family, x, h, q)
        estimate = phi_finite_difference(family, x, h, q)
        worst = max(worst,
                    abs(derivative - estimate) / max(1.0, abs(derivative)))
    return CheckResult('phi_derivative_finite_difference', trials, worst, 1e-6)


def check_phi_continuity(seed, trials):
    worst = 0.0
    for trial in range(trials):
        family, (x,) = _family_and_points(derive_seed(seed, 7), trial, 1)
        worst = max(worst, classical_limit_gap(family, x,
                                               CLASSICAL_LIMIT_DELTA))
    return CheckResult('phi_q1_continuity', trials, worst, 1e-5)


def check_entropy_limit(seed, trials):
    worst = 0.0
    for trial in range(trials):
        rho = random_density(RandomEnsembleSpec(
            _dim(trial), ORACLE_EIGENVALUE_RANGE, derive_seed(seed, 8, trial)))
        classical = von_neumann_entropy(rho)
        near = tsallis_entropy(rho, 1.0 + CLASSICAL_LIMIT_DELTA)
        worst = max(worst, abs(near - classical) / classical)
    return CheckResult('entropy_q1_limit', trials, worst, 1e-5)


def check_decoupling_limit(seed, trials):
    '''
    (1 - eps) exp_q((1 - eps)^-1 L2) -> exp_q(L2) monotonically and at first
    order in eps. The note records which way eps + (1 - eps) exp_q(...)
    moves along the grid for each q.
    '''
    worst = 0.0
    cases = 0
    directions = dict((q, set()) for q in DECOUPLING_Q_GRID)
    for trial in range(trials):
        l2 = _pd(_dim(trial), derive_seed(seed, 9, trial))
        for q in DECOUPLING_Q_GRID:
            profile = decoupling_limit_profile(l2, q)
            if profile.monotone:
                worst = max(worst, abs(profile.slope - 1.0))
            else:
                worst = float('inf')
            directions[q].add(decoupling_monotonicity(
                l2, q, settings.EPSILON_GRID).direction)
            cases += 1
    note = ', '.join('q=%g %s' % (q, '/'.join(sorted(directions[q])))
                     for q in DECOUPLING_Q_GRID)
    return CheckResult('decoupling_limit', cases, worst, 0.2, note)


def run_selftest(seed=None, trials=None):
    '''Every named check, in a fixed order.'''
    if seed is None:
        seed = settings.DEFAULT_SEED
    if trials is None:
        trials = settings.DEFAULT_TRIALS
    results = [
        check_frechet_finite_difference(seed, trials),
        check_trace_identity(seed, trials),
        check_scalar_oracle(),
        check_euler(seed, trials),
        check_phi_derivative(seed, trials),
        check_phi_continuity(seed, trials),
        check_entropy_limit(seed, trials),
        check_decoupling_limit(seed, trials),
    ]
    for result in results:
        level = logging.INFO if result.passed else logging.WARNING
        log.log(level, '%s: worst %r over %d cases (tolerance %r)',
                result.name, result.worst, result.cases, result.tolerance)
        if result.note:
            log.info('%s: %s', result.name, result.note)
    return results


def all_passed(results):
    return all(r.passed for r in results)

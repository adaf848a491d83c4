"""
Checkers for the deformed Golden-Thompson inequality and the trace
inequalities it is built from.

Every checker returns an InequalityVerdict whose gap is oriented so that
"the claimed inequality holds" is gap >= -tol, with tol scale-aware:

    scale = max(1, |lhs|, |rhs|)        tol = tolerance_scale * scale

For the q-dependent claims the branch 1 <= q < 2 points one way and
2 <= q <= 3 the other; q = 2 belongs to the second branch and is an
equality.
"""
import os
import math
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from qgt.conf import settings
from qgt.deformed import (deformation, matrix_q_exp, matrix_q_exp_power,
                          power_function, q_exp, q_exp_function,
                          q_log_function, tsallis_entropy,
                          tsallis_entropy_log_form)
from qgt.frechet import frechet
from qgt.functionals import (FunctionalPoint, carlen_lieb, phi, phi_with_l,
                             weighted_log)
from qgt.spectral import (SymmetricMatrix, apply_function,
                          as_positive_definite, as_symmetric, sandwich,
                          trace, trace_of_product)

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


# relative steps below this count as no change
FLAT_STEP = 1e-12


@dataclass(frozen=True)
class InequalityVerdict:
    lhs: float
    rhs: float
    gap: float
    relative_margin: float
    holds: bool
    tol: float
    scale: float


def verdict(lhs, rhs, gap, tolerance_scale=None):
    if tolerance_scale is None:
        tolerance_scale = settings.TOLERANCE_SCALE
    lhs, rhs, gap = float(lhs), float(rhs), float(gap)
    scale = max(1.0, abs(lhs), abs(rhs))
    tol = tolerance_scale * scale
    return InequalityVerdict(lhs=lhs, rhs=rhs, gap=gap,
                             relative_margin=gap / scale,
                             holds=bool(gap >= -tol), tol=tol, scale=scale)


def equality_verdict(lhs, rhs, tolerance_scale=None):
    '''holds when lhs and rhs agree within tol'''
    return verdict(lhs, rhs, -abs(float(lhs) - float(rhs)), tolerance_scale)


def lower_branch(q):
    '''True for 1 <= q < 2, where "lhs <= rhs" is claimed'''
    return deformation(q).lower_branch


def _oriented(lhs, rhs, q, tolerance_scale):
    gap = rhs - lhs if lower_branch(q) else lhs - rhs
    return verdict(lhs, rhs, gap, tolerance_scale)


# --- Golden-Thompson --------------------------------------------------------

def theorem1_sides(a, b, q):
    '''
    lhs = Tr exp_q(A + B)
    rhs = Tr exp_q(A)^(2-q) (A (q-1) + exp_q(B))
    '''
    q = deformation(q)
    a = as_positive_definite(a)
    b = as_positive_definite(b)
    lhs = trace(matrix_q_exp(a + b, q))
    weight = matrix_q_exp_power(a, q)
    inner = SymmetricMatrix(a.entries * (q.q - 1.0) +
                            matrix_q_exp(b, q).entries)
    return lhs, trace_of_product(weight, inner)


def check_theorem1(a, b, q, tolerance_scale=None):
    lhs, rhs = theorem1_sides(a, b, q)
    return _oriented(lhs, rhs, q, tolerance_scale)


def theorem1_scalar_sides(a, b, q):
    '''Both sides for 1x1 matrices, straight from the definitions.'''
    q = float(q)
    if q == 1.0:
        return math.exp(a + b), math.exp(a) * math.exp(b)

    def exp_q(x):
        return (x * (q - 1.0) + 1.0) ** (1.0 / (q - 1.0))
    return exp_q(a + b), exp_q(a) ** (2.0 - q) * (a * (q - 1.0) + exp_q(b))


def check_classical_gt(a, b, tolerance_scale=None):
    '''Tr exp(A + B) <= Tr exp(A) exp(B) for any symmetric A, B'''
    a = as_symmetric(a)
    b = as_symmetric(b)
    lhs = trace(matrix_q_exp(a + b, 1.0))
    rhs = trace_of_product(matrix_q_exp(a, 1.0), matrix_q_exp(b, 1.0))
    return verdict(lhs, rhs, rhs - lhs, tolerance_scale)


# --- differential inequality and its consequences ---------------------------

def directional_derivative_phi(family, x, h, q):
    '''
    d phi(x) h by the chain rule:
    Tr d exp_q(X) (sum H_j^T (d log_q(A_j) h_j) H_j),
    X = sum H_i^T log_q(A_i) H_i.
    '''
    log_q = q_log_function(q)
    inner = family.sandwich(frechet(a, log_q, hj) for a, hj in zip(x, h))
    outer = frechet(weighted_log(family, x, q), q_exp_function(q), inner)
    return trace(outer)


def phi_finite_difference(family, x, h, q, step=None):
    '''(phi(x + t h) - phi(x - t h)) / 2t'''
    if step is None:
        step = settings.FINITE_DIFFERENCE_STEP
    forward = phi(family, x.shifted(h, step), q)
    backward = phi(family, x.shifted(h, -step), q)
    return (forward - backward) / (2.0 * step)


class CrossCheckError(ArithmeticError):
    pass


def derivative_cross_check(family, x, h, q, derivative=None):
    '''
    Relative disagreement between d phi(x) h and a central difference of
    t -> phi(x + t h). The step is FINITE_DIFFERENCE_STEP in units of
    min eig(x_i) / max |eig(h_i)|, so every x_i + t h_i stays well inside
    the cone.
    '''
    if derivative is None:
        derivative = directional_derivative_phi(family, x, h, q)
    floor = min(float(a.spectrum.eigenvalues[0]) for a in x)
    reach = max(float(np.max(np.abs(hj.spectrum.eigenvalues))) for hj in h)
    step = settings.FINITE_DIFFERENCE_STEP * floor / max(reach, floor)
    estimate = phi_finite_difference(family, x, h, q, step)
    return abs(derivative - estimate) / max(1.0, abs(derivative))


def check_differential_inequality(family, x, h, q, tolerance_scale=None,
                                  cross_check=True):
    '''
    d phi(x) h >= phi(h) where phi is concave (q < 2), <= where it is
    convex. lhs is the derivative, rhs is phi(h). With cross_check the
    derivative must first agree with derivative_cross_check, else
    CrossCheckError.
    '''
    derivative = directional_derivative_phi(family, x, h, q)
    if cross_check:
        error = derivative_cross_check(family, x, h, q, derivative)
        if not error <= settings.DERIVATIVE_CROSS_CHECK_TOLERANCE:
            raise CrossCheckError(
                'd phi(x) h = %r disagrees with its finite difference by %r'
                % (derivative, error))
    value = phi(family, h, q)
    gap = derivative - value if lower_branch(q) else value - derivative
    return verdict(derivative, value, gap, tolerance_scale)


def corollary6_rhs(family, a, b, q):
    '''Tr exp_q(X)^(2-q) sum H_j^T (d log_q(A_j) B_j) H_j'''
    weight = matrix_q_exp_power(weighted_log(family, a, q), q)
    log_q = q_log_function(q)
    inner = family.sandwich(frechet(aj, log_q, bj) for aj, bj in zip(a, b))
    return trace_of_product(weight, inner)


def check_corollary6(family, a, b, q, tolerance_scale=None):
    '''phi(B) <= corollary6_rhs for q < 2, >= for q >= 2'''
    return _oriented(phi(family, b, q), corollary6_rhs(family, a, b, q), q,
                     tolerance_scale)


def reduced_pair_rhs(family, b, q):
    '''
    Tr exp_q(H_1^T log_q(B_1) H_1)^(2-q) (H_1^T B_1^(q-1) H_1 + H_2^T B_2 H_2),
    the two-variable case of corollary6_rhs with A_1 = B_1, A_2 = 1.
    '''
    q = deformation(q)
    if family.k != 2 or b.k != 2:
        raise ValueError('the reduced pair needs k = 2, got family k=%d, '
                         'point k=%d' % (family.k, b.k))
    h1, h2 = family.members
    b1, b2 = b.matrices
    weight = matrix_q_exp_power(
        sandwich(h1, apply_function(b1, q_log_function(q))), q)
    inner = (sandwich(h1, apply_function(b1, power_function(q.q - 1.0))) +
             sandwich(h2, b2))
    return trace_of_product(weight, inner)


def check_reduced_pair(family, b, q, tolerance_scale=None):
    return _oriented(phi(family, b, q), reduced_pair_rhs(family, b, q), q,
                     tolerance_scale)


# --- epsilon decoupling -----------------------------------------------------

@dataclass(frozen=True)
class DecouplingParameter:
    epsilon: float

    def __post_init__(self):
        epsilon = float(self.epsilon)
        if not 0.0 < epsilon < 1.0:
            raise ValueError('epsilon must lie in (0, 1), got %r'
                             % self.epsilon)
        object.__setattr__(self, 'epsilon', epsilon)

    def __float__(self):
        return self.epsilon


def _epsilon(value):
    if isinstance(value, DecouplingParameter):
        return value.epsilon
    return DecouplingParameter(value).epsilon


def stretched_exp(l_matrix, q, epsilon):
    '''(1 - eps) exp_q((1 - eps)^-1 L)'''
    l_matrix = as_symmetric(l_matrix)
    stretched = matrix_q_exp(l_matrix * (1.0 / (1.0 - epsilon)), q)
    return stretched.entries * (1.0 - epsilon)


def decoupled_rhs(l1, l2, q, epsilon):
    '''
    Tr exp_q(L1)^(2-q) (L1 (q-1) + eps + (1 - eps) exp_q((1 - eps)^-1 L2))
    '''
    q = deformation(q)
    epsilon = _epsilon(epsilon)
    l1 = as_positive_definite(l1)
    weight = matrix_q_exp_power(l1, q)
    inner = (l1.entries * (q.q - 1.0) + epsilon * np.eye(l1.dim) +
             stretched_exp(l2, q, epsilon))
    return trace_of_product(weight, inner)


def decoupled_bound(l1, l2, q, epsilon, tolerance_scale=None):
    '''Tr exp_q(L1 + L2) against decoupled_rhs, oriented like check_theorem1'''
    l1 = as_positive_definite(l1)
    l2 = as_positive_definite(l2)
    lhs = trace(matrix_q_exp(l1 + l2, q))
    return _oriented(lhs, decoupled_rhs(l1, l2, q, epsilon), q,
                     tolerance_scale)


@dataclass(frozen=True)
class LimitProfile:
    epsilons: Tuple[float, ...]
    deviations: Tuple[float, ...]
    monotone: bool
    slope: float

    @property
    def max_deviation(self):
        return max(self.deviations)


def decoupling_limit_profile(l2, q, epsilons=None):
    '''
    max-norm deviations of (1 - eps) exp_q((1 - eps)^-1 L2) from exp_q(L2)
    along a grid decreasing toward 0, with the log-log slope of their decay.
    '''
    if epsilons is None:
        epsilons = settings.EPSILON_GRID
    epsilons = tuple(_epsilon(e) for e in epsilons)
    if list(epsilons) != sorted(epsilons, reverse=True):
        raise ValueError('epsilon grid must decrease toward 0, got %r'
                         % (epsilons,))
    limit = matrix_q_exp(l2, q).entries
    deviations = tuple(float(np.max(np.abs(stretched_exp(l2, q, e) - limit)))
                       for e in epsilons)
    monotone = all(b < a for a, b in zip(deviations, deviations[1:]))
    slope = math.nan
    if len(epsilons) > 1 and min(deviations) > 0:
        slope = float(np.polyfit(np.log(epsilons), np.log(deviations), 1)[0])
    return LimitProfile(epsilons, deviations, monotone, slope)


def decoupling_limit_check(l2, q, epsilons=None):
    return decoupling_limit_profile(l2, q, epsilons).max_deviation


@dataclass(frozen=True)
class MonotonicityReport:
    epsilons: Tuple[float, ...]
    values: np.ndarray
    direction: str


def decoupling_monotonicity(l2, q, epsilons):
    '''
    Direction of eps -> eps + (1 - eps) exp_q((1 - eps)^-1 l) along an
    increasing grid, for every eigenvalue l of L2: increasing, decreasing,
    constant (q = 2) or mixed. Reports, never asserts.
    '''
    epsilons = tuple(sorted(_epsilon(e) for e in epsilons))
    spectrum = as_symmetric(l2).spectrum.eigenvalues
    values = np.array([e + (1.0 - e) * np.asarray(q_exp(spectrum / (1.0 - e),
                                                         q))
                       for e in epsilons])
    steps = np.diff(values, axis=0)
    flat = FLAT_STEP * max(1.0, float(np.max(np.abs(values))))
    if np.all(np.abs(steps) <= flat):
        direction = 'constant'
    elif np.all(steps > 0):
        direction = 'increasing'
    elif np.all(steps < 0):
        direction = 'decreasing'
    else:
        direction = 'mixed'
    return MonotonicityReport(epsilons, values, direction)


# --- concavity, homogeneity, entropy ----------------------------------------

def check_concavity(functional, x, y, lam, concave=True,
                    tolerance_scale=None):
    '''
    Segment check: f((1 - lam) x + lam y) against (1 - lam) f(x) + lam f(y),
    oriented for concavity (concave=True) or convexity (False). concave=None
    claims f is affine on the segment and checks equality. lhs is the value
    at the mixed point.
    '''
    mixed = functional(x.combine(y, lam))
    chord = (1.0 - lam) * functional(x) + lam * functional(y)
    if concave is None:
        return equality_verdict(mixed, chord, tolerance_scale)
    gap = mixed - chord if concave else chord - mixed
    return verdict(mixed, chord, gap, tolerance_scale)


def curvature(q):
    '''
    The shape phi has in its matrix arguments: True (concave) for q < 2,
    None (affine) at q = 2, False (convex) above.
    '''
    q = deformation(q).q
    if q == 2.0:
        return None
    return q < 2.0


def check_phi_concavity(family, x, y, q, lam=0.5, tolerance_scale=None):
    '''
    phi is concave for 1 <= q <= 2 and convex for 2 <= q <= 3, so at q = 2
    it is affine and both claims reduce to equality.
    '''
    return check_concavity(lambda point: phi(family, point, q), x, y, lam,
                           curvature(q), tolerance_scale)


def check_phi_with_l_concavity(family, l_matrix, x, y, q, lam=0.5,
                               tolerance_scale=None):
    return check_concavity(
        lambda point: phi_with_l(family, l_matrix, point, q), x, y, lam,
        curvature(q), tolerance_scale)


def check_carlen_lieb_concavity(members, x, y, p, lam=0.5,
                                tolerance_scale=None):
    '''concave for 0 < p <= 1, convex for 1 <= p <= 2, linear at p = 1'''
    p = float(p)
    shape = None if p == 1.0 else p < 1.0
    return check_concavity(lambda point: carlen_lieb(members, point, p),
                           x, y, lam, shape, tolerance_scale)


def check_homogeneity(family, x, q, factor, tolerance_scale=None):
    '''phi(t x) == t phi(x)'''
    return equality_verdict(phi(family, x.scaled(factor), q),
                            factor * phi(family, x, q), tolerance_scale)


def check_euler_relation(family, x, q, tolerance_scale=None):
    '''d phi(x) x == phi(x)'''
    return equality_verdict(directional_derivative_phi(family, x, x, q),
                            phi(family, x, q), tolerance_scale)


def check_entropy_forms(rho, q, tolerance_scale=None):
    '''
    (1 - Tr rho^q)/(q - 1) against -Tr rho log_q(rho); also fails on a
    negative entropy.
    '''
    closed = tsallis_entropy(rho, q)
    log_form = tsallis_entropy_log_form(rho, q)
    gap = min(-abs(closed - log_form), closed)
    return verdict(closed, log_form, gap, tolerance_scale)



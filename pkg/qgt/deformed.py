"""
Deformed (Tsallis) logarithm and exponential, scalar and matrix, and the
Tsallis entropy of a density matrix.

For q > 1

    log_q(x) = (x^(q-1) - 1) / (q - 1)           x > 0
    exp_q(x) = (1 + (q-1) x)^(1/(q-1))           x > -1/(q-1)

evaluated as expm1((q-1) ln x)/(q-1) and exp(log1p((q-1) x)/(q-1)) so both
stay accurate as q approaches 1, where they become log and exp.
"""
import os
import math
import logging
from dataclasses import dataclass

import numpy as np

from qgt.conf import settings
from qgt.spectral import (DomainError, PositiveDefiniteMatrix,
                          ScalarFunction, SpectralDecomposition,
                          SymmetricMatrix, apply_function,
                          apply_positive_function,
                          as_positive_definite, random_pd, trace,
                          trace_of_product)

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


@dataclass(frozen=True)
class DeformationParameter:
    q: float

    def __post_init__(self):
        q = float(self.q)
        if not 1.0 <= q <= 3.0:
            raise ValueError('deformation parameter q must lie in [1, 3], '
                             'got %r' % self.q)
        object.__setattr__(self, 'q', q)

    def __float__(self):
        return self.q

    @property
    def is_classical(self):
        return abs(self.q - 1.0) < settings.CLASSICAL_Q_THRESHOLD

    @property
    def lower_branch(self):
        '''1 <= q < 2, where the trace inequalities point "<="'''
        return self.q < 2.0


def deformation(q):
    if isinstance(q, DeformationParameter):
        return q
    return DeformationParameter(q)


def _scalar_or_array(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def exp_domain_bound(q):
    '''Open lower end of the domain of exp_q, -1/(q-1), or -inf at q = 1.'''
    q = deformation(q)
    if q.is_classical:
        return -math.inf
    return -1.0 / (q.q - 1.0)


def q_log(x, q):
    q = deformation(q)
    x = np.asarray(x, dtype=float)
    if not np.all(x > 0):
        raise DomainError('log_q needs positive arguments, got %r'
                          % float(np.min(x)), value=float(np.min(x)),
                          bound=0.0)
    if q.is_classical:
        return _scalar_or_array(np.log(x))
    d = q.q - 1.0
    return _scalar_or_array(np.expm1(d * np.log(x)) / d)


def q_exp(x, q):
    q = deformation(q)
    x = np.asarray(x, dtype=float)
    if q.is_classical:
        return _scalar_or_array(np.exp(x))
    d = q.q - 1.0
    if not np.all(d * x > -1.0):
        worst = float(np.min(x))
        raise DomainError('exp_q(q=%r) needs arguments above %r, got %r'
                          % (q.q, -1.0 / d, worst),
                          value=worst, bound=-1.0 / d)
    return _scalar_or_array(np.exp(np.log1p(d * x) / d))


def q_log_derivative(x, q):
    '''d/dx log_q(x) = x^(q-2)'''
    q = deformation(q)
    x = np.asarray(x, dtype=float)
    if not np.all(x > 0):
        raise DomainError('log_q needs positive arguments, got %r'
                          % float(np.min(x)), value=float(np.min(x)),
                          bound=0.0)
    return _scalar_or_array(np.power(x, q.q - 2.0))


def q_exp_derivative(x, q):
    '''d/dx exp_q(x) = exp_q(x)^(2-q)'''
    q = deformation(q)
    return _scalar_or_array(np.power(q_exp(x, q), 2.0 - q.q))


def q_log_function(q):
    q = deformation(q)
    return ScalarFunction('log_%g' % q.q,
                          lambda x: q_log(x, q),
                          lambda x: q_log_derivative(x, q),
                          lower=0.0)


def q_exp_function(q):
    q = deformation(q)
    return ScalarFunction('exp_%g' % q.q,
                          lambda x: q_exp(x, q),
                          lambda x: q_exp_derivative(x, q),
                          lower=exp_domain_bound(q))


def power_function(p):
    '''x^p on x > 0'''
    p = float(p)
    return ScalarFunction('x^%g' % p,
                          lambda x: np.power(x, p),
                          lambda x: p * np.power(x, p - 1.0),
                          lower=0.0)


def matrix_q_log(matrix, q):
    return apply_function(as_positive_definite(matrix), q_log_function(q))


def matrix_q_exp(matrix, q):
    '''exp_q of a symmetric matrix; positive definite by construction.'''
    return apply_positive_function(matrix, q_exp_function(q))


def matrix_q_exp_power(matrix, q):
    '''exp_q(X)^(2-q), i.e. exp_q' applied to X, in one spectral pass.'''
    q = deformation(q)
    f = ScalarFunction('exp_%g^(2-q)' % q.q,
                       lambda x: q_exp_derivative(x, q),
                       lower=exp_domain_bound(q))
    return apply_positive_function(matrix, f)


class DensityMatrix(PositiveDefiniteMatrix):
    '''Positive definite matrix of unit trace.'''

    def __init__(self, entries, decomposition=None):
        super(DensityMatrix, self).__init__(entries, decomposition)
        total = trace(self)
        if abs(total - 1.0) > settings.DENSITY_TRACE_TOLERANCE:
            raise ValueError('density matrix must have unit trace, got %r'
                             % total)

    @classmethod
    def normalized(cls, matrix):
        '''matrix / Tr(matrix), keeping the eigenbasis'''
        matrix = as_positive_definite(matrix)
        scaled = matrix.scaled(1.0 / trace(matrix))
        return cls(scaled.entries, decomposition=scaled.spectrum)


def as_density(matrix):
    if isinstance(matrix, DensityMatrix):
        return matrix
    if isinstance(matrix, SymmetricMatrix):
        return DensityMatrix(matrix.entries, decomposition=matrix.spectrum)
    return DensityMatrix(matrix)


def maximally_mixed(dim):
    return DensityMatrix(np.eye(dim) / dim)


def regularized_pure_state(dim, floor=None):
    '''diag(1 - (dim-1) floor, floor, ..., floor)'''
    if floor is None:
        floor = settings.PURE_STATE_FLOOR
    eigenvalues = np.full(dim, float(floor))
    eigenvalues[0] = 1.0 - (dim - 1) * floor
    eigenvalues = np.sort(eigenvalues)
    return DensityMatrix(
        np.diag(eigenvalues),
        decomposition=SpectralDecomposition(eigenvalues, np.eye(dim)))


def random_density(spec):
    return DensityMatrix.normalized(random_pd(spec))


def tsallis_entropy(rho, q):
    '''
    S_q(rho) = (1 - Tr rho^q) / (q - 1), von Neumann entropy at q = 1.
    '''
    q = deformation(q)
    eigenvalues = rho.spectrum.eigenvalues
    if q.is_classical:
        return float(-np.sum(eigenvalues * np.log(eigenvalues)))
    return float((1.0 - np.sum(np.power(eigenvalues, q.q))) / (q.q - 1.0))


def tsallis_entropy_log_form(rho, q):
    '''S_q(rho) = -Tr rho log_q(rho), the cross-check form'''
    return -trace_of_product(rho, matrix_q_log(rho, q))


def von_neumann_entropy(rho):
    return tsallis_entropy(rho, 1.0)

"""
Dense real symmetric matrices and the spectral machinery behind every
matrix function in qgt.

Eigenvalues come from a cyclic Jacobi solver. Each sweep is scheduled as a
round-robin tournament, so every round rotates a set of disjoint (p, q)
pairs at once; a sweep still annihilates every off-diagonal pair exactly
once. Random ensembles draw from numpy's PCG64 generator.
"""
import os
import math
import logging
import functools
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from qgt.conf import settings

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


class DomainError(ValueError):
    '''A value lies outside the domain of a scalar function.

    `value` is the offending value, `bound` the open lower boundary.
    '''

    def __init__(self, msg, value=None, bound=None):
        super(DomainError, self).__init__(msg)
        self.value = value
        self.bound = bound


class NotPositiveDefiniteError(DomainError):
    pass


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    basis: np.ndarray

    @property
    def dim(self):
        return len(self.eigenvalues)

    def reconstruct(self, eigenvalues=None):
        '''basis . diag(eigenvalues) . basis^T, symmetrized'''
        if eigenvalues is None:
            eigenvalues = self.eigenvalues
        entries = (self.basis * eigenvalues) @ self.basis.T
        return (entries + entries.T) / 2.0

    def with_eigenvalues(self, eigenvalues):
        '''Same eigenbasis, new eigenvalues, re-sorted ascending.'''
        eigenvalues = np.asarray(eigenvalues, dtype=float)
        order = np.argsort(eigenvalues, kind='stable')
        return SpectralDecomposition(eigenvalues[order], self.basis[:, order])

    def orthogonality_error(self):
        n = self.dim
        return float(np.max(np.abs(self.basis.T @ self.basis - np.eye(n))))


class SymmetricMatrix(object):
    '''
    Immutable dense real symmetric matrix.

    Input is symmetrized as (M + M^T) / 2, which leaves an already
    symmetric matrix bit-for-bit unchanged.
    '''

    def __init__(self, entries, decomposition=None):
        arr = np.array(entries, dtype=float)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError('expected a non-empty square matrix, got shape %s'
                             % (arr.shape,))
        if arr.shape[0] > settings.MAX_DIM:
            raise ValueError('dimension %d exceeds MAX_DIM=%d'
                             % (arr.shape[0], settings.MAX_DIM))
        if not np.all(np.isfinite(arr)):
            raise ValueError('matrix has non-finite entries')
        arr = (arr + arr.T) / 2.0
        arr.flags.writeable = False
        self._entries = arr
        if decomposition is not None:
            self.__dict__['spectrum'] = decomposition

    @classmethod
    def from_decomposition(cls, decomposition):
        return cls(decomposition.reconstruct(), decomposition=decomposition)

    @property
    def entries(self):
        return self._entries

    @property
    def dim(self):
        return self._entries.shape[0]

    @functools.cached_property
    def spectrum(self):
        return decompose(self)

    def trace(self):
        return trace(self)

    def max_norm(self):
        return float(np.max(np.abs(self._entries)))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries.copy()
        return self._entries.astype(dtype)

    def __add__(self, other):
        return SymmetricMatrix(self._entries + _entries_of(other))

    __radd__ = __add__

    def __sub__(self, other):
        return SymmetricMatrix(self._entries - _entries_of(other))

    def __neg__(self):
        return SymmetricMatrix(-self._entries)

    def __mul__(self, scalar):
        return SymmetricMatrix(self._entries * float(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return '<%s dim=%d>' % (self.__class__.__name__, self.dim)


class PositiveDefiniteMatrix(SymmetricMatrix):
    '''
    SymmetricMatrix whose smallest eigenvalue is checked to be positive.
    `spectrum_floor` caches that eigenvalue.
    '''

    def __init__(self, entries, decomposition=None):
        super(PositiveDefiniteMatrix, self).__init__(entries, decomposition)
        floor = float(self.spectrum.eigenvalues[0])
        if not floor > 0:
            raise NotPositiveDefiniteError(
                'matrix is not positive definite: smallest eigenvalue %r'
                % floor, value=floor, bound=0.0)
        self.spectrum_floor = floor

    def scaled(self, factor):
        '''factor * self, reusing the eigenbasis. factor must be positive.'''
        factor = float(factor)
        if not factor > 0:
            raise ValueError('scale factor must be positive, got %r' % factor)
        spectrum = self.spectrum
        return PositiveDefiniteMatrix(
            self.entries * factor,
            decomposition=SpectralDecomposition(spectrum.eigenvalues * factor,
                                                spectrum.basis))


@dataclass(frozen=True)
class ScalarFunction:
    '''
    A vectorized scalar function with an optional closed-form derivative
    and an open lower domain boundary.
    '''
    name: str
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    lower: float = -math.inf

    def __call__(self, x):
        return self.value(x)

    def check_domain(self, values):
        values = np.asarray(values, dtype=float)
        if self.lower == -math.inf or values.size == 0:
            return
        worst = float(np.min(values))
        if not worst > self.lower:
            raise DomainError('%s: eigenvalue %r outside the domain (%r, inf)'
                              % (self.name, worst, self.lower),
                              value=worst, bound=self.lower)


@dataclass(frozen=True)
class RandomEnsembleSpec:
    dim: int
    eigenvalue_range: tuple
    seed: int

    def __post_init__(self):
        low, high = self.eigenvalue_range
        if int(self.dim) < 1:
            raise ValueError('dim must be positive, got %r' % self.dim)
        if not 0 < low <= high:
            raise ValueError('eigenvalue range must satisfy 0 < low <= high, '
                             'got %r' % (self.eigenvalue_range,))
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError('seed must be a 64-bit unsigned integer')


def _entries_of(matrix):
    if isinstance(matrix, SymmetricMatrix):
        return matrix.entries
    return np.asarray(matrix, dtype=float)


def as_symmetric(matrix):
    if isinstance(matrix, SymmetricMatrix):
        return matrix
    return SymmetricMatrix(matrix)


def as_positive_definite(matrix):
    if isinstance(matrix, PositiveDefiniteMatrix):
        return matrix
    if isinstance(matrix, SymmetricMatrix):
        return PositiveDefiniteMatrix(matrix.entries,
                                      decomposition=matrix.spectrum)
    return PositiveDefiniteMatrix(matrix)


def generator(seed):
    '''The one RNG used everywhere: numpy PCG64 seeded with a 64-bit int.'''
    return np.random.Generator(np.random.PCG64(int(seed)))


@functools.lru_cache(maxsize=None)
def _rounds(n):
    '''
    Round-robin schedule over n indices: a list of (p, q) index arrays, the
    pairs within a round are disjoint and every p < q pair occurs once.
    '''
    m = n + n % 2
    ring = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(ring[i], ring[m - 1 - i]) for i in range(m // 2)]
        pairs = sorted((min(a, b), max(a, b)) for a, b in pairs
                       if a < n and b < n)
        if pairs:
            p, q = zip(*pairs)
            rounds.append((np.array(p), np.array(q)))
        ring = [ring[0], ring[-1]] + ring[1:-1]
    return tuple(rounds)


def _off_norm(a):
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a, v, p, q):
    '''
    Annihilate a[p, q] for every pair of the round, in place: the round's
    rotations are disjoint, so they combine into one orthogonal J and
    a <- J^T a J, v <- v J.
    '''
    apq = a[p, q]
    active = apq != 0.0
    theta = np.divide(a[q, q] - a[p, p], 2.0 * apq,
                      out=np.zeros_like(apq), where=active)
    t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) +
                                              np.hypot(theta, 1.0))
    t = np.where(active, t, 0.0)
    c = 1.0 / np.hypot(t, 1.0)
    s = t * c

    rotation = np.eye(a.shape[0])
    rotation[p, p] = c
    rotation[q, q] = c
    rotation[p, q] = s
    rotation[q, p] = -s
    a[...] = rotation.T @ a @ rotation
    a[p, q] = 0.0
    a[q, p] = 0.0
    v[...] = v @ rotation


def decompose(matrix):
    '''
    Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
    Eigenvalues are returned ascending, eigenvectors as basis columns.
    '''
    a = np.array(_entries_of(matrix), dtype=float)
    n = a.shape[0]
    basis = np.eye(n)
    threshold = settings.JACOBI_TOLERANCE * float(np.linalg.norm(a))

    sweeps = 0
    while n > 1 and _off_norm(a) > threshold:
        if sweeps == settings.JACOBI_MAX_SWEEPS:
            raise ConvergenceError(
                'Jacobi did not converge in %d sweeps: off-diagonal norm %r, '
                'threshold %r' % (sweeps, _off_norm(a), threshold))
        for p, q in _rounds(n):
            _rotate(a, basis, p, q)
        sweeps += 1
    log.debug('jacobi dim=%d converged after %d sweeps', n, sweeps)

    eigenvalues = np.diag(a).copy()
    order = np.argsort(eigenvalues, kind='stable')
    return SpectralDecomposition(eigenvalues[order], basis[:, order])


def apply_function(matrix, f):
    '''
    f(M) = basis . diag(f(eigenvalues)) . basis^T

    `f` is a ScalarFunction (domain checked against the spectrum) or any
    vectorized callable.
    '''
    matrix = as_symmetric(matrix)
    spectrum = matrix.spectrum
    if isinstance(f, ScalarFunction):
        f.check_domain(spectrum.eigenvalues)
    values = np.asarray(f(spectrum.eigenvalues), dtype=float)
    if values.shape != spectrum.eigenvalues.shape:
        values = np.broadcast_to(values, spectrum.eigenvalues.shape)
    if not np.all(np.isfinite(values)):
        bad = spectrum.eigenvalues[~np.isfinite(values)][0]
        raise DomainError('%s is not finite at eigenvalue %r'
                          % (getattr(f, 'name', f), float(bad)),
                          value=float(bad))
    return SymmetricMatrix.from_decomposition(
        spectrum.with_eigenvalues(values))


def apply_positive_function(matrix, f):
    '''apply_function for an f with positive values'''
    result = apply_function(matrix, f)
    return PositiveDefiniteMatrix(result.entries,
                                  decomposition=result.spectrum)


def trace(matrix):
    return float(np.trace(_entries_of(matrix)))


def trace_of_product(left, right):
    '''Tr(left . right) for symmetric factors, without forming the product'''
    return float(np.sum(_entries_of(left) * _entries_of(right)))


def sandwich(h, matrix):
    '''h^T . matrix . h as a SymmetricMatrix'''
    h = np.asarray(h, dtype=float)
    return SymmetricMatrix(h.T @ _entries_of(matrix) @ h)


def random_orthogonal(dim, rng):
    '''
    QR of a standard normal matrix with the sign convention diag(R) > 0, so
    the result depends only on the generator stream.
    '''
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs


def random_pd(spec):
    '''
    Seeded positive definite matrix: eigenvalues log-uniform in
    spec.eigenvalue_range, eigenbasis from random_orthogonal. Same
    RandomEnsembleSpec, same bits. The matrix carries the decomposition it
    was built from, so it is never handed to the eigensolver.
    '''
    rng = generator(spec.seed)
    low, high = (float(i) for i in spec.eigenvalue_range)
    basis = random_orthogonal(spec.dim, rng)
    if low == high:
        eigenvalues = np.full(spec.dim, low)
    else:
        eigenvalues = np.exp(rng.uniform(math.log(low), math.log(high),
                                         spec.dim))
    decomposition = SpectralDecomposition(eigenvalues, basis).with_eigenvalues(
        eigenvalues)
    return PositiveDefiniteMatrix(decomposition.reconstruct(),
                                  decomposition=decomposition)


def random_symmetric(dim, seed, entry_range=None):
    '''Symmetric matrix with upper-triangle entries uniform in entry_range.'''
    low, high = entry_range or settings.SYMMETRIC_ENTRY_RANGE
    upper = np.triu(generator(seed).uniform(low, high, (dim, dim)))
    return SymmetricMatrix(upper + np.triu(upper, 1).T)

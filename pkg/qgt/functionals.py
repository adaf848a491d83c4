"""
Trace functionals over k-tuples of positive definite matrices

    phi(A_1..A_k)      = Tr exp_q(sum H_i^T log_q(A_i) H_i)
    phi_with_l(A_1..)  = Tr exp_q(L + sum H_i^T log_q(A_i) H_i)
    carlen_lieb(A_1..) = Tr (sum H_i^T A_i^p H_i)^(1/p)

where the weights H_i form an IsometryFamily (sum H_i^T H_i = 1, or <= 1
for a sub-complete family).
"""
import os
import math
import logging

import numpy as np

from qgt.conf import settings
from qgt.deformed import (deformation, matrix_q_exp, matrix_q_log,
                          power_function)
from qgt.spectral import (PositiveDefiniteMatrix, SymmetricMatrix,
                          apply_function, as_positive_definite,
                          as_symmetric, generator, trace)
from qgt.utils import derive_seed

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


EXACT = 'exact'
SUB = 'sub'


class FamilyError(ValueError):
    pass


class IsometryFamily(object):
    '''
    Square matrices H_1..H_k with sum H_i^T H_i = 1 (EXACT) or <= 1 (SUB).
    '''

    def __init__(self, members, completeness=EXACT):
        members = tuple(np.array(h, dtype=float) for h in members)
        if completeness not in (EXACT, SUB):
            raise FamilyError('completeness must be %r or %r, got %r'
                              % (EXACT, SUB, completeness))
        if not members:
            raise FamilyError('an isometry family needs at least one member')
        if len(members) > settings.MAX_FAMILY_SIZE:
            raise FamilyError('family size %d exceeds MAX_FAMILY_SIZE=%d'
                              % (len(members), settings.MAX_FAMILY_SIZE))
        dim = members[0].shape[0]
        for h in members:
            if h.shape != (dim, dim):
                raise FamilyError('members must all be %dx%d, got %s'
                                  % (dim, dim, h.shape))
            h.flags.writeable = False
        self.members = members
        self.completeness = completeness

        gram = self.gram()
        tol = settings.COMPLETENESS_TOLERANCE
        if completeness == EXACT:
            error = float(np.max(np.abs(gram.entries - np.eye(dim))))
            if error > tol:
                raise FamilyError('sum H_i^T H_i deviates from the identity '
                                  'by %r' % error)
        else:
            top = float(gram.spectrum.eigenvalues[-1])
            if top > 1.0 + tol:
                raise FamilyError('sum H_i^T H_i has eigenvalue %r > 1' % top)

    @property
    def k(self):
        return len(self.members)

    @property
    def dim(self):
        return self.members[0].shape[0]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def gram(self):
        return SymmetricMatrix(sum(h.T @ h for h in self.members))

    def sandwich(self, matrices):
        '''sum H_i^T M_i H_i'''
        return SymmetricMatrix(sum(h.T @ as_symmetric(m).entries @ h
                                   for h, m in zip(self.members, matrices)))

    def __repr__(self):
        return '<IsometryFamily k=%d dim=%d %s>' % (self.k, self.dim,
                                                    self.completeness)


class FunctionalPoint(object):
    '''A k-tuple of positive definite matrices of one dimension.'''

    def __init__(self, matrices):
        self.matrices = tuple(as_positive_definite(m) for m in matrices)
        if not self.matrices:
            raise ValueError('a functional point needs at least one matrix')
        dims = set(m.dim for m in self.matrices)
        if len(dims) != 1:
            raise ValueError('matrices of a point must share one dimension, '
                             'got %s' % sorted(dims))

    @property
    def k(self):
        return len(self.matrices)

    @property
    def dim(self):
        return self.matrices[0].dim

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, index):
        return self.matrices[index]

    def scaled(self, factor):
        return FunctionalPoint(m.scaled(factor) for m in self.matrices)

    def combine(self, other, lam):
        '''(1 - lam) self + lam other, componentwise'''
        _check_compatible(self, other)
        return FunctionalPoint(
            PositiveDefiniteMatrix((1.0 - lam) * x.entries + lam * y.entries)
            for x, y in zip(self.matrices, other.matrices))

    def shifted(self, other, t):
        '''self + t other; raises if a component leaves the cone'''
        _check_compatible(self, other)
        return FunctionalPoint(
            PositiveDefiniteMatrix(x.entries + t * y.entries)
            for x, y in zip(self.matrices, other.matrices))


def _check_compatible(x, y):
    if x.k != y.k or x.dim != y.dim:
        raise ValueError('points differ in shape: k=%d dim=%d vs k=%d dim=%d'
                         % (x.k, x.dim, y.k, y.dim))


def _check_family_point(family, point):
    if family.k != point.k:
        raise ValueError('family has %d members, point has %d matrices'
                         % (family.k, point.k))
    if family.dim != point.dim:
        raise ValueError('family dim %d, point dim %d'
                         % (family.dim, point.dim))


def make_isometry_family(k, dim, seed, completeness=EXACT, scale=None):
    '''
    H_i = G_i S^(-1/2) with Gaussian G_i and S = sum G_i^T G_i. A SUB family
    is an exact one times `scale` (seeded in (0, 1) when not given).
    Ill-conditioned S is redrawn with fresh seed material.
    '''
    if k < 1 or dim < 1:
        raise FamilyError('k and dim must be positive, got k=%r dim=%r'
                          % (k, dim))
    for attempt in range(settings.FAMILY_RETRIES):
        rng = generator(derive_seed(seed, attempt))
        gaussians = [rng.standard_normal((dim, dim)) for _ in range(k)]
        s = SymmetricMatrix(sum(g.T @ g for g in gaussians))
        eigenvalues = s.spectrum.eigenvalues
        if eigenvalues[0] <= 0 or \
                eigenvalues[-1] > settings.CONDITION_LIMIT * eigenvalues[0]:
            log.debug('family seed=%s attempt=%d rejected: spectrum [%r, %r]',
                      seed, attempt, eigenvalues[0], eigenvalues[-1])
            continue
        members = _normalize(gaussians, s)
        # second pass: the gram is now close to 1, so this one is accurate
        members = _normalize(members, SymmetricMatrix(
            sum(h.T @ h for h in members)))
        if completeness == SUB:
            if scale is None:
                scale = rng.uniform(0.1, 0.9)
            if not 0 < scale < 1:
                raise FamilyError('sub family scale must lie in (0, 1), got %r'
                                  % scale)
            members = [scale * h for h in members]
        try:
            return IsometryFamily(members, completeness)
        except FamilyError as err:
            log.debug('family seed=%s attempt=%d rejected: %s',
                      seed, attempt, err)
    raise FamilyError('no well-conditioned family for seed %r after %d tries'
                      % (seed, settings.FAMILY_RETRIES))


def _normalize(members, gram):
    root = apply_function(gram, power_function(-0.5)).entries
    return [h @ root for h in members]


def weighted_log(family, point, q):
    '''sum H_i^T log_q(A_i) H_i'''
    _check_family_point(family, point)
    return family.sandwich(matrix_q_log(a, q) for a in point)


def phi(family, point, q):
    '''Tr exp_q(sum H_i^T log_q(A_i) H_i) for an exact family'''
    if family.completeness != EXACT:
        raise FamilyError('phi needs an exact family, got %r' % family)
    return trace(matrix_q_exp(weighted_log(family, point, q), q))


def phi_closed_form(family, point, q):
    '''
    Tr (sum H_i^T A_i^(q-1) H_i)^(1/(q-1)), the rewriting of phi that shows
    its homogeneity. At q = 1 this is Tr exp(sum H_i^T log(A_i) H_i).
    '''
    q = deformation(q)
    _check_family_point(family, point)
    if q.is_classical:
        inner = family.sandwich(matrix_q_log(a, q) for a in point)
        return trace(matrix_q_exp(inner, q))
    p = q.q - 1.0
    inner = family.sandwich(apply_function(a, power_function(p))
                            for a in point)
    return trace(apply_function(inner, power_function(1.0 / p)))


def phi_with_l(family, l_matrix, point, q):
    '''
    Tr exp_q(L + sum H_i^T log_q(A_i) H_i) for a family with
    sum H_i^T H_i <= 1. L must be positive definite unless q = 1.
    '''
    q = deformation(q)
    if q.is_classical:
        l_matrix = as_symmetric(l_matrix)
    else:
        l_matrix = as_positive_definite(l_matrix)
    if l_matrix.dim != family.dim:
        raise ValueError('L has dim %d, family dim %d'
                         % (l_matrix.dim, family.dim))
    argument = weighted_log(family, point, q) + l_matrix
    return trace(matrix_q_exp(argument, q))


def augment_family(family, l_matrix, q):
    '''
    Complete a strictly sub-complete family with
    H_{k+1} = (1 - sum H_i^T H_i)^(1/2) and return it together with
    A_{k+1} = exp_q(H_{k+1}^-1 L H_{k+1}^-1), so that
    phi(augmented, point + A_{k+1}) == phi_with_l(family, L, point).
    '''
    complement = SymmetricMatrix(np.eye(family.dim) - family.gram().entries)
    floor = float(complement.spectrum.eigenvalues[0])
    if not floor > settings.COMPLETENESS_TOLERANCE:
        raise FamilyError('augmentation needs sum H_i^T H_i < 1; complement '
                          'has smallest eigenvalue %r' % floor)
    root = apply_function(complement, power_function(0.5))
    inverse_root = apply_function(complement, power_function(-0.5)).entries
    l_matrix = as_symmetric(l_matrix)
    extra = matrix_q_exp(
        SymmetricMatrix(inverse_root @ l_matrix.entries @ inverse_root), q)
    augmented = IsometryFamily(family.members + (root.entries,), EXACT)
    return augmented, extra


def carlen_lieb(members, point, p):
    '''Tr (sum H_i^T A_i^p H_i)^(1/p) for arbitrary square H_i, 0 < p <= 2'''
    p = float(p)
    if not 0.0 < p <= 2.0:
        raise ValueError('carlen_lieb needs 0 < p <= 2, got %r' % p)
    members = [np.asarray(h, dtype=float) for h in members]
    if len(members) != point.k:
        raise ValueError('%d weights for %d matrices'
                         % (len(members), point.k))
    power = power_function(p)
    inner = SymmetricMatrix(sum(h.T @ apply_function(a, power).entries @ h
                                for h, a in zip(members, point)))
    eigenvalues = inner.spectrum.eigenvalues
    slack = settings.COMPLETENESS_TOLERANCE * max(1.0, inner.max_norm())
    if eigenvalues[0] < -slack or not eigenvalues[-1] > 0:
        raise ValueError('sum H_i^T A_i^p H_i is not positive semidefinite '
                         'with positive trace: spectrum [%r, %r]'
                         % (eigenvalues[0], eigenvalues[-1]))
    clipped = np.clip(eigenvalues, 0.0, None)
    return float(np.sum(np.power(clipped, 1.0 / p)))


def identity_family(dim):
    return IsometryFamily([np.eye(dim)], EXACT)


def classical_limit_gap(family, point, delta=1e-7):
    '''
    Relative distance between phi at q = 1 + delta and at q = 1, the
    continuity of phi in q at its classical end.
    '''
    at_one = phi(family, point, 1.0)
    near = phi(family, point, 1.0 + delta)
    return abs(near - at_one) / max(abs(at_one), math.ulp(1.0))

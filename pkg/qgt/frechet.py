"""
First-order Frechet derivatives of spectral matrix functions.

In the eigenbasis of A, df(A)B is the Hadamard product of the first
divided-difference table of f with the rotated direction B.
"""
import os
import logging
from dataclasses import dataclass

import numpy as np

from qgt.conf import settings
from qgt.spectral import (ScalarFunction, SymmetricMatrix, apply_function,
                          as_symmetric, trace, trace_of_product)

log = logging.getLogger(os.path.splitext(os.path.basename(__file__))[0])


@dataclass(frozen=True)
class DividedDifferenceTable:
    eigenvalues: np.ndarray
    table: np.ndarray


def divided_differences(eigenvalues, f):
    '''
    f[a, b] = (f(a) - f(b)) / (a - b), and f'((a + b) / 2) for pairs closer
    than DEGENERACY_THRESHOLD * max(1, |a|, |b|), the diagonal included.
    '''
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    a = eigenvalues[:, None]
    b = eigenvalues[None, :]
    delta = a - b
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    degenerate = np.abs(delta) <= settings.DEGENERACY_THRESHOLD * scale

    values = np.asarray(f(eigenvalues), dtype=float)
    quotient = np.divide(values[:, None] - values[None, :], delta,
                         out=np.zeros_like(delta), where=~degenerate)
    midpoint = np.asarray(f.derivative((a + b) / 2.0), dtype=float)
    table = np.where(degenerate, midpoint, quotient)
    return DividedDifferenceTable(eigenvalues, table)


def _require_derivative(f):
    if not isinstance(f, ScalarFunction) or f.derivative is None:
        raise TypeError('a ScalarFunction with a derivative is required, '
                        'got %r' % (f,))


def frechet(a, f, b):
    '''df(A)B by the Daleckii-Krein formula; linear in B.'''
    _require_derivative(f)
    a = as_symmetric(a)
    b = as_symmetric(b)
    if a.dim != b.dim:
        raise ValueError('dimension mismatch: %d vs %d' % (a.dim, b.dim))
    spectrum = a.spectrum
    f.check_domain(spectrum.eigenvalues)

    q = spectrum.basis
    rotated = q.T @ b.entries @ q
    dd = divided_differences(spectrum.eigenvalues, f)
    return SymmetricMatrix(q @ (dd.table * rotated) @ q.T)


def frechet_finite_difference(a, f, b, step=None):
    '''(f(A + hB) - f(A - hB)) / 2h, the oracle for frechet'''
    if step is None:
        step = settings.FINITE_DIFFERENCE_STEP
    a = as_symmetric(a)
    b = as_symmetric(b)
    plus = apply_function(SymmetricMatrix(a.entries + step * b.entries), f)
    minus = apply_function(SymmetricMatrix(a.entries - step * b.entries), f)
    return SymmetricMatrix((plus.entries - minus.entries) / (2.0 * step))


def relative_error(value, reference):
    '''max-norm distance over the larger of the two max-norms'''
    value = np.asarray(value, dtype=float)
    reference = np.asarray(reference, dtype=float)
    scale = max(np.max(np.abs(value)), np.max(np.abs(reference)))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(value - reference)) / scale)


def derivative_function(f):
    _require_derivative(f)
    return ScalarFunction("%s'" % f.name, f.derivative, lower=f.lower)


def trace_derivative_identity_check(a, f, b):
    '''|Tr df(A)B - Tr f'(A)B|'''
    derivative = frechet(a, f, b)
    f_prime = apply_function(a, derivative_function(f))
    return abs(trace(derivative) - trace_of_product(f_prime, b))

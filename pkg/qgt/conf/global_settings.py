'''
Global settings for qgt

This file contains default values for all settings and can be overwritten in
a user's settings.py (see qgt.conf.load_settings). Values are read-only once
a campaign starts.
'''

import os


# Cyclic Jacobi eigensolver. A sweep visits every off-diagonal pair once; the
# iteration stops when the off-diagonal Frobenius norm drops below
# JACOBI_TOLERANCE * ||M||_F.
JACOBI_TOLERANCE = 1e-13
JACOBI_MAX_SWEEPS = 100

ORTHOGONALITY_TOLERANCE = 1e-12

# |q - 1| below this switches the deformed functions to plain log/exp
CLASSICAL_Q_THRESHOLD = 1e-12

# Divided differences fall back to the midpoint derivative when
# |a - b| <= DEGENERACY_THRESHOLD * max(1, |a|, |b|)
DEGENERACY_THRESHOLD = 1e-8

# Central difference step for every finite-difference oracle
FINITE_DIFFERENCE_STEP = 1e-5

# Inequality slack is TOLERANCE_SCALE * max(1, |lhs|, |rhs|); claimed
# equalities (theorem1 at q = 2) use the smaller of the two scales
TOLERANCE_SCALE = 1e-9
EQUALITY_TOLERANCE_SCALE = 1e-10

# Relative disagreement allowed between d phi(x) h and its finite difference
DERIVATIVE_CROSS_CHECK_TOLERANCE = 1e-6

# Isometry families
COMPLETENESS_TOLERANCE = 1e-10
CONDITION_LIMIT = 1e8
FAMILY_RETRIES = 8
MAX_FAMILY_SIZE = 8
# k used by campaign suites
FAMILY_SIZE = 2

MAX_DIM = 64

DENSITY_TRACE_TOLERANCE = 1e-12
PURE_STATE_FLOOR = 1e-12

# Decoupling parameter grid, coarse to fine. Finer than 1e-8 loses precision
# in exp_q((1 - eps)^-1 L).
EPSILON_GRID = (1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8)

# Segment points for concavity/convexity checks: these fixed ones, then
# SEGMENT_RANDOM_DRAWS seeded ones.
SEGMENT_LAMBDAS = (0.25, 0.5, 0.75)
SEGMENT_RANDOM_DRAWS = 2

HOMOGENEITY_FACTORS = (0.1, 1.0, 3.0, 10.0)

# Entries of arbitrary (not necessarily positive) symmetric matrices
SYMMETRIC_ENTRY_RANGE = (-2.0, 2.0)


# Campaign defaults
DEFAULT_SEED = 20140903
DEFAULT_Q_GRID = (1.0, 1.1, 1.5, 1.9, 2.0, 2.1, 2.5, 3.0)
DEFAULT_DIMS = (1, 2, 3, 5, 8)
DEFAULT_TRIALS = 200
DEFAULT_EIGENVALUE_RANGE = (0.05, 20.0)
DEFAULT_OUTPUT_FORMAT = 'json'

# Replayed lhs/rhs must agree with the recorded values to this relative level
REPLAY_TOLERANCE = 1e-12

# Parallel campaign workers, 1 means serial. Checked when a campaign starts.
THREADS = os.environ.get('QGT_THREADS') or os.cpu_count() or 1

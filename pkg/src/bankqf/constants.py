"""Numerical tolerances shared across the package.

Everything that compares floats against a threshold reads it from here.
"""

# linalg
EIG_RESIDUAL_TOL = 1e-10
EIG_COND_MAX = 1e8
EXPM_INVERSE_TOL = 1e-9
EXPM_PATH_AGREEMENT_TOL = 1e-9
ADJOINT_PRODUCT_TOL = 1e-13

# fock
CAR_TOL = 1e-13
STATE_NORM_TOL = 1e-12
INPUT_NORM_TOL = 1e-9
HERMITIAN_TOL = 1e-12

# predator-prey / closed systems
CLOSED_FORM_TOL = 1e-8
CONSERVATION_TOL = 1e-10
PERIODICITY_TOL = 1e-9
UNITARITY_TOL = 1e-10

# open bank model
DECOMPOSITION_TOL = 1e-12
SHARP_INTERFERENCE_TOL = 1e-12
STATIONARY_TOL = 1e-10
ASYMPTOTIC_TOL = 0.02
RANGE_SLACK = 1e-3
QUAD_HALVING_TOL = 1e-6
FD_RESIDUAL_TOL = 1e-4
FD_STEP = 1e-5

# oracle
RK4_EXPM_TOL = 1e-6
RK4_STABILITY_LIMIT = 1.0
RK4_ORDER_RATIO = 12.0

# scenario tags
STATIONARY_TV_TOL = 1e-9
INDISTINGUISHABLE_TOL = 0.02
OSCILLATION_FLOOR = 1e-9  # detrended values below this count as zero
TAIL_FRACTION = 0.25
MONOTONE_SLACK = 1e-8  # forward differences carry Simpson error

"""Frozen reference values.

Each value was produced once by a method independent of the code under test
(closed forms, scipy's ``expm``, extended-precision root finding)
and is pinned here as a literal.
"""

import numpy as np

TWO_PI = 2.0 * np.pi

# prime geodesic lengths of the orbit model (CP^n and its real suborbit)
PRIME_LENGTH = TWO_PI
PRIME_LENGTH_RP = TWO_PI
# orbit distance / principal angle
DISTANCE_SCALE = 2.0
# curvature constant from the unit-speed period
KAPPA = 1.0

# (s, r) -> (c1, c2), 40-digit mpmath root of the cut system
CUT_PAIRS = {
    (2.0, 0.5): (0.195374129624308, 0.8518234215722897),
    (0.5, 0.3): (0.3870575140901704, 0.6285846659611546),
    (-0.5, 0.9): (0.7853152337799759, 0.4588731162185065),
    (10.0, 0.99): (0.04948752416709782, 1.3942062672172146),
    (0.0, 0.7): (0.5538553547219665, 0.5538553547219665),
}

# Ad_{exp(-0.3 v)} Z for n = 1 and v = (1/2)[[0, -i], [-i, 0]], by scipy.linalg.expm
GEODESIC_N1_T03 = np.array(
    [
        [-0.47766824j, -0.1477601 + 0.0j],
        [0.1477601 + 0.0j, 0.47766824j],
    ]
)

# diameter orbit (rotation 1/2) of the eps = 0.1 billiard at H = 0.5
BILLIARD_DIAMETER_PERIOD = 5.9905797236949425

C_UNTWISTED_AT_ONE = np.pi / 12.0

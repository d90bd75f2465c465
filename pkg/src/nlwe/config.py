"""Global numerical tolerances.

All quantities handled by this package are O(1) and the matrices are at most
4x4, so a single default tolerance is adequate.  The environment variable
``NLWE_TOL`` overrides it for a whole process (used e.g. to probe the
numerical floor of the verification suite).
"""

import os

_DEFAULT_TOL = 1e-9


def default_tol() -> float:
    """Default tolerance for PSD / zero tests, overridable via NLWE_TOL."""
    env = os.environ.get("NLWE_TOL")
    if env is None:
        return _DEFAULT_TOL
    return float(env)

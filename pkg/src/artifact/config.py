"""Global numeric configuration.

The working precision (decimal digits for mpmath) can be overridden with the
``ARTIFACT_DPS`` environment variable.
"""
import os

DPS = int(os.environ.get("ARTIFACT_DPS", "50"))

# roots are refined until |f(root)| < ROOT_RESIDUAL * height(f)
ROOT_RESIDUAL = 1e-30

# a root is on the unit circle if | |root| - 1 | < UNIT_CIRCLE_TOL
UNIT_CIRCLE_TOL = 1e-12

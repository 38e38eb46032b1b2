"""Linear PCA->ICA inversion of two-layer nonlinear mixing processes."""

from ._asln import *  # noqa: F401,F403
from ._asln import __doc__  # noqa: F401

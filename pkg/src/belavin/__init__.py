"""Numerical laboratory for the Z_n Belavin vertex model with open boundaries.

The layers build on each other::

    elliptic -> vertex -> boundary -> face -> diffop -> limits -> classical

and every algebraic identity of the model is exposed as a residual function.
``belavin.checks`` bundles them into named checks used by the CLI.
"""

from .elliptic import EllipticContext, ThetaChar, theta_char  # noqa: F401
from .vertex import ModelParams, build_R  # noqa: F401

__version__ = "0.1.0"

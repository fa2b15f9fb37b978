"""Positive stationary states of discretized semilinear heat equations with
nonlinear boundary flux: shooting oracle, tridiagonal Newton continuation,
certified schedule constants, and an implicit-Euler cross-check."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]

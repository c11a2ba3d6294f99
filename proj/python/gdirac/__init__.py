"""Dirac operators with Kirchhoff-type vertex conditions on metric graphs."""

from ._core import *  # noqa: F401,F403
from ._core import NumericError, ValidationError  # noqa: F401

"""Dynamic string-averaging projections (DSAP) and the string-averaging
projected subgradient method (SA-PSM). Set indices are 0-based."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401

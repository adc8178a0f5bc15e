"""Radial mean curvature flow toolkit."""

from ._mcf import *  # noqa: F401,F403
from ._mcf import __version__, McfError  # noqa: F401

"""Switched LC/LR circuit simulator for classical Zeno and anti-Zeno discharge."""

from ._lczeno import *  # noqa: F401,F403
from ._lczeno import __doc__  # noqa: F401

__version__ = "0.1.0"

"""Exact spin-chain simulation of symmetry-protected adiabatic gates."""
from ..spin import spin_operators
from .hamiltonians import *  # noqa: F401,F403
from .layout import *  # noqa: F401,F403
from .schedules import *  # noqa: F401,F403
from .transport import *  # noqa: F401,F403
from . import hamiltonians, layout, schedules, transport

__all__ = ["spin_operators"] + hamiltonians.__all__ + layout.__all__ + schedules.__all__ + transport.__all__

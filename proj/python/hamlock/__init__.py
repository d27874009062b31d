"""Homoclinic and multibump solutions of periodic second-order discrete
Hamiltonian systems: python bindings over the C++ core."""

from ._hamlock import *  # noqa: F401,F403
from ._hamlock import __version__  # noqa: F401

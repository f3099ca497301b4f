"""Monodromy groups of elliptic and hyperelliptic families over the t-line."""

from .errors import MonodromyError
from .family import (TOOL_VERSION, FamilySpec, TwistSpec, legendre_family, monodromy_group,
                     quartic_monodromy, quartic_pencil_family, verify_twist_relation)
from .sl2 import SL2Matrix
from .subgroup import describe

__version__ = TOOL_VERSION

__all__ = ["FamilySpec", "MonodromyError", "SL2Matrix", "TwistSpec", "describe",
           "legendre_family", "monodromy_group", "quartic_monodromy",
           "quartic_pencil_family", "verify_twist_relation", "__version__"]

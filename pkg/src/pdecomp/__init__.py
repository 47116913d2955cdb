"""Finite checks for p-local structure of finite groups.

Builds p-subgroup collections, orbit/fusion/orbit-simplex categories and
finite equivariant complexes for a finite group at a prime, and verifies
the homological identities these objects satisfy at desk scale.
"""

from .perms import Perm
from .groups import PermGroup

__all__ = ["Perm", "PermGroup"]
__version__ = "0.1.0"

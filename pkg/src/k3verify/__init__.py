"""Exact verification of lattice, fibration and zeta-function data for K3 surfaces
with non-symplectic automorphisms of 2-power order."""
from __future__ import annotations

from .delsarte import COVERS, ExponentCover, get_cover, zeta_k3
from .ellfib import WeierstrassModel, fiber_configuration, trivial_lattice
from .kernels import default_backend, set_default_backend
from .lattices import Lattice, discriminant_form, genus_equal, lattice_make, mirror_check, nikulin_triple
from .registry import Registry, SurfaceRecord, load_default, parse_registry

__version__ = "0.1.0"

__all__ = [
    "COVERS",
    "ExponentCover",
    "Lattice",
    "Registry",
    "SurfaceRecord",
    "WeierstrassModel",
    "default_backend",
    "discriminant_form",
    "fiber_configuration",
    "genus_equal",
    "get_cover",
    "lattice_make",
    "load_default",
    "mirror_check",
    "nikulin_triple",
    "parse_registry",
    "set_default_backend",
    "trivial_lattice",
    "zeta_k3",
    "__version__",
]

"""Exact computations with quasi-convex sets in countable direct sums of
cyclic groups ⊕ Z_{m_n}, their characters, and the topologies they carry.

Submodules: ``torus`` (arithmetic in Q/Z), ``abelian`` (groups, characters,
subgroup membership), ``quasiconvex`` (polars and hulls), ``topology``
(neighborhood bases and comparisons), ``constructions`` (character
witnesses and the discontinuous-character builder), ``parsing`` and
``cli``.
"""

from .abelian import (
    Character,
    FiniteTruncation,
    GroupElement,
    ModuliSequence,
    annihilator,
    minimal_multiple_in,
    pairing,
    subgroup_membership,
)
from .constructions import (
    build_discontinuous_character,
    continuity_certificate,
    homomorphism_check,
    witness_not_continuous,
)
from .errors import *  # noqa: F401,F403
from .errors import __all__ as _error_names
from .parsing import parse_character, parse_descriptor, parse_element, parse_moduli_spec
from .quasiconvex import atlas, is_quasiconvex, polar, prepolar, qc_hull
from .topology import compare_at_truncation, nbhd_contains, vm_contains
from .torus import TorusPoint, in_t_m, in_t_plus

__version__ = "0.1.0"

__all__ = [
    "Character",
    "FiniteTruncation",
    "GroupElement",
    "ModuliSequence",
    "TorusPoint",
    "annihilator",
    "atlas",
    "build_discontinuous_character",
    "compare_at_truncation",
    "continuity_certificate",
    "homomorphism_check",
    "in_t_m",
    "in_t_plus",
    "is_quasiconvex",
    "minimal_multiple_in",
    "nbhd_contains",
    "pairing",
    "parse_character",
    "parse_descriptor",
    "parse_element",
    "parse_moduli_spec",
    "polar",
    "prepolar",
    "qc_hull",
    "subgroup_membership",
    "vm_contains",
    "witness_not_continuous",
    *_error_names,
]

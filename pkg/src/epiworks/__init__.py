"""Finite epigroups, unary words and identities.

The submodules are the real interface; the names below are the ones
most scripts reach for.
"""

from .terms import Identity, IdentitySystem, parse_identity, parse_system, parse_word, render_word
from .model import (
    FiniteEpigroup, FiniteUnarySemigroup, cyclic_data, derive_epigroup, load_table,
    parse_table, satisfies, satisfies_system,
)
from .rewrite import factor_tail, normalize_one_letter
from .deduction import load_script, verify_deduction

__version__ = "0.1.0"

__all__ = [
    "Identity", "IdentitySystem", "parse_identity", "parse_system", "parse_word",
    "render_word", "FiniteEpigroup", "FiniteUnarySemigroup", "cyclic_data",
    "derive_epigroup", "load_table", "parse_table", "satisfies", "satisfies_system",
    "factor_tail", "normalize_one_letter", "load_script", "verify_deduction",
]

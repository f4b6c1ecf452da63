"""Photon-added two-variable coherent states on Landau levels.

Closed-form properties (normalisation, overlaps, photon statistics,
squeezing, completeness measure, cavity protocols) together with
truncated two-mode Fock-space oracles that check them.
"""

from .fock import NATURAL, PhysicalScales, TruncationError, TwoModeState
from .states import StateLabel, format_complex, pacs_state, parse_complex, two_variable_cs

__version__ = "0.1.0"

__all__ = [
    "NATURAL",
    "PhysicalScales",
    "StateLabel",
    "TruncationError",
    "TwoModeState",
    "format_complex",
    "pacs_state",
    "parse_complex",
    "two_variable_cs",
]

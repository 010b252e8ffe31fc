"""Semiclassical ping-pong steady states, bistability and cooling forces for a
driven atom in a cavity, with an exact master-equation reference."""

__version__ = "0.1.0"

from .model import (SystemParams, alpha0, coupling, coupling_gradient, cooperativity,  # noqa: E402
                    dressed_resonance_mismatch, nu)
from .states import (SemiclassicalState, Variant, bloch_moments, bounced1, bounced2,  # noqa: E402
                     bounced3, polarized1, polarized2, polarized3, state_residual)
from .bistability import (bistability_condition_nu, bistability_condition_standard,  # noqa: E402
                          bistability_roots, scaled_form_roots)
from .exact import FockBasis, solve_exact  # noqa: E402
from .results import ScanResult  # noqa: E402

__all__ = [
    "SystemParams", "alpha0", "coupling", "coupling_gradient", "cooperativity",
    "dressed_resonance_mismatch", "nu",
    "SemiclassicalState", "Variant", "bloch_moments", "bounced1", "bounced2", "bounced3",
    "polarized1", "polarized2", "polarized3", "state_residual",
    "bistability_condition_nu", "bistability_condition_standard", "bistability_roots",
    "scaled_form_roots",
    "FockBasis", "solve_exact", "ScanResult",
]

"""Parameter sets of the published figures, in units of g0 = 1 and lambda = 1."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .errors import PresetNotFoundError
from .model import SystemParams

AXES = ("position", "drive_strength", "atomic_detuning")


@dataclass(frozen=True)
class Preset:
    name: str
    params: SystemParams
    scan_axis: str
    grid: Tuple[float, ...]
    quantities: Tuple[str, ...]
    position: float = 0.0
    state_variant: str = "polarized2"
    f_variant: str = "V1"
    alpha_d_choice: str = "alpha0"
    drive_axis: str = "N0"
    description: str = ""

    def __post_init__(self):
        if self.scan_axis not in AXES:
            raise ValueError(f"scan axis must be one of {AXES}")


def _grid(lo, hi, n):
    return tuple(float(v) for v in np.linspace(lo, hi, n))


def _p(N0, gamma, kappa, omega_a, omega_c):
    return SystemParams.from_photon_number(N0, gamma, kappa, omega_a, omega_c)


BROAD_LINE = _p(0.9, 0.187, 0.087, 2.8, 0.31)
NARROW_LINE = _p(0.32, 0.02, 0.13, 1.13, 0.7)
FIG3B = _p(2.63, 0.187, 0.094, 6.0, 1 / 6)

_STATE_Q = ("transmission_bounced1", "transmission_exact", "transmission_bounced2",
            "transmission_polarized2", "transmission_ob_high",
            "excited_bounced1", "excited_exact", "excited_bounced2", "excited_polarized2",
            "excited_ob_high")
_D_Q = ("D_at_alpha0", "D_cav_high", "D_cav_low", "D_field_plus_at_alpha0",
        "D_field_plus_at_alpha", "D_exact", "D_at_alpha")
_G_Q = ("G_free", "G_at", "G_field", "G_field_plus_at", "G_translational", "G_exact")
_DG_Q = ("D_field_plus_at_alpha0", "D_exact", "D_cav_low", "D_cav_high", "G_field", "G_exact",
         "temperature_exact", "Gamma_A", "K_c")

POSITIONS = _grid(0.0, 0.5, 101)

_PRESETS = [
    Preset("fig1", _p(0.37, 0.02, 0.6, 1.0, 0.1), "atomic_detuning", _grid(-2.0, 4.0, 121),
           _STATE_Q, description="bistability equation vs exact against atomic detuning"),
    Preset("fig2a", BROAD_LINE, "position", _grid(0.0, 0.5, 201),
           ("photons_polarized1", "photons_exact"),
           description="mean photon number with a broad atomic line"),
    Preset("fig2b", NARROW_LINE, "position", _grid(0.0, 0.5, 201),
           ("photons_polarized1", "photons_exact"),
           description="mean photon number with a narrow atomic line"),
    Preset("fig3a", _p(0.1, 0.02, 0.33, 0.166, 0.166), "drive_strength", _grid(0.05, 3.0, 60),
           ("transmission_ob_low", "transmission_ob_high", "transmission_exact",
            "transmission_polarized2", "transmission_bounced1"),
           description="heterodyne signal against drive (axis: empty-cavity photon number)"),
    Preset("fig3b", FIG3B, "position", POSITIONS,
           ("photons_bounced3", "photons_exact", "photons_polarized2", "photons_polarized1"),
           description="photon number in the intermediate regime"),
    Preset("fig4a", NARROW_LINE, "position", POSITIONS, _D_Q,
           description="diffusion with a narrow atomic line"),
    Preset("fig4b", BROAD_LINE, "position", POSITIONS, _D_Q,
           description="diffusion with a broad atomic line"),
    Preset("fig5a", BROAD_LINE, "position", POSITIONS, _G_Q, f_variant="V2nu",
           description="friction with a broad atomic line"),
    Preset("fig5b", NARROW_LINE, "position", POSITIONS, _G_Q, f_variant="V1",
           description="friction with a narrow atomic line"),
    Preset("fig6a", _p(2.16, 0.0236, 0.13, 6.0, 1 / 6), "position", POSITIONS, _DG_Q,
           state_variant="polarized1", f_variant="V3nu",
           description="diffusion and friction with a reversed rate hierarchy"),
    Preset("fig6b", FIG3B, "position", POSITIONS, _DG_Q,
           state_variant="polarized1", f_variant="V2nu",
           description="diffusion and friction with the fig3b parameters"),
    Preset("fig7", _p(11.0, 0.18, 0.09, -5.0, 0.0), "position", _grid(0.0, 0.5, 51),
           ("D_cav_low", "D_exact", "G_field", "G_exact", "temperature_exact", "photons_exact"),
           state_variant="bounced2", f_variant="V3nu",
           description="red-detuned atom in a resonant cavity trapped off the antinode"),
]

PRESETS: Dict[str, Preset] = {p.name: p for p in _PRESETS}


def get_preset(name) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise PresetNotFoundError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None

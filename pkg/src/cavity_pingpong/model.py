"""Parameters of the driven atom-cavity system and derived complex quantities.

Frequencies are measured in units of the peak coupling g0 and positions in
units of the wavelength. The Hamiltonian in the frame rotating at the probe
frequency is

    H = w_a s+s + w_c a+a + g(x)(a+ s + a s+) + E a+ + E* a

with atomic decay gamma and cavity decay kappa.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import SingularRatesError

__all__ = [
    "SystemParams",
    "ComplexRates",
    "complex_rates",
    "coupling",
    "coupling_gradient",
    "nu",
    "nu_from_coupling",
    "alpha0",
    "empty_cavity_photons",
    "cooperativity",
    "scaled_detunings",
    "nu_from_standard",
    "dressed_resonance_mismatch",
]


@dataclass(frozen=True)
class SystemParams:
    """One scenario. Drive stored canonically as the complex amplitude E.

    Use :meth:`from_photon_number` (or ``replace(N0=...)``) to specify the
    drive by the empty-cavity photon number, in which case E is real and
    positive.

    ``profile`` optionally replaces the cosine mode function; it maps
    x/wavelength to g/g0 and must be vectorizable over numpy arrays if
    gradients are requested numerically.
    """

    gamma: float
    kappa: float
    omega_a: float
    omega_c: float
    E: complex = 0j
    g0: float = 1.0
    wavelength: float = 1.0
    profile: Optional[Callable[[float], float]] = None

    def __post_init__(self):
        if self.gamma < 0 or self.kappa < 0:
            raise ValueError("decay rates must be non-negative")
        if self.g0 <= 0 or self.wavelength <= 0:
            raise ValueError("g0 and wavelength must be positive")
        object.__setattr__(self, "E", complex(self.E))

    @classmethod
    def from_photon_number(cls, N0, gamma, kappa, omega_a, omega_c, **kw):
        if N0 < 0:
            raise ValueError("N0 must be non-negative")
        E = np.sqrt(N0) * abs(complex(omega_c, -kappa))
        return cls(gamma, kappa, omega_a, omega_c, E=E, **kw)

    def replace(self, **changes):
        """Copy with changes; ``N0=`` re-derives a real positive E."""
        N0 = changes.pop("N0", None)
        new = dataclasses.replace(self, **changes)
        if N0 is not None:
            if N0 < 0:
                raise ValueError("N0 must be non-negative")
            E = np.sqrt(N0) * abs(new.wct)
            new = dataclasses.replace(new, E=E)
        return new

    @property
    def wat(self) -> complex:
        return complex(self.omega_a, -self.gamma)

    @property
    def wct(self) -> complex:
        return complex(self.omega_c, -self.kappa)

    @property
    def N0(self) -> float:
        return empty_cavity_photons(self)

    def to_dict(self):
        """Plain scalar fields (profile excluded), for hashing and reports."""
        return {"gamma": self.gamma, "kappa": self.kappa,
                "omega_a": self.omega_a, "omega_c": self.omega_c,
                "E": self.E, "g0": self.g0, "wavelength": self.wavelength}


@dataclass(frozen=True)
class ComplexRates:
    wat: complex
    wct: complex


def complex_rates(params: SystemParams) -> ComplexRates:
    return ComplexRates(params.wat, params.wct)


def coupling(params: SystemParams, x):
    """g(x); the cosine standing wave g0 cos(2 pi x / lambda) by default."""
    u = np.asarray(x, dtype=float) / params.wavelength
    if params.profile is None:
        g = params.g0 * np.cos(2 * np.pi * u)
    else:
        g = params.g0 * np.asarray(params.profile(u), dtype=float)
    return float(g) if np.ndim(g) == 0 else g


def coupling_gradient(params: SystemParams, x, h=1e-6):
    """dg/dx. Analytic for the cosine profile, central difference otherwise."""
    x = np.asarray(x, dtype=float)
    if params.profile is None:
        k = 2 * np.pi / params.wavelength
        d = -params.g0 * k * np.sin(k * x)
    else:
        d = (coupling(params, x + h) - coupling(params, x - h)) / (2 * h)
    return float(d) if np.ndim(d) == 0 else d


def nu_from_coupling(params: SystemParams, g) -> complex:
    wat, wct = params.wat, params.wct
    if wat == 0 or wct == 0:
        raise SingularRatesError("complex atomic or cavity rate is zero")
    return g * g / (wat * wct)


def nu(params: SystemParams, x) -> complex:
    """Structure parameter g(x)^2 / (w~_a w~_c)."""
    return nu_from_coupling(params, coupling(params, x))


def alpha0(params: SystemParams) -> complex:
    """Empty-cavity amplitude E / w~_c."""
    if params.wct == 0:
        raise SingularRatesError("cavity rate w_c - i kappa is zero")
    return params.E / params.wct


def empty_cavity_photons(params: SystemParams) -> float:
    return abs(alpha0(params)) ** 2


def cooperativity(params: SystemParams, x) -> float:
    if params.kappa * params.gamma == 0:
        raise SingularRatesError("cooperativity needs kappa*gamma > 0")
    g = coupling(params, x)
    return g * g / (2 * params.kappa * params.gamma)


def scaled_detunings(params: SystemParams):
    """(delta, theta) = (w_a/gamma, w_c/kappa)."""
    if params.kappa * params.gamma == 0:
        raise SingularRatesError("scaled detunings need kappa*gamma > 0")
    return params.omega_a / params.gamma, params.omega_c / params.kappa


def nu_from_standard(C, delta, theta):
    return 2 * C / ((delta - 1j) * (theta - 1j))


def dressed_resonance_mismatch(params: SystemParams, x) -> float:
    """Detuning of the lower dressed state from the probe."""
    g = coupling(params, x)
    wa, wc = params.omega_a, params.omega_c
    return 0.5 * (wa + wc) - 0.5 * np.sqrt(4 * g * g + (wa - wc) ** 2)

"""Factorized steady states built by alternately referring field and atom.

Every state is a coherent field amplitude ``alpha`` (with <a> = -alpha)
times the Bloch steady state of an atom driven by that field. The bounced
family feeds a saturation back into the linear response alpha0/(1-nu); the
polarized family adds the polarization of a referred state to alpha0.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Tuple

from .errors import SingularStateError
from .model import SystemParams, alpha0, coupling, nu_from_coupling

EPS_SING = 1e-10


class Variant(str, enum.Enum):
    BOUNCED1 = "bounced1"
    BOUNCED2 = "bounced2"
    BOUNCED3 = "bounced3"
    POLARIZED1 = "polarized1"
    POLARIZED2 = "polarized2"
    POLARIZED3 = "polarized3"
    BISTABILITY_ROOT = "bistability_root"


@dataclass(frozen=True)
class SemiclassicalState:
    variant: Variant
    x: float
    g: float
    alpha: complex
    beta: complex
    s: float
    referred_saturations: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def photon_number(self):
        return abs(self.alpha) ** 2


@dataclass(frozen=True)
class BlochMoments:
    photon_number: float
    sigma_z: float
    sigma: complex
    excited_population: float
    dipole_force_expectation: float


def _make(variant, params, x, g, alpha, chain=()):
    beta = g * alpha / params.wat
    s = 2 * abs(beta) ** 2
    return SemiclassicalState(Variant(variant), float(x), float(g), complex(alpha),
                              complex(beta), float(s), tuple(float(c) for c in chain))


def _eta(params, g):
    return 2 * g * g / abs(params.wat) ** 2


def _bounce(a0, nu_ref, variant, eps):
    d = abs(1 - nu_ref)
    if d <= eps:
        raise SingularStateError(f"{variant}: |1 - nu| = {d:.3e} at the bounced pole",
                                 variant=variant, distance=d)
    return a0 / (1 - nu_ref)


def _setup(params, x):
    g = coupling(params, x)
    return g, nu_from_coupling(params, g), alpha0(params)


def bounced1(params: SystemParams, x, eps=EPS_SING) -> SemiclassicalState:
    g, v, a0 = _setup(params, x)
    return _make(Variant.BOUNCED1, params, x, g, _bounce(a0, v, "bounced1", eps))


def bounced2(params: SystemParams, x, eps=EPS_SING) -> SemiclassicalState:
    g, v, a0 = _setup(params, x)
    a1 = _bounce(a0, v, "bounced1", eps)
    s1 = _eta(params, g) * abs(a1) ** 2
    a2 = _bounce(a0, v / (1 + s1), "bounced2", eps)
    return _make(Variant.BOUNCED2, params, x, g, a2, (s1,))


def polarized1(params: SystemParams, x) -> SemiclassicalState:
    g, v, a0 = _setup(params, x)
    return _make(Variant.POLARIZED1, params, x, g, a0 * (1 + v))


def polarized2(params: SystemParams, x, eps=EPS_SING) -> SemiclassicalState:
    g, v, a0 = _setup(params, x)
    eta = _eta(params, g)
    a1 = _bounce(a0, v, "bounced1", eps)
    s1 = eta * abs(a1) ** 2
    nu1 = v / (1 + s1)
    a2 = _bounce(a0, nu1, "bounced2", eps)
    s2 = eta * abs(a2) ** 2
    nu_q = v / (1 + s2) - nu1
    return _make(Variant.POLARIZED2, params, x, g, a2 * (1 + nu_q), (s1, s2))


def _third(params, x, eps):
    g, v, a0 = _setup(params, x)
    eta = _eta(params, g)
    s1p = eta * abs(a0) ** 2 * abs(1 + v) ** 2
    nu1p = v / (1 + s1p)
    a3b = _bounce(a0, nu1p, "bounced3", eps)
    s3b = eta * abs(a3b) ** 2
    a3p = a3b * (1 + v / (1 + s3b) - nu1p)
    return g, a3b, a3p, s1p, s3b


def bounced3(params: SystemParams, x, eps=EPS_SING) -> SemiclassicalState:
    g, a3b, _, s1p, _ = _third(params, x, eps)
    return _make(Variant.BOUNCED3, params, x, g, a3b, (s1p,))


def polarized3(params: SystemParams, x, eps=EPS_SING) -> SemiclassicalState:
    g, _, a3p, s1p, s3b = _third(params, x, eps)
    return _make(Variant.POLARIZED3, params, x, g, a3p, (s1p, s3b))


def state_from_amplitude(params: SystemParams, x, alpha, variant=Variant.BISTABILITY_ROOT):
    """Wrap an arbitrary field amplitude (e.g. a bistability root)."""
    return _make(variant, params, x, coupling(params, x), alpha)


_BUILDERS = {
    Variant.BOUNCED1: bounced1,
    Variant.BOUNCED2: bounced2,
    Variant.BOUNCED3: bounced3,
    Variant.POLARIZED1: polarized1,
    Variant.POLARIZED2: polarized2,
    Variant.POLARIZED3: polarized3,
}

STATE_VARIANTS = tuple(_BUILDERS)


def build_state(params: SystemParams, x, variant) -> SemiclassicalState:
    """Construct a state by variant name (any of the six iterative states)."""
    try:
        fn = _BUILDERS[Variant(variant)]
    except (ValueError, KeyError):
        raise ValueError(f"unknown state variant {variant!r}") from None
    return fn(params, x)


def bloch_moments(state: SemiclassicalState, params: SystemParams, x=None) -> BlochMoments:
    s = state.s
    n = state.photon_number
    wa, ga = params.omega_a, params.gamma
    fd = -2 * state.g * wa / (wa * wa + ga * ga) * n / (1 + s) if state.g else 0.0
    return BlochMoments(
        photon_number=n,
        sigma_z=-1 / (1 + s),
        sigma=state.beta / (1 + s),
        excited_population=0.5 * s / (1 + s),
        dipole_force_expectation=fd,
    )


def state_residual(state: SemiclassicalState, params: SystemParams, x=None):
    """(eps_field, eps_corr): residual time derivatives of <c> and <c s_z>.

    Both vanish when the factorized state is an exact stationary solution.
    """
    wct = params.wct
    a0 = alpha0(params)
    m = bloch_moments(state, params)
    pol = state.g / wct * m.sigma
    eps_field = -1j * wct * (a0 - state.alpha + pol)
    eps_corr = -1j * wct * (m.sigma_z * (a0 - state.alpha) - pol)
    return complex(eps_field), complex(eps_corr)


def all_states(params: SystemParams, x, eps=EPS_SING):
    """Dict variant -> state or the SingularStateError raised building it."""
    out = {}
    for v, fn in _BUILDERS.items():
        try:
            out[v] = fn(params, x) if fn is polarized1 else fn(params, x, eps)
        except SingularStateError as exc:
            out[v] = exc
    return out

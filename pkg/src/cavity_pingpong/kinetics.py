"""Semiclassical momentum diffusion and friction.

All coefficients are scalars with the coupling gradients scaled out: the
diffusion tensor is D (grad g)_i (grad g)_j and the velocity dependent force
is -(v . grad g) grad g G. Positive G cools.

The atom sees the cavity through modified rates (W_A, Gamma_A); the mode
sees the atom through (W_C, K_c). Their sensitivities to g, (xi, zeta),
carry the factor F(s, nu) that accounts for the g dependence of the
saturation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import SingularRatesError, SingularStateError
from .model import SystemParams, alpha0, coupling, nu_from_coupling
from .states import EPS_SING, SemiclassicalState


@dataclass(frozen=True)
class ScaledAtomRates:
    W_A: float
    Gamma_A: float
    beta_h: complex
    s_h: float
    g: float

    @property
    def W_tilde(self):
        return complex(self.W_A, -self.Gamma_A)


@dataclass(frozen=True)
class ScaledModeRates:
    W_C: float
    K_c: float


def scaled_atom_rates(params: SystemParams, x, s) -> ScaledAtomRates:
    if s < 0:
        raise ValueError("saturation must be non-negative")
    g = coupling(params, x)
    wc, k = params.omega_c, params.kappa
    r = g * g / (wc * wc + k * k) / (1 + s)
    W, Ga = params.omega_a - wc * r, params.gamma + k * r
    bh = g * alpha0(params) / complex(W, -Ga)
    return ScaledAtomRates(W, Ga, bh, 2 * abs(bh) ** 2, g)


def scaled_mode_rates(params: SystemParams, x, s) -> ScaledModeRates:
    if s < 0:
        raise ValueError("saturation must be non-negative")
    g = coupling(params, x)
    wa, ga = params.omega_a, params.gamma
    r = g * g / (wa * wa + ga * ga) / (1 + s)
    return ScaledModeRates(params.omega_c - wa * r, params.kappa + ga * r)


class FVariant(str, enum.Enum):
    """Approximations to Re(g d beta/dg / beta) inside F(s, nu)."""
    V1 = "V1"          # standing wave: 1
    V2_NU = "V2nu"     # 1 + Re(nu)/(1+s)
    V2 = "V2"          # V2nu at nu -> 1
    V3_NU = "V3nu"     # Re(1 + 2 nu_a/(1 - nu_a)), nu_a = nu/(1+s)
    V3 = "V3"          # V3nu at nu -> 1, to first order
    V4 = "V4"          # self-consistent


def f_function(s, nu, variant=FVariant.V1, eps=EPS_SING) -> float:
    """F(s, nu) = 1 - s/(1+s) * Re(g d beta/dg / beta) for the chosen variant."""
    variant = FVariant(variant)
    k = s / (1 + s)
    # written as (1 - s (r - 1)) / (1 + s) with r - 1 per variant, to avoid cancellation
    if variant is FVariant.V1:
        rm1 = 0.0
    elif variant is FVariant.V2_NU:
        rm1 = complex(nu).real / (1 + s)
    elif variant is FVariant.V2:
        rm1 = 1 / (1 + s)
    elif variant is FVariant.V3:
        rm1 = -2 / (1 + s)
    else:
        na = complex(nu) / (1 + s)
        if abs(1 - na) <= eps:
            raise SingularStateError("F(s,nu) at the bounced pole", variant=variant.value,
                                     distance=abs(1 - na))
        c = (2 * na / (1 - na)).real
        if variant is FVariant.V3_NU:
            rm1 = c
        else:
            # F = 1 - k (1 + c F)  =>  F = (1 - k) / (1 + k c)
            den = 1 + k * c
            if abs(den) <= eps:
                raise SingularStateError("self-consistent F closure is singular",
                                         variant=variant.value, distance=abs(den))
            return (1 - k) / den
    return (1 - s * rm1) / (1 + s)


@dataclass(frozen=True)
class FrictionSensitivities:
    xi_a: float
    zeta_a: float
    xi_c: float
    zeta_c: float
    F_value: float
    variant: FVariant


def friction_sensitivities(params: SystemParams, x, s, nu=None,
                           variant=FVariant.V1) -> FrictionSensitivities:
    """xi = -dW/dg and zeta = d(Gamma)/dg for atom (a) and mode (c)."""
    g = coupling(params, x)
    if nu is None:
        nu = nu_from_coupling(params, g)
    F = f_function(s, nu, variant)
    fa = 2 * g * F / (1 + s) / (params.omega_c ** 2 + params.kappa ** 2)
    fc = 2 * g * F / (1 + s) / (params.omega_a ** 2 + params.gamma ** 2)
    return FrictionSensitivities(fa * params.omega_c, fa * params.kappa,
                                 fc * params.omega_a, fc * params.gamma, F, FVariant(variant))


# ---------------------------------------------------------------- diffusion

def d_at(W, Gamma, alpha_d, s_h) -> float:
    """Free-space-like dipole diffusion for a two-level atom with rates (W, Gamma)."""
    W2 = W * W + Gamma * Gamma
    poly = 1 + (4 * Gamma ** 2 / W2 - 1) * s_h + 3 * s_h ** 2 + (W2 / Gamma ** 2) * s_h ** 3
    return Gamma / W2 * abs(alpha_d) ** 2 / (1 + s_h) ** 3 * poly


def d0_term(W, Gamma, g, alpha_h, alpha_d, s_h) -> complex:
    """Correction present when the force amplitude differs from the drive amplitude."""
    W2 = W * W + Gamma * Gamma
    Wt = complex(W, -Gamma)
    delta_a = alpha_h ** 2 * np.conj(alpha_d) ** 2 - abs(alpha_h) ** 2 * abs(alpha_d) ** 2
    bracket = 1 - (1 + 4 * Gamma ** 2 / Wt ** 2 + 2 * s_h * W / Wt) / (1 + s_h) ** 2
    return complex(g * g / (Gamma * W2) * delta_a / (1 + s_h) * bracket)


def diffusion_atomic(rates: ScaledAtomRates, alpha_h, alpha_d, s_h=None) -> float:
    """D_at + Re(D_0) with the modified atomic rates.

    ``alpha_h`` drives the atom (beta_h = g alpha_h / W~_A), ``alpha_d`` enters
    the force operator. ``s_h`` defaults to the rates' own s_h.
    """
    if s_h is None:
        s_h = rates.s_h
    D = d_at(rates.W_A, rates.Gamma_A, alpha_d, s_h)
    return D + d0_term(rates.W_A, rates.Gamma_A, rates.g, alpha_h, alpha_d, s_h).real


def diffusion_free(params: SystemParams, state: SemiclassicalState) -> float:
    """Free-space reference: bare (w_a, gamma), the state's s, force amplitude alpha."""
    return d_at(params.omega_a, params.gamma, state.alpha, state.s)


def diffusion_field(beta, rates: ScaledModeRates) -> float:
    return abs(beta) ** 2 * rates.K_c / (rates.W_C ** 2 + rates.K_c ** 2)


def diffusion_cavity(params: SystemParams, x, state: SemiclassicalState, regime="high_sat",
                     include_free_term=False) -> float:
    """Cavity-induced diffusion in the high or low saturation approximation."""
    if regime not in ("high_sat", "low_sat"):
        raise ValueError("regime must be 'high_sat' or 'low_sat'")
    wa, ga = params.omega_a, params.gamma
    n0 = abs(alpha0(params)) ** 2
    n, s = state.photon_number, state.s
    if n0 == 0:
        return 0.0
    v = nu_from_coupling(params, state.g)
    eff = n if regime == "high_sat" else n / (1 + s)
    D = 4 * wa / (wa * wa + ga * ga) * eff * (n / n0) * v.imag / (1 + s)
    if include_free_term:
        D += ga / abs(params.wat) ** 2 * n / (1 + s)
    return float(D)


def diffusion_spontaneous(state: SemiclassicalState, prefactor=1.0) -> float:
    return prefactor * 0.5 * state.s / (1 + state.s)


# ----------------------------------------------------------------- friction

def g_field(W_C, K_c, photon_number, xi_c, zeta_c=0.0) -> float:
    W2 = W_C * W_C + K_c * K_c
    return 4 * photon_number * xi_c / W2 * (K_c * W_C / W2 * xi_c
                                            + 0.5 * (W_C ** 2 - K_c ** 2) / W2 * zeta_c)


def friction_field(params: SystemParams, x, state: SemiclassicalState, rates: ScaledModeRates,
                   f_variant=FVariant.V1, zeta_c_zero=True) -> float:
    sens = friction_sensitivities(params, x, state.s, variant=f_variant)
    zc = 0.0 if zeta_c_zero else sens.zeta_c
    return g_field(rates.W_C, rates.K_c, state.photon_number, sens.xi_c, zc)


@dataclass(frozen=True)
class AtomicFriction:
    G_free: float
    G1: float
    G2: float
    G1_zeta: float
    G2_zeta: float
    xi_a: float
    zeta_a: float

    @property
    def translational(self):
        """Everything beyond the free-space term."""
        return self.total - self.G_free

    @property
    def total(self):
        return (self.G_free + self.xi_a * self.G1 + self.xi_a ** 2 * self.G2
                + self.zeta_a * (self.G1_zeta + self.xi_a * self.G2_zeta))


def atomic_friction_terms(W, Gamma, g, alpha0_sq, s_h, xi_a=0.0, zeta_a=0.0) -> AtomicFriction:
    """The five coefficient functions of the atomic friction."""
    if Gamma <= 0:
        raise SingularRatesError("atomic friction needs Gamma_A > 0")
    W2 = W * W + Gamma * Gamma
    G2r = Gamma * Gamma / W2
    pre = 1 / W2 * 2 * alpha0_sq / (1 + s_h) ** 3
    pre_s = 1 / W2 * s_h / (1 + s_h) ** 3
    G_free = pre * (W / Gamma) * (-s_h ** 2 + 2 * (1 - s_h) * G2r)
    G1 = pre * (g / Gamma) * (-s_h ** 2 + 0.5 * s_h + (4 - 3 * s_h) * G2r - 4 * G2r ** 2)
    G2 = pre_s * (W / Gamma) * (0.5 * s_h + 2 * G2r)
    G1z = pre * g * W / W2 * (1 - 4 * G2r)
    G2z = pre_s * (1 + 0.5 * s_h - 2 * G2r)
    return AtomicFriction(G_free, G1, G2, G1z, G2z, xi_a, zeta_a)


def friction_atomic(params: SystemParams, x, state: SemiclassicalState, rates: ScaledAtomRates,
                    f_variant=FVariant.V1, s_h_equals_s=True, zeta_a_zero=False) -> AtomicFriction:
    """G_at with its components; ``.total`` is the coefficient itself."""
    sens = friction_sensitivities(params, x, state.s, variant=f_variant)
    s_h = state.s if s_h_equals_s else rates.s_h
    za = 0.0 if zeta_a_zero else sens.zeta_a
    return atomic_friction_terms(rates.W_A, rates.Gamma_A, rates.g, abs(alpha0(params)) ** 2,
                                 s_h, sens.xi_a, za)


def temperature(D, G):
    """D/G. Negative values (heating) pass through; see :func:`is_heating`."""
    if abs(G) < 1e-15:
        raise ZeroDivisionError("friction too small for a temperature")
    return D / G


def is_heating(G):
    return G < 0

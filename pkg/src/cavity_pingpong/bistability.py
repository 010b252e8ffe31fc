"""Optical bistability: the fully factorized state equation and its conditions.

With I = |alpha|^2 and eta = 2 g^2/|w~_a|^2 the self-consistency
alpha (1 - nu/(1 + eta I)) = alpha0 becomes the real cubic

    I |1 + eta I - nu|^2 = N0 (1 + eta I)^2 .

The standard form uses x = y / (1 + i theta + 2C(1 - i delta)/(1 + delta^2 + |x|^2)).
Our scaling between the two is

    x = (sqrt(2) g / gamma) alpha,      y = (sqrt(2) g / gamma)(1 + i theta) alpha0,

so that |x|^2 = (1 + delta^2) s and nu = 2C / ((delta - i)(theta - i)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .model import SystemParams, alpha0, coupling, nu_from_coupling, nu_from_standard
from .results import ScanResult

MERGE_TOL = 1e-8


def _real_cubic_roots(a, b, c, d):
    """Real roots of a t^3 + b t^2 + c t + d (a != 0), closed form.

    Trigonometric form when three roots are real, Cardano otherwise. The
    remaining quadratic factor is checked too so that near-double roots at
    a fold are not lost to rounding in the discriminant.
    """
    b, c, d = b / a, c / a, d / a
    shift = b / 3
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    disc = (q / 2) ** 2 + (p / 3) ** 3
    scale = max(abs(q / 2) ** 2, abs(p / 3) ** 3, 1e-300)
    if disc < 0 and p < 0:
        r = 2 * math.sqrt(-p / 3)
        arg = (3 * q / (p * r)) if r else 0.0
        phi = math.acos(max(-1.0, min(1.0, arg)))
        ts = [r * math.cos((phi - 2 * math.pi * k) / 3) for k in range(3)]
        return sorted(t - shift for t in ts)
    sq = math.sqrt(max(disc, 0.0))
    t0 = np.cbrt(-q / 2 + sq) + np.cbrt(-q / 2 - sq)
    roots = [float(t0)]
    # deflate: t^2 + t0 t + (t0^2 + p)
    qb, qc = t0, t0 * t0 + p
    qd = qb * qb - 4 * qc
    if qd >= -1e-9 * max(1.0, qb * qb, abs(qc)) or disc <= 1e-12 * scale:
        sq2 = math.sqrt(max(qd, 0.0))
        roots += [(-qb - sq2) / 2, (-qb + sq2) / 2]
    return sorted(t - shift for t in roots)


def _polish(coef, t):
    a, b, c, d = coef
    for _ in range(3):
        f = ((a * t + b) * t + c) * t + d
        fp = (3 * a * t + 2 * b) * t + c
        if fp == 0:
            break
        tn = t - f / fp
        fn = ((a * tn + b) * tn + c) * tn + d
        if abs(fn) < abs(f):
            t = tn
        else:
            break
    return t


def nonnegative_cubic_roots(a, b, c, d, merge_tol=MERGE_TOL):
    """Sorted nonnegative real roots with multiplicities, polished and merged."""
    coef = (a, b, c, d)
    raw = [_polish(coef, t) for t in _real_cubic_roots(a, b, c, d)]
    raw = [max(t, 0.0) for t in raw if t >= -merge_tol]
    raw.sort()
    roots, mult = [], []
    for t in raw:
        if roots and abs(t - roots[-1]) < merge_tol * (1 + roots[-1]):
            mult[-1] += 1
        else:
            roots.append(t)
            mult.append(1)
    return roots, mult


@dataclass(frozen=True)
class BistabilityRoots:
    intensities: Tuple[float, ...]
    amplitudes: Tuple[complex, ...]
    saturations: Tuple[float, ...]
    multiplicities: Tuple[int, ...]

    def __len__(self):
        return len(self.intensities)

    def residuals(self, params, x):
        """|alpha (1 - nu/(1+s)) - alpha0| per root with s from |alpha|^2."""
        g = coupling(params, x)
        v = nu_from_coupling(params, g)
        eta = 2 * g * g / abs(params.wat) ** 2
        a0 = alpha0(params)
        return [abs(al * (1 - v / (1 + eta * abs(al) ** 2)) - a0) for al in self.amplitudes]


def state_cubic(eta, v, N0):
    """Coefficients of I |1 + eta I - nu|^2 - N0 (1 + eta I)^2 in powers I^3..I^0."""
    u = 1 - v
    return (eta * eta,
            2 * eta * u.real - N0 * eta * eta,
            abs(u) ** 2 - 2 * N0 * eta,
            -N0)


def bistability_roots(params: SystemParams, x) -> BistabilityRoots:
    g = coupling(params, x)
    v = nu_from_coupling(params, g)
    a0 = alpha0(params)
    N0 = abs(a0) ** 2
    eta = 2 * g * g / abs(params.wat) ** 2
    if eta == 0:
        Is, mult = [N0 / abs(1 - v) ** 2], [1]
    else:
        Is, mult = nonnegative_cubic_roots(*state_cubic(eta, v, N0))
    assert Is, "state cubic must have a nonnegative root for N0 >= 0"
    amps = tuple(complex(a0 * (1 + eta * I) / (1 + eta * I - v)) for I in Is)
    return BistabilityRoots(tuple(float(I) for I in Is), amps,
                            tuple(float(eta * I) for I in Is), tuple(mult))


@dataclass(frozen=True)
class ScaledRoots:
    intensities: Tuple[float, ...]   # |x|^2
    amplitudes: Tuple[complex, ...]  # x
    multiplicities: Tuple[int, ...]

    def __len__(self):
        return len(self.intensities)


def scaled_form_roots(C, delta, theta, y) -> ScaledRoots:
    """All solutions x of the standard-form state equation."""
    D = 1 + delta * delta
    A = complex(1, theta)
    B = 2 * C * complex(1, -delta)
    y2 = abs(y) ** 2
    reab = (A * B.conjugate()).real
    a2, b2 = abs(A) ** 2, abs(B) ** 2
    # cubic in w = D + |x|^2
    coef = (a2, 2 * reab - D * a2 - y2, b2 - 2 * D * reab, -D * b2)
    ws, mult = nonnegative_cubic_roots(*coef)
    out, m_out = [], []
    for w, m in zip(ws, mult):
        X = w - D
        if X >= -MERGE_TOL * (1 + D):
            out.append((max(X, 0.0), y * w / (A * w + B)))
            m_out.append(m)
    return ScaledRoots(tuple(o[0] for o in out), tuple(complex(o[1]) for o in out), tuple(m_out))


def standard_to_params(C, delta, theta, y, g=1.0, gamma=1.0):
    """A SystemParams realizing (C, delta, theta, y) at the antinode x=0."""
    kappa = g * g / (2 * C * gamma)
    wct = complex(theta * kappa, -kappa)
    a0 = y * gamma / (math.sqrt(2) * g * complex(1, theta))
    return SystemParams(gamma, kappa, delta * gamma, theta * kappa, E=a0 * wct, g0=g)


def amplitude_scale(params, x):
    """Factor sqrt(2) g / gamma taking alpha to the standard-form x."""
    return math.sqrt(2) * coupling(params, x) / params.gamma


def bistability_condition_standard(C, delta, theta):
    c1 = 4 * (delta * theta + C - 1) ** 3 >= 27 * C * (delta ** 2 + 1) * (theta ** 2 + 1)
    c2 = 2 * C >= delta * theta - 1
    return bool(c1), bool(c2)


def bistability_condition_nu(nu):
    n2 = abs(nu) ** 2
    c1 = (n2 + 2 * nu.real) ** 3 >= 27 * n2 * n2
    c2 = n2 >= nu.real
    return bool(c1), bool(c2)


def condition_margins_standard(C, delta, theta):
    """Signed lhs - rhs of each standard-form inequality, relative to scale."""
    l1 = 4 * (delta * theta + C - 1) ** 3
    r1 = 27 * C * (delta ** 2 + 1) * (theta ** 2 + 1)
    l2, r2 = 2 * C, delta * theta - 1
    return ((l1 - r1) / max(abs(l1), abs(r1), 1e-300),
            (l2 - r2) / max(abs(l2), abs(r2), 1e-300))


def condition_margins_nu(nu):
    n2 = abs(nu) ** 2
    l1, r1 = (n2 + 2 * nu.real) ** 3, 27 * n2 * n2
    l2, r2 = n2, nu.real
    return ((l1 - r1) / max(abs(l1), abs(r1), 1e-300),
            (l2 - r2) / max(abs(l2), abs(r2), 1e-300))


def region_scan(re_values=(), im_values=()) -> ScanResult:
    """Boolean bistability map over a rectangular grid of complex nu."""
    cols = ["nu_re", "nu_im", "condition1", "condition2", "bistable"]
    rows = []
    for re in re_values:
        for im in im_values:
            c1, c2 = bistability_condition_nu(complex(re, im))
            rows.append([float(re), float(im), float(c1), float(c2), float(c1 and c2)])
    return ScanResult(cols, rows, {"preset": "bistab-region-nu"})


def region_scan_standard(C, delta_values=(), theta_values=()) -> ScanResult:
    """Boolean bistability map over a (delta, theta) slice at fixed C."""
    cols = ["C", "delta", "theta", "nu_re", "nu_im", "condition1", "condition2", "bistable"]
    rows = []
    for d in delta_values:
        for t in theta_values:
            c1, c2 = bistability_condition_standard(C, d, t)
            v = nu_from_standard(C, d, t)
            rows.append([float(C), float(d), float(t), v.real, v.imag,
                         float(c1), float(c2), float(c1 and c2)])
    return ScanResult(cols, rows, {"preset": "bistab-region-standard"})

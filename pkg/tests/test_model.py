import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cavity_pingpong.errors import SingularRatesError
from cavity_pingpong.model import (SystemParams, alpha0, complex_rates, cooperativity, coupling,
                                   coupling_gradient, dressed_resonance_mismatch, nu,
                                   nu_from_standard, scaled_detunings)

rate = st.floats(1e-3, 5.0)
det = st.floats(-10.0, 10.0)


def narrow_line():
    return SystemParams.from_photon_number(0.32, 0.02, 0.13, 1.13, 0.7)


def test_coupling_examples():
    p = SystemParams(0.1, 0.1, 0.0, 0.0)
    assert coupling(p, 0.0) == 1.0
    assert abs(coupling(p, 0.25)) < 1e-15
    assert coupling(p, 0.125) == pytest.approx(1 / np.sqrt(2), abs=1e-15)


def test_coupling_scales_with_g0_and_wavelength():
    p = SystemParams(0.1, 0.1, 0.0, 0.0, g0=2.0, wavelength=3.0)
    assert coupling(p, 0.75) == pytest.approx(0.0, abs=1e-15)
    assert coupling(p, 1.5) == pytest.approx(-2.0)


def test_coupling_gradient_matches_finite_difference():
    p = SystemParams(0.1, 0.1, 0.0, 0.0, g0=1.3, wavelength=0.8)
    for x in np.linspace(0, 1, 7):
        fd = (coupling(p, x + 1e-6) - coupling(p, x - 1e-6)) / 2e-6
        assert coupling_gradient(p, x) == pytest.approx(fd, rel=1e-7, abs=1e-7)


def test_custom_profile():
    p = SystemParams(0.1, 0.1, 0.0, 0.0, profile=lambda u: np.exp(-u ** 2))
    assert coupling(p, 0.0) == 1.0
    assert coupling_gradient(p, 0.5) == pytest.approx(-2 * 0.5 * np.exp(-0.25), rel=1e-6)


def test_complex_rates():
    r = complex_rates(SystemParams(0.3, 0.7, 1.0, -2.0))
    assert r.wat.imag == -0.3 and r.wct.imag == -0.7


def test_nu_examples():
    p = SystemParams(0.5, 1.0, 0.0, 0.0)
    assert nu(p, 0.0) == pytest.approx(-2.0)
    assert nu(p, 0.0) == pytest.approx(-2 * cooperativity(p, 0.0))
    assert nu(p, 0.25) == pytest.approx(0.0, abs=1e-15)
    expected = 1 / ((1.13 - 0.02j) * (0.7 - 0.13j))
    assert nu(narrow_line(), 0.0) == pytest.approx(expected, rel=1e-14)
    assert nu(narrow_line(), 0.0) == pytest.approx(1.2176 + 0.2485j, abs=1e-4)


def test_nu_singular():
    with pytest.raises(SingularRatesError):
        nu(SystemParams(0.0, 0.1, 0.0, 1.0), 0.0)


def test_alpha0_examples():
    p = SystemParams(0.1, 1.0, 0.0, 0.0, E=1.0)
    assert alpha0(p) == pytest.approx(1j)
    assert p.N0 == pytest.approx(1.0)
    assert alpha0(SystemParams(0.1, 1.0, 0.0, 0.0)) == 0
    h = narrow_line()
    assert abs(h.E) == pytest.approx(np.sqrt(0.32) * abs(0.7 - 0.13j), rel=1e-14)
    assert abs(h.E) == pytest.approx(0.4027, abs=1e-4)
    assert h.E.imag == 0 and h.E.real > 0
    with pytest.raises(SingularRatesError):
        alpha0(SystemParams(0.1, 0.0, 0.0, 0.0, E=1.0))


def test_replace_keeps_photon_number():
    h = narrow_line().replace(kappa=13.0, N0=0.32)
    assert h.N0 == pytest.approx(0.32, rel=1e-14)
    assert h.kappa == 13.0


def test_invalid_params():
    with pytest.raises(ValueError):
        SystemParams(-1, 0.1, 0, 0)
    with pytest.raises(ValueError):
        SystemParams(0.1, 0.1, 0, 0, g0=0)


def test_cooperativity_examples():
    p = SystemParams(0.5, 0.5, 0.0, 0.0)
    assert cooperativity(p, 0.0) == pytest.approx(2.0)
    assert cooperativity(p, 0.25) == pytest.approx(0.0, abs=1e-30)
    assert scaled_detunings(SystemParams(0.5, 0.25, 1.0, 2.0)) == (2.0, 8.0)
    with pytest.raises(ZeroDivisionError):
        cooperativity(SystemParams(0.0, 0.5, 0, 0), 0.0)


def test_dressed_mismatch_examples():
    assert dressed_resonance_mismatch(SystemParams(0.1, 0.1, 2.0, 0.5), 0.0) == pytest.approx(
        0.0, abs=1e-15)
    assert dressed_resonance_mismatch(SystemParams(0.1, 0.1, 0.3, -0.4), 0.25) == pytest.approx(
        -0.4)
    assert dressed_resonance_mismatch(SystemParams(0.1, 0.1, 0.7, 0.7), 0.0) == pytest.approx(
        0.7 - 1.0)


def test_nu_tends_to_one_on_dressed_resonance():
    p = SystemParams(1e-8, 1e-8, 2.0, 0.5)
    assert abs(nu(p, 0.0) - 1) < 1e-6


@settings(max_examples=200, deadline=None)
@given(rate, rate, det, det, st.floats(-0.5, 0.5))
def test_nu_standard_form(gamma, kappa, wa, wc, x):
    p = SystemParams(gamma, kappa, wa, wc)
    C = cooperativity(p, x)
    d, t = scaled_detunings(p)
    assert nu_from_standard(C, d, t) == pytest.approx(nu(p, x), rel=1e-12, abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(rate, rate, det, det, st.floats(-0.5, 0.5))
def test_imaginary_part_of_nu(gamma, kappa, wa, wc, x):
    p = SystemParams(gamma, kappa, wa, wc)
    g = coupling(p, x)
    exact = g * g * (kappa * wa + gamma * wc) / abs(p.wat * p.wct) ** 2
    assert nu(p, x).imag == pytest.approx(exact, rel=1e-12, abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-4, 1e-2), st.floats(1e-4, 1e-2),
       st.floats(0.5, 10) | st.floats(-10, -0.5), st.floats(0.5, 10) | st.floats(-10, -0.5))
def test_mode_pulling_sign(gamma, kappa, wa, wc):
    p = SystemParams(gamma, kappa, wa, wc)
    s = kappa * wa + gamma * wc
    if abs(s) > 1e-12:
        assert np.sign(nu(p, 0.0).imag) == np.sign(s)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 50.0), rate, det)
def test_photon_number_roundtrip(N0, kappa, wc):
    p = SystemParams.from_photon_number(N0, 0.1, kappa, 0.3, wc)
    assert p.N0 == pytest.approx(N0, rel=1e-12, abs=1e-300)

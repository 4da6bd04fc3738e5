"""Time signals, spatial profiles, and their closed-form transforms."""

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

from gkheat.signals import (SourceTerm, SpaceProfile, TimeSignal,
                            finite_fourier, load_profile_csv, load_signal_csv,
                            time_transform)


def quad_time_transform(sig, omega, t, n=400):
    """Brute-force reference for the exponentially weighted running integral."""
    xg, wg = leggauss(40)
    edges = np.linspace(0.0, t, n + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    hw = 0.5 * np.diff(edges)
    s = (mid[:, None] + hw[:, None] * xg).ravel()
    w = (hw[:, None] * wg).ravel()
    return np.sum(w * np.exp(-omega * (t - s)) * sig(s))


def test_flash_pulse_properties():
    sig = TimeSignal(kind="laser_flash", tau_delta=0.04)
    t = np.linspace(-0.01, 0.1, 501)
    v = sig(t)
    assert np.all(v >= 0)
    assert np.all(v[t <= 0] == 0) and np.all(v[t >= 0.04] == 0)
    assert sig.integral(0.04) == pytest.approx(1.0, abs=1e-14)
    assert sig.integral(1.0) == pytest.approx(1.0, abs=1e-14)
    assert sig.integral(0.02) == pytest.approx(0.5, abs=1e-14)


@pytest.mark.parametrize("omega", [0.0, 3.0, 50.0, 2.0 + 40.0j, -1.0 + 5.0j])
def test_flash_time_transform_matches_quadrature(omega):
    sig = TimeSignal(kind="laser_flash", tau_delta=0.04)
    for t in (0.01, 0.04, 0.3):
        want = quad_time_transform(sig, omega, t)
        got = time_transform(sig, np.array([omega], dtype=complex), t)[0]
        # the reference quadrature has C^1 kinks of the pulse inside panels,
        # so it is the less accurate side of this comparison
        assert got == pytest.approx(want, abs=1e-9)


def test_constant_time_transform():
    sig = TimeSignal(kind="constant", value=2.0)
    om = np.array([5.0 + 1.0j])
    t = 0.7
    want = 2.0 * (1.0 - np.exp(-om * t)) / om
    assert np.allclose(time_transform(sig, om, t), want, rtol=1e-13)


def test_tabulated_transform_matches_quadrature():
    ts = np.linspace(0.0, 1.0, 2001)
    sig = TimeSignal(kind="tabulated", times=ts, values=np.exp(-ts))
    for omega in (0.0, 4.0 - 3.0j):
        want = quad_time_transform(sig, omega, 0.6)
        got = time_transform(sig, np.array([omega], dtype=complex), 0.6)[0]
        assert got == pytest.approx(want, rel=1e-7, abs=1e-9)


def test_finite_fourier_cosine_analytic():
    prof = SpaceProfile(kind="cosine", l=1.0, value=1.0, mode=2)
    k = np.array([0.0, 1.3, 2 * np.pi, 3.0 - 1.0j])
    xg, wg = leggauss(60)
    xs = 0.5 * (xg + 1.0)
    want = np.array([np.sum(0.5 * wg * np.cos(2 * np.pi * xs)
                            * np.exp(-1j * kk * xs)) for kk in k])
    assert np.allclose(finite_fourier(prof, k), want, atol=1e-13)


def test_tabulated_profile_fourier():
    xs = np.linspace(0.0, 1.0, 4001)
    prof = SpaceProfile(kind="tabulated", l=1.0, xs=xs, values=np.sin(np.pi * xs))
    k = np.array([0.0 + 0j, 2.0 + 0.5j])
    xg, wg = leggauss(80)
    xq = 0.5 * (xg + 1.0)
    want = np.array([np.sum(0.5 * wg * np.sin(np.pi * xq)
                            * np.exp(-1j * kk * xq)) for kk in k])
    assert np.allclose(finite_fourier(prof, k), want, atol=1e-7)


def test_source_term_zero_flag():
    assert SourceTerm().is_zero
    live = SourceTerm(profile=SpaceProfile(kind="constant", value=1.0),
                      signal=TimeSignal(kind="constant", value=1.0))
    assert not live.is_zero
    assert live(np.array([0.3]), 0.5)[0] == pytest.approx(1.0)


def test_csv_loaders_roundtrip(tmp_path):
    t = np.linspace(0.0, 1.0, 11)
    v = np.sin(t)
    path = tmp_path / "sig.csv"
    np.savetxt(path, np.column_stack([t, v]), delimiter=",")
    sig = load_signal_csv(path)
    assert np.allclose(sig(t), v)

    x = np.linspace(0.0, 2.0, 21)
    path = tmp_path / "prof.csv"
    np.savetxt(path, np.column_stack([x, x**2]), delimiter=",")
    prof = load_profile_csv(path, 2.0)
    assert np.allclose(prof(x), x**2)


def test_signal_validation():
    with pytest.raises(ValueError):
        TimeSignal(kind="laser_flash", tau_delta=0.0)
    with pytest.raises(ValueError):
        TimeSignal(kind="tabulated", times=np.array([0.0, 0.0, 1.0]),
                   values=np.zeros(3))
    with pytest.raises(ValueError):
        SpaceProfile(kind="wedge")

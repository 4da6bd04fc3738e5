"""Spectral integration paths: heights, folds, quadrature, validation."""

import numpy as np
import pytest

from gkheat.contour import (ContourSpec, build_contour, build_contour_pair,
                            cardano_root, contour_height, default_spec,
                            fold_window, tail_nodes, validate_contour,
                            _cubic_coeffs, _implicit_mismatch)
from gkheat.params import PhysicalParams, derive_params, dispersion_roots
from gkheat.signals import TimeSignal
from gkheat.solver import Scenario, evaluate_fastpath_laserflash

P_MATCHED = PhysicalParams(alpha=1.0, tau=0.02, mu2=0.02, l=1.0)   # C = 1
P_FOLDED = PhysicalParams(alpha=1.0, tau=0.02, mu2=0.2, l=1.0)    # C = 0.1


def fixed_point_height(C, x, iters=200):
    """Independent solve of the implicit path relation by fixed-point
    iteration, used as an oracle for the closed-form cubic."""
    y = abs(x)
    for _ in range(iters):
        w = (x * x + y * y - 1.0) ** 2
        y = abs(x) * np.sqrt((w + 4 * x * x) / (w + 4 * C * x * x))
    return y


@pytest.mark.parametrize("C,x,want", [
    (0.1, 1.0, 1.3779650813),
    (0.5, 2.0, 2.1209095180),
    (2.0, 5.0, 4.8991490099),
    (10.0, 0.7, 0.2315960867),
])
def test_height_against_fixed_point_oracle(C, x, want):
    y = contour_height(C, x)
    assert y == pytest.approx(want, abs=2e-10)
    assert y == pytest.approx(fixed_point_height(C, x), abs=1e-12)


def test_cardano_root_solves_cubic():
    for C, x in ((0.1, 0.8), (3.0, 1.7), (0.05, 5.0)):
        a, b, c = _cubic_coeffs(C, x)
        work = cardano_root(a, b, c, C, x)
        s = work.s
        assert s >= 0
        assert abs(s**3 + a * s**2 + b * s + c) < 1e-9 * max(1.0, abs(c))
        assert _implicit_mismatch(C, x, s) < 1e-10


def test_matched_timescale_height_is_abscissa():
    # C = 1: the path is |Im k| = |Re k|
    for x in (0.3, 1.0, 10.0, 40.0):
        assert contour_height(1.0, x) == pytest.approx(x, rel=1e-13)


def test_fold_window_values():
    zl, zr = fold_window(0.1)
    assert zl == pytest.approx(0.29981, abs=2e-4)
    assert zr == pytest.approx(0.37352, abs=2e-4)
    zl, zr = fold_window(0.05)
    assert zl == pytest.approx(0.21793, abs=2e-4)
    assert zr == pytest.approx(0.36291, abs=2e-4)
    assert fold_window(0.5) is None
    assert fold_window(1.0) is None
    assert fold_window(10.0) is None


def test_fold_window_roots_all_satisfy_relation():
    # inside the window the cubic has three nonnegative roots and each lies
    # on the zero-real-part locus, so any selection is admissible
    zl, zr = fold_window(0.1)
    z = 0.5 * (zl + zr)
    a, b, c = _cubic_coeffs(0.1, z)
    roots = np.roots([1.0, a, b, c])
    assert np.all(np.abs(roots.imag) < 1e-8)
    for s in roots.real:
        assert s >= 0
        assert _implicit_mismatch(0.1, z, s) < 1e-8


def test_validate_contour_on_and_off_fold():
    for p in (P_MATCHED, P_FOLDED,
              PhysicalParams(alpha=1.0, tau=0.2, mu2=0.02, l=1.0)):
        spec = default_spec(p, n_nodes=2000)
        for half in ("upper", "lower"):
            rep = validate_contour(p, build_contour(p, spec, half))
            assert rep["ok"], rep
            assert rep["n_checked"] > 0


def test_bridge_nodes_flagged_and_continuous():
    spec = default_spec(P_FOLDED, n_nodes=2000)
    nodes = build_contour(P_FOLDED, spec, "upper")
    br = [n for n in nodes if n.on_bridge]
    assert br, "fold bridge expected for C = 0.1"
    # bridged nodes sit strictly between the single-root heights at the
    # window edges (straight chord of a monotone gap)
    C = derive_params(P_FOLDED).bigC
    zl, zr = fold_window(C)
    mu = np.sqrt(P_FOLDED.mu2)
    ylo, yhi = contour_height(C, zl) / mu, contour_height(C, zr) / mu
    for n in br:
        assert min(ylo, yhi) - 1e-9 <= abs(n.k.imag) <= max(ylo, yhi) + 1e-9
    # the chord may dip slightly past the zero level set (the folded locus
    # weaves around it), but only by an O(1) amount: the time exponentials
    # stay bounded and the homotopy needs analyticity, not decay
    ks = np.array([n.k for n in br])
    o1, o2 = dispersion_roots(P_FOLDED, ks)
    assert np.min(np.minimum(o1.real, o2.real)) > -1.0


def test_fold_bridge_path_independence():
    # the represented solution must not depend on the discretization of the
    # bridged path (regression: kinks inside panels once broke this)
    scn = Scenario(params=P_FOLDED, gammal=0.2,
                   g=TimeSignal(kind="laser_flash", tau_delta=0.04))
    x = np.array([1.0])
    vals = []
    for k_max, n in ((120.0, 6000), (90.0, 3000), (150.0, 9000)):
        pair = build_contour_pair(
            P_FOLDED, ContourSpec(k_max=k_max, n_nodes=n, origin_radius=0.25))
        vals.append(evaluate_fastpath_laserflash(scn, pair, x, 0.5)[0][0])
    assert max(abs(v - vals[0]) for v in vals) < 1e-5


def test_tail_extension_closes_algebraic_integrals():
    # along the full extended path, int dk / k^2 = 0 (antiderivative -1/k
    # vanishes at both ends); without tails the truncation residue remains
    p = P_MATCHED
    spec = default_spec(p)
    for half in ("upper", "lower"):
        nodes = build_contour(p, spec, half) + tail_nodes(p, spec, half)
        ks = np.array([n.k for n in nodes])
        ws = np.array([n.weight for n in nodes])
        assert abs(np.sum(ws / ks**2)) < 1e-12
    short = build_contour(p, spec, "upper")
    ks = np.array([n.k for n in short])
    ws = np.array([n.weight for n in short])
    assert abs(np.sum(ws / ks**2)) > 1e-3


def test_contour_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(k_max=0.1, origin_radius=0.25)
    with pytest.raises(ValueError):
        ContourSpec(k_max=10.0, n_nodes=4)
    with pytest.raises(ValueError):
        build_contour(P_MATCHED, default_spec(P_MATCHED), "sideways")


def test_halves_are_mirrored():
    spec = default_spec(P_MATCHED, n_nodes=1000)
    up = build_contour(P_MATCHED, spec, "upper")
    lo = build_contour(P_MATCHED, spec, "lower")
    ku = np.sort_complex(np.array([n.k for n in up]))
    kl = np.sort_complex(np.conj([n.k for n in lo]))
    assert np.allclose(ku, kl, rtol=1e-12)

"""Residue-series solutions for the two insulated-boundary cases.

For thermally insulating boundaries the contour representation collapses to
a classical Fourier series over the modes k_n = pi n / l, and these partial
sums make a cheap independent check of the contour solver.  Two cases are
covered: a flux pulse applied on the left with the right end insulated, and
free decay of a nonzero initial state with both ends insulated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import PhysicalParams, derive_params, dispersion_roots
from .signals import finite_fourier, time_transform


@dataclass(frozen=True)
class SeriesMode:
    """One modal frequency pair: k_n = pi n / l and its decay rates."""

    n: int
    k_n: float
    omega1n: complex
    omega2n: complex


@dataclass(frozen=True)
class FourierCoeffs:
    """Cosine coefficients of the energy profile and sine coefficients of
    the flux profile; phi_n[0] is the mean of phi and psi_n[0] is unused."""

    phi_n: np.ndarray
    psi_n: np.ndarray


def mode_frequencies(p: PhysicalParams, n: int) -> SeriesMode:
    """Decay-rate pair for mode n; n = 0 gives the (1/tau, 0) pair."""
    if n < 0:
        raise ValueError("mode index must be nonnegative")
    kn = np.pi * n / p.l
    if n == 0:
        return SeriesMode(n=0, k_n=0.0, omega1n=1.0 / p.tau, omega2n=0.0)
    om1, om2 = dispersion_roots(p, np.array([kn], dtype=complex))
    return SeriesMode(n=n, k_n=kn, omega1n=complex(om1[0]),
                      omega2n=complex(om2[0]))


def _mode_arrays(p: PhysicalParams, N: int):
    kn = np.pi * np.arange(1, N + 1) / p.l
    om1, om2 = dispersion_roots(p, kn.astype(complex))
    return kn, om1, om2


def fourier_coeffs(phi, psi, N: int) -> FourierCoeffs:
    """Modal coefficients of the initial state through mode N."""
    l = phi.l if phi.kind != "zero" else psi.l
    kn = np.pi * np.arange(1, N + 1) / l
    phi_n = np.zeros(N + 1)
    psi_n = np.zeros(N + 1)
    phi_n[0] = finite_fourier(phi, np.array([0.0 + 0j]))[0].real / l
    # int phi e^{-i kn x} = int phi cos - i int phi sin
    phi_n[1:] = (2.0 / l) * finite_fourier(phi, kn.astype(complex)).real
    psi_n[1:] = -(2.0 / l) * finite_fourier(psi, kn.astype(complex)).imag
    return FourierCoeffs(phi_n=phi_n, psi_n=psi_n)


def _cos_tail(u, N):
    """sum_{n>N} cos(n pi u)/n^2 for u in [0, 2], via the closed form of
    the full sum (pi^2/6 - pi^2 u/2 + pi^2 u^2/4)."""
    full = np.pi ** 2 * (1.0 / 6.0 - u / 2.0 + u * u / 4.0)
    n = np.arange(1, N + 1)
    return full - np.cos(np.pi * np.outer(u, n)) @ (1.0 / n ** 2)


def _sin_tail(u, N):
    """sum_{n>N} sin(n pi u)/n for u in [0, 2]; the full sum is
    pi(1 - u)/2 except at the endpoints, where it vanishes."""
    u = np.asarray(u, dtype=float)
    full = np.where((u > 0) & (u < 2), np.pi * (1.0 - u) / 2.0, 0.0)
    n = np.arange(1, N + 1)
    return full - np.sin(np.pi * np.outer(u, n)) @ (1.0 / n)


def series_laser_flash(scn, x, t, N: int = 200, tail: bool = True):
    """Partial sum through mode N for the left-flux insulated problem.

    Requires gamma0 = gammal = 0 with no right-end flux, initial data, or
    distributed source; returns (e, q) at the points x.

    With tail=True the leading large-n behaviour of the modal weights
    (g(t)/(theta k_n^2) for e, g(t)/k_n for q, plus the constant left over
    from omega_1 - theta k^2) is summed in closed form over the omitted
    modes.  While the pulse is active the raw partial sum converges only
    like 1/N^2 at the boundaries, so this correction matters there.
    """
    if scn.gamma0 != 0 or scn.gammal != 0:
        raise ValueError("series solution needs insulated boundaries")
    if scn.h.kind != "zero" or not scn.source.is_zero:
        raise ValueError("series solution needs h = 0 and no source")
    if scn.phi.kind != "zero" or scn.psi.kind != "zero":
        raise ValueError("series solution needs zero initial data")
    if N < 1:
        raise ValueError("need at least one mode")
    p = scn.params
    dp = derive_params(p)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    kn, om1, om2 = _mode_arrays(p, N)
    dif = om1 - om2
    g1 = time_transform(scn.g, om1, t)
    g2 = time_transform(scn.g, om2, t)
    k2 = kn * kn
    ce = ((om1 - dp.theta * k2) * g2 - (om2 - dp.theta * k2) * g1) / dif
    cq = kn * ((dp.beta - dp.theta * om2) * g2
               - (dp.beta - dp.theta * om1) * g1) / dif
    cosm = np.cos(np.outer(x, kn))
    sinm = np.sin(np.outer(x, kn))
    e = scn.g.integral(t) / p.l + (2.0 / p.l) * (cosm @ ce).real
    q = (2.0 / p.l) * (sinm @ cq).real
    if tail:
        u = x / p.l
        c0 = 1.0 / p.tau - dp.beta / dp.theta
        a_e = (scn.g(t) + c0 * time_transform(scn.g, dp.beta / dp.theta, t)
               ) / dp.theta
        e = e + (2.0 / p.l) * a_e * (p.l / np.pi) ** 2 * _cos_tail(u, N)
        q = q + (2.0 / p.l) * scn.g(t) * (p.l / np.pi) * _sin_tail(u, N)
    return e, q


def laser_flash_tail(scn, t, N: int = 200) -> float:
    """Crude bound on the modes beyond N in the flux-pulse series.

    The modal weights fall off like the transforms g~(omega_mn, t), so the
    omitted tail is estimated by extending the observed 1/omega1 decay;
    inside the pulse support this is slower and the estimate larger.
    """
    p = scn.params
    dp = derive_params(p)
    kn, om1, om2 = _mode_arrays(p, N)
    g1 = np.abs(time_transform(scn.g, om1[-1], t))
    g2 = np.abs(time_transform(scn.g, om2[-1], t))
    w_last = (2.0 / p.l) * (np.abs(om1[-1] - dp.theta * kn[-1] ** 2) * g2
                            + np.abs(om2[-1] - dp.theta * kn[-1] ** 2) * g1
                            ) / np.abs(om1[-1] - om2[-1])
    # sum_{n>N} 1/n^2 < 1/N for weights decaying one power faster than the
    # last retained one
    return float(w_last * N / max(N - 1, 1))


def series_initial_data(scn, x, t, N: int = 200):
    """Partial sum through mode N for free decay of the initial state with
    both boundaries insulated.  Returns (e, q) at the points x."""
    if scn.gamma0 != 0 or scn.gammal != 0:
        raise ValueError("series solution needs insulated boundaries")
    if scn.g.kind != "zero" or scn.h.kind != "zero" or not scn.source.is_zero:
        raise ValueError("series solution needs zero boundary data and source")
    p = scn.params
    dp = derive_params(p)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    kn, om1, om2 = _mode_arrays(p, N)
    dif = om1 - om2
    co = fourier_coeffs(scn.phi, scn.psi, N)
    phi_n, psi_n = co.phi_n[1:], co.psi_n[1:]
    E1 = np.exp(-om1 * t)
    E2 = np.exp(-om2 * t)
    ce = ((om1 * E2 - om2 * E1) * phi_n + kn * (E1 - E2) * psi_n) / dif
    cq = (-kn * dp.beta * (E1 - E2) * phi_n
          + (om1 * E1 - om2 * E2) * psi_n) / dif
    cosm = np.cos(np.outer(x, kn))
    sinm = np.sin(np.outer(x, kn))
    e = co.phi_n[0] + (cosm @ ce).real
    q = (sinm @ cq).real
    return e, q

"""Physical parameters and per-wavenumber spectral algebra.

Everything here is a pure function of the inputs: dispersion roots of the
coupled energy-balance / flux-relaxation system, the diagonalizing matrices,
the Robin boundary coefficients sigma and the 2x2 system determinants Delta.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

#: relative tolerance below which the two dispersion roots are treated as
#: numerically degenerate (the 1/(omega1 - omega2) prefactors are removable
#: but hostile there).
DEGENERACY_RTOL = 1e-10


class DegenerateRootsError(ValueError):
    """Raised when omega1 and omega2 coincide within tolerance."""


class ConditioningError(RuntimeError):
    """Raised when a Delta determinant is too small to divide by safely."""


@dataclass(frozen=True)
class PhysicalParams:
    """Parameters of the heat-conduction system on the interval (0, l).

    alpha: thermal diffusivity (length^2/time)
    tau:   flux relaxation time (time)
    mu2:   squared nonlocal length (length^2)
    l:     interval length (length)
    """

    alpha: float
    tau: float
    mu2: float
    l: float

    def __post_init__(self):
        for name in ("alpha", "tau", "mu2", "l"):
            v = getattr(self, name)
            if not (v > 0 and np.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v}")


@dataclass(frozen=True)
class DerivedParams:
    """Ratios derived from PhysicalParams.

    beta = alpha/tau, theta = mu2/tau, bigC = alpha*tau/mu2 (dimensionless,
    controls the shape of the integration paths).
    """

    beta: float
    theta: float
    bigC: float


def derive_params(p: PhysicalParams) -> DerivedParams:
    """Compute the derived ratios beta, theta and C."""
    return DerivedParams(beta=p.alpha / p.tau, theta=p.mu2 / p.tau,
                         bigC=p.alpha * p.tau / p.mu2)


@dataclass(frozen=True)
class SpectralPoint:
    """Wavenumber k with the two dispersion roots omega1, omega2.

    omega1 carries the principal-branch "+" square root; the ordering is a
    labeling convention only (every downstream formula is invariant under
    relabeling).
    """

    k: complex
    omega1: complex
    omega2: complex
    degenerate: bool = field(default=False, compare=False)


def dispersion_roots(p: PhysicalParams, k):
    """Vectorized dispersion roots; k may be a scalar or ndarray.

    Roots of omega^2 - ((1 + mu2 k^2)/tau) omega + (alpha/tau) k^2 = 0.
    Returns (omega1, omega2) with omega1 the principal "+" branch.
    """
    k = np.asarray(k, dtype=complex)
    s = 1.0 + p.mu2 * k * k
    disc = s * s - 4.0 * p.alpha * p.tau * k * k
    r = np.sqrt(disc)
    # one of s +- r suffers cancellation at large |k|; compute that root
    # from the Vieta product omega1 omega2 = (alpha/tau) k^2 instead
    prod = (p.alpha / p.tau) * k * k
    plus_big = np.abs(s + r) >= np.abs(s - r)
    big = np.where(plus_big, s + r, s - r) / (2.0 * p.tau)
    small = np.where(big != 0, prod / np.where(big != 0, big, 1.0), 0.0)
    omega1 = np.where(plus_big, big, small)
    omega2 = np.where(plus_big, small, big)
    return omega1, omega2


def dispersion(p: PhysicalParams, k: complex) -> SpectralPoint:
    """Dispersion roots at a single wavenumber, with degeneracy flag."""
    o1, o2 = dispersion_roots(p, k)
    o1, o2 = complex(o1), complex(o2)
    scale = max(abs(o1), abs(o2), 1.0 / p.tau)
    return SpectralPoint(k=complex(k), omega1=o1, omega2=o2,
                         degenerate=abs(o1 - o2) < DEGENERACY_RTOL * scale)


def eigen_matrices(p: PhysicalParams, sp: SpectralPoint):
    """The matrices Lambda, S, S^-1 and Omega at sp.k.

    Lambda = S Omega S^-1 with Omega = diag(omega1, omega2).  Requires
    k != 0 (S has 1/(ik) entries) and non-degenerate roots.
    """
    k, o1, o2 = sp.k, sp.omega1, sp.omega2
    if k == 0:
        raise ValueError("eigen matrices are singular at k = 0")
    if sp.degenerate or abs(o1 - o2) < DEGENERACY_RTOL * max(abs(o1), abs(o2)):
        raise DegenerateRootsError(f"omega1 ~ omega2 at k = {k}")
    d = derive_params(p)
    ik = 1j * k
    Lambda = np.array([[0.0, ik], [ik * d.beta, d.theta * k * k + 1.0 / p.tau]],
                      dtype=complex)
    S = np.array([[1.0, 1.0], [o1 / ik, o2 / ik]], dtype=complex) / (o1 - o2)
    Sinv = np.array([[-o2, ik], [o1, -ik]], dtype=complex)
    Omega = np.diag([o1, o2]).astype(complex)
    return {"Lambda": Lambda, "S": S, "Sinv": Sinv, "Omega": Omega}


@dataclass(frozen=True)
class SigmaPair:
    """Robin boundary coefficients sigma^(1), sigma^(2) at one endpoint."""

    sigma1: complex
    sigma2: complex
    gamma: float


def sigma_values(dp: DerivedParams, k, omega_self, omega_other, gamma):
    """sigma^(m)(k) = ik (beta - theta*omega_m) + gamma (omega_other - theta k^2).

    Vectorized over k / omega arrays.
    """
    return (1j * k * (dp.beta - dp.theta * omega_self)
            + gamma * (omega_other - dp.theta * k * k))


def sigma_coeffs(p: PhysicalParams, sp: SpectralPoint, gamma: float) -> SigmaPair:
    """Both sigma coefficients at wavenumber sp.k for Robin coefficient gamma."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    d = derive_params(p)
    s1 = sigma_values(d, sp.k, sp.omega1, sp.omega2, gamma)
    s2 = sigma_values(d, sp.k, sp.omega2, sp.omega1, gamma)
    return SigmaPair(sigma1=complex(s1), sigma2=complex(s2), gamma=gamma)


@dataclass(frozen=True)
class DeltaPair:
    """Determinants Delta_1, Delta_2 of the two boundary 2x2 systems."""

    delta1: complex
    delta2: complex


#: |Delta| below this fraction of its largest constituent term is reported
#: as ill-conditioned.
DELTA_COND_FLOOR = 1e-8


def delta_dets(p: PhysicalParams, sp: SpectralPoint,
               gamma0: float, gammal: float) -> DeltaPair:
    """Delta_m(k) = e^{ikl} sigma0_m(k) sigmal_m(k) - e^{-ikl} sigma0_m(-k) sigmal_m(-k).

    Computed in the factored form e^{-ikl} (e^{2ikl} s0 sl - s0' sl') so no
    intermediate exceeds the |Im k| l exponent budget on the upper half-plane
    (and mirrored on the lower).
    """
    d = derive_params(p)
    k, o1, o2 = sp.k, sp.omega1, sp.omega2
    out = []
    for om_s, om_o in ((o1, o2), (o2, o1)):
        s0p = sigma_values(d, k, om_s, om_o, gamma0)
        s0m = sigma_values(d, -k, om_s, om_o, gamma0)
        slp = sigma_values(d, k, om_s, om_o, gammal)
        slm = sigma_values(d, -k, om_s, om_o, gammal)
        if k.imag >= 0:
            delta = np.exp(-1j * k * p.l) * (
                np.exp(2j * k * p.l) * s0p * slp - s0m * slm)
        else:
            delta = np.exp(1j * k * p.l) * (
                s0p * slp - np.exp(-2j * k * p.l) * s0m * slm)
        big = max(abs(np.exp(1j * k * p.l) * s0p * slp),
                  abs(np.exp(-1j * k * p.l) * s0m * slm))
        if big > 0 and abs(delta) < DELTA_COND_FLOOR * big:
            warnings.warn(f"Delta near zero at k = {k}: |Delta| = {abs(delta):.3e} "
                          f"vs dominant term {big:.3e}", RuntimeWarning,
                          stacklevel=2)
        out.append(complex(delta))
    return DeltaPair(delta1=out[0], delta2=out[1])

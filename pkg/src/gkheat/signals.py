"""Boundary signals, spatial profiles, and their integral transforms.

Everything the solver consumes is expressed through two kernels:

* the time transform  g~(omega, t) = int_0^t exp(-omega (t-s)) g(s) ds,
* the finite Fourier transform  phi^(k) = int_0^l exp(-i k x) phi(x) dx.

Both are evaluated in closed form for the supported signal shapes (zero,
constant, raised-cosine laser flash, tabulated samples), with series
expansions guarding the small-argument limits so nothing blows up as
omega -> 0 or k -> 0.
"""

import numpy as np
from dataclasses import dataclass, field


# ---------------------------------------------------------------------------
# small-argument-safe exponential kernels
# ---------------------------------------------------------------------------

_SMALL = 1e-4


def _eta(omega, c, t):
    """(exp(i c t) - exp(-omega t)) / (omega + i c), safe near omega + ic = 0.

    This is int_0^t exp(-omega (t-s)) exp(i c s) ds.  All arguments may be
    arrays (broadcast together).
    """
    omega = np.asarray(omega, dtype=complex)
    z = (omega + 1j * c) * t
    small = np.abs(z) < _SMALL
    zs = np.where(small, z, 1.0)
    # t e^{-omega t} (1 + z/2 + z^2/6 + z^3/24): relative error O(|z|^4)
    series = t * np.exp(-omega * t) * (1.0 + zs / 2 + zs**2 / 6 + zs**3 / 24)
    denom = np.where(small, 1.0, omega + 1j * c)
    direct = (np.exp(1j * c * t) - np.exp(-omega * t)) / denom
    return np.where(small, series, direct)


def _phi1(w):
    """(1 - exp(-w)) / w with the w -> 0 limit handled."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < _SMALL
    ws = np.where(small, w, 1.0)
    series = 1.0 - ws / 2 + ws**2 / 6 - ws**3 / 24
    direct = (1.0 - np.exp(-np.where(small, 0.0, w))) / np.where(small, 1.0, w)
    return np.where(small, series, direct)


def _psi(w):
    """(w - 1 + exp(-w)) / w^2 with the w -> 0 limit handled."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < _SMALL
    ws = np.where(small, w, 1.0)
    series = 0.5 - ws / 6 + ws**2 / 24 - ws**3 / 120
    direct = (w - 1.0 + np.exp(-np.where(small, 0.0, w))) / np.where(small, 1.0, w) ** 2
    return np.where(small, series, direct)


def _psibar(w):
    """(1 - (1 + w) exp(-w)) / w^2 with the w -> 0 limit handled."""
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < _SMALL
    ws = np.where(small, w, 1.0)
    series = 0.5 - ws / 3 + ws**2 / 8 - ws**3 / 30
    direct = (1.0 - (1.0 + w) * np.exp(-np.where(small, 0.0, w))) / np.where(small, 1.0, w) ** 2
    return np.where(small, series, direct)


# ---------------------------------------------------------------------------
# time signals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeSignal:
    """A scalar function of time on [0, infinity).

    kind is one of "zero", "constant", "laser_flash", "tabulated".

    * constant: value
    * laser_flash: a raised-cosine pulse (2 / tau_delta) sin^2(pi t / tau_delta)
      supported on (0, tau_delta), normalised to unit time integral
    * tabulated: piecewise-linear interpolation of (times, values); constant
      extrapolation of the last value beyond the final sample
    """

    kind: str = "zero"
    value: float = 0.0
    tau_delta: float = 0.0
    times: np.ndarray = field(default=None)
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "laser_flash", "tabulated"):
            raise ValueError("unknown signal kind %r" % (self.kind,))
        if self.kind == "laser_flash" and not self.tau_delta > 0:
            raise ValueError("laser_flash needs tau_delta > 0")
        if self.kind == "tabulated":
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.ndim != 1 or t.shape != v.shape or t.size < 2:
                raise ValueError("tabulated signal needs matching 1-d arrays")
            if np.any(np.diff(t) <= 0):
                raise ValueError("tabulated times must be strictly increasing")
            object.__setattr__(self, "times", t)
            object.__setattr__(self, "values", v)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "constant":
            return np.full_like(t, self.value)
        if self.kind == "laser_flash":
            td = self.tau_delta
            inside = (t > 0) & (t < td)
            out = np.zeros_like(t)
            ts = t[inside]
            out[inside] = (2.0 / td) * np.sin(np.pi * ts / td) ** 2
            return out
        return np.interp(t, self.times, self.values)

    def integral(self, t):
        """int_0^t of the signal (exact for each kind)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(t)
        if self.kind == "constant":
            return self.value * t
        if self.kind == "laser_flash":
            td = self.tau_delta
            tc = np.clip(t, 0.0, td)
            return tc / td - np.sin(2 * np.pi * tc / td) / (2 * np.pi)
        # trapezoid over the sample grid, linear tail in the last panel
        ts, vs = self.times, self.values
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (vs[1:] + vs[:-1]) * np.diff(ts))])
        out = np.interp(t, ts, cum)
        # np.interp clamps; patch panels and tails by exact interpolant integrals
        scalar = out.ndim == 0
        out = np.atleast_1d(out).astype(float)
        tt = np.atleast_1d(t)
        idx = np.searchsorted(ts, tt, side="right") - 1
        inner = (idx >= 0) & (idx < ts.size - 1)
        i = idx[inner]
        dt = tt[inner] - ts[i]
        slope = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i])
        out[inner] = cum[i] + vs[i] * dt + 0.5 * slope * dt**2
        tail = idx >= ts.size - 1
        out[tail] = cum[-1] + vs[-1] * (tt[tail] - ts[-1])
        out[tt <= ts[0]] = vs[0] * (tt[tt <= ts[0]] - ts[0])
        return out[0] if scalar else out


def time_transform(sig, omega, t):
    """g~(omega, t) = int_0^t exp(-omega (t-s)) g(s) ds.

    omega may be a complex array; t is a scalar.  Exact for every supported
    signal kind (the tabulated case integrates the linear interpolant panel
    by panel).
    """
    omega = np.asarray(omega, dtype=complex)
    if t <= 0 or sig.kind == "zero":
        return np.zeros_like(omega)
    if sig.kind == "constant":
        return sig.value * _eta(omega, 0.0, t)
    if sig.kind == "laser_flash":
        td = sig.tau_delta
        b = 2 * np.pi / td
        tc = min(t, td)
        # 2 sin^2(b s / 2) = 1 - cos(b s)
        core = (_eta(omega, 0.0, tc)
                - 0.5 * _eta(omega, b, tc)
                - 0.5 * _eta(omega, -b, tc)) / td
        if t > td:
            core = core * np.exp(-omega * (t - td))
        return core
    # tabulated: per-panel exact integration of the linear interpolant
    ts, vs = sig.times, sig.values
    out = np.zeros_like(omega)
    t0 = ts[0]
    if t0 > 0:
        # constant-left extrapolation is not defined; signal starts at ts[0]
        t0 = ts[0]
    for j in range(ts.size - 1):
        s0 = ts[j]
        if s0 >= t:
            break
        s1 = min(ts[j + 1], t)
        d = s1 - s0
        frac = (s1 - ts[j]) / (ts[j + 1] - ts[j])
        f0 = vs[j]
        f1 = vs[j] + (vs[j + 1] - vs[j]) * frac
        w = omega * d
        out = out + np.exp(-omega * (t - s1)) * d * (
            f0 * _phi1(w) + (f1 - f0) * _psi(w))
    if t > ts[-1]:
        d = t - ts[-1]
        w = omega * d
        out = out + d * vs[-1] * _phi1(w)
    return out


# ---------------------------------------------------------------------------
# spatial profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpaceProfile:
    """A function of x on [0, l].  kind: "zero", "constant", "cosine",
    "tabulated".

    * cosine: value * cos(n pi x / l) for integer mode n
    * tabulated: piecewise-linear through (xs, values); xs must span [0, l]
    """

    kind: str = "zero"
    value: float = 0.0
    mode: int = 1
    l: float = 1.0
    xs: np.ndarray = field(default=None)
    values: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "cosine", "tabulated"):
            raise ValueError("unknown profile kind %r" % (self.kind,))
        if not self.l > 0:
            raise ValueError("profile needs l > 0")
        if self.kind == "tabulated":
            x = np.asarray(self.xs, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if x.ndim != 1 or x.shape != v.shape or x.size < 2:
                raise ValueError("tabulated profile needs matching 1-d arrays")
            if np.any(np.diff(x) <= 0):
                raise ValueError("tabulated xs must be strictly increasing")
            object.__setattr__(self, "xs", x)
            object.__setattr__(self, "values", v)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "constant":
            return np.full_like(x, self.value)
        if self.kind == "cosine":
            return self.value * np.cos(self.mode * np.pi * x / self.l)
        return np.interp(x, self.xs, self.values)


def finite_fourier(profile, k):
    """phi^(k) = int_0^l exp(-i k x) phi(x) dx for complex k (array ok)."""
    k = np.asarray(k, dtype=complex)
    l = profile.l
    if profile.kind == "zero":
        return np.zeros_like(k)
    if profile.kind == "constant":
        return profile.value * l * _phi1(1j * k * l)
    if profile.kind == "cosine":
        # cos(kn x) = (e^{i kn x} + e^{-i kn x}) / 2, kn = n pi / l
        kn = profile.mode * np.pi / l
        return 0.5 * profile.value * l * (
            _phi1(1j * (k - kn) * l) + _phi1(1j * (k + kn) * l))
    xs, vs = profile.xs, profile.values
    out = np.zeros_like(k)
    for j in range(xs.size - 1):
        x0, x1 = xs[j], xs[j + 1]
        d = x1 - x0
        w = 1j * k * d
        out = out + np.exp(-1j * k * x0) * d * (
            vs[j] * _phi1(w) + (vs[j + 1] - vs[j]) * _psibar(w))
    return out


# ---------------------------------------------------------------------------
# distributed source
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SourceTerm:
    """Separable energy source f(x, t) = profile(x) * signal(t)."""

    profile: SpaceProfile = field(default_factory=SpaceProfile)
    signal: TimeSignal = field(default_factory=TimeSignal)

    @property
    def is_zero(self):
        return self.profile.kind == "zero" or self.signal.kind == "zero"

    def __call__(self, x, t):
        return self.profile(x) * self.signal(t)

    def time_transform_at(self, x, omega, t):
        """f~(x, omega, t) = int_0^t e^{-omega (t-s)} f(x, s) ds at fixed x."""
        return self.profile(np.asarray([x], dtype=float))[0] * time_transform(
            self.signal, omega, t)

    def spectral(self, k, omega, t):
        """int_0^t e^{-omega (t-s)} f^(k, s) ds for the separable source."""
        return finite_fourier(self.profile, k) * time_transform(self.signal, omega, t)


def load_signal_csv(path):
    """Read a two-column CSV (time, value) into a tabulated TimeSignal."""
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError("expected two columns in %s" % (path,))
    return TimeSignal(kind="tabulated", times=data[:, 0], values=data[:, 1])


def load_profile_csv(path, l):
    """Read a two-column CSV (x, value) into a tabulated SpaceProfile."""
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError("expected two columns in %s" % (path,))
    return SpaceProfile(kind="tabulated", l=l, xs=data[:, 0], values=data[:, 1])

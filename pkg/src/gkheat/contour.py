"""Deformed integration paths in the complex wavenumber plane.

The paths follow the zero level set of min(Re omega1, Re omega2), which in
rescaled units z = mu*k reduces to a cubic equation for y^2 = (Im z)^2.  The
cubic is solved in closed form (Cardano); a semicircular indentation replaces
the segment near the origin.  Nodes carry composite Gauss-Legendre weights so
that sum(w * f(k)) approximates the path integral of f.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .params import PhysicalParams, derive_params, dispersion_roots


@dataclass(frozen=True)
class ContourSpec:
    """Discretization parameters for one half-path.

    k_max: truncation bound on |Re k|
    n_nodes: approximate node count per half-path
    origin_radius: radius of the indentation arc around k = 0
    grading: exponent concentrating panels toward the origin
    """

    k_max: float
    n_nodes: int = 1200
    origin_radius: float = 0.25
    grading: float = 2.0

    def __post_init__(self):
        if not (self.k_max > self.origin_radius > 0):
            raise ValueError("need k_max > origin_radius > 0")
        if self.n_nodes < 16:
            raise ValueError("need n_nodes >= 16")


def default_spec(p: PhysicalParams, k_max: float | None = None,
                 n_nodes: int | None = None,
                 origin_radius: float | None = None) -> ContourSpec:
    """Reasonable defaults: k_max so that e^{-Im k * l} underflows the
    1e-12 envelope, indentation radius clear of the real-axis poles pi*n/l."""
    if k_max is None:
        k_max = 120.0 / p.l
    if origin_radius is None:
        origin_radius = min(0.5, np.pi / (4.0 * p.l))
    return ContourSpec(k_max=float(k_max),
                       n_nodes=int(n_nodes) if n_nodes else 6000,
                       origin_radius=float(origin_radius))


@dataclass(frozen=True)
class ContourNode:
    """One quadrature abscissa on a half-path."""

    k: complex
    weight: complex
    half: Literal["upper", "lower"]
    on_arc: bool = False
    on_bridge: bool = False


@dataclass(frozen=True)
class CardanoWork:
    """Intermediate quantities of the closed-form cubic solve."""

    a: float
    b: float
    c: float
    P: float
    Q: float
    D: float
    root_alpha: complex
    root_beta: complex
    A: float
    B: float
    s: float


def _cubic_coeffs(bigC: float, x: float):
    x2 = x * x
    a = x2 - 2.0
    b = -(x2 * x2 - 4.0 * bigC * x2 - 1.0)
    c = -(x2 ** 3 + 2.0 * x2 * x2 + x2)
    return a, b, c


def _implicit_mismatch(bigC: float, x: float, s: float) -> float:
    """Residual of y = |x| * sqrt(((x^2+y^2-1)^2+4x^2)/((x^2+y^2-1)^2+4Cx^2))
    with y = sqrt(s)."""
    if s < 0:
        return np.inf
    w = (x * x + s - 1.0) ** 2
    rhs = abs(x) * np.sqrt((w + 4.0 * x * x) / (w + 4.0 * bigC * x * x))
    return abs(np.sqrt(s) - rhs)


def cardano_root(a: float, b: float, c: float,
                 bigC: float | None = None, x: float | None = None) -> CardanoWork:
    """Closed-form solve of s^3 + a s^2 + b s + c = 0 for the nonnegative root.

    The depressed cubic u^3 + P u + Q factors as (u - 2A)[(u + A)^2 + B^2]
    with the cube roots paired so that alpha*beta = -P/3 and A real.  When the
    discriminant is negative all three branch rotations give real roots; the
    one consistent with the implicit path relation (if bigC, x are supplied)
    or the largest nonnegative one is selected.
    """
    P = -a * a / 3.0 + b
    Q = 2.0 * (a / 3.0) ** 3 - a * b / 3.0 + c
    D = (P / 3.0) ** 3 + (Q / 2.0) ** 2
    if D >= 0.0:
        sd = np.sqrt(D)
        # take the cube root of the larger-magnitude summand and recover its
        # partner from alpha*beta = -P/3, avoiding catastrophic cancellation
        m = -Q / 2.0
        alpha = np.cbrt(m + sd if m >= 0 else m - sd)
        beta = np.cbrt(-Q / 2.0 - sd) if alpha == 0.0 else -P / (3.0 * alpha)
        cands = [(alpha + 0j, beta + 0j)]
    else:
        alpha0 = (-Q / 2.0 + 1j * np.sqrt(-D)) ** (1.0 / 3.0)
        rot = np.exp(2j * np.pi / 3.0)
        cands = []
        for j in range(3):
            al = alpha0 * rot ** j
            be = np.conj(al)
            cands.append((al, be))
    best = None
    best_score = np.inf
    for al, be in cands:
        A = (al + be) / 2.0
        if abs(A.imag) > 1e-9 * max(1.0, abs(A)):
            continue
        if abs(al * be - (-P / 3.0)) > 1e-8 * max(1.0, abs(P)):
            continue
        s = 2.0 * A.real - a / 3.0
        if s < -1e-12 * max(1.0, abs(a)):
            continue
        s = max(s, 0.0)
        if bigC is not None and x is not None:
            score = _implicit_mismatch(bigC, x, s)
        else:
            score = -s
        if score < best_score:
            best_score = score
            best = (al, be, A.real, s)
    if best is None:
        raise ArithmeticError(
            f"no cube-root pairing gives a real nonnegative root "
            f"(a={a}, b={b}, c={c})")
    al, be, A, s = best
    B = np.sqrt(3.0) * (al - be) / 2.0
    # polish with Newton to remove cube-root rounding, then check the
    # residual against the size of the largest term of the cubic
    for _ in range(2):
        f = s ** 3 + a * s * s + b * s + c
        df = 3.0 * s * s + 2.0 * a * s + b
        if df != 0.0:
            step = f / df
            if abs(step) < 0.1 * max(1.0, s):
                s = max(s - step, 0.0)
    resid = abs(s ** 3 + a * s * s + b * s + c)
    term = max(abs(s) ** 3, abs(a * s * s), abs(b * s), abs(c), 1.0)
    if resid > 1e-9 * term:
        raise ArithmeticError(f"cubic residual too large: {resid:.3e}")
    return CardanoWork(a=a, b=b, c=c, P=P, Q=Q, D=D,
                       root_alpha=complex(al), root_beta=complex(be),
                       A=float(A), B=float(abs(B)), s=float(s))


def contour_height(bigC: float, x: float) -> float:
    """Height y >= 0 of the path above the real axis in rescaled units,
    as a function of the rescaled real part x."""
    if not np.isfinite(x):
        raise ValueError("x must be finite")
    if bigC <= 0:
        raise ValueError("bigC must be positive")
    if x == 0.0:
        return 0.0
    a, b, c = _cubic_coeffs(bigC, x)
    work = cardano_root(a, b, c, bigC=bigC, x=x)
    return float(np.sqrt(work.s))


def _height_slope(bigC: float, x: float):
    """(y, dy/dx) from implicit differentiation of the cubic at its root.

    ds/dx = -(a' s^2 + b' s + c')/(3 s^2 + 2 a s + b); falls back to a
    central difference if the root is nearly double."""
    if x == 0.0:
        return 0.0, 0.0
    a, b, c = _cubic_coeffs(bigC, x)
    s = cardano_root(a, b, c, bigC=bigC, x=x).s
    da = 2.0 * x
    db = -(4.0 * x ** 3 - 8.0 * bigC * x)
    dc = -(6.0 * x ** 5 + 8.0 * x ** 3 + 2.0 * x)
    denom = 3.0 * s * s + 2.0 * a * s + b
    scale = max(abs(3 * s * s), abs(2 * a * s), abs(b), 1.0)
    if abs(denom) > 1e-8 * scale:
        ds = -(da * s * s + db * s + dc) / denom
    else:
        h = 1e-6 * max(1.0, abs(x))
        ds = (contour_height(bigC, x + h) ** 2
              - contour_height(bigC, x - h) ** 2) / (2 * h)
    y = np.sqrt(s)
    return y, ds / (2.0 * y) if y > 0 else 0.0


def _height_k(p: PhysicalParams, bigC: float, kr: float) -> float:
    """Path height in physical k units at real part kr."""
    mu = np.sqrt(p.mu2)
    return contour_height(bigC, mu * kr) / mu


_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def _gl_panel(f0: float, f1: float):
    """Gauss-Legendre abscissas/weights on the real interval [f0, f1]."""
    mid, half = 0.5 * (f0 + f1), 0.5 * (f1 - f0)
    return mid + half * _GL_X, half * _GL_W


def _cubic_disc(bigC: float, z: float) -> float:
    """Cardano discriminant of the height cubic at scaled abscissa z."""
    a = z * z - 2.0
    b = -(z ** 4 - 4.0 * bigC * z * z - 1.0)
    c = -(z ** 6 + 2.0 * z ** 4 + z * z)
    P = -a * a / 3.0 + b
    Q = 2.0 * (a / 3.0) ** 3 - a * b / 3.0 + c
    return (P / 3.0) ** 3 + (Q / 2.0) ** 2


@lru_cache(maxsize=64)
def fold_window(bigC: float):
    """Scaled-abscissa interval where the height cubic has three real roots.

    For small C the zero-real-part locus folds back in the real direction,
    so its height is triple-valued on this window and no single-root
    formula traces a continuous path across it.  Returns (z_left, z_right)
    or None; empirically the window exists only for C below roughly 0.3 and
    sits at z < 0.5.
    """
    zs = np.linspace(1e-6, 2.0, 4001)
    d = np.array([_cubic_disc(bigC, z) for z in zs])
    neg = np.where(d < 0)[0]
    if neg.size == 0:
        return None
    lo, hi = zs[neg[0] - 1], zs[neg[0]]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _cubic_disc(bigC, mid) < 0:
            hi = mid
        else:
            lo = mid
    zl = lo
    lo, hi = zs[neg[-1]], zs[min(neg[-1] + 1, zs.size - 1)]
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _cubic_disc(bigC, mid) < 0:
            lo = mid
        else:
            hi = mid
    return zl, hi


def build_contour(p: PhysicalParams, spec: ContourSpec,
                  half: Literal["upper", "lower"]) -> list[ContourNode]:
    """Discretize one half-path with its origin indentation.

    Upper path runs left to right, lower path right to left, so the region
    of decaying exponentials is kept to the left of the direction of travel.
    Weights are composite Gauss-Legendre in the real-part (branch) or angle
    (arc) parametrization; sum(w_j f(k_j)) ~ integral of f along the path.
    """
    if half not in ("upper", "lower"):
        raise ValueError("half must be 'upper' or 'lower'")
    d = derive_params(p)
    C = d.bigC
    r0 = spec.origin_radius
    sgn = 1.0 if half == "upper" else -1.0

    n_branch_panels = max(4, spec.n_nodes // (2 * len(_GL_X)))
    n_arc_panels = max(2, n_branch_panels // 8)

    # graded panel edges from r0 out to k_max, denser near the origin
    u = np.linspace(0.0, 1.0, n_branch_panels + 1)
    edges = r0 + (spec.k_max - r0) * u ** spec.grading

    mu = np.sqrt(p.mu2)
    # panel edges must land on the kinks where the straight fold bridge
    # meets the curved sections, or panel quadrature loses its accuracy
    w = fold_window(C)
    if w is not None:
        kinks = [z / mu for z in w if r0 < z / mu < spec.k_max]
        if kinks:
            edges = np.unique(np.concatenate([edges, kinks]))

    # where the height locus folds back (small C), replace it by a straight
    # bridge between the single-root sections; the integrand is analytic
    # off the real axis, so this homotopic shortcut leaves integrals intact
    win = fold_window(C)
    if win is not None:
        zl, zr = win
        yl, yr = contour_height(C, zl), contour_height(C, zr)
        bridge_slope = (yr - yl) / (zr - zl)

    def branch_nodes(xa: float, xb: float):
        ks, ws, br = [], [], []
        xs, wx = _gl_panel(xa, xb)
        for xr, wr in zip(xs, wx):
            z = mu * abs(xr)
            if win is not None and zl < z < zr:
                y = yl + (z - zl) * bridge_slope
                dy = bridge_slope
                br.append(True)
            else:
                y, dy = _height_slope(C, z)  # slope dy/dx is scale-free
                br.append(False)
            if xr < 0:
                dy = -dy
            ks.append(xr + 1j * sgn * y / mu)
            ws.append(wr * (1.0 + 1j * sgn * dy))
        return ks, ws, br

    nodes: list[ContourNode] = []
    # left branch: k_R from -k_max to -r0 (upper); reversed for the lower half
    left_edges = [(-b, -a) for a, b in
                  zip(edges[:-1], edges[1:])][::-1]
    right_edges = list(zip(edges[:-1], edges[1:]))
    # arc joining k(-r0) to k(+r0) through sgn*i, radius |k(r0)|
    y0 = _height_k(p, C, r0)
    rho = abs(r0 + 1j * y0)
    phi0 = np.angle(r0 + 1j * y0)
    ang_a, ang_b = np.pi - phi0, phi0     # traversed with k_R increasing

    segments = []
    for a, b in left_edges:
        segments.append(("branch", a, b))
    arc_edges = np.linspace(ang_a, ang_b, n_arc_panels + 1)
    for a, b in zip(arc_edges[:-1], arc_edges[1:]):
        segments.append(("arc", a, b))
    for a, b in right_edges:
        segments.append(("branch", a, b))
    if half == "lower":
        segments = [(kind, b, a) for kind, a, b in segments[::-1]]

    for kind, a, b in segments:
        if kind == "branch":
            ks, ws, br = branch_nodes(a, b)
            for kk, ww, bb in zip(ks, ws, br):
                nodes.append(ContourNode(k=complex(kk), weight=complex(ww),
                                         half=half, on_bridge=bb))
        else:
            phis, wphi = _gl_panel(a, b)
            for ph, wp in zip(phis, wphi):
                kk = rho * np.exp(1j * sgn * ph)
                nodes.append(ContourNode(k=complex(kk),
                                         weight=complex(wp * 1j * sgn * kk),
                                         half=half, on_arc=True))
    return nodes


def tail_nodes(p: PhysicalParams, spec: ContourSpec,
               half: Literal["upper", "lower"],
               n_panels: int = 24) -> list[ContourNode]:
    """Nodes continuing both branches from ``k_max`` out to infinity.

    The substitution x = k_max / u maps each infinite branch tail onto
    u in (0, 1], where integrands with algebraic 1/k decay become smooth,
    so composite Gauss-Legendre in u resolves the whole tail.  Useful for
    quantities (boundary-trace transforms at x = 0) whose integrands decay
    only algebraically along the path.  Appending these to the output of
    ``build_contour`` keeps the traversal-direction sign convention.
    """
    if half not in ("upper", "lower"):
        raise ValueError("half must be 'upper' or 'lower'")
    d = derive_params(p)
    C = d.bigC
    sgn = 1.0 if half == "upper" else -1.0
    mu = np.sqrt(p.mu2)
    edges = np.linspace(0.0, 1.0, n_panels + 1)

    nodes: list[ContourNode] = []
    for side in (-1.0, 1.0):
        for ua, ub in zip(edges[:-1], edges[1:]):
            us, wu = _gl_panel(ua, ub)
            for uu, wuu in zip(us, wu):
                if uu <= 0.0:
                    continue
                xr = spec.k_max / uu
                y, dy = _height_slope(C, mu * xr)
                kk = side * xr + 1j * sgn * y / mu
                # traversal runs outward on the right branch and inward on
                # the left; combined with dx/du = -side*k_max/u^2 and the
                # odd height slope this leaves a single side factor on dy.
                dkdu = (spec.k_max / uu ** 2) * (1.0 + 1j * sgn * side * dy)
                ww = wuu * dkdu
                if half == "lower":
                    ww = -ww
                nodes.append(ContourNode(k=complex(kk), weight=complex(ww),
                                         half=half))
    return nodes


def build_contour_pair(p: PhysicalParams, spec: ContourSpec | None = None,
                       tail_panels: int = 0):
    """(upper, lower) node lists, optionally extended to infinity.

    With tail_panels > 0 each half is continued past k_max by
    ``tail_nodes``; use this whenever the integrand decays only
    algebraically (boundary-trace quantities at x = 0).
    """
    if spec is None:
        spec = default_spec(p)
    pair = []
    for half in ("upper", "lower"):
        nodes = build_contour(p, spec, half)
        if tail_panels:
            nodes = nodes + tail_nodes(p, spec, half, n_panels=tail_panels)
        pair.append(nodes)
    return tuple(pair)


def contour_arrays(nodes: list[ContourNode]):
    """Node abscissas and weights as complex ndarrays."""
    ks = np.array([n.k for n in nodes], dtype=complex)
    ws = np.array([n.weight for n in nodes], dtype=complex)
    return ks, ws


def validate_contour(p: PhysicalParams, nodes: list[ContourNode]) -> dict:
    """Check that non-arc nodes sit on the zero level set of min Re omega.

    Returns diagnostics instead of raising: the maximum violation (in units
    of 1/tau) and whether the path passes at 1e-8."""
    ks = np.array([n.k for n in nodes if not (n.on_arc or n.on_bridge)],
                  dtype=complex)
    if ks.size == 0:
        return {"max_violation": 0.0, "ok": True, "n_checked": 0}
    o1, o2 = dispersion_roots(p, ks)
    level = np.minimum(o1.real, o2.real)
    viol = float(np.max(np.abs(level)) * p.tau)
    return {"max_violation": viol, "ok": viol <= 1e-8,
            "n_checked": int(ks.size)}

"""Command-line front end: solve scenarios, compare methods, dump contours.

Scenario files are INI-style with sections [params], [boundary], [initial],
[source], [output]; tabulated data is referenced by CSV path relative to
the scenario file.  Outputs are CSV with 17 significant digits plus a JSON
manifest echoing the effective configuration.

Exit codes: 0 success, 2 configuration error, 3 method precondition
violation, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

import numpy as np

from .contour import ContourSpec, build_contour, build_contour_pair, default_spec
from .fd import FdGrid, FdInstabilityError, fd_solve
from .params import PhysicalParams
from .series import series_initial_data, series_laser_flash
from .signals import (SourceTerm, SpaceProfile, TimeSignal, load_profile_csv,
                      load_signal_csv)
from .solver import (Scenario, evaluate_fastpath_laserflash,
                     evaluate_solution, solve_field)

EXIT_CONFIG = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4

_FMT = "%.17g"


class ConfigError(ValueError):
    pass


def _signal_from(sec, prefix, base_dir):
    kind = sec.get(prefix, "zero")
    if kind == "zero":
        return TimeSignal()
    if kind == "constant":
        return TimeSignal(kind="constant",
                          value=float(sec[prefix + "_value"]))
    if kind == "laser_flash":
        return TimeSignal(kind="laser_flash",
                          tau_delta=float(sec[prefix + "_tau_delta"]))
    if kind == "tabulated":
        return load_signal_csv(os.path.join(base_dir, sec[prefix + "_csv"]))
    raise ConfigError("unknown signal kind %r for %s" % (kind, prefix))


def _profile_from(sec, prefix, base_dir, l):
    kind = sec.get(prefix, "zero")
    if kind == "zero":
        return SpaceProfile()
    if kind == "constant":
        return SpaceProfile(kind="constant", l=l,
                            value=float(sec[prefix + "_value"]))
    if kind == "cosine":
        return SpaceProfile(kind="cosine", l=l,
                            value=float(sec[prefix + "_value"]),
                            mode=int(sec.get(prefix + "_mode", "1")))
    if kind == "tabulated":
        return load_profile_csv(os.path.join(base_dir, sec[prefix + "_csv"]), l)
    raise ConfigError("unknown profile kind %r for %s" % (kind, prefix))


def load_scenario(path):
    """Parse a scenario file into (Scenario, output dict)."""
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError("cannot read scenario file %r" % (path,))
    base = os.path.dirname(os.path.abspath(path))
    try:
        ps = cp["params"]
        p = PhysicalParams(alpha=float(ps["alpha"]), tau=float(ps["tau"]),
                           mu2=float(ps["mu2"]), l=float(ps.get("l", "1.0")))
        bs = cp["boundary"] if cp.has_section("boundary") else {}
        init = cp["initial"] if cp.has_section("initial") else {}
        src = cp["source"] if cp.has_section("source") else {}
        scn = Scenario(
            params=p,
            gamma0=float(bs.get("gamma0", "0.0")),
            gammal=float(bs.get("gammal", "0.0")),
            g=_signal_from(bs, "g", base),
            h=_signal_from(bs, "h", base),
            phi=_profile_from(init, "phi", base, p.l),
            psi=_profile_from(init, "psi", base, p.l),
            source=SourceTerm(profile=_profile_from(src, "profile", base, p.l),
                              signal=_signal_from(src, "signal", base)),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    out = dict(cp["output"]) if cp.has_section("output") else {}
    return scn, out


def _grid_from(out, args, l):
    xs_spec = args.x if args.x is not None else out.get("x", "right-boundary")
    if xs_spec == "right-boundary":
        xs = np.array([l])
    else:
        xs = np.array([float(v) for v in str(xs_spec).split(",")])
    t0 = float(args.t_start if args.t_start is not None
               else out.get("t_start", "0.0"))
    t1 = float(args.t_end if args.t_end is not None else out.get("t_end", "1.0"))
    dt = float(args.t_step if args.t_step is not None
               else out.get("t_step", "0.02"))
    if xs.size == 0 or t1 < t0 or dt <= 0:
        raise ConfigError("empty output grid")
    ts = np.arange(t0, t1 + 0.5 * dt, dt)
    return xs, ts


def _contour_spec(args, p):
    spec = default_spec(p)
    return ContourSpec(
        k_max=args.k_max if args.k_max else spec.k_max,
        n_nodes=args.n_nodes if args.n_nodes else spec.n_nodes,
        origin_radius=args.r0 if args.r0 else spec.origin_radius,
        grading=spec.grading)


def _write_field_csv(path, xs, ts, e, q):
    with open(path, "w") as fh:
        fh.write("x,t,e,q\n")
        for j, t in enumerate(ts):
            for i, x in enumerate(xs):
                fh.write(",".join(_FMT % v for v in (x, t, e[j, i], q[j, i]))
                         + "\n")


def _manifest(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _solve_to_arrays(scn, method, xs, ts, args):
    p = scn.params
    if method == "utm" or method == "fastpath":
        spec = _contour_spec(args, p)
        pair = build_contour_pair(p, spec)
        e = np.empty((ts.size, xs.size))
        q = np.empty((ts.size, xs.size))
        fast = method == "fastpath" or (method == "utm" and scn.is_fastpath)
        if method == "fastpath" and not scn.is_fastpath:
            raise ValueError("fastpath needs a flux-only scenario "
                             "(gamma0 = 0, h = 0, no initial data or source)")
        for j, t in enumerate(ts):
            if fast:
                e[j], q[j] = evaluate_fastpath_laserflash(scn, pair, xs, t)
            else:
                e[j], q[j] = evaluate_solution(scn, pair, xs, t)
        return e, q
    if method == "series":
        N = args.series_n
        e = np.empty((ts.size, xs.size))
        q = np.empty((ts.size, xs.size))
        use_flux = scn.phi.kind == "zero" and scn.psi.kind == "zero"
        for j, t in enumerate(ts):
            if use_flux:
                ej, qj = series_laser_flash(scn, xs, t, N=N)
            else:
                ej, qj = series_initial_data(scn, xs, t, N=N)
            e[j], q[j] = np.real(ej), np.real(qj)
        return e, q
    if method == "fd":
        nt = args.fd_nt or int(np.ceil(ts[-1] / (p.tau / 10.0)))
        grid = FdGrid(nx=args.fd_nx, nt=max(nt, 1), t_end=max(ts[-1], ts[0])
                      if ts[-1] > 0 else 1.0)
        field = fd_solve(scn, grid)
        e = np.empty((ts.size, xs.size))
        q = np.empty((ts.size, xs.size))
        for j, t in enumerate(ts):
            e[j], q[j] = field(xs, t)
        return e, q
    raise ConfigError("unknown method %r" % (method,))


def cmd_solve(args):
    scn, out = load_scenario(args.scenario)
    xs, ts = _grid_from(out, args, scn.params.l)
    try:
        e, q = _solve_to_arrays(scn, args.method, xs, ts, args)
    except (ValueError, FdInstabilityError) as exc:
        if isinstance(exc, FdInstabilityError):
            print("numerical failure:", exc, file=sys.stderr)
            return EXIT_NUMERICAL
        print("precondition violation:", exc, file=sys.stderr)
        return EXIT_PRECONDITION
    if not (np.all(np.isfinite(e)) and np.all(np.isfinite(q))):
        print("numerical failure: non-finite output", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_field_csv(args.output, xs, ts, e, q)
    _manifest(args.output + ".manifest.json", {
        "command": "solve", "scenario": os.path.abspath(args.scenario),
        "method": args.method, "x": list(xs), "t_start": ts[0],
        "t_end": ts[-1], "n_t": int(ts.size),
        "k_max": args.k_max, "n_nodes": args.n_nodes, "r0": args.r0,
        "series_n": args.series_n, "fd_nx": args.fd_nx, "fd_nt": args.fd_nt,
        "output": os.path.abspath(args.output)})
    return 0


def cmd_compare(args):
    scn_a, out_a = load_scenario(args.scenario)
    scn_b, out_b = load_scenario(args.scenario_b or args.scenario)
    xs, ts = _grid_from(out_a, args, scn_a.params.l)
    xs_b, ts_b = _grid_from(out_b, args, scn_b.params.l)
    if xs.shape != xs_b.shape or ts.shape != ts_b.shape or \
            not (np.allclose(xs, xs_b) and np.allclose(ts, ts_b)):
        print("output grids differ between configs", file=sys.stderr)
        return EXIT_CONFIG
    try:
        e_a, q_a = _solve_to_arrays(scn_a, args.method, xs, ts, args)
        e_b, q_b = _solve_to_arrays(scn_b, args.method_b, xs, ts, args)
    except (ValueError, FdInstabilityError) as exc:
        if isinstance(exc, FdInstabilityError):
            print("numerical failure:", exc, file=sys.stderr)
            return EXIT_NUMERICAL
        print("precondition violation:", exc, file=sys.stderr)
        return EXIT_PRECONDITION
    report = {}
    for name, a, b in (("e", e_a, e_b), ("q", q_a, q_b)):
        diff = np.max(np.abs(a - b))
        scale = max(np.max(np.abs(a)), np.max(np.abs(b)), np.finfo(float).tiny)
        report["max_abs_d" + name] = diff
        report["rel_linf_d" + name] = diff / scale
        print("%s: max |diff| = %.6e  rel Linf = %.6e"
              % (name, diff, diff / scale))
    if args.output:
        _manifest(args.output, {
            "command": "compare", "method_a": args.method,
            "method_b": args.method_b, **report})
    return 0


def cmd_contour(args):
    scn, _ = load_scenario(args.scenario)
    p = scn.params
    spec = _contour_spec(args, p)
    with open(args.output, "w") as fh:
        fh.write("k_re,k_im,w_re,w_im,half\n")
        for half in ("upper", "lower"):
            for n in build_contour(p, spec, half):
                fh.write(",".join(_FMT % v for v in
                                  (n.k.real, n.k.imag, n.weight.real,
                                   n.weight.imag)) + "," + half + "\n")
    _manifest(args.output + ".manifest.json", {
        "command": "contour", "scenario": os.path.abspath(args.scenario),
        "k_max": spec.k_max, "n_nodes": spec.n_nodes,
        "r0": spec.origin_radius, "output": os.path.abspath(args.output)})
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="gkheat",
        description="Heat-conduction solver with flux relaxation and "
                    "nonlocal flux diffusion on a finite interval.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("scenario", help="scenario file (INI format)")
        sp.add_argument("--method", default="utm",
                        choices=["utm", "fastpath", "series", "fd"])
        sp.add_argument("--x", help='comma list of positions, or '
                                    '"right-boundary"')
        sp.add_argument("--t-start", type=float, dest="t_start")
        sp.add_argument("--t-end", type=float, dest="t_end")
        sp.add_argument("--t-step", type=float, dest="t_step")
        sp.add_argument("--k-max", type=float, dest="k_max",
                        help="contour truncation radius")
        sp.add_argument("--n-nodes", type=int, dest="n_nodes",
                        help="contour quadrature nodes per half-path")
        sp.add_argument("--r0", type=float, help="origin indentation radius")
        sp.add_argument("--series-n", type=int, default=200, dest="series_n")
        sp.add_argument("--fd-nx", type=int, default=400, dest="fd_nx")
        sp.add_argument("--fd-nt", type=int, default=0, dest="fd_nt")

    sp = sub.add_parser("solve", help="solve a scenario and write x,t,e,q CSV")
    common(sp)
    sp.add_argument("-o", "--output", default="solution.csv")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("compare", help="solve with two methods and report "
                                        "field differences")
    common(sp)
    sp.add_argument("--scenario-b", dest="scenario_b",
                    help="second scenario file (default: same as first)")
    sp.add_argument("--method-b", default="series", dest="method_b",
                    choices=["utm", "fastpath", "series", "fd"])
    sp.add_argument("-o", "--output", default="",
                    help="optional JSON report path")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("contour", help="dump quadrature nodes for the "
                                        "spectral paths")
    common(sp)
    sp.add_argument("-o", "--output", default="contour.csv")
    sp.set_defaults(func=cmd_contour)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print("configuration error:", exc, file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry points.

Subcommands: ``riemann`` (wave algebra and exact sampling), ``shock-profile``
(viscous profile table), ``rarefaction`` (smooth fan snapshot and decay
report), ``simulate`` (one viscous run with artifacts), ``sweep``
(viscosity sweep), ``check`` (re-verify stored snapshots).

Exit codes: 0 on success, 1 when ``check`` finds violations, 2 on
configuration errors, 3 on numerical aborts.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .entropy import (FunctionalFrame, WeightParams, evaluate_functionals,
                      identity_residual, nonnegativity_violations)
from .errors import ConfigError, NumericalAbort
from .gas import GasParams, State, lambda2, pressure
from .harness import (SweepConfig, jsonable, build_wave, emit_report,
                      parse_config, run_simulation, run_sweep, sha256_file,
                      write_csv)
from .rarefaction import (RarefactionParams, lp_decay_report,
                          smooth_rarefaction_derivatives)
from .riemann import RiemannSetup, riemann_sample, solve_intermediate
from .shock_profile import build_profile, derivative_bounds_check
from .solver import Grid1D

__all__ = ["main"]


def _gas_from_args(args) -> GasParams:
    return GasParams(gamma=args.gamma, alpha=args.alpha)


def _setup_from_args(args) -> RiemannSetup:
    """Wave triple from flags, or from a config file when --config is given."""
    if args.config:
        cfg = parse_config(args.config, mode="waves")
        gas = GasParams(gamma=cfg["gas"]["gamma"], alpha=cfg["gas"]["alpha"])
        r = cfg["riemann"]
        return RiemannSetup(gas=gas, v_minus=r["v_minus"], v_mid=r["v_mid"],
                            v_plus=r["v_plus"], u_minus=r.get("u_minus", 0.0))
    gas = _gas_from_args(args)
    for name in ("v_minus", "v_mid", "v_plus"):
        if getattr(args, name) is None:
            raise ConfigError(f"--{name.replace('_', '-')} is required "
                              "(or pass --config)")
    return RiemannSetup(gas=gas, v_minus=args.v_minus, v_mid=args.v_mid,
                        v_plus=args.v_plus, u_minus=args.u_minus)


def _add_wave_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI config supplying [gas]/[riemann]")
    p.add_argument("--gamma", type=float, default=1.4)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--v-minus", dest="v_minus", type=float)
    p.add_argument("--v-mid", dest="v_mid", type=float)
    p.add_argument("--v-plus", dest="v_plus", type=float)
    p.add_argument("--u-minus", dest="u_minus", type=float, default=0.0)


def _print_json(obj) -> None:
    json.dump(jsonable(obj), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _cmd_riemann(args) -> int:
    if args.u_plus is not None:
        gas = _gas_from_args(args)
        if args.v_minus is None or args.v_plus is None:
            raise ConfigError("--u-plus mode needs --v-minus and --v-plus")
        v_mid, resid = solve_intermediate(
            gas, State(args.v_minus, args.u_minus), State(args.v_plus, args.u_plus))
        setup = RiemannSetup(gas=gas, v_minus=args.v_minus, v_mid=v_mid,
                             v_plus=args.v_plus, u_minus=args.u_minus)
        solve_info = {"solved_v_mid": v_mid, "solve_residual": resid}
    else:
        setup = _setup_from_args(args)
        solve_info = {}
    gas = setup.gas
    out = {
        "gamma": gas.gamma, "alpha": gas.alpha,
        "v_minus": setup.v_minus, "v_mid": setup.v_mid, "v_plus": setup.v_plus,
        "u_minus": setup.u_minus, "u_mid": setup.u_mid, "u_plus": setup.u_plus,
        "sigma1": setup.sigma1, "eps1": setup.eps1, "eps2": setup.eps2,
        "eps": setup.eps,
        "p_minus": pressure(gas, setup.v_minus),
        "p_mid": pressure(gas, setup.v_mid),
        "p_plus": pressure(gas, setup.v_plus),
        "lambda2_mid": lambda2(gas, setup.v_mid),
        "lambda2_plus": lambda2(gas, setup.v_plus),
        **solve_info,
    }
    if args.sample_t is not None:
        xs = np.linspace(args.sample_window[0], args.sample_window[1],
                         args.sample_points)
        v, u = riemann_sample(setup, args.sample_t, xs)
        path = Path(args.out or "riemann_sample.csv")
        write_csv(path, ["x", "v", "u"], [xs, v, u])
        out["sample_file"] = str(path)
        out["sample_sha256"] = sha256_file(path)
    _print_json(out)
    return 0


def _cmd_shock_profile(args) -> int:
    setup = _setup_from_args(args)
    profile = build_profile(setup.gas, setup, dxi=args.dxi)
    path = Path(args.out or "profile.csv")
    write_csv(path, ["xi", "v", "u", "h", "dv"],
              [profile.xi, profile.v_tab, profile.u_tab, profile.h_tab,
               profile.dv_tab])
    checks = derivative_bounds_check(profile)
    _print_json({
        "sigma1": setup.sigma1, "eps1": setup.eps1,
        "dxi": profile.dxi, "half_width": profile.half_width,
        "c1": profile.c1, "C1": profile.C1,
        "rate_left": profile.rate_left, "decay_r2": profile.decay_r2,
        "checks": checks,
        "table_file": str(path), "table_sha256": sha256_file(path),
    })
    return 0


def _cmd_rarefaction(args) -> int:
    setup = _setup_from_args(args)
    rp = RarefactionParams(gas=setup.gas, v_mid=setup.v_mid, v_plus=setup.v_plus,
                           u_mid=setup.u_mid, a=args.a)
    xs = np.linspace(args.window[0], args.window[1], args.points)
    rf = smooth_rarefaction_derivatives(rp, args.t, xs)
    path = Path(args.out or "rarefaction.csv")
    write_csv(path, ["x", "v", "u", "v_x", "u_x"],
              [xs, rf.v, rf.u, rf.v_x, rf.u_x])
    times = [float(t) for t in args.times.split(",")] if args.times else [1.0, 2.0, 5.0, 10.0]
    report = lp_decay_report(rp, times)
    report["snapshot_file"] = str(path)
    report["snapshot_sha256"] = sha256_file(path)
    _print_json(report)
    return 0


def _cmd_simulate(args) -> int:
    cfg = parse_config(args.config, mode="simulate")
    outdir = args.out or cfg["output"]["dir"]
    result = run_simulation(cfg, outdir)
    _print_json({
        "out_dir": str(outdir),
        "tau_end": result.state.tau,
        "E0": result.state.E0,
        "X_final": result.state.X,
        "min_v": result.min_v,
        "n_steps": result.n_steps,
        "dtau": result.dtau,
        "mass_residual": result.mass_drift - result.flux_accumulated,
    })
    return 0


def _cmd_sweep(args) -> int:
    if args.config:
        cfg = parse_config(args.config, mode="sweep")
        sw, r, g = cfg["sweep"], cfg["riemann"], cfg["gas"]
        pert = [cfg["perturbation"]] if cfg.get("perturbation") else []
        sc = SweepConfig(
            v_minus=r["v_minus"], v_mid=r["v_mid"], v_plus=r["v_plus"],
            u_minus=r.get("u_minus", 0.0), gamma=g["gamma"], alpha=g["alpha"],
            nu_list=tuple(sw["nu_list"]), a_rule=sw["a_rule"],
            t_final=sw["t_final"], dy=sw["dy"],
            window=(sw["window_left"], sw["window_right"]),
            away_coef=sw["away_coef"], n_checkpoints=sw["n_checkpoints"],
            cfl=cfg["time"]["cfl"], lam=cfg["shift"]["lam"],
            perturbations=tuple(dict(p) for p in pert),
        )
    else:
        sc = SweepConfig()
    report = run_sweep(sc)
    paths = emit_report(report, args.out)
    _print_json({
        "out_dir": str(args.out),
        "config_hash": report.config_hash,
        "n_records": len(report.records),
        "statuses": [rec["status"] for rec in report.records],
        "trends": report.trends,
        "files": paths,
    })
    return 0


def _load_snapshot_csv(path: Path):
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.ndim != 2 or data.shape[1] < 3:
        raise ConfigError(f"snapshot {path} is not a y,v,h table")
    return data[:, 0], data[:, 1], data[:, 2]


def _cmd_check(args) -> int:
    mdir = Path(args.dir)
    mpath = mdir / "manifest.json"
    if not mpath.exists():
        raise ConfigError(f"no manifest.json under {mdir}")
    with open(mpath) as fh:
        manifest = json.load(fh)
    cfg = manifest["config"]
    derived = manifest["derived"]
    nu = cfg["time"]["nu"]
    a = cfg["rarefaction"]["a"]
    cw = build_wave(cfg["gas"], cfg["riemann"], nu, a,
                    dxi=derived["profile"]["dxi"])
    g = derived["grid"]
    grid = Grid1D(y_left=g["y_left"], y_right=g["y_right"], n=g["n"])
    lam = cfg.get("shift", {}).get("lam", 0.1)
    wp = WeightParams(profile=cw.profile, lam=lam)
    deltas = [float(d) for d in args.deltas.split(",")]
    snapshots = manifest["snapshots"]
    if args.snapshot is not None:
        snapshots = [s for s in snapshots if s["index"] == args.snapshot]
        if not snapshots:
            raise ConfigError(f"no snapshot with index {args.snapshot}")

    failures = 0
    for snap in snapshots:
        spath = mdir / snap["file"]
        digest = sha256_file(spath)
        if digest != snap["sha256"]:
            raise ConfigError(f"checksum mismatch for {snap['file']}: "
                              f"{digest} != {snap['sha256']}")
        ys, v, h = _load_snapshot_csv(spath)
        if ys.shape[0] != grid.n or np.max(np.abs(ys - grid.ys)) > 1e-9:
            raise ConfigError(f"{snap['file']} grid does not match the manifest")
        cf = cw.eval(snap["tau"], grid.ys, snap["X"])
        frame = FunctionalFrame(cw.gas, grid.ys, grid.dy, cf, wp,
                                cw.setup.sigma1, cw.setup.eps1, cw.setup.eps2)
        for delta in deltas:
            report = evaluate_functionals(frame, v, h, delta, snap["tau"],
                                          derived.get("E0", 0.0))
            resid = identity_residual(report)
            tol = 1e-10 * (1.0 + abs(report.J_bad) + abs(report.J_good))
            bad = nonnegativity_violations(report, lam)
            ok = abs(resid) <= tol and not bad
            status = "PASS" if ok else "FAIL"
            print(f"{status} snapshot={snap['index']} tau={snap['tau']:.6g} "
                  f"delta={delta:g} identity_residual={resid:.3e} "
                  f"(tol {tol:.3e}) violations={bad if bad else '{}'}")
            if not ok:
                failures += 1
    print(f"{'OK' if failures == 0 else 'VIOLATIONS'}: "
          f"{len(snapshots)} snapshot(s), {len(deltas)} delta value(s), "
          f"{failures} failure(s)")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compwave",
        description="Numerical laboratory for shock/rarefaction composite "
                    "waves of the isentropic p-system with viscosity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("riemann", help="wave algebra and exact-solution sampling")
    _add_wave_flags(p)
    p.add_argument("--u-plus", dest="u_plus", type=float, default=None,
                   help="solve for v_mid from (v_minus,u_minus)->(v_plus,u_plus)")
    p.add_argument("--sample-t", dest="sample_t", type=float, default=None)
    p.add_argument("--sample-window", dest="sample_window", type=float, nargs=2,
                   default=(-1.5, 1.5))
    p.add_argument("--sample-points", dest="sample_points", type=int, default=1001)
    p.add_argument("--out", help="CSV path for the sample")
    p.set_defaults(func=_cmd_riemann)

    p = sub.add_parser("shock-profile", help="viscous shock profile table")
    _add_wave_flags(p)
    p.add_argument("--dxi", type=float, default=0.01)
    p.add_argument("--out", help="CSV path for the table")
    p.set_defaults(func=_cmd_shock_profile)

    p = sub.add_parser("rarefaction", help="smooth rarefaction snapshot and decay report")
    _add_wave_flags(p)
    p.add_argument("--a", type=float, default=1.0, help="smoothing width")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--window", type=float, nargs=2, default=(-10.0, 15.0))
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--times", default=None, help="comma list for the decay report")
    p.add_argument("--out", help="CSV path for the snapshot")
    p.set_defaults(func=_cmd_rarefaction)

    p = sub.add_parser("simulate", help="run one viscous simulation")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="output directory")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="vanishing-viscosity sweep")
    p.add_argument("--config", default=None)
    p.add_argument("--out", default="out_sweep")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("check", help="re-verify functional identities on stored snapshots")
    p.add_argument("--dir", required=True, help="simulation output directory")
    p.add_argument("--snapshot", type=int, default=None)
    p.add_argument("--deltas", default="0.05,0.1,0.25")
    p.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalAbort as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

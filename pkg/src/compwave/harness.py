"""Experiment drivers: configuration, single runs, viscosity sweeps, reports.

Configs are INI files (configparser syntax) with sections ``[gas]``,
``[riemann]``, ``[rarefaction]``, ``[grid]``, ``[time]``, ``[perturbation]``,
``[shift]``, ``[output]`` and ``[sweep]``; unknown sections or keys are
rejected so typos fail loudly.  All emitted artifacts are deterministic
functions of the config — wall-clock timings go to a separate sidecar file so
that re-running an identical config reproduces the report files bit for bit.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, NumericalAbort
from .gas import GasParams
from .rarefaction import RarefactionParams
from .riemann import RiemannSetup, riemann_sample
from .shock_profile import build_profile
from .solver import CompositeWave, Grid1D, RunConfig, RunResult, run

__all__ = [
    "parse_config",
    "config_hash",
    "build_wave",
    "auto_domain",
    "report_energy_lhs",
    "l1_metrics",
    "SweepConfig",
    "SweepReport",
    "run_sweep",
    "emit_report",
    "run_simulation",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = "1"

# Far-field margin: boundary deviation target 1e-9 on an O(1) amplitude.
_MARGIN_LOG = math.log(1e9)


# ---------------------------------------------------------------------------
# configuration

def _cast_float(s):
    return float(s)


def _cast_int(s):
    return int(s)


def _cast_bool(s):
    t = s.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _cast_str(s):
    return s.strip()


def _cast_float_list(s):
    vals = [float(tok) for tok in s.replace(",", " ").split()]
    if not vals:
        raise ValueError("empty list")
    return vals


_SCHEMA = {
    "gas": {"gamma": _cast_float, "alpha": _cast_float},
    "riemann": {"v_minus": _cast_float, "v_mid": _cast_float,
                "v_plus": _cast_float, "u_minus": _cast_float},
    "rarefaction": {"a": _cast_float},
    "grid": {"y_left": _cast_float, "y_right": _cast_float, "n": _cast_int,
             "auto": _cast_bool, "dy": _cast_float},
    "time": {"nu": _cast_float, "tau_end": _cast_float, "cfl": _cast_float,
             "n_checkpoints": _cast_int, "dtau": _cast_float},
    "perturbation": {"field": _cast_str, "kind": _cast_str,
                     "amplitude": _cast_float, "center": _cast_float,
                     "width": _cast_float},
    "shift": {"lam": _cast_float, "delta": _cast_float},
    "output": {"dir": _cast_str, "snapshots": _cast_bool},
    "sweep": {"nu_list": _cast_float_list, "t_final": _cast_float,
              "a_rule": _cast_str, "dy": _cast_float,
              "window_left": _cast_float, "window_right": _cast_float,
              "away_coef": _cast_float, "n_checkpoints": _cast_int},
}

_DEFAULTS = {
    "gas": {"gamma": 1.4, "alpha": 1.0},
    "riemann": {"u_minus": 0.0},
    "time": {"cfl": 0.4, "n_checkpoints": 11},
    "shift": {"lam": 0.1},
    "output": {"dir": "out", "snapshots": True},
    "sweep": {"a_rule": "sqrt", "dy": 0.25, "window_left": -1.5,
              "window_right": 1.5, "away_coef": 3.0, "n_checkpoints": 51},
}

_REQUIRED = {
    "simulate": [("riemann", "v_minus"), ("riemann", "v_mid"),
                 ("riemann", "v_plus"), ("rarefaction", "a"),
                 ("time", "nu"), ("time", "tau_end")],
    "sweep": [("riemann", "v_minus"), ("riemann", "v_mid"),
              ("riemann", "v_plus"), ("sweep", "nu_list"),
              ("sweep", "t_final")],
    "waves": [("riemann", "v_minus"), ("riemann", "v_mid"),
              ("riemann", "v_plus")],
}


def parse_config(path, mode: str = "simulate") -> dict:
    """Read and validate an INI config; unknown sections/keys are errors.

    ``mode`` selects which keys are mandatory ("simulate", "sweep" or
    "waves").  Returns a plain nested dict with defaults filled in.
    """
    if mode not in _REQUIRED:
        raise ConfigError(f"unknown config mode {mode!r}")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(str(path))
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    cfg: dict = {}
    for section in cp.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        out = {}
        for key, raw in cp.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            try:
                out[key] = _SCHEMA[section][key](raw)
            except ValueError as exc:
                raise ConfigError(
                    f"bad value for [{section}] {key} = {raw!r}: {exc}") from None
        cfg[section] = out
    for section, defaults in _DEFAULTS.items():
        cfg.setdefault(section, {})
        for key, val in defaults.items():
            cfg[section].setdefault(key, val)
    for section, key in _REQUIRED[mode]:
        if key not in cfg.get(section, {}):
            raise ConfigError(f"missing required key {key!r} in section [{section}]")
    grid = cfg.get("grid", {})
    if mode == "simulate":
        explicit = all(k in grid for k in ("y_left", "y_right", "n"))
        auto = grid.get("auto", False) and "dy" in grid
        if not (explicit or auto):
            raise ConfigError(
                "section [grid] needs either y_left/y_right/n or auto=true with dy")
    if "perturbation" in cfg and cfg["perturbation"]:
        pert = cfg["perturbation"]
        if "amplitude" not in pert:
            raise ConfigError("section [perturbation] needs an amplitude")
        pert.setdefault("field", "h")
        pert.setdefault("kind", "gaussian")
        pert.setdefault("center", 0.0)
        pert.setdefault("width", 1.0)
    if mode == "sweep":
        sw = cfg["sweep"]
        nus = sw["nu_list"]
        if any(b >= a for a, b in zip(nus, nus[1:])):
            raise ConfigError("sweep nu_list must be strictly decreasing")
        ratios = [nu / a_of_nu(sw["a_rule"], nu) for nu in nus]
        if any(r2 >= r1 for r1, r2 in zip(ratios, ratios[1:])):
            raise ConfigError("nu/a(nu) must decrease along nu_list")
        if not sw["t_final"] > 0.0:
            raise ConfigError("sweep t_final must be positive")
    return cfg


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return None if (math.isnan(f) or math.isinf(f)) else f
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def config_hash(cfg: dict) -> str:
    blob = json.dumps(jsonable(cfg), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(jsonable(obj), fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_csv(path, header: list[str], columns: list[np.ndarray]) -> None:
    """Column-oriented CSV with full-precision floats."""
    rows = len(columns[0])
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


# ---------------------------------------------------------------------------
# assembly

def build_wave(gas_cfg: dict, riemann_cfg: dict, nu: float, a: float,
               dxi: float = 0.01) -> CompositeWave:
    """Construct the full composite-wave bundle from config dicts."""
    gas = GasParams(gamma=gas_cfg.get("gamma", 1.4), alpha=gas_cfg.get("alpha", 1.0))
    setup = RiemannSetup(gas=gas,
                         v_minus=riemann_cfg["v_minus"],
                         v_mid=riemann_cfg["v_mid"],
                         v_plus=riemann_cfg["v_plus"],
                         u_minus=riemann_cfg.get("u_minus", 0.0))
    profile = build_profile(gas, setup, dxi=dxi)
    rparams = RarefactionParams(gas=gas, v_mid=setup.v_mid, v_plus=setup.v_plus,
                                u_mid=setup.u_mid, a=a)
    return CompositeWave(gas, setup, profile, rparams, nu)


def auto_domain(cw: CompositeWave, tau_end: float, dy: float) -> Grid1D:
    """Size the y-domain so every wave tail sits below 1e-9 at the ends
    for all tau in [0, tau_end], with headroom for the dynamic shift."""
    setup = cw.setup
    prof = cw.profile
    rate_left = prof.rate_left
    rate_right = prof.c1 * setup.eps1
    if not (rate_left > 0.0 and rate_right > 0.0):
        raise ConfigError("profile tail rates unavailable; rebuild the profile")
    need_left = 1.25 * abs(setup.sigma1) * tau_end + _MARGIN_LOG / rate_left
    need_right = _MARGIN_LOG / rate_right
    if not cw.rparams.degenerate:
        rate_rar = 2.0 * cw.nu / cw.rparams.a
        need_left = max(need_left, _MARGIN_LOG / rate_rar)
        need_right = max(need_right,
                         cw.rparams.w_plus * tau_end + _MARGIN_LOG / rate_rar)
    y_left = -need_left
    n = int(math.ceil((need_right + need_left) / dy)) + 1
    n = max(n, 16)
    return Grid1D(y_left=y_left, y_right=y_left + (n - 1) * dy, n=n)


# ---------------------------------------------------------------------------
# physical-frame reporting

def report_energy_lhs(checkpoints, nu: float) -> dict:
    """Physical-frame energy record from a run's checkpoint reports.

    With t = nu*tau and x = nu*y, an instantaneous y-integral picks up one
    factor of nu, and each space-time integrand here scales so that all
    three accumulated terms carry exactly one net factor of nu as well.
    Time integration is trapezoidal over the checkpoint times.
    """
    if len(checkpoints) < 2:
        raise ConfigError("need at least two checkpoints for the energy record")
    if len(checkpoints) < 50:
        warnings.warn(f"only {len(checkpoints)} checkpoints; the time integrals "
                      "may be under-resolved", stacklevel=2)
    taus = np.array([c.tau for c in checkpoints])
    eta = np.array([c.report.eta_unweighted for c in checkpoints])
    weta = np.array([c.report.weighted_eta for c in checkpoints])
    rar = np.array([c.report.rar_relp_integral for c in checkpoints])
    shock = np.array([c.report.shock_relQ_integral for c in checkpoints])
    fisher = np.array([c.report.fisher_integral for c in checkpoints])
    rec = {
        "sup_eta": nu * float(np.max(eta)),
        "sup_weighted_eta": nu * float(np.max(weta)),
        "rar_term": nu * float(np.trapezoid(rar, taus)),
        "shock_term": nu * float(np.trapezoid(shock, taus)),
        "fisher_term": nu * float(np.trapezoid(fisher, taus)),
        "n_checkpoints": len(checkpoints),
    }
    rec["total_lhs"] = (rec["sup_eta"] + rec["rar_term"] + rec["shock_term"]
                        + rec["fisher_term"])
    return rec


def l1_metrics(cw: CompositeWave, grid: Grid1D, state, window,
               away_halfwidth: float) -> dict:
    """L1 distance to the exact two-wave solution at the final physical time.

    Both metrics restrict to the physical window; the "away" variant also
    excludes a strip around the current shock position whose width shrinks
    with the viscosity.  Outside the simulated domain the solution and the
    exact one agree with the same constants to far-field tolerance, so
    restriction to the grid loses nothing measurable.
    """
    nu = cw.nu
    xs = nu * grid.ys
    t_phys = nu * state.tau
    x_shock = nu * (cw.setup.sigma1 * state.tau + state.X)
    in_window = (xs >= window[0]) & (xs <= window[1])
    v_exact, _ = riemann_sample(cw.setup, t_phys, xs[in_window])
    diff = np.abs(state.v[in_window] - v_exact)
    dx = nu * grid.dy
    l1_full = float(np.sum(diff) * dx)
    away = np.abs(xs[in_window] - x_shock) >= away_halfwidth
    l1_away = float(np.sum(diff[away]) * dx)
    return {"l1_full": l1_full, "l1_away": l1_away, "x_shock": x_shock,
            "t_phys": t_phys, "n_full": int(np.sum(in_window)),
            "n_away": int(np.sum(away))}


# ---------------------------------------------------------------------------
# sweeps

def a_of_nu(rule: str, nu: float) -> float:
    """Smoothing-width rule; every option keeps nu/a(nu) -> 0 as nu -> 0."""
    if rule == "sqrt":
        return math.sqrt(nu)
    if rule.startswith("pow:"):
        try:
            p = float(rule.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"a_rule pow exponent is not a number: {rule!r}") from None
        if not 0.0 < p < 1.0:
            raise ConfigError(f"a_rule pow exponent must lie in (0,1), got {p}")
        return nu ** p
    if rule.startswith("const:"):
        try:
            c = float(rule.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"a_rule const is not a number: {rule!r}") from None
        if not c > 0.0:
            raise ConfigError(f"a_rule const must be positive, got {c}")
        return c
    raise ConfigError(f"unknown a_rule {rule!r}")


@dataclass
class SweepConfig:
    """Vanishing-viscosity experiment: one composite-wave problem, many nu."""

    v_minus: float = 1.0
    v_mid: float = 0.8
    v_plus: float = 0.7
    u_minus: float = 0.0
    gamma: float = 1.4
    alpha: float = 1.0
    nu_list: tuple = (4e-3, 2e-3, 1e-3)
    a_rule: str = "sqrt"
    t_final: float = 0.5
    dy: float = 0.25
    window: tuple = (-1.5, 1.5)
    away_coef: float = 3.0
    n_checkpoints: int = 51
    cfl: float = 0.4
    lam: float = 0.1
    dxi: float = 0.01
    perturbations: tuple = ()
    # diagnostics hook, called as (state, report) at every checkpoint of every
    # run; not part of the configuration identity (excluded from as_dict).
    report_callback: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        nus = list(self.nu_list)
        if len(nus) < 2:
            raise ConfigError("sweep needs at least two viscosities")
        if any(b >= a for a, b in zip(nus, nus[1:])):
            raise ConfigError("nu_list must be strictly decreasing")
        ratios = [nu / a_of_nu(self.a_rule, nu) for nu in nus]
        if any(r2 >= r1 for r1, r2 in zip(ratios, ratios[1:])):
            raise ConfigError("nu/a(nu) must decrease along nu_list")
        if not self.t_final > 0.0:
            raise ConfigError("t_final must be positive")
        if not self.window[0] < self.window[1]:
            raise ConfigError("report window must be ordered")

    def as_dict(self) -> dict:
        return {
            "v_minus": self.v_minus, "v_mid": self.v_mid, "v_plus": self.v_plus,
            "u_minus": self.u_minus, "gamma": self.gamma, "alpha": self.alpha,
            "nu_list": list(self.nu_list), "a_rule": self.a_rule,
            "t_final": self.t_final, "dy": self.dy, "window": list(self.window),
            "away_coef": self.away_coef, "n_checkpoints": self.n_checkpoints,
            "cfl": self.cfl, "lam": self.lam, "dxi": self.dxi,
            "perturbations": [dict(p) for p in self.perturbations],
        }


_SWEEP_COLUMNS = [
    "nu", "a", "status", "E0", "sup_eta", "sup_weighted_eta", "rar_term",
    "shock_term", "fisher_term", "total_lhs", "l1_full", "l1_away", "x_shock",
    "X_final", "X_nu_final", "shift_bound_ok", "max_abs_Xdot", "min_v",
    "dtau", "n_steps", "grid_n", "y_left", "y_right",
]


@dataclass
class SweepReport:
    records: list
    trends: dict
    config: dict
    config_hash: str
    schema_version: str = SCHEMA_VERSION
    timing: dict = field(default_factory=dict)
    traces: dict = field(default_factory=dict)


def _failed_record(nu: float, a: float, message: str) -> dict:
    rec = {k: float("nan") for k in _SWEEP_COLUMNS}
    rec.update({"nu": nu, "a": a, "status": f"failed: {message}"})
    return rec


def run_sweep(sc: SweepConfig) -> SweepReport:
    """Run the viscosity list; an aborted run is recorded, not fatal."""
    chash = config_hash(sc.as_dict())
    records, timing, traces = [], {}, {}
    for nu in sc.nu_list:
        a = a_of_nu(sc.a_rule, nu)
        key = f"{nu:g}"
        t0 = time.perf_counter()
        try:
            cw = build_wave({"gamma": sc.gamma, "alpha": sc.alpha},
                            {"v_minus": sc.v_minus, "v_mid": sc.v_mid,
                             "v_plus": sc.v_plus, "u_minus": sc.u_minus},
                            nu, a, dxi=sc.dxi)
            tau_end = sc.t_final / nu
            grid = auto_domain(cw, tau_end, sc.dy)
            callbacks = [sc.report_callback] if sc.report_callback is not None else []
            rcfg = RunConfig(tau_end=tau_end, n_checkpoints=sc.n_checkpoints,
                             cfl=sc.cfl, lam=sc.lam, callbacks=callbacks)
            result = run(cw, grid, rcfg, perturbations=list(sc.perturbations))
            energy = report_energy_lhs(result.checkpoints, nu)
            metrics = l1_metrics(cw, grid, result.state, sc.window,
                                 sc.away_coef * math.sqrt(nu))
            tr = result.trace.as_arrays()
            slack = 0.5 * abs(cw.setup.sigma1) * tr["tau"] - tr["X"]
            bound_ok = bool(np.all(slack >= -1e-12 * (1.0 + tr["tau"])))
            rec = {
                "nu": nu, "a": a, "status": "ok",
                "E0": result.state.E0,
                "sup_eta": energy["sup_eta"],
                "sup_weighted_eta": energy["sup_weighted_eta"],
                "rar_term": energy["rar_term"],
                "shock_term": energy["shock_term"],
                "fisher_term": energy["fisher_term"],
                "total_lhs": energy["total_lhs"],
                "l1_full": metrics["l1_full"],
                "l1_away": metrics["l1_away"],
                "x_shock": metrics["x_shock"],
                "X_final": result.state.X,
                "X_nu_final": nu * result.state.X,
                "shift_bound_ok": bound_ok,
                "max_abs_Xdot": float(np.max(np.abs(tr["Xdot"]))) if len(tr["Xdot"]) else 0.0,
                "min_v": result.min_v,
                "dtau": result.dtau,
                "n_steps": result.n_steps,
                "grid_n": grid.n,
                "y_left": grid.y_left,
                "y_right": grid.y_right,
            }
            traces[key] = tr
        except NumericalAbort as exc:
            rec = _failed_record(nu, a, str(exc))
        timing[key] = time.perf_counter() - t0
        records.append(rec)
    ok = [r for r in records if r["status"] == "ok"]
    trends: dict = {"n_ok": len(ok), "n_failed": len(records) - len(ok)}
    if len(ok) >= 2:
        full = [r["l1_full"] for r in ok]
        away = [r["l1_away"] for r in ok]
        sup = [r["sup_eta"] for r in ok]
        trends["l1_full_monotone"] = all(b < a for a, b in zip(full, full[1:]))
        trends["l1_away_monotone"] = all(b < a for a, b in zip(away, away[1:]))
        trends["away_ratios"] = [a / b if b > 0 else float("inf")
                                 for a, b in zip(away, away[1:])]
        trends["sup_eta_nonincreasing"] = all(
            b <= a * (1.0 + 1e-12) for a, b in zip(sup, sup[1:]))
    return SweepReport(records=records, trends=trends, config=sc.as_dict(),
                       config_hash=chash, timing=timing, traces=traces)


def emit_report(report: SweepReport, outdir) -> dict:
    """Write sweep.csv / sweep.json (+ per-run shift traces) and the timing
    sidecar; returns the path map.  The report files carry no timestamps or
    timings, so identical configs reproduce them exactly."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "sweep.csv"
    with open(csv_path, "w") as fh:
        fh.write(",".join(_SWEEP_COLUMNS) + "\n")
        for rec in report.records:
            fh.write(",".join(_fmt(rec[c]) for c in _SWEEP_COLUMNS) + "\n")
    paths = {"csv": str(csv_path)}
    trace_files = {}
    for key, tr in report.traces.items():
        tpath = out / f"trace_nu_{key}.csv"
        write_csv(tpath, ["tau", "X", "Xdot", "Y", "J_bad", "branch"],
                  [tr["tau"], tr["X"], tr["Xdot"], tr["Y"], tr["J_bad"],
                   tr["branch"]])
        trace_files[key] = {"file": tpath.name, "sha256": sha256_file(tpath)}
        paths[f"trace_{key}"] = str(tpath)
    json_path = out / "sweep.json"
    write_json(json_path, {
        "schema_version": report.schema_version,
        "config": report.config,
        "config_hash": report.config_hash,
        "records": report.records,
        "trends": report.trends,
        "checksums": {"sweep.csv": sha256_file(csv_path), **{
            f"trace_nu_{k}.csv": v["sha256"] for k, v in trace_files.items()}},
    })
    paths["json"] = str(json_path)
    timing_path = out / "timing.json"
    write_json(timing_path, {"wall_seconds": report.timing})
    paths["timing"] = str(timing_path)
    return paths


# ---------------------------------------------------------------------------
# single simulation with artifact emission

def run_simulation(cfg: dict, outdir) -> RunResult:
    """Drive one simulation from a parsed config and write its artifacts:
    snapshot CSVs, a manifest with parameters and checksums, per-checkpoint
    functional reports, and the shift trace."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    nu = cfg["time"]["nu"]
    a = cfg["rarefaction"]["a"]
    cw = build_wave(cfg["gas"], cfg["riemann"], nu, a)
    tau_end = cfg["time"]["tau_end"]
    gcfg = cfg.get("grid", {})
    if gcfg.get("auto", False):
        grid = auto_domain(cw, tau_end, gcfg["dy"])
    else:
        grid = Grid1D(y_left=gcfg["y_left"], y_right=gcfg["y_right"], n=gcfg["n"])
    pert = []
    if cfg.get("perturbation"):
        pert = [dict(cfg["perturbation"])]
    rcfg = RunConfig(
        tau_end=tau_end,
        n_checkpoints=cfg["time"].get("n_checkpoints", 11),
        cfl=cfg["time"].get("cfl", 0.4),
        lam=cfg["shift"].get("lam", 0.1),
        delta=cfg["shift"].get("delta"),
        dtau=cfg["time"].get("dtau"),
        energy_probes=True,
        store_checkpoint_states=True,
    )
    t0 = time.perf_counter()
    result = run(cw, grid, rcfg, perturbations=pert)
    wall = time.perf_counter() - t0

    snapshots = []
    want_snaps = cfg["output"].get("snapshots", True)
    for idx, rec in enumerate(result.checkpoints):
        if not want_snaps or rec.v is None:
            continue
        cf = cw.eval(rec.tau, grid.ys, rec.X)
        fname = f"snap_{idx:03d}.csv"
        write_csv(out / fname, ["y", "v", "h", "vtilde", "htilde"],
                  [grid.ys, rec.v, rec.h, cf.vt, cf.ht])
        snapshots.append({"index": idx, "tau": rec.tau, "X": rec.X,
                          "file": fname, "sha256": sha256_file(out / fname)})

    reports_path = out / "reports.json"
    write_json(reports_path, [
        {"tau": rec.tau, "X": rec.X, "Xdot": rec.Xdot,
         **asdict(rec.report)} for rec in result.checkpoints])

    tr = result.trace.as_arrays()
    trace_path = out / "trace.csv"
    write_csv(trace_path, ["tau", "X", "Xdot", "Y", "J_bad", "branch"],
              [tr["tau"], tr["X"], tr["Xdot"], tr["Y"], tr["J_bad"], tr["branch"]])

    probes = [{"tau": p.tau, "lhs": p.lhs, "rhs": p.rhs,
               "residual": p.residual, "rel_residual": p.rel_residual}
              for p in result.probes]

    setup, prof = cw.setup, cw.profile
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg,
        "config_hash": config_hash(cfg),
        "derived": {
            "sigma1": setup.sigma1, "u_mid": setup.u_mid, "u_plus": setup.u_plus,
            "eps1": setup.eps1, "eps2": setup.eps2, "eps": setup.eps,
            "delta_used": rcfg.delta if rcfg.delta is not None
                          else 0.25 * setup.v_minus ** (-cw.gas.gamma),
            "dtau": result.dtau, "n_steps": result.n_steps,
            "grid": {"y_left": grid.y_left, "y_right": grid.y_right,
                     "n": grid.n, "dy": grid.dy},
            "profile": {"dxi": prof.dxi, "half_width": prof.half_width,
                        "c1": prof.c1, "C1": prof.C1,
                        "rate_left": prof.rate_left, "decay_r2": prof.decay_r2},
            "E0": result.state.E0,
            "min_v": result.min_v,
            "mass_ledger": {"mass_drift": result.mass_drift,
                            "boundary_flux": result.flux_accumulated,
                            "residual": result.mass_drift - result.flux_accumulated},
        },
        "snapshots": snapshots,
        "energy_probes": probes,
        "files": {
            "reports.json": sha256_file(reports_path),
            "trace.csv": sha256_file(trace_path),
        },
    }
    write_json(out / "manifest.json", manifest)
    write_json(out / "timing.json", {"wall_seconds": {"run": wall,
                                                      "total": result.wall_time}})
    return result

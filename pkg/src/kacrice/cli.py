"""Command-line front end: sweeps, tables and verification runs.

Every output starts with one comment line holding the version, seed and full
parameter set.  Exit status: 0 success, 1 failed check or bad input, 3 when a
Monte-Carlo estimate was flagged unreliable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from typing import Callable

import numpy as np

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_MC_WARNING = 0, 1, 3

DEFAULTS = {
    "seed": 0,
    "samples": 20000,
    "threads": 1,
    "tol": None,
    "out": None,
    "format": "csv",
    "N": None,
    "a": None,
    "method": "all",
    "grid": "-2:2:81",
    "p": None,
    "J": 1.0,
    "sigma": None,
    "B": None,
    "m": None,
    "mu": None,
    "f2d0": None,
    "target": "stationary",
    "side": "edge",
    "model": "sphere",
    "kappa": None,
    "gamma": None,
    "delta": None,
    "instances": None,
    "m_sweep": "0.6:1.4:81",
}

# options that take a start:stop:steps sweep, which may begin with a minus sign
SWEEP_FLAGS = ("--grid", "--kappa", "--gamma", "--delta", "--m")


class UsageError(ValueError):
    pass


def parse_sweep(text: str) -> np.ndarray:
    """``start:stop:steps`` (inclusive) or a single number."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) != 3:
            raise ValueError
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad sweep {text!r}: expected start:stop:steps")
    if n < 1 or b < a:
        raise UsageError(f"bad sweep {text!r}: need steps >= 1 and start <= stop")
    return np.linspace(a, b, n)


def read_config(path: str) -> dict:
    """Flat ``key=value`` file; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{ln}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            k = k.replace("-", "_")
            if k not in DEFAULTS:
                raise UsageError(f"{path}:{ln}: unknown key {k!r}")
            out[k] = v
    return out


_CASTS = {"seed": int, "samples": int, "threads": int, "N": int, "p": int, "instances": int, "tol": float,
          "a": float, "J": float, "sigma": float, "B": float, "m": float, "mu": float, "f2d0": float}


def _merge(ns: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if ns.config:
        cfg.update(read_config(ns.config))
    for k, v in vars(ns).items():
        if v is not None and k in DEFAULTS:
            cfg[k] = v
    for k, cast in _CASTS.items():
        if cfg.get(k) is not None:
            try:
                cfg[k] = cast(cfg[k])
            except (TypeError, ValueError):
                raise UsageError(f"bad value for {k}: {cfg[k]!r}")
    cfg["command"] = ns.command
    cfg["kind"] = getattr(ns, "kind", None)
    # only options that the chosen subcommand accepts go into the header
    cfg["_keys"] = sorted(k for k in vars(ns) if k in DEFAULTS)
    return cfg


# ---------------------------------------------------------------------------
# output


class Table:
    def __init__(self, header: list[str]):
        self.header = header
        self.rows: list[list] = []

    def add(self, *row):
        self.rows.append(list(row))

    def render(self, fmt: str, cfg: dict) -> str:
        keys = cfg.get("_keys", [k for k in cfg if not k.startswith("_")])
        params = {k: cfg[k] for k in keys if cfg.get(k) is not None}
        params["command"] = " ".join(x for x in (cfg.get("command"), cfg.get("kind")) if x)
        head = f"# kacrice {__version__} seed={cfg['seed']} params={json.dumps(params, sort_keys=True)}\n"
        # values that are unavailable or not representable are left empty rather than NaN
        if fmt == "json":
            rows = [{h: _json_cell(x) for h, x in zip(self.header, r)} for r in self.rows]
            return head + json.dumps(rows, indent=1) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for r in self.rows:
            w.writerow([_csv_cell(x) for x in r])
        return head + buf.getvalue()


def _csv_cell(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x)) if math.isfinite(x) else ""
    return x


def _json_cell(x):
    if isinstance(x, (float, np.floating)):
        return float(x) if math.isfinite(x) else None
    return x


def _finite(x: float) -> bool:
    return isinstance(x, (int, float, np.floating)) and math.isfinite(x)


# ---------------------------------------------------------------------------
# commands


def cmd_density(cfg: dict, flags: dict) -> Table:
    from . import goe
    from .numerics import RandomStream

    N = cfg["N"]
    if N is None:
        raise UsageError("density needs --N")
    grid = parse_sweep(cfg["grid"])
    method = cfg["method"] if cfg["method"] != "all" else "exact"
    t = Table(["t", "value", "stderr", "provenance"])
    if method == "exact":
        vals = goe.density_exact(N, grid)
        for x, v in zip(grid, np.atleast_1d(vals)):
            t.add(float(x), float(v), float("nan"), "exact")
    elif method == "asymptotic":
        for x in grid:
            try:
                t.add(float(x), goe.density_asymptotic(N, float(x)), float("nan"), "asymptotic")
            except ValueError:
                pass
    elif method == "edge":
        t = Table(["zeta", "value", "stderr", "provenance"])
        for x, v in zip(grid, np.atleast_1d(goe.density_edge(grid))):
            t.add(float(x), float(v), float("nan"), "edge")
    elif method == "mc":
        a = cfg["a"] if cfg["a"] is not None else 1.0 / N
        step = grid[1] - grid[0] if grid.size > 1 else 0.1
        edges = np.concatenate([grid - step / 2, [grid[-1] + step / 2]])
        curve = goe.mc_density_histogram(goe.GoeEnsembleSpec(N, a), edges, cfg["samples"], RandomStream(cfg["seed"]), cfg["threads"])
        for x, v, e in zip(curve.abscissae, curve.values, curve.stderr):
            t.add(float(x), float(v), float(e), "mc")
    else:
        raise UsageError(f"unknown density method {method!r}")
    return t


def cmd_tw_table(cfg: dict, flags: dict) -> Table:
    from .tracy_widom import default_evaluator

    ev = default_evaluator()
    grid = parse_sweep(cfg["grid"] if cfg["grid"] != DEFAULTS["grid"] else "-8:8:161")
    t = Table(["zeta", "q", "F1", "F1_prime"])
    for z in grid:
        z = float(z)
        q = float(ev.table.state(z)[0]) if ev.table.zeta_lo <= z <= ev.table.zeta_hi else float("nan")
        t.add(z, q, ev.f1(z), ev.f1_prime(z))
    return t


def _collect(reports, flags):
    for r in reports:
        if any("unreliable" in w for w in r.warnings):
            flags["mc_warning"] = True


def cmd_count_sphere(cfg: dict, flags: dict) -> Table:
    from . import sphere
    from .numerics import RandomStream

    N = cfg["N"]
    if N is None:
        raise UsageError("count sphere needs --N")
    if cfg["B"] is not None:
        if cfg["p"] is not None or cfg["sigma"] is not None:
            raise UsageError("give either --B or the p-spin parameters (--p, --J, --sigma), not both")
        B = cfg["B"]
    else:
        if cfg["p"] is None or cfg["sigma"] is None:
            raise UsageError("count sphere needs --B or --p/--J/--sigma")
        B = sphere.b_param(sphere.PSpinSpec(cfg["p"], cfg["J"], cfg["sigma"], N))
    method = cfg["method"]
    targets = ["stationary", "minima"] if cfg["target"] == "both" else [cfg["target"]]
    t = Table(["target", "method", "log_value", "value", "err", "regime"])
    stream = RandomStream(cfg["seed"])
    for tgt in targets:
        reports = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if method in ("all", "exact") and (N % 2 == 0 or (tgt == "minima" and N <= 4)):
                try:
                    reports.append(sphere.count_stationary_exact(N, B) if tgt == "stationary" else sphere.count_minima_exact(N, B))
                except (RuntimeError, NotImplementedError) as exc:
                    print(f"exact route unavailable: {exc}", file=sys.stderr)
            if method in ("all", "mc"):
                fn = sphere.count_stationary_exact if tgt == "stationary" else sphere.count_minima_exact
                reports.append(fn(N, B, source="mc", n_samples=cfg["samples"], stream=stream, threads=cfg["threads"]))
            if method in ("all", "asymptotic") and B != 0:
                fn = sphere.asymptotic_count_stationary if tgt == "stationary" else sphere.asymptotic_count_minima
                reports.append(fn(B, N))
            if method in ("all", "crossover"):
                k = sphere.kappa_of(N, B)
                if tgt == "stationary":
                    lv = math.log(2 * N) + sphere.log_crossover_bulk_stationary(sphere.gamma_of(N, B))
                    reports.append(sphere.CountReport(lv, math.nan, "crossover-bulk", "bulk-gamma", {"N": N, "B": B}))
                    if k > 0:
                        reports.append(sphere.CountReport(sphere.log_crossover_edge_stationary(k), math.nan, "crossover-edge", "edge-kappa", {"N": N, "B": B}))
                else:
                    reports.append(sphere.CountReport(sphere.log_crossover_edge_minima(k), math.nan, "crossover-edge", "edge-kappa", {"N": N, "B": B}))
        _collect(reports, flags)
        for r in reports:
            t.add(tgt, r.method, r.log_value, r.value if not r.log_scaled else float("nan"), r.err if _finite(r.err) else float("nan"), r.regime)
    if method == "exact" and not t.rows:
        raise UsageError("no exact route for these parameters (stationary counts need even N)")
    return t


def cmd_count_parabolic(cfg: dict, flags: dict) -> Table:
    from . import parabolic as par
    from .numerics import RandomStream

    N = cfg["N"]
    if N is None:
        raise UsageError("count parabolic needs --N")
    if cfg["m"] is not None:
        if cfg["mu"] is not None or cfg["f2d0"] is not None:
            raise UsageError("give either --m or --mu/--f2d0, not both")
        m = cfg["m"]
    else:
        if cfg["mu"] is None or cfg["f2d0"] is None:
            raise UsageError("count parabolic needs --m or --mu and --f2d0")
        m = par.ParabolicSpec(cfg["mu"], cfg["f2d0"], N).m
    method = cfg["method"]
    targets = ["stationary", "minima"] if cfg["target"] == "both" else [cfg["target"]]
    t = Table(["target", "method", "log_value", "value", "err", "regime"])
    stream = RandomStream(cfg["seed"])
    for tgt in targets:
        reports = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if method in ("all", "exact") and (N % 2 == 0 or (tgt == "minima" and N <= 4)):
                try:
                    reports.append(par.count_stationary_parab(m, N) if tgt == "stationary" else par.count_minima_parab(m, N))
                except (RuntimeError, NotImplementedError) as exc:
                    print(f"exact route unavailable: {exc}", file=sys.stderr)
            if method in ("all", "mc"):
                fn = par.count_stationary_parab if tgt == "stationary" else par.count_minima_parab
                reports.append(fn(m, N, source="mc", n_samples=cfg["samples"], stream=stream, threads=cfg["threads"]))
            if method in ("all", "asymptotic") and m != 1.0:
                reports.append(par.asymptotic_parab(m, N) if tgt == "stationary" else par.asymptotic_minima_parab(m, N))
            if method in ("all", "crossover"):
                if tgt == "stationary":
                    g = par.gamma_of(N, m)
                    lv = 0.25 * math.log(N) + par.log_crossover_bulk_parab(g)
                    reports.append(par.CountReport(lv, math.nan, "crossover-bulk", "bulk-gamma", {"N": N, "m": m}))
                    k = 2.0 * par.delta_of(N, m)
                    if k > 0:
                        reports.append(par.CountReport(par.log_crossover_edge_parab(k), math.nan, "crossover-edge", "edge-delta", {"N": N, "m": m}))
                else:
                    d = par.delta_of(N, m)
                    reports.append(par.CountReport(par.log_crossover_minima_parab(d), math.nan, "crossover-edge", "edge-delta", {"N": N, "m": m}))
                    try:
                        reports.append(par.CountReport(par.log_laplace_minima_parab(d), math.nan, "laplace", "edge-delta", {"N": N, "m": m}))
                    except par.SaddleNotFound:
                        pass
        _collect(reports, flags)
        for r in reports:
            t.add(tgt, r.method, r.log_value, r.value if not r.log_scaled else float("nan"), r.err if _finite(r.err) else float("nan"), r.regime)
    return t


def cmd_crossover(cfg: dict, flags: dict) -> Table:
    from . import parabolic as par
    from . import sphere

    side, target, model = cfg["side"], cfg["target"], cfg["model"]
    if side not in ("edge", "bulk") or target not in ("stationary", "minima") or model not in ("sphere", "parabolic"):
        raise UsageError("need --side edge|bulk, --target stationary|minima, --model sphere|parabolic")
    given = [k for k in ("kappa", "gamma", "delta") if cfg[k] is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --kappa, --gamma, --delta")
    name = given[0]
    xs = parse_sweep(cfg[name])
    if side == "bulk" and target == "minima":
        raise UsageError("the number of minima has no bulk crossover")
    if side == "bulk" and name != "gamma":
        raise UsageError("bulk crossovers are parametrised by --gamma")
    if side == "edge" and name == "gamma":
        raise UsageError("edge crossovers are parametrised by --kappa or --delta")

    to_kappa = (lambda x: 2.0 * x) if name == "delta" else (lambda x: x)
    asym: Callable[[float], float] | None = None
    if side == "edge" and target == "stationary":
        f = sphere.log_crossover_edge_stationary if model == "sphere" else par.log_crossover_edge_parab
        asym = sphere.small_kappa_stationary if model == "sphere" else par.small_kappa_parab
        fn = lambda x: f(to_kappa(x))
    elif side == "edge":
        if model == "sphere":
            fn = lambda x: sphere.log_crossover_edge_minima(to_kappa(x))
        else:
            fn = lambda x: par.log_crossover_minima_parab(to_kappa(x) / 2.0)
    else:
        fn = sphere.log_crossover_bulk_stationary if model == "sphere" else par.log_crossover_bulk_parab

    header = [name, "value", "log_value"] + (["small_kappa_asymptote"] if asym else [])
    t = Table(header)
    for x in xs:
        x = float(x)
        try:
            lv = fn(x)
        except ValueError as exc:
            print(f"skipping {name}={x}: {exc}", file=sys.stderr)
            continue
        if not math.isfinite(lv):
            print(f"skipping {name}={x}: the limit diverges there", file=sys.stderr)
            continue
        row = [x, math.exp(lv) if lv < 700 else float("nan"), lv]
        if asym:
            row.append(asym(to_kappa(x)))
        t.add(*row)
    return t


def cmd_figure2(cfg: dict, flags: dict) -> Table:
    from . import parabolic as par

    N = cfg["N"] or 10000
    rows = par.figure2_table(N, parse_sweep(cfg["m_sweep"]))
    t = Table(["m", "branch", "log_count", "in_window"])
    for r in rows:
        t.add(r.m, r.branch, r.log_count, int(r.in_window))
    return t


def _check(t: Table, name: str, ok: bool, detail: str, flags: dict):
    t.add(name, "pass" if ok else "fail", detail)
    if not ok:
        flags["failed"] = True


def cmd_selfcheck(cfg: dict, flags: dict) -> Table:
    from . import goe, parabolic as par, sphere
    from .landscape import enumerate_p2, sample_instance
    from .numerics import RandomStream

    t = Table(["check", "status", "detail"])
    tol = cfg["tol"]
    tl = lambda default: default if tol is None else tol
    for N in (2, 4, 6, 8):
        s = sphere.count_stationary_exact(N, 0.0).value
        m = sphere.count_minima_exact(N, 0.0).value
        _check(t, f"stationary(B=0,N={N})=2N", abs(s / (2 * N) - 1) < tl(1e-6), repr(s), flags)
        _check(t, f"minima(B=0,N={N})=2", abs(m / 2 - 1) < tl(1e-6), repr(m), flags)
    v = sphere.crossover_bulk_stationary(0.0)
    _check(t, "bulk crossover(0)=1", abs(v - 1) < tl(1e-12), repr(v), flags)
    v = sphere.crossover_edge_minima(0.0)
    _check(t, "edge minima crossover(0)=2", abs(v - 2) < tl(1e-3), repr(v), flags)
    for k in (0.5, 2.0, 5.0):
        a, b = par.crossover_edge_parab(k), sphere.crossover_edge_stationary(k) / 2
        _check(t, f"parabolic edge = sphere edge/2 (kappa={k})", abs(a / b - 1) < tl(1e-10), f"{a!r} {b!r}", flags)
    for d in (0.5, 1.0):
        a, b = par.crossover_minima_parab(d), sphere.crossover_edge_minima(2 * d)
        _check(t, f"parabolic minima = sphere minima (delta={d})", abs(a / b - 1) < tl(1e-10), f"{a!r} {b!r}", flags)
    for N in (4, 10, 20):
        grid = np.linspace(-8, 8, 4001)
        mass = float(np.trapezoid(goe.density_exact(N, grid), grid))
        _check(t, f"density mass N={N}", abs(mass - 1) < tl(1e-6), repr(mass), flags)
    a = par.anisotropic_factor([4.0, 9.0])
    _check(t, "anisotropic factor diag(4,9)=6", abs(a - 6) < tl(1e-12), repr(a), flags)
    c, _ = enumerate_p2(sample_instance(sphere.PSpinSpec(2, 1.0, 0.0, 6), RandomStream(cfg["seed"])))
    _check(t, "p=2 h=0 census", (c.n_stationary, c.n_minima, c.morse_sum) == (12, 2, 0), repr(c), flags)
    return t


def cmd_verify(cfg: dict, flags: dict) -> Table:
    from . import goe, sphere
    from .landscape import empirical_counts
    from .numerics import RandomStream

    t = Table(["check", "status", "detail"])
    stream = RandomStream(cfg["seed"])
    n = cfg["instances"] or 2000
    # p = 2, N = 6, B = -0.2 (sigma^2 = 1/2)
    spec = sphere.PSpinSpec(2, 1.0, math.sqrt(0.5), 6)
    emp = empirical_counts(spec, n, stream.substream(1), threads=cfg["threads"])
    kr = sphere.count_stationary_exact(6, sphere.b_param(spec)).value
    z = abs(emp.mean_stationary.mean - kr) / emp.mean_stationary.stderr
    _check(t, "p=2 N=6 enumeration vs Kac-Rice", z < 3, f"{emp.mean_stationary.mean:.4f}+-{emp.mean_stationary.stderr:.4f} vs {kr:.4f}", flags)
    # p = 3, N = 5, sigma = 0
    spec = sphere.PSpinSpec(3, 1.0, 0.0, 5)
    emp = empirical_counts(spec, max(1, n // 10), stream.substream(2), threads=cfg["threads"])
    kr = sphere.count_stationary_exact(5, sphere.b_param(spec), source="mc", n_samples=cfg["samples"] * 10, stream=stream.substream(3), threads=cfg["threads"])
    se = math.hypot(emp.mean_stationary.stderr, kr.err)
    z = abs(emp.mean_stationary.mean - kr.value) / se
    _check(t, "p=3 N=5 multistart vs Kac-Rice", z < 3 and emp.reliable, f"{emp.mean_stationary.mean:.3f}+-{emp.mean_stationary.stderr:.3f} vs {kr.value:.3f}, accepted {emp.n_accepted}/{emp.n_instances}", flags)
    # GOE relation at n = 2: E|lambda_1 - lambda_2| against sqrt(2/pi) scale
    est, rhs = goe.check_goe5(2, 0.5, 0.3, cfg["samples"], stream.substream(4), cfg["threads"])
    z = abs(est.mean - rhs) / est.stderr
    _check(t, "GOE conditional-determinant relation n=2", z < 3, f"{est.mean:.5f}+-{est.stderr:.5f} vs {rhs:.5f}", flags)
    return t


COMMANDS = {
    "density": cmd_density,
    "tw-table": cmd_tw_table,
    "crossover": cmd_crossover,
    "figure2": cmd_figure2,
    "verify": cmd_verify,
    "selfcheck": cmd_selfcheck,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common")
    g.add_argument("--seed", type=int)
    g.add_argument("--samples", type=int)
    g.add_argument("--threads", type=int)
    g.add_argument("--tol", type=float)
    g.add_argument("--out")
    g.add_argument("--format", choices=["csv", "json"])
    g.add_argument("--config", help="flat key=value file; flags override it")

    p = argparse.ArgumentParser(prog="kacrice", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("density", parents=[common], help="GOE mean density curves")
    d.add_argument("--N", type=int)
    d.add_argument("--a", type=float)
    d.add_argument("--method", choices=["exact", "asymptotic", "edge", "mc"])
    d.add_argument("--grid")

    tw = sub.add_parser("tw-table", parents=[common], help="Tracy-Widom F1 table")
    tw.add_argument("--grid")

    c = sub.add_parser("count", help="mean counts by every available method")
    csub = c.add_subparsers(dest="kind", required=True)
    cs = csub.add_parser("sphere", parents=[common])
    cs.add_argument("--N", type=int)
    cs.add_argument("--B", type=float)
    cs.add_argument("--p", type=int)
    cs.add_argument("--J", type=float)
    cs.add_argument("--sigma", type=float)
    cs.add_argument("--method", choices=["all", "exact", "mc", "asymptotic", "crossover"])
    cs.add_argument("--target", choices=["stationary", "minima", "both"])
    cp = csub.add_parser("parabolic", parents=[common])
    cp.add_argument("--N", type=int)
    cp.add_argument("--m", type=float)
    cp.add_argument("--mu", type=float)
    cp.add_argument("--f2d0", type=float)
    cp.add_argument("--method", choices=["all", "exact", "mc", "asymptotic", "crossover"])
    cp.add_argument("--target", choices=["stationary", "minima", "both"])

    x = sub.add_parser("crossover", parents=[common], help="crossover-function sweeps")
    x.add_argument("--side", choices=["edge", "bulk"])
    x.add_argument("--target", choices=["stationary", "minima"])
    x.add_argument("--model", choices=["sphere", "parabolic"])
    x.add_argument("--kappa")
    x.add_argument("--gamma")
    x.add_argument("--delta")

    f = sub.add_parser("figure2", parents=[common], help="three-branch minima table for the parabolic model")
    f.add_argument("--N", type=int)
    f.add_argument("--m", dest="m_sweep", help="sweep start:stop:steps")

    v = sub.add_parser("verify", parents=[common], help="enumeration and GOE cross-validation")
    v.add_argument("--instances", type=int)
    sub.add_parser("selfcheck", parents=[common], help="exact identities")
    return p


def _join_sweeps(argv: list[str]) -> list[str]:
    """Attach values such as ``-1:1:3`` to their flag so argparse does not read them as options."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if a in SWEEP_FLAGS and nxt is not None and nxt.startswith("-") and nxt[1:2] in "0123456789.":
            out.append(f"{a}={nxt}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(_join_sweeps(list(sys.argv[1:] if argv is None else argv)))
    except SystemExit as exc:
        # argparse exits with 2 on bad flags; keep the 0/1/3 convention
        return EXIT_OK if exc.code in (0, None) else EXIT_FAIL
    flags = {"failed": False, "mc_warning": False}
    try:
        cfg = _merge(ns)
        if cfg["command"] == "count":
            fn = cmd_count_sphere if cfg["kind"] == "sphere" else cmd_count_parabolic
        else:
            fn = COMMANDS[cfg["command"]]
        if cfg["threads"] < 1:
            raise UsageError("--threads must be >= 1")
        table = fn(cfg, flags)
        text = table.render(cfg["format"], cfg)
        if cfg["out"]:
            with open(cfg["out"], "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except (UsageError, ValueError, NotImplementedError) as exc:
        print(f"kacrice: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"kacrice: cannot write output: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if flags["failed"]:
        return EXIT_FAIL
    if flags["mc_warning"]:
        print("kacrice: warning: a Monte-Carlo estimate was flagged unreliable", file=sys.stderr)
        return EXIT_MC_WARNING
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

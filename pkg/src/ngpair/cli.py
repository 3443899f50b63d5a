"""Command-line front end: simulation, ODE, tipping, and comparison runs.

Everything is emitted as CSV (header row, '.' decimal, LF endings) plus a
sibling ``<file>.manifest.json`` recording the exact invocation, so any
output can be reproduced bit for bit by re-running the stored argv.
Plotting is deliberately left to external tools.

Exit codes: 0 success, 2 usage error, 3 numeric failure.  The worker
count for ensembles is capped by the NG_THREADS environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from functools import partial

import numpy as np

from . import __version__, analysis, pair_ode
from .naming_game import SimConfig, ensemble
from .rk4 import IntegrationError, OdeConfig, integrate

_TRAJ_SCHEMA = "t,p_A,p_B,p_AB,std_p_A,std_p_B,std_p_AB,runs_alive"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _write_csv(path, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_manifest(csv_path, command: str, argv, params: dict,
                    seed, outputs) -> None:
    manifest = {
        "command": command,
        "argv": list(argv),
        "parameters": params,
        "base_seed": seed,
        "version": __version__,
        "outputs": [str(p) for p in outputs],
    }
    with open(f"{csv_path}.manifest.json", "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(command, argv, params, seed, files) -> None:
    """files: list of (path, header, rows); manifests reference them all."""
    outputs = [p for p, _, _ in files]
    for path, header, rows in files:
        _write_csv(path, header, rows)
        _write_manifest(path, command, argv, params, seed, outputs)
        print(f"wrote {path}")


def _parse_list(text: str, cast):
    items = [x.strip() for x in text.split(",") if x.strip()]
    return [cast(x) for x in items]


def _load_config_defaults(path) -> dict:
    """key=value lines; keys match long flag names ('-' or '_' spelling)."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def cmd_sim(args, argv) -> int:
    cfg = SimConfig(n=args.n, k_avg=args.k, committed_fraction=args.p,
                    eta=args.eta, runs=args.runs, seed=args.seed,
                    max_time_per_node=args.t_cap,
                    sample_interval=args.sample_interval)
    stats = ensemble(cfg)
    params = {"n": args.n, "k": args.k, "p": args.p, "eta": args.eta,
              "runs": args.runs, "seed": args.seed, "t_cap": args.t_cap,
              "sample_interval": args.sample_interval}
    run_rows = [(r, s, reached, t) for r, s, reached, t in stats.records]
    traj_rows = [
        (stats.traj_times[i], *stats.traj_mean[i], *stats.traj_std[i],
         stats.traj_count[i])
        for i in range(len(stats.traj_times))
    ]
    _emit("sim", argv, params, args.seed, [
        (f"{args.out}_runs.csv", "run,seed,reached,t_eta", run_rows),
        (f"{args.out}_traj.csv", _TRAJ_SCHEMA, traj_rows),
    ])
    mean = "n/a" if stats.t_eta_mean is None else f"{stats.t_eta_mean:.4g}"
    print(f"reached {stats.fraction_reached:.0%} of {cfg.runs} runs,"
          f" mean T_eta = {mean}")
    return 0


def _ode_initial(args):
    """(l0, l_cc, dim) from --init product or a file of link fractions."""
    if args.init == "product":
        if args.p > 0:
            l0, l_cc = pair_ode.all_b_committed_state(args.p)
        else:
            l0, _ = pair_ode.embed_product((0.5, 0.5, 0.0))
            l_cc = 0.0
        return l0, l_cc
    values = []
    with open(args.init) as fh:
        for line in fh:
            values.extend(float(x) for x in line.replace(",", " ").split())
    if len(values) == 6:
        if args.p > 0:
            raise ValueError("a 6-component state cannot carry committed agents;"
                             " use 9 components or --p 0")
        return np.array(values), 0.0
    if len(values) == 9:
        l = np.array(values)
        l_cc = args.p - float(l[0] + l[1] + l[2]) / 2.0
        if l_cc < -1e-12:
            raise ValueError("--p is inconsistent with the committed link mass")
        return l, max(l_cc, 0.0)
    raise ValueError(f"--init file must hold 6 or 9 values, got {len(values)}")


def cmd_ode(args, argv) -> int:
    l0, l_cc = _ode_initial(args)
    cfg = OdeConfig(dt=args.dt, t_max=args.t_max, eta=args.eta,
                    sample_interval=args.sample_interval)
    if args.meanfield:
        p0 = pair_ode.node_fractions(l0, l_cc)
        traj = integrate(pair_ode.rhs_meanfield, p0, cfg)
        names = []
    else:
        rhs = (partial(pair_ode.rhs9, k_avg=args.k) if len(l0) == 9
               else partial(pair_ode.rhs6, k_avg=args.k))
        traj = integrate(rhs, l0, cfg, l_cc=l_cc)
        from .network import LINK_NAMES_6, LINK_NAMES_9
        names = list(LINK_NAMES_9 if len(l0) == 9 else LINK_NAMES_6)
    header = "t," + ",".join(f"l_{nm}" for nm in names)
    header = (header.rstrip(",") + ",p_A,p_B,p_AB") if names else "t,p_A,p_B,p_AB"
    if args.meanfield:
        rows = [(traj.times[i], *traj.fractions[i])
                for i in range(len(traj.times))]
    else:
        rows = [(traj.times[i], *traj.states[i], *traj.fractions[i])
                for i in range(len(traj.times))]
    params = {"k": args.k, "p": args.p, "dt": args.dt, "t_max": args.t_max,
              "eta": args.eta, "init": str(args.init),
              "meanfield": args.meanfield,
              "sample_interval": args.sample_interval}
    _emit("ode", argv, params, None, [(f"{args.out}_traj.csv", header, rows)])
    eta_msg = "" if traj.t_eta is None else f", t_eta = {traj.t_eta:.6g}"
    print(f"terminated: {traj.reason} at t = {traj.t_end:.6g}{eta_msg}")
    return 0


def cmd_tip(args, argv) -> int:
    k_list = _parse_list(args.k_list, float)
    if not k_list:
        raise ValueError("--k-list must name at least one degree")
    if args.ptol <= 0:
        raise ValueError("--ptol must be positive")
    cfg = OdeConfig(dt=args.dt, t_max=args.t_max, sample_interval=None)
    results = analysis.pc_vs_k(k_list, p_tol=args.ptol, p_max=args.p_max,
                               pb_threshold=args.pb_threshold, cfg=cfg)
    tip_rows = [(r.k_avg, r.p_c, r.p_low, r.p_high) for r in results]
    probe_rows = [(row.k_avg, row.p, row.p_b_star, row.converged, row.t_end)
                  for r in results for row in r.evaluations]
    params = {"k_list": k_list, "ptol": args.ptol,
              "pB_threshold": args.pb_threshold, "p_max": args.p_max,
              "dt": args.dt, "t_max": args.t_max}
    _emit("tip", argv, params, None, [
        (f"{args.out}_tipping.csv", "k,p_c,p_low,p_high", tip_rows),
        (f"{args.out}_probes.csv", "k,p,p_B_star,converged,t_end", probe_rows),
    ])
    for r in results:
        print(f"k = {r.k_avg:g}: p_c = {r.p_c:.5f} "
              f"(bracket {r.p_low:.5f}..{r.p_high:.5f})")
    return 0


def cmd_compare(args, argv) -> int:
    if args.fig == 1:
        cmp_ = analysis.trajectory_compare(
            k_avg=args.k, n=args.n, runs=args.runs, eta=args.eta,
            seed=args.seed, sample_interval=args.sample_interval)
        rows = [
            (cmp_.times[i], *cmp_.mc[i], *cmp_.ode[i], *cmp_.meanfield[i])
            for i in range(len(cmp_.times))
        ]
        header = ("t,mc_p_A,mc_p_B,mc_p_AB,ode_p_A,ode_p_B,ode_p_AB,"
                  "mf_p_A,mf_p_B,mf_p_AB")
        params = {"fig": 1, "k": args.k, "n": args.n, "runs": args.runs,
                  "eta": args.eta, "seed": args.seed,
                  "sample_interval": args.sample_interval}
        _emit("compare", argv, params, args.seed,
              [(f"{args.out}_overlay.csv", header, rows)])
        print(f"sup-norm MC vs pair ODE: {cmp_.sup_pair:.4f}")
        print(f"sup-norm MC vs mean field: {cmp_.sup_meanfield:.4f}")
        return 0
    if args.fig == 3:
        n_list = _parse_list(args.n_list, int)
        if not n_list:
            raise ValueError("--n-list must name at least one size")
        rows_ = analysis.consensus_time_vs_n(args.k, n_list, runs=args.runs,
                                             eta=args.eta, seed=args.seed)
        rows = [(r.n, r.k_avg, r.t_mc_mean, r.t_mc_relstd, r.t_ode)
                for r in rows_]
        params = {"fig": 3, "k": args.k, "n_list": n_list, "runs": args.runs,
                  "eta": args.eta, "seed": args.seed}
        _emit("compare", argv, params, args.seed,
              [(f"{args.out}_sizes.csv",
                "n,k,T_mc_mean,T_mc_relstd,T_ode", rows)])
        for r in rows_:
            print(f"n = {r.n}: mean T = {r.t_mc_mean:.3f}, "
                  f"relstd = {r.t_mc_relstd:.4f}, ODE T = {r.t_ode:.3f}")
        return 0
    # fig 5
    if args.p_grid:
        grid = _parse_list(args.p_grid, float)
    else:
        tip = analysis.find_tipping(args.k)
        grid = [round(tip.p_c + d, 6)
                for d in (-0.02, -0.01, -0.005, 0.005, 0.01, 0.02)]
        print(f"auto grid around p_c = {tip.p_c:.5f}")
    rows_ = analysis.consensus_time_curve(args.k, grid, n=args.n,
                                          runs=args.runs, eta=args.eta,
                                          seed=args.seed, t_cap=args.t_cap)
    rows = [(r.p, r.t_mc_mean, r.t_mc_relstd, r.censored_fraction, r.t_ode)
            for r in rows_]
    params = {"fig": 5, "k": args.k, "n": args.n, "runs": args.runs,
              "eta": args.eta, "seed": args.seed, "t_cap": args.t_cap,
              "p_grid": grid}
    _emit("compare", argv, params, args.seed,
          [(f"{args.out}_curve.csv",
            "p,T_mc_mean,T_mc_relstd,censored_fraction,T_ode", rows)])
    for r in rows_:
        t = "censored" if r.t_mc_mean is None else f"{r.t_mc_mean:.2f}"
        print(f"p = {r.p:.4f}: mean T/N = {t}, "
              f"censored = {r.censored_fraction:.0%}")
    return 0


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="ngpair",
        description="Naming-game dynamics: stochastic runs vs "
                    "pair-approximation ODEs.",
        epilog="CSV schemas: sim runs 'run,seed,reached,t_eta'; "
               f"sim/ode trajectories '{_TRAJ_SCHEMA}' resp. "
               "'t,l_<type>..,p_A,p_B,p_AB'; tip 'k,p_c,p_low,p_high' plus "
               "probes 'k,p,p_B_star,converged,t_end'; compare fig 5 "
               "'p,T_mc_mean,T_mc_relstd,censored_fraction,T_ode'.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("sim", help="ensemble of stochastic runs")
    p_sim.add_argument("--config", help="key=value defaults file")
    p_sim.add_argument("--n", type=int, default=500)
    p_sim.add_argument("--k", type=float, default=5.0)
    p_sim.add_argument("--p", type=float, default=0.0,
                       help="committed fraction (0 = symmetric start)")
    p_sim.add_argument("--eta", type=float, default=0.95)
    p_sim.add_argument("--runs", type=int, default=50)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--t-cap", type=float, default=1e4,
                       help="max unit times per run")
    p_sim.add_argument("--sample-interval", type=float, default=1.0)
    p_sim.add_argument("--out", required=True, help="output path base")
    p_sim.set_defaults(func=cmd_sim)

    p_ode = sub.add_parser("ode", help="integrate a pair-approximation ODE")
    p_ode.add_argument("--config")
    p_ode.add_argument("--k", type=float, default=5.0)
    p_ode.add_argument("--p", type=float, default=0.0)
    p_ode.add_argument("--dt", type=float, default=0.01)
    p_ode.add_argument("--t-max", type=float, default=100.0)
    p_ode.add_argument("--eta", type=float, default=None)
    p_ode.add_argument("--init", default="product",
                       help="'product' or a file of 6/9 link fractions")
    p_ode.add_argument("--meanfield", action="store_true",
                       help="integrate the infinite-degree baseline instead")
    p_ode.add_argument("--sample-interval", type=float, default=0.1)
    p_ode.add_argument("--out", required=True)
    p_ode.set_defaults(func=cmd_ode)

    p_tip = sub.add_parser("tip", help="locate tipping fractions by bisection")
    p_tip.add_argument("--config")
    p_tip.add_argument("--k-list", required=True,
                       help="comma-separated average degrees")
    p_tip.add_argument("--ptol", type=float, default=1e-4)
    p_tip.add_argument("--pB-threshold", dest="pb_threshold", type=float,
                       default=0.01)
    p_tip.add_argument("--p-max", type=float, default=0.2)
    p_tip.add_argument("--dt", type=float, default=0.02)
    p_tip.add_argument("--t-max", type=float, default=2e4)
    p_tip.add_argument("--out", required=True)
    p_tip.set_defaults(func=cmd_tip)

    p_cmp = sub.add_parser("compare", help="MC-vs-ODE comparison presets")
    p_cmp.add_argument("--config")
    p_cmp.add_argument("--fig", type=int, choices=(1, 3, 5), required=True)
    p_cmp.add_argument("--k", type=float, default=None)
    p_cmp.add_argument("--n", type=int, default=None)
    p_cmp.add_argument("--n-list", default="200,500,1000,2000")
    p_cmp.add_argument("--runs", type=int, default=None)
    p_cmp.add_argument("--eta", type=float, default=0.95)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--sample-interval", type=float, default=0.25)
    p_cmp.add_argument("--p-grid", default=None,
                       help="committed fractions for fig 5 (comma-separated)")
    p_cmp.add_argument("--t-cap", type=float, default=1e4)
    p_cmp.add_argument("--out", required=True)
    p_cmp.set_defaults(func=cmd_compare)
    return parser, {"sim": p_sim, "ode": p_ode, "tip": p_tip,
                    "compare": p_cmp}


_FIG_DEFAULTS = {1: {"k": 5.0, "n": 500, "runs": 50},
                 3: {"k": 5.0, "n": 0, "runs": 100},
                 5: {"k": 10.0, "n": 1000, "runs": 20}}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    if "--config" in argv:
        cfg_path = argv[argv.index("--config") + 1]
        try:
            defaults = _load_config_defaults(cfg_path)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        for sub in subparsers.values():
            known = {a.dest for a in sub._actions}
            sub.set_defaults(**{k: v for k, v in defaults.items()
                                if k in known})
    args = parser.parse_args(argv)
    if args.command == "compare":
        for name, value in _FIG_DEFAULTS[args.fig].items():
            if getattr(args, name) is None:
                setattr(args, name, value)
    try:
        return args.func(args, argv)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IntegrationError, analysis.TippingNotFoundError,
            RuntimeError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: profile (compute a scenario and write CSV, optionally a
plot script), compare (profiles plus solver-difference columns),
validate (self-check suite, JSON report), scenarios (list built-ins).

Exit codes: 0 success, 1 usage or configuration problem, 2 numeric
failure inside a solver, 3 validation failures.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys

from .errors import (CancellationError, NumericFailureError, ProfileError,
                     QuadratureError)
from .harness import (Scenario, SpatialGrid, builtin_scenarios, emit_csv,
                      emit_plot_script, run_scenario, validate)
from .ilt import InversionConfig
from .transport import TransportParams
from .waiting import Family, WaitingTimeModel

_USAGE, _NUMERIC, _VALIDATION = 1, 2, 3


class _CliError(Exception):
    """A user-input problem; message goes to stderr, exit code 1."""


def _parse_config_scenario(section: configparser.SectionProxy,
                           label: str) -> Scenario:
    def get_float(key, default):
        return section.getfloat(key, fallback=default)

    sigma_trap = get_float("sigma_trap", 0.0)
    waiting = None
    if sigma_trap > 0.0:
        family = section.get("family", fallback="pareto")
        try:
            family = Family(family)
        except ValueError as exc:
            raise _CliError(f"unknown waiting-time family '{family}'") from exc
        waiting = WaitingTimeModel(family,
                                   alpha=get_float("alpha", 0.5),
                                   gamma=get_float("gamma", 0.1))
    transport = TransportParams(
        sigma_a=get_float("sigma_a", 1e-9),
        sigma_s=get_float("sigma_s", 1.0),
        sigma_trap=sigma_trap,
        waiting=waiting,
        speed=get_float("speed", 1.0),
    )
    inversion = InversionConfig(
        contour_shift=get_float("contour_shift", 0.04),
        freq_scale=get_float("freq_scale", 40.0),
        truncation=section.getint("truncation", fallback=40),
        steepness=get_float("steepness", 6.0),
    )
    times = tuple(float(v) for v in section.get("times", "10").split(","))
    grid = SpatialGrid(get_float("x_min", 0.0), get_float("x_max", 15.0),
                       section.getint("x_count", fallback=151))
    solvers = frozenset(
        v.strip().upper()
        for v in section.get("solvers", "RTE,FDE,NORMAL").split(","))
    return Scenario(label=label, transport=transport, inversion=inversion,
                    times=times, grid=grid, solvers=solvers,
                    n_ordinates=section.getint("n_ordinates", fallback=30))


def _load_scenario(args) -> Scenario:
    name = args.scenario
    if args.config:
        parser = configparser.ConfigParser()
        if not parser.read(args.config):
            raise _CliError(f"cannot read config file {args.config}")
        if parser.has_section(name):
            sc = _parse_config_scenario(parser[name], name)
            return _apply_overrides(sc, args)
    builtins = builtin_scenarios()
    if name not in builtins:
        known = ", ".join(sorted(builtins))
        raise _CliError(f"unknown scenario '{name}' (built-ins: {known})")
    return _apply_overrides(builtins[name], args)


def _apply_overrides(sc: Scenario, args) -> Scenario:
    """Command-line flags win over config-file and built-in values."""
    times = sc.times
    if getattr(args, "times", None):
        times = tuple(float(v) for v in args.times.split(","))
    grid = sc.grid
    if getattr(args, "x_max", None) is not None or getattr(args, "x_count", None) is not None:
        grid = SpatialGrid(sc.grid.x_min,
                           args.x_max if args.x_max is not None else sc.grid.x_max,
                           args.x_count if args.x_count is not None else sc.grid.count)
    solvers = sc.solvers
    if getattr(args, "solvers", None):
        solvers = frozenset(v.strip().upper() for v in args.solvers.split(","))
    return Scenario(label=sc.label, transport=sc.transport,
                    inversion=sc.inversion, times=times, grid=grid,
                    solvers=solvers, n_ordinates=sc.n_ordinates)


def _cmd_profile(args) -> int:
    sc = _load_scenario(args)
    profiles = run_scenario(sc)
    emit_csv(profiles, args.out)
    print(f"{sc.label}: {len(profiles)} profiles -> {args.out}")
    if args.plot:
        emit_plot_script(profiles, args.plot, args.out, logy=args.logy)
        print(f"plot script -> {args.plot}")
    return 0


def _cmd_compare(args) -> int:
    sc = _load_scenario(args)
    needed = {"RTE", "FDE"}
    if not needed <= sc.solvers:
        sc = Scenario(label=sc.label, transport=sc.transport,
                      inversion=sc.inversion, times=sc.times, grid=sc.grid,
                      solvers=sc.solvers | needed, n_ordinates=sc.n_ordinates)
    profiles = run_scenario(sc)
    by_t = {}
    for p in profiles:
        by_t.setdefault(p.t, {})[p.solver] = p
    lines = [("x_cm,u_rte,u_de,u_normal,t_min,scenario,"
              "diff_rte_de,reldiff_rte_de")]
    for t in sc.times:
        group = by_t[t]
        rte, de = group["RTE"], group["FDE"]
        normal = group.get("NORMAL")
        for i, (x, u_r) in enumerate(rte.points):
            u_d = de.points[i][1]
            u_n = normal.points[i][1] if normal else None
            diff = u_r - u_d
            rel = abs(diff) / abs(u_d) if u_d != 0.0 else float("inf")
            lines.append(",".join([
                f"{x:.9g}", f"{u_r:.9g}", f"{u_d:.9g}",
                "" if u_n is None else f"{u_n:.9g}",
                f"{t:.9g}", sc.label, f"{diff:.9g}", f"{rel:.9g}",
            ]))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"{sc.label}: comparison -> {args.out}")
    return 0


def _cmd_validate(args) -> int:
    report = validate(level=args.level)
    for entry in report:
        print(f"[{entry['status']:4s}] {entry['check']}: "
              f"measured {entry['measured']:.3e} vs {entry['tolerance']:.3e}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        print(f"report -> {args.out}")
    return 0 if all(e["status"] == "pass" for e in report) else _VALIDATION


def _cmd_scenarios(args) -> int:
    for name, sc in sorted(builtin_scenarios().items()):
        tp = sc.transport
        gamma = tp.waiting.gamma if tp.waiting else 0.0
        print(f"{name}: sigma_trap={tp.sigma_trap:g} gamma={gamma:g} "
              f"t={','.join(f'{t:g}' for t in sc.times)} "
              f"x=[{sc.grid.x_min:g},{sc.grid.x_max:g}]x{sc.grid.count}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trapdiff",
        description="Trapped-transport and fractional-diffusion profiles.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_args(p):
        p.add_argument("--scenario", required=True,
                       help="built-in name or section in --config")
        p.add_argument("--config", help="INI file with scenario sections")
        p.add_argument("--times", help="comma list overriding output times")
        p.add_argument("--x-max", dest="x_max", type=float)
        p.add_argument("--x-count", dest="x_count", type=int)
        p.add_argument("--solvers", help="comma list from RTE,FDE,NORMAL")

    p_profile = sub.add_parser("profile", help="compute profiles, write CSV")
    add_scenario_args(p_profile)
    p_profile.add_argument("--out", required=True, help="output CSV path")
    p_profile.add_argument("--plot", help="also write a gnuplot script here")
    p_profile.add_argument("--logy", action="store_true",
                           help="log-scale y axis in the plot script")
    p_profile.set_defaults(func=_cmd_profile)

    p_compare = sub.add_parser("compare",
                               help="profiles plus difference columns")
    add_scenario_args(p_compare)
    p_compare.add_argument("--out", required=True)
    p_compare.set_defaults(func=_cmd_compare)

    p_validate = sub.add_parser("validate", help="run the self-check suite")
    p_validate.add_argument("--level", choices=("fast", "full"),
                            default="fast")
    p_validate.add_argument("--out", help="write the JSON report here")
    p_validate.set_defaults(func=_cmd_validate)

    p_scen = sub.add_parser("scenarios", help="list built-in scenarios")
    p_scen.set_defaults(func=_cmd_scenarios)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return 0 if exc.code == 0 else _USAGE
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE
    except (NumericFailureError, QuadratureError, ProfileError,
            CancellationError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return _NUMERIC


if __name__ == "__main__":
    sys.exit(main())

"""Scenario driver: profiles, CSV/plot emission, and the validation suite.

A Scenario bundles everything needed to reproduce one panel of the
reference figures: transport parameters, inversion configuration, output
times, the spatial grid, and which solvers to run. The six built-in
scenarios cover the trapping-strength and trapping-scale variations at
t = 10 and t = 100 minutes.

Everything here is deliberately sequential and deterministic: the same
scenario produces a bit-identical CSV on every run.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from . import fde, transport
from .errors import ProfileError
from .ilt import InversionConfig, de_map, invert, invert_reference
from .specfun import gauss_legendre
from .transport import TransportParams
from .waiting import Family, WaitingTimeModel

__all__ = [
    "SpatialGrid",
    "Scenario",
    "SpatialProfile",
    "builtin_scenarios",
    "run_scenario",
    "emit_csv",
    "emit_plot_script",
    "validate",
]

SOLVER_ORDER = ("RTE", "FDE", "NORMAL")

CSV_HEADER = "x_cm,u_rte,u_de,u_normal,t_min,scenario"


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"grid needs at least 2 points, got {self.count}")
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got [{self.x_min}, {self.x_max}]")

    def points(self) -> tuple[float, ...]:
        step = (self.x_max - self.x_min) / (self.count - 1)
        return tuple(self.x_min + i * step for i in range(self.count))


@dataclass(frozen=True)
class Scenario:
    """One reproducible computation: parameters, times, grid, solvers."""

    label: str
    transport: TransportParams
    inversion: InversionConfig
    times: tuple[float, ...]
    grid: SpatialGrid
    solvers: frozenset[str] = frozenset(SOLVER_ORDER)
    n_ordinates: int = 30

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(self.times))
        object.__setattr__(self, "solvers", frozenset(self.solvers))
        if not self.times or any(t <= 0.0 for t in self.times):
            raise ValueError("times must be a nonempty list of positive reals")
        bad = self.solvers - set(SOLVER_ORDER)
        if bad or not self.solvers:
            raise ValueError(f"solvers must be a nonempty subset of {SOLVER_ORDER}")
        if self.n_ordinates < 1:
            raise ValueError(f"need at least one ordinate, got {self.n_ordinates}")

    def fingerprint(self) -> str:
        """Stable hash of every physical and numerical parameter.

        The label is cosmetic and deliberately excluded: two scenarios
        that compute the same thing fingerprint identically.
        """
        tp, w = self.transport, self.transport.waiting
        parts = [
            repr(tp.sigma_a), repr(tp.sigma_s), repr(tp.sigma_trap),
            repr(tp.speed),
            "none" if w is None else f"{w.family.value}:{w.alpha!r}:{w.gamma!r}",
            repr(self.inversion),
            repr(self.times),
            repr(self.grid),
            ",".join(sorted(self.solvers)),
            repr(self.n_ordinates),
        ]
        return hashlib.sha256("|".join(parts).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SpatialProfile:
    """Density values of one solver at one time on one grid."""

    scenario: str
    solver: str
    t: float
    points: tuple[tuple[float, float], ...]
    fingerprint: str

    def xs(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.points)


def _figure_scenario(label: str, sigma_trap: float, gamma: float,
                     t: float) -> Scenario:
    waiting = WaitingTimeModel(Family.PARETO, alpha=0.5, gamma=gamma)
    return Scenario(
        label=label,
        transport=TransportParams(sigma_a=1e-9, sigma_s=1.0,
                                  sigma_trap=sigma_trap, waiting=waiting),
        inversion=InversionConfig(),
        times=(t,),
        grid=SpatialGrid(0.0, 15.0, 151),
    )


def builtin_scenarios() -> dict[str, Scenario]:
    """The six reference panels: (a) strong trapping, (b) weak trapping,
    (c) long trapping timescale; each at t = 10 and t = 100 min."""
    out = {}
    for tag, t in (("fig1", 10.0), ("fig2", 100.0)):
        out[f"{tag}a"] = _figure_scenario(f"{tag}a", 0.1, 0.1, t)
        out[f"{tag}b"] = _figure_scenario(f"{tag}b", 0.01, 0.1, t)
        out[f"{tag}c"] = _figure_scenario(f"{tag}c", 0.1, 1.0, t)
    return out


def _rte_profile(sc: Scenario, t: float) -> tuple[tuple[float, float], ...]:
    quadrature = gauss_legendre(sc.n_ordinates)
    cfg = sc.inversion
    # one spectrum factorization per contour node, shared by every x
    h = math.pi / cfg.freq_scale
    for j in range(-cfg.truncation, cfg.truncation + 1):
        y = j * h + 0.5 * h
        s_j = complex(cfg.contour_shift,
                      cfg.freq_scale * de_map(y, cfg.steepness) / t)
        try:
            transport.ado_spectrum(sc.transport, quadrature, s_j)
        except Exception as exc:
            raise ProfileError(f"spectrum failed at s={s_j}: {exc}",
                               solver="RTE", x=math.nan, t=t) from exc
    pts = []
    for x in sc.grid.points():
        try:
            u = invert(
                lambda s: transport.laplace_density(sc.transport, quadrature,
                                                    s, x),
                t, cfg)
        except Exception as exc:
            raise ProfileError(f"inversion failed: {exc}",
                               solver="RTE", x=x, t=t) from exc
        pts.append((x, u))
    return tuple(pts)


def _fde_profile(sc: Scenario, t: float) -> tuple[tuple[float, float], ...]:
    p = fde.from_transport(sc.transport)
    pts = []
    for x in sc.grid.points():
        try:
            pts.append((x, fde.density_half(p, x, t)))
        except Exception as exc:
            raise ProfileError(f"quadrature failed: {exc}",
                               solver="FDE", x=x, t=t) from exc
    return tuple(pts)


def _normal_profile(sc: Scenario, t: float) -> tuple[tuple[float, float], ...]:
    p = fde.from_transport(sc.transport)
    return tuple((x, fde.normal_diffusion(p, x, t)) for x in sc.grid.points())


def run_scenario(sc: Scenario) -> list[SpatialProfile]:
    """All requested profiles, ordered by time then RTE, FDE, NORMAL."""
    runners = {"RTE": _rte_profile, "FDE": _fde_profile,
               "NORMAL": _normal_profile}
    fp = sc.fingerprint()
    profiles = []
    for t in sc.times:
        for solver in SOLVER_ORDER:
            if solver not in sc.solvers:
                continue
            pts = runners[solver](sc, t)
            if not all(math.isfinite(u) for _, u in pts):
                x_bad = next(x for x, u in pts if not math.isfinite(u))
                raise ProfileError("non-finite density", solver=solver,
                                   x=x_bad, t=t)
            profiles.append(SpatialProfile(scenario=sc.label, solver=solver,
                                           t=t, points=pts, fingerprint=fp))
    return profiles


def _profile_table(profiles: list[SpatialProfile]):
    """Rows (scenario, t, x) -> {solver: u}, ordered for emission."""
    if not profiles:
        raise ValueError("no profiles to emit")
    by_key: dict[tuple[str, float], dict[str, SpatialProfile]] = {}
    xs = profiles[0].xs()
    for p in profiles:
        if p.xs() != xs:
            raise ValueError("profiles do not share an x grid")
        by_key.setdefault((p.scenario, p.t), {})[p.solver] = p
    rows = []
    for (scenario, t), group in by_key.items():
        for i, x in enumerate(xs):
            cells = {solver: prof.points[i][1] for solver, prof in group.items()}
            rows.append((scenario, t, x, cells))
    return rows


def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.9g}"


def emit_csv(profiles: list[SpatialProfile], path: str) -> None:
    """Write profiles as CSV: 9 significant digits, LF endings, one row
    per grid point with empty cells for solvers that were not run."""
    rows = _profile_table(profiles)
    lines = [CSV_HEADER]
    for scenario, t, x, cells in rows:
        lines.append(",".join([
            _fmt(x),
            _fmt(cells.get("RTE")),
            _fmt(cells.get("FDE")),
            _fmt(cells.get("NORMAL")),
            _fmt(t),
            scenario,
        ]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_SERIES = (("u_rte", 2, "transport"), ("u_de", 3, "fractional diffusion"),
           ("u_normal", 4, "normal diffusion"))


def emit_plot_script(profiles: list[SpatialProfile], path: str,
                     csv_path: str, logy: bool = False) -> None:
    """Write a gnuplot script with one panel per scenario in `profiles`."""
    _profile_table(profiles)  # same emptiness/grid validation as the CSV
    panels: dict[str, list[float]] = {}
    solver_cols = {p.scenario: set() for p in profiles}
    for p in profiles:
        panels.setdefault(p.scenario, [])
        if p.t not in panels[p.scenario]:
            panels[p.scenario].append(p.t)
        solver_cols[p.scenario].add(p.solver)

    lines = [
        "# generated plot script; expects the CSV alongside",
        "set datafile separator ','",
        "set xlabel 'x [cm]'",
        "set ylabel 'density [1/cm]'",
    ]
    if logy:
        lines.append("set logscale y")
    if len(panels) > 1:
        lines.append(f"set multiplot layout 1,{len(panels)}")
    solver_of = {"u_rte": "RTE", "u_de": "FDE", "u_normal": "NORMAL"}
    for scenario, times in panels.items():
        lines.append(f"set title '{scenario}'")
        curves = []
        for t in times:
            for name, col, label in _SERIES:
                if solver_of[name] not in solver_cols[scenario]:
                    continue
                sel = (f"(strcol(6) eq '{scenario}' && column(5) == {t:g} "
                       f"? column(1) : NaN)")
                curves.append(f"'{csv_path}' using {sel}:(column({col})) "
                              f"with lines title '{label} t={t:g}'")
        lines.append("plot \\\n  " + ", \\\n  ".join(curves))
    if len(panels) > 1:
        lines.append("unset multiplot")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _check(name: str, measured: float, tolerance: float) -> dict:
    return {
        "check": name,
        "status": "pass" if measured <= tolerance else "fail",
        "measured": measured,
        "tolerance": tolerance,
    }


def validate(level: str = "fast",
             cfg: InversionConfig | None = None) -> list[dict]:
    """Self-check suite; returns one report entry per check.

    fast runs in seconds on closed-form material; full adds the mass
    oracles, cross-solver agreement, and the inversion convergence
    study, and takes a minute or two. cfg overrides the inversion
    configuration so degraded settings are visible to the checks.
    """
    if level not in ("fast", "full"):
        raise ValueError(f"level must be 'fast' or 'full', got {level}")
    cfg = cfg or InversionConfig()
    report: list[dict] = []

    # closed-form eigenvalue, N=1: nu = mu1/sqrt(st(st-ss))
    q1 = gauss_legendre(1)
    worst = 0.0
    for st_val, ss in ((2.0, 1.0), (1.5, 0.25), (3.0, 2.5)):
        params = TransportParams(sigma_a=st_val - ss - 0.5, sigma_s=ss,
                                 sigma_trap=0.0, waiting=None)
        spec = transport.ado_spectrum(params, q1, 0.5)
        exact = q1.nodes[0] / math.sqrt(st_val * (st_val - ss))
        worst = max(worst, abs(spec.eigenvalues[0] - exact) / exact)
    report.append(_check("transport.eigenvalue_n1", worst, 1e-12))

    # known Laplace pairs through the configured inverter; the ramp has a
    # wider budget than the bounded originals, so errors are reported as
    # fractions of each pair's own budget
    pairs = [
        (lambda s: 1.0 / s, lambda t: 1.0, 5.0, 1e-6),
        (lambda s: 1.0 / (s + 1.0), lambda t: math.exp(-t), 1.0, 1e-6),
        (lambda s: 1.0 / (s * s), lambda t: t, 3.0, 1e-5),
    ]
    worst = 0.0
    for transform_f, original, t, budget in pairs:
        got = invert(transform_f, t, cfg)
        rel = abs(got - original(t)) / abs(original(t))
        worst = max(worst, rel / budget)
    report.append(_check("ilt.known_pairs", worst, 1.0))

    # node map limits
    k = cfg.steepness
    report.append(_check("ilt.de_map_linear_tail",
                         abs(de_map(10.0, k) / 10.0 - 1.0), 1e-12))
    report.append(_check("ilt.de_map_vanishing_tail", de_map(-3.0, k), 1e-20))

    # waiting-time survival is the exact complement of the cdf
    w = WaitingTimeModel(Family.PARETO, 0.5, 0.1)
    worst = max(abs(w.survival(tau) + w.cdf(tau) - 1.0)
                for tau in (0.0, 0.1, 1.0, 10.0, 1e4))
    report.append(_check("waiting.survival_complement", worst, 0.0))

    # transform-space mass at k=0 collapses to 2/s when absorption is off
    p_a = fde.FdeParams(trap_strength=math.sqrt(0.1) * 0.1,
                        diffusivity=1.0 / 3.0, sigma_a=0.0, alpha=0.5)
    s0 = complex(0.7, 0.3)
    report.append(_check("fde.transform_mass",
                         abs(fde.fourier_laplace(p_a, 0.0, s0) - 2.0 / s0),
                         1e-13))

    if level == "fast":
        return report

    scenario_a = builtin_scenarios()["fig1a"]
    tp = scenario_a.transport
    quadrature = gauss_legendre(scenario_a.n_ordinates)

    # transport mass oracle on a short contour sample
    worst = 0.0
    for im in (-300.0, -3.0, 0.0, 0.5, 40.0):
        s = complex(cfg.contour_shift, im)
        spec = transport.ado_spectrum(tp, quadrature, s)
        lphi = tp.waiting.laplace_survival(s)
        lhs = 2.0 * (tp.sigma_trap * lphi + 1.0) * sum(
            nu / nn for nu, nn in zip(spec.eigenvalues, spec.normalizations))
        rhs = 2.0 * (1.0 + tp.sigma_trap * lphi) / (
            s + tp.sigma_a + tp.sigma_trap * s * lphi)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    report.append(_check("transport.mass_oracle", worst, 1e-8))

    # time-domain solver vs the transform-space oracle
    p_fig = fde.from_transport(tp)
    worst = 0.0
    for (x, t) in ((1.0, 10.0), (5.0, 100.0)):
        direct = fde.density_half(p_fig, x, t)
        oracle = invert(lambda s: fde.laplace_density(p_fig, x, s), t, cfg)
        worst = max(worst, abs(direct - oracle) / abs(oracle))
    report.append(_check("fde.oracle_equivalence", worst, 1e-3))

    # inversion convergence: doubling the truncation must not move results
    wide = InversionConfig(contour_shift=cfg.contour_shift,
                           freq_scale=cfg.freq_scale,
                           truncation=2 * cfg.truncation,
                           steepness=cfg.steepness)
    worst = 0.0
    for transform_f, _original, t, _budget in pairs:
        a = invert(transform_f, t, cfg)
        b = invert(transform_f, t, wide)
        worst = max(worst, abs(a - b) / abs(b))
    report.append(_check("ilt.truncation_converged", worst, 1e-8))

    # cross-inverter agreement on a transport transform (off the
    # ballistic front, where both originals are smooth)
    x, t = 2.0, 10.0

    def f_transport(s: complex) -> complex:
        return transport.laplace_density(tp, quadrature, s, x)

    de_val = invert(f_transport, t, cfg)
    tb_val = invert_reference(f_transport, t)
    report.append(_check("ilt.cross_inverter_transport",
                         abs(de_val - tb_val) / abs(de_val), 1e-4))
    return report

"""Tests for the comparison harness: scenarios, CSV/plot emission, self-checks."""

import dataclasses
import json
import math

import pytest

from trapdiff import fde
from trapdiff.harness import (
    CSV_HEADER,
    Scenario,
    SpatialGrid,
    builtin_scenarios,
    emit_csv,
    emit_plot_script,
    run_scenario,
    validate,
)
from trapdiff.ilt import InversionConfig
from trapdiff.transport import TransportParams, clear_spectrum_cache
from trapdiff.waiting import Family, WaitingTimeModel


def small_scenario(label="small", sigma_trap=0.1, solvers=("RTE", "FDE", "NORMAL"),
                   times=(10.0,), grid=SpatialGrid(0.0, 4.0, 3)):
    waiting = None
    if sigma_trap > 0.0:
        waiting = WaitingTimeModel(Family.PARETO, alpha=0.5, gamma=0.1)
    return Scenario(
        label=label,
        transport=TransportParams(sigma_a=1e-9, sigma_s=1.0,
                                  sigma_trap=sigma_trap, waiting=waiting),
        inversion=InversionConfig(),
        times=times,
        grid=grid,
        solvers=frozenset(solvers),
    )


# ------------------------------------------------------------------ scenarios

def test_grid_points_are_inclusive_and_even():
    g = SpatialGrid(0.0, 10.0, 6)
    assert g.points() == (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)


def test_grid_validation():
    with pytest.raises(ValueError):
        SpatialGrid(0.0, 10.0, 1)
    with pytest.raises(ValueError):
        SpatialGrid(5.0, 5.0, 3)


def test_scenario_validation():
    with pytest.raises(ValueError):
        small_scenario(times=())
    with pytest.raises(ValueError):
        small_scenario(times=(0.0,))
    with pytest.raises(ValueError):
        small_scenario(solvers=("RTE", "MONTECARLO"))
    with pytest.raises(ValueError):
        small_scenario(solvers=())
    with pytest.raises(ValueError):
        dataclasses.replace(small_scenario(), n_ordinates=0)


def test_scenario_coerces_times_to_tuple():
    sc = small_scenario(times=[5.0, 10.0])
    assert sc.times == (5.0, 10.0)


def test_builtin_scenarios_cover_both_times():
    scs = builtin_scenarios()
    assert sorted(scs) == ["fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig2c"]
    assert scs["fig1a"].transport.sigma_trap == 0.1
    assert scs["fig1b"].transport.sigma_trap == 0.01
    assert scs["fig1c"].transport.waiting.gamma == 1.0
    assert scs["fig1a"].times == (10.0,)
    assert scs["fig2a"].times == (100.0,)
    for sc in scs.values():
        assert sc.grid == SpatialGrid(0.0, 15.0, 151)
        assert sc.solvers == frozenset(("RTE", "FDE", "NORMAL"))
        assert sc.inversion == InversionConfig()
        assert sc.n_ordinates == 30


def test_fingerprint_ignores_label_only():
    a = small_scenario(label="one")
    b = small_scenario(label="two")
    assert a.fingerprint() == b.fingerprint()


def test_fingerprint_tracks_every_parameter():
    base = small_scenario()
    variants = [
        dataclasses.replace(base, times=(20.0,)),
        dataclasses.replace(base, grid=SpatialGrid(0.0, 4.0, 5)),
        dataclasses.replace(base, n_ordinates=24),
        dataclasses.replace(base, solvers=frozenset(("RTE",))),
        dataclasses.replace(base, inversion=InversionConfig(truncation=60)),
        dataclasses.replace(
            base, transport=dataclasses.replace(base.transport, sigma_trap=0.2)),
    ]
    prints = {v.fingerprint() for v in variants}
    assert base.fingerprint() not in prints
    assert len(prints) == len(variants)  # all six perturbations distinct


# ---------------------------------------------------------------- run_scenario

def test_run_scenario_order_and_contents():
    sc = small_scenario(times=(5.0, 10.0))
    profiles = run_scenario(sc)
    assert [(p.t, p.solver) for p in profiles] == [
        (5.0, "RTE"), (5.0, "FDE"), (5.0, "NORMAL"),
        (10.0, "RTE"), (10.0, "FDE"), (10.0, "NORMAL"),
    ]
    for p in profiles:
        assert p.scenario == "small"
        assert p.fingerprint == sc.fingerprint()
        assert p.xs() == sc.grid.points()
        assert all(math.isfinite(v) for _, v in p.points)


def test_run_scenario_normal_only_matches_closed_form():
    sc = small_scenario(solvers=("NORMAL",), grid=SpatialGrid(0.0, 6.0, 4))
    (profile,) = run_scenario(sc)
    p = fde.from_transport(sc.transport)
    for x, v in profile.points:
        assert v == fde.normal_diffusion(p, x, 10.0)


def test_reference_profile_values():
    """Frozen three-solver profile at t = 10 for the strong-trapping panel."""
    sc = dataclasses.replace(builtin_scenarios()["fig1a"],
                             grid=SpatialGrid(0.0, 10.0, 6))
    rows = {p.solver: [v for _, v in p.points] for p in run_scenario(sc)}
    frozen = {
        "RTE": [0.438651846, 0.22945521, 0.0774858728,
                0.012448689, 0.000711176075, 2.31961319e-06],
        "FDE": [0.335665633, 0.228184968, 0.0865147251,
                0.0181218167, 0.0020898724, 0.000132497068],
        "NORMAL": [0.309019359, 0.228927171, 0.0930748422,
                   0.0207678044, 0.00254315115, 0.000170913777],
    }
    for solver, wants in frozen.items():
        for got, want in zip(rows[solver], wants):
            assert got == pytest.approx(want, rel=1e-8), solver


# ------------------------------------------------------------------- emission

def test_emit_csv_structure(tmp_path):
    sc = small_scenario()
    profiles = run_scenario(sc)
    out = tmp_path / "profile.csv"
    emit_csv(profiles, str(out))
    text = out.read_text()
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER == "x_cm,u_rte,u_de,u_normal,t_min,scenario"
    assert len(lines) == 1 + 3  # one merged row per grid point
    assert "\r" not in text
    first = lines[1].split(",")
    assert first[0] == "0"
    assert first[4] == "10"
    assert first[5] == "small"
    # nine significant digits round-trip against the in-memory values
    by_solver = {p.solver: dict(p.points) for p in profiles}
    for line in lines[1:]:
        cols = line.split(",")
        x = float(cols[0])
        assert float(cols[1]) == pytest.approx(by_solver["RTE"][x], rel=1e-8)
        assert float(cols[2]) == pytest.approx(by_solver["FDE"][x], rel=1e-8)
        assert float(cols[3]) == pytest.approx(by_solver["NORMAL"][x], rel=1e-8)


def test_emit_csv_blank_cells_for_missing_solvers(tmp_path):
    sc = small_scenario(solvers=("RTE", "NORMAL"))
    out = tmp_path / "partial.csv"
    emit_csv(run_scenario(sc), str(out))
    for line in out.read_text().splitlines()[1:]:
        cols = line.split(",")
        assert cols[2] == ""  # no FDE column values
        assert cols[1] != "" and cols[3] != ""


def test_emit_csv_is_deterministic(tmp_path):
    sc = small_scenario()
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    clear_spectrum_cache()
    emit_csv(run_scenario(sc), str(first))
    clear_spectrum_cache()
    emit_csv(run_scenario(sc), str(second))
    assert first.read_bytes() == second.read_bytes()


def test_emit_csv_rejects_empty_and_leaves_no_file(tmp_path):
    out = tmp_path / "never.csv"
    with pytest.raises(ValueError):
        emit_csv([], str(out))
    assert not out.exists()


def test_emit_csv_rejects_mixed_grids(tmp_path):
    a = run_scenario(small_scenario(solvers=("NORMAL",)))
    b = run_scenario(small_scenario(solvers=("NORMAL",),
                                    grid=SpatialGrid(0.0, 4.0, 5)))
    with pytest.raises(ValueError):
        emit_csv(a + b, str(tmp_path / "mixed.csv"))


def test_plot_script_single_panel(tmp_path):
    profiles = run_scenario(small_scenario(solvers=("NORMAL",)))
    script = tmp_path / "plot.gp"
    emit_plot_script(profiles, str(script), "profile.csv", logy=True)
    text = script.read_text()
    assert "multiplot" not in text
    assert "set logscale y" in text
    assert "profile.csv" in text
    assert "diffusion" in text  # series label present


def test_plot_script_three_panels(tmp_path):
    profiles = []
    for label in ("p1", "p2", "p3"):
        profiles += run_scenario(small_scenario(label=label, solvers=("NORMAL",)))
    script = tmp_path / "trio.gp"
    emit_plot_script(profiles, str(script), "trio.csv")
    text = script.read_text()
    assert "set multiplot layout 1,3" in text
    assert "unset multiplot" in text
    assert "set logscale y" not in text


# ----------------------------------------------------------------- self-check

FAST_CHECKS = {
    "transport.eigenvalue_n1",
    "ilt.known_pairs",
    "ilt.de_map_linear_tail",
    "ilt.de_map_vanishing_tail",
    "waiting.survival_complement",
    "fde.transform_mass",
}


def test_validate_fast_passes():
    report = validate("fast")
    assert {entry["check"] for entry in report} == FAST_CHECKS
    for entry in report:
        assert set(entry) == {"check", "status", "measured", "tolerance"}
        assert entry["status"] == "pass", entry
        assert entry["measured"] <= entry["tolerance"]
    json.dumps(report)  # report must be serializable as-is


def test_validate_full_passes():
    report = validate("full")
    names = {entry["check"] for entry in report}
    assert FAST_CHECKS < names
    assert {"transport.mass_oracle", "fde.oracle_equivalence",
            "ilt.truncation_converged", "ilt.cross_inverter_transport"} <= names
    assert all(entry["status"] == "pass" for entry in report)


def test_validate_flags_degraded_truncation():
    """Halving the term count must be caught by the convergence check."""
    report = validate("full", cfg=InversionConfig(truncation=20))
    by_name = {entry["check"]: entry for entry in report}
    entry = by_name["ilt.truncation_converged"]
    assert entry["status"] == "fail"
    assert entry["measured"] > entry["tolerance"]


def test_validate_rejects_unknown_level():
    with pytest.raises(ValueError):
        validate("medium")


# --------------------------------------------------------- physical regression

def test_trap_free_transport_matches_normal_diffusion():
    """Without trapping the transport profile relaxes onto the diffusion one."""
    sc = small_scenario(sigma_trap=0.0, solvers=("RTE", "NORMAL"),
                        times=(100.0,), grid=SpatialGrid(2.0, 10.0, 5))
    rte, normal = run_scenario(sc)
    assert rte.solver == "RTE" and normal.solver == "NORMAL"
    for (_, a), (_, b) in zip(rte.points, normal.points):
        assert abs(a - b) < 2e-3

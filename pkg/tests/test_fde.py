"""Tests for the fractional diffusion solvers.

Three independent routes to the same density exist: the alpha = 1/2
subordination integral (`density_half`), the general-alpha kernel route
(`density`), and numerical inversion of the Fourier-Laplace picture
(`laplace_density` fed to the Laplace inverters). The tests play them
against each other and against the closed-form normal-diffusion limit.
"""

import cmath
import math

import pytest
from scipy import integrate

from trapdiff import ilt
from trapdiff.errors import QuadratureError
from trapdiff.fde import (
    FdeParams,
    density,
    density_half,
    fourier_laplace,
    from_transport,
    laplace_density,
    normal_diffusion,
)
from trapdiff.transport import TransportParams
from trapdiff.waiting import Family, WaitingTimeModel

ETA = math.sqrt(0.1) * 0.1  # gamma^alpha * sigma_trap for the main scenario
D0 = 1.0 / 3.0

MAIN = FdeParams(trap_strength=ETA, diffusivity=D0, sigma_a=1e-9, alpha=0.5)
NO_ABSORB = FdeParams(trap_strength=ETA, diffusivity=D0, sigma_a=0.0, alpha=0.5)
FREE = FdeParams(trap_strength=0.0, diffusivity=D0, sigma_a=0.0, alpha=0.5)


def transport_set(sigma_trap=0.1, gamma=0.1):
    w = None
    if sigma_trap > 0.0:
        w = WaitingTimeModel(family=Family.PARETO, alpha=0.5, gamma=gamma)
    return TransportParams(sigma_a=1e-9, sigma_s=1.0, sigma_trap=sigma_trap,
                           waiting=w)


# ---------------------------------------------------------------- parameters

def test_params_validation():
    with pytest.raises(ValueError):
        FdeParams(trap_strength=-0.1, diffusivity=D0, sigma_a=0.0, alpha=0.5)
    with pytest.raises(ValueError):
        FdeParams(trap_strength=0.1, diffusivity=0.0, sigma_a=0.0, alpha=0.5)
    with pytest.raises(ValueError):
        FdeParams(trap_strength=0.1, diffusivity=D0, sigma_a=-1.0, alpha=0.5)
    with pytest.raises(ValueError):
        FdeParams(trap_strength=0.1, diffusivity=D0, sigma_a=0.0, alpha=1.0)


def test_from_transport_main_scenario():
    p = from_transport(transport_set())
    assert p.trap_strength == ETA  # 0.1^0.5 * 0.1, exactly as floats
    assert p.trap_strength == pytest.approx(0.0316228, abs=1e-7)
    assert p.diffusivity == D0
    assert p.alpha == 0.5
    assert p.sigma_a == 1e-9


def test_from_transport_trap_free():
    p = from_transport(transport_set(sigma_trap=0.0))
    assert p.trap_strength == 0.0
    assert p.alpha == 0.5  # placeholder exponent, multiplies nothing


def test_from_transport_speed_scaling():
    w = WaitingTimeModel(family=Family.PARETO, alpha=0.5, gamma=0.1)
    tp = TransportParams(sigma_a=0.0, sigma_s=2.0, sigma_trap=0.1, waiting=w,
                         speed=3.0)
    assert from_transport(tp).diffusivity == pytest.approx(9.0 / 6.0, rel=1e-15)


# ---------------------------------------------------------- transform picture

def test_fourier_laplace_zero_mode_is_total_mass():
    # at k = 0 with no absorption the transform must integrate to 2/s
    for s in (0.5 + 0.0j, 0.3 + 0.9j, 0.04 - 40.0j):
        got = fourier_laplace(NO_ABSORB, 0.0, s)
        assert abs(got - 2.0 / s) <= 1e-13 * abs(2.0 / s), s


def test_fourier_laplace_no_memory_is_heat_kernel():
    s, k = 0.3 + 0.9j, 2.0
    assert fourier_laplace(FREE, k, s) == 2.0 / (s + D0 * k * k)


def test_fourier_laplace_independent_reevaluation():
    s, k = 1.0 + 0.0j, 1.0
    sa = cmath.exp(0.5 * cmath.log(s))
    rebuilt = 2.0 * (1.0 + ETA * sa / s) / (s + ETA * sa + D0 * k * k + 1e-9)
    got = fourier_laplace(MAIN, k, s)
    assert abs(got - rebuilt) <= 1e-14 * abs(rebuilt)


def test_fourier_laplace_rejects_zero_s():
    with pytest.raises(ValueError):
        fourier_laplace(MAIN, 1.0, 0.0)


# -------------------------------------------------------------- density_half

def test_density_half_requires_half_exponent():
    p = FdeParams(trap_strength=0.1, diffusivity=D0, sigma_a=0.0, alpha=0.7)
    with pytest.raises(ValueError):
        density_half(p, 1.0, 10.0)


def test_density_half_rejects_bad_time_and_tol():
    with pytest.raises(ValueError):
        density_half(MAIN, 1.0, 0.0)
    with pytest.raises(ValueError):
        density_half(MAIN, 1.0, 10.0, tol=0.0)


def test_density_half_weak_memory_approaches_normal():
    p = FdeParams(trap_strength=1e-6, diffusivity=D0, sigma_a=0.0, alpha=0.5)
    got = density_half(p, 0.0, 10.0)
    assert got == pytest.approx(0.3090194, abs=1e-3)


def test_density_half_zero_memory_is_normal_exactly():
    assert density_half(FREE, 1.3, 7.0) == normal_diffusion(FREE, 1.3, 7.0)


def test_density_half_matches_inversion_oracle():
    got = density_half(MAIN, 1.0, 10.0)
    oracle = ilt.invert(lambda s: laplace_density(MAIN, 1.0, s), 10.0)
    assert abs(got - oracle) / oracle < 1e-3
    # frozen oracle value, for drift detection
    assert got == pytest.approx(0.2973881369853064, rel=1e-6)


def test_density_half_even_in_x():
    for x in (0.7, 2.5):
        assert density_half(MAIN, x, 10.0) == density_half(MAIN, -x, 10.0)


def test_density_half_positive_and_decaying():
    vals = [density_half(MAIN, float(x), 10.0) for x in range(9)]
    assert all(v > 0.0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("t", [1.0, 10.0, 100.0])
def test_density_half_conserves_mass(t):
    hi = 40.0 if t <= 10.0 else 60.0  # keep the truncated Gaussian tail < 1e-12
    val, err = integrate.quad(lambda x: density_half(NO_ABSORB, x, t),
                              0.0, hi, limit=200, points=[0.1, 1.0, 5.0])
    assert err < 1e-7
    assert 2.0 * val == pytest.approx(2.0, abs=1e-5)


def test_density_half_memory_ladder_is_monotone():
    """Error against normal diffusion shrinks as the memory term fades."""
    sups = []
    for eta in (1e-2, 1e-4, 1e-6):
        p = FdeParams(trap_strength=eta, diffusivity=D0, sigma_a=0.0, alpha=0.5)
        sups.append(max(abs(density_half(p, float(x), 10.0)
                            - normal_diffusion(FREE, float(x), 10.0))
                        for x in range(11)))
    assert sups[0] > sups[1] > sups[2]
    assert sups[1] < 1e-3


# ----------------------------------------------------------- general exponent

def test_density_matches_half_route():
    for x, t in ((1.0, 10.0), (5.0, 100.0)):
        a = density(MAIN, x, t)
        b = density_half(MAIN, x, t)
        assert abs(a - b) <= 2e-8, (x, t)


@pytest.mark.parametrize("alpha,frozen", [(0.7, 0.308601768),
                                          (0.3, 0.326350654)])
def test_density_general_exponent_matches_inversion(alpha, frozen):
    p = FdeParams(trap_strength=0.1, diffusivity=D0, sigma_a=0.0, alpha=alpha)
    got = density(p, 1.0, 10.0)
    oracle = ilt.invert(lambda s: laplace_density(p, 1.0, s), 10.0)
    assert abs(got - oracle) / oracle < 1e-2
    assert got == pytest.approx(frozen, rel=1e-4)


def test_density_zero_memory_is_normal():
    p = FdeParams(trap_strength=0.0, diffusivity=D0, sigma_a=0.0, alpha=0.7)
    assert density(p, 0.8, 5.0) == normal_diffusion(p, 0.8, 5.0)


def test_density_rejects_bad_time():
    with pytest.raises(ValueError):
        density(MAIN, 1.0, -1.0)


# ------------------------------------------------------------- normal limit

def test_normal_diffusion_closed_form():
    got = normal_diffusion(FREE, 0.0, 10.0)
    assert got == 1.0 / math.sqrt(math.pi * D0 * 10.0)
    assert got == pytest.approx(0.3090194, abs=1e-7)
    x, t = 1.5, 4.0
    want = math.exp(-x * x / (4.0 * D0 * t)) / math.sqrt(math.pi * D0 * t)
    assert normal_diffusion(FREE, x, t) == pytest.approx(want, rel=1e-15)


def test_normal_diffusion_mass_and_attenuation():
    t = 10.0
    val, err = integrate.quad(lambda x: normal_diffusion(FREE, x, t), 0.0, 60.0)
    assert 2.0 * val == pytest.approx(2.0, abs=1e-10)
    absorbing = FdeParams(trap_strength=0.0, diffusivity=D0, sigma_a=0.05, alpha=0.5)
    ratio = normal_diffusion(absorbing, 1.0, t) / normal_diffusion(FREE, 1.0, t)
    assert ratio == pytest.approx(math.exp(-0.05 * t), rel=1e-13)


# --------------------------------------------------------- transform inversion

def test_laplace_density_even_in_x():
    s = 0.04 + 3.0j
    assert laplace_density(MAIN, 2.0, s) == laplace_density(MAIN, -2.0, s)


def test_laplace_density_quadrature_failure_carries_context():
    with pytest.raises(QuadratureError) as exc:
        laplace_density(MAIN, 1.0, 0.04 + 1.0j, tol_abs=1e-300)
    assert exc.value.estimate is not None
    assert exc.value.bound is not None

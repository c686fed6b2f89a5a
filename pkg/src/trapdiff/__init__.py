"""Transport with power-law trapping and its fractional-diffusion limit.

The package computes time-domain particle densities three ways: a
discrete-ordinates solution of the trapped transport equation inverted
numerically from the Laplace domain, a time-fractional diffusion
approximation evaluated by direct quadrature, and the classical
diffusion kernel as a baseline. A comparison harness drives all three
over shared scenarios and emits CSV tables and gnuplot scripts.
"""

from .errors import (CancellationError, DegenerateSpectrumError,
                     NumericFailureError, ProfileError, QuadratureError,
                     TransformUnavailableError)
from .fde import (FdeParams, density, density_half, fourier_laplace,
                  from_transport, normal_diffusion)
from .fde import laplace_density as fde_laplace_density
from .harness import (Scenario, SpatialGrid, SpatialProfile,
                      builtin_scenarios, emit_csv, emit_plot_script,
                      run_scenario, validate)
from .ilt import (InversionConfig, de_map, de_map_derivative, invert,
                  invert_reference)
from .specfun import (QuadratureSet, gamma_real, gauss_legendre,
                      gen_exp_integral_scaled, mainardi,
                      mainardi_asymptotic, reciprocal_gamma, stable_density)
from .transport import (AdoSpectrum, TransportParams, ado_spectrum,
                        clear_spectrum_cache, eigenfunction_phi,
                        fundamental_solution, sigma_t)
from .transport import laplace_density as transport_laplace_density
from .waiting import Family, WaitingTimeModel

__version__ = "0.1.0"

__all__ = [
    "AdoSpectrum",
    "CancellationError",
    "DegenerateSpectrumError",
    "Family",
    "FdeParams",
    "InversionConfig",
    "NumericFailureError",
    "ProfileError",
    "QuadratureError",
    "QuadratureSet",
    "Scenario",
    "SpatialGrid",
    "SpatialProfile",
    "TransformUnavailableError",
    "TransportParams",
    "WaitingTimeModel",
    "ado_spectrum",
    "builtin_scenarios",
    "clear_spectrum_cache",
    "de_map",
    "de_map_derivative",
    "density",
    "density_half",
    "eigenfunction_phi",
    "emit_csv",
    "emit_plot_script",
    "fde_laplace_density",
    "fourier_laplace",
    "from_transport",
    "fundamental_solution",
    "gamma_real",
    "gauss_legendre",
    "gen_exp_integral_scaled",
    "invert",
    "invert_reference",
    "mainardi",
    "mainardi_asymptotic",
    "normal_diffusion",
    "reciprocal_gamma",
    "run_scenario",
    "sigma_t",
    "stable_density",
    "transport_laplace_density",
    "validate",
]

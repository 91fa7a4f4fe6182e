"""Correlated photon-pair generation and Raman noise in optical fibers.

Models spontaneous four-wave mixing pair generation and spontaneous
Raman scattering noise around 1.5 um, maps generation rates to and from
detector count rates, simulates the counting experiment pulse by pulse,
fits the pump-power and square-root scaling laws, and predicts heralded
single-photon-source preparation efficiency versus fiber and temperature.
"""

from .counts import CountRecord, DetectorPair, car, forward_counts, invert_counts
from .errors import (
    ConfigError,
    DataInconsistencyError,
    ModelValidityError,
    NegativeRateError,
    NegativeRateWarning,
    RankDeficiencyError,
)
from .fitting import (
    QuadraticFit,
    SeriesPoint,
    SqrtFit,
    calibrate_raman_gain,
    fit_quadratic,
    fit_sqrt,
    quadratic_coefficient_errors,
    sqrt_law_coefficient,
)
from .montecarlo import (
    SimConfig,
    SimResult,
    simulate_power_sweep,
    simulate_pulses,
    threshold_click_probabilities,
)
from .physics import (
    ChannelSpec,
    Environment,
    FiberSpec,
    MaterialSpec,
    PumpSpec,
    RateTriple,
    beta2_from_dispersion,
    bose_occupation,
    generation_rates,
    hsps_efficiency,
    material_merit_ratio,
    multiphoton_probability,
    pair_noise_ratio,
    pump_photons_per_pulse,
    raman_spectral_densities,
    sfwm_spectral_density,
)
from .config import RunConfig, SweepSpec, load_run_config, sweep_grid

__version__ = "0.1.0"

__all__ = [
    "ChannelSpec",
    "ConfigError",
    "CountRecord",
    "DataInconsistencyError",
    "DetectorPair",
    "Environment",
    "FiberSpec",
    "MaterialSpec",
    "ModelValidityError",
    "NegativeRateError",
    "NegativeRateWarning",
    "PumpSpec",
    "QuadraticFit",
    "RankDeficiencyError",
    "RateTriple",
    "RunConfig",
    "SeriesPoint",
    "SimConfig",
    "SimResult",
    "SqrtFit",
    "SweepSpec",
    "beta2_from_dispersion",
    "bose_occupation",
    "calibrate_raman_gain",
    "car",
    "fit_quadratic",
    "fit_sqrt",
    "forward_counts",
    "generation_rates",
    "hsps_efficiency",
    "invert_counts",
    "load_run_config",
    "material_merit_ratio",
    "multiphoton_probability",
    "pair_noise_ratio",
    "pump_photons_per_pulse",
    "quadratic_coefficient_errors",
    "raman_spectral_densities",
    "sfwm_spectral_density",
    "simulate_power_sweep",
    "simulate_pulses",
    "sqrt_law_coefficient",
    "sweep_grid",
    "threshold_click_probabilities",
]

"""Photon-pair and Raman-noise generation model for optical fibers.

Spectral densities of spontaneous four-wave mixing (SFWM) pairs and
spontaneous Raman scattering (SpRS) noise in a co-polarized single-pump
configuration, plus the derived per-pulse generation rates, the
pair-to-noise ratio, and heralded-single-photon-source figures of merit.

Unit conventions (conventional fiber units at the API boundary):
    gamma, raman_gain   W^-1 km^-1
    dispersion          ps nm^-1 km^-1
    length              km
    wavelength          nm
    detune, bandwidth   Hz (ordinary frequency offset from the pump)
    window, duration    s
    temperature         K

Detunes are ordinary frequencies; the thermal occupation uses h*nu/(k_B*T)
and the phase-matching term uses the angular frequency 2*pi*nu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import BOLTZMANN, LIGHT_SPEED, PLANCK
from .errors import ConfigError

SIGNAL = "signal"  # Stokes side (red of the pump)
IDLER = "idler"  # anti-Stokes side (blue of the pump)

# signal and idler filters must sit symmetrically about the pump
DETUNE_MATCH_TOLERANCE = 0.01


@dataclass(frozen=True)
class FiberSpec:
    """One fiber under test.

    gamma: nonlinear coefficient, W^-1 km^-1
    raman_gain: co-polarized Raman gain coefficient at the working detune, W^-1 km^-1
    dispersion: group-velocity dispersion parameter D at the pump wavelength, ps nm^-1 km^-1
    length: fiber length, km
    """

    gamma: float
    raman_gain: float
    dispersion: float
    length: float
    zero_dispersion_wavelength: float | None = None  # nm, informational
    label: str = ""

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigError(f"fiber.gamma must be > 0, got {self.gamma}")
        if self.raman_gain < 0:
            raise ConfigError(f"fiber.raman_gain must be >= 0, got {self.raman_gain}")
        if not self.length > 0:
            raise ConfigError(f"fiber.length must be > 0, got {self.length}")


@dataclass(frozen=True)
class PumpSpec:
    """Pulsed pump: peak power (W), wavelength (nm), repetition rate (Hz), pulse duration (s)."""

    peak_power: float
    wavelength: float
    repetition_rate: float
    pulse_duration: float

    def __post_init__(self):
        if self.peak_power < 0:
            raise ConfigError(f"pump.peak_power must be >= 0, got {self.peak_power}")
        if not self.wavelength > 0:
            raise ConfigError(f"pump.wavelength must be > 0, got {self.wavelength}")
        if not self.repetition_rate > 0:
            raise ConfigError(f"pump.repetition_rate must be > 0, got {self.repetition_rate}")
        if not self.pulse_duration > 0:
            raise ConfigError(f"pump.pulse_duration must be > 0, got {self.pulse_duration}")


@dataclass(frozen=True)
class ChannelSpec:
    """One detection arm.

    detune: frequency offset magnitude from the pump, Hz
    bandwidth: filter bandwidth, Hz
    window: effective temporal collection window, s (roughly the pump
        pulse duration; photons only arrive within the pulse)
    efficiency: end-to-end collection*detection efficiency in [0, 1]
    dark_prob: dark-count probability per gate in [0, 1)
    side: "signal" (Stokes) or "idler" (anti-Stokes)
    """

    detune: float
    bandwidth: float
    window: float
    efficiency: float
    dark_prob: float
    side: str

    def __post_init__(self):
        if not self.detune > 0:
            raise ConfigError(f"channel.detune must be > 0, got {self.detune}")
        if not self.bandwidth > 0:
            raise ConfigError(f"channel.bandwidth must be > 0, got {self.bandwidth}")
        if not self.window > 0:
            raise ConfigError(f"channel.window must be > 0, got {self.window}")
        if not 0.0 <= self.efficiency <= 1.0:
            raise ConfigError(f"channel.efficiency must be in [0, 1], got {self.efficiency}")
        if not 0.0 <= self.dark_prob < 1.0:
            raise ConfigError(f"channel.dark_prob must be in [0, 1), got {self.dark_prob}")
        if self.side not in (SIGNAL, IDLER):
            raise ConfigError(f"channel.side must be 'signal' or 'idler', got {self.side!r}")

    @property
    def acceptance(self) -> float:
        """Dimensionless bandwidth-window product (the rate normalization)."""
        return self.bandwidth * self.window


@dataclass(frozen=True)
class Environment:
    """Fiber temperature in kelvin."""

    temperature: float

    def __post_init__(self):
        if not self.temperature > 0:
            raise ConfigError(f"env.temperature must be > 0, got {self.temperature}")


@dataclass(frozen=True)
class RateTriple:
    """Per-pulse physical generation rates.

    pair_rate: correlated pairs per pulse (SFWM)
    stokes_rate: Stokes noise photons per pulse on the signal side (SpRS)
    antistokes_rate: anti-Stokes noise photons per pulse on the idler side (SpRS)
    """

    pair_rate: float
    stokes_rate: float
    antistokes_rate: float

    def __post_init__(self):
        for name in ("pair_rate", "stokes_rate", "antistokes_rate"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")


@dataclass(frozen=True)
class MaterialSpec:
    """Core-material nonlinearity: n2 (m^2/W), Raman response (consistent
    arbitrary units), effective area (um^2)."""

    n2: float
    raman_response: float
    effective_area: float

    def __post_init__(self):
        for name in ("n2", "raman_response", "effective_area"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"material.{name} must be > 0, got {value}")


def bose_occupation(detune: float, env: Environment) -> float:
    """Mean thermal phonon occupation 1/(exp(h*nu/(k_B*T)) - 1).

    ``detune`` is the ordinary-frequency offset in Hz. Strictly decreasing
    in detune, strictly increasing in temperature.
    """
    if not detune > 0:
        raise ValueError(f"detune must be > 0, got {detune}")
    x = PLANCK * detune / (BOLTZMANN * env.temperature)
    if x > 700.0:  # expm1 would overflow; occupation is exp(-x) to ~1e-300
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def beta2_from_dispersion(dispersion: float, wavelength: float) -> float:
    """Convert the dispersion parameter D to beta2 = -D*lambda^2/(2*pi*c).

    D in ps nm^-1 km^-1, wavelength in nm; returns beta2 in ps^2 km^-1.
    Normal dispersion (D < 0) gives beta2 > 0.
    """
    if not wavelength > 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength}")
    c_nm_per_ps = LIGHT_SPEED * 1e-3
    return -dispersion * wavelength * wavelength / (2.0 * math.pi * c_nm_per_ps)


def _sinc(x: float) -> float:
    """sin(x)/x with the removable singularity filled in (value 1 at 0)."""
    if x == 0.0:
        return 1.0
    return math.sin(x) / x


def sfwm_spectral_density(
    fiber: FiberSpec,
    pump: PumpSpec,
    detune: float,
    phase_matched: bool = False,
) -> float:
    """Photon-flux spectral density of SFWM pairs at the given detune (Hz).

    (gamma*P0*L)^2 * sinc^2[(beta2*Omega^2 + 2*gamma*P0)*L/2] with
    Omega = 2*pi*detune. Peaks at (gamma*P0*L)^2 on the phase-matching
    condition beta2*Omega^2 + 2*gamma*P0 = 0; ``phase_matched=True`` pins
    the sinc factor to 1 (the zero-mismatch idealization).
    """
    if detune < 0:
        raise ValueError(f"detune must be >= 0, got {detune}")
    scale = fiber.gamma * pump.peak_power * fiber.length
    if phase_matched:
        return scale * scale
    beta2 = beta2_from_dispersion(fiber.dispersion, pump.wavelength)  # ps^2/km
    omega = 2.0 * math.pi * detune * 1e-12  # rad/ps
    mismatch = beta2 * omega * omega + 2.0 * fiber.gamma * pump.peak_power  # 1/km
    s = _sinc(mismatch * fiber.length / 2.0)
    return scale * scale * s * s


def raman_spectral_densities(
    fiber: FiberSpec,
    pump: PumpSpec,
    detune: float,
    env: Environment,
) -> tuple[float, float]:
    """Photon-flux spectral densities (stokes, antistokes) of SpRS noise.

    Stokes (signal side) scales with n+1, anti-Stokes (idler side) with n,
    where n is the thermal occupation at the detune. Their difference is
    the temperature-independent spontaneous floor P0*L*g_R.
    """
    if fiber.raman_gain == 0.0:
        return (0.0, 0.0)
    n = bose_occupation(detune, env)
    base = pump.peak_power * fiber.length * fiber.raman_gain
    return (base * (n + 1.0), base * n)


def _require_pair(signal: ChannelSpec, idler: ChannelSpec) -> None:
    if signal.side != SIGNAL:
        raise ConfigError(f"signal channel has side={signal.side!r}, expected 'signal'")
    if idler.side != IDLER:
        raise ConfigError(f"idler channel has side={idler.side!r}, expected 'idler'")
    mean = 0.5 * (signal.detune + idler.detune)
    if abs(signal.detune - idler.detune) > DETUNE_MATCH_TOLERANCE * mean:
        raise ConfigError(
            "signal and idler detunes must match within "
            f"{DETUNE_MATCH_TOLERANCE:.0%} (energy conservation): "
            f"{signal.detune:.6g} Hz vs {idler.detune:.6g} Hz"
        )


def generation_rates(
    fiber: FiberSpec,
    pump: PumpSpec,
    signal: ChannelSpec,
    idler: ChannelSpec,
    env: Environment,
    phase_matched: bool = False,
) -> RateTriple:
    """Per-pulse generation rates: rate = bandwidth * window * density.

    The pair rate uses the signal channel's detune and acceptance (the
    filters are symmetric about the pump; the detunes must agree within
    1%). Each noise rate uses its own arm's acceptance. ``phase_matched``
    pins the SFWM sinc factor to 1.
    """
    _require_pair(signal, idler)
    pair = signal.acceptance * sfwm_spectral_density(
        fiber, pump, signal.detune, phase_matched=phase_matched
    )
    stokes_density, _ = raman_spectral_densities(fiber, pump, signal.detune, env)
    _, antistokes_density = raman_spectral_densities(fiber, pump, idler.detune, env)
    return RateTriple(
        pair_rate=pair,
        stokes_rate=signal.acceptance * stokes_density,
        antistokes_rate=idler.acceptance * antistokes_density,
    )


def pair_noise_ratio(
    fiber: FiberSpec,
    pump: PumpSpec,
    signal: ChannelSpec,
    idler: ChannelSpec,
    env: Environment,
) -> float:
    """Ratio of pair rate to anti-Stokes noise rate, neglecting phase mismatch.

    Closed form gamma*sqrt(R) / (g_R * n * sqrt(bandwidth*window)) for
    symmetric channels, where R is the phase-matched pair rate; equals
    pair_rate/antistokes_rate of :func:`generation_rates` with
    ``phase_matched=True``. Scales as sqrt(R) at fixed fiber and
    temperature.
    """
    _require_pair(signal, idler)
    if fiber.raman_gain == 0.0:
        raise ValueError("pair-to-noise ratio undefined: fiber.raman_gain is zero")
    if pump.peak_power == 0.0:
        raise ValueError("pair-to-noise ratio undefined: pump.peak_power is zero")
    n = bose_occupation(idler.detune, env)
    scale = fiber.gamma * pump.peak_power * fiber.length
    pair = signal.acceptance * scale * scale
    return (
        fiber.gamma
        * math.sqrt(pair)
        * math.sqrt(signal.acceptance)
        / (fiber.raman_gain * n * idler.acceptance)
    )


def hsps_efficiency(rates: RateTriple) -> float:
    """Upper bound on heralded-single-photon-source preparation efficiency.

    pair_rate / (pair_rate + antistokes_rate): the fraction of idler-side
    heralds that actually announce a signal photon.
    """
    total = rates.pair_rate + rates.antistokes_rate
    if total == 0.0:
        raise ValueError("preparation efficiency undefined: pair and noise rates are both zero")
    return rates.pair_rate / total


def multiphoton_probability(pair_rate: float, cumulative: bool = False) -> float:
    """Poisson multi-pair emission probability at mean ``pair_rate`` per pulse.

    Returns P(n=2) = mu^2 e^-mu / 2 by default, or P(n>=2) = 1 - e^-mu(1+mu)
    when ``cumulative`` is set.
    """
    if pair_rate < 0:
        raise ValueError(f"pair_rate must be >= 0, got {pair_rate}")
    mu = pair_rate
    if cumulative:
        return -math.expm1(-mu) - mu * math.exp(-mu)
    return 0.5 * mu * mu * math.exp(-mu)


def material_merit_ratio(a: MaterialSpec, b: MaterialSpec) -> float:
    """Pair-to-noise merit of material a relative to material b.

    (n2_a/g_a) / (n2_b/g_b) at equal pair rate, temperature and
    acceptance. Effective area cancels: gamma ~ n2/A_eff and
    g_R ~ g/A_eff, so only the core material matters.
    """
    return (a.n2 * b.raman_response) / (b.n2 * a.raman_response)


def pump_photons_per_pulse(pump: PumpSpec) -> float:
    """Pump photon number per pulse, P0*tau_p / (h*c/lambda)."""
    pulse_energy = pump.peak_power * pump.pulse_duration
    photon_energy = PLANCK * LIGHT_SPEED / (pump.wavelength * 1e-9)
    return pulse_energy / photon_energy

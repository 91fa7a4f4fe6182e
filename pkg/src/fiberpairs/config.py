"""Run-configuration file handling.

A run config is an INI-style key-value file whose sections mirror the
model inputs one field per line, values in fixed units (see the README
unit table; no unit auto-detection):

    [fiber]            [pump]               [signal] / [idler]   [env]
    label              peak_power  W        detune      Hz       temperature K
    gamma  1/(W km)    wavelength  nm       bandwidth   Hz
    raman_gain         repetition_rate Hz   window      s        [sim]  (optional)
    dispersion         pulse_duration  s    efficiency  -        n_pulses
    length km                               dark_prob   -        seed
    zero_dispersion_wavelength nm                                accidental_lag

The [signal]/[idler] section names fix each channel's side.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .montecarlo import SimConfig
from .physics import IDLER, SIGNAL, ChannelSpec, Environment, FiberSpec, PumpSpec

SWEEP_VARIABLES = ("peak_power", "temperature", "detune", "pair_rate")


@dataclass(frozen=True)
class RunConfig:
    """Everything one modeling or simulation run needs."""

    fiber: FiberSpec
    pump: PumpSpec
    signal: ChannelSpec
    idler: ChannelSpec
    env: Environment
    sim: SimConfig | None = None

    def __post_init__(self):
        if self.signal.side != SIGNAL or self.idler.side != IDLER:
            raise ConfigError("RunConfig channels must have side signal/idler respectively")


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional parameter sweep: variable, range and grid."""

    variable: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"sweep variable must be one of {', '.join(SWEEP_VARIABLES)}, got {self.variable!r}"
            )
        if not self.start < self.stop:
            raise ConfigError(f"sweep start must be < stop, got {self.start} >= {self.stop}")
        if self.steps < 2:
            raise ConfigError(f"sweep steps must be >= 2, got {self.steps}")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"sweep scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and not self.start > 0:
            raise ConfigError("log-scale sweep requires start > 0")


def sweep_grid(spec: SweepSpec) -> np.ndarray:
    if spec.scale == "log":
        return np.geomspace(spec.start, spec.stop, spec.steps)
    return np.linspace(spec.start, spec.stop, spec.steps)


def _section(parser: configparser.ConfigParser, name: str, path: str) -> configparser.SectionProxy:
    if not parser.has_section(name):
        raise ConfigError(f"{path}: missing [{name}] section")
    return parser[name]


def _float(section: configparser.SectionProxy, key: str, default: float | None = None) -> float:
    raw = section.get(key)
    if raw is None:
        if default is not None:
            return default
        raise ConfigError(f"[{section.name}] is missing required key '{key}'")
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key}: not a number: {raw!r}") from None


def _int(section: configparser.SectionProxy, key: str, default: int | None = None) -> int:
    raw = section.get(key)
    if raw is None:
        if default is not None:
            return default
        raise ConfigError(f"[{section.name}] is missing required key '{key}'")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key}: not an integer: {raw!r}") from None


def _channel(section: configparser.SectionProxy, side: str) -> ChannelSpec:
    return ChannelSpec(
        detune=_float(section, "detune"),
        bandwidth=_float(section, "bandwidth"),
        window=_float(section, "window"),
        efficiency=_float(section, "efficiency"),
        dark_prob=_float(section, "dark_prob"),
        side=side,
    )


def load_run_config(path: str | Path) -> RunConfig:
    """Parse and validate a run-config file.

    Raises :class:`ConfigError` naming the offending section/field, or
    OSError if the file cannot be read.
    """
    path = Path(path)
    parser = configparser.ConfigParser()
    with open(path, "r", encoding="utf-8") as handle:
        try:
            parser.read_file(handle)
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None

    fiber_sec = _section(parser, "fiber", str(path))
    zdw = fiber_sec.get("zero_dispersion_wavelength")
    fiber = FiberSpec(
        gamma=_float(fiber_sec, "gamma"),
        raman_gain=_float(fiber_sec, "raman_gain"),
        dispersion=_float(fiber_sec, "dispersion"),
        length=_float(fiber_sec, "length"),
        zero_dispersion_wavelength=float(zdw) if zdw is not None else None,
        label=fiber_sec.get("label", ""),
    )
    pump_sec = _section(parser, "pump", str(path))
    pump = PumpSpec(
        peak_power=_float(pump_sec, "peak_power"),
        wavelength=_float(pump_sec, "wavelength"),
        repetition_rate=_float(pump_sec, "repetition_rate"),
        pulse_duration=_float(pump_sec, "pulse_duration"),
    )
    signal = _channel(_section(parser, "signal", str(path)), SIGNAL)
    idler = _channel(_section(parser, "idler", str(path)), IDLER)
    env = Environment(temperature=_float(_section(parser, "env", str(path)), "temperature"))

    sim = None
    if parser.has_section("sim"):
        sim_sec = parser["sim"]
        sim = SimConfig(
            n_pulses=_int(sim_sec, "n_pulses"),
            seed=_int(sim_sec, "seed", default=0),
            accidental_lag=_int(sim_sec, "accidental_lag", default=1),
        )
    return RunConfig(fiber=fiber, pump=pump, signal=signal, idler=idler, env=env, sim=sim)

"""Seeded per-pulse Monte Carlo photon-counting simulator.

Independent counting oracle for the analytic count model and generator of
synthetic data with realistic statistical scatter. Per pulse: the pair,
Stokes and anti-Stokes photon numbers are Poisson draws; every photon is
detected independently with its arm's efficiency; each arm may also fire
a dark count; a gated Geiger-mode arm "clicks" when it registers at least
one detection. Accidentals pair a signal click with the idler click a
fixed number of pulses later (circular over the run), mirroring the
delayed-pulse measurement convention, so the estimate never reuses the
analytic model it is meant to check.

Pulses are generated in fixed-size batches, each from its own counter
substream of the run seed, so results are bit-reproducible regardless of
how batches are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .counts import CountRecord, DetectorPair
from .physics import Environment, FiberSpec, PumpSpec, RateTriple, generation_rates

BATCH_PULSES = 1 << 20

_FIELDS = ("n_s", "n_i", "n_co", "n_ac")


@dataclass(frozen=True)
class SimConfig:
    """Simulation run parameters.

    n_pulses: number of simulated pump pulses
    seed: 64-bit reproducibility seed
    accidental_lag: pulse offset used for accidental pairing
    """

    n_pulses: int
    seed: int
    accidental_lag: int = 1

    def __post_init__(self):
        if self.n_pulses < 1:
            raise ValueError(f"n_pulses must be >= 1, got {self.n_pulses}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.accidental_lag < 1:
            raise ValueError(f"accidental_lag must be >= 1, got {self.accidental_lag}")


@dataclass(frozen=True)
class SimResult:
    """Tallies from one simulation run.

    counts: per-pulse probability estimates (raw tallies / n_pulses)
    raw: integer click/coincidence tallies keyed like CountRecord fields
    std_err: binomial standard errors sqrt(p(1-p)/n) per field
    """

    counts: CountRecord
    raw: dict[str, int]
    std_err: dict[str, float]
    n_pulses: int


def simulate_pulses(rates: RateTriple, det: DetectorPair, cfg: SimConfig) -> SimResult:
    """Simulate cfg.n_pulses pump pulses and tally clicks and coincidences.

    Deterministic for a fixed cfg.seed: identical SimResult regardless of
    batch scheduling. Conditional on the drawn photon numbers the two
    arms click independently, so each arm is reduced to one Bernoulli
    draw against its exact click probability
    1 - (1-eta)^(photons) * (1-dark); this is distribution-identical to
    simulating every photon separately.
    """
    n = cfg.n_pulses
    es, ds = det.signal.efficiency, det.signal.dark_prob
    ei, di = det.idler.efficiency, det.idler.dark_prob

    signal_clicks = np.empty(n, dtype=bool)
    idler_clicks = np.empty(n, dtype=bool)
    for batch, start in enumerate(range(0, n, BATCH_PULSES)):
        size = min(BATCH_PULSES, n - start)
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(batch,)))
        pairs = rng.poisson(rates.pair_rate, size)
        stokes = rng.poisson(rates.stokes_rate, size)
        antistokes = rng.poisson(rates.antistokes_rate, size)
        p_signal = 1.0 - (1.0 - es) ** (pairs + stokes) * (1.0 - ds)
        p_idler = 1.0 - (1.0 - ei) ** (pairs + antistokes) * (1.0 - di)
        stop = start + size
        signal_clicks[start:stop] = rng.random(size) < p_signal
        idler_clicks[start:stop] = rng.random(size) < p_idler

    lag = cfg.accidental_lag
    raw = {
        "n_s": int(signal_clicks.sum()),
        "n_i": int(idler_clicks.sum()),
        "n_co": int((signal_clicks & idler_clicks).sum()),
        "n_ac": int((signal_clicks & np.roll(idler_clicks, -lag)).sum()),
    }
    counts = CountRecord(**{k: raw[k] / n for k in _FIELDS})
    std_err = {
        k: math.sqrt(getattr(counts, k) * (1.0 - getattr(counts, k)) / n) for k in _FIELDS
    }
    return SimResult(counts=counts, raw=raw, std_err=std_err, n_pulses=n)


def threshold_click_probabilities(rates: RateTriple, det: DetectorPair) -> CountRecord:
    """Exact per-pulse click probabilities of the threshold-detector model.

    Closed-form expectation values of :func:`simulate_pulses` (Poisson
    photon numbers, independent per-photon detection, click on >= 1).
    Useful for quantifying the linearized count model's truncation bias:
    the analytic model keeps only the leading terms of these expressions.
    """
    r, rs, ri = rates.pair_rate, rates.stokes_rate, rates.antistokes_rate
    es, ds = det.signal.efficiency, det.signal.dark_prob
    ei, di = det.idler.efficiency, det.idler.dark_prob

    quiet_s = (1.0 - ds) * math.exp(-es * (r + rs))
    quiet_i = (1.0 - di) * math.exp(-ei * (r + ri))
    # P(neither arm clicks): a pair escapes both arms with prob (1-es)(1-ei)
    quiet_both = (
        (1.0 - ds)
        * (1.0 - di)
        * math.exp(-es * rs - ei * ri - r * (es + ei - es * ei))
    )
    p_s = 1.0 - quiet_s
    p_i = 1.0 - quiet_i
    p_co = 1.0 - quiet_s - quiet_i + quiet_both
    return CountRecord(n_s=p_s, n_i=p_i, n_co=p_co, n_ac=p_s * p_i)


def _point_seed(seed: int, index: int) -> int:
    """Derive a deterministic 64-bit sub-seed for one sweep grid point."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def simulate_power_sweep(
    fiber: FiberSpec,
    pump_grid: list[PumpSpec],
    det: DetectorPair,
    env: Environment,
    cfg: SimConfig,
) -> list[tuple[PumpSpec, SimResult]]:
    """Simulate a pump-power sweep: one full run per grid point.

    Rates at each point come from the generation model; each point gets
    its own seed derived from (cfg.seed, point index), so the sweep is
    reproducible point by point.
    """
    if not pump_grid:
        raise ValueError("pump_grid must not be empty")
    results = []
    for index, pump in enumerate(pump_grid):
        rates = generation_rates(fiber, pump, det.signal, det.idler, env)
        point_cfg = replace(cfg, seed=_point_seed(cfg.seed, index))
        results.append((pump, simulate_pulses(rates, det, point_cfg)))
    return results

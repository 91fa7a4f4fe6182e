"""Pair and Raman-noise spectral densities across the generation band.

Three fiber types pumped at the same nonlinear phase gamma*P0*L = 0.2:
the pair density peaks at the same value regardless of fiber, and stays
nearly flat out to the 0.3 THz filter detune, while the Raman noise is
strongly asymmetric between the Stokes and anti-Stokes sides because of
the thermal phonon occupation.
"""

import numpy as np

from fiberpairs import (
    Environment,
    FiberSpec,
    PumpSpec,
    bose_occupation,
    raman_spectral_densities,
    sfwm_spectral_density,
)

FIBERS = [
    FiberSpec(gamma=3.0, raman_gain=0.02, dispersion=0.05, length=1.0, label="DSF"),
    FiberSpec(gamma=11.1, raman_gain=0.03, dispersion=0.076, length=0.5, label="HNLF"),
    FiberSpec(gamma=66.7, raman_gain=0.009, dispersion=8.65, length=0.025, label="HNMSF"),
]

env = Environment(temperature=300.0)
detunes = np.linspace(0.05e12, 0.5e12, 10)

print("Pair spectral density w.r.t. its peak (gamma*P0*L = 0.2 everywhere)")
print(f"{'detune (THz)':>12} " + " ".join(f"{f.label:>8}" for f in FIBERS))
for nu in detunes:
    cells = []
    for fiber in FIBERS:
        pump = PumpSpec(
            peak_power=0.2 / (fiber.gamma * fiber.length),
            wavelength=1552.75, repetition_rate=1e6, pulse_duration=50e-12,
        )
        density = sfwm_spectral_density(fiber, pump, nu)
        cells.append(f"{density / 0.04:8.4f}")
    print(f"{nu / 1e12:12.2f} " + " ".join(cells))

print()
print("The wider the phase-matching band (low dispersion-length product),")
print("the flatter the density; at the 0.3 THz working detune all three")
print("fibers sit within a few percent of the peak, so the pair rate is")
print("set by gamma*P0*L alone.")

print()
print("Raman noise at 0.3 THz for the DSF entry, Stokes vs anti-Stokes:")
fiber = FIBERS[0]
pump = PumpSpec(0.2 / (fiber.gamma * fiber.length), 1552.75, 1e6, 50e-12)
for temperature in (77.0, 173.0, 300.0):
    env_t = Environment(temperature)
    stokes, antistokes = raman_spectral_densities(fiber, pump, 0.3e12, env_t)
    occupation = bose_occupation(0.3e12, env_t)
    print(
        f"  T={temperature:5.0f} K: occupation={occupation:7.3f}  "
        f"stokes={stokes:.5f}  antistokes={antistokes:.5f}  "
        f"difference={stokes - antistokes:.5f} (temperature-independent)"
    )

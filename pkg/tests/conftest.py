import pytest

from fiberpairs import ChannelSpec, DetectorPair, Environment, FiberSpec, PumpSpec

# The three fiber types under study, in conventional fiber units
# (gamma and raman_gain in 1/(W km), dispersion in ps/(nm km), length km).
# HNMSF raman_gain is the value calibrated from a 60.37% preparation
# efficiency at 0.1 pairs/pulse and 300 K; DSF/HNLF gains are placeholders
# for tests that only exercise scaling behavior.
DSF = FiberSpec(gamma=3.0, raman_gain=0.5, dispersion=0.05, length=1.0,
                zero_dispersion_wavelength=1549.0, label="DSF")
HNLF = FiberSpec(gamma=11.1, raman_gain=0.8, dispersion=0.076, length=0.5,
                 zero_dispersion_wavelength=1548.0, label="HNLF")
HNMSF = FiberSpec(gamma=66.7, raman_gain=0.4305212326493659, dispersion=8.65, length=0.025,
                  zero_dispersion_wavelength=1564.1, label="HNMSF")

PUMP_WAVELENGTH = 1552.75  # nm
PULSE_DURATION = 50e-12  # s
REP_RATE = 1e6  # Hz

DETUNE = 0.3e12  # Hz
BANDWIDTH = 50e9  # Hz
WINDOW = 50e-12  # s


def pump_for(fiber: FiberSpec, gamma_p0_l: float = 0.2) -> PumpSpec:
    """Pump whose peak power gives the requested nonlinear phase gamma*P0*L."""
    return PumpSpec(
        peak_power=gamma_p0_l / (fiber.gamma * fiber.length),
        wavelength=PUMP_WAVELENGTH,
        repetition_rate=REP_RATE,
        pulse_duration=PULSE_DURATION,
    )


def channel(side: str, efficiency: float = 0.2, dark_prob: float = 1e-4,
            detune: float = DETUNE) -> ChannelSpec:
    return ChannelSpec(detune=detune, bandwidth=BANDWIDTH, window=WINDOW,
                       efficiency=efficiency, dark_prob=dark_prob, side=side)


@pytest.fixture
def env300():
    return Environment(temperature=300.0)


@pytest.fixture
def env173():
    return Environment(temperature=173.0)


@pytest.fixture
def signal_channel():
    return channel("signal")


@pytest.fixture
def idler_channel():
    return channel("idler")


@pytest.fixture
def detector(signal_channel, idler_channel):
    return DetectorPair(signal=signal_channel, idler=idler_channel)

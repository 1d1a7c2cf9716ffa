import numpy as np
import pytest

from lensdelay import LensSignalSpec, PhotonSet, WavePacketSpec, sample_photons
from lensdelay.rng import stream


@pytest.fixture(scope="session")
def packet():
    """Standard dimensionless packet: omega0*tc = 50, T/tc = 1e4."""
    return WavePacketSpec(omega0=50.0, tc=1.0, T=1e4)


@pytest.fixture(scope="session")
def small_packet():
    """Cheaper search window for grid-heavy tests: T/tc = 1e3."""
    return WavePacketSpec(omega0=50.0, tc=1.0, T=1e3)


def mixed_photons(packet, delta_t, A, Q, n_sig, rng, delta_fs=0.0):
    """Exact-count signal+background mixture used across tests."""
    parts = []
    if n_sig:
        lens = LensSignalSpec.for_packet(packet, delta_t, A=A, delta_fs=delta_fs, Q=1.0)
        parts.append(sample_photons(packet, lens, n_sig, rng))
    n_bg = int(round(n_sig * (1.0 - Q) / Q)) if Q < 1.0 else 0
    if n_bg:
        bg = LensSignalSpec.for_packet(packet, delta_t, A=A, Q=0.0)
        parts.append(sample_photons(packet, bg, n_bg, rng))
    return parts[0] if len(parts) == 1 else PhotonSet.concatenate(parts)


@pytest.fixture(scope="session")
def rng_factory():
    return stream

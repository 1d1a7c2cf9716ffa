"""Discretized, aliased version of the frequency channel (Algorithm 2).

The photon is first localized to a 1/tc-wide carrier band by a
non-demolition measurement, then stored in only n_s = T/tau_s temporal
bins and read out through a Fourier transform.  The carrier folds to the
aliased frequency f_alias = (omega/2pi) mod (n_s/T) and the measured
integer index k follows

    p_d(k) ∝ |alpha_hat[k + f_alias T]|^2
             * (1 + gamma cos(dt (omega - 2 pi f_alias - 2 pi k/T))),

so the score f_d(tau) = sum_j cos(tau (omega_j - 2 pi f_alias_j - 2 pi k_j/T))
carries the same delay information as the exact-frequency score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimators import CandidateGrid, EstimationResult, build_grid, estimate_alg1
from .phasefold import fold_phase, fold_product_phase
from .rng import RngStream
from .signal_model import LensSignalSpec, PhotonSet, WavePacketSpec

__all__ = [
    "UndersampleSpec",
    "AliasedSample",
    "AliasedSet",
    "alias_frequency",
    "aliased_pdf",
    "sample_aliased",
    "sample_aliased_batch",
    "aliased_to_effective_frequencies",
    "estimate_alg2",
]


@dataclass(frozen=True)
class UndersampleSpec:
    """Temporal discretization: n_s bins of width tau_s = T/n_s, plus the
    1/tc carrier localization width of the non-demolition pre-measurement."""

    n_s: int
    tau_s: float
    band_width: float

    def __post_init__(self):
        if self.n_s < 2 or self.tau_s <= 0 or self.band_width <= 0:
            raise ValueError("invalid undersampling spec")

    @classmethod
    def for_packet(cls, packet: WavePacketSpec, bins_per_tc: int = 10) -> "UndersampleSpec":
        """Default discretization tau_s = tc/10 (tau_s must divide T)."""
        n_s = int(round(bins_per_tc * packet.T / packet.tc))
        return cls(n_s=n_s, tau_s=packet.T / n_s, band_width=1.0 / packet.tc)

    @property
    def sample_rate(self) -> float:
        """n_s / T in Hz (the alias folding period of ordinary frequency)."""
        return 1.0 / self.tau_s


@dataclass(frozen=True)
class AliasedSample:
    """One undersampled readout: integer frequency index k plus the exact
    band-center carrier known from the non-demolition localization."""

    k: int
    omega_carrier: float


@dataclass
class AliasedSet:
    """Batch of aliased readouts."""

    ks: np.ndarray
    carriers: np.ndarray

    def __post_init__(self):
        self.ks = np.asarray(self.ks, dtype=np.int64)
        self.carriers = np.asarray(self.carriers, dtype=float)
        if self.ks.shape != self.carriers.shape:
            raise ValueError("ks and carriers must align")

    def __len__(self):
        return self.ks.size

    def sample(self, i: int) -> AliasedSample:
        return AliasedSample(int(self.ks[i]), float(self.carriers[i]))


def alias_frequency(omega_carrier: float, spec: UndersampleSpec, T: float) -> float:
    """Aliased ordinary frequency (omega/2pi) mod (n_s/T), in Hz."""
    if omega_carrier <= 0 or T <= 0:
        raise ValueError("need positive carrier and window")
    rate = spec.n_s / T
    return float(np.mod(omega_carrier / (2.0 * math.pi), rate))


def _carrier_fold(omega_carrier: float, spec: UndersampleSpec, T: float):
    """Return (M, f_alias) with omega/2pi = M * (n_s/T) + f_alias exactly."""
    rate = spec.n_s / T
    q, r = divmod(omega_carrier / (2.0 * math.pi), rate)
    return int(q), float(r)


def _fringe_phases(ks, delta_t: float, omega_carrier: float, spec: UndersampleSpec,
                   T: float) -> np.ndarray:
    """delta_t * (omega - 2 pi f_alias - 2 pi k / T) folded mod 2 pi."""
    f_alias = alias_frequency(omega_carrier, spec, T)
    base = fold_product_phase(omega_carrier, delta_t) - fold_product_phase(
        2.0 * math.pi * f_alias, delta_t
    )
    return fold_phase(base - (2.0 * math.pi * delta_t / T) * np.asarray(ks, dtype=float))


def _envelope_mass(ks, omega_carrier: float, spec: UndersampleSpec, packet: WavePacketSpec,
                   T: float) -> np.ndarray:
    """|alpha_hat[k + f_alias T]|^2: wrapped Gaussian envelope over the k axis."""
    f_alias = alias_frequency(omega_carrier, spec, T)
    span = 2.0 * math.pi * spec.n_s / T
    offset = 2.0 * math.pi * (np.asarray(ks, dtype=float) + f_alias * T) / T
    wrapped = offset - span * np.rint(offset / span)
    return np.exp(-((packet.tc * wrapped) ** 2))


def aliased_pdf(k, delta_t: float, omega_carrier: float, spec: UndersampleSpec,
                packet: WavePacketSpec, gamma: float = 1.0) -> np.ndarray | float:
    """Probability mass of index k given the delay and the photon's band
    carrier, normalized over k = 0..n_s-1.

    gamma scales the fringe contrast (1 for equal two-path magnification).
    """
    T = packet.T
    k_arr = np.atleast_1d(np.asarray(k))
    if np.any(k_arr < 0) or np.any(k_arr >= spec.n_s) or not np.issubdtype(k_arr.dtype, np.integer):
        raise ValueError(f"k must be integers in [0, {spec.n_s})")
    all_k = np.arange(spec.n_s)
    mass = _envelope_mass(all_k, omega_carrier, spec, packet, T) * (
        1.0 + gamma * np.cos(_fringe_phases(all_k, delta_t, omega_carrier, spec, T))
    )
    mass /= mass.sum()
    out = mass[k_arr]
    return out if np.ndim(k) else float(out[0])


def _band_center(omega: np.ndarray, packet: WavePacketSpec, spec: UndersampleSpec) -> np.ndarray:
    """Quantize frequencies to the centers of the 1/tc localization bands."""
    return packet.omega0 + np.rint((omega - packet.omega0) / spec.band_width) * spec.band_width


def _window_ks(omega_carrier: float, spec: UndersampleSpec, packet: WavePacketSpec) -> np.ndarray:
    """Indices of the k-bins inside the 8/tc envelope support (wrapped)."""
    f_alias = alias_frequency(omega_carrier, spec, packet.T)
    center = -f_alias * packet.T  # envelope peak of alpha_hat[k + f_alias T]
    halfwidth = int(math.ceil(8.0 / packet.tc / (2.0 * math.pi / packet.T)))
    if 2 * halfwidth + 1 >= spec.n_s:
        return np.arange(spec.n_s)
    base = int(round(center))
    return np.mod(base + np.arange(-halfwidth, halfwidth + 1), spec.n_s)


def _window_pmf(delta_t: float | None, omega_carrier: float, spec: UndersampleSpec,
                packet: WavePacketSpec, gamma: float):
    """(window indices, pmf over window); mass outside is < exp(-64)."""
    ks = _window_ks(omega_carrier, spec, packet)
    mass = _envelope_mass(ks, omega_carrier, spec, packet, packet.T)
    if delta_t is not None:
        mass = mass * (
            1.0 + gamma * np.cos(_fringe_phases(ks, delta_t, omega_carrier, spec, packet.T))
        )
    return ks, mass / mass.sum()


def sample_aliased_batch(packet: WavePacketSpec, lens: LensSignalSpec,
                         spec: UndersampleSpec, n: int, rng: RngStream) -> AliasedSet:
    """Draw n undersampled readouts.

    Signal photons (probability Q): per-photon delay d ~ Normal(delta_t,
    delta_fs), carrier band from the envelope, then k from the aliased
    fringe pmf.  Background photons draw k from the envelope mass alone.
    """
    lens.validate_against(packet)
    if n < 1:
        raise ValueError("need at least one photon")
    if lens.Q >= 1.0:
        mask = np.ones(n, dtype=bool)
    elif lens.Q <= 0.0:
        mask = np.zeros(n, dtype=bool)
    else:
        mask = rng.random(n) < lens.Q

    nu_env = rng.normal(packet.omega0, packet.envelope_sigma, size=n)
    carriers = _band_center(nu_env, packet, spec)
    ks = np.empty(n, dtype=np.int64)
    u = rng.random(n)

    gamma = lens.gamma
    if lens.delta_fs > 0.0:
        # per-photon delays make every signal pmf distinct
        delays = rng.normal(lens.delta_t, lens.delta_fs, size=n)
        for i in range(n):
            win, pmf = _window_pmf(delays[i] if mask[i] else None, carriers[i], spec,
                                   packet, gamma)
            ks[i] = win[min(np.searchsorted(np.cumsum(pmf), u[i]), win.size - 1)]
    else:
        for carrier in np.unique(carriers):
            for is_signal in (True, False):
                sel = (carriers == carrier) & (mask == is_signal)
                if not sel.any():
                    continue
                win, pmf = _window_pmf(lens.delta_t if is_signal else None, carrier, spec,
                                       packet, gamma)
                idx = np.minimum(np.searchsorted(np.cumsum(pmf), u[sel]), win.size - 1)
                ks[sel] = win[idx]
    return AliasedSet(ks, carriers)


def sample_aliased(packet: WavePacketSpec, lens: LensSignalSpec, spec: UndersampleSpec,
                   rng: RngStream) -> AliasedSample:
    return sample_aliased_batch(packet, lens, spec, 1, rng).sample(0)


def aliased_to_effective_frequencies(samples: AliasedSet | list, spec: UndersampleSpec,
                                     packet: WavePacketSpec) -> PhotonSet:
    """Map readouts to the effective frequencies
    nu_hat_j = omega_j - 2 pi f_alias_j - 2 pi k_j / T entering the
    discretized score, as a PhotonSet for the shared grid scorer."""
    if isinstance(samples, AliasedSample):
        samples = [samples]
    if not isinstance(samples, AliasedSet):
        samples = list(samples)
        if not samples:
            raise ValueError("empty sample list")
        samples = AliasedSet(
            np.array([s.k for s in samples]), np.array([s.omega_carrier for s in samples])
        )
    if len(samples) == 0:
        raise ValueError("empty sample list")
    T = packet.T
    nu_hat = np.empty(len(samples))
    for i in range(len(samples)):
        m, _ = _carrier_fold(samples.carriers[i], spec, T)
        nu_hat[i] = (2.0 * math.pi / T) * float(m * spec.n_s - int(samples.ks[i]))
    return PhotonSet(packet.omega0, nu_hat - packet.omega0, np.ones(len(samples), dtype=bool))


def effective_carrier(photons: PhotonSet, packet: WavePacketSpec) -> float:
    """Carrier rate of the aliased score's fringe, for the fine-offset scan.

    The discretized score oscillates in tau at the typical |nu_hat|, which
    aliasing can bring far below omega0.  Clamped from below at 2*pi/tc:
    slower fringes are already resolved by the coarse tc spacing.
    """
    center = abs(float(np.median(photons.omegas)))
    return max(center, 2.0 * math.pi / packet.tc)


def estimate_alg2(samples, packet: WavePacketSpec, spec: UndersampleSpec, Q: float,
                  A: float, grid: CandidateGrid | None = None, method: str = "auto",
                  keep_scores: bool = False) -> EstimationResult:
    """Delay estimate from undersampled readouts: same candidate-grid
    shape, threshold and argmax contract as the exact-frequency estimator,
    with the discretized score f_d.  The fine carrier-phase offsets use
    the effective aliased carrier rather than omega0, since that is the
    rate at which f_d oscillates in tau.

    Mirror caveat: the effective frequencies are integer multiples of
    2*pi/T, so f_d(T - tau) = f_d(tau) identically and the readout
    distribution itself is invariant under delta_t -> T - delta_t.  A
    window of length T therefore resolves delays unambiguously only on
    [0, T/2]; both the true delay and its window mirror cross the
    threshold, and the argmax picks between them on numerical noise.
    """
    photons = aliased_to_effective_frequencies(samples, spec, packet)
    if grid is None:
        base = build_grid(packet)
        grid = CandidateGrid(tc=base.tc, omega0=effective_carrier(photons, packet),
                             i_min=base.i_min, i_max=base.i_max)
    return estimate_alg1(photons, packet, Q=Q, A=A, grid=grid, method=method,
                         keep_scores=keep_scores)

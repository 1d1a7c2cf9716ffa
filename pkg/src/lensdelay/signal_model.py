"""Spectral photon model of microlensed light and exact samplers for it.

A lensed photon is a two-path superposition of Gaussian wave packets
(carrier omega0, width tc) separated by the lensing delay.  Measured in
the frequency basis it follows the fringe-modulated density

    p(omega) = (tc/sqrt(pi)) exp(-tc^2 (omega-omega0)^2)
               * [1 + gamma_A * exp(-omega^2 delta_fs^2 / 2) * cos(omega dt)],

where gamma_A encodes the unequal magnification of the two images and the
exponential factor is the finite-source washout.  Background photons carry
the bare envelope only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import RngStream

__all__ = [
    "WavePacketSpec",
    "LensSignalSpec",
    "PhotonSample",
    "PhotonSet",
    "gamma_factor",
    "channel_pdf",
    "channel_cdf",
    "sample_photon",
    "sample_photons",
    "score_expectation",
]


def gamma_factor(A: float) -> float:
    """Fringe modulation depth gamma_A = sqrt(A^2 - 1)/A of a lens with
    total magnification A.

    Equals 0 for A = 1 (single image, no fringe) and tends to 1 as the two
    images approach equal brightness (A -> inf).
    """
    if A < 1.0:
        raise ValueError(f"magnification must be >= 1, got {A}")
    if math.isinf(A):
        return 1.0
    return math.sqrt(A * A - 1.0) / A


@dataclass(frozen=True)
class WavePacketSpec:
    """Gaussian wave-packet model of the received photons.

    Parameters
    ----------
    omega0 : float
        Carrier angular frequency (rad/s).
    tc : float
        Coherence time, i.e. temporal width of the packet (s).  Sets the
        delay-estimation precision unit.
    T : float
        Upper limit of the delay search window (s).
    """

    omega0: float
    tc: float
    T: float

    def __post_init__(self):
        if not (self.omega0 > 0 and self.tc > 0 and self.T > 0):
            raise ValueError("omega0, tc and T must all be positive")
        if self.T / self.tc < 10:
            raise ValueError(f"search window too small: T/tc = {self.T / self.tc:g} < 10")
        if self.omega0 * self.tc < 10:
            raise ValueError(
                f"carrier must oscillate many times per packet: omega0*tc = "
                f"{self.omega0 * self.tc:g} < 10"
            )

    @property
    def envelope_sigma(self) -> float:
        """Std of the frequency-domain envelope |alpha~|^2, 1/(sqrt(2) tc)."""
        return 1.0 / (math.sqrt(2.0) * self.tc)


@dataclass(frozen=True)
class LensSignalSpec:
    """True lensing signal parameters of a simulated source.

    delta_t is the time delay, A the total magnification, delta_fs the
    finite-source delay spread, and Q the fraction of received photons that
    actually carry the two-path state (the rest are background).
    """

    delta_t: float
    A: float = 1.34
    delta_fs: float = 0.0
    Q: float = 1.0

    def __post_init__(self):
        if self.A < 1.0:
            raise ValueError(f"magnification must be >= 1, got {self.A}")
        if not 0.0 <= self.Q <= 1.0:
            raise ValueError(f"signal fraction must be in [0, 1], got {self.Q}")
        if self.delta_fs < 0.0:
            raise ValueError("finite-source spread must be >= 0")
        if self.delta_t <= 0.0:
            raise ValueError("delay must be positive")

    @property
    def gamma(self) -> float:
        return gamma_factor(self.A)

    @classmethod
    def for_packet(cls, packet: WavePacketSpec, delta_t: float, A: float = 1.34,
                   delta_fs: float = 0.0, Q: float = 1.0) -> "LensSignalSpec":
        """Validated constructor: rejects delays within 5*tc of 0 or T,
        where the central tau->0 peak of the fringe transform contaminates
        estimation."""
        spec = cls(delta_t=delta_t, A=A, delta_fs=delta_fs, Q=Q)
        spec.validate_against(packet)
        return spec

    def validate_against(self, packet: WavePacketSpec) -> None:
        if not (5.0 * packet.tc <= self.delta_t <= packet.T - 5.0 * packet.tc):
            raise ValueError(
                f"delay {self.delta_t:g} outside admissible range "
                f"[{5 * packet.tc:g}, {packet.T - 5 * packet.tc:g}]"
            )


@dataclass(frozen=True)
class PhotonSample:
    """One frequency-basis measurement outcome.

    ``omega`` is the measured angular frequency; ``origin`` tags the
    simulation ground truth ("signal" or "background").  ``carrier`` and
    ``delta`` optionally carry the (reference carrier, offset) split used
    for extended-precision phase evaluation in physical units.
    """

    omega: float
    origin: str
    carrier: float | None = None
    delta: float | None = None


@dataclass
class PhotonSet:
    """Batch of photon samples stored as arrays.

    ``omegas[i] = carrier_ref + deltas[i]`` exactly; keeping the split
    avoids losing fringe phase precision when omega ~ 1e15 rad/s.
    """

    carrier_ref: float
    deltas: np.ndarray
    signal_mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.deltas = np.asarray(self.deltas, dtype=float)
        self.signal_mask = np.asarray(self.signal_mask, dtype=bool)

    def __len__(self) -> int:
        return self.deltas.size

    @property
    def omegas(self) -> np.ndarray:
        return self.carrier_ref + self.deltas

    @property
    def n_signal(self) -> int:
        return int(self.signal_mask.sum())

    def sample(self, i: int) -> PhotonSample:
        return PhotonSample(
            omega=float(self.carrier_ref + self.deltas[i]),
            origin="signal" if self.signal_mask[i] else "background",
            carrier=self.carrier_ref,
            delta=float(self.deltas[i]),
        )

    def __iter__(self):
        return (self.sample(i) for i in range(len(self)))

    @staticmethod
    def concatenate(sets: list["PhotonSet"]) -> "PhotonSet":
        ref = sets[0].carrier_ref
        deltas = np.concatenate([s.deltas + (s.carrier_ref - ref) for s in sets])
        mask = np.concatenate([s.signal_mask for s in sets])
        return PhotonSet(ref, deltas, mask)


def as_photon_set(samples) -> PhotonSet:
    """Normalize list-of-PhotonSample / ndarray-of-omega / PhotonSet input."""
    if isinstance(samples, PhotonSet):
        if len(samples) == 0:
            raise ValueError("empty sample list")
        return samples
    if not isinstance(samples, np.ndarray):
        samples = list(samples)
        if not samples:
            raise ValueError("empty sample list")
        if isinstance(samples[0], PhotonSample):
            ref = samples[0].carrier if samples[0].carrier is not None else samples[0].omega
            deltas = np.array(
                [s.delta if (s.delta is not None and s.carrier == ref) else s.omega - ref
                 for s in samples]
            )
            mask = np.array([s.origin == "signal" for s in samples])
            return PhotonSet(ref, deltas, mask)
    om = np.asarray(samples, dtype=float)
    if om.size == 0:
        raise ValueError("empty sample list")
    ref = float(om.mean())
    return PhotonSet(ref, om - ref, np.ones(om.size, dtype=bool))


def _envelope(omega, packet: WavePacketSpec):
    tc = packet.tc
    return tc / math.sqrt(math.pi) * np.exp(-(tc * (omega - packet.omega0)) ** 2)


def channel_pdf(omega, packet: WavePacketSpec, lens: LensSignalSpec):
    """Probability density (s/rad) of measuring angular frequency omega
    for a signal photon.

    Implements the fringe-modulated Gaussian with magnification depth
    gamma_A and finite-source suppression exp(-omega^2 delta_fs^2/2); the
    density normalizes to 1 up to terms exp(-delta_t^2/(4 tc^2)), which are
    below 1e-6 for delta_t >= 8 tc.
    """
    lens.validate_against(packet)
    omega = np.asarray(omega, dtype=float)
    g = lens.gamma
    mod = 1.0 + g * np.exp(-0.5 * (omega * lens.delta_fs) ** 2) * np.cos(omega * lens.delta_t)
    out = _envelope(omega, packet) * mod
    return out if out.ndim else float(out)


def channel_cdf(packet: WavePacketSpec, lens: LensSignalSpec, n_grid: int | None = None):
    """Numeric CDF of channel_pdf on a fringe-resolving grid.

    Returns (omega_grid, cdf).  Used by goodness-of-fit tests and the
    inverse-CDF reference sampler.
    """
    span = 8.0 / packet.tc
    # >= 20 points per fringe period 2*pi/delta_t, >= 20 per envelope sigma
    d = min(2 * math.pi / lens.delta_t, 1.0 / packet.tc) / 20.0
    n = n_grid or int(2 * span / d) + 1
    om = np.linspace(packet.omega0 - span, packet.omega0 + span, n)
    pdf = channel_pdf(om, packet, lens)
    cdf = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) * 0.5 * np.diff(om))])
    cdf /= cdf[-1]
    return om, cdf


def _rejection_fringe(rng: RngStream, count: int, omega0: float, sigma: float,
                      support_halfwidth: float, accept_probability) -> np.ndarray:
    """Draw `count` frequencies from envelope * accept_probability by
    rejection against the Gaussian envelope, truncated to
    |omega - omega0| <= support_halfwidth.

    accept_probability(omega_array) must return values in [0, 1]; the
    fringe forms used here keep the acceptance rate >= 1/2 (lensing) or
    >= 1/N (array), so the loop terminates quickly.  Draw order is
    deterministic for a given stream: each pass consumes one normal and
    one uniform block of the remaining size.
    """
    out = np.empty(count)
    got = 0
    while got < count:
        k = count - got
        prop = rng.normal(omega0, sigma, size=k)
        u = rng.random(size=k)
        ok = (u < accept_probability(prop)) & (np.abs(prop - omega0) <= support_halfwidth)
        acc = prop[ok]
        out[got : got + acc.size] = acc
        got += acc.size
    return out


def sample_photons(packet: WavePacketSpec, lens: LensSignalSpec, n: int,
                   rng: RngStream) -> PhotonSet:
    """Draw n photons from the lensed-source model.

    With probability Q a photon is a signal photon: a per-photon delay
    d ~ Normal(delta_t, delta_fs) is drawn (the finite-source picture of
    per-region delays), then omega by rejection with acceptance
    (1 + gamma_A cos(omega d))/2 against the envelope.  Otherwise it is a
    background photon drawn from the bare envelope, the modulation having
    been washed out by the host-star finite-source effect.
    """
    lens.validate_against(packet)
    if n < 1:
        raise ValueError("need at least one photon")
    sig = packet.envelope_sigma
    g = lens.gamma

    if lens.Q >= 1.0:
        mask = np.ones(n, dtype=bool)
    elif lens.Q <= 0.0:
        mask = np.zeros(n, dtype=bool)
    else:
        mask = rng.random(n) < lens.Q
    ns = int(mask.sum())

    halfwidth = 8.0 / packet.tc  # Gaussian support at working precision
    omegas = np.empty(n)
    if ns:
        if lens.delta_fs > 0.0:
            # per-photon delays pair with pending rejection slots in order
            d = rng.normal(lens.delta_t, lens.delta_fs, size=ns)
            drawn = np.empty(ns)
            got = 0
            pending = d
            while got < ns:
                k = ns - got
                prop = rng.normal(packet.omega0, sig, size=k)
                u = rng.random(size=k)
                ok = (u < 0.5 * (1.0 + g * np.cos(prop * pending))) & (
                    np.abs(prop - packet.omega0) <= halfwidth
                )
                acc = prop[ok]
                drawn[got : got + acc.size] = acc
                got += acc.size
                pending = pending[~ok]
            omegas[mask] = drawn
        else:
            dt = lens.delta_t
            omegas[mask] = _rejection_fringe(
                rng, ns, packet.omega0, sig, halfwidth,
                lambda w: 0.5 * (1.0 + g * np.cos(w * dt)),
            )
    nb = n - ns
    if nb:
        bg = rng.normal(packet.omega0, sig, size=nb)
        bad = np.abs(bg - packet.omega0) > halfwidth
        while bad.any():
            bg[bad] = rng.normal(packet.omega0, sig, size=int(bad.sum()))
            bad = np.abs(bg - packet.omega0) > halfwidth
        omegas[~mask] = bg

    return PhotonSet(packet.omega0, omegas - packet.omega0, mask)


def sample_photon(packet: WavePacketSpec, lens: LensSignalSpec, rng: RngStream) -> PhotonSample:
    """Draw a single photon; see sample_photons."""
    return sample_photons(packet, lens, 1, rng).sample(0)


def score_expectation(tau, packet: WavePacketSpec, lens: LensSignalSpec):
    """Expected per-photon score E[cos(nu * tau)] at candidate delay tau.

    Closed form: the envelope's central term exp(-tau^2/4tc^2) cos(omega0 tau)
    (negligible for tau >= 5 tc) plus the finite-source-suppressed fringe
    term, which peaks at tau = delta_t with height Q * gamma_A / 2.
    """
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0) or np.any(tau > packet.T):
        raise ValueError("tau must lie in [0, T]")
    tc, w0 = packet.tc, packet.omega0
    denom = 1.0 + lens.delta_fs**2 / (2.0 * tc**2)
    supp = math.exp(-0.5 * (w0 * lens.delta_fs) ** 2 / denom) / math.sqrt(denom)

    def fringe(x):
        return 0.5 * supp * np.exp(-(x**2) / (4.0 * tc**2) / denom) * np.cos(w0 * x / denom)

    central = np.exp(-(tau**2) / (4.0 * tc**2)) * np.cos(w0 * tau)
    out = central + lens.Q * lens.gamma * (fringe(lens.delta_t - tau) + fringe(lens.delta_t + tau))
    return out if out.ndim else float(out)

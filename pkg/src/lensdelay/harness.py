"""Experiment driver and persistence: seeded trial sweeps that reproduce
the quantitative results desk-scale, with CSV/JSON outputs.

Per-trial randomness derives from (master seed, experiment id, trial
index), so every sweep is reproducible bit-for-bit and trials are
reorderable; all reports embed the config hash and master seed.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .estimators import (
    CandidateGrid,
    FlareBatch,
    build_grid,
    estimate_alg1,
    estimate_multiflare,
    mz_scan_estimate,
    multiflare_scores,
    required_flares,
)
from .rng import RngStream, stream
from .signal_model import LensSignalSpec, PhotonSet, WavePacketSpec, sample_photons
from .undersampling import UndersampleSpec, estimate_alg2, sample_aliased_batch

__all__ = [
    "ExperimentConfig",
    "ConfidenceCurve",
    "wilson_interval",
    "run_confidence_curve",
    "run_flares_needed",
    "run_single_demo",
    "run_alg2_compare",
    "run_mz_compare",
    "make_flare_batches",
    "crossing_point",
    "write_csv",
    "write_report",
]

EXPERIMENT_KINDS = (
    "confidence_curve",
    "flares_needed",
    "single_demo",
    "alg2_compare",
    "mz_compare",
    "dust_sweep",
    "capacity",
    "array_demo",
)


@dataclass
class ExperimentConfig:
    """One experiment: kind, model parameters, trial count, master seed,
    output path.  params carries the kind-specific knobs (packet ratios,
    Q, A, sweep values...); defaults live in each runner."""

    kind: str
    trials: int = 500
    seed: int = 0
    out: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")

    def config_hash(self) -> str:
        blob = json.dumps(
            {"kind": self.kind, "trials": self.trials, "seed": self.seed,
             "params": self.params},
            sort_keys=True, default=str,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    @property
    def experiment_id(self) -> int:
        return int(self.config_hash()[:8], 16)

    def trial_stream(self, trial: int, arm: int = 0) -> RngStream:
        return stream(self.seed, self.experiment_id, trial, arm)

    def packet(self) -> WavePacketSpec:
        tc = float(self.params.get("tc", 1.0))
        return WavePacketSpec(
            omega0=float(self.params.get("omega0_tc", 50.0)) / tc,
            tc=tc,
            T=float(self.params.get("T_over_tc", 1e4)) * tc,
        )


@dataclass
class ConfidenceCurve:
    """Sweep result rows: (n_sig, success_rate, ci_low, ci_high, trials)."""

    n_sig: list[int]
    success_rate: list[float]
    ci_low: list[float]
    ci_high: list[float]
    trials: int

    def rows(self):
        return list(zip(self.n_sig, self.success_rate, self.ci_low, self.ci_high,
                        [self.trials] * len(self.n_sig)))


def wilson_interval(successes: int, n: int, z: float = 1.959963984540054):
    """95% Wilson score interval for a binomial rate."""
    if n < 1:
        raise ValueError("need at least one trial")
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, min(center - half, p)), min(1.0, max(center + half, p))


def _draw_delay(rng: RngStream, packet: WavePacketSpec, upper_frac: float = 1.0,
                margin: float = 0.0) -> float:
    lo = 5.0 * packet.tc + margin
    hi = upper_frac * packet.T - 5.0 * packet.tc - margin
    return rng.uniform(lo, hi)


def _mixed_photons(packet: WavePacketSpec, delta_t: float, A: float, Q: float,
                   n_sig: int, rng: RngStream, delta_fs: float = 0.0) -> PhotonSet:
    """Exact-count mixture: n_sig signal photons plus the background count
    implied by Q (n_bg = n_sig (1-Q)/Q, rounded)."""
    parts = []
    if n_sig:
        lens = LensSignalSpec.for_packet(packet, delta_t, A=A, delta_fs=delta_fs, Q=1.0)
        parts.append(sample_photons(packet, lens, n_sig, rng))
    n_bg = int(round(n_sig * (1.0 - Q) / Q)) if Q < 1.0 else 0
    if n_bg:
        bg_lens = LensSignalSpec.for_packet(packet, delta_t, A=A, Q=0.0)
        parts.append(sample_photons(packet, bg_lens, n_bg, rng))
    if not parts:
        raise ValueError("no photons to draw")
    return parts[0] if len(parts) == 1 else PhotonSet.concatenate(parts)


def run_confidence_curve(cfg: ExperimentConfig) -> ConfidenceCurve:
    """Success rate of the frequency-basis estimator vs signal photons per
    flare; success = detected and |tau_hat - delta_t| <= tc, delay drawn
    uniformly from the admissible window each trial."""
    packet = cfg.packet()
    Q = float(cfg.params.get("Q", 1.0))
    A = float(cfg.params.get("A", 1.34))
    n_sig_list = [int(v) for v in cfg.params.get("n_sig_list", (60, 90, 120, 150, 180, 240))]
    grid = build_grid(packet)
    rates, los, his = [], [], []
    for j, n_sig in enumerate(n_sig_list):
        wins = 0
        for t in range(cfg.trials):
            rng = cfg.trial_stream(t, arm=j)
            dt = _draw_delay(rng, packet)
            photons = _mixed_photons(packet, dt, A, Q, n_sig, rng)
            result = estimate_alg1(photons, packet, Q=Q, A=A, grid=grid)
            wins += result.detected and abs(result.tau_hat - dt) <= packet.tc
        lo, hi = wilson_interval(wins, cfg.trials)
        rates.append(wins / cfg.trials)
        los.append(lo)
        his.append(hi)
    curve = ConfidenceCurve(n_sig_list, rates, los, his, cfg.trials)
    if cfg.out:
        write_csv(cfg.out, ["n_sig", "success_rate", "ci_low", "ci_high", "trials"],
                  curve.rows(), cfg)
    return curve


def crossing_point(n_values, rates, target: float) -> float | None:
    """First n at which the (assumed rising) rate curve crosses target,
    by linear interpolation; None if it never does."""
    n_values = np.asarray(n_values, dtype=float)
    rates = np.asarray(rates, dtype=float)
    for i in range(len(rates)):
        if rates[i] >= target:
            if i == 0:
                return float(n_values[0])
            x0, x1 = n_values[i - 1], n_values[i]
            y0, y1 = rates[i - 1], rates[i]
            if y1 == y0:
                return float(x1)
            return float(x0 + (target - y0) * (x1 - x0) / (y1 - y0))
    return None


def make_flare_batches(packet: WavePacketSpec, delta_t0: float, m: int, n_sig: int,
                       n_bg: int, A: float, rng: RngStream,
                       spread: float = 0.25) -> list[FlareBatch]:
    """m flares around a common delay: per-flare delays spread within
    +-spread*tc of delta_t0 but separated pairwise (and from their mean) by
    more than one carrier period, as for flares from different spots of the
    source.

    The separation constraint needs (m-1) carrier periods to fit inside
    the spread; dimensionless multi-flare runs therefore use a fast
    carrier (omega0*tc ~ 2e3), mirroring the optical regime where
    2*pi/omega0 is ~1e-9 tc and the constraint is vacuous.
    """
    tc, w0 = packet.tc, packet.omega0
    period = 2.0 * math.pi / w0
    if m > 1 and (m - 1) * period >= 2.0 * spread * tc:
        raise ValueError(
            f"cannot fit {m} delays separated by 2pi/omega0 = {period:g} "
            f"inside +-{spread:g} tc; increase omega0*tc"
        )
    if m == 1:
        delays = np.array([delta_t0])
    else:
        for _ in range(1000):
            delays = delta_t0 + rng.uniform(-spread * tc, spread * tc, size=m)
            mean = delays.mean()
            gaps = np.abs(delays[:, None] - delays[None, :])[np.triu_indices(m, 1)]
            if np.all(gaps > period) and np.all(np.abs(delays - mean) > period) and np.all(
                np.abs(delays - mean) < tc
            ):
                break
        else:
            raise RuntimeError("could not draw admissible flare delays")
    batches = []
    for dt_i in delays:
        parts = []
        if n_sig:
            lens = LensSignalSpec.for_packet(packet, float(dt_i), A=A, Q=1.0)
            parts.append(sample_photons(packet, lens, n_sig, rng))
        if n_bg:
            bg = LensSignalSpec.for_packet(packet, float(dt_i), A=A, Q=0.0)
            parts.append(sample_photons(packet, bg, n_bg, rng))
        photons = parts[0] if len(parts) == 1 else PhotonSet.concatenate(parts)
        batches.append(FlareBatch(samples=photons, true_delta_t=float(dt_i)))
    return batches


def _multiflare_success_rate(cfg: ExperimentConfig, packet: WavePacketSpec,
                             grid: CandidateGrid, m: int, n_sig: int, n_bg: int,
                             A: float, Q: float, arm: int) -> float:
    wins = 0
    for t in range(cfg.trials):
        rng = cfg.trial_stream(t, arm=arm)
        dt0 = _draw_delay(rng, packet, margin=packet.tc)  # room for flare jitter
        batches = make_flare_batches(packet, dt0, m, n_sig, n_bg, A, rng)
        mean_dt = float(np.mean([b.true_delta_t for b in batches]))
        result = estimate_multiflare(batches, packet, Q=Q, A=A, grid=grid)
        wins += result.detected and abs(result.tau_hat - mean_dt) <= packet.tc
    return wins / cfg.trials


def run_flares_needed(cfg: ExperimentConfig) -> list[tuple[int, int, int]]:
    """Smallest flare count m whose Monte Carlo success rate reaches the
    target confidence, per n_sig, next to the analytic sufficient bound.

    m is found by doubling then bisection, capped at m_cap.
    """
    cfg.params.setdefault("omega0_tc", 2000.0)  # see make_flare_batches note
    packet = cfg.packet()
    Q = float(cfg.params.get("Q", 0.4))
    A = float(cfg.params.get("A", 1.34))
    confidence = float(cfg.params.get("confidence", 0.95))
    m_cap = int(cfg.params.get("m_cap", 512))
    n_sig_list = [int(v) for v in cfg.params.get("n_sig_list", (64, 100, 150, 250, 426))]
    grid = build_grid(packet)
    rows = []
    for j, n_sig in enumerate(n_sig_list):
        n_bg = int(round(n_sig * (1.0 - Q) / Q))
        n_per_flare = n_sig + n_bg
        q_eff = n_sig / n_per_flare

        rates: dict[int, float] = {}

        def rate(m: int, _j=j, _n=n_sig, _nb=n_bg, _q=q_eff) -> float:
            if m not in rates:
                rates[m] = _multiflare_success_rate(
                    cfg, packet, grid, m, _n, _nb, A, _q, arm=_j * 1024 + m
                )
            return rates[m]

        hi = 1
        while rate(hi) < confidence and hi < m_cap:
            hi *= 2
        hi = min(hi, m_cap)
        lo = hi // 2 if hi > 1 else 0
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if rate(mid) >= confidence:
                hi = mid
            else:
                lo = mid
        m_required = hi if rate(hi) >= confidence else m_cap
        bound = required_flares(n_sig, q_eff, A, packet.T / packet.tc, confidence)
        rows.append((n_sig, m_required, bound))
    if cfg.out:
        write_csv(cfg.out, ["n_sig", "m_required", "bound_m"], rows, cfg)
    return rows


def run_single_demo(cfg: ExperimentConfig):
    """Combined score trace for the multi-flare demonstration scenario
    (default: 5 flares of 66 signal + 103 background photons around
    1.8e-4 s).  Returns (taus_seconds, G, mean_delay_seconds)."""
    tc_seconds = float(cfg.params.get("tc_seconds", 1e-7))
    cfg.params.setdefault("omega0_tc", 2000.0)
    packet = cfg.packet()
    m = int(cfg.params.get("m", 5))
    n_sig = int(cfg.params.get("n_sig", 66))
    n_bg = int(cfg.params.get("n_bg", 103))
    A = float(cfg.params.get("A", 1.34))
    dt0 = float(cfg.params.get("delta_t0_tc", 1800.0)) * packet.tc
    if m < 1:
        raise ValueError("need at least one flare")
    rng = cfg.trial_stream(int(cfg.params.get("trial", 0)))
    batches = make_flare_batches(packet, dt0, m, n_sig, n_bg, A, rng)
    grid = build_grid(packet)
    G = multiflare_scores(batches, grid)
    taus_seconds = grid.taus * (tc_seconds / packet.tc)
    mean_dt = float(np.mean([b.true_delta_t for b in batches])) * (tc_seconds / packet.tc)
    if cfg.out:
        write_csv(cfg.out, ["tau_s", "score"],
                  list(zip(taus_seconds.tolist(), G.tolist())), cfg)
    return taus_seconds, G, mean_dt


def run_alg2_compare(cfg: ExperimentConfig) -> list[tuple]:
    """Matched success rates of the exact-frequency and undersampled
    estimators at the same operating points.

    Delays are drawn from [5 tc, T/2] and both estimators search that
    half-window: the discretized channel is exactly invariant under
    delta_t -> T - delta_t (window mirror), so only the half-window is
    identifiable for Algorithm 2; Algorithm 1, whose performance is
    delay-independent, is compared on the same draws.
    """
    from .undersampling import AliasedSet, aliased_to_effective_frequencies, effective_carrier

    packet = cfg.packet()
    Q = float(cfg.params.get("Q", 1.0))
    A = float(cfg.params.get("A", 1.34))
    n_sig_list = [int(v) for v in cfg.params.get("n_sig_list", (90, 150, 210))]
    spec = UndersampleSpec.for_packet(packet)
    i_half = int(packet.T / (2 * packet.tc))
    half = CandidateGrid(tc=packet.tc, omega0=packet.omega0, i_min=5, i_max=i_half)
    rows = []
    for j, n_sig in enumerate(n_sig_list):
        wins1 = wins2 = 0
        n_bg = int(round(n_sig * (1.0 - Q) / Q)) if Q < 1.0 else 0
        for t in range(cfg.trials):
            rng = cfg.trial_stream(t, arm=2 * j)
            dt = _draw_delay(rng, packet, upper_frac=0.5)
            photons = _mixed_photons(packet, dt, A, Q, n_sig, rng)
            r1 = estimate_alg1(photons, packet, Q=Q, A=A, grid=half)
            wins1 += r1.detected and abs(r1.tau_hat - dt) <= packet.tc

            rng2 = cfg.trial_stream(t, arm=2 * j + 1)
            lens_sig = LensSignalSpec.for_packet(packet, dt, A=A, Q=1.0)
            readouts = sample_aliased_batch(packet, lens_sig, spec, n_sig, rng2)
            if n_bg:
                lens_bg = LensSignalSpec.for_packet(packet, dt, A=A, Q=0.0)
                bg = sample_aliased_batch(packet, lens_bg, spec, n_bg, rng2)
                readouts = AliasedSet(
                    np.concatenate([readouts.ks, bg.ks]),
                    np.concatenate([readouts.carriers, bg.carriers]),
                )
            eff = aliased_to_effective_frequencies(readouts, spec, packet)
            half2 = CandidateGrid(tc=packet.tc, omega0=effective_carrier(eff, packet),
                                  i_min=5, i_max=i_half)
            r2 = estimate_alg2(readouts, packet, spec, Q=Q, A=A, grid=half2)
            wins2 += r2.detected and abs(r2.tau_hat - dt) <= packet.tc
        lo1, hi1 = wilson_interval(wins1, cfg.trials)
        lo2, hi2 = wilson_interval(wins2, cfg.trials)
        rows.append((n_sig, wins1 / cfg.trials, lo1, hi1, wins2 / cfg.trials, lo2, hi2,
                     cfg.trials))
    if cfg.out:
        write_csv(cfg.out, ["n_sig", "alg1_rate", "alg1_lo", "alg1_hi", "alg2_rate",
                            "alg2_lo", "alg2_hi", "trials"], rows, cfg)
    return rows


def run_mz_compare(cfg: ExperimentConfig) -> dict:
    """Scanning-baseline vs frequency-basis success at the same photon
    budget n = required_photons(...)."""
    from .estimators import required_photons

    packet = cfg.packet()
    Q = float(cfg.params.get("Q", 1.0))
    A = float(cfg.params.get("A", 1.34))
    confidence = float(cfg.params.get("confidence", 0.95))
    budget = int(cfg.params.get(
        "budget", required_photons(packet.T / packet.tc, Q, A, confidence)))
    grid = build_grid(packet)
    wins_alg1 = wins_mz = 0
    for t in range(cfg.trials):
        rng = cfg.trial_stream(t, arm=0)
        dt = _draw_delay(rng, packet)
        n_sig = int(round(budget * Q))
        photons = _mixed_photons(packet, dt, A, Q, n_sig, rng)
        r1 = estimate_alg1(photons, packet, Q=Q, A=A, grid=grid)
        wins_alg1 += r1.detected and abs(r1.tau_hat - dt) <= packet.tc

        rng2 = cfg.trial_stream(t, arm=1)
        lens = LensSignalSpec.for_packet(packet, dt, A=A, Q=Q)
        rmz = mz_scan_estimate(packet, lens, budget, rng2)
        wins_mz += rmz.detected and abs(rmz.tau_hat - dt) <= packet.tc
    report = {
        "budget": budget,
        "alg1_rate": wins_alg1 / cfg.trials,
        "mz_rate": wins_mz / cfg.trials,
        "trials": cfg.trials,
    }
    if cfg.out:
        write_report(cfg.out, report, cfg)
    return report


def write_csv(path, header, rows, cfg: ExperimentConfig | None = None) -> None:
    """CSV with a header row naming every column; config hash and seed ride
    in a leading comment line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        if cfg is not None:
            fh.write(f"# config_hash={cfg.config_hash()} seed={cfg.seed}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_report(path, report: dict, cfg: ExperimentConfig | None = None) -> None:
    """Flat key-value JSON report."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = dict(report)
    if cfg is not None:
        payload["config_hash"] = cfg.config_hash()
        payload["seed"] = cfg.seed
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")

"""Dust extinction as binary-tree coloring: does scattering act like a
beam splitter (coherent amplitude loss) or a random wall (path blocking)?

The cone of rays from a point source to the telescope is discretized into
layers of trapezoids that form a binary tree; each node independently
survives (no dust particle inside) with a layer probability q_k.  The
fraction of leaves whose whole root path survives is the unblocked
fraction of the wave front; its mean gives the loss rate and its variance
decides between the two extinction models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .rng import RngStream

__all__ = [
    "DustModelConfig",
    "TreeTrialResult",
    "layer_survival",
    "loss_rate",
    "variance_bound",
    "simulate_tree",
    "simulate_tree_batch",
    "coherence_offdiag",
]

_MAX_LEAVES = 2**20  # desk-scale cap on the simulated tree


@dataclass(frozen=True)
class DustModelConfig:
    """Dust geometry: particle cross-section length r, telescope size d,
    source distance R, particle number density rho_N (rho_N times a
    trapezoid area is the dimensionless Poisson mean), 2-D or 3-D variance
    counting."""

    r: float
    d: float
    R: float
    rho_N: float
    dims: int = 2

    def __post_init__(self):
        if min(self.r, self.d, self.R) <= 0 or self.rho_N < 0:
            raise ValueError("r, d, R must be positive and rho_N >= 0")
        if self.r >= self.d:
            raise ValueError("particle size must be below telescope size")
        if self.dims not in (2, 3):
            raise ValueError("dims must be 2 or 3")
        n = self.d / self.r
        if abs(n - 2 ** round(math.log2(n))) > 1e-6 * n:
            raise ValueError("d/r must be an integer power of 2")

    @property
    def n_layers(self) -> int:
        return 1 + round(math.log2(self.d / self.r))

    @property
    def n_leaves(self) -> int:
        return round(self.d / self.r)


@dataclass
class TreeTrialResult:
    """One coloring of the tree: fraction of all-green root-to-leaf paths
    and the number of freshly blocked nodes per layer."""

    unblocked_fraction: float
    blocked_per_layer: np.ndarray


def layer_survival(k: int, cfg: DustModelConfig) -> float:
    """Probability q_k that a layer-k trapezoid holds no dust particle.

    q_1 = exp(-r^2 R rho/(2d)); q_k = exp(-3 r^2 R rho 2^(k-4)/d) for
    k >= 2 (trapezoid areas double per layer).
    """
    if not 1 <= k <= cfg.n_layers:
        raise ValueError(f"layer index {k} outside 1..{cfg.n_layers}")
    x = cfg.r**2 * cfg.R * cfg.rho_N / cfg.d
    if k == 1:
        return math.exp(-x / 2.0)
    return math.exp(-3.0 * x * 2.0 ** (k - 4))


def loss_rate(cfg: DustModelConfig) -> float:
    """Photon loss probability: 1 - p_loss = prod_k q_k
    = exp(r^2 R rho/(4d) - 3 r R rho/4), which for r << d is the
    telescope-size-independent exp(-3 r R rho/4)."""
    x = cfg.r * cfg.R * cfg.rho_N
    return 1.0 - math.exp(x * cfg.r / (4.0 * cfg.d) - 0.75 * x)


def variance_bound(cfg: DustModelConfig) -> float:
    """Upper bound on Var(unblocked fraction): per-leaf covariances summed
    along the tree give (1 + log2(d/r)) (1-p_loss)/(d/r) in 2-D and
    (1 + 2 log2(d/r)) (1-p_loss)/(d/r)^2 in 3-D (frustum counting)."""
    log2n = math.log2(cfg.d / cfg.r)
    survival = 1.0 - loss_rate(cfg)
    if cfg.dims == 2:
        return (1.0 + log2n) * survival / (cfg.d / cfg.r)
    return (1.0 + 2.0 * log2n) * survival / (cfg.d / cfg.r) ** 2


def simulate_tree(cfg: DustModelConfig, rng: RngStream) -> TreeTrialResult:
    """Color one tree: each layer-k node survives independently with
    probability q_k; count the leaves whose full root path is green."""
    if cfg.n_leaves > _MAX_LEAVES:
        raise ValueError(f"tree too large: d/r = {cfg.n_leaves} > {_MAX_LEAVES}")
    blocked = np.zeros(cfg.n_layers, dtype=np.int64)
    path_green = np.ones(1, dtype=bool)
    for k in range(1, cfg.n_layers + 1):
        width = 2 ** (k - 1)
        node_green = rng.random(width) < layer_survival(k, cfg)
        blocked[k - 1] = int(np.count_nonzero(path_green & ~node_green))
        path_green = path_green & node_green
        if k < cfg.n_layers:
            path_green = np.repeat(path_green, 2)
    return TreeTrialResult(
        unblocked_fraction=float(np.count_nonzero(path_green)) / cfg.n_leaves,
        blocked_per_layer=blocked,
    )


def simulate_tree_batch(cfg: DustModelConfig, trials: int, rng: RngStream) -> np.ndarray:
    """Unblocked fractions for many independent trees (vectorized over
    trials; same coloring law as simulate_tree)."""
    if cfg.n_leaves > _MAX_LEAVES:
        raise ValueError(f"tree too large: d/r = {cfg.n_leaves} > {_MAX_LEAVES}")
    out = np.empty(trials)
    block = max(1, int(2e7 // max(cfg.n_leaves, 1)))
    done = 0
    while done < trials:
        b = min(block, trials - done)
        green = np.ones((b, 1), dtype=bool)
        for k in range(1, cfg.n_layers + 1):
            width = 2 ** (k - 1)
            node = rng.random((b, width)) < layer_survival(k, cfg)
            green = green & node
            if k < cfg.n_layers:
                green = np.repeat(green, 2, axis=1)
        out[done : done + b] = np.count_nonzero(green, axis=1) / cfg.n_leaves
        done += b
    return out


def simulate_tree_4ary(cfg: DustModelConfig, trials: int, rng: RngStream) -> np.ndarray:
    """3-D spot check: the same coloring process on a 4-ary tree (frustums
    split four ways per layer, d^2/r^2 leaves), with the same per-layer
    survival probabilities so the mean unblocked fraction is unchanged.
    Capped at d/r = 2^10 per axis."""
    if cfg.n_leaves > 2**10:
        raise ValueError("4-ary spot checks are capped at d/r = 2^10 per axis")
    out = np.empty(trials)
    leaves = cfg.n_leaves**2
    block = max(1, int(2e7 // leaves))
    done = 0
    while done < trials:
        b = min(block, trials - done)
        green = np.ones((b, 1), dtype=bool)
        for k in range(1, cfg.n_layers + 1):
            width = 4 ** (k - 1)
            node = rng.random((b, width)) < layer_survival(k, cfg)
            green = green & node
            if k < cfg.n_layers:
                green = np.repeat(green, 4, axis=1)
        out[done : done + b] = np.count_nonzero(green, axis=1) / leaves
        done += b
    return out


def coherence_offdiag(sigma: float, n_grid: int = 200_001) -> float:
    """Off-diagonal coherence g = E[sqrt(x(1-x))] with the path weight
    x = eta^2 ~ Normal(1/2, sigma^2) truncated to [0, 1].

    Equals 1/2 - sigma^2 + O(sigma^4) for small sigma; decays toward 0
    (maximally mixed two-path state) as sigma -> 1/sqrt(2).
    """
    if not 0.0 <= sigma <= 1.0 / math.sqrt(2.0):
        raise ValueError("sigma must be in [0, 1/sqrt(2)]")
    if sigma == 0.0:
        return 0.5
    x = np.linspace(0.0, 1.0, n_grid)
    w = np.exp(-((x - 0.5) ** 2) / (2.0 * sigma**2))
    vals = np.sqrt(np.clip(x * (1.0 - x), 0.0, None))
    return float(integrate.simpson(w * vals, x=x) / integrate.simpson(w, x=x))

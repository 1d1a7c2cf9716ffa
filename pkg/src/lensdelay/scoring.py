"""Phasor-sum evaluation over uniform candidate grids.

Every estimator in the package reduces to sums of the form

    S_w(i) = sum_j c_{w,j} * exp(1j * phi_j * i),   i = 0 .. n_out-1,

with nonuniform per-photon step phases phi_j and a handful of weight rows
(the fine carrier-phase offsets).  Two interchangeable engines are
provided: an exact direct evaluation (reference, O(n * n_out)) and a
Gaussian-gridding type-1 NUFFT (O(n + n_out log n_out)), which makes the
10 T/tc-candidate searches at T/tc = 1e4 run in milliseconds per trial.
The engines agree to better than 1e-9 absolute per unit weight.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import fft as _fft

__all__ = ["phasor_sums"]

_DIRECT_OP_LIMIT = 150_000  # auto switch: below this many products go direct


def _direct(phases: np.ndarray, weights: np.ndarray, n_out: int) -> np.ndarray:
    out = np.empty((weights.shape[0], n_out), dtype=complex)
    # chunk the output axis to bound the (n, chunk) workspace
    chunk = max(1, int(4e6 // max(1, phases.size)))
    folded = np.mod(phases, 2.0 * np.pi)
    for start in range(0, n_out, chunk):
        idx = np.arange(start, min(start + chunk, n_out))
        basis = np.exp(1j * np.outer(folded, idx))
        out[:, idx] = weights @ basis
    return out


def _nufft(phases: np.ndarray, weights: np.ndarray, n_out: int,
           spread_halfwidth: int = 10, oversample: int = 2) -> np.ndarray:
    n_modes = _fft.next_fast_len(max(64, 2 * n_out))
    m_grid = oversample * n_modes
    h = 2.0 * math.pi / m_grid
    tau = math.pi * spread_halfwidth / (n_modes**2 * oversample * (oversample - 0.5))

    x = np.mod(phases, 2.0 * math.pi)
    nearest = np.rint(x / h).astype(np.int64)
    dx = x - h * nearest
    offs = np.arange(-spread_halfwidth, spread_halfwidth + 1)
    kernel = np.exp(-((dx[:, None] - h * offs[None, :]) ** 2) / (4.0 * tau))
    idx = np.mod(nearest[:, None] + offs[None, :], m_grid)

    # spread all weight rows in one pair of bincounts over a (W, n, P) block
    n_w = weights.shape[0]
    rows = (np.arange(n_w, dtype=np.int64) * m_grid)[:, None, None]
    flat_idx = (rows + idx[None, :, :]).ravel()
    vals = (weights[:, :, None] * kernel[None, :, :]).ravel()
    u = (
        np.bincount(flat_idx, weights=vals.real, minlength=n_w * m_grid)
        + 1j * np.bincount(flat_idx, weights=vals.imag, minlength=n_w * m_grid)
    ).reshape(n_w, m_grid)

    modes = np.arange(n_out)
    spectrum = _fft.ifft(u, axis=1, overwrite_x=True)[:, :n_out]
    deconv = (2.0 * math.pi) * np.exp(tau * modes**2) / (2.0 * math.sqrt(math.pi * tau))
    return spectrum * deconv[None, :]


def phasor_sums(phases, weights, n_out: int, method: str = "auto") -> np.ndarray:
    """Evaluate S_w(i) = sum_j weights[w, j] exp(1j * phases[j] * i).

    Parameters
    ----------
    phases : (n,) array
        Per-sample step phases (any real values; folded internally).
    weights : (W, n) or (n,) complex array
        Weight rows; a 1-D array is treated as a single row.
    n_out : int
        Number of output steps i = 0 .. n_out - 1.
    method : {"auto", "direct", "nufft"}
    """
    phases = np.asarray(phases, dtype=float)
    weights = np.atleast_2d(np.asarray(weights, dtype=complex))
    if weights.shape[1] != phases.size:
        raise ValueError("weights and phases disagree on sample count")
    if n_out < 1:
        raise ValueError("n_out must be >= 1")
    if method == "auto":
        method = "direct" if phases.size * n_out <= _DIRECT_OP_LIMIT else "nufft"
    if method == "direct":
        return _direct(phases, weights, n_out)
    if method == "nufft":
        return _nufft(phases, weights, n_out)
    raise ValueError(f"unknown method {method!r}")

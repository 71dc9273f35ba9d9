"""Error metric and baseline estimators: singular value thresholding and the
unsmoothed histogram ablation."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .pipeline import (
    SasConfig,
    apply_permutation,
    block_histogram,
    empirical_degrees,
    kron_upsample,
    sort_permutation,
)
from .tv import NumericalError


def mse(estimate: np.ndarray, truth: np.ndarray) -> float:
    """Mean squared entrywise error (1/n^2) sum (estimate - truth)^2."""
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if estimate.shape != truth.shape:
        raise ValueError(f"shape mismatch: {estimate.shape} vs {truth.shape}")
    return float(((estimate - truth) ** 2).mean())


def usvt_estimate(adj: np.ndarray, threshold_scale: float = 2.02) -> np.ndarray:
    """Universal singular value thresholding on the degree-sorted matrix.

    Nodes are sorted by degree first (same sorting step as the main
    estimator). Entries are then mapped to [-1, 1], which is the range the
    ``threshold_scale * sqrt(n)`` cut is calibrated for (the noise spectral
    norm of a +/-1 matrix is about 2 sqrt(n)); the matrix is reconstructed
    from the components above the cut, mapped back and clipped to [0, 1].
    """
    adj = np.asarray(adj)
    n = adj.shape[0]
    if n < 4:
        raise ValueError(f"need at least 4 nodes, got {n}")
    sorted_adj = apply_permutation(adj, sort_permutation(empirical_degrees(adj))).astype(float)
    scaled = 2.0 * sorted_adj - 1.0
    threshold = threshold_scale * np.sqrt(n)
    try:
        U, s, Vt = np.linalg.svd(scaled, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular value decomposition failed: {exc}") from exc
    keep = s > threshold
    est = (U[:, keep] * s[keep]) @ Vt[keep]
    return np.clip((est + 1.0) / 2.0, 0.0, 1.0)


def hist_only_estimate(adj: np.ndarray, h: Optional[int] = None) -> np.ndarray:
    """Sorting and block averaging without the TV smoothing step."""
    adj = np.asarray(adj)
    n = adj.shape[0]
    h = SasConfig(h=h).resolve_binwidth(n)
    perm = sort_permutation(empirical_degrees(adj))
    hist = block_histogram(apply_permutation(adj, perm), h, compensate_diagonal=True)
    return kron_upsample(hist, h, n)

"""Monte-Carlo benchmark harness: seeded trials, MSE summaries, runtime curves.

Ground truth for a trial is the canonical (increasing-degree) representative
of the catalog graphon evaluated at that trial's sorted latent positions (see
:func:`sasgraphon.graphons.truth_at_sorted_latents`): the degree-sorted
estimators target exactly that matrix, while a fixed evaluation grid would
charge every estimator for the order-statistics fluctuation of the latents.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .baselines import hist_only_estimate, mse, usvt_estimate
from .graphons import catalog_graphon, sample_graph, truth_at_sorted_latents
from .pipeline import SasConfig, sas_estimate

ESTIMATORS = ("sas", "usvt", "hist")


@dataclass
class TrialReport:
    graphon_id: int
    n: int
    h: int
    seed: int
    estimator: str
    mse: float
    wall_ms: float
    error: Optional[str] = None


@dataclass
class SummaryRow:
    graphon_id: int
    n: int
    estimator: str
    trials: int
    mean_mse: float
    std_mse: float
    mean_wall_ms: float


def _run_estimator(name: str, adj: np.ndarray, config: SasConfig,
                   usvt_threshold: float) -> np.ndarray:
    if name == "sas":
        return sas_estimate(adj, config).w_est
    if name == "usvt":
        return usvt_estimate(adj, threshold_scale=usvt_threshold)
    if name == "hist":
        return hist_only_estimate(adj, h=config.h)
    raise ValueError(f"unknown estimator {name!r}; choose from {ESTIMATORS}")


def run_trials(
    graphon_id: int,
    n: int,
    trials: int,
    estimators: Sequence[str] = ("sas",),
    base_seed: int = 0,
    config: Optional[SasConfig] = None,
    usvt_threshold: float = 2.02,
) -> list[TrialReport]:
    """Sample ``trials`` independent graphs (seed = base_seed + index) and
    score each requested estimator against the discretized truth.

    A failing estimator marks its trial report with ``error`` and a NaN MSE
    instead of aborting the batch. Reports are ordered by trial index, then
    by the given estimator order.
    """
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    for name in estimators:
        if name not in ESTIMATORS:
            raise ValueError(f"unknown estimator {name!r}; choose from {ESTIMATORS}")
    if config is None:
        config = SasConfig()
    w = catalog_graphon(graphon_id)
    h = config.resolve_binwidth(n)
    reports = []
    for t in range(trials):
        seed = base_seed + t
        adj, latent = sample_graph(w, n, seed)
        truth = truth_at_sorted_latents(w, latent.u)
        for name in estimators:
            start = time.perf_counter()
            try:
                estimate = _run_estimator(name, adj, config, usvt_threshold)
                err = None
                value = mse(estimate, truth)
            except (ValueError, ArithmeticError, RuntimeError) as exc:
                err = str(exc)
                value = float("nan")
            wall_ms = 1e3 * (time.perf_counter() - start)
            reports.append(
                TrialReport(
                    graphon_id=graphon_id,
                    n=n,
                    h=h,
                    seed=seed,
                    estimator=name,
                    mse=value,
                    wall_ms=wall_ms,
                    error=err,
                )
            )
    return reports


def summarize(reports: Sequence[TrialReport]) -> list[SummaryRow]:
    """Group reports by (graphon_id, n, estimator) and compute the mean MSE,
    the sample standard deviation (ddof=1, zero for a single trial) and the
    mean wall time. Failed trials are excluded from every statistic."""
    ok = [r for r in reports if r.error is None]
    if not ok:
        raise ValueError("no successful trial reports to summarize")
    groups: dict[tuple[int, int, str], list[TrialReport]] = {}
    for r in ok:
        groups.setdefault((r.graphon_id, r.n, r.estimator), []).append(r)
    rows = []
    for (gid, n, est) in sorted(groups):
        members = groups[(gid, n, est)]
        values = np.array([r.mse for r in members])
        walls = np.array([r.wall_ms for r in members])
        rows.append(
            SummaryRow(
                graphon_id=gid,
                n=n,
                estimator=est,
                trials=len(members),
                mean_mse=float(values.mean()),
                std_mse=float(values.std(ddof=1)) if len(members) > 1 else 0.0,
                mean_wall_ms=float(walls.mean()),
            )
        )
    return rows


def runtime_curve(
    graphon_id: int,
    sizes: Sequence[int],
    trials: int = 3,
    estimators: Sequence[str] = ("sas", "usvt"),
    base_seed: int = 0,
    config: Optional[SasConfig] = None,
) -> list[SummaryRow]:
    """Mean wall time per estimator at each graph size, via fresh trials."""
    if not sizes:
        raise ValueError("need at least one size")
    rows = []
    for n in sizes:
        reports = run_trials(
            graphon_id, n, trials, estimators=estimators,
            base_seed=base_seed, config=config,
        )
        rows.extend(summarize(reports))
    return rows

"""Graphon estimation from a single observed graph.

Sort nodes by empirical degree, average the sorted adjacency matrix over
blocks, smooth the block grid by total-variation minimization, and replicate
blocks back to full size. Includes a singular-value-thresholding baseline and
a seeded Monte-Carlo benchmark harness.
"""

from .baselines import hist_only_estimate, mse, usvt_estimate
from .bench import SummaryRow, TrialReport, run_trials, runtime_curve, summarize
from .graphons import (
    Graphon,
    LatentSample,
    canonicalize,
    catalog_graphon,
    discretize,
    marginal_is_decreasing,
    sample_graph,
    step_approximation,
    truth_at_sorted_latents,
)
from .pipeline import (
    SasConfig,
    SasResult,
    apply_permutation,
    block_histogram,
    empirical_degrees,
    kron_upsample,
    log_binwidth,
    oracle_sorted_graph,
    sas_estimate,
    sort_permutation,
)
from .tv import (
    AdmmParams,
    AdmmResult,
    DiffField,
    NumericalError,
    admm_solve,
    divergence,
    grad,
    grad_adjoint,
    shrink,
    solve_r_subproblem,
    tv_norm,
)

__version__ = "0.1.0"

"""Isotropic total-variation smoothing of a square grid via ADMM.

Solves  min_r  mu/2 * ||r - H||_F^2 + TV(r)  where TV is the isotropic total
variation built from periodic forward differences. The quadratic subproblem
has a circulant normal matrix, so it is solved exactly with a 2D FFT; the
nonsmooth subproblem is a closed-form magnitude shrinkage; the multiplier is
updated by gradient ascent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
import scipy.fft


class NumericalError(RuntimeError):
    """Raised when a solver produces non-finite values."""


class DiffField(NamedTuple):
    """Periodic forward differences of a k x k grid along each axis."""

    gx: np.ndarray
    gy: np.ndarray


@dataclass
class AdmmParams:
    """Solver knobs. ``rho`` defaults to 8 * mu: on block-histogram inputs
    this ratio reached the stopping tolerance in one half to one third the
    sweeps of smaller ratios at the same solution accuracy; convergence holds
    for any rho > 0."""

    mu: float = 10.0
    rho: Optional[float] = None
    max_iters: int = 500
    tol: float = 1e-6

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if self.rho is None:
            self.rho = 8.0 * self.mu
        if self.rho <= 0:
            raise ValueError(f"rho must be > 0, got {self.rho}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol <= 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")


@dataclass
class AdmmResult:
    solution: np.ndarray
    iterations: int
    final_residual: float
    objective_trace: Optional[np.ndarray] = None


def grad(r: np.ndarray) -> DiffField:
    """Forward differences with wraparound: gx[i,j] = r[i+1,j] - r[i,j]
    (gx[k-1,j] wraps to row 0), and gy analogously along columns."""
    r = np.asarray(r, dtype=float)
    gx = np.roll(r, -1, axis=0) - r
    gy = np.roll(r, -1, axis=1) - r
    return DiffField(gx=gx, gy=gy)


def grad_adjoint(f: DiffField) -> np.ndarray:
    """Adjoint of :func:`grad` under the Frobenius inner product:
    <grad(r), f> = <r, grad_adjoint(f)> for all r, f."""
    gx, gy = f
    return (np.roll(gx, 1, axis=0) - gx) + (np.roll(gy, 1, axis=1) - gy)


def divergence(f: DiffField) -> np.ndarray:
    """Discrete divergence, the negative adjoint of :func:`grad`."""
    return -grad_adjoint(f)


def tv_norm(r: np.ndarray) -> float:
    """Isotropic total variation: sum over pixels of sqrt(gx^2 + gy^2)."""
    gx, gy = grad(r)
    return float(np.sqrt(gx * gx + gy * gy).sum())


def shrink(v1: np.ndarray, v2: np.ndarray, threshold: float) -> DiffField:
    """Magnitude soft-threshold of the field (v1, v2).

    Each point's magnitude m = sqrt(v1^2 + v2^2) is reduced by ``threshold``
    and clamped at zero; direction is preserved. Points with m = 0 map to 0.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    m = np.sqrt(v1 * v1 + v2 * v2)
    scale = np.zeros_like(m)
    nz = m > 0.0
    scale[nz] = np.maximum(m[nz] - threshold, 0.0) / m[nz]
    return DiffField(gx=scale * v1, gy=scale * v2)


def laplacian_eigenvalues(k: int) -> np.ndarray:
    """Eigenvalues of D^T D on the periodic k x k grid, laid out to match the
    2D DFT frequency grid: lam[p,q] = 4 (sin^2(pi p / k) + sin^2(pi q / k))."""
    s = np.sin(np.pi * np.arange(k) / k) ** 2
    return 4.0 * (s[:, None] + s[None, :])


def _grad_reflect(r: np.ndarray) -> DiffField:
    # forward differences under whole-sample symmetric extension: the
    # difference across the reflection seam is zero
    gx = np.zeros_like(r)
    gx[:-1] = r[1:] - r[:-1]
    gy = np.zeros_like(r)
    gy[:, :-1] = r[:, 1:] - r[:, :-1]
    return DiffField(gx=gx, gy=gy)


def _grad_adjoint_reflect(f: DiffField) -> np.ndarray:
    gx, gy = f
    out = np.zeros_like(gx)
    out[1:] += gx[:-1]
    out[:-1] -= gx[:-1]
    out[:, 1:] += gy[:, :-1]
    out[:, :-1] -= gy[:, :-1]
    return out


def _reflect_eigenvalues(k: int) -> np.ndarray:
    # Neumann Laplacian eigenvalues in the 2D DCT-II basis
    s = np.sin(np.pi * np.arange(k) / (2 * k)) ** 2
    return 4.0 * (s[:, None] + s[None, :])


def _solve_r_reflect(H, u, z, mu, rho):
    rhs = mu * H + _grad_adjoint_reflect(DiffField(rho * u.gx - z.gx, rho * u.gy - z.gy))
    denom = mu + rho * _reflect_eigenvalues(H.shape[0])
    return scipy.fft.idctn(scipy.fft.dctn(rhs, type=2) / denom, type=2)


def solve_r_subproblem(
    H: np.ndarray,
    u: DiffField,
    z: DiffField,
    mu: float,
    rho: float,
) -> np.ndarray:
    """Exact minimizer of the quadratic subproblem
    mu/2 ||r - H||^2 + <z, D r> + rho/2 ||u - D r||^2, i.e. the solution of
    (mu + rho D^T D) r = mu H + D^T (rho u - z), via FFT diagonalization."""
    if mu <= 0:
        raise ValueError(f"mu must be > 0, got {mu}")
    H = np.asarray(H, dtype=float)
    k = H.shape[0]
    rhs = mu * H + grad_adjoint(DiffField(rho * u.gx - z.gx, rho * u.gy - z.gy))
    lam = laplacian_eigenvalues(k)
    # real-input FFT: keep only the non-redundant half of the spectrum
    denom = mu + rho * lam[:, : k // 2 + 1]
    spec = scipy.fft.rfft2(rhs) / denom
    return scipy.fft.irfft2(spec, s=(k, k))


def admm_solve(H: np.ndarray, params: Optional[AdmmParams] = None,
               track_objective: bool = False,
               boundary: str = "periodic") -> AdmmResult:
    """Run the ADMM iteration to minimize mu/2 ||r - H||^2 + TV(r).

    Starts from r = H, u = grad(H), z = 0 and stops when the relative change
    ||r_new - r|| / max(||r||, 1e-12) drops below ``params.tol`` or after
    ``params.max_iters`` sweeps. ``track_objective`` records the objective
    after every r-update.

    ``boundary`` selects the difference operator: "periodic" wraps around
    (quadratic subproblem solved by FFT); "reflect" uses symmetric extension
    (solved by DCT), equivalent to mirroring the input to 2k x 2k, solving
    periodically and cropping. Reflection avoids penalizing the artificial
    jump between opposite edges of non-periodic data.
    """
    if params is None:
        params = AdmmParams()
    if boundary == "periodic":
        grad_fn, solve_fn = grad, solve_r_subproblem
    elif boundary == "reflect":
        grad_fn, solve_fn = _grad_reflect, _solve_r_reflect
    else:
        raise ValueError(f"boundary must be 'periodic' or 'reflect', got {boundary!r}")
    H = np.asarray(H, dtype=float)
    mu, rho = params.mu, params.rho
    r = H.copy()
    u = grad_fn(H)
    z = DiffField(np.zeros_like(H), np.zeros_like(H))
    trace = [] if track_objective else None
    rel_change = np.inf
    iterations = 0
    for it in range(params.max_iters):
        r_new = solve_fn(H, u, z, mu, rho)
        if not np.all(np.isfinite(r_new)):
            raise NumericalError(f"non-finite iterate at iteration {it}")
        gx, gy = grad_fn(r_new)
        u = shrink(gx + z.gx / rho, gy + z.gy / rho, 1.0 / rho)
        z = DiffField(z.gx - rho * (u.gx - gx), z.gy - rho * (u.gy - gy))
        rel_change = float(
            np.linalg.norm(r_new - r) / max(np.linalg.norm(r), 1e-12)
        )
        r = r_new
        iterations = it + 1
        if trace is not None:
            gx, gy = grad_fn(r)
            trace.append(
                0.5 * mu * float(((r - H) ** 2).sum())
                + float(np.sqrt(gx * gx + gy * gy).sum())
            )
        # the first sweep returns r = H exactly (u starts at grad(H), making
        # the penalty vanish there), so convergence is only judged afterwards
        if it > 0 and rel_change < params.tol:
            break
    return AdmmResult(
        solution=r,
        iterations=iterations,
        final_residual=rel_change,
        objective_trace=None if trace is None else np.asarray(trace),
    )

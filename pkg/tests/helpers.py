"""Shared oracles for the test suite: dense operator matrices, a projected
subgradient reference solver, and quadrature-based sampler statistics."""

import numpy as np

from sasgraphon.tv import DiffField, grad, grad_adjoint, tv_norm
from sasgraphon.tv import _grad_reflect  # noqa: F401  (used by tv tests)


def dense_grad_matrix(k, grad_fn=grad):
    """Explicit (2k^2, k^2) matrix of the difference operator, column by column."""
    cols = []
    for idx in range(k * k):
        e = np.zeros(k * k)
        e[idx] = 1.0
        f = grad_fn(e.reshape(k, k))
        cols.append(np.concatenate([f.gx.ravel(), f.gy.ravel()]))
    return np.array(cols).T


def field_to_vec(f):
    return np.concatenate([f.gx.ravel(), f.gy.ravel()])


def tv_objective(r, H, mu):
    return 0.5 * mu * float(((r - H) ** 2).sum()) + tv_norm(r)


def projected_subgradient_tv(H, mu, iters):
    """Reference minimizer of mu/2 ||r-H||^2 + TV(r) over [0,1]^{k x k}.

    Projected subgradient descent with the classical strongly-convex stepsize
    2/(mu (t+2)); returns the best objective seen and the iterate achieving it.
    The TV subgradient is D^T of the normalized difference field (0 where the
    magnitude vanishes).
    """
    r = H.copy()
    best = tv_objective(r, H, mu)
    best_r = r.copy()
    for t in range(iters):
        gx, gy = grad(r)
        m = np.sqrt(gx * gx + gy * gy)
        qx = np.divide(gx, m, out=np.zeros_like(gx), where=m > 0)
        qy = np.divide(gy, m, out=np.zeros_like(gy), where=m > 0)
        g = mu * (r - H) + grad_adjoint(DiffField(qx, qy))
        r = np.clip(r - (2.0 / (mu * (t + 2))) * g, 0.0, 1.0)
        f = tv_objective(r, H, mu)
        if f < best:
            best, best_r = f, r.copy()
    return best, best_r


def noisy_step_image(seed, size=8, lo=0.2, hi=0.8, noise=0.05):
    rng = np.random.default_rng(seed)
    H = np.full((size, size), lo)
    H[:, size // 2 :] = hi
    return H + noise * rng.standard_normal((size, size))


def edge_density_stats(w, n, points=4001):
    """Mean and standard deviation of the empirical edge density over the
    n(n-1)/2 node pairs, by quadrature.

    Pairs sharing a vertex are correlated through the shared latent:
    Cov = E[g(U)^2] - p^2 with g the marginal, and each of the m pairs shares
    a vertex with 2(n-2) others.
    """
    mid = (np.arange(points) + 0.5) / points
    grid = np.asarray(w(mid[:, None], mid[None, :]), dtype=float)
    p = float(grid.mean())
    g = grid.mean(axis=1)
    cov_shared = float((g * g).mean()) - p * p
    m = n * (n - 1) / 2.0
    var = p * (1.0 - p) / m + 2.0 * (n - 2) * cov_shared / m
    return p, float(np.sqrt(var))


def distinct_outdegree_graph(n):
    """Directed binary matrix with all-distinct row sums (row i has i ones)."""
    adj = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        cols = [c for c in range(n) if c != i][:i]
        adj[i, cols] = 1
    return adj

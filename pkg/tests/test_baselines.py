import numpy as np
import pytest

from sasgraphon.baselines import hist_only_estimate, mse, usvt_estimate
from sasgraphon.graphons import Graphon, catalog_graphon, sample_graph, truth_at_sorted_latents
from sasgraphon.pipeline import SasConfig, sas_estimate
from sasgraphon.tv import AdmmParams


def test_mse_identical_grids():
    grid = np.random.default_rng(0).random((6, 6))
    assert mse(grid, grid) == 0.0


def test_mse_constant_offset():
    grid = np.random.default_rng(1).random((5, 5))
    assert mse(grid + 0.1, grid) == pytest.approx(0.01)


def test_mse_symmetry():
    rng = np.random.default_rng(2)
    a, b = rng.random((4, 4)), rng.random((4, 4))
    assert mse(a, b) == pytest.approx(mse(b, a))


def test_mse_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        mse(np.zeros((3, 3)), np.zeros((4, 4)))


def test_usvt_complete_graph():
    n = 128
    adj = np.ones((n, n), dtype=np.uint8) - np.eye(n, dtype=np.uint8)
    est = usvt_estimate(adj)
    # the top component reconstructs (1 - 1/n) exactly; the zero diagonal
    # keeps the all-ones target out of reach by 1/n at any size
    assert np.all(np.abs(est - 1.0) <= 2.0 / n)


def test_usvt_empty_graph():
    est = usvt_estimate(np.zeros((64, 64), dtype=np.uint8))
    np.testing.assert_allclose(est, 0.0, atol=1e-9)


def test_usvt_rejects_tiny_graphs():
    with pytest.raises(ValueError):
        usvt_estimate(np.zeros((3, 3), dtype=np.uint8))


def test_usvt_range_and_shape():
    adj, _ = sample_graph(catalog_graphon(3), 150, seed=4)
    est = usvt_estimate(adj)
    assert est.shape == (150, 150)
    assert np.all(est >= 0.0) and np.all(est <= 1.0)


def test_usvt_threshold_knob():
    adj, _ = sample_graph(catalog_graphon(1), 150, seed=5)
    # an absurdly high cut keeps nothing: the scaled matrix reconstructs to 0,
    # which maps back to a flat one half
    est = usvt_estimate(adj, threshold_scale=1e6)
    np.testing.assert_allclose(est, 0.5)


def test_hist_only_constant_half():
    # unsmoothed block means of Bernoulli(1/2) have std 0.5/h per bin
    # (h = round(ln 400) = 6), so check the RMS deviation against that rate
    # and the grand mean against the truth; a uniform 0.1 bound would be a
    # 1.2-sigma claim over four thousand bins
    flat = Graphon(evaluator=lambda u, v: np.full_like(u, 0.5))
    adj, _ = sample_graph(flat, 400, seed=6)
    est = hist_only_estimate(adj)
    assert est.shape == (400, 400)
    rms = np.sqrt(((est - 0.5) ** 2).mean())
    assert 0.5 * (0.5 / 6) < rms < 1.5 * (0.5 / 6)
    assert abs(est.mean() - 0.5) < 0.01


def test_hist_only_equals_fidelity_dominated_sas():
    adj, _ = sample_graph(catalog_graphon(3), 120, seed=7)
    plain = hist_only_estimate(adj)
    heavy = sas_estimate(adj, SasConfig(admm=AdmmParams(mu=1e9))).w_est
    np.testing.assert_allclose(heavy, plain, atol=1e-5)


def test_smoothing_beats_raw_histogram_on_smooth_graphon():
    w = catalog_graphon(5)
    hist_scores, sas_scores = [], []
    for seed in range(20):
        adj, latent = sample_graph(w, 1000, seed)
        truth = truth_at_sorted_latents(w, latent.u)
        hist_scores.append(mse(hist_only_estimate(adj), truth))
        sas_scores.append(mse(sas_estimate(adj).w_est, truth))
    assert np.mean(hist_scores) >= np.mean(sas_scores)

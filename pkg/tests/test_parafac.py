import itertools

import numpy as np
import pytest

from tensorbss.core import mode_n_unfold
from tensorbss.parafac import (
    ALSConfig,
    KruskalFactors,
    als,
    als_step,
    congruence_match,
    khatri_rao,
    normalized,
    reconstruct,
)

rng = np.random.default_rng(314)


def reconstruct_brute(f):
    """Triple-loop oracle for the trilinear sum."""
    w = f.weights if f.weights is not None else np.ones(f.rank)
    n1, n2, n3 = f.A.shape[0], f.B.shape[0], f.C.shape[0]
    out = np.zeros((n1, n2, n3))
    for i, j, k in itertools.product(range(n1), range(n2), range(n3)):
        out[i, j, k] = sum(
            w[p] * f.A[i, p] * f.B[j, p] * f.C[k, p] for p in range(f.rank)
        )
    return out


def random_factors(dims, r, seed, weights=None):
    rr = np.random.default_rng(seed)
    return KruskalFactors(
        rr.standard_normal((dims[0], r)),
        rr.standard_normal((dims[1], r)),
        rr.standard_normal((dims[2], r)),
        weights,
    )


class TestReconstruct:
    def test_unit_rank1(self):
        e1 = np.array([[1.0], [0.0]])
        f = KruskalFactors(e1, e1, e1)
        t = reconstruct(f).array
        assert t[0, 0, 0] == 1.0 and np.sum(np.abs(t)) == 1.0

    def test_two_orthogonal_terms(self):
        a = np.array([[1.0, 0.0], [0.0, 1.0]])
        f = KruskalFactors(a, a, a, np.array([2.0, -3.0]))
        t = reconstruct(f).array
        assert t[0, 0, 0] == 2.0 and t[1, 1, 1] == -3.0
        assert np.sum(np.abs(t)) == 5.0

    def test_matches_brute_force_and_unfolding(self):
        f = random_factors((3, 4, 2), 3, seed=5)
        t = reconstruct(f).array
        np.testing.assert_allclose(t, reconstruct_brute(f), atol=1e-12)
        np.testing.assert_allclose(
            mode_n_unfold(t, 1), f.A @ khatri_rao(f.B, f.C).T, atol=1e-12
        )

    def test_column_count_mismatch(self):
        with pytest.raises(ValueError):
            KruskalFactors(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))


class TestAlsStep:
    def test_fixed_point_at_truth(self):
        truth = random_factors((4, 4, 4), 2, seed=8)
        g = reconstruct(truth).array
        out, diag = als_step(g, truth)
        np.testing.assert_allclose(reconstruct(out).array, g, atol=1e-10)
        assert diag["rank_deficient"] == []

    def test_fit_monotone(self):
        g = rng.standard_normal((4, 5, 3))
        f = random_factors((4, 5, 3), 2, seed=9)
        prev = np.linalg.norm(g - reconstruct(f).array)
        for _ in range(6):
            f, _ = als_step(g, f)
            cur = np.linalg.norm(g - reconstruct(f).array)
            assert cur <= prev + 1e-12
            prev = cur

    def test_rank1_monte_carlo(self):
        hits = 0
        for seed in range(100):
            r = np.random.default_rng(seed)
            truth = KruskalFactors(
                r.standard_normal((3, 1)), r.standard_normal((3, 1)), r.standard_normal((3, 1))
            )
            g = reconstruct(truth).array
            f = random_factors((3, 3, 3), 1, seed=seed + 1000)
            for _ in range(50):
                f, _ = als_step(g, f)
            err = np.linalg.norm(g - reconstruct(f).array)
            hits += err < 1e-6
        assert hits == 100


class TestAls:
    def test_exact_rank2_recovery(self):
        truth = random_factors((4, 4, 4), 2, seed=101)
        g = reconstruct(truth).array
        f, history = als(g, ALSConfig(rank=2, init="svd", seed=0))
        assert history[-1] <= 1e-8
        _, congruences = congruence_match(f, truth)
        assert np.min(congruences) >= 0.99

    def test_history_non_increasing(self):
        g = rng.standard_normal((4, 4, 4))
        _, history = als(g, ALSConfig(rank=3, init="random", seed=1))
        assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))

    def test_rank_bound_warning(self):
        g = rng.standard_normal((2, 2, 2))
        with pytest.warns(UserWarning, match="rank"):
            als(g, ALSConfig(rank=5, max_iters=2))

    def test_noise_plateau(self):
        truth = random_factors((4, 4, 4), 2, seed=55)
        clean = reconstruct(truth).array
        noise = 0.01 * np.linalg.norm(clean) * _unit_noise(clean.shape, 56)
        g = clean + noise
        _, history = als(g, ALSConfig(rank=2, init="svd"))
        assert history[-1] == pytest.approx(0.01, abs=5e-3)

    def test_normalized_output(self):
        truth = random_factors((3, 3, 3), 2, seed=7, weights=np.array([2.0, -1.0]))
        f, _ = als(reconstruct(truth).array, ALSConfig(rank=2))
        for m in (f.A, f.B, f.C):
            np.testing.assert_allclose(np.linalg.norm(m, axis=0), 1.0, atol=1e-10)
        assert np.all(f.weights >= 0)

    def test_tied_update_preserves_symmetry(self):
        v = rng.standard_normal((4, 2))
        g = reconstruct(KruskalFactors(v, v, v)).array
        cfg = ALSConfig(rank=2, init="svd", seed=3, max_iters=400)
        f, history = als(g, cfg, tied=True)
        np.testing.assert_allclose(f.A, f.B, atol=1e-12)
        np.testing.assert_allclose(f.A, f.C, atol=1e-12)
        # the tied fixed-point refresh converges linearly, not ALS-fast
        assert history[-1] < 1e-8

    def test_order_check(self):
        with pytest.raises(ValueError):
            als(np.zeros((2, 2)), ALSConfig(rank=1))


class TestNormalization:
    def test_roundtrip_value(self):
        f = random_factors((3, 4, 2), 2, seed=77, weights=np.array([-1.5, 0.5]))
        g = reconstruct(f).array
        np.testing.assert_allclose(reconstruct(normalized(f)).array, g, atol=1e-12)

    def test_congruence_match_quotient(self):
        truth = random_factors((4, 4, 4), 3, seed=88)
        # permute columns and flip signs: congruence must still be exactly 1
        perm = [2, 0, 1]
        flip = np.array([1.0, -1.0, -1.0])
        shuffled = KruskalFactors(
            truth.A[:, perm] * flip, truth.B[:, perm], truth.C[:, perm]
        )
        order, congruences = congruence_match(shuffled, truth)
        assert order == perm
        np.testing.assert_allclose(congruences, 1.0, atol=1e-12)


def _unit_noise(shape, seed):
    e = np.random.default_rng(seed).standard_normal(shape)
    return e / np.linalg.norm(e)

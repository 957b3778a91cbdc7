import itertools

import numpy as np
import pytest

from tensorbss.core import rank1_sym, sym_kronecker, symmetrize
from tensorbss.rank1 import (
    Rank1Approx,
    best_rank1,
    contract_to_vector,
    hosvd_init,
    nonsymmetric_rank1_order3,
    omega_criteria,
    rayleigh_iterate,
    sigma_of,
    structured_solve,
)

rng = np.random.default_rng(555)


def contract_brute(c, w, times):
    """Nested-loop contraction oracle."""
    c = np.asarray(c)
    for _ in range(times):
        out = np.zeros(c.shape[:-1])
        for idx in itertools.product(*(range(n) for n in c.shape)):
            out[idx[:-1]] += c[idx] * w[idx[-1]]
        c = out
    return c


def unit(v):
    return v / np.linalg.norm(v)


class TestContractions:
    def test_identity_matrix(self):
        w = rng.standard_normal(4)
        np.testing.assert_allclose(contract_to_vector(np.eye(4), w), w)

    def test_rank1_order3(self):
        v = rng.standard_normal(3)
        w = rng.standard_normal(3)
        c = rank1_sym(v, 3).array
        np.testing.assert_allclose(
            contract_to_vector(c, w), (v @ w) ** 2 * v, atol=1e-12
        )

    def test_matches_brute_force(self):
        c = symmetrize(rng.standard_normal((3, 3, 3, 3))).expand().array
        w = rng.standard_normal(3)
        np.testing.assert_allclose(
            contract_to_vector(c, w), contract_brute(c, w, 3), atol=1e-10
        )

    def test_sigma_diagonal(self):
        c = np.zeros((3,) * 4)
        for i in range(3):
            c[(i,) * 4] = i + 1.0
        assert sigma_of(c, np.array([0.0, 1.0, 0.0])) == pytest.approx(2.0)

    def test_sigma_brute(self):
        c = symmetrize(rng.standard_normal((3, 3, 3))).expand().array
        w = unit(rng.standard_normal(3))
        assert sigma_of(c, w) == pytest.approx(float(contract_brute(c, w, 3)), rel=1e-10)


class TestOmegaCriteria:
    def test_exact_rank1(self):
        w = unit(rng.standard_normal(4))
        c = rank1_sym(w, 4, 2.5)
        o0, o3, od = omega_criteria(c, w, 2.5)
        assert o0 == pytest.approx(0.0, abs=1e-10)
        assert o3 == pytest.approx(0.0, abs=1e-10)
        assert od == pytest.approx(2.5)

    def test_orthogonal_direction(self):
        v = np.array([1.0, 0.0])
        w = np.array([0.0, 1.0])
        c = rank1_sym(v, 4, 3.0)
        _, _, od = omega_criteria(c, w, 0.0)
        assert od == pytest.approx(0.0, abs=1e-12)

    def test_pythagorean_identity(self):
        for seed in range(10):
            c = symmetrize(np.random.default_rng(seed).standard_normal((3,) * 4))
            w = unit(np.random.default_rng(seed + 1).standard_normal(3))
            sig = sigma_of(c, w)
            o0, _, od = omega_criteria(c, w, sig)
            lhs = o0**2 + od**2
            assert lhs == pytest.approx(c.norm() ** 2, rel=1e-10)


class TestRayleigh:
    def test_rank1_immediate(self):
        v = unit(rng.standard_normal(3))
        c = rank1_sym(v, 4, 2.0)
        w0 = unit(v + 0.3 * rng.standard_normal(3))
        res = rayleigh_iterate(c, w0)
        assert res.converged and res.iterations <= 2
        assert min(np.linalg.norm(res.w - v), np.linalg.norm(res.w + v)) <= 1e-12

    def test_order2_dominant_eigenpair(self):
        for seed in range(10):
            a = np.random.default_rng(seed).standard_normal((5, 5))
            a = (a + a.T) / 2
            res = rayleigh_iterate(a, hosvd_init(a), tol=1e-12, max_iter=2000)
            lam = np.linalg.eigvalsh(a)
            dominant = lam[np.argmax(np.abs(lam))]
            assert res.sigma == pytest.approx(dominant, abs=1e-8)

    def test_diagonal_order3_winner_prediction(self):
        # winner oracle: the scaled coordinate dynamics make |kappa_i w_i|
        # decide the limit from any generic start
        kappa = np.array([5.0, 1.0, 0.5])
        c = np.zeros((3, 3, 3))
        for i in range(3):
            c[(i,) * 3] = kappa[i]
        wins = 0
        for t in range(100):
            w0 = np.random.default_rng(t).standard_normal(3)
            predicted = int(np.argmax(np.abs(kappa * w0)))
            res = rayleigh_iterate(c, w0, max_iter=2000)
            got = int(np.argmax(np.abs(res.w)))
            assert got == predicted
            wins += got == 0
        assert wins > 60  # the dominant diagonal wins from most generic starts

    def test_stationarity_residual_at_convergence(self):
        for seed in range(10):
            c = symmetrize(np.random.default_rng(seed).standard_normal((4,) * 3))
            res = best_rank1(c)
            _, o_dm1, _ = omega_criteria(c, res.w, res.sigma)
            assert o_dm1 <= 1e-8

    def test_zero_contraction_restarts(self):
        # start orthogonal to the only factor: the first contraction vanishes
        c = rank1_sym(np.array([1.0, 0.0]), 3, 1.0)
        res = rayleigh_iterate(c, np.array([0.0, 1.0]), max_iter=200)
        assert res.restarts >= 1
        assert abs(res.w[0]) > 0.99

    def test_zero_init_rejected(self):
        with pytest.raises(ValueError):
            rayleigh_iterate(np.eye(2), np.zeros(2))


class TestHosvdInit:
    def test_rank1_recovers_factor(self):
        v = unit(rng.standard_normal(4))
        c = rank1_sym(v, 3, -2.0)
        w = hosvd_init(c)
        assert min(np.linalg.norm(w - v), np.linalg.norm(w + v)) <= 1e-10

    def test_order2_dominant_eigvec(self):
        a = np.diag([3.0, -1.0, 0.5])
        w = hosvd_init(a)
        assert abs(abs(w[0]) - 1.0) <= 1e-12


class TestEquivalenceQuotient:
    def test_sign_quotient_even_order(self):
        w = unit(rng.standard_normal(3))
        a = Rank1Approx(w=w, sigma=1.5, order=4)
        b = Rank1Approx(w=-w, sigma=1.5, order=4)
        assert a == b

    def test_sign_quotient_odd_order(self):
        w = unit(rng.standard_normal(3))
        a = Rank1Approx(w=w, sigma=1.5, order=3)
        b = Rank1Approx(w=-w, sigma=-1.5, order=3)
        assert a == b
        c = Rank1Approx(w=-w, sigma=1.5, order=3)
        assert a != c


class TestStructuredSolve:
    def test_bpsk_style_recovery(self):
        f0 = np.array([0.8, -0.6])
        r = np.random.default_rng(11)
        rows = []
        for _ in range(60):
            y = r.standard_normal(2)
            y = y / (f0 @ y) * r.choice([-1.0, 1.0])  # (f0 . y)^2 == 1
            rows.append(sym_kronecker(y, 2))
        res = structured_solve(np.array(rows), d=2)
        assert res.linear_residual <= 1e-8
        assert min(np.linalg.norm(res.f - f0), np.linalg.norm(res.f + f0)) <= 1e-6
        assert not res.flagged

    def test_square_system_consistency(self):
        f0 = np.array([1.0, 2.0, -0.5])
        r = np.random.default_rng(21)
        rows = []
        while len(rows) < 6:  # S = binom(4, 2) = 6
            y = r.standard_normal(3)
            if abs(f0 @ y) > 0.2:
                rows.append(sym_kronecker(y / (f0 @ y), 2))
        res = structured_solve(np.array(rows), d=2)
        assert res.lstsq_rank == 6
        assert res.linear_residual <= 1e-8
        assert res.projection_residual <= 1e-8  # exact packed power in the set

    def test_bad_column_count(self):
        with pytest.raises(ValueError, match="packed length"):
            structured_solve(np.zeros((4, 5)), d=2)

    def test_degenerate_flagged(self):
        res = structured_solve(np.zeros((4, 6)), d=2, rhs=np.zeros(4))
        assert res.flagged


class TestNonsymmetricVariant:
    def test_rank1_recovery(self):
        u0, v0, w0 = (unit(rng.standard_normal(3)) for _ in range(3))
        c = 2.0 * np.einsum("i,j,k->ijk", u0, v0, w0)
        sigma, u, v, w = nonsymmetric_rank1_order3(c, seed=4)
        assert abs(abs(sigma) - 2.0) <= 1e-8
        assert min(np.linalg.norm(u - u0), np.linalg.norm(u + u0)) <= 1e-8

    def test_order_check(self):
        with pytest.raises(ValueError):
            nonsymmetric_rank1_order3(np.zeros((2, 2)))

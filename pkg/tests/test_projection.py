import numpy as np
import pytest

from ksparse.projection import project_l1_ball, project_simplex

from oracles import l1_projection_oracle


class TestSimplex:
    def test_already_on_simplex(self):
        np.testing.assert_allclose(project_simplex(np.array([0.5, 0.5]), 1.0), [0.5, 0.5])

    def test_symmetric_pair(self):
        np.testing.assert_allclose(project_simplex(np.array([1.0, 1.0]), 1.0), [0.5, 0.5])

    def test_threshold_example(self):
        # breakpoint scan: support {3} gives tau=1, sum max(v-1,0)=2, valid
        np.testing.assert_allclose(project_simplex(np.array([3.0, 1.0]), 2.0), [2.0, 0.0])

    def test_negative_entries_allowed(self):
        w = project_simplex(np.array([-3.0, -5.0]), 2.0)
        np.testing.assert_allclose(w, [2.0, 0.0])

    @pytest.mark.parametrize("method", ["sort", "scan"])
    def test_feasibility_random(self, method):
        rng = np.random.default_rng(0)
        for _ in range(200):
            n = rng.integers(1, 40)
            v = rng.uniform(-4, 4, n)
            eta = rng.uniform(0.01, 5.0)
            w = project_simplex(v, eta, method=method)
            assert np.all(w >= 0)
            assert abs(w.sum() - eta) <= 1e-12 * max(1.0, eta)

    def test_methods_agree(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            n = rng.integers(1, 200)
            v = rng.uniform(-5, 5, n)
            eta = rng.uniform(0.01, 4.0)
            a = project_simplex(v, eta, method="sort")
            b = project_simplex(v, eta, method="scan")
            np.testing.assert_allclose(a, b, atol=1e-12)

    def test_bad_eta(self):
        with pytest.raises(ValueError):
            project_simplex(np.array([1.0]), 0.0)
        with pytest.raises(ValueError):
            project_simplex(np.array([1.0]), -1.0)

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            project_simplex(np.array([np.nan, 1.0]), 1.0)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            project_simplex(np.array([1.0]), 1.0, method="bogus")


class TestL1Ball:
    def test_interior_unchanged(self):
        w = np.array([0.2, -0.3])
        np.testing.assert_array_equal(project_l1_ball(w, 1.0), w)

    def test_sign_restoration(self):
        np.testing.assert_allclose(project_l1_ball(np.array([-3.0, 1.0]), 2.0), [-2.0, 0.0])

    def test_symmetry_and_signs(self):
        np.testing.assert_allclose(
            project_l1_ball(np.array([1.0, -1.0, 0.0]), 1.0), [0.5, -0.5, 0.0]
        )

    def test_zero_fixed_point(self):
        for eta in (1e-6, 1.0, 1e6):
            np.testing.assert_array_equal(project_l1_ball(np.zeros(4), eta), np.zeros(4))

    def test_idempotent_exactly(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            w = rng.uniform(-5, 5, rng.integers(1, 30))
            eta = rng.uniform(0.05, 3.0)
            once = project_l1_ball(w, eta)
            twice = project_l1_ball(once, eta)
            np.testing.assert_array_equal(once, twice)

    def test_matches_active_set_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            w = rng.uniform(-5, 5, rng.integers(2, 21))
            eta = rng.uniform(0.01, 3.0)
            got = project_l1_ball(w, eta)
            want = l1_projection_oracle(w, eta)
            assert np.linalg.norm(got - want) <= 1e-9

    def test_no_better_feasible_point(self):
        # sampled competitors never come closer than the projection
        rng = np.random.default_rng(4)
        for dim in (2, 5, 20):
            w = rng.uniform(-5, 5, dim)
            eta = rng.uniform(0.1, 2.0)
            p = project_l1_ball(w, eta)
            # uniform in the l1 ball: simplex point, random signs, radius
            e = rng.exponential(size=(10_000, dim))
            z = e / e.sum(axis=1, keepdims=True)
            z *= np.where(rng.random((10_000, dim)) < 0.5, -1.0, 1.0)
            z *= eta * rng.random((10_000, 1)) ** (1.0 / dim)
            dists = np.linalg.norm(z - w, axis=1)
            assert np.linalg.norm(p - w) <= dists.min() + 1e-9

    def test_nonexpansive(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = rng.integers(1, 25)
            u = rng.uniform(-4, 4, n)
            v = rng.uniform(-4, 4, n)
            eta = rng.uniform(0.05, 3.0)
            pu = project_l1_ball(u, eta)
            pv = project_l1_ball(v, eta)
            assert np.linalg.norm(pu - pv) <= np.linalg.norm(u - v) + 1e-12

    def test_sparsity_monotone_in_eta(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            w = rng.uniform(-3, 3, 40)
            etas = np.sort(rng.uniform(0.01, np.abs(w).sum(), 8))[::-1]
            nnz = [np.count_nonzero(project_l1_ball(w, e)) for e in etas]
            assert all(a >= b for a, b in zip(nnz, nnz[1:]))

    def test_matrix_input_column_major(self):
        rng = np.random.default_rng(7)
        W = rng.uniform(-2, 2, (6, 4))
        eta = 1.5
        out = project_l1_ball(W, eta)
        assert out.shape == W.shape
        flat = project_l1_ball(W.ravel(order="F"), eta)
        np.testing.assert_array_equal(out, flat.reshape(W.shape, order="F"))
        assert np.abs(out).sum() <= eta * (1 + 1e-12)

    def test_budget_met_when_active(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            w = rng.uniform(-5, 5, 15)
            eta = 0.25 * np.abs(w).sum()
            out = project_l1_ball(w, eta)
            assert abs(np.abs(out).sum() - eta) <= 1e-12 * max(1.0, eta)

    def test_bad_eta(self):
        with pytest.raises(ValueError):
            project_l1_ball(np.ones(3), 0.0)

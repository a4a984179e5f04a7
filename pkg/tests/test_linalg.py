import numpy as np
import pytest

from admira.linalg import (
    SvdFactors,
    frobenius_norm,
    least_squares_minnorm,
    nuclear_norm,
    svd,
    svd_truncated,
)

from oracles import singular_values_charpoly

RT2 = np.sqrt(2.0)


class TestSvd:
    def test_identity(self):
        f = svd(np.eye(2))
        np.testing.assert_allclose(f.sigma, [1.0, 1.0])

    def test_diagonal(self):
        f = svd(np.diag([3.0, 1.0]))
        np.testing.assert_allclose(f.sigma, [3.0, 1.0])
        np.testing.assert_allclose(f.U, np.eye(2), atol=1e-14)
        np.testing.assert_allclose(f.V, np.eye(2), atol=1e-14)

    def test_ones_matrix(self):
        # char poly of the Gram matrix [[2,2],[2,2]] is l^2 - 4l, roots {4, 0}
        f = svd(np.ones((2, 2)))
        np.testing.assert_allclose(f.sigma, [2.0, 0.0], atol=1e-14)
        np.testing.assert_allclose(f.U[:, 0], [1 / RT2, 1 / RT2])
        np.testing.assert_allclose(f.V[:, 0], [1 / RT2, 1 / RT2])

    def test_reconstructs(self, rng):
        M = rng.standard_normal((7, 4))
        f = svd(M)
        assert f.k == 4
        np.testing.assert_allclose(f.reconstruct(), M, atol=1e-10 * frobenius_norm(M))

    def test_orthonormal_factors(self, rng):
        f = svd(rng.standard_normal((5, 6)))
        np.testing.assert_allclose(f.U.T @ f.U, np.eye(5), atol=1e-10)
        np.testing.assert_allclose(f.V.T @ f.V, np.eye(5), atol=1e-10)

    def test_sign_convention(self, rng):
        for _ in range(20):
            f = svd(rng.standard_normal((4, 4)))
            for j in range(f.k):
                col = f.U[:, j]
                lead = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0]
                assert col[lead] > 0

    def test_deterministic(self, rng):
        M = rng.standard_normal((6, 6))
        f1, f2 = svd(M), svd(M.copy())
        np.testing.assert_array_equal(f1.U, f2.U)
        np.testing.assert_array_equal(f1.V, f2.V)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            svd(np.array([[1.0, np.nan], [0.0, 1.0]]))

    def test_matches_charpoly_oracle(self, rng):
        for _ in range(100):
            m, n = rng.integers(2, 4, size=2)
            M = rng.standard_normal((m, n))
            got = svd(M).sigma
            want = singular_values_charpoly(M)
            assert np.abs(got - want).max() <= 1e-8 * max(got[0], 1.0)


class TestSvdTruncated:
    def test_diagonal_truncation(self):
        f = svd_truncated(np.diag([3.0, 2.0, 1.0]), 2)
        np.testing.assert_allclose(f.sigma, [3.0, 2.0])

    def test_rank_deficient_drops_triplets(self, rng):
        u = rng.standard_normal(5)
        v = rng.standard_normal(4)
        M = 2.5 * np.outer(u / np.linalg.norm(u), v / np.linalg.norm(v))
        f = svd_truncated(M, 3)
        assert f.k == 1
        np.testing.assert_allclose(f.sigma, [2.5])

    def test_ones_matrix_top1(self):
        f = svd_truncated(np.ones((2, 2)), 1)
        np.testing.assert_allclose(f.sigma, [2.0], atol=1e-14)

    def test_agrees_with_full(self, rng):
        M = rng.standard_normal((8, 6))
        full = svd(M)
        for k in (1, 3, 6):
            f = svd_truncated(M, k)
            np.testing.assert_allclose(f.sigma, full.sigma[:k], atol=1e-8)

    def test_zero_matrix(self):
        f = svd_truncated(np.zeros((3, 4)), 2)
        assert f.k == 0

    def test_k_out_of_range(self):
        with pytest.raises(ValueError):
            svd_truncated(np.eye(3), 4)
        with pytest.raises(ValueError):
            svd_truncated(np.eye(3), 0)

    def test_lanczos_backend_matches_dense(self, rng):
        M = rng.standard_normal((30, 20))
        for k in (1, 3, 19, 20):
            a = svd_truncated(M, k, backend="dense")
            b = svd_truncated(M, k, backend="lanczos")
            np.testing.assert_allclose(b.sigma, a.sigma, rtol=1e-8)
            np.testing.assert_allclose(
                (b.U * b.sigma) @ b.V.T, (a.U * a.sigma) @ a.V.T, atol=1e-7
            )

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            svd_truncated(np.eye(3), 1, backend="magic")

    def test_eckart_young_tail(self, rng):
        # ||M - M_k||_F^2 equals the sum of the squared trailing singular values
        for _ in range(50):
            M = rng.standard_normal((8, 8))
            full = svd(M)
            for k in (1, 2, 3):
                f = svd_truncated(M, k)
                tail = np.sum(full.sigma[k:] ** 2)
                got = frobenius_norm(M - f.reconstruct()) ** 2
                assert abs(got - tail) <= 1e-9 * frobenius_norm(M) ** 2


class TestLeastSquaresMinnorm:
    def test_identity_design(self):
        x = least_squares_minnorm(np.eye(2), [3.0, 4.0])
        np.testing.assert_allclose(x, [3.0, 4.0])

    def test_normal_equation(self):
        # 2 alpha = 4 from the normal equations
        x = least_squares_minnorm(np.array([[1.0], [1.0]]), [1.0, 3.0])
        np.testing.assert_allclose(x, [2.0])

    def test_duplicate_columns_split(self):
        x = least_squares_minnorm(np.ones((2, 2)), [2.0, 2.0])
        np.testing.assert_allclose(x, [1.0, 1.0])

    def test_zero_rhs(self):
        x = least_squares_minnorm(np.ones((3, 2)), np.zeros(3))
        np.testing.assert_array_equal(x, np.zeros(2))

    def test_residual_orthogonality(self, rng):
        Phi = rng.standard_normal((20, 5))
        b = rng.standard_normal(20)
        x = least_squares_minnorm(Phi, b)
        grad = Phi.T @ (b - Phi @ x)
        assert np.abs(grad).max() <= 1e-8 * frobenius_norm(Phi) * np.linalg.norm(b)

    def test_minimum_norm_among_minimizers(self, rng):
        # perturbing along the null space can only increase the norm
        Phi = rng.standard_normal((6, 4)) @ rng.standard_normal((4, 8))
        b = rng.standard_normal(6)
        x = least_squares_minnorm(Phi, b)
        _, s, Vt = np.linalg.svd(Phi)
        null = Vt[(s > 1e-10 * s[0]).sum():, :].T
        for _ in range(100):
            alt = x + null @ rng.standard_normal(null.shape[1])
            assert np.linalg.norm(x) <= np.linalg.norm(alt) + 1e-12

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            least_squares_minnorm(np.eye(3), np.ones(2))


class TestNorms:
    def test_identity(self):
        np.testing.assert_allclose(frobenius_norm(np.eye(2)), RT2)
        np.testing.assert_allclose(nuclear_norm(np.eye(2)), 2.0)

    def test_zero(self):
        assert frobenius_norm(np.zeros((3, 2))) == 0.0
        assert nuclear_norm(np.zeros((3, 2))) == 0.0

    def test_ones_matrix(self):
        # sigma = (2, 0) by the characteristic-polynomial oracle
        M = np.ones((2, 2))
        np.testing.assert_allclose(frobenius_norm(M), 2.0)
        np.testing.assert_allclose(nuclear_norm(M), 2.0)

    def test_norm_ordering(self, rng):
        # nuclear >= frobenius >= spectral for every matrix
        for _ in range(50):
            M = rng.standard_normal((5, 7))
            s1 = svd(M).sigma[0]
            fro = frobenius_norm(M)
            nuc = nuclear_norm(M)
            assert nuc >= fro - 1e-12
            assert fro >= s1 - 1e-12

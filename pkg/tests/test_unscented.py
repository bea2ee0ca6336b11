import numpy as np
import pytest

from mixcomm.gaussian import GaussianBelief, cholesky_psd
from mixcomm.unscented import sigma_points, ut_propagate


class TestSigmaPoints:
    def test_scalar_unit_variance(self):
        pts = sigma_points(GaussianBelief([0.0], [[1.0]])).points
        np.testing.assert_allclose(pts, [[1.0], [-1.0]])

    def test_identity_covariance_2d(self):
        pts = sigma_points(GaussianBelief([0.0, 0.0], np.eye(2))).points
        root2 = np.sqrt(2.0)
        expected = [[root2, 0.0], [0.0, root2], [-root2, 0.0], [0.0, -root2]]
        np.testing.assert_allclose(pts, expected)

    def test_scalar_shift_and_scale(self):
        pts = sigma_points(GaussianBelief([3.0], [[4.0]])).points
        np.testing.assert_allclose(pts, [[5.0], [1.0]])

    def test_point_count(self):
        for s in (1, 2, 3, 5):
            b = GaussianBelief(np.zeros(s), np.eye(s))
            assert sigma_points(b).points.shape == (2 * s, s)

    def test_moment_matching(self):
        rng = np.random.default_rng(11)
        for s in (1, 2, 3):
            a = rng.normal(size=(s, s))
            cov = a @ a.T + 0.5 * np.eye(s)
            mean = rng.normal(size=s)
            pts = sigma_points(GaussianBelief(mean, cov)).points
            emp_mean = pts.mean(axis=0)
            np.testing.assert_allclose(emp_mean, mean, rtol=0, atol=1e-9 * max(1, np.abs(mean).max()))
            centered = pts - mean
            emp_cov = centered.T @ centered / pts.shape[0]
            np.testing.assert_allclose(emp_cov, cov, rtol=1e-8, atol=1e-12)


class TestUtPropagate:
    def test_affine_exactness(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            s = int(rng.integers(1, 4))
            r = int(rng.integers(1, 4))
            a = rng.normal(size=(r, s))
            c = rng.normal(size=r)
            m = rng.normal(size=(s, s))
            cov = m @ m.T + 0.3 * np.eye(s)
            mean = rng.normal(size=s)
            b = GaussianBelief(mean, cov)
            out = ut_propagate(b, lambda y: a @ y + c)
            np.testing.assert_allclose(out.mean, a @ mean + c, rtol=1e-9)
            np.testing.assert_allclose(out.cov, a @ cov @ a.T, rtol=1e-9, atol=1e-12)

    def test_square_documents_approximation(self):
        # True variance of y^2 for y ~ N(0,1) is 2; the symmetric transform
        # maps both sigma points to the same value and reports 0.
        out = ut_propagate(GaussianBelief([0.0], [[1.0]]), lambda y: y**2)
        np.testing.assert_allclose(out.mean, [1.0])
        np.testing.assert_allclose(out.cov, [[0.0]], atol=1e-15)

    def test_identity_map_preserves_belief(self):
        b = GaussianBelief([1.0, 2.0], [[2.0, 0.5], [0.5, 1.0]])
        out = ut_propagate(b, lambda y: y)
        np.testing.assert_allclose(out.mean, b.mean, rtol=1e-12)
        np.testing.assert_allclose(out.cov, b.cov, rtol=1e-12)

    def test_output_cov_symmetric_psd(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            m = rng.normal(size=(2, 2))
            b = GaussianBelief(rng.normal(size=2), m @ m.T + 0.1 * np.eye(2))
            out = ut_propagate(b, lambda y: np.array([y[0] ** 2, np.sin(y[1])]))
            np.testing.assert_array_equal(out.cov, out.cov.T)
            cholesky_psd(out.cov)  # must factor

    def test_repeat_call_bit_identical(self):
        b = GaussianBelief([1.0, -2.0], [[3.0, 1.0], [1.0, 2.0]])
        f = lambda y: np.array([np.exp(y[0] / 10), y[1] ** 2])
        first = ut_propagate(b, f)
        second = ut_propagate(b, f)
        assert np.array_equal(first.mean, second.mean)
        assert np.array_equal(first.cov, second.cov)

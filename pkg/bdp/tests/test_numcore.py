"""Tests for the numeric kernels and random streams."""

import unittest

import numpy as np
from scipy import linalg


def _symmetric_with_spectrum(spectrum, seed):
    rs = np.random.RandomState(seed)
    Q, _ = np.linalg.qr(rs.randn(len(spectrum), len(spectrum)))
    return Q @ np.diag(spectrum) @ Q.T


class TestSoftmax(unittest.TestCase):

    def test_examples(self):
        from ..numcore import softmax

        assert(np.allclose(softmax(np.zeros(5)), 0.2, atol=1e-15))
        assert(np.allclose(softmax([1000.0, 1000.0]), [0.5, 0.5], atol=1e-15))
        assert(np.allclose(softmax([np.log(2), 0.0]), [2 / 3, 1 / 3], atol=1e-15))

    def test_sum_and_argmax(self):
        from ..numcore import softmax

        rs = np.random.RandomState(0)
        for _ in range(200):
            v = rs.randn(rs.randint(1, 10)) * 20
            p = softmax(v)
            assert(abs(p.sum() - 1) <= 1e-12)
            assert(np.all(p > 0) or np.any(v - v.max() < -700))
            assert(np.argmax(p) == np.argmax(v))

    def test_rowwise(self):
        from ..numcore import softmax

        P = softmax(np.array([[0.0, 0.0], [np.log(2), 0.0]]))
        assert(np.allclose(P, [[0.5, 0.5], [2 / 3, 1 / 3]]))

    def test_errors(self):
        from ..numcore import softmax

        with self.assertRaisesRegex(ValueError, "non-finite logits"):
            softmax([0.0, np.nan])
        with self.assertRaisesRegex(ValueError, "non-finite logits"):
            softmax([np.inf, 0.0])
        with self.assertRaises(ValueError):
            softmax([])


class TestDistances(unittest.TestCase):

    def test_l2_distance(self):
        from ..numcore import l2_distance

        assert(l2_distance([0, 1, 0], [0, 1, 0]) == 0)
        assert(abs(l2_distance([0.5, 0.5], [1, 0]) - np.sqrt(0.5)) < 1e-15)
        assert(abs(l2_distance([0, 1], [1, 0]) - np.sqrt(2)) < 1e-15)
        with self.assertRaises(ValueError):
            l2_distance([0, 1], [1, 0, 0])

    def test_row_l2_distance(self):
        from ..numcore import row_l2_distance, one_hot

        Y = one_hot([0, 1], 2)
        P = np.array([[0.5, 0.5], [0.0, 1.0]])
        assert(np.allclose(row_l2_distance(P, Y), [np.sqrt(0.5), 0.0]))


class TestPowerIteration(unittest.TestCase):

    def test_diagonal(self):
        from ..numcore import power_iteration

        A = np.diag([5.0, 1.0, -3.0])
        eig, vec = power_iteration(lambda v: A @ v, 3)
        assert(abs(eig - 5) < 1e-3)
        assert(abs(np.linalg.norm(vec) - 1) < 1e-12)

    def test_negative_dominant(self):
        from ..numcore import power_iteration

        A = np.diag([-6.0, 1.0, 2.0])
        eig, _ = power_iteration(lambda v: A @ v, 3, max_iters=500, tol=1e-12)
        assert(abs(eig + 6) < 1e-6)

    def test_identity(self):
        from ..numcore import power_iteration

        eig, _ = power_iteration(lambda v: v, 4)
        assert(abs(eig - 1) < 1e-12)

    def test_dense_oracle(self):
        from ..numcore import power_iteration, seeded_rng

        for seed in range(10):
            rs = np.random.RandomState(seed)
            dim = rs.randint(2, 13)
            spectrum = rs.uniform(-1.5, 1.5, size=dim)
            spectrum[0] = 3.0 if seed % 2 == 0 else -3.0
            A = _symmetric_with_spectrum(spectrum, seed)
            oracle = linalg.eigh(A, eigvals_only=True)
            expected = oracle[np.argmax(np.abs(oracle))]
            eig, _ = power_iteration(lambda v: A @ v, dim, max_iters=1000, tol=1e-13, rng=seeded_rng(seed))
            assert(abs(eig - expected) < 1e-6)

    def test_wrong_dimension(self):
        from ..numcore import power_iteration

        with self.assertRaises(ValueError):
            power_iteration(lambda v: np.ones(5), 3)
        with self.assertRaises(ValueError):
            power_iteration(lambda v: v, 0)

    def test_zero_start_regenerated(self):
        from ..numcore import power_iteration

        eig, _ = power_iteration(lambda v: 2 * v, 3, v0=np.zeros(3))
        assert(abs(eig - 2) < 1e-12)

    def test_zero_start_exhausted(self):
        from ..numcore import power_iteration

        class ZeroStream:
            def normal(self, size=None):
                return np.zeros(size)

        with self.assertRaises(ValueError):
            power_iteration(lambda v: v, 3, rng=ZeroStream())


class TestCentralDiff(unittest.TestCase):

    def test_quadratic(self):
        from ..numcore import central_diff_gradient

        g = central_diff_gradient(lambda x: 0.5 * np.sum(x ** 2), np.array([1.0, 2.0]), h=1e-5)
        assert(np.allclose(g, [1.0, 2.0], atol=1e-8))

    def test_constant(self):
        from ..numcore import central_diff_gradient

        g = central_diff_gradient(lambda x: 3.0, np.array([1.0, -2.0, 0.5]))
        assert(np.all(g == 0))

    def test_softmax_cross_entropy(self):
        from ..numcore import central_diff_gradient, softmax
        from scipy.special import logsumexp

        rs = np.random.RandomState(1)
        M = rs.randn(3, 4)
        x = rs.randn(4)
        label = 2

        def f(xx):
            logits = M @ xx
            return logsumexp(logits) - logits[label]

        p = softmax(M @ x)
        y = np.zeros(3)
        y[label] = 1
        analytic = M.T @ (p - y)
        assert(np.allclose(central_diff_gradient(f, x), analytic, atol=1e-6))

    def test_errors(self):
        from ..numcore import central_diff_gradient

        with self.assertRaises(ValueError):
            central_diff_gradient(lambda x: 0.0, np.zeros(2), h=0)
        with self.assertRaises(FloatingPointError):
            central_diff_gradient(lambda x: np.inf if x[1] > 0 else 0.0, np.zeros(2))


class TestRng(unittest.TestCase):

    def test_determinism(self):
        from ..numcore import seeded_rng

        a = seeded_rng(42).uniform(size=100)
        b = seeded_rng(42).uniform(size=100)
        assert(np.array_equal(a, b))

    def test_distinct_seeds(self):
        from ..numcore import seeded_rng

        a = seeded_rng(1).normal(size=100)
        b = seeded_rng(2).normal(size=100)
        assert(np.any(a != b))

    def test_shuffle_is_permutation(self):
        from ..numcore import seeded_rng

        x = seeded_rng(3).shuffle(list(range(10)))
        assert(sorted(x) == list(range(10)))
        perm = seeded_rng(3).permutation(10)
        assert(sorted(perm.tolist()) == list(range(10)))

    def test_derive(self):
        from ..numcore import seeded_rng

        root = seeded_rng(7)
        first = root.derive('search').uniform(size=5)
        root.uniform(size=50)
        again = root.derive('search').uniform(size=5)
        other = root.derive('eig').uniform(size=5)
        assert(np.array_equal(first, again))
        assert(np.any(first != other))

    def test_bad_seed(self):
        from ..numcore import RngStream

        with self.assertRaises(ValueError):
            RngStream(-1)

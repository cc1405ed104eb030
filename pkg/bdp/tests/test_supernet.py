"""Tests for the search space, forward/backward passes and genotypes."""

import unittest

import numpy as np


def _small_problem(seed, batch=8):
    from ..data import gen_blobs
    from ..numcore import seeded_rng
    from ..supernet import SpaceConfig, build_supernet

    space = SpaceConfig(nodes_per_cell=3, feature_dim=3, input_dim=2, num_classes=2)
    rng = seeded_rng(seed)
    net, _ = build_supernet(space, rng.derive('init'))
    from ..supernet import ArchParams
    alpha = ArchParams(rng.derive('alpha').normal(size=(space.num_edges, space.num_ops)))
    data = gen_blobs(2, batch // 2, 2, noise_sigma=1.0, layout='separable', seed=seed)
    return space, net, alpha, data.features, data.labels


def _rel_error(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)


class TestSpace(unittest.TestCase):

    def test_alpha_shape(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet

        net, alpha = build_supernet(SpaceConfig(nodes_per_cell=4), seeded_rng(0))
        assert(alpha.shape == (6, 5))
        assert(np.allclose(alpha.betas(), 0.2, atol=1e-15))

        _, alpha = build_supernet(SpaceConfig(nodes_per_cell=4, num_cells=2), seeded_rng(0))
        assert(alpha.shape == (12, 5))

    def test_edge_order(self):
        from ..supernet import SpaceConfig

        space = SpaceConfig(nodes_per_cell=4, num_cells=2)
        assert(space.cell_edges() == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)])
        assert(space.edge_name(7) == 'cell1.edge0->2')

    def test_same_seed_same_weights(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet

        a, _ = build_supernet(SpaceConfig(), seeded_rng(5))
        b, _ = build_supernet(SpaceConfig(), seeded_rng(5))
        assert(np.array_equal(a.flat_params(), b.flat_params()))
        s = 1 / np.sqrt(8)
        assert(np.all(np.abs(a.flat_params()) <= s))

    def test_parameter_count(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet

        # one edge, two parametric ops of 4x4 + 4, head 2x4 + 2
        space = SpaceConfig(nodes_per_cell=2, feature_dim=4)
        net, _ = build_supernet(space, seeded_rng(0))
        assert(space.num_parameters() == 50)
        assert(net.num_parameters() == 50)

        for space in [SpaceConfig(), SpaceConfig(nodes_per_cell=5, num_cells=2, input_dim=3, num_classes=4)]:
            net, _ = build_supernet(space, seeded_rng(0))
            assert(net.num_parameters() == space.num_parameters())

    def test_parameter_free_ops_own_nothing(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet

        net, _ = build_supernet(SpaceConfig(candidate_ops=('zero', 'identity', 'meanpool')), seeded_rng(0))
        assert(sorted(net.params) == ['head.W', 'head.b'])

    def test_invalid_space(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet

        with self.assertRaises(ValueError):
            build_supernet(SpaceConfig(feature_dim=0, input_dim=2), seeded_rng(0))
        with self.assertRaises(ValueError):
            build_supernet(SpaceConfig(candidate_ops=()), seeded_rng(0))
        with self.assertRaises(ValueError):
            SpaceConfig(candidate_ops=('identity', 'conv3x3'))
        with self.assertRaises(ValueError):
            build_supernet(SpaceConfig(candidate_ops=('identity', 'identity')), seeded_rng(0))


class TestMixedEdge(unittest.TestCase):

    def setUp(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet

        self.space = SpaceConfig(nodes_per_cell=2, feature_dim=4)
        self.net, _ = build_supernet(self.space, seeded_rng(1))
        self.x = np.array([0.3, -1.2, 2.0, 0.5])

    def test_identity_limit(self):
        from ..supernet import mixed_edge_forward

        out = mixed_edge_forward(self.net, 0, [-50.0, 50.0, -50.0, -50.0, -50.0], self.x)
        assert(np.allclose(out, self.x, atol=1e-9))

    def test_zero_limit(self):
        from ..supernet import mixed_edge_forward

        out = mixed_edge_forward(self.net, 0, [50.0, -50.0, -50.0, -50.0, -50.0], self.x)
        assert(np.allclose(out, 0, atol=1e-9))

    def test_zero_identity_uniform(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet, mixed_edge_forward

        space = SpaceConfig(nodes_per_cell=2, feature_dim=4, candidate_ops=('zero', 'identity'))
        net, _ = build_supernet(space, seeded_rng(0))
        out = mixed_edge_forward(net, 0, [0.0, 0.0], self.x)
        assert(np.allclose(out, self.x / 2, atol=1e-15))

    def test_dimension_mismatch(self):
        from ..supernet import mixed_edge_forward

        with self.assertRaises(ValueError):
            mixed_edge_forward(self.net, 0, np.zeros(5), np.ones(3))
        with self.assertRaises(ValueError):
            mixed_edge_forward(self.net, 0, np.zeros(4), self.x)


class TestForward(unittest.TestCase):

    def test_all_zero_genotype_gives_softmax_bias(self):
        from ..numcore import seeded_rng, softmax
        from ..supernet import SpaceConfig, build_supernet, Genotype, genotype_forward

        space = SpaceConfig()
        net, _ = build_supernet(space, seeded_rng(2))
        g = Genotype((0,) * space.num_edges, space.num_ops)
        x = seeded_rng(3).normal(size=space.input_dim)
        assert(np.allclose(genotype_forward(net, g, x), softmax(net.params['head.b']), atol=1e-15))

    def test_probs_sum_to_one(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet, forward

        space = SpaceConfig(num_cells=2)
        net, alpha = build_supernet(space, seeded_rng(4))
        X = seeded_rng(5).normal(size=(10, space.input_dim))
        probs, _ = forward(net, alpha, X)
        assert(probs.shape == (10, 2))
        assert(np.all(np.abs(probs.sum(axis=1) - 1) <= 1e-12))

        p1, _ = forward(net, alpha, X[0])
        assert(p1.shape == (2,))
        assert(np.array_equal(p1, forward(net, alpha, X[0])[0]))

    def test_identity_only_two_nodes(self):
        from ..numcore import seeded_rng, softmax
        from ..supernet import SpaceConfig, build_supernet, forward

        space = SpaceConfig(nodes_per_cell=2, feature_dim=3, candidate_ops=('identity',))
        net, alpha = build_supernet(space, seeded_rng(6))
        x = np.array([1.0, -2.0, 0.5])
        expected = softmax(net.params['head.W'] @ x + net.params['head.b'])
        probs, _ = forward(net, alpha, x)
        assert(np.allclose(probs, expected, atol=1e-14))

    def test_non_finite_activation(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet, forward

        space = SpaceConfig(nodes_per_cell=3, feature_dim=3)
        net, alpha = build_supernet(space, seeded_rng(0))
        with np.errstate(all='ignore'):
            with self.assertRaisesRegex(FloatingPointError, "cell 0 node 1"):
                forward(net, alpha, np.array([np.inf, 0.0, 0.0]))

    def test_input_mismatch(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet, forward

        net, alpha = build_supernet(SpaceConfig(feature_dim=4), seeded_rng(0))
        with self.assertRaises(ValueError):
            forward(net, alpha, np.zeros(3))

    def test_stem(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet, forward

        space = SpaceConfig(feature_dim=6, input_dim=2)
        net, alpha = build_supernet(space, seeded_rng(0))
        assert(net.params['stem.W'].shape == (6, 2))
        probs, _ = forward(net, alpha, np.zeros((3, 2)))
        assert(probs.shape == (3, 2))


class TestBackward(unittest.TestCase):

    def test_gradients_match_finite_differences(self):
        from ..numcore import central_diff_gradient
        from ..supernet import batch_loss, flatten_grads, loss_and_gradients

        for seed in range(10):
            space, net, alpha, X, y = _small_problem(seed)
            assert(X.shape == (8, 2))
            assert(net.num_parameters() + alpha.alpha.size <= 200)
            grads = loss_and_gradients(net, alpha, X, y)

            def loss_w(w):
                return batch_loss(net.copy().set_flat_params(w), alpha, X, y)

            def loss_alpha(a):
                return batch_loss(net, alpha.with_flat(a), X, y)

            num_w = central_diff_gradient(loss_w, net.flat_params(), h=1e-5)
            num_a = central_diff_gradient(loss_alpha, alpha.flat(), h=1e-5)
            assert(_rel_error(flatten_grads(grads.grad_w), num_w) <= 1e-5)
            assert(_rel_error(grads.grad_alpha.ravel(), num_a) <= 1e-5)

    def test_errors_and_probs(self):
        from ..numcore import one_hot, row_l2_distance
        from ..supernet import loss_and_gradients

        _, net, alpha, X, y = _small_problem(0)
        grads = loss_and_gradients(net, alpha, X, y)
        assert(grads.probs.shape == (len(y), 2))
        assert(np.allclose(grads.errors, row_l2_distance(grads.probs, one_hot(y, 2))))
        assert(np.all(grads.errors <= np.sqrt(2)))

    def test_perfect_prediction(self):
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet, loss_and_gradients

        space = SpaceConfig(nodes_per_cell=2, feature_dim=3, candidate_ops=('identity',))
        net, alpha = build_supernet(space, seeded_rng(0))
        net.params['head.W'] = np.zeros((2, 3))
        net.params['head.b'] = np.array([100.0, -100.0])
        grads = loss_and_gradients(net, alpha, np.ones((1, 3)), np.array([0]))
        assert(grads.errors[0] < 1e-12)
        assert(grads.loss < 1e-12)

    def test_alpha_shift_invariance(self):
        from ..supernet import ArchParams, loss_and_gradients

        _, net, alpha, X, y = _small_problem(3)
        shifted = ArchParams(alpha.alpha + 7.5)
        a = loss_and_gradients(net, alpha, X, y)
        b = loss_and_gradients(net, shifted, X, y)
        assert(np.allclose(a.probs, b.probs, atol=1e-12))
        for key in a.grad_w:
            assert(np.allclose(a.grad_w[key], b.grad_w[key], atol=1e-12))

    def test_tape_mismatch(self):
        from ..supernet import backward, forward_batch

        _, net, alpha, X, y = _small_problem(0)
        _, tape = forward_batch(net, alpha, X)
        with self.assertRaises(ValueError):
            backward(net, alpha, tape, y[:-1])

    def test_genotype_has_no_alpha_gradient(self):
        from ..supernet import discretize, loss_and_gradients

        _, net, alpha, X, y = _small_problem(1)
        grads = loss_and_gradients(net, discretize(alpha), X, y)
        assert(grads.grad_alpha is None)


class TestGenotype(unittest.TestCase):

    def test_discretize(self):
        from ..supernet import discretize

        g = discretize(np.array([[0.1, 2.0, -1.0, 0.0, 0.0], [0.0] * 5]))
        assert(g.chosen_op == (1, 0))
        rs = np.random.RandomState(0)
        a = rs.randn(6, 5)
        assert(discretize(a) == discretize(a + rs.randn(6, 1) * 10))

    def test_genotype_forward_matches_one_hot_alpha(self):
        from ..numcore import seeded_rng
        from ..supernet import ArchParams, SpaceConfig, build_supernet, discretize, forward, genotype_forward

        space = SpaceConfig()
        net, _ = build_supernet(space, seeded_rng(8))
        chosen = seeded_rng(9).integers(0, space.num_ops, size=space.num_edges)
        hot = np.zeros((space.num_edges, space.num_ops))
        hot[np.arange(space.num_edges), chosen] = 60.0
        alpha = ArchParams(hot)
        x = seeded_rng(10).normal(size=(5, space.input_dim))
        probs, _ = forward(net, alpha, x)
        assert(np.allclose(genotype_forward(net, discretize(alpha), x), probs, atol=1e-9))

    def test_invalid_op_index(self):
        from ..supernet import Genotype

        with self.assertRaises(ValueError):
            Genotype((0, 5), 5)

    def test_text_format(self):
        from ..supernet import Genotype, SpaceConfig

        space = SpaceConfig(nodes_per_cell=3, num_cells=2)
        g = Genotype((0, 1, 2, 3, 4, 3), space.num_ops)
        text = g.to_text(space)
        lines = text.splitlines()
        assert(lines[0] == 'cell0.edge0->1: zero')
        assert(lines[3] == 'cell1.edge0->1: linearact')
        assert(Genotype.from_text(text, space) == g)

    def test_text_errors(self):
        from ..supernet import Genotype, SpaceConfig

        space = SpaceConfig(nodes_per_cell=2)
        with self.assertRaisesRegex(ValueError, "line 1"):
            Genotype.from_text("edge 0 -> 1 identity\n", space)
        with self.assertRaisesRegex(ValueError, "line 1"):
            Genotype.from_text("cell0.edge0->1: conv\n", space)
        with self.assertRaises(ValueError):
            Genotype.from_text("cell0.edge0->1: zero\ncell0.edge0->2: zero\n", space)
        with self.assertRaises(ValueError):
            Genotype((0, 0), 5).check_space(space)

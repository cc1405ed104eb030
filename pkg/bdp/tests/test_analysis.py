"""Tests for Hessian estimates, the Taylor bound and the trajectory/heatmap exports."""

import os
import tempfile
import unittest

import numpy as np
from scipy import linalg


def _quadratic(A):
    # gradient of 0.5 * x' A x
    return lambda x: A @ x


def _records(remaining):
    from ..analysis import TrajectoryRecord

    out = []
    for ep, (rt, rv) in enumerate(remaining, start=1):
        out.append(TrajectoryRecord(epoch=ep, train_loss=0.5, val_loss=0.6, train_acc=0.75, val_acc=0.5,
                                    test_acc=0.25, remaining_train=rt, remaining_val=rv, balance_train=1.0,
                                    balance_val=0.5, eig_max=(0.123456789 if ep % 2 == 0 else None)))
    return out


class TestHvp(unittest.TestCase):

    def test_quadratic(self):
        from ..analysis import hvp

        rs = np.random.RandomState(0)
        B = rs.randn(5, 5)
        A = B + B.T
        v = rs.randn(5)
        out = hvp(_quadratic(A), rs.randn(5), v)
        assert(np.allclose(out, A @ v, atol=1e-8))

    def test_linear_in_direction(self):
        from ..analysis import hvp

        A = np.diag([1.0, 2.0, 3.0])
        alpha = np.zeros(3)
        v = np.array([1.0, -1.0, 0.5])
        assert(np.allclose(hvp(_quadratic(A), alpha, 3 * v), 3 * hvp(_quadratic(A), alpha, v), atol=1e-10))

    def test_tiny_direction(self):
        from ..analysis import hvp

        with self.assertRaises(ValueError):
            hvp(_quadratic(np.eye(3)), np.zeros(3), np.full(3, 1e-14))
        with self.assertRaises(ValueError):
            hvp(_quadratic(np.eye(3)), np.zeros(3), np.ones(2))

    def test_non_finite_gradient(self):
        from ..analysis import hvp

        with self.assertRaises(FloatingPointError):
            hvp(lambda x: np.full(3, np.nan), np.zeros(3), np.ones(3))

    def test_default_step(self):
        from ..analysis import default_step

        assert(default_step(np.zeros(4)) == 1e-3)
        assert(abs(default_step(np.array([3.0, 4.0])) - 6e-3) < 1e-15)


class TestDominantEigenvalue(unittest.TestCase):

    def test_identity(self):
        from ..analysis import dominant_eigenvalue

        assert(abs(dominant_eigenvalue(_quadratic(np.eye(6)), np.zeros(6)) - 1) < 1e-6)

    def test_diagonal(self):
        from ..analysis import dominant_eigenvalue

        A = np.diag([4.0, 1.0, 1.0, 1.0])
        eig = dominant_eigenvalue(_quadratic(A), np.ones(4), max_iters=200, tol=1e-10)
        assert(abs(eig - 4) < 1e-6)

    def test_dense_oracle(self):
        from ..analysis import dominant_eigenvalue
        from ..numcore import seeded_rng

        for seed in range(10):
            rs = np.random.RandomState(seed)
            dim = rs.randint(2, 13)
            spectrum = rs.uniform(-1, 1, size=dim)
            spectrum[0] = 2.5
            Q, _ = np.linalg.qr(rs.randn(dim, dim))
            A = Q @ np.diag(spectrum) @ Q.T
            oracle = linalg.eigh(A, eigvals_only=True)
            expected = oracle[np.argmax(np.abs(oracle))]
            eig = dominant_eigenvalue(_quadratic(A), rs.randn(dim), rng=seeded_rng(seed), max_iters=500, tol=1e-12)
            assert(abs(eig - expected) <= 1e-3 * abs(expected))

    def test_deterministic(self):
        from ..analysis import dominant_eigenvalue
        from ..numcore import seeded_rng

        A = np.diag([3.0, 2.0, 1.0])
        a = dominant_eigenvalue(_quadratic(A), np.zeros(3), rng=seeded_rng(4), max_iters=3)
        b = dominant_eigenvalue(_quadratic(A), np.zeros(3), rng=seeded_rng(4), max_iters=3)
        assert(a == b)

    def test_validation_loss_gradient(self):
        from ..analysis import validation_loss_gradient
        from ..data import gen_blobs
        from ..numcore import central_diff_gradient, seeded_rng
        from ..supernet import SpaceConfig, batch_loss, build_supernet, ArchParams

        space = SpaceConfig(nodes_per_cell=3, feature_dim=3, input_dim=2)
        net, alpha = build_supernet(space, seeded_rng(0))
        data = gen_blobs(2, 10, 2, seed=1)
        X, y = data.features, data.labels
        flat = seeded_rng(2).normal(size=alpha.alpha.size)
        g = validation_loss_gradient(net, X, y)(flat)
        num = central_diff_gradient(lambda a: batch_loss(net, alpha.with_flat(a), X, y), flat)
        assert(np.linalg.norm(g - num) <= 1e-5 * max(np.linalg.norm(g), 1e-12))
        assert(isinstance(alpha, ArchParams))

    def test_supernet_eigenvalue_is_finite(self):
        from ..analysis import dominant_eigenvalue, validation_loss_gradient
        from ..data import gen_blobs
        from ..numcore import seeded_rng
        from ..supernet import SpaceConfig, build_supernet

        space = SpaceConfig(nodes_per_cell=3, feature_dim=3, input_dim=2)
        net, alpha = build_supernet(space, seeded_rng(0))
        data = gen_blobs(2, 10, 2, seed=1)
        loss_grad = validation_loss_gradient(net, data.features, data.labels)
        a = dominant_eigenvalue(loss_grad, alpha, rng=seeded_rng(5), max_iters=10)
        b = dominant_eigenvalue(loss_grad, alpha, rng=seeded_rng(5), max_iters=10)
        assert(np.isfinite(a))
        assert(a == b)


class TestTaylorBound(unittest.TestCase):

    def test_alpha_space(self):
        from ..analysis import taylor_bound
        from ..supernet import ArchParams, Genotype

        star = ArchParams([[0.0, 0.0]])
        assert(abs(taylor_bound(2.0, star, Genotype((0,), 2), space='alpha') - 2.0) < 1e-15)
        assert(taylor_bound(0.0, star, Genotype((0,), 2), space='alpha') == 0)
        assert(taylor_bound(-3.0, ArchParams([[1.0, 0.0]]), Genotype((0,), 2), space='alpha') == 0)

    def test_beta_space(self):
        from ..analysis import taylor_bound
        from ..supernet import ArchParams, Genotype

        star = ArchParams([[0.0, 0.0]])
        # betas (0.5, 0.5) against (1, 0)
        assert(abs(taylor_bound(2.0, star, Genotype((0,), 2)) - 1.0) < 1e-15)

    def test_errors(self):
        from ..analysis import taylor_bound
        from ..supernet import ArchParams, Genotype

        with self.assertRaises(ValueError):
            taylor_bound(1.0, ArchParams(np.zeros((2, 2))), Genotype((0,), 2))
        with self.assertRaises(ValueError):
            taylor_bound(1.0, ArchParams(np.zeros((1, 2))), Genotype((0,), 2), space='gamma')


class TestHeatmap(unittest.TestCase):

    def test_uniform_alpha(self):
        from ..analysis import export_heatmap
        from ..supernet import ArchParams, SpaceConfig, discretize

        space = SpaceConfig()
        alpha = ArchParams.zeros(space)
        df = export_heatmap(alpha, space)
        assert(list(df.columns) == ['edge', 'zero', 'identity', 'linear', 'linearact', 'meanpool', 'chosen'])
        assert(np.allclose(df[space.op_names].to_numpy(), 0.2))
        assert(list(df['chosen']) == [space.op_names[kk] for kk in discretize(alpha).chosen_op])
        assert(df['edge'].iloc[0] == 'cell0.edge0->1')

    def test_rows_and_file(self):
        from ..analysis import export_heatmap, write_heatmap
        from ..numcore import seeded_rng
        from ..supernet import ArchParams, SpaceConfig, discretize

        space = SpaceConfig(num_cells=2)
        alpha = ArchParams(seeded_rng(0).normal(size=(space.num_edges, space.num_ops)))
        df = export_heatmap(alpha, space)
        assert(np.allclose(df[space.op_names].sum(axis=1), 1, atol=1e-12))
        assert(list(df['chosen']) == [space.op_names[kk] for kk in discretize(alpha).chosen_op])

        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'heatmap.csv')
            write_heatmap(df, path)
            with open(path, 'rb') as f:
                raw = f.read()
        assert(b'\r\n' not in raw)
        lines = raw.decode('utf-8').splitlines()
        assert(lines[0] == 'edge,zero,identity,linear,linearact,meanpool,chosen')
        assert(len(lines) == space.num_edges + 1)
        assert(len(lines[1].split(',')[1].split('.')[1]) == 6)

    def test_shape_mismatch(self):
        from ..analysis import export_heatmap
        from ..supernet import ArchParams, SpaceConfig

        with self.assertRaises(ValueError):
            export_heatmap(ArchParams(np.zeros((2, 5))), SpaceConfig())


class TestTrajectory(unittest.TestCase):

    def test_round_trip_with_missing_eigenvalues(self):
        from ..analysis import TRAJECTORY_COLUMNS, read_trajectory, write_trajectory

        records = _records([(10, 10), (9, 9), (9, 8)])
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'trajectory.csv')
            write_trajectory(records, path)
            with open(path, 'r', newline='') as f:
                text = f.read()
            df = read_trajectory(path)
        lines = text.split('\n')
        assert(lines[0] == ','.join(TRAJECTORY_COLUMNS))
        # eig_max is blank where it was not computed
        assert(lines[1].endswith(','))
        assert(lines[2].endswith(',0.123457'))
        assert(df['remaining_val'].tolist() == [10, 9, 8])
        assert(np.isnan(df['eig_max'].iloc[0]))

    def test_monotone_check(self):
        from ..analysis import check_monotone

        check_monotone(_records([(10, 10), (10, 10)]))
        with self.assertRaises(ValueError):
            check_monotone(_records([(10, 10), (11, 10)]))
        with self.assertRaises(ValueError):
            check_monotone(_records([(10, 9), (10, 10)]))

    def test_missing_columns(self):
        from ..analysis import read_trajectory

        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'bad.csv')
            with open(path, 'w') as f:
                f.write('epoch,train_loss\n1,0.5\n')
            with self.assertRaises(ValueError):
                read_trajectory(path)

    def test_class_count_frame(self):
        from ..analysis import class_count_frame

        df = class_count_frame([(2, 'train', 0, 5), (2, 'train', 1, 4)])
        assert(list(df.columns) == ['epoch', 'set', 'class', 'count'])
        assert(df['count'].sum() == 9)

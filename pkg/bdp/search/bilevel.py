"""First-order bi-level architecture search with progressive data pruning.

Each epoch pairs shuffled validation and training batches. For every pair the
architecture parameters take a gradient step on the validation batch, then the
supernet weights take a momentum SGD step on the training batch. Every visited
sample's prediction error is recorded for the pruning scores.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from tqdm import trange

from ..analysis import (TrajectoryRecord, dominant_eigenvalue, taylor_bound,
                        validation_loss_gradient)
from ..pruning import (OneShotConfig, PruneConfig, balance_degree, one_shot_el2n_prune,
                       progressive_prune)
from ..supernet import (ArchParams, SpaceConfig, build_supernet, discretize, forward_batch,
                        cross_entropy, loss_and_gradients)

logger = logging.getLogger(__name__)


# --------------------------------------------------------------
# Architecture regularisers


def no_regularizer(alpha):
    """Penalty and gradient of the identity hook: nothing is added."""
    return 0.0, None


REGULARIZERS = {
    'none': no_regularizer,
}


def get_regularizer(name):
    if name not in REGULARIZERS:
        raise ValueError("unknown regularizer '{0}', expected one of {1}".format(name, list(REGULARIZERS)))
    return REGULARIZERS[name]


# --------------------------------------------------------------
# Configuration and state


@dataclass(frozen=True)
class SearchConfig:
    """Settings of one search run.

    Attributes
    ----------
    epochs : int
    batch_size : int
    lr_w, lr_alpha : float
    momentum_w : float
    regularizer : str
        Key of :py:data:`REGULARIZERS`.
    space : SpaceConfig
    prune : PruneConfig
    one_shot : OneShotConfig or None
        Replaces progressive pruning by a single EL2N step when set.
    eig_mode : {'pruning', 'every', 'never'}
        Epochs on which the dominant eigenvalue is computed.
    eig_max_iters : int
    eig_tol : float
    taylor_space : {'beta', 'alpha'}
    use_tqdm : bool
    """

    epochs: int = 50
    batch_size: int = 32
    lr_w: float = 0.025
    lr_alpha: float = 3e-3
    momentum_w: float = 0.9
    regularizer: str = 'none'
    space: SpaceConfig = field(default_factory=SpaceConfig)
    prune: PruneConfig = field(default_factory=PruneConfig)
    one_shot: OneShotConfig = None
    eig_mode: str = 'pruning'
    eig_max_iters: int = 50
    eig_tol: float = 1e-4
    taylor_space: str = 'beta'
    use_tqdm: bool = False

    def validate(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1, got {0}".format(self.epochs))
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1, got {0}".format(self.batch_size))
        if self.lr_w <= 0 or self.lr_alpha <= 0:
            raise ValueError("learning rates must be > 0, got lr_w={0} lr_alpha={1}".format(self.lr_w, self.lr_alpha))
        if not 0 <= self.momentum_w < 1:
            raise ValueError("momentum_w must be in [0, 1), got {0}".format(self.momentum_w))
        get_regularizer(self.regularizer)
        if self.eig_mode not in ('pruning', 'every', 'never'):
            raise ValueError("unknown eig_mode '{0}'".format(self.eig_mode))
        if self.taylor_space not in ('beta', 'alpha'):
            raise ValueError("unknown taylor_space '{0}'".format(self.taylor_space))
        self.space.validate()
        self.prune.validate()
        if self.prune.enabled and self.epochs % self.prune.interval != 0:
            raise ValueError("pruning interval {0} does not divide {1} epochs".format(
                self.prune.interval, self.epochs))
        if self.one_shot is not None:
            self.one_shot.validate(self.epochs)
            if self.prune.enabled:
                raise ValueError("one-shot pruning requires progressive pruning ratios of 0")
        return self

    @property
    def rounds(self):
        return self.prune.rounds(self.epochs)


@dataclass
class EpochStats:
    """Losses and accuracies of one epoch, with set sizes and balance."""

    epoch: int
    train_loss: float
    val_loss: float
    train_acc: float
    val_acc: float
    test_acc: float
    remaining_train: int
    remaining_val: int
    balance_train: float
    balance_val: float


@dataclass
class SearchState:
    """Everything a search epoch reads and mutates."""

    config: SearchConfig
    dataset: object
    net: object
    alpha: ArchParams
    train: object
    val: object
    test_ids: np.ndarray
    velocity: dict
    rng: object
    epoch: int = 0


@dataclass
class SearchResult:
    genotype: object
    alpha: ArchParams
    net: object
    trajectory: list
    class_counts: list
    events: list
    train: object
    val: object
    final_eig: float = None
    taylor: float = None


def init_velocity(net):
    return {kk: np.zeros_like(vv) for kk, vv in net.params.items()}


# --------------------------------------------------------------
# Updates


def update_alpha(net, alpha, X, y, lr_alpha, regularizer='none'):
    """One gradient step of alpha on a validation batch.

    Returns
    -------
    alpha : ArchParams
        Updated copy; the input is not modified.
    grads : Gradients
        Batch gradients, including the per-sample errors to record.
    """
    grads = loss_and_gradients(net, alpha, X, y)
    step = grads.grad_alpha
    _, reg_grad = get_regularizer(regularizer)(alpha.alpha)
    if reg_grad is not None:
        step = step + reg_grad
    if not np.all(np.isfinite(step)):
        raise FloatingPointError("non-finite gradient for alpha")
    return ArchParams(alpha.alpha - lr_alpha * step), grads


def update_weights(net, alpha, X, y, lr_w, velocity, momentum=0.9):
    """One momentum SGD step of w on a training batch.

    ``v = momentum * v + g`` then ``w = w - lr_w * v``. The net and velocity are
    updated in place; alpha is only read.

    Returns
    -------
    grads : Gradients
    """
    grads = loss_and_gradients(net, alpha, X, y)
    for key, gg in grads.grad_w.items():
        if not np.all(np.isfinite(gg)):
            raise FloatingPointError("non-finite gradient for weights {0}".format(key))
    for key, gg in grads.grad_w.items():
        velocity[key] = momentum * velocity[key] + gg
        net.params[key] = net.params[key] - lr_w * velocity[key]
    return grads


def evaluate(net, arch, X, y):
    """Mean loss and accuracy of an architecture on a set of samples."""
    y = np.asarray(y, dtype=np.int64)
    if len(y) == 0:
        raise ValueError("cannot evaluate on an empty set")
    probs, tape = forward_batch(net, arch, X)
    loss = float(cross_entropy(tape.logits, y).mean())
    acc = float(np.mean(np.argmax(probs, axis=1) == y))
    return loss, acc


# --------------------------------------------------------------
# Epochs


def search_epoch(state):
    """Run one epoch of paired alpha and w updates.

    The shorter of the two batch lists cycles so every active sample of both
    sets is visited at least once; a sample's error for the epoch comes from
    its first visit.

    Returns
    -------
    EpochStats
        Accuracies measured after the updates on the active training ids, the
        active validation ids and the test ids.
    """
    if state.train.is_empty() or state.val.is_empty():
        raise RuntimeError("set exhausted")

    cfg = state.config
    epoch = state.epoch + 1
    X, y = state.dataset.features, state.dataset.labels

    t_batches = state.train.batches(state.rng, cfg.batch_size)
    v_batches = state.val.batches(state.rng, cfg.batch_size)
    n_pairs = max(len(t_batches), len(v_batches))

    t_loss, t_seen, v_loss, v_seen = 0.0, 0, 0.0, 0
    for kk in range(n_pairs):
        vb = v_batches[kk % len(v_batches)]
        tb = t_batches[kk % len(t_batches)]
        try:
            state.alpha, vgrads = update_alpha(state.net, state.alpha, X[vb], y[vb], cfg.lr_alpha, cfg.regularizer)
            state.val.record(epoch, vb, vgrads.errors)
            tgrads = update_weights(state.net, state.alpha, X[tb], y[tb], cfg.lr_w, state.velocity, cfg.momentum_w)
            state.train.record(epoch, tb, tgrads.errors)
        except FloatingPointError as e:
            logger.error('epoch {0} aborted at batch pair {1} of {2}'.format(epoch, kk + 1, n_pairs))
            raise FloatingPointError("epoch {0}, batch pair {1}: {2}".format(epoch, kk + 1, e)) from e
        v_loss += vgrads.loss * len(vb)
        v_seen += len(vb)
        t_loss += tgrads.loss * len(tb)
        t_seen += len(tb)

    tr, va = state.train.active_ids, state.val.active_ids
    _, train_acc = evaluate(state.net, state.alpha, X[tr], y[tr])
    _, val_acc = evaluate(state.net, state.alpha, X[va], y[va])
    _, test_acc = evaluate(state.net, state.alpha, X[state.test_ids], y[state.test_ids])

    state.epoch = epoch
    return EpochStats(
        epoch=epoch,
        train_loss=t_loss / t_seen,
        val_loss=v_loss / v_seen,
        train_acc=train_acc,
        val_acc=val_acc,
        test_acc=test_acc,
        remaining_train=state.train.size,
        remaining_val=state.val.size,
        balance_train=balance_degree(state.train.class_counts),
        balance_val=balance_degree(state.val.class_counts),
    )


def state_eigenvalue(state, rng):
    """Dominant Hessian eigenvalue of the loss on the whole active validation set."""
    va = state.val.active_ids
    loss_grad = validation_loss_gradient(state.net, state.dataset.features[va], state.dataset.labels[va])
    return dominant_eigenvalue(loss_grad, state.alpha, rng=rng,
                               max_iters=state.config.eig_max_iters, tol=state.config.eig_tol)


def _class_count_rows(epoch, set_state):
    return [(epoch, set_state.name, cc, int(nn)) for cc, nn in enumerate(set_state.class_counts)]


def run_search(config, dataset, train, val, test_ids, rng):
    """Search an architecture while progressively pruning both sets.

    Parameters
    ----------
    config : SearchConfig
    dataset : Dataset
    train, val : SetState
        Modified in place by pruning.
    test_ids : array_like of int
        Held-out ids, only ever evaluated.
    rng : RngStream
        Root stream; ``init``, ``search`` and ``eig`` streams are derived from it.

    Returns
    -------
    SearchResult
    """
    config.validate()
    space = config.space
    if space.input_dim != dataset.dim:
        raise ValueError("space input_dim {0} does not match dataset dimension {1}".format(
            space.input_dim, dataset.dim))
    if space.num_classes != dataset.num_classes:
        raise ValueError("space has {0} classes but dataset has {1}".format(space.num_classes, dataset.num_classes))

    net, alpha = build_supernet(space, rng.derive('init'))
    state = SearchState(config=config, dataset=dataset, net=net, alpha=alpha, train=train, val=val,
                        test_ids=np.asarray(test_ids, dtype=np.int64), velocity=init_velocity(net),
                        rng=rng.derive('search'))
    eig_rng = rng.derive('eig')
    prune = config.prune
    rounds = config.rounds

    logger.info('searching {0} epochs on {1} train / {2} val / {3} test samples'.format(
        config.epochs, train.size, val.size, len(state.test_ids)))

    trajectory, class_rows, events = [], [], []
    if config.use_tqdm:
        iterator = trange(1, config.epochs + 1, desc="search")
    else:
        iterator = range(1, config.epochs + 1)
    for epoch in iterator:
        stats = search_epoch(state)
        pruning_epoch = epoch % prune.interval == 0

        eig = None
        if config.eig_mode == 'every' or (config.eig_mode == 'pruning' and pruning_epoch):
            eig = state_eigenvalue(state, eig_rng)

        if pruning_epoch and prune.enabled:
            events.append(progressive_prune(state.train, epoch, prune.p_train, prune.criterion_train, prune, rounds))
            events.append(progressive_prune(state.val, epoch, prune.p_val, prune.criterion_val, prune, rounds))

        one_shot = config.one_shot
        one_shot_epoch = one_shot is not None and epoch == one_shot.warmup_epochs
        if one_shot_epoch:
            for set_state, tail in ((state.train, one_shot.train), (state.val, one_shot.val)):
                if tail is not None:
                    one_shot_el2n_prune(set_state, epoch, tail, one_shot.fraction)

        if pruning_epoch or one_shot_epoch:
            class_rows += _class_count_rows(epoch, state.train) + _class_count_rows(epoch, state.val)

        record = TrajectoryRecord(
            epoch=epoch,
            train_loss=stats.train_loss,
            val_loss=stats.val_loss,
            train_acc=stats.train_acc,
            val_acc=stats.val_acc,
            test_acc=stats.test_acc,
            remaining_train=state.train.size,
            remaining_val=state.val.size,
            balance_train=balance_degree(state.train.class_counts),
            balance_val=balance_degree(state.val.class_counts),
            eig_max=eig,
        )
        trajectory.append(record)

        msg = 'epoch {0}/{1} loss {2:.4f}/{3:.4f} acc {4:.3f}/{5:.3f}/{6:.3f} remain {7}/{8} b {9:.3f}/{10:.3f}'
        msg = msg.format(epoch, config.epochs, record.train_loss, record.val_loss, record.train_acc,
                         record.val_acc, record.test_acc, record.remaining_train, record.remaining_val,
                         record.balance_train, record.balance_val)
        if eig is not None:
            msg += ' eig {0:.4f}'.format(eig)
        logger.info(msg)

    genotype = discretize(state.alpha)
    eigs = [rr.eig_max for rr in trajectory if rr.eig_max is not None]
    final_eig = eigs[-1] if len(eigs) > 0 else None
    taylor = None
    if final_eig is not None:
        taylor = taylor_bound(final_eig, state.alpha, genotype, config.taylor_space)

    logger.info('search finished, genotype ops {0}'.format([space.op_names[kk] for kk in genotype.chosen_op]))
    return SearchResult(genotype=genotype, alpha=state.alpha, net=state.net, trajectory=trajectory,
                        class_counts=class_rows, events=events, train=state.train, val=state.val,
                        final_eig=final_eig, taylor=taylor)

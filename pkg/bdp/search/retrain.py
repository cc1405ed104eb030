"""Training a discrete architecture from scratch.

"""

import logging
from dataclasses import dataclass

import numpy as np

from ..supernet import build_supernet
from .bilevel import evaluate, init_velocity, update_weights

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalConfig:
    """Settings for training a genotype's weights."""

    epochs: int = 50
    batch_size: int = 32
    lr_w: float = 0.025
    momentum_w: float = 0.9

    def validate(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1, got {0}".format(self.epochs))
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1, got {0}".format(self.batch_size))
        if self.lr_w <= 0:
            raise ValueError("lr_w must be > 0, got {0}".format(self.lr_w))
        if not 0 <= self.momentum_w < 1:
            raise ValueError("momentum_w must be in [0, 1), got {0}".format(self.momentum_w))
        return self


@dataclass
class EvalResult:
    train_acc: float
    test_acc: float
    train_loss: float
    epochs: int


def train_genotype(space, genotype, dataset, train_ids, test_ids, config, rng):
    """Train w of a genotype with alpha frozen to its one-hot encoding.

    Parameters
    ----------
    space : SpaceConfig
    genotype : Genotype
    dataset : Dataset
    train_ids, test_ids : array_like of int
    config : EvalConfig
    rng : RngStream
        ``init`` and ``batches`` streams are derived from it.

    Returns
    -------
    EvalResult
    """
    config.validate()
    genotype.check_space(space)
    train_ids = np.asarray(train_ids, dtype=np.int64)
    test_ids = np.asarray(test_ids, dtype=np.int64)
    X, y = dataset.features, dataset.labels

    net, _ = build_supernet(space, rng.derive('init'))
    velocity = init_velocity(net)
    batch_rng = rng.derive('batches')

    for epoch in range(1, config.epochs + 1):
        order = batch_rng.permutation(train_ids)
        for start in range(0, len(order), config.batch_size):
            bb = order[start:start + config.batch_size]
            update_weights(net, genotype, X[bb], y[bb], config.lr_w, velocity, config.momentum_w)
        if epoch % 10 == 0 or epoch == config.epochs:
            loss, acc = evaluate(net, genotype, X[train_ids], y[train_ids])
            logger.info('eval epoch {0}/{1} train loss {2:.4f} acc {3:.3f}'.format(epoch, config.epochs, loss, acc))

    train_loss, train_acc = evaluate(net, genotype, X[train_ids], y[train_ids])
    _, test_acc = evaluate(net, genotype, X[test_ids], y[test_ids])
    logger.info('genotype test accuracy {0:.4f}'.format(test_acc))
    return EvalResult(train_acc=train_acc, test_acc=test_acc, train_loss=train_loss, epochs=config.epochs)

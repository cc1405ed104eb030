"""Train / validation / test splits and the initial live pools.

"""

import logging
from dataclasses import dataclass

import numpy as np
from sklearn.model_selection import train_test_split

from ..numcore import seeded_rng
from ..search import SetState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitSpec:
    """Fractions of the whole dataset; validation gets the remainder.

    Attributes
    ----------
    train_fraction : float
    test_fraction : float
    seed : int
    stratified : bool
    """

    train_fraction: float = 0.4
    test_fraction: float = 0.2
    seed: int = 0
    stratified: bool = True

    @classmethod
    def from_ratio(cls, train_parts, val_parts, test_fraction=0.2, seed=0, stratified=True):
        """Split the non-test pool ``train_parts : val_parts``, e.g. 5:5 or 9:1."""
        if train_parts <= 0 or val_parts <= 0:
            raise ValueError("ratio parts must be positive, got {0}:{1}".format(train_parts, val_parts))
        train_fraction = (1 - test_fraction) * train_parts / (train_parts + val_parts)
        return cls(train_fraction, test_fraction, seed, stratified)

    def validate(self):
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must be in (0, 1), got {0}".format(self.train_fraction))
        if not 0 < self.test_fraction < 1:
            raise ValueError("test_fraction must be in (0, 1), got {0}".format(self.test_fraction))
        if self.train_fraction + self.test_fraction >= 1:
            raise ValueError("train_fraction + test_fraction must be < 1, got {0} + {1}".format(
                self.train_fraction, self.test_fraction))
        return self


def split(dataset, spec):
    """Partition a dataset into training and validation pools plus held-out test ids.

    The test set is carved out first, then the remaining pool is split between
    training and validation. Counts are ``round(fraction * n_samples)``.

    Parameters
    ----------
    dataset : Dataset
    spec : SplitSpec

    Returns
    -------
    train : SetState
    val : SetState
    test_ids : ndarray
        Sorted held-out ids.
    """
    spec.validate()
    n_total = len(dataset)
    n_test = int(round(spec.test_fraction * n_total))
    n_train = int(round(spec.train_fraction * n_total))
    n_val = n_total - n_test - n_train
    if min(n_test, n_train, n_val) < 1:
        raise ValueError("split of {0} samples gives an empty set: train={1} val={2} test={3}".format(
            n_total, n_train, n_val, n_test))

    rng = seeded_rng(spec.seed).derive('split')
    ids = np.arange(n_total)
    labels = dataset.labels
    try:
        pool, test_ids = train_test_split(ids, test_size=n_test, random_state=rng.sklearn_seed(),
                                          stratify=labels if spec.stratified else None)
        train_ids, val_ids = train_test_split(pool, train_size=n_train, random_state=rng.sklearn_seed(),
                                              stratify=labels[pool] if spec.stratified else None)
    except ValueError as e:
        raise ValueError("cannot split {0} samples as train={1} val={2} test={3}: {4}".format(
            n_total, n_train, n_val, n_test, e))

    train = SetState('train', train_ids, labels, dataset.num_classes)
    val = SetState('val', val_ids, labels, dataset.num_classes)
    logger.info('split {0} samples into {1} train / {2} val / {3} test'.format(
        n_total, train.size, val.size, len(test_ids)))
    return train, val, np.sort(test_ids)

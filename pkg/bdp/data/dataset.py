"""In-memory classification dataset.

"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class Dataset:
    """Feature matrix with integer class labels.

    Attributes
    ----------
    features : ndarray, shape (n_samples, dim)
    labels : ndarray of int, shape (n_samples,)
    num_classes : int
    """

    features: np.ndarray
    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.num_classes = int(self.num_classes)
        self.validate()

    def validate(self):
        if self.features.ndim != 2 or self.features.shape[0] == 0:
            raise ValueError("dataset needs a non-empty 2-D feature matrix, got shape {0}".format(self.features.shape))
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("got {0} labels for {1} samples".format(self.labels.shape[0], self.features.shape[0]))
        if np.any(self.labels < 0) or np.any(self.labels >= self.num_classes):
            raise ValueError("labels must lie in [0, {0})".format(self.num_classes))
        if not np.all(np.isfinite(self.features)):
            bad = int(np.where(~np.all(np.isfinite(self.features), axis=1))[0][0])
            raise ValueError("non-finite features in sample {0}".format(bad))
        return self

    def __len__(self):
        return self.features.shape[0]

    @property
    def dim(self):
        return self.features.shape[1]

    def class_counts(self, ids=None):
        labels = self.labels if ids is None else self.labels[np.asarray(ids, dtype=np.int64)]
        return np.bincount(labels, minlength=self.num_classes)

    def equals(self, other):
        return (self.num_classes == other.num_classes and np.array_equal(self.labels, other.labels)
                and np.array_equal(self.features, other.features))

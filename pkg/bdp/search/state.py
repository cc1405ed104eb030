"""Live training and validation pools.

"""

import logging

import numpy as np

logger = logging.getLogger(__name__)


class SetState:
    """Active sample ids of one set with their prediction-error histories.

    Parameters
    ----------
    name : str
        'train' or 'val', used in log messages and output files.
    ids : array_like of int
        Initial active sample ids (row indices into the dataset).
    labels : ndarray
        Labels of the whole dataset, indexed by sample id.
    num_classes : int

    Attributes
    ----------
    active_ids : ndarray
        Sorted active ids.
    error_history : dict
        Sample id -> append-only list of (epoch, e) pairs. Pruned samples keep
        their history but never gain new entries.
    class_counts : ndarray
        Active count per class.
    """

    def __init__(self, name, ids, labels, num_classes):
        ids = np.asarray(ids, dtype=np.int64)
        if len(np.unique(ids)) != len(ids):
            raise ValueError("{0} set has duplicate ids".format(name))
        self.name = name
        self.labels = np.asarray(labels, dtype=np.int64)
        self.num_classes = int(num_classes)
        self.active_ids = np.sort(ids)
        self.error_history = {int(ii): [] for ii in self.active_ids}
        self.class_counts = self.recount()

    def __repr__(self):
        return "SetState(name={0}, size={1}, class_counts={2})".format(
            self.name, self.size, self.class_counts.tolist())

    @property
    def size(self):
        return len(self.active_ids)

    def is_empty(self):
        return self.size == 0

    def recount(self):
        """Class counts recomputed from the labels of the active ids."""
        return np.bincount(self.labels[self.active_ids], minlength=self.num_classes).astype(np.int64)

    def record(self, epoch, ids, errors):
        """Append (epoch, e) for each id; only the first visit of an epoch is kept.

        Returns
        -------
        int
            Number of entries actually appended.
        """
        ids = np.asarray(ids, dtype=np.int64)
        errors = np.asarray(errors, dtype=np.float64)
        if ids.shape != errors.shape:
            raise ValueError("got {0} ids but {1} errors".format(ids.shape[0], errors.shape[0]))
        inactive = ids[~np.isin(ids, self.active_ids)]
        if len(inactive) > 0:
            raise ValueError("cannot record errors for inactive ids {0} in {1} set".format(
                inactive.tolist(), self.name))
        added = 0
        for ii, ee in zip(ids.tolist(), errors.tolist()):
            hist = self.error_history[ii]
            if len(hist) > 0 and hist[-1][0] == epoch:
                continue
            hist.append((epoch, ee))
            added += 1
        return added

    def remove(self, ids):
        """Deactivate ids and update the class counts."""
        ids = np.asarray(ids, dtype=np.int64)
        if len(ids) == 0:
            return ids
        if len(np.unique(ids)) != len(ids):
            raise ValueError("duplicate ids in removal from {0} set".format(self.name))
        missing = ids[~np.isin(ids, self.active_ids)]
        if len(missing) > 0:
            raise ValueError("ids {0} are not active in {1} set".format(missing.tolist(), self.name))
        self.active_ids = self.active_ids[~np.isin(self.active_ids, ids)]
        self.class_counts -= np.bincount(self.labels[ids], minlength=self.num_classes)
        return ids

    def batches(self, rng, batch_size):
        """Shuffled active ids cut into consecutive batches."""
        order = rng.permutation(self.active_ids)
        return [order[ii:ii + batch_size] for ii in range(0, len(order), batch_size)]

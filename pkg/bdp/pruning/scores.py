"""Per-sample pruning scores computed from recorded prediction errors.

EL2N is the L2 distance between the softmax output and the one-hot target at
one epoch. VoE is the population variance of that distance over a window of
consecutive epochs.
"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


def _history_dict(history):
    if isinstance(history, dict):
        return history
    return dict(history)


def el2n(history, epoch):
    """EL2N score: the recorded error at ``epoch``.

    Parameters
    ----------
    history : list of (epoch, e) or dict
    epoch : int
    """
    hist = _history_dict(history)
    if epoch not in hist:
        raise ValueError("no recorded error at epoch {0}".format(epoch))
    return float(hist[epoch])


def variance_of_errors(values):
    """Population variance of a window of errors.

    The window is shifted by its first value, so a constant window scores
    exactly 0.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("insufficient history")
    return float(np.var(values - values[0]))


def voe(history, t0, window):
    """VoE score over epochs t0, ..., t0 + window - 1.

    Parameters
    ----------
    history : list of (epoch, e) or dict
    t0 : int
        First epoch of the window.
    window : int
        Window length, equal to the pruning interval.

    Returns
    -------
    float
        ``mean((e_k - mean(e))**2)`` over the window.
    """
    if window < 1:
        raise ValueError("window must be >= 1, got {0}".format(window))
    hist = _history_dict(history)
    epochs = range(t0, t0 + window)
    if any(ep not in hist for ep in epochs):
        raise ValueError("insufficient history over epochs {0}..{1}".format(t0, t0 + window - 1))
    return variance_of_errors([hist[ep] for ep in epochs])


@dataclass
class ScoreTable:
    """Scores of the active ids of one set, aligned by position."""

    ids: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64)
        self.scores = np.asarray(self.scores, dtype=np.float64)
        if self.ids.shape != self.scores.shape:
            raise ValueError("score table has {0} ids but {1} scores".format(len(self.ids), len(self.scores)))
        if not np.all(np.isfinite(self.scores)) or np.any(self.scores < 0):
            raise ValueError("scores must be finite and non-negative")

    def __len__(self):
        return len(self.ids)

    def check_covers(self, set_state):
        if not np.array_equal(np.sort(self.ids), set_state.active_ids):
            raise ValueError("scores do not cover exactly the active ids of the {0} set".format(set_state.name))
        return self


def score_table(set_state, epoch, window, metric='voe'):
    """Score every active sample of a set at a pruning epoch.

    Parameters
    ----------
    set_state : SetState
    epoch : int
        Current (pruning) epoch, the last epoch of the window.
    window : int
        VoE window length.
    metric : {'voe', 'el2n'}
    """
    ids = set_state.active_ids
    if metric == 'voe':
        t0 = epoch - window + 1
        scores = [voe(set_state.error_history[int(ii)], t0, window) for ii in ids]
    elif metric == 'el2n':
        scores = [el2n(set_state.error_history[int(ii)], epoch) for ii in ids]
    else:
        raise ValueError("unknown pruning metric '{0}', expected 'voe' or 'el2n'".format(metric))
    return ScoreTable(ids, np.array(scores, dtype=np.float64))

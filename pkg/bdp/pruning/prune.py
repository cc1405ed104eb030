"""Progressive, class-balance constrained pruning of the training and validation sets.

"""

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .balance import balance_degree, class_limits, constraint_intensity, FAMILIES
from .scores import score_table

logger = logging.getLogger(__name__)


class Criterion(enum.Enum):
    """Which tail of the score ranking is pruned."""

    LOW = 'low'
    HIGH = 'high'

    @classmethod
    def from_name(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError("unknown criterion '{0}', expected 'low' or 'high'".format(name))


@dataclass(frozen=True)
class PruneConfig:
    """Progressive pruning settings.

    Attributes
    ----------
    interval : int
        Pruning interval in epochs; also the VoE window.
    p_train, p_val : float
        Percentage of the remaining samples pruned per round.
    criterion_train, criterion_val : Criterion
        Defaults prune the lowest-scoring training and highest-scoring
        validation samples.
    family : str
        Constraint family, one of 'none', 'a' ... 'f'.
    metric : str
        'voe' or 'el2n'.
    """

    interval: int = 10
    p_train: float = 15.0
    p_val: float = 15.0
    criterion_train: Criterion = Criterion.LOW
    criterion_val: Criterion = Criterion.HIGH
    family: str = 'a'
    metric: str = 'voe'

    def __post_init__(self):
        object.__setattr__(self, 'criterion_train', Criterion.from_name(self.criterion_train))
        object.__setattr__(self, 'criterion_val', Criterion.from_name(self.criterion_val))
        object.__setattr__(self, 'family', 'none' if self.family is None else str(self.family).lower())
        object.__setattr__(self, 'metric', str(self.metric).lower())

    def validate(self):
        if self.interval < 1:
            raise ValueError("pruning interval must be >= 1, got {0}".format(self.interval))
        for name, pp in (('p_train', self.p_train), ('p_val', self.p_val)):
            if not 0 <= pp <= 100:
                raise ValueError("{0} must be a percentage in [0, 100], got {1}".format(name, pp))
        if self.family not in FAMILIES:
            raise ValueError("unknown constraint family '{0}'".format(self.family))
        if self.metric not in ('voe', 'el2n'):
            raise ValueError("unknown pruning metric '{0}'".format(self.metric))
        return self

    @property
    def enabled(self):
        return self.p_train > 0 or self.p_val > 0

    def rounds(self, epochs):
        return epochs // self.interval


@dataclass
class PruneEvent:
    """What one pruning round did to one set."""

    epoch: int
    set_name: str
    target: int
    removed: np.ndarray
    balance: float
    intensity: float
    caps: np.ndarray

    @property
    def num_removed(self):
        return len(self.removed)


def prune_target(ratio, count):
    """Samples to prune: ``round(ratio / 100 * count)`` with half-to-even rounding."""
    return int(round(ratio * count / 100.0))


def prune_round(set_state, scores, ratio, criterion, caps):
    """Remove a ratio of the active samples, respecting per-class caps.

    Parameters
    ----------
    set_state : SetState
        Modified in place.
    scores : ScoreTable
        Must cover exactly the active ids.
    ratio : float
        Percentage of the active samples to prune.
    criterion : Criterion or str
        'low' walks the scores ascending, 'high' descending; ties go to the
        lower sample id.
    caps : array_like of int
        Maximum removals per class this round.

    Returns
    -------
    ndarray
        Pruned ids, in selection order.
    """
    criterion = Criterion.from_name(criterion)
    caps = np.asarray(caps, dtype=np.int64)
    if caps.shape != (set_state.num_classes,):
        raise ValueError("expected {0} class caps, got {1}".format(set_state.num_classes, caps.shape))
    scores.check_covers(set_state)

    target = prune_target(ratio, set_state.size)
    if target == 0:
        return np.array([], dtype=np.int64)

    if criterion is Criterion.LOW:
        order = np.lexsort((scores.ids, scores.scores))
    else:
        order = np.lexsort((scores.ids, -scores.scores))

    taken = np.zeros_like(caps)
    selected = []
    for sid in scores.ids[order]:
        if len(selected) == target:
            break
        cls = set_state.labels[sid]
        if taken[cls] >= caps[cls]:
            continue
        taken[cls] += 1
        selected.append(sid)

    selected = np.array(selected, dtype=np.int64)
    set_state.remove(selected)
    if len(selected) < target:
        logger.info('{0} set: class caps limited pruning to {1} of {2} samples'.format(
            set_state.name, len(selected), target))
    return selected


def progressive_prune(set_state, epoch, ratio, criterion, config, rounds):
    """Score, cap and prune one set at a pruning epoch.

    Parameters
    ----------
    set_state : SetState
    epoch : int
    ratio : float
    criterion : Criterion
    config : PruneConfig
    rounds : int
        Total pruning rounds of the search.

    Returns
    -------
    PruneEvent
    """
    b = balance_degree(set_state.class_counts)
    N = constraint_intensity(b, rounds, config.family)
    caps = class_limits(set_state.class_counts, N)
    logger.debug('{0} set epoch {1}: b={2:.4f} N={3:.4f} caps={4}'.format(
        set_state.name, epoch, b, N, caps.tolist()))

    if ratio > 0:
        scores = score_table(set_state, epoch, config.interval, config.metric)
        removed = prune_round(set_state, scores, ratio, criterion, caps)
    else:
        removed = np.array([], dtype=np.int64)

    event = PruneEvent(epoch=epoch, set_name=set_state.name, target=prune_target(ratio, set_state.size + len(removed)),
                       removed=removed, balance=b, intensity=N, caps=caps)
    logger.info('epoch {0} pruned {1} set: target {2}, removed {3}, {4} remain'.format(
        epoch, set_state.name, event.target, event.num_removed, set_state.size))
    return event


def one_shot_el2n_prune(set_state, epoch, discard='low', fraction=0.5):
    """Discard the lowest or highest EL2N half of a set in one step.

    Parameters
    ----------
    set_state : SetState
        Modified in place.
    epoch : int
        Epoch whose recorded errors are the EL2N scores.
    discard : {'low', 'high'}
        Which tail to discard.
    fraction : float
        Share of the set discarded, rounded down to whole samples.

    Returns
    -------
    ndarray
        Discarded ids.
    """
    discard = Criterion.from_name(discard)
    if not 0 <= fraction <= 1:
        raise ValueError("fraction must be in [0, 1], got {0}".format(fraction))
    scores = score_table(set_state, epoch, 1, metric='el2n')
    num = int(np.floor(fraction * set_state.size))
    if discard is Criterion.LOW:
        order = np.lexsort((scores.ids, scores.scores))
    else:
        order = np.lexsort((scores.ids, -scores.scores))
    removed = scores.ids[order[:num]]
    set_state.remove(removed)
    logger.info('epoch {0} one-shot EL2N pruning discarded {1} {2}-scoring samples of the {3} set'.format(
        epoch, len(removed), discard.value, set_state.name))
    return removed


@dataclass(frozen=True)
class OneShotConfig:
    """Single EL2N pruning step after a warm-up.

    ``train`` and ``val`` name the tail discarded from each set ('low' or
    'high'), or None to leave the set whole.
    """

    warmup_epochs: int = 10
    train: str = 'low'
    val: str = None
    fraction: float = 0.5

    def validate(self, epochs=None):
        if self.warmup_epochs < 1:
            raise ValueError("warmup_epochs must be >= 1, got {0}".format(self.warmup_epochs))
        if epochs is not None and self.warmup_epochs > epochs:
            raise ValueError("warmup_epochs {0} exceeds the {1} search epochs".format(self.warmup_epochs, epochs))
        for tail in (self.train, self.val):
            if tail is not None:
                Criterion.from_name(tail)
        if not 0 <= self.fraction <= 1:
            raise ValueError("fraction must be in [0, 1], got {0}".format(self.fraction))
        return self


def removal_recurrence(count, ratio, rounds):
    """Set sizes after each uncapped round, starting with ``count``.

    >>> removal_recurrence(600, 15, 3)
    [600, 510, 434, 369]
    """
    sizes = [int(count)]
    for _ in range(rounds):
        sizes.append(sizes[-1] - prune_target(ratio, sizes[-1]))
    return sizes

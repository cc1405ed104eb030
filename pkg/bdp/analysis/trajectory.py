"""Per-epoch search records and their CSV form.

"""

import logging
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ['epoch', 'train_loss', 'val_loss', 'train_acc', 'val_acc', 'test_acc',
                      'remaining_train', 'remaining_val', 'balance_train', 'balance_val', 'eig_max']

CLASS_COUNT_COLUMNS = ['epoch', 'set', 'class', 'count']

_INT_COLUMNS = ['epoch', 'remaining_train', 'remaining_val']


@dataclass
class TrajectoryRecord:
    """Snapshot of one search epoch; ``eig_max`` is None when not computed."""

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
    eig_max: float = None

    def as_row(self):
        row = asdict(self)
        row['eig_max'] = np.nan if self.eig_max is None else self.eig_max
        return row


def trajectory_frame(records):
    """Trajectory as a DataFrame in the canonical column order."""
    df = pd.DataFrame([rr.as_row() for rr in records], columns=TRAJECTORY_COLUMNS)
    for col in _INT_COLUMNS:
        df[col] = df[col].astype(np.int64)
    return df


def check_monotone(records):
    """Raise ValueError if remaining counts ever increase."""
    for prev, curr in zip(records[:-1], records[1:]):
        if curr.remaining_train > prev.remaining_train or curr.remaining_val > prev.remaining_val:
            raise ValueError("remaining counts increased between epochs {0} and {1}".format(prev.epoch, curr.epoch))
    return records


def write_csv(df, path):
    """Write a frame with LF line endings and six-decimal floats."""
    df.to_csv(path, index=False, float_format='%.6f', lineterminator='\n')
    logger.debug('wrote {0}'.format(path))
    return path


def write_trajectory(records, path):
    return write_csv(trajectory_frame(check_monotone(records)), path)


def read_trajectory(path):
    """Load a trajectory.csv, raising ValueError on missing columns."""
    df = pd.read_csv(path)
    missing = [cc for cc in TRAJECTORY_COLUMNS if cc not in df.columns]
    if len(missing) > 0:
        raise ValueError("{0} is missing trajectory columns {1}".format(path, missing))
    return df


def class_count_frame(rows):
    """Per-class counts from (epoch, set, class, count) tuples."""
    df = pd.DataFrame(rows, columns=CLASS_COUNT_COLUMNS)
    for col in ('epoch', 'class', 'count'):
        df[col] = df[col].astype(np.int64)
    return df

"""Reading and writing datasets as CSV.

Format: header ``f0,f1,...,f{d-1},label``, UTF-8, decimal floats, and a
non-negative integer label in the last column.
"""

import logging

import numpy as np
import pandas as pd

from .dataset import Dataset

logger = logging.getLogger(__name__)


def _first_bad_row(mask):
    # header is file line 1, data row i is line i + 2
    return int(np.where(mask)[0][0]) + 2


def load_csv(path):
    """Load a dataset, reporting the file line of the first malformed row.

    Parameters
    ----------
    path : str or pathlib.Path

    Returns
    -------
    Dataset
        ``num_classes`` is one more than the largest label.
    """
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=True, encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise ValueError("{0}: empty file".format(path))
    except pd.errors.ParserError as e:
        raise ValueError("{0}: ragged row: {1}".format(path, e))

    columns = [cc.strip() for cc in df.columns]
    if len(columns) < 2 or columns[-1] != 'label':
        raise ValueError("{0}: line 1: header must end with a 'label' column, got {1}".format(path, columns))
    if len(df) == 0:
        raise ValueError("{0}: no samples".format(path))

    # Short rows are padded by pandas with NaN
    short = df.isna().any(axis=1).to_numpy()
    if short.any():
        raise ValueError("{0}: line {1}: ragged row".format(path, _first_bad_row(short)))

    cells = df.apply(lambda col: col.str.strip())
    bad = cells.apply(lambda col: pd.to_numeric(col, errors='coerce')).isna().any(axis=1).to_numpy()
    if bad.any():
        raise ValueError("{0}: line {1}: non-numeric cell".format(path, _first_bad_row(bad)))

    # float() on each cell is correctly rounded, so saved datasets load back bit for bit
    values = np.array(cells.to_numpy(), dtype=np.float64)
    labels = values[:, -1]
    bad = (labels < 0) | (labels != np.floor(labels))
    if bad.any():
        raise ValueError("{0}: line {1}: label must be a non-negative integer".format(path, _first_bad_row(bad)))

    features = values[:, :-1]
    labels = labels.astype(np.int64)
    logger.info('loaded {0} samples with {1} features from {2}'.format(features.shape[0], features.shape[1], path))
    return Dataset(features, labels, int(labels.max()) + 1)


def save_csv(dataset, path):
    """Write a dataset in the format :py:func:`load_csv` reads."""
    df = pd.DataFrame(dataset.features, columns=['f{0}'.format(ii) for ii in range(dataset.dim)])
    df['label'] = dataset.labels
    df.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')
    logger.debug('wrote {0}'.format(path))
    return path

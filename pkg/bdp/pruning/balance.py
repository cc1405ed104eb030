"""Class balance degree and the balance-dependent pruning caps.

"""

import logging

import numpy as np

logger = logging.getLogger(__name__)


def balance_degree(class_counts):
    """Mean pairwise min/max ratio of per-class counts.

    A pair of empty classes counts as balanced (1); a pair with exactly one
    empty class counts as 0.

    Parameters
    ----------
    class_counts : array_like of int
        One non-negative count per class, at least two classes.

    Returns
    -------
    float
        Balance degree in [0, 1].
    """
    counts = np.asarray(class_counts, dtype=np.float64)
    if counts.ndim != 1 or counts.shape[0] < 2:
        raise ValueError("balance degree needs at least 2 classes, got {0}".format(counts.shape))
    if np.any(counts < 0):
        raise ValueError("class counts must be non-negative: {0}".format(counts.tolist()))

    iu, ju = np.triu_indices(counts.shape[0], k=1)
    lo = np.minimum(counts[iu], counts[ju])
    hi = np.maximum(counts[iu], counts[ju])
    ratios = np.ones_like(lo)
    nz = hi > 0
    ratios[nz] = lo[nz] / hi[nz]
    return float(ratios.mean())


def _family_a(b, n):
    return n * (1 - b ** 2) + 1


def _family_b(b, n):
    return n ** (1 - b)


def _family_c(b, n):
    return np.exp(n * (1 - b))


def _family_d(b, n):
    if b == 0:
        return np.inf
    return 1 - n * np.log(b)


def _family_e(b, n):
    return n * (1 - b) + 1


def _family_f(b, n):
    return n * (1 - b ** 3) + 1


FAMILIES = {
    'none': lambda b, n: 1.0,
    'a': _family_a,
    'b': _family_b,
    'c': _family_c,
    'd': _family_d,
    'e': _family_e,
    'f': _family_f,
}


def constraint_intensity(b, n, family='a'):
    """Divisor N of the per-class pruning cap.

    Parameters
    ----------
    b : float
        Balance degree in [0, 1].
    n : int
        Total number of pruning rounds.
    family : {'none', 'a', 'b', 'c', 'd', 'e', 'f'}
        Functional form; ``'a'`` is ``n(1 - b^2) + 1``. Every form gives 1 at
        ``b = 1``. Family ``'d'`` is infinite at ``b = 0``.

    Returns
    -------
    float
    """
    key = 'none' if family is None else str(family).lower()
    if key not in FAMILIES:
        raise ValueError("unknown constraint family '{0}', expected one of {1}".format(family, list(FAMILIES)))
    if not 0 <= b <= 1:
        raise ValueError("balance degree must be in [0, 1], got {0}".format(b))
    if n < 1:
        raise ValueError("number of rounds must be >= 1, got {0}".format(n))
    return float(FAMILIES[key](float(b), n))


def class_limits(class_counts, N):
    """Per-class caps ``floor(|c_i| / N)`` for one pruning round."""
    counts = np.asarray(class_counts, dtype=np.int64)
    if not N >= 1:
        raise ValueError("constraint intensity must be >= 1, got {0}".format(N))
    if np.isinf(N):
        return np.zeros_like(counts)
    return np.floor(counts / N).astype(np.int64)

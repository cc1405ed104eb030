"""Seeded synthetic classification tasks.

"""

import logging

import numpy as np
from sklearn.datasets import make_blobs

from ..numcore import RngStream, seeded_rng
from .dataset import Dataset

logger = logging.getLogger(__name__)

LAYOUTS = ('separable', 'xor_rings')


def _as_stream(seed):
    return seed if isinstance(seed, RngStream) else seeded_rng(seed)


def _separable(num_classes, per_class, dim, noise_sigma, rng):
    # Centres evenly spaced on a circle of radius 4 in the first two features
    angles = 2 * np.pi * np.arange(num_classes) / num_classes
    centers = np.zeros((num_classes, dim))
    centers[:, 0] = 4 * np.cos(angles)
    centers[:, 1] = 4 * np.sin(angles)
    X, y = make_blobs(n_samples=[per_class] * num_classes, n_features=dim, centers=centers,
                      cluster_std=noise_sigma, shuffle=True, random_state=rng.sklearn_seed())
    return X, y


def _xor_rings(num_classes, per_class, dim, noise_sigma, rng):
    # ring of class c at radius 5 + c; neighbouring radii have ratio >= 5/6, so for
    # two classes no half-plane classifies more than 60% of the noiseless rings
    X = np.zeros((num_classes * per_class, dim))
    y = np.repeat(np.arange(num_classes, dtype=np.int64), per_class)
    theta = rng.uniform(0, 2 * np.pi, size=len(y))
    rho = 5 + y + rng.normal(0, noise_sigma, size=len(y))
    X[:, 0] = rho * np.cos(theta)
    X[:, 1] = rho * np.sin(theta)
    if dim > 2:
        X[:, 2:] = rng.normal(0, noise_sigma, size=(X.shape[0], dim - 2))
    order = rng.permutation(X.shape[0])
    return X[order], y[order]


def gen_blobs(num_classes, per_class, dim, noise_sigma=0.5, layout='separable', seed=0):
    """Generate a class-balanced synthetic task.

    Parameters
    ----------
    num_classes : int
        At least 2.
    per_class : int
        Samples per class, at least 1.
    dim : int
        Feature dimension, at least 2.
    noise_sigma : float
        Blob standard deviation, or the radial noise of the rings.
    layout : {'separable', 'xor_rings'}
        'separable' draws Gaussian blobs around distinct centres. 'xor_rings'
        puts class c on a ring of radius 5 + c, with the other dimensions pure
        noise, so no affine classifier does much better than chance.
    seed : int or RngStream

    Returns
    -------
    Dataset
    """
    if num_classes < 2:
        raise ValueError("num_classes must be >= 2, got {0}".format(num_classes))
    if per_class < 1:
        raise ValueError("per_class must be >= 1, got {0}".format(per_class))
    if dim < 2:
        raise ValueError("dim must be >= 2, got {0}".format(dim))
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0, got {0}".format(noise_sigma))

    rng = _as_stream(seed)
    if layout == 'separable':
        X, y = _separable(num_classes, per_class, dim, noise_sigma, rng)
    elif layout == 'xor_rings':
        X, y = _xor_rings(num_classes, per_class, dim, noise_sigma, rng)
    else:
        raise ValueError("unknown layout '{0}', expected one of {1}".format(layout, LAYOUTS))

    logger.info('generated {0} layout: {1} classes x {2} samples in {3} dims'.format(
        layout, num_classes, per_class, dim))
    return Dataset(X, y, num_classes)

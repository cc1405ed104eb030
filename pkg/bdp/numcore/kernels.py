"""Numeric kernels shared by every bdp module.

All arrays are float64 numpy arrays. Vectors are 1-D, matrices 2-D; kernels
never reshape their inputs in place.
"""

import logging

import numpy as np
from scipy import special

logger = logging.getLogger(__name__)


def check_finite(x, what='array'):
    """Raise FloatingPointError if ``x`` holds a NaN or infinity."""
    if not np.all(np.isfinite(x)):
        raise FloatingPointError("non-finite values in {0}".format(what))
    return x


def as_vec(v, what='vector'):
    """Return ``v`` as a 1-D float64 array."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("{0} must be 1-D, got shape {1}".format(what, v.shape))
    return v


def softmax(v):
    """Softmax over the last axis, computed with max-subtraction.

    Parameters
    ----------
    v : array_like
        Logits. A 2-D input is normalised row by row.

    Returns
    -------
    ndarray
        Positive entries summing to one along the last axis.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0 or v.shape[-1] == 0:
        raise ValueError("softmax of an empty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite logits")
    return special.softmax(v, axis=-1)


def relu(x):
    return np.maximum(x, 0.0)


def l2_distance(p, y):
    """Euclidean distance between two vectors of equal length."""
    p = np.asarray(p, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if p.shape != y.shape:
        raise ValueError("length mismatch: {0} vs {1}".format(p.shape, y.shape))
    return float(np.linalg.norm(p - y))


def row_l2_distance(P, Y):
    """Per-row Euclidean distances between two equally shaped matrices."""
    P = np.asarray(P, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if P.shape != Y.shape:
        raise ValueError("shape mismatch: {0} vs {1}".format(P.shape, Y.shape))
    return np.linalg.norm(P - Y, axis=-1)


def one_hot(labels, num_classes):
    """One-hot encode integer labels into a (n, num_classes) float64 matrix."""
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.shape[0], num_classes))
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out


def power_iteration(matvec, dim, max_iters=50, tol=1e-4, rng=None, v0=None):
    """Dominant eigenpair of a symmetric linear operator.

    Parameters
    ----------
    matvec : callable
        Maps a (dim,) vector to a (dim,) vector. Must be linear and symmetric.
    dim : int
        Operator dimension.
    max_iters : int
        Maximum number of operator applications.
    tol : float
        Stop once successive eigenvalue estimates differ by at most ``tol``.
    rng : RngStream
        Source of the random starting vector. Defaults to ``seeded_rng(0)``.
    v0 : array_like, optional
        Explicit starting vector.

    Returns
    -------
    eigval : float
        Rayleigh quotient at the final iterate, so a negative dominant
        eigenvalue keeps its sign.
    eigvec : ndarray
        Unit-norm eigenvector estimate.
    """
    from .rng import seeded_rng

    if dim < 1:
        raise ValueError("dim must be >= 1, got {0}".format(dim))
    rng = seeded_rng(0) if rng is None else rng

    v = None if v0 is None else as_vec(v0, "v0")
    if v is not None and v.shape != (dim,):
        raise ValueError("v0 has shape {0}, expected ({1},)".format(v.shape, dim))
    for attempt in range(4):
        if v is not None and v.shape == (dim,) and np.linalg.norm(v) > 0:
            break
        if attempt == 3:
            raise ValueError("could not draw a non-zero starting vector")
        v = rng.normal(size=dim)
    v = v / np.linalg.norm(v)

    eigval = None
    for ii in range(max_iters):
        w = np.asarray(matvec(v), dtype=np.float64)
        if w.shape != (dim,):
            raise ValueError("matvec returned shape {0}, expected ({1},)".format(w.shape, dim))
        check_finite(w, 'matvec output')

        new_eigval = float(v @ w)
        wnorm = np.linalg.norm(w)
        if wnorm == 0:
            # v is in the null space and every eigenvalue it sees is zero
            return 0.0, v

        converged = eigval is not None and abs(new_eigval - eigval) <= tol
        eigval = new_eigval
        if converged:
            logger.debug('power iteration converged after {0} iterations'.format(ii + 1))
            return eigval, v
        v = w / wnorm

    logger.debug('power iteration stopped at max_iters={0}'.format(max_iters))
    return eigval, v


def central_diff_gradient(f, x, h=1e-5):
    """Central finite-difference gradient of a scalar function.

    Component ``i`` is ``(f(x + h e_i) - f(x - h e_i)) / (2h)``.
    """
    if h <= 0:
        raise ValueError("h must be positive, got {0}".format(h))
    x = as_vec(x, 'x').copy()
    grad = np.zeros_like(x)
    for ii in range(x.shape[0]):
        orig = x[ii]
        x[ii] = orig + h
        fp = float(f(x))
        x[ii] = orig - h
        fm = float(f(x))
        x[ii] = orig
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise FloatingPointError("non-finite probe at index {0}".format(ii))
        grad[ii] = (fp - fm) / (2 * h)
    return grad

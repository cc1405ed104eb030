"""Curvature of the validation loss with respect to the architecture parameters.

Hessian-vector products are central finite differences of the analytic alpha
gradient; the dominant eigenvalue comes from power iteration over that
product, so the Hessian is never materialised.
"""

import logging

import numpy as np

from ..numcore import as_vec, check_finite, power_iteration
from ..supernet import ArchParams, Genotype, genotype_to_alpha, loss_and_gradients

logger = logging.getLogger(__name__)


def default_step(alpha):
    """Finite-difference step ``1e-3 * (||alpha|| + 1)``."""
    return 1e-3 * (np.linalg.norm(alpha) + 1.0)


def hvp(loss_grad, alpha, v, h=None):
    """Symmetric finite-difference Hessian-vector product.

    Parameters
    ----------
    loss_grad : callable
        Maps a flat alpha vector to the flat gradient of the loss.
    alpha : array_like
        Flat alpha at which the Hessian is taken.
    v : array_like
        Direction, ``||v|| >= 1e-12``.
    h : float, optional
        Step along the unit direction. Defaults to :py:func:`default_step`.

    Returns
    -------
    ndarray
        ``(g(alpha + h u) - g(alpha - h u)) / (2h) * ||v||`` with ``u = v / ||v||``.
    """
    alpha = as_vec(alpha, 'alpha')
    v = as_vec(v, 'v')
    if v.shape != alpha.shape:
        raise ValueError("direction of shape {0} does not match alpha of shape {1}".format(v.shape, alpha.shape))
    vnorm = np.linalg.norm(v)
    if vnorm < 1e-12:
        raise ValueError("hvp direction has norm {0:.3g} < 1e-12".format(vnorm))
    h = default_step(alpha) if h is None else h
    if h <= 0:
        raise ValueError("h must be positive, got {0}".format(h))

    u = v / vnorm
    gp = check_finite(np.asarray(loss_grad(alpha + h * u), dtype=np.float64), 'gradient at alpha + h*v')
    gm = check_finite(np.asarray(loss_grad(alpha - h * u), dtype=np.float64), 'gradient at alpha - h*v')
    return (gp - gm) / (2 * h) * vnorm


def validation_loss_gradient(net, X, y):
    """Map flat alpha to the flat gradient of the mean validation loss.

    Parameters
    ----------
    net : Supernet
        Weights are held fixed.
    X, y : ndarray
        The whole active validation set.
    """
    shape = (net.space.num_edges, net.space.num_ops)

    def loss_grad(alpha_flat):
        arch = ArchParams(np.asarray(alpha_flat).reshape(shape))
        grads = loss_and_gradients(net, arch, X, y)
        return grads.grad_alpha.ravel()

    return loss_grad


def dominant_eigenvalue(loss_grad, alpha, rng=None, max_iters=50, tol=1e-4, h=None):
    """Dominant Hessian eigenvalue of a loss at alpha.

    Parameters
    ----------
    loss_grad : callable
        Flat alpha -> flat gradient, e.g. from :py:func:`validation_loss_gradient`.
    alpha : ArchParams or array_like
    rng : RngStream
        Stream for the starting vector.
    max_iters : int
    tol : float
    h : float, optional
        Finite-difference step, fixed over all iterations.

    Returns
    -------
    float
        Rayleigh-quotient eigenvalue, sign included.
    """
    flat = alpha.flat() if isinstance(alpha, ArchParams) else as_vec(alpha, 'alpha')
    h = default_step(flat) if h is None else h

    def matvec(v):
        return hvp(loss_grad, flat, v, h)

    eigval, _ = power_iteration(matvec, flat.shape[0], max_iters=max_iters, tol=tol, rng=rng)
    logger.debug('dominant eigenvalue {0:.6f}'.format(eigval))
    return eigval


def taylor_bound(eig, alpha_star, alpha_hat, space='beta'):
    """Second-order estimate of the loss change caused by discretisation.

    Parameters
    ----------
    eig : float
        Dominant eigenvalue (or any Hessian norm) at alpha_star.
    alpha_star : ArchParams
        Continuous solution.
    alpha_hat : Genotype or ArchParams
        Discrete solution as one-hot rows.
    space : {'beta', 'alpha'}
        Compare one-hot rows with ``softmax(alpha_star)`` ('beta') or with the
        raw ``alpha_star`` ('alpha').

    Returns
    -------
    float
        ``|eig| * ||alpha_hat - X||_F^2`` with X the chosen encoding of alpha_star.
    """
    hat = genotype_to_alpha(alpha_hat).alpha if isinstance(alpha_hat, Genotype) else ArchParams(alpha_hat.alpha).alpha
    if space == 'beta':
        star = alpha_star.betas()
    elif space == 'alpha':
        star = alpha_star.alpha
    else:
        raise ValueError("unknown taylor bound space '{0}', expected 'beta' or 'alpha'".format(space))
    if hat.shape != star.shape:
        raise ValueError("shape mismatch: {0} vs {1}".format(hat.shape, star.shape))
    return float(abs(eig) * np.sum((hat - star) ** 2))

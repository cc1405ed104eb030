"""Supernet with softmax-mixed edges and hand-written backpropagation.

A sample flows through an optional affine stem, then ``num_cells`` cells and
finally an affine classifier head followed by softmax. Inside a cell, node 0 is
the cell input and node j sums the mixed outputs of every edge i -> j (i < j);
the last node is the cell output.

Every edge computes ``sum_k beta_k * op_k(x)`` where ``beta`` is the softmax of
the edge's alpha row (or a one-hot row for a genotype).
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from ..numcore import check_finite, one_hot, relu, row_l2_distance, softmax
from .space import ArchParams, OpKind

logger = logging.getLogger(__name__)


# --------------------------------------------------------------
# Operation kernels on a (batch, feature_dim) matrix


def _op_forward(op, x, W=None, b=None):
    """Return (output, pre-activation) of one candidate op."""
    if op is OpKind.ZERO:
        return np.zeros_like(x), None
    if op is OpKind.IDENTITY:
        return x, None
    if op is OpKind.LINEAR:
        return x @ W.T + b, None
    if op is OpKind.LINEARACT:
        z = x @ W.T + b
        return relu(z), z
    if op is OpKind.MEANPOOL:
        return np.repeat(x.mean(axis=1, keepdims=True), x.shape[1], axis=1), None
    raise ValueError("unknown op {0}".format(op))


def _op_backward(op, g, x, z=None, W=None):
    """Return (dx, dW, db) of one candidate op given the output gradient g."""
    if op is OpKind.ZERO:
        return None, None, None
    if op is OpKind.IDENTITY:
        return g, None, None
    if op is OpKind.LINEARACT:
        g = g * (z > 0)
    if op in (OpKind.LINEAR, OpKind.LINEARACT):
        return g @ W, g.T @ x, g.sum(axis=0)
    if op is OpKind.MEANPOOL:
        dx = np.repeat(g.sum(axis=1, keepdims=True) / x.shape[1], x.shape[1], axis=1)
        return dx, None, None
    raise ValueError("unknown op {0}".format(op))


# --------------------------------------------------------------
# Supernet container


class Supernet:
    """Weights w of a search space.

    Parameters are held in an ordered dict of named arrays: ``stem.W`` and
    ``stem.b`` when the space has a stem, ``cell<c>.edge<i>-><j>.<op>.W`` and
    ``.b`` for every parametric op on every edge, then ``head.W`` and
    ``head.b``. Parameter-free ops own nothing.
    """

    def __init__(self, space, params):
        self.space = space
        self.params = params
        self._edge_keys = []
        for ee in range(space.num_edges):
            name = space.edge_name(ee)
            keys = []
            for op in space.candidate_ops:
                keys.append((name + '.' + op.value + '.W', name + '.' + op.value + '.b') if op.is_parametric else None)
            self._edge_keys.append(keys)

    @staticmethod
    def param_shapes(space):
        """Ordered (name, shape) pairs of every weight array of a space."""
        d = space.feature_dim
        shapes = []
        if space.has_stem:
            shapes += [('stem.W', (d, space.input_dim)), ('stem.b', (d,))]
        for ee in range(space.num_edges):
            name = space.edge_name(ee)
            for op in space.candidate_ops:
                if op.is_parametric:
                    shapes += [(name + '.' + op.value + '.W', (d, d)), (name + '.' + op.value + '.b', (d,))]
        shapes += [('head.W', (space.num_classes, d)), ('head.b', (space.num_classes,))]
        return shapes

    def edge_param_keys(self, edge, kk):
        """(W, b) parameter names of op ``kk`` on ``edge``, None if parameter-free."""
        return self._edge_keys[edge][kk]

    def edge_params(self, edge, kk):
        keys = self._edge_keys[edge][kk]
        if keys is None:
            return None, None
        return self.params[keys[0]], self.params[keys[1]]

    def num_parameters(self):
        return int(sum(vv.size for vv in self.params.values()))

    def flat_params(self):
        return np.concatenate([vv.ravel() for vv in self.params.values()])

    def set_flat_params(self, vec):
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.num_parameters(),):
            raise ValueError("expected {0} parameters, got shape {1}".format(self.num_parameters(), vec.shape))
        start = 0
        for key, val in self.params.items():
            self.params[key] = vec[start:start + val.size].reshape(val.shape).copy()
            start += val.size
        return self

    def copy(self):
        return Supernet(self.space, {kk: vv.copy() for kk, vv in self.params.items()})


def flatten_grads(grad_w):
    """Concatenate a gradient dict in parameter order."""
    return np.concatenate([vv.ravel() for vv in grad_w.values()])


def build_supernet(space, rng):
    """Construct a supernet and its architecture parameters.

    Parameters
    ----------
    space : SpaceConfig
        Search space.
    rng : RngStream
        Stream for weight initialisation.

    Returns
    -------
    net : Supernet
        Weights drawn uniformly from [-s, s] with s = 1/sqrt(feature_dim).
    alpha : ArchParams
        All-zero alpha, i.e. uniform beta on every edge.
    """
    space.validate()
    scale = 1.0 / np.sqrt(space.feature_dim)
    params = {}
    for name, shape in Supernet.param_shapes(space):
        params[name] = rng.uniform(-scale, scale, size=shape)
    net = Supernet(space, params)
    logger.debug('built supernet with {0} edges and {1} parameters'.format(space.num_edges, net.num_parameters()))
    return net, ArchParams.zeros(space)


# --------------------------------------------------------------
# Forward


@dataclass
class Tape:
    """Activations kept by a batched forward pass for the backward pass."""

    inputs: np.ndarray
    betas: np.ndarray
    stem_out: np.ndarray = None
    nodes: list = field(default_factory=list)
    edge_outs: list = field(default_factory=list)
    edge_pre: list = field(default_factory=list)
    logits: np.ndarray = None
    probs: np.ndarray = None

    @property
    def batch_size(self):
        return self.inputs.shape[0]


def _arch_betas(arch, space):
    if isinstance(arch, np.ndarray):
        betas = arch
    else:
        betas = arch.betas()
    if betas.shape != (space.num_edges, space.num_ops):
        raise ValueError("architecture of shape {0} does not fit a space with {1} edges over {2} ops".format(
            betas.shape, space.num_edges, space.num_ops))
    return betas


def _as_batch(net, x):
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    X = x[None, :] if single else x
    if X.ndim != 2 or X.shape[1] != net.space.input_dim:
        raise ValueError("input of shape {0} does not match input_dim {1}".format(x.shape, net.space.input_dim))
    return X, single


def _mix_edge(net, edge, betas_row, x):
    outs, pres = [], []
    mixed = np.zeros_like(x)
    for kk, op in enumerate(net.space.candidate_ops):
        if betas_row[kk] == 0 or op is OpKind.ZERO:
            outs.append(None)
            pres.append(None)
            continue
        W, b = net.edge_params(edge, kk)
        out, pre = _op_forward(op, x, W, b)
        mixed += betas_row[kk] * out
        outs.append(out)
        pres.append(pre)
    return mixed, outs, pres


def mixed_edge_forward(net, edge, alpha_row, x):
    """Output of one mixed edge for a single input vector.

    Parameters
    ----------
    net : Supernet
    edge : int
        Global edge index.
    alpha_row : array_like
        Logits over the candidate ops; beta is their softmax.
    x : array_like
        Input of length feature_dim.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (net.space.feature_dim,):
        raise ValueError("edge input of shape {0} does not match feature_dim {1}".format(
            x.shape, net.space.feature_dim))
    betas_row = softmax(alpha_row)
    if betas_row.shape != (net.space.num_ops,):
        raise ValueError("alpha row has {0} entries, expected {1}".format(betas_row.shape[0], net.space.num_ops))
    mixed, _, _ = _mix_edge(net, edge, betas_row, x[None, :])
    return mixed[0]


def forward_batch(net, arch, X):
    """Batched forward pass.

    Parameters
    ----------
    net : Supernet
    arch : ArchParams or Genotype or ndarray
        Anything providing per-edge beta rows.
    X : ndarray, shape (batch, input_dim)

    Returns
    -------
    probs : ndarray, shape (batch, num_classes)
    tape : Tape
    """
    space = net.space
    betas = _arch_betas(arch, space)
    X, _ = _as_batch(net, X)
    tape = Tape(inputs=X, betas=betas)

    h = X
    if space.has_stem:
        h = X @ net.params['stem.W'].T + net.params['stem.b']
        tape.stem_out = h

    edge = 0
    for cc in range(space.num_cells):
        nodes = [h]
        for jj in range(1, space.nodes_per_cell):
            acc = np.zeros((X.shape[0], space.feature_dim))
            for ii in range(jj):
                mixed, outs, pres = _mix_edge(net, edge, betas[edge], nodes[ii])
                acc += mixed
                tape.edge_outs.append(outs)
                tape.edge_pre.append(pres)
                edge += 1
            if not np.all(np.isfinite(acc)):
                raise FloatingPointError("non-finite activation at cell {0} node {1}".format(cc, jj))
            nodes.append(acc)
        tape.nodes.append(nodes)
        h = nodes[-1]

    tape.logits = h @ net.params['head.W'].T + net.params['head.b']
    check_finite(tape.logits, 'classifier logits')
    tape.probs = special.softmax(tape.logits, axis=1)
    return tape.probs, tape


def forward(net, alpha, x):
    """Class probabilities for a single sample or a batch.

    Returns
    -------
    probs : ndarray
        Shape (num_classes,) for a vector input, (batch, num_classes) otherwise.
    tape : Tape
        Activation record for :py:func:`backward`.
    """
    X, single = _as_batch(net, x)
    probs, tape = forward_batch(net, alpha, X)
    return (probs[0] if single else probs), tape


def genotype_forward(net, genotype, x):
    """Probabilities of the discrete architecture, one op per edge."""
    genotype.check_space(net.space)
    probs, _ = forward(net, genotype, x)
    return probs


def predict(net, arch, X):
    """Predicted class per row (lowest class index on ties)."""
    probs, _ = forward_batch(net, arch, X)
    return np.argmax(probs, axis=1)


# --------------------------------------------------------------
# Backward


@dataclass
class Gradients:
    """Result of one backward pass over a batch."""

    loss: float
    grad_w: dict
    grad_alpha: np.ndarray
    probs: np.ndarray
    errors: np.ndarray
    sample_losses: np.ndarray


def cross_entropy(logits, labels):
    """Per-sample softmax cross-entropy from logits."""
    labels = np.asarray(labels, dtype=np.int64)
    return special.logsumexp(logits, axis=1) - logits[np.arange(logits.shape[0]), labels]


def backward(net, arch, tape, labels):
    """Exact gradients of the mean cross-entropy of a taped batch.

    Parameters
    ----------
    net : Supernet
    arch : ArchParams or Genotype
        Must be the architecture the tape was recorded with. ``grad_alpha``
        is only computed for ArchParams.
    tape : Tape
        From :py:func:`forward_batch` on the same batch.
    labels : array_like of int, shape (batch,)

    Returns
    -------
    Gradients
        Loss, gradient dict for w, gradient for alpha, and per-sample
        probabilities and prediction errors ``||p - y||_2``.
    """
    space = net.space
    labels = np.asarray(labels, dtype=np.int64)
    B = tape.batch_size
    if labels.shape != (B,):
        raise ValueError("tape holds {0} samples but got {1} labels".format(B, labels.shape[0]))
    betas = tape.betas

    Y = one_hot(labels, space.num_classes)
    sample_losses = cross_entropy(tape.logits, labels)
    dlogits = (tape.probs - Y) / B

    grad_w = {kk: np.zeros_like(vv) for kk, vv in net.params.items()}
    grad_beta = np.zeros_like(betas)

    h_last = tape.nodes[-1][-1]
    grad_w['head.W'] = dlogits.T @ h_last
    grad_w['head.b'] = dlogits.sum(axis=0)
    dh = dlogits @ net.params['head.W']

    cell_edges = space.cell_edges()
    for cc in reversed(range(space.num_cells)):
        nodes = tape.nodes[cc]
        dnodes = [np.zeros_like(nn) for nn in nodes]
        dnodes[-1] = dh
        # Edges are stored dst-major, so walking them backwards visits every
        # consumer of a node before the node itself.
        for local in reversed(range(len(cell_edges))):
            ii, jj = cell_edges[local]
            edge = cc * space.edges_per_cell + local
            g = dnodes[jj]
            x = nodes[ii]
            for kk, op in enumerate(space.candidate_ops):
                out = tape.edge_outs[edge][kk]
                if out is None:
                    continue
                grad_beta[edge, kk] = np.sum(g * out)
                W, _ = net.edge_params(edge, kk)
                dx, dW, db = _op_backward(op, betas[edge, kk] * g, x, tape.edge_pre[edge][kk], W)
                if dx is not None:
                    dnodes[ii] += dx
                if dW is not None:
                    wkey, bkey = net.edge_param_keys(edge, kk)
                    grad_w[wkey] += dW
                    grad_w[bkey] += db
        dh = dnodes[0]

    if space.has_stem:
        grad_w['stem.W'] = dh.T @ tape.inputs
        grad_w['stem.b'] = dh.sum(axis=0)

    grad_alpha = None
    if isinstance(arch, ArchParams):
        grad_alpha = betas * (grad_beta - np.sum(betas * grad_beta, axis=1, keepdims=True))

    return Gradients(
        loss=float(sample_losses.mean()),
        grad_w=grad_w,
        grad_alpha=grad_alpha,
        probs=tape.probs,
        errors=row_l2_distance(tape.probs, Y),
        sample_losses=sample_losses,
    )


def loss_and_gradients(net, arch, X, labels):
    """Forward and backward on one batch."""
    _, tape = forward_batch(net, arch, X)
    return backward(net, arch, tape, labels)


def batch_loss(net, arch, X, labels):
    """Mean cross-entropy of a batch without gradients."""
    _, tape = forward_batch(net, arch, X)
    return float(cross_entropy(tape.logits, labels).mean())

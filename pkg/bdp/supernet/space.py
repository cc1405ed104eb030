"""Search space description: candidate operations, cell topology and genotypes.

"""

import enum
import logging
from dataclasses import dataclass, field
from math import comb

import numpy as np
import parse

from ..numcore import softmax

logger = logging.getLogger(__name__)


class OpKind(enum.Enum):
    """Candidate operations on a feature vector.

    ``zero``, ``identity`` and ``meanpool`` are parameter-free; ``linear`` and
    ``linearact`` own a weight matrix and a bias.
    """

    ZERO = 'zero'
    IDENTITY = 'identity'
    LINEAR = 'linear'
    LINEARACT = 'linearact'
    MEANPOOL = 'meanpool'

    @property
    def is_parametric(self):
        return self in (OpKind.LINEAR, OpKind.LINEARACT)

    @classmethod
    def from_name(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            valid = [op.value for op in cls]
            raise ValueError("unknown operation '{0}', expected one of {1}".format(name, valid))


DEFAULT_OPS = (OpKind.ZERO, OpKind.IDENTITY, OpKind.LINEAR, OpKind.LINEARACT, OpKind.MEANPOOL)


@dataclass(frozen=True)
class SpaceConfig:
    """Cell-based search space.

    Attributes
    ----------
    nodes_per_cell : int
        Nodes per cell including the input node; every pair i < j is an edge.
    candidate_ops : tuple of OpKind
        Ordered, duplicate-free candidate set.
    feature_dim : int
        Width of every node representation.
    num_cells : int
        Cells chained one after the other.
    num_classes : int
        Width of the classifier head.
    input_dim : int
        Width of raw samples. When it differs from ``feature_dim`` an affine
        stem maps samples into the first cell.
    """

    nodes_per_cell: int = 4
    candidate_ops: tuple = DEFAULT_OPS
    feature_dim: int = 8
    num_cells: int = 1
    num_classes: int = 2
    input_dim: int = None

    def __post_init__(self):
        ops = tuple(OpKind.from_name(op) for op in self.candidate_ops)
        object.__setattr__(self, 'candidate_ops', ops)
        if self.input_dim is None:
            object.__setattr__(self, 'input_dim', self.feature_dim)

    def validate(self):
        """Raise ValueError if the space cannot be built."""
        if self.feature_dim < 1:
            raise ValueError("feature_dim must be >= 1, got {0}".format(self.feature_dim))
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1, got {0}".format(self.input_dim))
        if len(self.candidate_ops) == 0:
            raise ValueError("candidate set is empty")
        if len(set(self.candidate_ops)) != len(self.candidate_ops):
            raise ValueError("candidate set has duplicates: {0}".format(self.op_names))
        if self.nodes_per_cell < 2:
            raise ValueError("nodes_per_cell must be >= 2, got {0}".format(self.nodes_per_cell))
        if self.num_cells < 1:
            raise ValueError("num_cells must be >= 1, got {0}".format(self.num_cells))
        if self.num_classes < 2:
            raise ValueError("num_classes must be >= 2, got {0}".format(self.num_classes))
        return self

    @property
    def op_names(self):
        return [op.value for op in self.candidate_ops]

    @property
    def num_ops(self):
        return len(self.candidate_ops)

    @property
    def has_stem(self):
        return self.input_dim != self.feature_dim

    @property
    def edges_per_cell(self):
        return comb(self.nodes_per_cell, 2)

    @property
    def num_edges(self):
        return self.num_cells * self.edges_per_cell

    def cell_edges(self):
        """(src, dst) pairs of one cell, ordered by destination then source."""
        return [(ii, jj) for jj in range(1, self.nodes_per_cell) for ii in range(jj)]

    def edges(self):
        """(cell, src, dst) triples in global edge order."""
        return [(cc, ii, jj) for cc in range(self.num_cells) for ii, jj in self.cell_edges()]

    def edge_name(self, index):
        cc, ii, jj = self.edges()[index]
        return "cell{0}.edge{1}->{2}".format(cc, ii, jj)

    def num_parameters(self):
        """Closed-form size of w."""
        d = self.feature_dim
        n_param_ops = sum(op.is_parametric for op in self.candidate_ops)
        count = self.num_edges * n_param_ops * (d * d + d)
        count += self.num_classes * d + self.num_classes
        if self.has_stem:
            count += d * self.input_dim + d
        return count


class ArchParams:
    """Architecture parameters alpha, one row of logits per edge."""

    def __init__(self, alpha):
        alpha = np.array(alpha, dtype=np.float64)
        if alpha.ndim != 2:
            raise ValueError("alpha must be 2-D (edges, ops), got shape {0}".format(alpha.shape))
        if not np.all(np.isfinite(alpha)):
            raise ValueError("alpha has non-finite entries")
        self.alpha = alpha

    @classmethod
    def zeros(cls, space):
        return cls(np.zeros((space.num_edges, space.num_ops)))

    @property
    def shape(self):
        return self.alpha.shape

    def betas(self):
        """Row-wise softmax of alpha."""
        return softmax(self.alpha)

    def flat(self):
        return self.alpha.ravel().copy()

    def with_flat(self, vec):
        return ArchParams(np.asarray(vec, dtype=np.float64).reshape(self.alpha.shape))

    def copy(self):
        return ArchParams(self.alpha.copy())


@dataclass(frozen=True)
class Genotype:
    """Discrete architecture: one chosen op index per edge."""

    chosen_op: tuple
    num_ops: int = field(default=len(DEFAULT_OPS))

    def __post_init__(self):
        object.__setattr__(self, 'chosen_op', tuple(int(kk) for kk in self.chosen_op))
        for kk in self.chosen_op:
            if kk < 0 or kk >= self.num_ops:
                raise ValueError("op index {0} outside candidate set of size {1}".format(kk, self.num_ops))

    def betas(self):
        """One-hot rows, weight 1 on the chosen op."""
        out = np.zeros((len(self.chosen_op), self.num_ops))
        out[np.arange(len(self.chosen_op)), self.chosen_op] = 1.0
        return out

    def check_space(self, space):
        if self.num_ops != space.num_ops or len(self.chosen_op) != space.num_edges:
            raise ValueError(
                "genotype with {0} edges over {1} ops does not fit a space with {2} edges over {3} ops".format(
                    len(self.chosen_op), self.num_ops, space.num_edges, space.num_ops))
        return self

    def op_kinds(self, space):
        self.check_space(space)
        return [space.candidate_ops[kk] for kk in self.chosen_op]

    def to_text(self, space):
        """One ``cell<i>.edge<src>-><dst>: <op_name>`` line per edge."""
        lines = []
        for (cc, ii, jj), op in zip(space.edges(), self.op_kinds(space)):
            lines.append("cell{0}.edge{1}->{2}: {3}".format(cc, ii, jj, op.value))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, space):
        """Parse the genotype text format against a space."""
        pattern = parse.compile("cell{cell:d}.edge{src:d}->{dst:d}: {op}")
        chosen = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if len(line.strip()) == 0:
                continue
            res = pattern.parse(line.strip())
            if res is None:
                raise ValueError("line {0}: cannot parse genotype entry '{1}'".format(lineno, line))
            try:
                op = OpKind.from_name(res['op'].strip())
            except ValueError as e:
                raise ValueError("line {0}: {1}".format(lineno, e))
            if op not in space.candidate_ops:
                raise ValueError("line {0}: op '{1}' is not a candidate of this space".format(lineno, op.value))
            chosen[(res['cell'], res['src'], res['dst'])] = space.candidate_ops.index(op)

        expected = space.edges()
        if set(chosen) != set(expected):
            raise ValueError("genotype edges do not match the space: got {0} entries, expected {1}".format(
                len(chosen), len(expected)))
        return cls(tuple(chosen[ee] for ee in expected), space.num_ops)


def discretize(alpha):
    """Genotype taking the highest-alpha op on every edge.

    ``numpy.argmax`` returns the first maximum, so ties go to the lowest op
    index.
    """
    a = alpha.alpha if isinstance(alpha, ArchParams) else np.asarray(alpha, dtype=np.float64)
    return Genotype(tuple(np.argmax(a, axis=1)), a.shape[1])


def genotype_to_alpha(genotype):
    """One-hot encoding of a genotype as an alpha matrix."""
    return ArchParams(genotype.betas())

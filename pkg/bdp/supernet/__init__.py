#!/usr/bin/python

import os

from .space import (OpKind, DEFAULT_OPS, SpaceConfig, ArchParams, Genotype,  # noqa: F401
                    discretize, genotype_to_alpha)
from .network import (Supernet, Tape, Gradients, build_supernet, mixed_edge_forward,  # noqa: F401
                      forward, forward_batch, backward, loss_and_gradients, genotype_forward,
                      predict, batch_loss, cross_entropy, flatten_grads)

with open(os.path.join(os.path.dirname(__file__), "README.md"), 'r') as f:
    __doc__ = f.read()

#!/usr/bin/python

import os

from .kernels import (softmax, l2_distance, row_l2_distance, one_hot, relu,  # noqa: F401
                      power_iteration, central_diff_gradient, check_finite, as_vec)
from .rng import RngStream, seeded_rng  # noqa: F401

with open(os.path.join(os.path.dirname(__file__), "README.md"), 'r') as f:
    __doc__ = f.read()

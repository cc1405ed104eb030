#!/usr/bin/python

import os

from .hessian import hvp, default_step, validation_loss_gradient, dominant_eigenvalue, taylor_bound  # noqa: F401
from .trajectory import (TrajectoryRecord, TRAJECTORY_COLUMNS, CLASS_COUNT_COLUMNS,  # noqa: F401
                         trajectory_frame, check_monotone, write_csv, write_trajectory,
                         read_trajectory, class_count_frame)
from .heatmap import export_heatmap, write_heatmap  # noqa: F401

with open(os.path.join(os.path.dirname(__file__), "README.md"), 'r') as f:
    __doc__ = f.read()

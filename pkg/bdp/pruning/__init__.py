#!/usr/bin/python

import os

from .scores import el2n, voe, variance_of_errors, ScoreTable, score_table  # noqa: F401
from .balance import balance_degree, constraint_intensity, class_limits, FAMILIES  # noqa: F401
from .prune import (Criterion, PruneConfig, OneShotConfig, PruneEvent, prune_target, prune_round,  # noqa: F401
                    progressive_prune, one_shot_el2n_prune, removal_recurrence)

with open(os.path.join(os.path.dirname(__file__), "README.md"), 'r') as f:
    __doc__ = f.read()

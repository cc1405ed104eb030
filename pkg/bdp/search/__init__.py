#!/usr/bin/python

import os

from .state import SetState  # noqa: F401
from .bilevel import (REGULARIZERS, SearchConfig, EpochStats, SearchState, SearchResult,  # noqa: F401
                      get_regularizer, init_velocity, update_alpha, update_weights, evaluate,
                      search_epoch, state_eigenvalue, run_search)
from .retrain import EvalConfig, EvalResult, train_genotype  # noqa: F401

with open(os.path.join(os.path.dirname(__file__), "README.md"), 'r') as f:
    __doc__ = f.read()

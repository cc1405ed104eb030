#!/usr/bin/python

import os

from .config import ConfigError, RunConfig, SCHEMA, load_config  # noqa: F401
from .plotting import emit_svg, load_template  # noqa: F401
from .batch import (GRID_COLUMNS, build_dataset, run_experiment, run_eval, run_grid_cell, grid_summary,  # noqa: F401
                    write_search_outputs, cmd_search, cmd_grid, cmd_eval, cmd_plot, main)

with open(os.path.join(os.path.dirname(__file__), "README.md"), 'r') as f:
    __doc__ = f.read()

#!/usr/bin/python

import os

from .dataset import Dataset  # noqa: F401
from .synthetic import gen_blobs, LAYOUTS  # noqa: F401
from .csv_io import load_csv, save_csv  # noqa: F401
from .splitting import SplitSpec, split  # noqa: F401

with open(os.path.join(os.path.dirname(__file__), "README.md"), 'r') as f:
    __doc__ = f.read()

"""Run configuration: loading and strict validation.

A run config is a JSON document (YAML is accepted as a superset) with the
sections below. Every section except ``data`` has defaults; unknown keys, wrong
types and out-of-range values raise :py:class:`ConfigError` before any
computation starts.

Example
-------
{
  "seed": 0,
  "data": {"source": "synthetic", "num_classes": 3, "per_class": 200, "dim": 2,
           "noise_sigma": 0.2, "layout": "xor_rings"},
  "split": {"ratio": [5, 5], "test_fraction": 0.2},
  "space": {"nodes_per_cell": 4, "feature_dim": 8},
  "search": {"epochs": 50, "batch_size": 32},
  "prune": {"interval": 10, "p_train": 15, "p_val": 15, "family": "a"}
}
"""

import copy
import itertools
import logging
from dataclasses import dataclass, field, replace

import yaml

from ..data import LAYOUTS, SplitSpec
from ..pruning import OneShotConfig, PruneConfig
from ..search import EvalConfig, SearchConfig
from ..supernet import SpaceConfig

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid run configuration."""


# Section -> key -> (type, default). None defaults mark optional keys.
SCHEMA = {
    'data': {
        'source': (str, 'synthetic'),
        'path': (str, None),
        'num_classes': (int, 3),
        'per_class': (int, 200),
        'dim': (int, 2),
        'noise_sigma': (float, 0.2),
        'layout': (str, 'xor_rings'),
    },
    'split': {
        'train_fraction': (float, None),
        'test_fraction': (float, 0.2),
        'ratio': (list, None),
        'stratified': (bool, True),
    },
    'space': {
        'nodes_per_cell': (int, 4),
        'candidate_ops': (list, ['zero', 'identity', 'linear', 'linearact', 'meanpool']),
        'feature_dim': (int, 8),
        'num_cells': (int, 1),
    },
    'search': {
        'epochs': (int, 50),
        'batch_size': (int, 32),
        'lr_w': (float, 0.025),
        'lr_alpha': (float, 3e-3),
        'momentum_w': (float, 0.9),
        'regularizer': (str, 'none'),
        'use_tqdm': (bool, False),
    },
    'prune': {
        'interval': (int, 10),
        'p_train': (float, 15.0),
        'p_val': (float, 15.0),
        'criterion_train': (str, 'low'),
        'criterion_val': (str, 'high'),
        'family': (str, 'a'),
        'metric': (str, 'voe'),
    },
    'one_shot': {
        'warmup_epochs': (int, 10),
        'train': (str, 'low'),
        'val': (str, None),
        'fraction': (float, 0.5),
    },
    'analysis': {
        'eig_mode': (str, 'pruning'),
        'eig_max_iters': (int, 50),
        'eig_tol': (float, 1e-4),
        'taylor_space': (str, 'beta'),
        'plot': (bool, False),
    },
    'eval': {
        'epochs': (int, 50),
        'batch_size': (int, 32),
        'lr_w': (float, 0.025),
        'momentum_w': (float, 0.9),
    },
    'grid': {
        'criteria': (list, [['low', 'low'], ['low', 'high'], ['high', 'low'], ['high', 'high']]),
        'ratios': (list, [[25, 5], [20, 10], [15, 15], [10, 20], [5, 25]]),
        'splits': (list, None),
        'seeds': (list, None),
    },
    'output': {
        'dir': (str, None),
    },
}

# Sections that may be null or absent and then stay disabled
OPTIONAL_SECTIONS = ('one_shot',)


def _type_ok(value, typ):
    if typ is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if typ is int:
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, typ)


def _check_section(name, raw):
    schema = SCHEMA[name]
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("section '{0}' must be a mapping, got {1}".format(name, type(raw).__name__))
    unknown = sorted(set(raw) - set(schema))
    if len(unknown) > 0:
        raise ConfigError("unknown key(s) {0} in section '{1}'".format(unknown, name))
    out = {}
    for key, (typ, default) in schema.items():
        value = raw.get(key, copy.deepcopy(default))
        if value is not None and not _type_ok(value, typ):
            raise ConfigError("{0}.{1} must be of type {2}, got {3!r}".format(name, key, typ.__name__, value))
        if typ is float and value is not None:
            value = float(value)
        out[key] = value
    return out


def _pairs(name, value, kind):
    if not all(isinstance(vv, (list, tuple)) and len(vv) == 2 for vv in value):
        raise ConfigError("{0} must be a list of pairs, got {1!r}".format(name, value))
    if kind == 'number' and not all(_type_ok(xx, float) for vv in value for xx in vv):
        raise ConfigError("{0} must hold numeric pairs, got {1!r}".format(name, value))
    if kind == 'str' and not all(isinstance(xx, str) for vv in value for xx in vv):
        raise ConfigError("{0} must hold string pairs, got {1!r}".format(name, value))
    return [tuple(vv) for vv in value]


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration.

    The dataset-dependent parts of the search space (input dimension and
    class count) are filled in by :py:meth:`search_config` once the data is
    loaded.
    """

    seed: int
    data: dict
    split: SplitSpec
    space: dict
    search: dict
    prune: PruneConfig
    one_shot: OneShotConfig
    analysis: dict
    eval: EvalConfig
    grid: dict
    output: dict = field(default_factory=dict)

    def space_config(self, input_dim, num_classes):
        return SpaceConfig(input_dim=input_dim, num_classes=num_classes, **self.space)

    def search_config(self, input_dim, num_classes):
        """SearchConfig for a dataset with the given dimension and class count."""
        return SearchConfig(
            space=self.space_config(input_dim, num_classes),
            prune=self.prune,
            one_shot=self.one_shot,
            eig_mode=self.analysis['eig_mode'],
            eig_max_iters=self.analysis['eig_max_iters'],
            eig_tol=self.analysis['eig_tol'],
            taylor_space=self.analysis['taylor_space'],
            **self.search,
        )

    def with_cell(self, criterion_train, criterion_val, p_train, p_val, seed=None, ratio=None):
        """Copy with one grid cell's pruning criteria, ratios, seed and split."""
        prune = replace(self.prune, criterion_train=criterion_train, criterion_val=criterion_val,
                        p_train=float(p_train), p_val=float(p_val))
        seed = self.seed if seed is None else int(seed)
        split = replace(self.split, seed=seed)
        if ratio is not None:
            split = SplitSpec.from_ratio(ratio[0], ratio[1], self.split.test_fraction, seed, self.split.stratified)
        return replace(self, seed=seed, prune=prune, split=split)

    def grid_cells(self):
        """Cross product of criteria, ratios, splits and seeds, in config order."""
        splits = self.grid['splits'] if self.grid['splits'] is not None else [None]
        seeds = self.grid['seeds'] if self.grid['seeds'] is not None else [self.seed]
        cells = []
        for (ct, cv), (pt, pv), ratio, seed in itertools.product(self.grid['criteria'], self.grid['ratios'],
                                                                 splits, seeds):
            cells.append({'criterion_train': ct, 'criterion_val': cv, 'p_train': pt, 'p_val': pv,
                          'ratio': ratio, 'seed': seed})
        return cells


def _read(config):
    if isinstance(config, dict):
        return copy.deepcopy(config)
    if not isinstance(config, str):
        raise ConfigError("config must be a str or dict, got {0}".format(type(config)))
    try:
        # See if we have a filepath
        with open(config, 'r', encoding='utf-8') as f:
            text = f.read()
    except (UnicodeDecodeError, FileNotFoundError, OSError):
        # We have a document string
        text = config
    try:
        loaded = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError("cannot parse config: {0}".format(e))
    if not isinstance(loaded, dict):
        raise ConfigError("config must be a mapping of sections, got {0!r}".format(loaded))
    return loaded


def load_config(config):
    """Load and validate a run configuration.

    Parameters
    ----------
    config : str or dict
        Path to a JSON/YAML file, a document string or a dict.

    Returns
    -------
    RunConfig
    """
    raw = _read(config)

    unknown = sorted(set(raw) - set(SCHEMA) - {'seed'})
    if len(unknown) > 0:
        raise ConfigError("unknown section(s) {0}".format(unknown))
    if 'data' not in raw:
        raise KeyError("Please specify a data section in config.")

    seed = raw.get('seed', 0)
    if not _type_ok(seed, int) or seed < 0:
        raise ConfigError("seed must be a non-negative integer, got {0!r}".format(seed))

    sections = {}
    for name in SCHEMA:
        if name in OPTIONAL_SECTIONS and raw.get(name) is None:
            sections[name] = None
            continue
        sections[name] = _check_section(name, raw.get(name))

    data = sections['data']
    if data['source'] not in ('synthetic', 'csv'):
        raise ConfigError("data.source must be 'synthetic' or 'csv', got '{0}'".format(data['source']))
    if data['source'] == 'csv' and data['path'] is None:
        raise ConfigError("data.path is required when data.source is 'csv'")
    if data['source'] == 'synthetic':
        if data['num_classes'] < 2 or data['per_class'] < 1 or data['dim'] < 2 or data['noise_sigma'] < 0:
            raise ConfigError("synthetic data needs num_classes >= 2, per_class >= 1, dim >= 2 and "
                              "noise_sigma >= 0, got {0}".format(data))
        if data['layout'] not in LAYOUTS:
            raise ConfigError("data.layout must be one of {0}, got '{1}'".format(LAYOUTS, data['layout']))

    grid = sections['grid']
    grid['criteria'] = _pairs('grid.criteria', grid['criteria'], 'str')
    grid['ratios'] = _pairs('grid.ratios', grid['ratios'], 'number')
    if grid['splits'] is not None:
        grid['splits'] = _pairs('grid.splits', grid['splits'], 'number')
    if grid['seeds'] is not None and not all(_type_ok(ss, int) and ss >= 0 for ss in grid['seeds']):
        raise ConfigError("grid.seeds must be non-negative integers, got {0!r}".format(grid['seeds']))

    try:
        sp = sections['split']
        if sp['ratio'] is not None:
            if sp['train_fraction'] is not None:
                raise ConfigError("split takes either ratio or train_fraction, not both")
            ratio = _pairs('split.ratio', [sp['ratio']], 'number')[0]
            split = SplitSpec.from_ratio(ratio[0], ratio[1], sp['test_fraction'], seed, sp['stratified'])
        else:
            train_fraction = sp['train_fraction'] if sp['train_fraction'] is not None else 0.4
            split = SplitSpec(train_fraction, sp['test_fraction'], seed, sp['stratified'])
        split.validate()

        prune = PruneConfig(**sections['prune']).validate()
        one_shot = None if sections['one_shot'] is None else OneShotConfig(**sections['one_shot'])
        for ct, cv in grid['criteria']:
            replace(prune, criterion_train=ct, criterion_val=cv)

        run = RunConfig(seed=seed, data=data, split=split, space=sections['space'], search=sections['search'],
                        prune=prune, one_shot=one_shot, analysis=sections['analysis'],
                        eval=EvalConfig(**sections['eval']).validate(), grid=grid, output=sections['output'])

        # Dataset-dependent fields get provisional values so the rest can be checked now
        num_classes = data['num_classes'] if data['source'] == 'synthetic' else 2
        run.search_config(run.space['feature_dim'], num_classes).validate()
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(str(e))

    logger.debug('loaded run config with seed {0}'.format(seed))
    return run

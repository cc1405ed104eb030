"""Experiment driver and the ``bdp`` command line.

Subcommands
-----------
search : run one search and write its trajectory, class counts, heatmap,
    genotype and result summary
grid : run a search for every criterion, ratio, split and seed combination
eval : train a genotype's weights from scratch and report test accuracy
plot : redraw trajectory.svg from an output directory
"""

import argparse
import json
import pathlib
import sys
import traceback
from time import localtime, strftime

import numpy as np
import pandas as pd
from tabulate import tabulate

from ..analysis import class_count_frame, export_heatmap, write_csv, write_heatmap, write_trajectory
from ..data import gen_blobs, load_csv, split
from ..numcore import seeded_rng
from ..pruning import removal_recurrence
from ..search import run_search, train_genotype
from ..supernet import Genotype
from ..utils import dask_parallel_bag, validate_outdir, write_text
from ..utils import logger as bdp_logger
from ..utils.logger import log_or_print
from .config import ConfigError, load_config
from .plotting import emit_svg

import logging
logger = logging.getLogger(__name__)

GRID_COLUMNS = ['criterion_train', 'criterion_val', 'p_train', 'p_val', 'split', 'seed', 'test_acc', 'val_acc',
                'train_acc', 'remaining_train_fraction', 'remaining_val_fraction', 'min_balance_train',
                'min_balance_val', 'final_eig']

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


# --------------------------------------------------------------
# Experiment building blocks


def build_dataset(run):
    """Load or generate the dataset of a run config."""
    data = run.data
    if data['source'] == 'csv':
        return load_csv(data['path'])
    return gen_blobs(data['num_classes'], data['per_class'], data['dim'], noise_sigma=data['noise_sigma'],
                     layout=data['layout'], seed=seeded_rng(run.seed).derive('data'))


def summarize(run, cfg, result, initial_train, initial_val, test_size):
    """Result summary written to result.json."""
    last = result.trajectory[-1]
    expected = removal_recurrence(initial_train, cfg.prune.p_train, cfg.rounds)[-1] if cfg.prune.enabled \
        else initial_train
    return {
        'seed': run.seed,
        'epochs': cfg.epochs,
        'prune_rounds': cfg.rounds if cfg.prune.enabled else 0,
        'criterion_train': cfg.prune.criterion_train.value,
        'criterion_val': cfg.prune.criterion_val.value,
        'p_train': cfg.prune.p_train,
        'p_val': cfg.prune.p_val,
        'family': cfg.prune.family,
        'metric': cfg.prune.metric,
        'initial_train': int(initial_train),
        'initial_val': int(initial_val),
        'test_size': int(test_size),
        'remaining_train': int(last.remaining_train),
        'remaining_val': int(last.remaining_val),
        'remaining_train_fraction': last.remaining_train / initial_train,
        'remaining_val_fraction': last.remaining_val / initial_val,
        'expected_remaining_train': int(expected),
        'final_train_acc': last.train_acc,
        'final_val_acc': last.val_acc,
        'final_test_acc': last.test_acc,
        'min_balance_train': min(rr.balance_train for rr in result.trajectory),
        'min_balance_val': min(rr.balance_val for rr in result.trajectory),
        'eig_trajectory': [{'epoch': rr.epoch, 'eig_max': rr.eig_max}
                           for rr in result.trajectory if rr.eig_max is not None],
        'final_eig': result.final_eig,
        'taylor_bound': result.taylor,
        'taylor_space': cfg.taylor_space,
        'genotype': result.genotype.to_text(cfg.space).splitlines(),
    }


def run_experiment(run):
    """Build data, split it and search.

    Returns
    -------
    dataset : Dataset
    cfg : SearchConfig
    result : SearchResult
    summary : dict
    """
    dataset = build_dataset(run)
    train, val, test_ids = split(dataset, run.split)
    initial_train, initial_val = train.size, val.size
    cfg = run.search_config(dataset.dim, dataset.num_classes)
    result = run_search(cfg, dataset, train, val, test_ids, seeded_rng(run.seed))
    summary = summarize(run, cfg, result, initial_train, initial_val, len(test_ids))
    return dataset, cfg, result, summary


def write_json(obj, path):
    write_text(path, json.dumps(obj, sort_keys=True, indent=2) + '\n')
    return path


def write_search_outputs(outdir, run, cfg, result, summary):
    """Write every search artefact into ``outdir``."""
    outdir = pathlib.Path(outdir)
    write_trajectory(result.trajectory, outdir / 'trajectory.csv')
    write_csv(class_count_frame(result.class_counts), outdir / 'class_counts.csv')
    write_heatmap(export_heatmap(result.alpha, cfg.space), outdir / 'heatmap.csv')
    write_text(outdir / 'genotype.txt', result.genotype.to_text(cfg.space))
    write_json(summary, outdir / 'result.json')
    if run.analysis['plot']:
        emit_svg(outdir / 'trajectory.csv', outdir / 'trajectory.svg')
    logger.info('outputs written to {0}'.format(outdir))


def run_eval(run, genotype_text):
    """Train a genotype on every non-test sample and measure test accuracy.

    Returns
    -------
    result : EvalResult
    genotype : Genotype
    space : SpaceConfig
    """
    dataset = build_dataset(run)
    train, val, test_ids = split(dataset, run.split)
    space = run.space_config(dataset.dim, dataset.num_classes)
    genotype = Genotype.from_text(genotype_text, space)
    train_ids = np.sort(np.concatenate([train.active_ids, val.active_ids]))
    result = train_genotype(space, genotype, dataset, train_ids, test_ids, run.eval,
                            seeded_rng(run.seed).derive('eval'))
    return result, genotype, space


def run_grid_cell(run, cell):
    """Search one grid cell and return its grid.csv row."""
    cell_run = run.with_cell(cell['criterion_train'], cell['criterion_val'], cell['p_train'], cell['p_val'],
                             seed=cell['seed'], ratio=cell['ratio'])
    _, _, _, summary = run_experiment(cell_run)
    ratio = cell['ratio']
    log_or_print('grid cell {0}/{1} p={2:g}/{3:g} seed={4}: test_acc={5:.4f}'.format(
        cell['criterion_train'], cell['criterion_val'], cell['p_train'], cell['p_val'], cell['seed'],
        summary['final_test_acc']))
    return {
        'criterion_train': str(cell['criterion_train']).lower(),
        'criterion_val': str(cell['criterion_val']).lower(),
        'p_train': float(cell['p_train']),
        'p_val': float(cell['p_val']),
        'split': '' if ratio is None else '{0:g}:{1:g}'.format(*ratio),
        'seed': int(cell['seed']),
        'test_acc': summary['final_test_acc'],
        'val_acc': summary['final_val_acc'],
        'train_acc': summary['final_train_acc'],
        'remaining_train_fraction': summary['remaining_train_fraction'],
        'remaining_val_fraction': summary['remaining_val_fraction'],
        'min_balance_train': summary['min_balance_train'],
        'min_balance_val': summary['min_balance_val'],
        'final_eig': np.nan if summary['final_eig'] is None else summary['final_eig'],
    }


def grid_summary(grid):
    """Mean and best test accuracy per criterion pair."""
    summary = grid.groupby(['criterion_train', 'criterion_val'], sort=False)['test_acc'].agg(['mean', 'max', 'count'])
    summary = summary.reset_index().rename(columns={'mean': 'mean_test_acc', 'max': 'best_test_acc',
                                                    'count': 'cells'})
    return summary


# --------------------------------------------------------------
# Command wrappers


def _setup_logging(outdir, verbose):
    logdir = validate_outdir(pathlib.Path(outdir) / 'logs')
    bdp_logger.set_up(log_file=logdir / 'bdp.log', level=verbose, startup=False)
    return logdir


def _prepare_outdir(outdir, verbose):
    """Create the output and log directories, or log why they cannot be used."""
    try:
        outdir = validate_outdir(outdir)
        logdir = _setup_logging(outdir, verbose)
    except (ValueError, OSError) as e:
        logger.error('cannot use output directory: {0}'.format(e))
        return None, None
    return outdir, logdir


def _guard(name, func, logdir):
    """Run func, logging a failure banner and writing bdp.error.log on error."""
    try:
        func()
    except Exception:
        ex_type, ex_value, ex_traceback = sys.exc_info()
        banner = '* {0} FAILED! *'.format(name.upper())
        logger.critical('*' * len(banner))
        logger.critical(banner)
        logger.critical('*' * len(banner))
        logger.error(ex_type)
        logger.error(ex_value)
        logger.error(''.join(traceback.format_tb(ex_traceback)))
        if logdir is not None:
            with open(pathlib.Path(logdir) / 'bdp.error.log', 'w') as f:
                f.write('{0} failed\n'.format(name))
                f.write(str(ex_type))
                f.write('\n')
                f.write(str(ex_value))
                f.write('\n')
                traceback.print_tb(ex_traceback, file=f)
        return EXIT_FAILED

    now = strftime("%Y-%m-%d %H:%M:%S", localtime())
    logger.info("{0} : {1} complete".format(now, name))
    return EXIT_OK


def _load(config):
    try:
        return load_config(config)
    except (ConfigError, KeyError) as e:
        logger.error('config error: {0}'.format(e))
        return None


def cmd_search(config, outdir=None, verbose='INFO'):
    """Run one search and write its outputs.

    Parameters
    ----------
    config : str or dict
        Run config path, document or dict.
    outdir : str, optional
        Output directory; defaults to the config's ``output.dir``.
    verbose : str
        Console logging level.

    Returns
    -------
    int
        Exit status: 0 success, 1 runtime failure, 2 config error.
    """
    run = _load(config)
    if run is None:
        return EXIT_CONFIG
    outdir = outdir if outdir is not None else run.output['dir']
    if outdir is None:
        logger.error('no output directory given')
        return EXIT_CONFIG
    outdir, logdir = _prepare_outdir(outdir, verbose)
    if outdir is None:
        return EXIT_CONFIG

    def _search():
        _, cfg, result, summary = run_experiment(run)
        write_search_outputs(outdir, run, cfg, result, summary)

    return _guard('search', _search, logdir)


def cmd_grid(config, outdir=None, dask_workers=None, verbose='INFO'):
    """Run every grid cell and write grid.csv and grid_summary.csv.

    Parameters
    ----------
    config : str or dict
    outdir : str, optional
    dask_workers : int, optional
        Start a local dask cluster with this many single-threaded workers
        and run cells on it.
    verbose : str

    Returns
    -------
    int
        Exit status.
    """
    run = _load(config)
    if run is None:
        return EXIT_CONFIG
    outdir = outdir if outdir is not None else run.output['dir']
    if outdir is None:
        logger.error('no output directory given')
        return EXIT_CONFIG
    outdir, logdir = _prepare_outdir(outdir, verbose)
    if outdir is None:
        return EXIT_CONFIG

    def _grid():
        cells = run.grid_cells()
        logger.info('running {0} grid cells'.format(len(cells)))
        if dask_workers:
            from ..utils import soft_import
            distributed = soft_import('dask.distributed')
            client = distributed.Client(n_workers=dask_workers, threads_per_worker=1)
            try:
                rows = dask_parallel_bag(run_grid_cell, [[run, cell] for cell in cells])
            finally:
                client.close()
        else:
            rows = [run_grid_cell(run, cell) for cell in cells]

        grid = pd.DataFrame(rows, columns=GRID_COLUMNS)
        write_csv(grid, outdir / 'grid.csv')
        summary = grid_summary(grid)
        write_csv(summary, outdir / 'grid_summary.csv')
        logger.info('grid summary\n' + tabulate(summary, headers='keys', tablefmt='github', showindex=False,
                                                floatfmt='.4f'))

    return _guard('grid', _grid, logdir)


def cmd_eval(genotype, config, outdir=None, verbose='INFO'):
    """Train a genotype from scratch and write eval.json.

    Parameters
    ----------
    genotype : str
        Path to a genotype.txt.
    config : str or dict
    outdir : str, optional
        Defaults to the directory holding the genotype file.
    verbose : str

    Returns
    -------
    int
        Exit status; a genotype that does not fit the space gives 2.
    """
    run = _load(config)
    if run is None:
        return EXIT_CONFIG
    try:
        with open(genotype, 'r', encoding='utf-8') as f:
            genotype_text = f.read()
    except OSError as e:
        logger.error('cannot read genotype: {0}'.format(e))
        return EXIT_CONFIG

    outdir, logdir = _prepare_outdir(outdir if outdir is not None else pathlib.Path(genotype).parent, verbose)
    if outdir is None:
        return EXIT_CONFIG

    try:
        dataset = build_dataset(run)
        space = run.space_config(dataset.dim, dataset.num_classes)
        Genotype.from_text(genotype_text, space)
    except ValueError as e:
        logger.error('genotype does not fit the search space: {0}'.format(e))
        return EXIT_CONFIG

    def _eval():
        result, genotype_obj, space = run_eval(run, genotype_text)
        write_json({
            'seed': run.seed,
            'epochs': result.epochs,
            'test_acc': result.test_acc,
            'train_acc': result.train_acc,
            'train_loss': result.train_loss,
            'genotype': genotype_obj.to_text(space).splitlines(),
        }, pathlib.Path(outdir) / 'eval.json')

    return _guard('eval', _eval, logdir)


def cmd_plot(indir, verbose='INFO'):
    """Write trajectory.svg next to the trajectory.csv of a search output directory."""
    indir = pathlib.Path(indir)
    if not (indir / 'trajectory.csv').exists():
        logger.error('no trajectory.csv in {0}'.format(indir))
        return EXIT_CONFIG
    indir, logdir = _prepare_outdir(indir, verbose)
    if indir is None:
        return EXIT_CONFIG
    return _guard('plot', lambda: emit_svg(indir / 'trajectory.csv', indir / 'trajectory.svg'), logdir)


# ----------------------------------------------------------
# Main CLI user function


def main(argv=None):
    """Main function for command line interface.

    Parameters
    ----------
    argv : list
        Command line arguments.

    Returns
    -------
    int
        Exit status.
    """
    if argv is None:
        argv = sys.argv[1:]

    parser = argparse.ArgumentParser(prog='bdp', description="Bi-level data pruning architecture search.")
    sub = parser.add_subparsers(dest='command', required=True)

    def _verbose(pp):
        pp.add_argument("--verbose", type=str, default="INFO",
                        choices=['CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG'],
                        help="Set the logging level for bdp functions")

    ps = sub.add_parser('search', help="Run one search")
    ps.add_argument("-c", "--config", type=str, required=True, help="JSON/YAML run config")
    ps.add_argument("-o", "--outdir", type=str, default=None, help="Output directory")
    _verbose(ps)

    pg = sub.add_parser('grid', help="Run the criterion x ratio grid")
    pg.add_argument("-c", "--config", type=str, required=True, help="JSON/YAML run config")
    pg.add_argument("-o", "--outdir", type=str, default=None, help="Output directory")
    pg.add_argument("--dask_workers", type=int, default=None, help="Run grid cells on a local dask cluster")
    _verbose(pg)

    pe = sub.add_parser('eval', help="Train a genotype from scratch")
    pe.add_argument("-g", "--genotype", type=str, required=True, help="genotype.txt to evaluate")
    pe.add_argument("-c", "--config", type=str, required=True, help="JSON/YAML run config")
    pe.add_argument("-o", "--outdir", type=str, default=None, help="Output directory for eval.json")
    _verbose(pe)

    pp = sub.add_parser('plot', help="Draw trajectory.svg from a search output directory")
    pp.add_argument("-i", "--indir", type=str, required=True, help="Search output directory")
    _verbose(pp)

    args = parser.parse_args(argv)

    if args.command == 'search':
        return cmd_search(args.config, args.outdir, args.verbose)
    if args.command == 'grid':
        return cmd_grid(args.config, args.outdir, args.dask_workers, args.verbose)
    if args.command == 'eval':
        return cmd_eval(args.genotype, args.config, args.outdir, args.verbose)
    return cmd_plot(args.indir, args.verbose)


if __name__ == "__main__":
    sys.exit(main())

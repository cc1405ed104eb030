"""Utility functions for parallel processing.

"""

from functools import partial

import logging
logger = logging.getLogger(__name__)


def dask_parallel_bag(func, iter_args, func_args=None, func_kwargs=None):
    """Map a function over a list of argument tuples on the active dask client.

    Parameters
    ----------
    func : function
        The function to run in parallel.
    iter_args : list
        A list of iterables to pass to func. Scalars are wrapped into
        single-argument lists.
    func_args : list, optional
        A list of positional arguments appended to each call.
    func_kwargs : dict, optional
        A dictionary of keyword arguments to pass to func.

    Returns
    -------
    results : list
        Return values of func, in the order of ``iter_args``.

    References
    ----------
    https://docs.dask.org/en/stable/bag.html
    """
    from .package import soft_import
    db = soft_import('dask.bag')
    distributed = soft_import('dask.distributed')

    func_args = [] if func_args is None else func_args
    func_kwargs = {} if func_kwargs is None else func_kwargs

    # Get connection to currently active cluster
    client = distributed.default_client()
    logger.info('Dask Client : {0}'.format(client.__repr__()))

    logger.debug('Running function : {0}'.format(func.__repr__()))
    logger.debug('User args : {0}'.format(func_args))
    logger.debug('User kwargs : {0}'.format(func_kwargs))

    # Set kwargs - need to handle args on function call to preserve order.
    run_func = partial(func, **func_kwargs)

    # Ensure input iter_args is list of lists
    if all(isinstance(aa, (list, tuple)) for aa in iter_args) is False:
        iter_args = [[aa] for aa in iter_args]

    # Add fixed positional args if specified
    iter_args = [list(aa) + list(func_args) for aa in iter_args]

    # One partition per task so cells are spread over workers
    b = db.from_sequence(iter_args, npartitions=max(1, len(iter_args)))
    bm = b.starmap(run_func)
    results = bm.compute()

    logger.info('Computation complete')

    return results

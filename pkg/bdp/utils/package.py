import importlib
import os

import logging
logger = logging.getLogger(__name__)

# Modules the grid runner needs only when it is asked for workers.
INSTALL_HINTS = {'dask': 'dask', 'dask.bag': 'dask', 'dask.distributed': 'distributed'}


def soft_import(package):
    """Import ``package`` or raise ModuleNotFoundError with an install hint.

    Parameters
    ----------
    package : str
        Dotted module name.

    Returns
    -------
    module
    """
    try:
        return importlib.import_module(package)
    except ImportError:
        dist = INSTALL_HINTS.get(package, package.split('.')[0])
        raise ModuleNotFoundError("'{0}' is needed here but cannot be imported; "
                                  "try `pip install {1}`".format(package, dist))


def run_package_tests(suite='canary', acceptance=False):
    """Run the bdp tests from within python.

    Parameters
    ----------
    suite : {'canary', 'all'}
        Only the structure checks, or the whole test directory.
    acceptance : bool
        Also run the slow end-to-end runs (sets ``BDP_ACCEPTANCE=1``).

    Returns
    -------
    int
        pytest exit code.

    Notes
    -----
    pytest.main() caches imported modules, so repeated calls from one process
    do not see code changes.
    """
    pytest = soft_import('pytest')

    testdir = os.path.join(os.path.dirname(os.path.dirname(os.path.realpath(__file__))), 'tests')
    if suite == 'canary':
        target = os.path.join(testdir, 'test_00_package_canary.py')
    elif suite == 'all':
        target = testdir
    else:
        raise ValueError("unknown test suite '{0}', expected 'canary' or 'all'".format(suite))
    if acceptance:
        os.environ['BDP_ACCEPTANCE'] = '1'
    logger.info('running {0} tests in {1}'.format(suite, testdir))

    return pytest.main(['-x', target])

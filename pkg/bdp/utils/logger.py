"""Logging set-up for bdp.

Every bdp module logs to a child of the ``bdp`` logger. The CLI calls
:func:`set_up` once per run with a log file inside the run's output directory;
library users get WARNING-level console output until they do the same.
"""

import logging
import logging.config

import yaml


logging.getLogger("bdp").setLevel(logging.WARNING)

bdp_logger = logging.getLogger(__name__)

LEVELS = ['CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG']

#%% ------------------------------------------------------------


default_config = """
version: 1
loggers:
  bdp:
    level: DEBUG
    handlers: [console, file]
    propagate: false
  py.warnings:
    level: WARNING
    handlers: [console, file]
    propagate: false

handlers:
  console:
    class : logging.StreamHandler
    formatter: brief
    level   : DEBUG
    stream  : ext://sys.stdout
  file:
    class : logging.FileHandler
    formatter: run
    filename: {log_file}
    mode: w

formatters:
  brief:
    format: '{prefix} %(message)s'
  default:
    format: '[%(asctime)s] {prefix} %(levelname)-8s : %(message)s'
    datefmt: '%H:%M:%S'
  run:
    format: '[%(asctime)s] {prefix} - %(levelname)s - %(name)s:%(lineno)s : %(message)s'
    datefmt: '%Y-%m-%d %H:%M:%S'

disable_existing_loggers: false

"""


def _formatters(prefix):
    return yaml.safe_load(default_config.format(prefix=prefix, log_file=None))['formatters']


def set_up(prefix='', log_file=None, level=None, console_format=None, startup=True, capture_warnings=True):
    """Configure the bdp logger tree.

    Parameters
    ----------
    prefix : str
        Attached to every message, e.g. a grid cell name.
    log_file : str or pathlib.Path
        Log file, overwritten on each call. Console only when None.
    level : {'CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG'}
        Console level.
    console_format : {'brief', 'default', 'run'}
        Console formatter.
    startup : bool
        Log a start-up message.
    capture_warnings : bool
        Route python warnings (e.g. numpy overflow warnings) to the same handlers.
    """
    if (len(prefix) > 0) and (console_format != 'run'):
        prefix = prefix + ' :'
    new_config = yaml.safe_load(default_config.format(prefix=prefix, log_file=log_file))

    if log_file is None:
        for name in new_config['loggers']:
            new_config['loggers'][name]['handlers'] = ['console']
        del new_config['handlers']['file']
    else:
        new_config['handlers']['file']['filename'] = str(log_file)

    logging.config.dictConfig(new_config)
    logging.captureWarnings(capture_warnings)

    if level is not None:
        set_level(level)
    if console_format is not None:
        set_format(formatter=console_format, prefix=prefix)

    if startup:
        bdp_logger.info('bdp logger started')
    if log_file is not None:
        bdp_logger.info('logging to file: {0}'.format(log_file))

    bdp_logger.already_setup = True


def set_level(level, handler='console'):
    """Set the level of one handler of the bdp logger.

    Parameters
    ----------
    level : {'CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG'}
    handler : str
        Handler name, 'console' or 'file'.
    """
    if level not in LEVELS:
        raise ValueError("level '{0}' not recognised, expected one of {1}".format(level, LEVELS))

    logger = logging.getLogger('bdp')
    for hh in logger.handlers:
        if hh.get_name() == handler:
            hh.setLevel(getattr(logging, level))
            logger.debug("handler '{0}' level set to '{1}'".format(hh.get_name(), level))


def get_level(handler='console'):
    """Level of one handler of the bdp logger, None if it is not attached."""
    for hh in logging.getLogger('bdp').handlers:
        if hh.get_name() == handler:
            return hh.level
    return None


def set_format(formatter='brief', prefix='', handler='console'):
    """Swap the formatter of one handler of the bdp logger.

    Parameters
    ----------
    formatter : {'brief', 'default', 'run'}
    prefix : str
    handler : str
    """
    formats = _formatters(prefix)
    if formatter not in formats:
        raise ValueError("formatter '{0}' not recognised, expected one of {1}".format(formatter, sorted(formats)))

    fmt = formats[formatter]
    for hh in logging.getLogger('bdp').handlers:
        if hh.get_name() == handler:
            hh.setFormatter(logging.Formatter(fmt['format'], datefmt=fmt.get('datefmt')))


def log_or_print(msg, warning=False):
    """Log at INFO once :func:`set_up` has run in this process, otherwise print.

    Grid cells running on dask workers have no configured logger, so their
    progress lines go to the worker's stdout.
    """
    if warning:
        msg = f"WARNING: {msg}"
    if hasattr(bdp_logger, "already_setup"):
        bdp_logger.info(msg)
    else:
        print(msg)

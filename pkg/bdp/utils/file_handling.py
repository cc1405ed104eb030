"""File handling utility functions.

"""

import os
import pathlib

# Housekeeping for logging
import logging
logger = logging.getLogger(__name__)


def validate_outdir(outdir):
    """Checks if an output directory exists and if not creates it.

    Parameters
    ----------
    outdir : str or pathlib.Path
        Directory to check. Its parent must already exist.

    Returns
    -------
    outdir : pathlib.Path
    """
    outdir = pathlib.Path(outdir)
    if outdir.exists():
        if not outdir.is_dir():
            raise ValueError("outdir must be the path to a directory: {0}".format(outdir))
        if not os.access(outdir, os.W_OK):
            raise PermissionError("No write access for {0}".format(outdir))
    else:
        if outdir.parent.exists():
            outdir.mkdir()
        else:
            raise ValueError(
                "Please create the parent directory: {0}".format(outdir.parent)
            )

    return outdir


def write_text(path, text):
    """Write text with LF line endings regardless of platform."""
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    logger.debug('wrote {0}'.format(path))
    return pathlib.Path(path)

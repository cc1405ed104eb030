#!/usr/bin/python

import logging
import os

# Some modules are chatty by default when a logger is on - set log-levels to
# WARNING on setup
logging.getLogger("asyncio").setLevel(logging.WARNING)
logging.getLogger("distributed").setLevel(logging.WARNING)

# --------------------------------------------------------
# Main importing - set module structure here

from . import utils  # noqa: F401, F403, E402
from . import numcore  # noqa: F401, F403, E402
from . import supernet  # noqa: F401, F403, E402
from . import search  # noqa: F401, F403, E402
from . import pruning  # noqa: F401, F403, E402
from . import analysis  # noqa: F401, F403, E402
from . import data  # noqa: F401, F403, E402
from . import experiments  # noqa: F401, F403, E402

# --------------------------------------------------------
bdp_logger = logging.getLogger(__name__)
bdp_logger.debug('bdp main init complete')

# --------------------------------------------------------
__version__ = '0.1.dev0'

with open(os.path.join(os.path.dirname(__file__), "README.md"), 'r') as f:
    __doc__ = f.read()

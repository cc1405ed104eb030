"""Operation-weight heatmaps of the architecture parameters.

"""

import logging

import numpy as np
import pandas as pd

from .trajectory import write_csv

logger = logging.getLogger(__name__)


def export_heatmap(alpha, space):
    """Table of beta per edge with the argmax op marked.

    Parameters
    ----------
    alpha : ArchParams
    space : SpaceConfig

    Returns
    -------
    pandas.DataFrame
        Columns ``edge``, one column per op name, then ``chosen``.
    """
    betas = alpha.betas()
    if betas.shape != (space.num_edges, space.num_ops):
        raise ValueError("alpha of shape {0} does not fit the space".format(betas.shape))
    df = pd.DataFrame(betas, columns=space.op_names)
    df.insert(0, 'edge', [space.edge_name(ee) for ee in range(space.num_edges)])
    df['chosen'] = [space.op_names[kk] for kk in np.argmax(alpha.alpha, axis=1)]
    return df


def write_heatmap(df, path):
    return write_csv(df, path)

"""Line charts of a search trajectory as plain SVG text.

"""

import logging
import os

import numpy as np
from jinja2 import Template

from ..analysis import read_trajectory
from ..utils import write_text

logger = logging.getLogger(__name__)

PANELS = [
    ('accuracy', 'Accuracy', ['train_acc', 'val_acc', 'test_acc']),
    ('remaining', 'Remaining samples', ['remaining_train', 'remaining_val']),
    ('balance', 'Balance degree', ['balance_train', 'balance_val']),
    ('eig', 'Dominant eigenvalue', ['eig_max']),
]

COLORS = ['#1f77b4', '#ff7f0e', '#2ca02c']


def load_template(tname):
    """Load a jinja2 template from the templates directory."""
    basedir = os.path.dirname(os.path.realpath(__file__))
    fname = os.path.join(basedir, 'templates', '{0}.jinja'.format(tname))
    with open(fname, 'r') as file:
        template = Template(file.read())
    return template


def _scale(values, lo, hi, size):
    if hi == lo:
        return np.full_like(values, size / 2.0)
    return size - (values - lo) / (hi - lo) * size


def emit_svg(trajectory, path, panels=None, panel_width=360, panel_height=160):
    """Render trajectory series as one SVG line chart per panel.

    Parameters
    ----------
    trajectory : pandas.DataFrame or str
        Trajectory frame, or the path of a trajectory.csv.
    path : str or pathlib.Path
        Output SVG file.
    panels : list, optional
        (name, title, columns) triples; defaults to accuracy, remaining
        counts, balance degree and dominant eigenvalue.

    Returns
    -------
    path
    """
    df = read_trajectory(trajectory) if isinstance(trajectory, (str, os.PathLike)) else trajectory
    panels = PANELS if panels is None else panels
    missing = [cc for _, _, cols in panels for cc in cols + ['epoch'] if cc not in df.columns]
    if len(missing) > 0:
        raise ValueError("trajectory is missing columns {0}".format(sorted(set(missing))))
    if len(df) == 0:
        raise ValueError("trajectory has no rows")

    epochs = df['epoch'].to_numpy(dtype=np.float64)
    e_min, e_max = int(epochs.min()), int(epochs.max())
    xs = np.zeros_like(epochs) if e_max == e_min else (epochs - e_min) / (e_max - e_min) * panel_width

    margin_x, margin_y, gap = 60, 30, 40
    rendered = []
    for ii, (name, title, cols) in enumerate(panels):
        values = df[cols].to_numpy(dtype=np.float64)
        finite = values[np.isfinite(values)]
        lo, hi = (float(finite.min()), float(finite.max())) if finite.size > 0 else (0.0, 1.0)
        series = []
        for jj, col in enumerate(cols):
            vv = values[:, jj]
            ok = np.isfinite(vv)
            ys = _scale(vv[ok], lo, hi, panel_height)
            points = ' '.join('{0:.2f},{1:.2f}'.format(xx, yy) for xx, yy in zip(xs[ok], ys))
            series.append({'name': col, 'color': COLORS[jj % len(COLORS)], 'points': points})
        rendered.append({'name': name, 'title': title, 'x': margin_x,
                         'y': margin_y + ii * (panel_height + gap + margin_y),
                         'ymin': '{0:.3g}'.format(lo), 'ymax': '{0:.3g}'.format(hi), 'series': series})

    height = margin_y + len(panels) * (panel_height + gap + margin_y)
    svg = load_template('trajectory.svg').render(
        width=panel_width + 2 * margin_x, height=height, panel_width=panel_width, panel_height=panel_height,
        epoch_min=e_min, epoch_max=e_max, panels=rendered)
    write_text(path, svg)
    logger.info('wrote trajectory plot {0}'.format(path))
    return path

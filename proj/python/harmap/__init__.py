"""Director-field energies on graph domains, constructions and checks."""

from ._harmap import *  # noqa: F401,F403
from ._harmap import __version__, ValidationError, NumericalError  # noqa: F401

import numpy as _np


def equator_field(domain, alpha=0.0):
    """Unit field (cos(alpha z), sin(alpha z), 0) sampled at the nodes."""
    z = domain.points[:, 2]
    return _np.stack([_np.cos(alpha * z), _np.sin(alpha * z), _np.zeros_like(z)], axis=1)

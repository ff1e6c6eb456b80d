"""Internal DLA growth, fluctuation statistics, and harmonic-measure probes."""

from idla._core import *  # noqa: F401,F403
from idla._core import __version__  # noqa: F401

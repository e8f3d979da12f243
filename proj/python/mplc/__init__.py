"""Multi-plane light conversion toolkit.

Designs phase-mask stacks that convert transverse-spatial light modes into a
Gaussian by wavefront matching, simulates the resulting projective mode
measurements, and runs the derived high-dimensional BB84 and state-tomography
experiments. The heavy lifting lives in the compiled ``mplc._core`` module.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"

"""Python interface of the periodic-orbit toolkit for the Nagumo-type
fiber equation.

The compiled extension carries the full API; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"

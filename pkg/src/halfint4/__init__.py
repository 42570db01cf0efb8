"""Half-integral weight modular forms of level 4 and their completed L-functions."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .qseries import PrecisionError, Series

__all__ = ["BACKEND", "PrecisionError", "Series", "__version__"]

"""Wavelet and Fourier moment features with a Gaussian naive Bayes classifier."""

from ._mammoscope import *  # noqa: F401,F403
from ._mammoscope import MammoscopeError

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

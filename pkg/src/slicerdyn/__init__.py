"""Slicer map lattice: exact and Monte Carlo transport, and quenched Lévy walks."""

import warnings

# an outdated system TBB is skipped by numba anyway; the notice is just noise
warnings.filterwarnings("ignore", message="The TBB threading layer")

__version__ = "0.1.0"

"""Compensated summation kernels.

Neumaier's variant of Kahan summation: the running error term also catches
the case where the incoming addend is larger than the partial sum. Error is
O(eps) relative to the sum of magnitudes, independent of length, which is
what the long moment series need.
"""

import numba as nb
import numpy as np

__all__ = ["compensated_sum", "compensated_cumsum", "neumaier_sum", "neumaier_cumsum"]


@nb.njit(cache=True)
def neumaier_sum(values):
    s = 0.0
    c = 0.0
    for i in range(values.shape[0]):
        x = values[i]
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c


@nb.njit(cache=True)
def neumaier_cumsum(values):
    out = np.empty(values.shape[0], dtype=np.float64)
    s = 0.0
    c = 0.0
    for i in range(values.shape[0]):
        x = values[i]
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[i] = s + c
    return out


def compensated_sum(values) -> float:
    """Neumaier sum of a 1-d sequence."""
    arr = np.ascontiguousarray(values, dtype=np.float64).ravel()
    return float(neumaier_sum(arr))


def compensated_cumsum(values) -> np.ndarray:
    """Prefix sums, each carried with its own compensation term."""
    arr = np.ascontiguousarray(values, dtype=np.float64).ravel()
    return neumaier_cumsum(arr)

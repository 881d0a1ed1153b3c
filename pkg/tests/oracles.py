"""Reference computations that share no code with the package."""

from fractions import Fraction

import mpmath as mp

mp.mp.dps = 50


def ell_mp(alpha, j):
    alpha = mp.mpf(alpha)
    return (abs(j) + mp.mpf(2) ** (1 / alpha)) ** (-alpha)


def distribution_mp(alpha, n):
    """Cell masses straight from the piecewise formulas, in 50-digit arithmetic."""
    out = {}
    for j in range(-n, n + 1):
        if (j - n) % 2:
            continue
        a = abs(j)
        if a == n:
            out[j] = ell_mp(alpha, n - 1)
        elif a == 0:
            out[j] = 2 * (mp.mpf(1) / 2 - ell_mp(alpha, 1))
        else:
            out[j] = ell_mp(alpha, a - 1) - ell_mp(alpha, a + 1)
    return out


def moment_mp(alpha, n, p):
    return mp.fsum(m * mp.mpf(j) ** p for j, m in distribution_mp(alpha, n).items())


def ell_alpha1(j):
    """Exact rational slicers for alpha = 1."""
    return Fraction(1, 2) if j == 0 else Fraction(1, abs(j) + 2)


def partition_areas(alpha, n):
    """Cell masses from pointwise dynamics on a breakpoint partition of [0, 1].

    Between consecutive breakpoints of every cell reachable in ``n`` steps,
    all points follow the same coarse path, so the midpoint decides where
    the whole piece ends up.
    """
    ells = [0.5] + [(k + 2.0 ** (1.0 / alpha)) ** (-alpha) for k in range(1, n + 1)]
    cuts = sorted({0.0, 1.0, 0.5, *ells, *(1.0 - e for e in ells)})
    out = {}
    for a, b in zip(cuts, cuts[1:]):
        if b <= a:
            continue
        x = 0.5 * (a + b)
        m = 0
        for _ in range(n):
            e = ells[abs(m)]
            m = m - 1 if (x < e or 0.5 < x < 1.0 - e) else m + 1
        out[m] = out.get(m, 0.0) + (b - a)
    return out

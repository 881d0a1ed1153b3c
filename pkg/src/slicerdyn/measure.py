"""Exact evolution of the uniform density on cell 0.

Each occupied cell holds a finite union of half-open intervals ``[a, b)``
whose endpoints are symbolic: ``0``, ``1/2``, ``1``, ``l_j`` or ``1 - l_j``.
Splitting happens only at symbolic cut points, so the occupancy after ``n``
steps is exact and its lengths can be compared with the closed forms to
rounding level.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

from .slicer import SlicerFamily
from .summation import compensated_sum

__all__ = ["Endpoint", "ZERO", "HALF", "ONE", "L", "one_minus_L", "CellOccupancy",
           "uniform_initial", "evolve_occupancy", "evolve", "evolve_to", "areas", "symbolic_lengths", "symbolic_total",
           "interval_count", "endpoint_rows"]

# kind codes; the order only breaks ties between equal values
_ZERO, _L, _HALF, _OML, _ONE = range(5)
_NAMES = {_ZERO: "0", _L: "l", _HALF: "1/2", _OML: "1-l", _ONE: "1"}


class Endpoint(NamedTuple):
    kind: int
    j: int = 0

    def value(self, family: SlicerFamily | None) -> float:
        if self.kind == _ZERO:
            return 0.0
        if self.kind == _HALF:
            return 0.5
        if self.kind == _ONE:
            return 1.0
        if family is None:
            raise ValueError("slicer endpoints need a family to evaluate")
        ell = family.position(self.j)
        return ell if self.kind == _L else 1.0 - ell

    def __str__(self):
        if self.kind in (_L, _OML):
            return f"{_NAMES[self.kind]}{self.j}"
        return _NAMES[self.kind]


ZERO = Endpoint(_ZERO)
HALF = Endpoint(_HALF)
ONE = Endpoint(_ONE)


def L(j: int) -> Endpoint:
    # l_0 is exactly 1/2 and l_j = l_{-j}: one tag per value
    j = abs(int(j))
    return HALF if j == 0 else Endpoint(_L, j)


def one_minus_L(j: int) -> Endpoint:
    j = abs(int(j))
    return HALF if j == 0 else Endpoint(_OML, j)


@dataclass
class CellOccupancy:
    """Occupied intervals per cell after ``time`` steps.

    ``cells[j]`` is a sorted list of disjoint ``(a, b)`` endpoint pairs, read
    as ``[a, b)``. Empty cells are absent.
    """

    time: int
    cells: dict[int, list[tuple[Endpoint, Endpoint]]]
    family: SlicerFamily | None = None

    def value(self, e: Endpoint) -> float:
        return e.value(self.family)

    def support(self) -> list[int]:
        return sorted(self.cells)


def uniform_initial(family: SlicerFamily | None = None) -> CellOccupancy:
    return CellOccupancy(0, {0: [(ZERO, ONE)]}, family)


def _routing(family: SlicerFamily, m: int):
    """Pieces of cell ``m`` as (lo, v_lo, hi, v_hi, direction), left to right."""
    cut, cut2 = L(m), one_minus_L(m)
    ell = family.position(m)
    pieces = ((ZERO, 0.0, cut, ell, -1), (cut, ell, HALF, 0.5, +1),
              (HALF, 0.5, cut2, 1.0 - ell, -1), (cut2, 1.0 - ell, ONE, 1.0, +1))
    return [pc for pc in pieces if pc[1] < pc[3]]


def _step_cells(family: SlicerFamily, cells: dict, routes: dict | None = None) -> dict:
    """One step on cells stored as ``m -> [(va, vb, a, b), ...]``."""
    routes = {} if routes is None else routes
    incoming: dict[int, list] = {}
    for m, ivals in cells.items():
        routing = routes.get(m)
        if routing is None:
            routing = routes[m] = _routing(family, m)
        for va, vb, a, b in ivals:
            for lo, vlo, hi, vhi, d in routing:
                if vb <= vlo:
                    break
                if va >= vhi:
                    continue
                if va >= vlo:
                    left, vl = a, va
                else:
                    left, vl = lo, vlo
                if vb <= vhi:
                    right, vr = b, vb
                else:
                    right, vr = hi, vhi
                if vl < vr:
                    incoming.setdefault(m + d, []).append((vl, vr, left, right))
    out = {}
    for m, parts in incoming.items():
        parts.sort()
        merged = [parts[0]]
        for piece in parts[1:]:
            last = merged[-1]
            if last[3] == piece[2]:
                merged[-1] = (last[0], piece[1], last[2], piece[3])
            else:
                merged.append(piece)
        out[m] = merged
    return out


def _unpack(occ: CellOccupancy) -> dict:
    f = occ.family
    return {m: [(a.value(f), b.value(f), a, b) for a, b in iv] for m, iv in occ.cells.items()}


def _pack(cells: dict, time: int, family: SlicerFamily) -> CellOccupancy:
    return CellOccupancy(time, {m: [(a, b) for _, _, a, b in iv] for m, iv in cells.items()}, family)


def _bind(family: SlicerFamily, occ: CellOccupancy) -> CellOccupancy:
    if occ.family is not None and occ.family != family:
        raise ValueError("occupancy was evolved under a different family")
    return CellOccupancy(occ.time, occ.cells, family)


def evolve_occupancy(family: SlicerFamily, occ: CellOccupancy) -> CellOccupancy:
    """One application of the map to every occupied interval.

    Each interval is cut at ``l_m``, ``1/2`` and ``1 - l_m``; pieces are sent
    to ``m - 1`` or ``m + 1`` and touching pieces in a destination cell are
    merged when they share an endpoint tag.
    """
    occ = _bind(family, occ)
    return _pack(_step_cells(family, _unpack(occ)), occ.time + 1, family)


def evolve(family: SlicerFamily, n: int, occ: CellOccupancy | None = None):
    """Yield the occupancy after each of ``n`` further steps."""
    occ = _bind(family, occ if occ is not None else uniform_initial(family))
    cells = _unpack(occ)
    routes: dict = {}
    for k in range(1, n + 1):
        cells = _step_cells(family, cells, routes)
        yield _pack(cells, occ.time + k, family)


def evolve_to(family: SlicerFamily, n: int) -> CellOccupancy:
    """Occupancy after ``n`` steps from the uniform initial condition."""
    cells = _unpack(uniform_initial(family))
    routes: dict = {}
    for _ in range(n):
        cells = _step_cells(family, cells, routes)
    return _pack(cells, n, family)


def areas(occ: CellOccupancy) -> dict[int, float]:
    """Total interval length per cell, each summed with compensation."""
    f = occ.family
    return {m: compensated_sum([b.value(f) - a.value(f) for a, b in ivals])
            for m, ivals in sorted(occ.cells.items())}


def symbolic_lengths(occ: CellOccupancy) -> dict[int, Counter]:
    """Per-cell length as a formal combination of endpoint tags."""
    out = {}
    for m, ivals in occ.cells.items():
        c = Counter()
        for a, b in ivals:
            c[b] += 1
            c[a] -= 1
        out[m] = Counter({k: v for k, v in c.items() if v})
    return out


def symbolic_total(occ: CellOccupancy) -> Counter:
    total = Counter()
    for c in symbolic_lengths(occ).values():
        total.update(c)
    return Counter({k: v for k, v in total.items() if v})


def interval_count(occ: CellOccupancy) -> int:
    return sum(len(v) for v in occ.cells.values())


def endpoint_rows(occ: CellOccupancy):
    """``(cell, left, right)`` decimal rows for export."""
    f = occ.family
    for m, ivals in sorted(occ.cells.items()):
        for a, b in ivals:
            yield m, a.value(f), b.value(f)

"""Zero-level polylines of a real field sampled over a complex-energy rectangle."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from ..errors import InvalidInput

logger = logging.getLogger(__name__)

# Corner order: (x0, y0), (x1, y0), (x1, y1), (x0, y1); the first corner is the
# highest bit of the case index. Saddle cells (5 and 10) carry both pairings,
# picked by the sign at the cell centre.
MARCHING_SQUARES_TABLE = [
    (False, []),
    (False, [((0, 3), (2, 3))]),
    (False, [((1, 2), (2, 3))]),
    (False, [((0, 3), (1, 2))]),
    (False, [((0, 1), (1, 2))]),
    (True, ([((0, 1), (1, 2)), ((0, 3), (2, 3))], [((0, 1), (0, 3)), ((1, 2), (3, 2))])),
    (False, [((0, 1), (2, 3))]),
    (False, [((0, 1), (0, 3))]),
    (False, [((0, 1), (0, 3))]),
    (False, [((0, 1), (2, 3))]),
    (True, ([((0, 1), (0, 3)), ((1, 2), (3, 2))], [((0, 1), (1, 2)), ((0, 3), (2, 3))])),
    (False, [((0, 1), (1, 2))]),
    (False, [((0, 3), (1, 2))]),
    (False, [((1, 2), (2, 3))]),
    (False, [((0, 3), (2, 3))]),
    (False, []),
]


@dataclass(frozen=True, slots=True)
class ComplexRegion:
    """Axis-aligned rectangle ``[re_min, re_max] x [im_min, im_max]`` in absolute energy units."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise InvalidInput(f"Empty region {self}")

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )


def _case_index(values) -> int:
    index = 0
    for v in values:
        index = (index << 1) | int(v > 0)
    return index


def _lerp(p0: complex, p1: complex, v0: float, v1: float) -> complex:
    t = v0 / (v0 - v1)
    t = min(max(t, 0.0), 1.0)
    return p0 * (1 - t) + t * p1


EdgeKey = tuple[tuple[int, int], tuple[int, int]]


def _refine(field: Callable[[complex], float], p0: complex, p1: complex, v0: float, v1: float) -> complex:
    if v0 == 0.0:
        return p0
    if v1 == 0.0:
        return p1
    try:
        t = brentq(lambda s: field(p0 + s * (p1 - p0)), 0.0, 1.0, xtol=1e-12)
    except ValueError:
        return _lerp(p0, p1, v0, v1)
    return p0 + t * (p1 - p0)


def zero_level_segments(
    field: Callable[[np.ndarray], np.ndarray],
    region: ComplexRegion,
    nx: int,
    ny: int,
    *,
    refine: bool = True,
) -> list[tuple[EdgeKey, EdgeKey, complex, complex]]:
    """
    Marching-squares segments of ``field(z) = 0`` over ``region``.

    Each segment is returned with the grid-edge keys of its two endpoints so
    that neighbouring cells can be chained.
    """

    if nx < 2 or ny < 2:
        raise InvalidInput("Locus grid needs at least 2 x 2 samples")
    xs = np.linspace(region.re_min, region.re_max, nx)
    ys = np.linspace(region.im_min, region.im_max, ny)
    grid = xs[None, :] + 1j * ys[:, None]
    samples = np.asarray(field(grid), dtype=float)

    def scalar(z: complex) -> float:
        return float(np.asarray(field(np.array([z])), dtype=float)[0])

    nodes = [(0, 0), (1, 0), (1, 1), (0, 1)]
    segments = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            corners_ij = [(i + di, j + dj) for di, dj in nodes]
            values = [samples[cj, ci] for ci, cj in corners_ij]
            if not np.all(np.isfinite(values)):
                continue
            saddle, edges = MARCHING_SQUARES_TABLE[_case_index(values)]
            if saddle:
                centre = 0.5 * (grid[j, i] + grid[j + 1, i + 1])
                edges = edges[int(scalar(centre) > 0)]
            for (i0, i1), (j0, j1) in edges:
                ends = []
                for a, b in ((i0, i1), (j0, j1)):
                    (ai, aj), (bi, bj) = corners_ij[a], corners_ij[b]
                    p0, p1 = grid[aj, ai], grid[bj, bi]
                    if refine:
                        point = _refine(scalar, p0, p1, values[a], values[b])
                    else:
                        point = _lerp(p0, p1, values[a], values[b])
                    key = tuple(sorted((corners_ij[a], corners_ij[b])))
                    ends.append((key, point))
                segments.append((ends[0][0], ends[1][0], ends[0][1], ends[1][1]))
    logger.debug("Marching squares on %dx%d grid produced %d segments", nx, ny, len(segments))
    return segments


def chain_segments(segments: list[tuple[EdgeKey, EdgeKey, complex, complex]]) -> list[np.ndarray]:
    """Join segments sharing a grid edge into ordered polylines."""
    by_edge: dict[EdgeKey, list[int]] = {}
    for index, (k0, k1, _, _) in enumerate(segments):
        by_edge.setdefault(k0, []).append(index)
        by_edge.setdefault(k1, []).append(index)

    points_at: dict[EdgeKey, complex] = {}
    for k0, k1, p0, p1 in segments:
        points_at[k0] = p0
        points_at[k1] = p1

    used = [False] * len(segments)

    def walk(start_key: EdgeKey, index: int) -> list[EdgeKey]:
        keys = [start_key]
        while True:
            used[index] = True
            k0, k1, _, _ = segments[index]
            nxt = k1 if k0 == keys[-1] else k0
            keys.append(nxt)
            candidates = [j for j in by_edge[nxt] if not used[j]]
            if not candidates:
                return keys
            index = candidates[0]

    # open chains start at edges touched once, closed loops anywhere
    def openness(j: int) -> int:
        return min(len(by_edge[segments[j][0]]), len(by_edge[segments[j][1]]))

    order = sorted(range(len(segments)), key=openness)
    polylines: list[np.ndarray] = []
    for index in order:
        if used[index]:
            continue
        k0, k1, _, _ = segments[index]
        start = k0 if len(by_edge[k0]) == 1 else k1 if len(by_edge[k1]) == 1 else k0
        keys = walk(start, index)
        polylines.append(np.array([points_at[k] for k in keys], dtype=complex))
    return polylines

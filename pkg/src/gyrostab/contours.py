"""Marching squares on a rectilinear grid, stitched into polylines."""
from __future__ import annotations

from collections import defaultdict

import numpy as np


def _edge_point(edge, x, y, f, level):
    kind, i, j = edge
    if kind == "i":
        va, vb, pa, pb = f[i, j], f[i + 1, j], (x[i], y[j]), (x[i + 1], y[j])
    else:
        va, vb, pa, pb = f[i, j], f[i, j + 1], (x[i], y[j]), (x[i], y[j + 1])
    t = (level - va) / (vb - va)
    return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))


def marching_squares(x, y, f, level: float = 0.0, centers=None) -> list[np.ndarray]:
    """Polylines of ``f == level`` where ``f[i, j]`` is sampled at ``(x[i], y[j])``.

    Crossings are placed by linear interpolation along cell edges. A saddle
    cell is resolved by the sign of ``centers[i, j]`` (value at the cell
    centre), falling back to the mean of the four corners. Closed loops repeat
    their first vertex at the end.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    f = np.asarray(f, dtype=float)
    if f.shape != (len(x), len(y)) or f.ndim != 2:
        raise ValueError("f must have shape (len(x), len(y))")
    above = f > level
    corner_sum = (above[:-1, :-1].astype(int) + above[1:, :-1] + above[1:, 1:] + above[:-1, 1:])
    cells = np.argwhere((corner_sum > 0) & (corner_sum < 4))

    graph: dict[tuple, list[tuple]] = defaultdict(list)
    for i, j in cells:
        # corners counter-clockwise: 00, 10, 11, 01; edge k joins corner k and k+1
        s = (above[i, j], above[i + 1, j], above[i + 1, j + 1], above[i, j + 1])
        edges = (("i", i, j), ("j", i + 1, j), ("i", i, j + 1), ("j", i, j))
        crossed = [k for k in range(4) if s[k] != s[(k + 1) % 4]]
        if len(crossed) == 2:
            pairs = [(edges[crossed[0]], edges[crossed[1]])]
        else:
            if centers is not None:
                c = centers[i, j] > level
            else:
                c = (f[i, j] + f[i + 1, j] + f[i + 1, j + 1] + f[i, j + 1]) / 4 > level
            if c == s[0]:
                # 00 and 11 connect through the centre; cut off corners 10 and 01
                pairs = [(edges[0], edges[1]), (edges[2], edges[3])]
            else:
                pairs = [(edges[3], edges[0]), (edges[1], edges[2])]
        for e1, e2 in pairs:
            graph[e1].append(e2)
            graph[e2].append(e1)

    points = {e: _edge_point(e, x, y, f, level) for e in graph}
    seen: set[tuple] = set()
    lines = []

    def walk(start):
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in graph[cur] if n != prev and n not in seen]
            if not nxt:
                if prev is not None and start in graph[cur] and len(chain) > 2:
                    chain.append(start)
                return chain
            prev, cur = cur, nxt[0]
            seen.add(cur)
            chain.append(cur)

    for e in sorted(graph):
        if e not in seen and len(graph[e]) == 1:
            lines.append(walk(e))
    for e in sorted(graph):
        if e not in seen:
            lines.append(walk(e))
    return [np.array([points[e] for e in chain]) for chain in lines]

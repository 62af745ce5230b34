"""Exact hierarchical grid bucketing of segments.

Cells are addressed with exact floor divisions, so membership is never
subject to rounding. The grid is only a candidate filter; callers decide
intersections with exact predicates.
"""

from __future__ import annotations

import math
from collections import defaultdict

import gmpy2

_floor = gmpy2.floor


def pow2_at_most(q) -> "gmpy2.mpq":
    """Largest power of two not exceeding a positive rational."""
    e = math.floor(math.log2(float(q)))
    c = gmpy2.mpq(2) ** e if e >= 0 else gmpy2.mpq(1, 2 ** (-e))
    while c > q:
        c /= 2
    while c * 2 <= q:
        c *= 2
    return c


def cells_of(a, b, x0, y0, cell):
    """Grid cells met by the closed segment ab (column-clipped, exact)."""
    if a[0] > b[0]:
        a, b = b, a
    cx0 = int(_floor((a[0] - x0) / cell))
    cx1 = int(_floor((b[0] - x0) / cell))
    if cx0 == cx1:
        lo, hi = (a[1], b[1]) if a[1] <= b[1] else (b[1], a[1])
        for cy in range(int(_floor((lo - y0) / cell)), int(_floor((hi - y0) / cell)) + 1):
            yield cx0, cy
        return
    slope = (b[1] - a[1]) / (b[0] - a[0])
    for cx in range(cx0, cx1 + 1):
        xa = a[0] if cx == cx0 else x0 + cx * cell
        xb = b[0] if cx == cx1 else x0 + (cx + 1) * cell
        ya = a[1] + slope * (xa - a[0])
        yb = a[1] + slope * (xb - a[0])
        if ya > yb:
            ya, yb = yb, ya
        for cy in range(int(_floor((ya - y0) / cell)), int(_floor((yb - y0) / cell)) + 1):
            yield cx, cy


def clip_to_box(a, b, lo_x, lo_y, hi_x, hi_y):
    """Part of segment ab inside the closed box, or None (exact)."""
    t0, t1 = gmpy2.mpq(0), gmpy2.mpq(1)
    dx, dy = b[0] - a[0], b[1] - a[1]
    for p, q in ((-dx, a[0] - lo_x), (dx, hi_x - a[0]), (-dy, a[1] - lo_y), (dy, hi_y - a[1])):
        if p == 0:
            if q < 0:
                return None
            continue
        t = q / p
        if p < 0:
            if t > t1:
                return None
            t0 = max(t0, t)
        else:
            if t < t0:
                return None
            t1 = min(t1, t)
    return (a[0] + t0 * dx, a[1] + t0 * dy), (a[0] + t1 * dx, a[1] + t1 * dy)


class HierarchicalGrid:
    """Multi-level bucket index for segments whose lengths span many scales.

    Level L has cell size base * 2**L and all levels share one origin, so a
    cell coarsens by an exact shift. A segment lives on the finest level
    whose cell is at least 1/SPREAD of its L1 length, so it meets a bounded
    number of cells.
    Every ancestor of an occupied cell is marked, and queries descend from
    the top only through marked cells the query segment actually meets.
    """

    SPREAD = 16  # a segment spans about this many cells of its level

    def __init__(self, x0, y0, base):
        self.x0, self.y0, self.base = x0, y0, base
        self.own = defaultdict(lambda: defaultdict(list))
        self.occupied = defaultdict(set)
        self.top = 0
        self.segs = []
        self.tags = []

    def _level(self, a, b) -> int:
        n = abs(b[0] - a[0]) + abs(b[1] - a[1])
        lv, c = 0, self.base * self.SPREAD
        while c < n:
            c *= 2
            lv += 1
        return lv

    def _size(self, lv):
        return self.base * 2 ** lv

    def insert(self, a, b, tag) -> None:
        idx = len(self.segs)
        self.segs.append((a, b))
        self.tags.append(tag)
        lv = self._level(a, b)
        cells = set(cells_of(a, b, self.x0, self.y0, self._size(lv)))
        for c in cells:
            self.own[lv][c].append(idx)
        if lv > self.top:
            for L in range(self.top + 1, lv + 1):
                sh = L - self.top
                self.occupied[L] = {(cx >> sh, cy >> sh) for cx, cy in self.occupied[self.top]}
            self.top = lv
        cur = cells
        for L in range(lv, self.top + 1):
            fresh = cur - self.occupied[L]
            if not fresh and L > lv:
                break
            self.occupied[L] |= fresh
            cur = {(cx >> 1, cy >> 1) for cx, cy in cur}

    def candidates(self, a, b) -> set:
        out = set()
        if not self.segs:
            return out
        size = self._size(self.top)
        frontier = set(cells_of(a, b, self.x0, self.y0, size)) & self.occupied[self.top]
        for L in range(self.top, -1, -1):
            own = self.own.get(L)
            nxt = set()
            for c in frontier:
                if own:
                    got = own.get(c)
                    if got:
                        out.update(got)
                if L == 0:
                    continue
                lo_x, lo_y = self.x0 + c[0] * size, self.y0 + c[1] * size
                part = clip_to_box(a, b, lo_x, lo_y, lo_x + size, lo_y + size)
                if part is None:
                    continue
                occ = self.occupied[L - 1]
                for ch in cells_of(part[0], part[1], self.x0, self.y0, size / 2):
                    if ch[0] >> 1 == c[0] and ch[1] >> 1 == c[1] and ch in occ:
                        nxt.add(ch)
            frontier = nxt
            size /= 2
        return out

    def candidate_pairs(self) -> set:
        pairs = set()
        for i, (a, b) in enumerate(self.segs):
            for j in self.candidates(a, b):
                if j != i:
                    pairs.add((i, j) if i < j else (j, i))
        return pairs

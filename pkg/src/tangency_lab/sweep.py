"""Exact plane sweep reporting every pair of segments with a common point.

Runs in time proportional to (segments + common points) times a log factor,
so it stays fast when many nearly parallel strands make bounding-box
filters useless. Vertical segments are removed beforehand by an exact shear
x -> x + e*y, which preserves every incidence.
"""

from __future__ import annotations

import heapq
from bisect import bisect_left, bisect_right

import gmpy2

from .exact_geom import segment_intersect

_mpq = gmpy2.mpq


def _shear_factor(segs):
    bad = set()
    vertical = False
    for a, b in segs:
        dx, dy = b[0] - a[0], b[1] - a[1]
        if dx == 0:
            vertical = True
        if dy != 0:
            bad.add(-dx / dy)
    if not vertical:
        return _mpq(0)
    n = 1031
    while _mpq(1, n) in bad:
        n += 2
    return _mpq(1, n)


def intersecting_pairs(segs) -> set:
    """Index pairs (i < j) of closed segments that share at least one point."""
    e = _shear_factor(segs)
    left, right, slope = [], [], []
    starts = {}
    for idx, (a, b) in enumerate(segs):
        a = (a[0] + e * a[1], a[1])
        b = (b[0] + e * b[1], b[1])
        if b < a:
            a, b = b, a
        left.append(a)
        right.append(b)
        slope.append((b[1] - a[1]) / (b[0] - a[0]))
        starts.setdefault(a, []).append(idx)

    queue = list(starts)
    heapq.heapify(queue)
    queued = set(queue)
    for b in right:
        if b not in queued:
            queued.add(b)
            heapq.heappush(queue, b)

    status = []
    pairs = set()

    def push(p):
        if p not in queued:
            queued.add(p)
            heapq.heappush(queue, p)

    def check(i, j, ev):
        a, b = (left[i], right[i]), (left[j], right[j])
        res = segment_intersect(a, b)
        if res.kind == "point" and res.point > ev:
            push(tuple(res.point))

    while queue:
        ev = heapq.heappop(queue)
        ex, ey = ev

        def y_at(i):
            return left[i][1] + slope[i] * (ex - left[i][0])

        lo = bisect_left(status, ey, key=y_at)
        hi = bisect_right(status, ey, key=y_at)
        through = status[lo:hi]
        new = starts.get(ev, [])
        group = through + new
        if len(group) > 1:
            for x in range(len(group)):
                gx = group[x]
                for y in range(x + 1, len(group)):
                    gy = group[y]
                    pairs.add((gx, gy) if gx < gy else (gy, gx))
        cont = [i for i in through if right[i] != ev] + new
        cont.sort(key=lambda i: (slope[i], i))
        status[lo:hi] = cont
        if cont:
            if lo > 0:
                check(status[lo - 1], cont[0], ev)
            top = lo + len(cont)
            if top < len(status):
                check(cont[-1], status[top], ev)
        elif 0 < lo < len(status):
            check(status[lo - 1], status[lo], ev)
    return pairs

"""Forbidden ordered patterns in tangency graphs.

Edge-ordered paths, drawn bipartite graphs obtained by redrawing every
curve as a star, positive 6-cycles in ordered 0-1 matrices, and small
exhaustive extremal searches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .curves import BLUE, RED, CurveFamily
from .exact_geom import on_segment
from .verifier import CROSSING, TangencyReport, all_events, is_x_monotone


# ---------------------------------------------------------------- graphs and matrices

@dataclass
class EdgeOrderedGraph:
    vertex_count: int
    edges: list
    order: list  # order[i] = rank of edges[i], ranks are 1..len(edges)

    def __post_init__(self):
        self.edges = [tuple(e) for e in self.edges]
        seen = set()
        for u, v in self.edges:
            if u == v or not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"bad edge {(u, v)}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"repeated edge {(u, v)}")
            seen.add(key)
        if sorted(self.order) != list(range(1, len(self.edges) + 1)):
            raise ValueError("order must be a bijection onto 1..|edges|")

    def rank_map(self) -> dict:
        out = {}
        for (u, v), r in zip(self.edges, self.order):
            out[(u, v)] = out[(v, u)] = r
        return out

    def neighbours(self) -> list:
        adj = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return [sorted(a) for a in adj]

    def to_json(self) -> dict:
        return {"n": self.vertex_count, "edges": [list(e) for e in self.edges], "order": list(self.order)}

    @staticmethod
    def from_json(d: dict) -> "EdgeOrderedGraph":
        return EdgeOrderedGraph(int(d["n"]), [(int(u), int(v)) for u, v in d["edges"]], [int(r) for r in d["order"]])


@dataclass
class ZeroOneMatrix:
    rows: int
    cols: int
    ones: frozenset

    def __post_init__(self):
        self.ones = frozenset((int(r), int(c)) for r, c in self.ones)
        for r, c in self.ones:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"one-entry {(r, c)} out of range")

    def __getitem__(self, rc) -> int:
        return int(rc in self.ones)

    def row_masks(self) -> list:
        masks = [0] * self.rows
        for r, c in self.ones:
            masks[r] |= 1 << c
        return masks

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "ones": [list(p) for p in sorted(self.ones)]}

    @staticmethod
    def from_json(d: dict) -> "ZeroOneMatrix":
        return ZeroOneMatrix(int(d["rows"]), int(d["cols"]), frozenset(tuple(p) for p in d["ones"]))

    @staticmethod
    def from_rows(rows) -> "ZeroOneMatrix":
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        return ZeroOneMatrix(len(rows), cols, frozenset((i, j) for i, r in enumerate(rows) for j, x in enumerate(r) if x))


# ---------------------------------------------------------------- ordered paths

def contains_forbidden_p5(g: EdgeOrderedGraph):
    """A path a-b-c-d-e with ab < cd < bc < de, or None."""
    rank = g.rank_map()
    adj = g.neighbours()
    for b in range(g.vertex_count):
        for c in adj[b]:
            bc = rank[(b, c)]
            for d in adj[c]:
                if d == b or not rank[(c, d)] < bc:
                    continue
                cd = rank[(c, d)]
                for a in adj[b]:
                    if a in (c, d) or not rank[(a, b)] < cd:
                        continue
                    for e in adj[d]:
                        if e not in (a, b, c) and rank[(d, e)] > bc:
                            return (a, b, c, d, e)
    return None


def naive_forbidden_p5(g: EdgeOrderedGraph):
    """Reference scan over all 5-tuples of distinct vertices."""
    rank = g.rank_map()
    for a, b, c, d, e in itertools.permutations(range(g.vertex_count), 5):
        try:
            ab, bc, cd, de = rank[(a, b)], rank[(b, c)], rank[(c, d)], rank[(d, e)]
        except KeyError:
            continue
        if ab < cd < bc < de:
            return (a, b, c, d, e)
    return None


# ---------------------------------------------------------------- positive 6-cycles

# The six cells of a 3x3 pattern with two per row and column, avoiding one
# permutation; the cycle uses the centre iff the permutation moves index 1.
_C6_PATTERNS = []
for _perm in itertools.permutations(range(3)):
    if _perm[1] != 1:
        _C6_PATTERNS.append(tuple((i, j) for i in range(3) for j in range(3) if _perm[i] != j))


def _lowest_bit_above(mask, c):
    m = mask >> (c + 1)
    if not m:
        return None
    return c + 1 + ((m & -m).bit_length() - 1)


def _lowest_bit(mask, below):
    m = mask & ((1 << below) - 1)
    if not m:
        return None
    return (m & -m).bit_length() - 1


def contains_positive_c6(m: ZeroOneMatrix):
    """Witness (rows, cols, cells) of a 6-cycle through the middle cell of some
    3x3 submatrix, or None."""
    masks = m.row_masks()
    for r2, c2 in sorted(m.ones):
        for r1 in range(r2):
            for r3 in range(r2 + 1, m.rows):
                rows = (r1, r2, r3)
                for pat in _C6_PATTERNS:
                    need = {0: -1, 2: -1}  # outer column slot -> mask of admissible columns
                    ok = True
                    for i, j in pat:
                        if j == 1:
                            if not masks[rows[i]] >> c2 & 1:
                                ok = False
                                break
                        else:
                            need[j] &= masks[rows[i]]
                    if not ok:
                        continue
                    c1 = _lowest_bit(need[0], c2) if need[0] != -1 else None
                    c3 = _lowest_bit_above(need[2], c2) if need[2] != -1 else None
                    if c1 is None or c3 is None:
                        continue
                    cols = (c1, c2, c3)
                    cells = tuple(sorted((rows[i], cols[j]) for i, j in pat))
                    return {"rows": rows, "cols": cols, "cells": cells}
    return None


def naive_positive_c6(m: ZeroOneMatrix):
    """Reference: enumerate 6-cycles of the bipartite graph and test the ordering."""
    radj = {r: sorted(c for rr, c in m.ones if rr == r) for r in range(m.rows)}
    cadj = {c: sorted(r for r, cc in m.ones if cc == c) for c in range(m.cols)}
    for u1 in range(m.rows):
        for v1 in radj[u1]:
            for u2 in cadj[v1]:
                if u2 == u1:
                    continue
                for v2 in radj[u2]:
                    if v2 == v1:
                        continue
                    for u3 in cadj[v2]:
                        if u3 in (u1, u2):
                            continue
                        for v3 in radj[u3]:
                            if v3 in (v1, v2) or (u1, v3) not in m.ones:
                                continue
                            cyc = [(u1, v1), (u2, v1), (u2, v2), (u3, v2), (u3, v3), (u1, v3)]
                            rs = sorted((u1, u2, u3))
                            cs = sorted((v1, v2, v3))
                            if (rs[1], cs[1]) in cyc:
                                return {"rows": tuple(rs), "cols": tuple(cs), "cells": tuple(sorted(cyc))}
    return None


def has_c4(m: ZeroOneMatrix):
    """Two rows sharing two columns, as (r1, r2, c1, c2), or None."""
    masks = m.row_masks()
    for r1 in range(m.rows):
        for r2 in range(r1 + 1, m.rows):
            common = masks[r1] & masks[r2]
            if common & (common - 1):
                c1 = (common & -common).bit_length() - 1
                rest = common & (common - 1)
                return (r1, r2, c1, (rest & -rest).bit_length() - 1)
    return None


# ---------------------------------------------------------------- drawn graphs

@dataclass
class DrawnBipartiteGraph:
    vertices: dict  # curve id -> (color, base point)
    edges: list  # (red id, blue id, tangency point)
    edge_parts: dict  # (edge index, color) -> tuple of vertices from base point to tangency
    crossing_relation: set = field(default_factory=set)  # frozensets of two part keys
    grounded: bool = False

    def related(self, p, q) -> bool:
        return frozenset((p, q)) in self.crossing_relation


def _position(vs, p):
    """(segment index, squared-distance key) locating p on the polyline; None if absent."""
    for i in range(len(vs) - 1):
        if on_segment(p, (vs[i], vs[i + 1])):
            a = vs[i]
            return (i, (p[0] - a[0]) ** 2 + (p[1] - a[1]) ** 2)
    return None


def _vertex_position(vs, i):
    return (i, 0) if i < len(vs) - 1 else (len(vs) - 2, (vs[-1][0] - vs[-2][0]) ** 2 + (vs[-1][1] - vs[-2][1]) ** 2)


def _base_index(curve, family, base_choice) -> int:
    vs = curve.vertices
    if base_choice == "curve_start":
        return 0
    if base_choice != "grounded":
        raise ValueError(f"unknown base choice {base_choice!r}")
    if not family.grounded or family.strip is None:
        raise ValueError("grounded base points need a grounded family")
    target = family.strip[0] if curve.color == RED else family.strip[1]
    for i, v in enumerate(vs):
        if v[0] == target:
            return i
    raise ValueError(f"base point of curve {curve.id} is not on the strip boundary")


def _part(vs, base_idx, pos, point):
    """Vertices of the curve between vertex base_idx and the located point."""
    seg = pos[0]
    base_pos = _vertex_position(vs, base_idx)
    if base_pos <= pos:
        out = list(vs[base_idx:seg + 1])
    else:
        out = list(reversed(vs[seg + 1:base_idx + 1]))
    if not out or out[-1] != point:
        out.append(point)
    return tuple(out)


def star_redraw(family: CurveFamily, report: TangencyReport, base_choice: str = "grounded") -> DrawnBipartiteGraph:
    if not report.ok:
        raise ValueError("report has violations")
    by_id = family.by_id()
    base = {c.id: _base_index(c, family, base_choice) for c in family.curves}
    vertices = {c.id: (c.color, c.vertices[base[c.id]]) for c in family.curves}
    edges = list(report.tangent_pairs)
    parts, spans = {}, {}
    for ei, (rid, bid, x) in enumerate(edges):
        for cid, color in ((rid, RED), (bid, BLUE)):
            vs = by_id[cid].vertices
            pos = _position(vs, x)
            if pos is None:
                raise ValueError(f"tangency {x} is not on curve {cid}")
            parts[(ei, color)] = _part(vs, base[cid], pos, x)
            lo, hi = sorted((_vertex_position(vs, base[cid]), pos))
            spans[(ei, color)] = (cid, lo, hi)
    parts_of = {}
    for key, (cid, lo, hi) in spans.items():
        parts_of.setdefault(cid, []).append(key)
    relation = set()
    for (ia, ib), events in all_events(family).items():
        if by_id[ia].color == by_id[ib].color:
            continue
        for ev in events:
            if ev.kind != CROSSING:
                continue
            inside = {}
            for cid in (ia, ib):
                pos = _position(by_id[cid].vertices, ev.point)
                inside[cid] = [k for k in parts_of.get(cid, []) if spans[k][1] < pos < spans[k][2]]
            for p in inside[ia]:
                for q in inside[ib]:
                    relation.add(frozenset((p, q)))
    return DrawnBipartiteGraph(vertices, edges, parts, relation, base_choice == "grounded")


@dataclass
class ClaimReport:
    two_edge_paths: list = field(default_factory=list)
    four_cycles: list = field(default_factory=list)
    windows: list = field(default_factory=list)  # (window type, parts, crossing pair)

    @property
    def ok(self) -> bool:
        return not (self.two_edge_paths or self.four_cycles or self.windows)

    def to_json(self) -> dict:
        def pair(p):
            return [list(x) for x in sorted(p)]
        return {
            "ok": self.ok,
            "two_edge_paths": [{"edges": list(e), "crossing": pair(c)} for e, c in self.two_edge_paths],
            "four_cycles": [{"edges": list(e), "crossing": pair(c)} for e, c in self.four_cycles],
            "windows": [{"type": t, "parts": [list(p) for p in ps], "crossing": pair(c)} for t, ps, c in self.windows],
        }


def _first_crossing(g, keys):
    keys = list(dict.fromkeys(keys))
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if g.related(keys[i], keys[j]):
                return frozenset((keys[i], keys[j]))
    return None


def check_claim_p2(g: DrawnBipartiteGraph) -> ClaimReport:
    rep = ClaimReport()
    inc = {}
    for ei, (r, b, _) in enumerate(g.edges):
        inc.setdefault(r, []).append(ei)
        inc.setdefault(b, []).append(ei)
    both = lambda ei: [(ei, RED), (ei, BLUE)]

    for v, es in sorted(inc.items()):
        for e1, e2 in itertools.combinations(es, 2):
            hit = _first_crossing(g, both(e1) + both(e2))
            if hit:
                rep.two_edge_paths.append(((e1, e2), hit))

    edge_of = {(r, b): ei for ei, (r, b, _) in enumerate(g.edges)}
    reds = sorted(v for v, (c, _) in g.vertices.items() if c == RED and v in inc)
    for r1, r2 in itertools.combinations(reds, 2):
        common = sorted({g.edges[e][1] for e in inc[r1]} & {g.edges[e][1] for e in inc[r2]})
        for b1, b2 in itertools.combinations(common, 2):
            cyc = (edge_of[(r1, b1)], edge_of[(r2, b1)], edge_of[(r2, b2)], edge_of[(r1, b2)])
            hit = _first_crossing(g, [k for e in cyc for k in both(e)])
            if hit:
                rep.four_cycles.append((cyc, hit))

    # walks of three edges traverse six parts; check both 5-part windows
    def other(ei, v):
        r, b, _ = g.edges[ei]
        return b if v == r else r

    def part(ei, v):
        return (ei, g.vertices[v][0])

    for v0 in sorted(inc):
        for e1 in inc[v0]:
            v1 = other(e1, v0)
            for e2 in inc[v1]:
                v2 = other(e2, v1)
                for e3 in inc[v2]:
                    v3 = other(e3, v2)
                    seq = [part(e1, v0), part(e1, v1), part(e2, v1), part(e2, v2), part(e3, v2), part(e3, v3)]
                    verts = [v0, v1, v2, v3]
                    for lo, span in ((0, verts[:3]), (1, verts[1:])):
                        window = seq[lo:lo + 5]
                        hit = _first_crossing(g, window)
                        if hit:
                            kind = "path" if len(set(span)) == len(span) and len(set(window)) == 5 else "walk"
                            rep.windows.append((kind, tuple(window), hit))
    return rep


def ordered_adjacency_matrix(g: DrawnBipartiteGraph) -> ZeroOneMatrix:
    if not g.grounded:
        raise ValueError("ordered adjacency matrix needs a grounded drawing")
    reds = sorted((p[1], v) for v, (c, p) in g.vertices.items() if c == RED)
    blues = sorted((p[1], v) for v, (c, p) in g.vertices.items() if c == BLUE)
    for side in (reds, blues):
        ys = [y for y, _ in side]
        if len(set(ys)) != len(ys):
            raise ValueError("base points on one boundary share a y-coordinate")
    row = {v: i for i, (_, v) in enumerate(reds)}
    col = {v: j for j, (_, v) in enumerate(blues)}
    return ZeroOneMatrix(len(reds), len(blues), frozenset((row[r], col[b]) for r, b, _ in g.edges))


# ---------------------------------------------------------------- x-monotone families

def _red_above(red_vs, blue_vs, p) -> bool:
    """Whether the red curve lies above the blue one next to a touching point."""
    def right_branch(vs):
        for i in range(len(vs) - 1):
            if on_segment(p, (vs[i], vs[i + 1])):
                q = vs[i + 1] if vs[i + 1] != p else vs[i + 2]
                return (q[0] - p[0], q[1] - p[1])
        raise ValueError(f"point {p} is not on the curve")
    r, b = right_branch(red_vs), right_branch(blue_vs)
    # both point rightwards; red is above iff it turns counterclockwise from blue
    return b[0] * r[1] - b[1] * r[0] > 0


def xmon_tangency_graphs(family: CurveFamily, report: TangencyReport):
    """Split tangencies by whether red is locally above or below blue; each
    part becomes an edge-ordered graph ordered by tangency x-coordinate."""
    for c in family.curves:
        if not is_x_monotone(c.vertices):
            raise ValueError(f"curve {c.id} is not x-monotone")
    xs = [p[0] for _, _, p in report.tangent_pairs]
    if len(set(xs)) != len(xs):
        raise ValueError("two tangencies share an x-coordinate; perturb the input")
    by_id = family.by_id()
    index = {cid: i for i, cid in enumerate(sorted(by_id))}
    above, below = [], []
    for rid, bid, p in report.tangent_pairs:
        side = above if _red_above(by_id[rid].vertices, by_id[bid].vertices, p) else below
        side.append((p[0], index[rid], index[bid]))
    out = []
    for part in (above, below):
        part.sort()
        out.append(EdgeOrderedGraph(len(index), [(u, v) for _, u, v in part], list(range(1, len(part) + 1))))
    return out[0], out[1]


# ---------------------------------------------------------------- extremal searches

def _canonical_graphs(n):
    """One edge set per isomorphism class of simple graphs on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen, out = set(), []
    for mask in range(1 << len(pairs)):
        es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        canon = min(tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in es)) for p in perms)
        if canon not in seen:
            seen.add(canon)
            out.append(list(canon))
    return out


def _pattern_free_order(n, edges):
    """A rank list making the graph avoid the ordered path, or None.

    Ranks are handed out in increasing order; a new edge can only complete
    the pattern as its last edge de, so each step checks just that case.
    """
    m = len(edges)
    adj = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        adj[u].append((v, i))
        adj[v].append((u, i))
    rank = [0] * m

    def completes(i):
        u, v = edges[i]
        for d, e in ((u, v), (v, u)):
            for c, i_cd in adj[d]:
                if c == e or not rank[i_cd]:
                    continue
                cd = rank[i_cd]
                for b, i_bc in adj[c]:
                    if b in (d, e) or not rank[i_bc] or not cd < rank[i_bc]:
                        continue
                    for a, i_ab in adj[b]:
                        if a in (c, d, e) or not rank[i_ab]:
                            continue
                        if rank[i_ab] < cd:
                            return True
        return False

    def place(t):
        if t > m:
            return True
        for i in range(m):
            if rank[i]:
                continue
            rank[i] = t
            if not completes(i) and place(t + 1):
                return True
            rank[i] = 0
        return False

    return list(rank) if place(1) else None


def extremal_bruteforce_p5(n: int):
    """Largest edge count of a graph on n vertices admitting a pattern-free
    edge order, with one witness."""
    if not 1 <= n <= 5:
        raise ValueError("n must be between 1 and 5")
    graphs = sorted(_canonical_graphs(n), key=lambda es: (-len(es), es))
    for es in graphs:
        order = _pattern_free_order(n, es)
        if order is not None:
            g = EdgeOrderedGraph(n, es, order)
            assert contains_forbidden_p5(g) is None
            return len(es), g
    raise AssertionError("the empty graph is always pattern-free")


def extremal_bruteforce_positive_c6(n: int):
    """Largest number of ones in an n x n matrix with no positive 6-cycle."""
    if not 1 <= n <= 6:
        raise ValueError("n must be between 1 and 6")
    cells = [(r, c) for r in range(n) for c in range(n)]
    best = [-1, None]
    ones = []

    def search(i):
        if len(ones) + (len(cells) - i) <= best[0]:
            return
        if i == len(cells):
            best[0], best[1] = len(ones), frozenset(ones)
            return
        ones.append(cells[i])
        if contains_positive_c6(ZeroOneMatrix(n, n, frozenset(ones))) is None:
            search(i + 1)
        ones.pop()
        search(i + 1)

    search(0)
    return best[0], ZeroOneMatrix(n, n, best[1])

"""Constructing alternating diagrams from plane Tait graphs.

Every alternating diagram is the medial graph of its red Tait graph with
crossings chosen to alternate, so generating plane graphs is a convenient
way to generate alternating diagrams.  Half-edge ``2e`` sits at the first
endpoint of edge ``e`` and ``2e + 1`` at the second.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .diagram import KnotDiagram
from .dt import parse_dt, to_dt
from .errors import NotAKnot, PreconditionError


@dataclass
class PlaneGraph:
    """Plane multigraph given by a counterclockwise rotation of half-edges."""

    edges: list[tuple[int, int]] = field(default_factory=list)
    rot: dict[int, list[int]] = field(default_factory=dict)

    def vertex_of(self, h: int) -> int:
        return self.edges[h // 2][h % 2]

    def next_ccw(self, h: int) -> int:
        r = self.rot[self.vertex_of(h)]
        return r[(r.index(h) + 1) % len(r)]

    def prev_ccw(self, h: int) -> int:
        r = self.rot[self.vertex_of(h)]
        return r[(r.index(h) - 1) % len(r)]

    def faces(self) -> list[list[int]]:
        """Faces as cycles of half-edges, each leaving the listed vertex."""
        seen: set[int] = set()
        out = []
        for h0 in range(2 * len(self.edges)):
            if h0 in seen:
                continue
            face = []
            h = h0
            while h not in seen:
                seen.add(h)
                face.append(h)
                h = self.prev_ccw(h ^ 1)
            out.append(face)
        return out

    def subdivide(self, e: int) -> None:
        u, v = self.edges[e]
        w = max(self.rot) + 1
        f = len(self.edges)
        self.edges[e] = (u, w)
        self.edges.append((w, v))
        rv = self.rot[v]
        rv[rv.index(2 * e + 1)] = 2 * f + 1
        self.rot[w] = [2 * e + 1, 2 * f]

    def add_chord(self, h_i: int, h_j: int) -> None:
        """Join the tails of two half-edges of one face, inside that face."""
        u, v = self.vertex_of(h_i), self.vertex_of(h_j)
        f = len(self.edges)
        self.edges.append((u, v))
        ru, rv = self.rot[u], self.rot[v]
        ru.insert(ru.index(h_i) + 1, 2 * f)
        rv.insert(rv.index(h_j) + 1, 2 * f + 1)


def from_tait_graph(g: PlaneGraph, allow_links: bool = False) -> KnotDiagram:
    """Alternating diagram whose red Tait graph is ``g``.

    The crossing of edge ``e = (u, v)`` has counterclockwise slots: the two
    angles at ``u`` beside ``e`` followed by the two angles at ``v``.
    """
    slots = []
    for e, (u, v) in enumerate(g.edges):
        hu, hv = 2 * e, 2 * e + 1
        slots.append([
            ("angle", hu),
            ("angle", g.prev_ccw(hu)),
            ("angle", hv),
            ("angle", g.prev_ccw(hv)),
        ])
    return KnotDiagram._from_map(slots, [0] * len(slots), allow_links=allow_links)


def cycle_with_multi_edge(a: int, b: int) -> PlaneGraph:
    """Cycle of ``a + 1`` edges with one edge replaced by ``b`` parallel copies."""
    if a < 1 or b < 1:
        raise PreconditionError("both twist lengths must be positive")
    g = PlaneGraph()
    # vertices 0..a along the path, then b parallel edges from a back to 0
    for i in range(a):
        g.edges.append((i, i + 1))
    for _ in range(b):
        g.edges.append((a, 0))
    for v in range(a + 1):
        g.rot[v] = []
    for i in range(a):
        g.rot[i].append(2 * i)
        g.rot[i + 1].append(2 * i + 1)
    par = range(a, a + b)
    if a == 1:
        g.rot[1] = [1] + [2 * e for e in par]
        g.rot[0] = [0] + [2 * e + 1 for e in reversed(par)]
    else:
        g.rot[a] = [2 * a - 1] + [2 * e for e in par]
        g.rot[0] = [0] + [2 * e + 1 for e in reversed(par)]
    return g


def double_twist(a: int, b: int, allow_links: bool = False) -> KnotDiagram:
    """Two twist regions of lengths ``a`` and ``b``; a knot iff ``a * b`` is even."""
    return from_tait_graph(cycle_with_multi_edge(a, b), allow_links=allow_links)


def random_plane_graph(n_edges: int, rng: random.Random) -> PlaneGraph:
    """Random loopless 2-connected plane multigraph with ``n_edges`` edges."""
    if n_edges < 2:
        raise PreconditionError("need at least two edges")
    g = PlaneGraph(edges=[(0, 1), (0, 1)], rot={0: [0, 2], 1: [3, 1]})
    while len(g.edges) < n_edges:
        if rng.random() < 0.5:
            g.subdivide(rng.randrange(len(g.edges)))
            continue
        face = rng.choice(g.faces())
        if len(face) < 2:
            continue
        i, j = rng.sample(range(len(face)), 2)
        if g.vertex_of(face[i]) == g.vertex_of(face[j]):
            continue
        g.add_chord(face[i], face[j])
    return g


def random_alternating_dt(n_crossings: int, rng: random.Random,
                          max_tries: int = 1000) -> tuple[int, ...]:
    """DT code of a random prime reduced alternating knot diagram."""
    for _ in range(max_tries):
        try:
            d = from_tait_graph(random_plane_graph(n_crossings, rng))
        except NotAKnot:
            continue
        return to_dt(d)
    raise RuntimeError(f"no knot found with {n_crossings} crossings")


def random_alternating(n_crossings: int, rng: random.Random) -> KnotDiagram:
    return parse_dt(random_alternating_dt(n_crossings, rng))

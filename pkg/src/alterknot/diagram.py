"""Planar knot diagrams stored as normalized PD codes.

A crossing is a 4-tuple of edge labels listed counterclockwise, starting at
the incoming under-strand.  After normalization the labels of every
component are consecutive in the direction of travel, so edge ``L`` runs
from the crossing where it leaves to the crossing where ``successor(L)``
leaves.

Corners are indexed per crossing: corner ``k`` lies between slots ``k - 1``
and ``k``.  Faces are traced as orbits of darts ``(crossing, slot)`` under
"follow the edge, then turn to the next slot counterclockwise"; the dart
``(c, k)`` belongs to the face containing corner ``k`` of ``c``.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import networkx as nx

from .errors import (
    LabelMismatch,
    MalformedCode,
    NonPlanar,
    NotAKnot,
    NotBipartiteDual,
)

PD = tuple[tuple[int, int, int, int], ...]
Dart = tuple[int, int]

RED = "red"
BLUE = "blue"

_X_TUPLE = re.compile(r"X\s*\[([^\[\]]*)\]")


@dataclass(frozen=True)
class Crossing:
    id: int
    slots: tuple[int, int, int, int]
    sign: int

    @property
    def under(self) -> tuple[int, int]:
        return self.slots[0], self.slots[2]

    @property
    def over(self) -> tuple[int, int]:
        return self.slots[1], self.slots[3]


@dataclass(frozen=True)
class Face:
    id: int
    corners: tuple[Dart, ...]
    edges: tuple[int, ...]
    color: str

    @property
    def size(self) -> int:
        return len(self.corners)

    @property
    def crossings(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.corners)


@dataclass(frozen=True)
class DiagramReport:
    connected: bool
    four_valent: bool
    alternating: bool
    prime: bool
    reduced: bool
    crossing_count: int

    def as_dict(self) -> dict:
        return {
            "connected": self.connected,
            "four_valent": self.four_valent,
            "alternating": self.alternating,
            "prime": self.prime,
            "reduced": self.reduced,
            "crossing_count": self.crossing_count,
        }


# ---------------------------------------------------------------------------
# neutral representation: edge ids per slot plus the parity of the under pair
# ---------------------------------------------------------------------------

def _ends(slots: Sequence[Sequence[Hashable]]) -> dict:
    ends: dict = defaultdict(list)
    for c, row in enumerate(slots):
        for i, e in enumerate(row):
            ends[e].append((c, i))
    return ends


def _other_end(ends: dict, e: Hashable, c: int, i: int) -> Dart:
    a, b = ends[e]
    return b if a == (c, i) else a


def _walk(slots, under, strict: bool = False):
    """Relabel edges by walking each component.

    ``under[c]`` is the parity of the under-strand slots at crossing ``c``.
    Returns the normalized PD and the label range of every component.  With
    ``strict`` the walk must enter every under-strand at slot ``under[c]``,
    which is how a PD code records the direction of its under-strands.
    """
    n = len(slots)
    ends = _ends(slots)
    for e, where in ends.items():
        if len(where) != 2:
            raise LabelMismatch(f"edge {e!r} has {len(where)} endpoints")
    label: dict = {}
    entered: set[Dart] = set()
    components = []
    nxt = 1

    def starts():
        for c in range(n):
            yield c, (under[c] + 2) % 4
        for c in range(n):
            for i in range(4):
                yield c, i

    for c0, i0 in starts():
        if slots[c0][i0] in label:
            continue
        first = nxt
        c, i = c0, i0
        while slots[c][i] not in label:
            e = slots[c][i]
            label[e] = nxt
            nxt += 1
            c, j = _other_end(ends, e, c, i)
            if strict and j % 2 == under[c] and j != under[c]:
                raise MalformedCode(
                    f"under-strand at crossing {c} is entered through its outgoing slot"
                )
            entered.add((c, j))
            i = (j + 2) % 4
        components.append((first, nxt - 1))

    pd = []
    for c in range(n):
        u = under[c] if (c, under[c]) in entered else (under[c] + 2) % 4
        pd.append(tuple(label[slots[c][(u + k) % 4]] for k in range(4)))
    return tuple(pd), tuple(components)


def _map_from_pd(pd: PD) -> tuple[list[list[int]], list[int]]:
    return [list(x) for x in pd], [0] * len(pd)


def _face_orbits(slots) -> tuple[list[list[Dart]], dict[Dart, int]]:
    ends = _ends(slots)
    face_of: dict[Dart, int] = {}
    orbits: list[list[Dart]] = []
    for c in range(len(slots)):
        for k in range(4):
            if (c, k) in face_of:
                continue
            fid = len(orbits)
            orbit = []
            d = (c, k)
            while d not in face_of:
                face_of[d] = fid
                orbit.append(d)
                oc, oj = _other_end(ends, slots[d[0]][d[1]], d[0], d[1])
                d = (oc, (oj + 1) % 4)
            orbits.append(orbit)
    return orbits, face_of


def _connected(slots) -> bool:
    n = len(slots)
    if n == 0:
        return False
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    parts = n
    for where in _ends(slots).values():
        if len(where) != 2:
            continue
        (a, _), (b, _) = where
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            parts -= 1
    return parts == 1


# ---------------------------------------------------------------------------
# the diagram type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KnotDiagram:
    """Immutable planar diagram; construct through :meth:`from_pd`."""

    pd: PD
    components: tuple[tuple[int, int], ...]

    @classmethod
    def from_pd(cls, pd: Iterable[Sequence[int]], allow_links: bool = False,
                strict: bool = True) -> "KnotDiagram":
        tuples = tuple(tuple(int(v) for v in x) for x in pd)
        if not tuples:
            raise MalformedCode("diagram has no crossings")
        if any(len(x) != 4 for x in tuples):
            raise MalformedCode("every crossing needs exactly four labels")
        slots, under = _map_from_pd(tuples)
        return cls._from_map(slots, under, allow_links=allow_links, strict=strict)

    @classmethod
    def _from_map(cls, slots, under, allow_links: bool = False,
                  strict: bool = False) -> "KnotDiagram":
        if not _connected(slots):
            raise NonPlanar("diagram graph is disconnected")
        pd, comps = _walk(slots, under, strict=strict)
        if len(comps) > 1 and not allow_links:
            raise NotAKnot(f"code describes a {len(comps)}-component link")
        diagram = cls(pd, comps)
        n = len(pd)
        faces = len(diagram._orbits[0])
        if n - 2 * n + faces != 2:
            raise NonPlanar(
                f"V - E + F = {n} - {2 * n} + {faces} = {faces - n}, not 2"
            )
        return diagram

    # -- basic structure ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.pd)

    @property
    def crossing_count(self) -> int:
        return len(self.pd)

    @property
    def is_knot(self) -> bool:
        return len(self.components) == 1

    def successor(self, label: int) -> int:
        for lo, hi in self.components:
            if lo <= label <= hi:
                return lo if label == hi else label + 1
        raise KeyError(label)

    @cached_property
    def _positions(self) -> dict[int, list[Dart]]:
        pos: dict[int, list[Dart]] = defaultdict(list)
        for c, x in enumerate(self.pd):
            for i, lab in enumerate(x):
                pos[lab].append((c, i))
        return dict(pos)

    @cached_property
    def edges(self) -> dict[int, tuple[Dart, Dart]]:
        """Edge label -> (tail dart, head dart)."""
        out = {}
        for lab, (a, b) in self._positions.items():
            # slot 0 is always entered and slot 2 always left; an over slot
            # is entered when the opposite slot carries the next label
            def entered(p: Dart) -> int:
                if p[1] == 0:
                    return 2
                if p[1] == 2:
                    return 0
                return int(self.pd[p[0]][(p[1] + 2) % 4] == self.successor(lab))
            out[lab] = (a, b) if entered(b) >= entered(a) else (b, a)
        return out

    def other_end(self, c: int, i: int) -> Dart:
        a, b = self._positions[self.pd[c][i]]
        return b if a == (c, i) else a

    @cached_property
    def signs(self) -> tuple[int, ...]:
        out = []
        for c, x in enumerate(self.pd):
            # over strand leaving through slot 1 means it runs from slot 3 to 1
            tail, _ = self.edges[x[1]]
            out.append(1 if tail == (c, 1) else -1)
        return tuple(out)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    @cached_property
    def crossings(self) -> tuple[Crossing, ...]:
        return tuple(Crossing(c, x, s) for c, (x, s) in enumerate(zip(self.pd, self.signs)))

    @cached_property
    def is_alternating(self) -> bool:
        for lab, (_, head) in self.edges.items():
            _, nhead = self.edges[self.successor(lab)]
            if head[1] % 2 == nhead[1] % 2:
                return False
        return True

    # -- faces ---------------------------------------------------------------

    @cached_property
    def _orbits(self) -> tuple[list[list[Dart]], dict[Dart, int]]:
        return _face_orbits(self.pd)

    def face_at(self, c: int, k: int) -> int:
        """Face id containing corner ``k`` of crossing ``c``."""
        return self._orbits[1][(c, k % 4)]

    def edge_sides(self, label: int) -> tuple[int, int]:
        a, b = self._positions[label]
        return self.face_at(*a), self.face_at(*b)

    @cached_property
    def face_colors(self) -> tuple[str, ...]:
        orbits, _ = self._orbits
        adj: dict[int, set[int]] = defaultdict(set)
        for lab in self._positions:
            f, g = self.edge_sides(lab)
            adj[f].add(g)
            adj[g].add(f)
        color: dict[int, int] = {}
        root = self.face_at(0, 1)
        color[root] = 0
        queue = [root]
        for f in queue:
            for g in sorted(adj[f]):
                if g == f:
                    raise NotBipartiteDual(f"face {f} borders itself")
                if g not in color:
                    color[g] = 1 - color[f]
                    queue.append(g)
                elif color[g] == color[f]:
                    raise NotBipartiteDual(f"faces {f} and {g} are adjacent and share a color")
        return tuple(RED if color[f] == 0 else BLUE for f in range(len(orbits)))

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        orbits, _ = self._orbits
        colors = self.face_colors
        return tuple(
            Face(fid, tuple(orbit), tuple(self.pd[c][k] for c, k in orbit), colors[fid])
            for fid, orbit in enumerate(orbits)
        )

    def corner_color(self, c: int, k: int) -> str:
        return self.face_colors[self.face_at(c, k)]

    def color_parity(self, c: int, color: str) -> int:
        """Parity of the corners of ``color`` at crossing ``c``."""
        return 0 if self.corner_color(c, 0) == color else 1

    def tait_graph(self, color: str) -> nx.MultiGraph:
        """Faces of ``color`` as vertices, one edge per crossing (key = crossing id)."""
        g = nx.MultiGraph()
        g.add_nodes_from(f.id for f in self.faces if f.color == color)
        for c in range(len(self.pd)):
            p = self.color_parity(c, color)
            g.add_edge(self.face_at(c, p), self.face_at(c, p + 2), key=c)
        return g

    def bigons(self) -> list[Face]:
        return [f for f in self.faces if f.size == 2 and f.crossings[0] != f.crossings[1]]

    def monogons(self) -> list[Face]:
        return [f for f in self.faces if f.size == 1]

    # -- conversions ----------------------------------------------------------

    def to_map(self) -> tuple[list[list[int]], list[int]]:
        return _map_from_pd(self.pd)

    def pd_string(self) -> str:
        return " ".join("X[" + ",".join(map(str, x)) + "]" for x in self.pd)

    def __str__(self) -> str:
        return self.pd_string()


# ---------------------------------------------------------------------------
# parsing and validation
# ---------------------------------------------------------------------------

def parse_pd(text: str, allow_links: bool = False) -> KnotDiagram:
    """Parse whitespace-separated ``X[a,b,c,d]`` tuples (an optional ``PD[...]`` wrapper is allowed)."""
    if text is None or not text.strip():
        raise MalformedCode("empty PD code")
    body = text.strip()
    if body.startswith("PD[") and body.endswith("]"):
        body = body[3:-1]
    tuples = []
    for m in _X_TUPLE.finditer(body):
        parts = [p.strip() for p in m.group(1).split(",")]
        if len(parts) != 4 or not all(re.fullmatch(r"\d+", p) for p in parts):
            raise MalformedCode(f"bad crossing {m.group(0)!r}")
        tuples.append(tuple(int(p) for p in parts))
    leftover = _X_TUPLE.sub("", body).replace(",", " ").strip()
    if leftover or not tuples:
        raise MalformedCode(f"unparseable PD text near {leftover[:20]!r}")
    counts: dict[int, int] = defaultdict(int)
    for x in tuples:
        for lab in x:
            if lab <= 0:
                raise MalformedCode("PD labels must be positive")
            counts[lab] += 1
    bad = sorted(lab for lab, k in counts.items() if k != 2)
    if bad:
        raise LabelMismatch(f"labels {bad} do not appear exactly twice")
    return KnotDiagram.from_pd(tuples, allow_links=allow_links)


def is_prime(d: KnotDiagram) -> bool:
    """No two distinct edges separate the same pair of faces.

    Such a pair is exactly a 2-edge cut of the diagram graph realised by a
    simple closed curve, and both of its sides then contain crossings.
    """
    seen: dict[frozenset, int] = {}
    for lab in d._positions:
        f, g = d.edge_sides(lab)
        if f == g:
            continue
        key = frozenset((f, g))
        if key in seen:
            return False
        seen[key] = lab
    return True


def nugatory_crossings(d: KnotDiagram) -> list[int]:
    """Crossings whose opposite corners of one color lie in the same face."""
    return [
        c for c in range(len(d.pd))
        if d.face_at(c, 0) == d.face_at(c, 2) or d.face_at(c, 1) == d.face_at(c, 3)
    ]


def validate(d: KnotDiagram) -> DiagramReport:
    connected = _connected(d.pd)
    four_valent = all(len(x) == 4 for x in d.pd) and all(
        len(v) == 2 for v in d._positions.values()
    )
    prime = connected and is_prime(d)
    reduced = not d.monogons() and not nugatory_crossings(d)
    return DiagramReport(
        connected=connected,
        four_valent=four_valent,
        alternating=d.is_alternating,
        prime=prime,
        reduced=reduced,
        crossing_count=len(d.pd),
    )


def faces(d: KnotDiagram) -> tuple[Face, ...]:
    return d.faces


# ---------------------------------------------------------------------------
# isomorphism up to relabeling, orientation and mirror image
# ---------------------------------------------------------------------------

def _variants(slots, under, mirror: bool):
    yield slots, under
    if mirror:
        refl = [[r[0], r[3], r[2], r[1]] for r in slots]
        yield refl, under
        yield slots, [1 - u for u in under]
        yield refl, [1 - u for u in under]


def _relabelled(slots, under, c0: int, i0: int) -> tuple:
    """PD as a sorted tuple after relabeling from the outgoing dart (c0, i0)."""
    n = len(slots)
    ends = _ends(slots)
    label = {}
    entered = set()
    c, i = c0, i0
    k = 1
    while slots[c][i] not in label:
        e = slots[c][i]
        label[e] = k
        k += 1
        c, j = _other_end(ends, e, c, i)
        entered.add((c, j))
        i = (j + 2) % 4
    if len(label) != 2 * n:
        raise NotAKnot("canonical form is only defined for knots")
    rows = []
    for c in range(n):
        u = under[c] if (c, under[c]) in entered else (under[c] + 2) % 4
        rows.append(tuple(label[slots[c][(u + t) % 4]] for t in range(4)))
    return tuple(sorted(rows))


def canonical_key(d: KnotDiagram, mirror: bool = True) -> tuple:
    """Relabeling-invariant key; equal keys mean isomorphic plane diagrams."""
    slots, under = d.to_map()
    best = None
    for s, u in _variants(slots, under, mirror):
        for c in range(len(s)):
            for i in range(4):
                key = _relabelled(s, u, c, i)
                if best is None or key < best:
                    best = key
    return best


def isomorphic(a: KnotDiagram, b: KnotDiagram, mirror: bool = True) -> bool:
    if len(a) != len(b):
        return False
    return canonical_key(a, mirror) == canonical_key(b, mirror)

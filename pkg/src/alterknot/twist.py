"""Twist regions, twist equivalence and flype reduction.

Two crossings are twist equivalent when they are parallel edges of one of
the two Tait graphs.  For a reduced alternating diagram these classes are
the parallel classes and the series classes of the red Tait graph, which a
flype (a Whitney flip of the Tait graph) does not change.  A diagram is twist
reduced when every class forms a single twist region, and the twist number
is then the number of classes.

A flype is described by a crossing ``c`` and a slot ``s``.  Reading the slots
of ``c`` counterclockwise from ``s`` gives ``f_t, f_b, e_b, e_t``: the
``f`` edges lead away and the ``e`` edges lead into a tangle ``T`` whose two
remaining boundary edges ``g_t, g_b`` separate a face ``Z`` from the faces
``Y_t`` (corner ``s``) and ``Y_b`` (corner ``s + 2``).  The move carries
``c`` across ``T`` and turns ``T`` over.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass

from .diagram import BLUE, RED, KnotDiagram, is_prime, nugatory_crossings
from .errors import NotAlternating, NotPrime, NotReduced, NotTwistReduced, PreconditionError


@dataclass(frozen=True)
class TwistRegion:
    crossing_ids: tuple[int, ...]
    handedness: int
    encircled: bool = False

    @property
    def length(self) -> int:
        return len(self.crossing_ids)


@dataclass(frozen=True)
class FlypeMove:
    """A flype in the labeling of the diagram it was applied to."""

    crossing: int
    slot: int
    face: int
    g_top: int
    g_bottom: int
    tangle: tuple[int, ...]


# ---------------------------------------------------------------------------
# regions and classes
# ---------------------------------------------------------------------------

def _bigon_pairs(d: KnotDiagram) -> list[tuple[int, int]]:
    return [tuple(sorted(f.crossings)) for f in d.bigons()]


def detect_twist_regions(d: KnotDiagram) -> list[TwistRegion]:
    """Maximal bigon chains, each listed in chain order, sorted by least id."""
    if d.monogons():
        raise NotReduced("diagram has a monogon")
    adj: dict[int, set[int]] = defaultdict(set)
    for a, b in _bigon_pairs(d):
        adj[a].add(b)
        adj[b].add(a)
    seen: set[int] = set()
    regions = []
    for c in range(len(d)):
        if c in seen:
            continue
        comp = {c}
        stack = [c]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        ends = sorted(x for x in comp if len(adj[x]) <= 1)
        order = [ends[0] if ends else min(comp)]
        while len(order) < len(comp):
            nxt = sorted(y for y in adj[order[-1]] if y not in order)
            order.append(nxt[0])
        if not ends and len(order) > 2 and order[-1] < order[1]:
            order = [order[0]] + order[1:][::-1]
        regions.append(TwistRegion(tuple(order), d.signs[order[0]]))
    return sorted(regions, key=lambda r: min(r.crossing_ids))


def _tait_pair(d: KnotDiagram, c: int, color: str) -> frozenset[int]:
    p = d.color_parity(c, color)
    return frozenset((d.face_at(c, p), d.face_at(c, p + 2)))


def twist_equivalent(d: KnotDiagram, c1: int, c2: int) -> bool:
    """True iff ``c1`` and ``c2`` are parallel in the red or the blue Tait graph."""
    if c1 == c2:
        raise PreconditionError("twist equivalence needs two distinct crossings")
    for color in (RED, BLUE):
        a, b = _tait_pair(d, c1, color), _tait_pair(d, c2, color)
        if a == b and len(a) == 2:
            return True
    return False


def twist_classes(d: KnotDiagram) -> list[tuple[int, ...]]:
    """Partition of the crossings into twist-equivalence classes."""
    parent = list(range(len(d)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for color in (RED, BLUE):
        first: dict[frozenset, int] = {}
        for c in range(len(d)):
            key = _tait_pair(d, c, color)
            if len(key) < 2:
                continue
            if key in first:
                parent[find(c)] = find(first[key])
            else:
                first[key] = c
    groups: dict[int, list[int]] = defaultdict(list)
    for c in range(len(d)):
        groups[find(c)].append(c)
    return sorted(tuple(g) for g in groups.values())


def is_twist_reduced(d: KnotDiagram) -> bool:
    region_of = {}
    for i, r in enumerate(detect_twist_regions(d)):
        for c in r.crossing_ids:
            region_of[c] = i
    return all(len({region_of[c] for c in cls}) == 1 for cls in twist_classes(d))


# ---------------------------------------------------------------------------
# flypes
# ---------------------------------------------------------------------------

class DartMap:
    """Mutable working copy of a diagram as flat arrays, used to chain flypes.

    Dart ``4c + i`` is slot ``i`` of crossing ``c``; ``partner`` pairs the two
    darts of every edge and ``under[c]`` is the parity of the under slots.
    """

    __slots__ = ("partner", "under", "_face")

    def __init__(self, partner: list[int], under: list[int]):
        self.partner = partner
        self.under = under
        self._face: list[int] | None = None

    @classmethod
    def from_diagram(cls, d: KnotDiagram) -> "DartMap":
        partner = [0] * (4 * len(d))
        for lab, ((a, i), (b, j)) in d._positions.items():
            partner[4 * a + i] = 4 * b + j
            partner[4 * b + j] = 4 * a + i
        return cls(partner, [0] * len(d))

    def to_diagram(self, allow_links: bool = False) -> KnotDiagram:
        p = self.partner
        slots = [[min(h, p[h]) for h in range(4 * c, 4 * c + 4)] for c in range(len(self.under))]
        return KnotDiagram._from_map(slots, list(self.under), allow_links=allow_links)

    @property
    def face(self) -> list[int]:
        """Face id of every dart (equivalently of every corner)."""
        if self._face is None:
            p = self.partner
            face = [-1] * len(p)
            fid = 0
            for h0 in range(len(p)):
                if face[h0] >= 0:
                    continue
                h = h0
                while face[h] < 0:
                    face[h] = fid
                    q = p[h]
                    h = (q & ~3) | ((q + 1) & 3)
                fid += 1
            self._face = face
        return self._face

    def face_darts(self, f: int) -> list[int]:
        return [h for h, g in enumerate(self.face) if g == f]

    def tangle(self, c: int, s: int, h_t: int, h_b: int) -> set[int] | None:
        """Crossings behind the e-edges of (c, s), or None if the cut is not a tangle."""
        p = self.partner
        base = 4 * c
        darts = [base + (s + k) % 4 for k in range(4)]
        cut = set(darts) | {p[h] for h in darts} | {h_t, p[h_t], h_b, p[h_b]}
        if len(cut) != 12:
            return None
        start = {p[darts[2]] >> 2, p[darts[3]] >> 2}
        if c in start:
            return None
        side = set(start)
        stack = list(start)
        while stack:
            x = stack.pop()
            for h in range(4 * x, 4 * x + 4):
                if h in cut:
                    continue
                y = p[h] >> 2
                if y == c:
                    return None
                if y not in side:
                    side.add(y)
                    stack.append(y)
        for h in (h_t, h_b):
            if ((h >> 2) in side) == ((p[h] >> 2) in side):
                return None
        if (p[darts[0]] >> 2) in side or (p[darts[1]] >> 2) in side:
            return None
        return side

    def candidates(self, c: int, s: int) -> list[tuple[int, int, int, int, frozenset]]:
        """Flypes at (c, s) as (c, s, face Z, dart of g_t, dart of g_b, tangle)."""
        face, p = self.face, self.partner
        base = 4 * c
        y_t, x_l, y_b = face[base + s], face[base + (s + 1) % 4], face[base + (s + 2) % 4]
        out = []
        for hb in self.face_darts(y_b):
            z = face[p[hb]]
            if z in (x_l, y_b, y_t):
                continue
            for ht in self.face_darts(z):
                if face[p[ht]] != y_t or ht == p[hb]:
                    continue
                side = self.tangle(c, s, ht, hb)
                if side is not None:
                    out.append((c, s, z, ht, hb, frozenset(side)))
        return out

    def flype(self, c: int, s: int, ht: int, hb: int, side: frozenset) -> None:
        """Carry ``c`` across the tangle ``side`` and turn the tangle over."""
        p = self.partner
        old = list(p)
        base = 4 * c

        def flip(h: int) -> int:
            x = h >> 2
            return (x << 2) | ((-h) & 3) if x in side else h

        p_t, p_b, q_b, q_t = (old[base + (s + k) % 4] for k in range(4))
        s_t, r_t = (ht, old[ht]) if (ht >> 2) in side else (old[ht], ht)
        s_b, r_b = (hb, old[hb]) if (hb >> 2) in side else (old[hb], hb)
        skip = {s_t, r_t, s_b, r_b}
        for h, g in enumerate(old):
            if (h >> 2) == c or (g >> 2) == c or h in skip:
                continue
            p[flip(h)] = flip(g)

        def join(a: int, b: int) -> None:
            p[a] = b
            p[b] = a

        join(p_t, flip(q_b))
        join(p_b, flip(q_t))
        join(base, flip(s_b))
        join(base + 1, flip(s_t))
        join(base + 2, r_b)
        join(base + 3, r_t)
        u = self.under
        # the strand running from the upper-left to the lower-right keeps its level
        u[c] = 0 if s % 2 == u[c] else 1
        for x in side:
            u[x] ^= 1
        self._face = None


def _to_move(d: KnotDiagram, cand) -> FlypeMove:
    c, s, z, ht, hb, side = cand
    return FlypeMove(c, s, z, d.pd[ht >> 2][ht & 3], d.pd[hb >> 2][hb & 3], tuple(sorted(side)))


def _dart_of(d: KnotDiagram, label: int) -> int:
    (x, i), _ = d._positions[label]
    return 4 * x + i


def flype_candidates(d: KnotDiagram, c: int, s: int) -> list[FlypeMove]:
    """All flypes that carry crossing ``c`` across the tangle facing slots s+2, s+3."""
    return [_to_move(d, cand) for cand in DartMap.from_diagram(d).candidates(c, s % 4)]


def apply_flype(d: KnotDiagram, move: FlypeMove) -> KnotDiagram:
    """Carry the crossing across its tangle and turn the tangle over."""
    m = DartMap.from_diagram(d)
    m.flype(move.crossing, move.slot, _dart_of(d, move.g_top), _dart_of(d, move.g_bottom),
            frozenset(move.tangle))
    return m.to_diagram(allow_links=not d.is_knot)


def all_flypes(d: KnotDiagram) -> list[FlypeMove]:
    m = DartMap.from_diagram(d)
    return [_to_move(d, cand) for c in range(len(d)) for s in range(4) for cand in m.candidates(c, s)]


def random_flype(d: KnotDiagram, rng: random.Random, tries: int = 32) -> tuple[KnotDiagram, FlypeMove] | None:
    """Apply a flype at a random crossing and slot; None if none was found."""
    m = DartMap.from_diagram(d)
    for _ in range(tries):
        c, s = rng.randrange(len(d)), rng.randrange(4)
        cands = m.candidates(c, s)
        if cands:
            cand = rng.choice(cands)
            move = _to_move(d, cand)
            m.flype(*cand[:2], *cand[3:])
            return m.to_diagram(allow_links=not d.is_knot), move
    return None


def random_flypes(d: KnotDiagram, count: int, rng: random.Random, tries: int = 32) -> tuple[KnotDiagram, int]:
    """Apply up to ``count`` random flypes in a row; returns the result and how many were applied."""
    m = DartMap.from_diagram(d)
    done = 0
    for _ in range(count):
        for _ in range(tries):
            c, s = rng.randrange(len(d)), rng.randrange(4)
            cands = m.candidates(c, s)
            if cands:
                cand = rng.choice(cands)
                m.flype(*cand[:2], *cand[3:])
                done += 1
                break
        else:
            break
    return m.to_diagram(allow_links=not d.is_knot), done


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

def _check_reducible(d: KnotDiagram) -> None:
    if not d.is_alternating:
        raise NotAlternating("twist reduction needs an alternating diagram")
    if d.monogons() or nugatory_crossings(d):
        raise NotReduced("diagram has a nugatory crossing")
    if not is_prime(d):
        raise NotPrime("diagram is not prime")


def _outer_crossing(d: KnotDiagram, label: int, side: set[int]) -> int:
    (a, _), (b, _) = d._positions[label]
    return b if a in side else a


def _merge_move(d: KnotDiagram, sources: set[int] | None = None) -> tuple[FlypeMove, set[int]] | None:
    """First flype joining an end crossing of a run to another run of its class.

    Classes, runs and crossings are scanned in increasing order.  With
    ``sources`` only those crossings may move.  Returns the move and the
    crossings of the run it started from.
    """
    regions = detect_twist_regions(d)
    region_of = {c: i for i, r in enumerate(regions) for c in r.crossing_ids}
    for cls in twist_classes(d):
        runs = sorted({region_of[c] for c in cls})
        if len(runs) < 2:
            continue
        members = set(cls)
        for run in runs:
            chain = regions[run].crossing_ids
            for c in sorted({chain[0], chain[-1]}):
                if sources is not None and c not in sources:
                    continue
                for s in range(4):
                    for move in flype_candidates(d, c, s):
                        side = set(move.tangle)
                        if members & side:
                            continue
                        x, y = (_outer_crossing(d, move.g_top, side),
                                _outer_crossing(d, move.g_bottom, side))
                        if x == y and x in members and region_of[x] != run:
                            return move, set(chain)
    return None


def twist_reduce_trace(d: KnotDiagram) -> tuple[KnotDiagram, tuple[FlypeMove, ...]]:
    """Twist-reduced diagram together with the flypes that produced it.

    Each round picks the first run that can be flyped onto another run of its
    class and then carries every crossing of that run across, one flype per
    crossing.  Crossing ids survive a flype, and a round empties one run, so
    the number of twist regions drops every round.
    """
    _check_reducible(d)
    moves = []
    while not is_twist_reduced(d):
        found = _merge_move(d)
        if found is None:
            raise NotTwistReduced("no merging flype found; input outside the supported class")
        move, pending = found
        while True:
            d = apply_flype(d, move)
            moves.append(move)
            pending.discard(move.crossing)
            if not pending:
                break
            found = _merge_move(d, pending)
            if found is None:
                break
            move, _ = found
    return d, tuple(moves)


def twist_reduce(d: KnotDiagram) -> KnotDiagram:
    return twist_reduce_trace(d)[0]


def twist_number(d: KnotDiagram) -> int:
    return len(detect_twist_regions(twist_reduce(d)))


def tw_N(d: KnotDiagram, N: int) -> int:
    """Number of twist regions with at least ``N`` crossings."""
    if N < 1:
        raise PreconditionError("N must be at least 1")
    return sum(1 for r in detect_twist_regions(d) if r.length >= N)

"""Dowker-Thistlethwaite codes: parsing, planar realization and emission.

Positions along the knot are numbered ``1..2n``; edge ``p`` runs from the
visit at position ``p`` to the visit at ``p + 1``.  Entry ``a_i`` of the code
pairs odd position ``2i + 1`` with even position ``|a_i|``.  A positive entry
means the odd visit passes under.

Realization replaces every crossing by a wheel (a 4-cycle ``in_odd, in_even,
out_odd, out_even`` around a hub), so the opposite pairs are forced, and
asks networkx for a planar embedding.  The rotation at each hub is the
counterclockwise order of the four strand ends.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

import networkx as nx

from .diagram import KnotDiagram, _ends, _other_end
from .errors import LabelMismatch, MalformedCode, NotAKnot, Unrealizable

_INT = re.compile(r"[+-]?\d+")


def _tokens(text: str | Iterable[int]) -> list[int]:
    if isinstance(text, str):
        body = text.strip().strip("[]()")
        if not body:
            raise MalformedCode("empty DT code")
        parts = re.split(r"[\s,]+", body.strip())
        if not all(_INT.fullmatch(p) for p in parts):
            raise MalformedCode(f"non-integer token in DT code {text!r}")
        return [int(p) for p in parts]
    return [int(v) for v in text]


def check_dt(code: Sequence[int]) -> None:
    if not code:
        raise MalformedCode("empty DT code")
    if any(v % 2 for v in code):
        raise MalformedCode("DT entries must be even")
    n = len(code)
    if sorted(abs(v) for v in code) != list(range(2, 2 * n + 1, 2)):
        raise LabelMismatch(f"DT entries must be a signed permutation of 2..{2 * n}")


def realize(code: Sequence[int]) -> tuple[list[list[int]], list[int]]:
    """Planar rotation system for a DT code as (slots, under-parity) lists."""
    check_dt(code)
    n = len(code)
    m = 2 * n
    crossing_at = {}
    for i, v in enumerate(code):
        crossing_at[2 * i + 1] = i
        crossing_at[abs(v)] = i

    def edge_in(p: int) -> int:
        return m if p == 1 else p - 1

    g = nx.Graph()
    for i, v in enumerate(code):
        o, e = 2 * i + 1, abs(v)
        rim = [("in", o), ("in", e), ("out", o), ("out", e)]
        for k in range(4):
            g.add_edge(rim[k], rim[(k + 1) % 4])
            g.add_edge(("hub", i), rim[k])
    for p in range(1, m + 1):
        q = p % m + 1
        g.add_edge(("out", p), ("mid", p))
        g.add_edge(("mid", p), ("in", q))

    planar, emb = nx.check_planarity(g)
    if not planar:
        raise Unrealizable(f"DT code {' '.join(map(str, code))} has no planar realization")

    slots: list[list[int]] = []
    under: list[int] = []
    for i, v in enumerate(code):
        o = 2 * i + 1
        ccw = list(emb.neighbors_cw_order(("hub", i)))[::-1]
        row = [p if kind == "out" else edge_in(p) for kind, p in ccw]
        slots.append(row)
        odd_slot = ccw.index(("in", o)) % 2
        under.append(odd_slot if v > 0 else 1 - odd_slot)
    return slots, under


def parse_dt(text: str | Iterable[int]) -> KnotDiagram:
    """Realize a DT code as a planar knot diagram."""
    code = _tokens(text)
    slots, under = realize(code)
    return KnotDiagram._from_map(slots, under)


def to_dt(d: KnotDiagram, normalize: bool = True) -> tuple[int, ...]:
    """DT code read from the normalized labeling of ``d``.

    With ``normalize`` the code is mirrored if needed so the first entry is
    positive, which for alternating diagrams makes every entry positive.
    """
    if not d.is_knot:
        raise NotAKnot("DT codes describe knots only")
    n = len(d)
    visits: dict[int, list[int]] = {c: [] for c in range(n)}
    odd_under: dict[int, bool] = {}
    for lab, (tail, _) in d.edges.items():
        c, i = tail
        visits[c].append(lab)
        if lab % 2 == 1:
            odd_under[c] = i % 2 == 0
    code = [0] * n
    for c, labs in visits.items():
        odd = [p for p in labs if p % 2]
        even = [p for p in labs if p % 2 == 0]
        if len(odd) != 1 or len(even) != 1:
            raise Unrealizable("crossing visited twice with the same parity")
        code[(odd[0] - 1) // 2] = even[0] if odd_under[c] else -even[0]
    if normalize and code[0] < 0:
        code = [-v for v in code]
    return tuple(code)


def dt_string(code: Sequence[int]) -> str:
    return " ".join(str(v) for v in code)


def _dt_from_start(slots, under, c0: int, i0: int) -> tuple[int, ...]:
    ends = _ends(slots)
    n = len(slots)
    visit: dict[tuple[int, int], int] = {}
    c, i = c0, i0
    for p in range(1, 2 * n + 1):
        visit[(c, i)] = p
        c, j = _other_end(ends, slots[c][i], c, i)
        i = (j + 2) % 4
    if len(visit) != 2 * n:
        raise NotAKnot("canonical DT is only defined for knots")
    code = [0] * n
    for c in range(n):
        (a, pa), (b, pb) = [(i, visit[(c, i)]) for i in range(4) if (c, i) in visit]
        if pa % 2 == 0:
            (a, pa), (b, pb) = (b, pb), (a, pa)
        # the odd visit leaves through slot a; under iff a has the under parity
        code[(pa - 1) // 2] = pb if a % 2 == under[c] else -pb
    return tuple(code)


def canonical_dt(d: KnotDiagram) -> tuple[int, ...]:
    """Least DT code over all starting points, directions and mirror images.

    Entries are compared by absolute value first, so for alternating knots
    the result is the lexicographically least all-positive code.
    """
    slots, under = d.to_map()
    best = None
    for s, u in (
        (slots, under),
        ([[r[0], r[3], r[2], r[1]] for r in slots], under),
    ):
        for c in range(len(s)):
            for i in range(4):
                code = _dt_from_start(s, u, c, i)
                if code[0] < 0:
                    code = tuple(-v for v in code)
                key = (tuple(abs(v) for v in code), tuple(-v for v in code))
                if best is None or key < best[0]:
                    best = (key, code)
    return best[1]

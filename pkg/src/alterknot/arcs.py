"""Short cusp-to-cusp arcs on the thrice-punctured sphere.

The surface is the upper half-plane modulo the level-2 congruence group
Gamma(2).  Its cusps are the rationals ``p/q`` and infinity, split into three
classes by ``(p mod 2, q mod 2)``.  The maximal cusps are the Ford
horoballs (diameter ``1/q^2``, and ``y >= 1`` at infinity), pairwise tangent
at Farey neighbours; scaling every horoball by ``t`` in ``(0, 1]`` gives a
cusp filling the fraction ``k = 3t/pi`` of the area ``2 pi``.

The geodesic between cusps ``p/q`` and ``r/s`` has length
``2 ln|ps - qr| - 2 ln t`` outside the scaled horoballs, and the integer
``|ps - qr|`` is invariant under the whole modular group.  Cusps are stored
as reduced integer pairs ``(p, q)`` with ``q >= 0``; ``(1, 0)`` is infinity.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .bounds import arc_count_lower
from .errors import DomainError, IncompleteEnumeration

Cusp = tuple[int, int]
Matrix = tuple[int, int, int, int]
INFINITY: Cusp = (1, 0)

CLASS_NAMES = {(0, 1): "0", (1, 1): "1", (1, 0): "inf"}

# modular transformations carrying each cusp class to the class of infinity
_TO_INF: dict[str, Matrix] = {
    "inf": (1, 0, 0, 1),
    "0": (0, -1, 1, 0),
    "1": (0, -1, 1, -1),
}
_FROM_INF: dict[str, Matrix] = {
    "inf": (1, 0, 0, 1),
    "0": (0, 1, -1, 0),
    "1": (-1, 1, -1, 0),
}


def cusp(p: int, q: int) -> Cusp:
    """Reduced representative of p/q (q = 0 means infinity)."""
    if p == 0 and q == 0:
        raise DomainError("0/0 is not a cusp")
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return p, q


def cusp_class(c: Cusp) -> str:
    return CLASS_NAMES[(c[0] % 2, c[1] % 2)]


def _act(m: Matrix, c: Cusp) -> Cusp:
    a, b, cc, d = m
    return cusp(a * c[0] + b * c[1], cc * c[0] + d * c[1])


def determinant(a: Cusp, b: Cusp) -> int:
    return abs(a[0] * b[1] - a[1] * b[0])


def _to_infinity_gamma2(c: Cusp) -> Matrix:
    """Element of Gamma(2) sending the class-infinity cusp ``c`` to infinity."""
    p, q = c
    if q == 0:
        return (1, 0, 0, 1)
    y = pow(p, -1, q) if q > 1 else 0
    if q == 1:
        raise DomainError("cusp with odd denominator is not in the class of infinity")
    x = (p * y - 1) // q
    if x % 2:
        x, y = x + p, y + q
    # M = [[p, x], [q, y]] lies in Gamma(2) and sends infinity to c
    return (y, -x, -q, p)


def ordered_key(a: Cusp, b: Cusp) -> tuple:
    """Gamma(2)-orbit invariant of the ordered pair of distinct cusps (a, b)."""
    ca = cusp_class(a)
    h = _TO_INF[ca]
    a1, b1 = _act(h, a), _act(h, b)
    m = _to_infinity_gamma2(a1)
    r, s = _act(m, b1)
    if s == 0:
        raise DomainError("arc endpoints coincide")
    return (ca, cusp_class(b), r % (2 * s), s)


def arc_key(a: Cusp, b: Cusp) -> tuple:
    return min(ordered_key(a, b), ordered_key(b, a))


def _representative(key: tuple) -> tuple[Cusp, Cusp]:
    ca, _, r, s = key
    h = _FROM_INF[ca]
    return _act(h, INFINITY), _act(h, (r, s))


@dataclass(frozen=True)
class CuspedSurfaceModel:
    t: float = 1.0
    model: str = "thrice-punctured sphere"
    cusp_classes: tuple[str, ...] = ("0", "1", "inf")
    area: float = 2 * math.pi

    def __post_init__(self):
        if not (0 < self.t <= 1):
            raise DomainError(f"horoball scale t must lie in (0, 1], got {self.t}")

    @property
    def chi_abs(self) -> int:
        return 1

    @property
    def k(self) -> float:
        """Cusp area 2t per cusp, three cusps, over the surface area 2 pi."""
        return 3 * self.t / math.pi


@dataclass(frozen=True)
class ArcRecord:
    endpoints: tuple[Cusp, Cusp]
    classes: tuple[str, str]
    determinant: int
    truncated_length: float
    embedded: bool
    key: tuple

    def as_dict(self) -> dict:
        return {
            "endpoints": [_fmt_cusp(c) for c in self.endpoints],
            "classes": list(self.classes),
            "truncated_length": self.truncated_length,
            "embedded": self.embedded,
        }


def _fmt_cusp(c: Cusp) -> str:
    return "inf" if c[1] == 0 else f"{c[0]}/{c[1]}"


def truncated_length(a: Cusp, b: Cusp, t: float = 1.0) -> float:
    return 2 * math.log(determinant(a, b)) - 2 * math.log(t)


def required_qmax(t: float, length_cap: float) -> int:
    """Largest normalized denominator an arc of length <= cap can have."""
    return max(1, math.floor(t * math.exp(length_cap / 2) + 1e-12))


def default_qmax(d_max: float) -> int:
    return math.ceil(2 * math.exp(d_max)) + 1


# ---------------------------------------------------------------------------
# crossings between lifts
# ---------------------------------------------------------------------------

def _crossing_lifts(x: Fraction, det: int, target_key: tuple, back: Matrix,
                    first: bool = False) -> list[tuple[Cusp, Cusp]]:
    """Lifts (u, v) with u < x < v, |det| = det, and orbit ``target_key``.

    ``back`` carries the normalized picture (first arc vertical at x) back to
    the original coordinates, where orbit keys are compared.  A semicircle
    over u < x < v needs q, s <= det * denominator(x), which makes the search
    finite.
    """
    xn, xd = x.numerator, x.denominator
    bound = det * xd
    # cusp classes of the target's endpoints, seen in the normalized picture
    forward = _inverse(back)
    wanted = [_parity(_act(forward, c)) for c in _representative(target_key)]
    out = []
    for q in range(1, bound + 1):
        for p in range(math.floor((x - det) * q), math.ceil(x * q) + 1):
            if p * xd >= xn * q or (p % 2, q % 2) not in wanted or math.gcd(p, q) != 1:
                continue
            other = wanted[1] if (p % 2, q % 2) == wanted[0] else wanted[0]
            # r q - p s = det, and v = u + det/(q s) > x needs s (q x - p) < det
            s_hi = min(bound, (det * xd - 1) // (q * xn - p * xd))
            if q == 1:
                s_values = range(1, s_hi + 1)
            else:
                s0 = (-det * pow(p, -1, q)) % q
                s_values = range(s0 if s0 else q, s_hi + 1, q)
            for s in s_values:
                num = det + p * s
                if num % q:
                    continue
                r = num // q
                if (r % 2, s % 2) != other or r * xd <= xn * s or math.gcd(r, s) != 1:
                    continue
                u, v = _act(back, (p, q)), _act(back, (r, s))
                if arc_key(u, v) == target_key:
                    out.append((u, v))
                    if first:
                        return out
    return out


def _parity(c: Cusp) -> tuple[int, int]:
    return c[0] % 2, c[1] % 2


def _inverse(m: Matrix) -> Matrix:
    a, b, c, d = m
    return (d, -b, -c, a)


def _normalizer(key: tuple) -> tuple[Fraction, Matrix]:
    """Vertical position of the first arc after normalization, and the way back."""
    ca, _, r, s = key
    return Fraction(r, s), _FROM_INF[ca]


@lru_cache(maxsize=None)
def _crosses(key1: tuple, key2: tuple) -> bool:
    a, b = _representative(key2)
    x, back = _normalizer(key1)
    return bool(_crossing_lifts(x, determinant(a, b), key2, back, first=True))


def is_embedded(arc: ArcRecord) -> bool:
    """No other lift of the arc crosses the vertical lift."""
    return not _crosses(arc.key, arc.key)


def disjointness(a1: ArcRecord, a2: ArcRecord) -> bool:
    """True iff two distinct arcs have disjoint geodesic representatives."""
    if a1.key == a2.key:
        return False
    return not _crosses(a1.key, a2.key)


# ---------------------------------------------------------------------------
# enumeration and the theorem check
# ---------------------------------------------------------------------------

def _record(key: tuple, t: float) -> ArcRecord:
    a, b = _representative(key)
    det = determinant(a, b)
    return ArcRecord(
        endpoints=(a, b),
        classes=(cusp_class(a), cusp_class(b)),
        determinant=det,
        truncated_length=2 * math.log(det) - 2 * math.log(t),
        embedded=not _crosses(key, key),
        key=key,
    )


def enumerate_arcs(qmax: int, t: float, length_cap: float) -> list[ArcRecord]:
    """Every cusp-to-cusp geodesic of truncated length <= cap, one per Gamma(2)-orbit.

    Each orbit has a representative running from a standard cusp of one of
    the three classes to ``r/s`` with ``0 <= r/s < 2``, and its length is
    ``2 ln s - 2 ln t``; ``qmax`` bounds ``s``.
    """
    if qmax < 1:
        raise DomainError("qmax must be at least 1")
    CuspedSurfaceModel(t)
    if length_cap < 0:
        raise DomainError("length cap must be nonnegative")
    need = required_qmax(t, length_cap)
    if qmax < need:
        raise IncompleteEnumeration(
            f"qmax = {qmax} misses arcs of length <= {length_cap} at t = {t}; need {need}"
        )
    smax = min(qmax, need)
    keys = set()
    for ca, h in _FROM_INF.items():
        start = _act(h, INFINITY)
        for s in range(1, smax + 1):
            for r in range(0, 2 * s):
                if math.gcd(r, s) != 1:
                    continue
                if 2 * math.log(s) - 2 * math.log(t) > length_cap + 1e-12:
                    continue
                keys.add(arc_key(start, _act(h, (r, s))))
    records = [_record(k, t) for k in sorted(keys, key=_sort_key)]
    return sorted(records, key=lambda a: (a.truncated_length, _sort_key(a.key)))


def _sort_key(key: tuple) -> tuple:
    ca, cb, r, s = key
    return (s, ca, cb, r)


def max_disjoint(arcs: Sequence[ArcRecord], cap: int = 3) -> tuple[ArcRecord, ...]:
    """Largest pairwise-disjoint set of embedded arcs, by exhaustive search."""
    pool = [a for a in arcs if a.embedded]
    for size in range(min(cap, len(pool)), 0, -1):
        for combo in itertools.combinations(pool, size):
            if all(disjointness(x, y) for x, y in itertools.combinations(combo, 2)):
                return combo
    return ()


def _decimal(x: float) -> str:
    s = f"{x:.12g}"
    return s if any(ch in s for ch in ".en") else s + ".0"


@dataclass(frozen=True)
class ArcCensusRow:
    t: float
    d: float
    k: float
    formula: float
    achieved: int
    passed: bool
    witnesses: tuple[ArcRecord, ...]

    def csv_fields(self) -> list[str]:
        return [
            _decimal(self.t),
            _decimal(self.d),
            f"{self.k:.4f}",
            f"{self.formula:.4f}",
            str(self.achieved),
            "pass" if self.passed else "fail",
        ]


def verify_arc_theorem(t_grid: Iterable[float], d_grid: Iterable[float],
                       qmax: int | None = None) -> list[ArcCensusRow]:
    """Compare the guaranteed arc count with the best disjoint embedded collection."""
    t_grid, d_grid = list(t_grid), list(d_grid)
    if not t_grid or not d_grid:
        raise DomainError("grids must be nonempty")
    if qmax is None:
        qmax = default_qmax(max(d_grid))
    rows = []
    for t in t_grid:
        model = CuspedSurfaceModel(t)
        for d in d_grid:
            formula = arc_count_lower(model.k, d, model.chi_abs)
            arcs = enumerate_arcs(qmax, t, 2 * d)
            best = max_disjoint(arcs, cap=3 * model.chi_abs)
            passed = formula <= 0 or len(best) >= math.ceil(formula)
            rows.append(ArcCensusRow(t, d, model.k, formula, len(best), passed, best))
    return rows

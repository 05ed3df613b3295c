"""Regenerate src/alterknot/data/census.csv from SnapPy (offline; not a runtime dependency).

Cusp areas and meridian lengths come from SnapPy's maximal cusp.  Twist
numbers come from the Jones polynomial via the Dasbach-Lin formula
``tw = |second coefficient| + |penultimate coefficient|``, evaluated with a
plain Kauffman state sum on SnapPy's own PD code, so neither column touches
the package's flype or twist-region code.

    pip install snappy
    python3 tools/make_census.py > src/alterknot/data/census.csv
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import snappy

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from oracles import kauffman_bracket  # noqa: E402

# Rolfsen table sizes for 3..9 crossings
TABLE = {3: 1, 4: 1, 5: 2, 6: 3, 7: 7, 8: 21, 9: 49}


def dasbach_lin_twist(pd) -> int:
    bracket = kauffman_bracket(pd)
    lo, hi = min(bracket), max(bracket)
    coeffs = [bracket.get(k, 0) for k in range(lo, hi + 1, 4)]
    return abs(coeffs[1]) + abs(coeffs[-2])


def rows():
    for n, count in TABLE.items():
        for i in range(1, count + 1):
            name = f"{n}_{i}"
            link = snappy.Link(name)
            if not link.is_alternating():
                continue
            manifold = snappy.Manifold(name)
            if manifold.solution_type() != "all tetrahedra positively oriented":
                continue  # the (2, q)-torus knots
            dt = manifold.DT_code()[0]
            if len({x > 0 for x in dt}) != 1:
                raise RuntimeError(f"{name}: DT code is not alternating")
            area = float(manifold.cusp_areas()[0])
            meridian = abs(complex(manifold.cusp_translations()[0][0]))
            yield {
                "name": name,
                "dt_code": " ".join(str(abs(x)) for x in dt),
                "crossings": len(dt),
                "twist_number": dasbach_lin_twist(link.PD_code()),
                "cusp_area": f"{area:.12g}",
                "meridian_length": f"{meridian:.12g}",
            }


def main() -> None:
    fields = ["name", "dt_code", "crossings", "twist_number", "cusp_area", "meridian_length"]
    writer = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows():
        writer.writerow(row)


if __name__ == "__main__":
    main()

import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from alterknot import bounds
from alterknot.bounds import (
    arc_count_lower,
    constant_B,
    cusp_area_from_arcs,
    cusp_density_lower,
    derive_constant_A,
    derive_constants_thm29,
    finiteness_threshold_check,
    geometric_constants,
    main_bounds,
    slope_length_lower,
    surgery_bounds,
    verify_all,
)
from alterknot.errors import DerivationMismatch, DomainError

mp = mpmath.mp


def lobachevsky(theta):
    """-int_0^theta ln|2 sin t| dt by quadrature."""
    return -mpmath.quad(lambda t: mpmath.log(2 * mpmath.sin(t)), [0, theta])


@pytest.fixture(scope="module")
def oracle():
    with mp.workdps(40):
        v3 = 3 * lobachevsky(mpmath.pi / 3)
        v8 = 8 * lobachevsky(mpmath.pi / 4)
        A = 2 * mpmath.sqrt(3) / ((240 * mpmath.pi) ** 4 * 722 * 65143)
        return {"v3": float(v3), "v8": float(v8), "A": A}


class TestGeometricConstants:
    def test_against_quadrature(self, oracle):
        g = geometric_constants()
        assert g.v3 == pytest.approx(oracle["v3"], rel=1e-13)
        assert g.v8 == pytest.approx(oracle["v8"], rel=1e-13)
        assert str(g.v3).startswith("1.01494160640")
        assert str(g.v8).startswith("3.66386237670")

    def test_sanity_relations(self):
        g = geometric_constants()
        assert 4 * g.v3 > g.v8
        assert g.boroczky_3d == pytest.approx(0.8533, abs=1e-4)
        assert g.boroczky_2d == pytest.approx(3 / math.pi)


class TestArcCountLower:
    def test_twisted_fraction(self):
        k = 2 ** 0.25 / (120 * math.pi)
        value = arc_count_lower(k, math.log(2 / k), 1)
        assert value > 1 / 65143
        assert value < 1 / 65142

    def test_checkerboard_fraction(self):
        k = 2 ** 0.25 / math.pi
        assert arc_count_lower(k, math.log(2 / k), 1) > 0.083

    def test_small_d_limit(self):
        assert arc_count_lower(1, 1e-6, 1) == pytest.approx(0.5, abs=1e-4)

    def test_against_plain_float(self):
        k, d = 0.7, 1.3
        e = math.exp(d)
        plain = (k * e - 1) * math.pi / ((e - 1) * (math.sinh(d) + 2 * math.pi))
        assert arc_count_lower(k, d, 2) == pytest.approx(2 * plain, rel=1e-12)

    @pytest.mark.parametrize("k,d", [(0, 1), (1.5, 1), (0.5, 0), (0.5, -1)])
    def test_domain(self, k, d):
        with pytest.raises(DomainError):
            arc_count_lower(k, d, 1)

    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(0.05, 5))
    def test_increasing_in_k(self, k1, k2, d):
        if abs(k1 - k2) < 1e-9:
            return
        lo, hi = sorted((k1, k2))
        assert arc_count_lower(lo, d) < arc_count_lower(hi, d)

    def test_vanishes_for_large_d(self):
        values = [arc_count_lower(0.8, d) for d in (5, 10, 20, 40)]
        assert abs(values[-1]) < 1e-8
        assert all(abs(b) < abs(a) for a, b in zip(values, values[1:]))


class TestCuspAreaFromArcs:
    def test_values(self):
        assert cusp_area_from_arcs(1, 0) == pytest.approx(math.sqrt(3))
        assert cusp_area_from_arcs(0, 5.0) == 0
        assert cusp_area_from_arcs(2, math.log(2)) == pytest.approx(0.8660, abs=1e-4)

    def test_packing_cross_check(self):
        # p arcs give 2p disks of diameter e^-L; density 2 sqrt(3)/pi of their area
        p, L = 5, 0.7
        disks = 2 * p * math.pi * (math.exp(-L) / 2) ** 2
        assert cusp_area_from_arcs(p, L) == pytest.approx(disks * 2 * math.sqrt(3) / math.pi)


class TestConstantA:
    def test_value(self, oracle):
        A, trace = derive_constant_A()
        assert 2.278e-19 <= A <= 2.280e-19
        assert A == pytest.approx(float(oracle["A"]), rel=1e-14)
        assert all(e.passed for e in trace)

    def test_trace_contents(self):
        _, trace = derive_constant_A()
        by = {e.name: e for e in trace}
        assert by["arc_fraction"].relation == ">" and by["arc_fraction"].passed
        assert by["(240 pi)^4"].value == pytest.approx(3.2318e11, rel=1e-4)
        assert by["homotopic_arc_cap"].value == 722

    def test_B(self):
        assert constant_B() == pytest.approx(derive_constant_A()[0] / 3)
        assert constant_B() >= 7.593e-20


class TestBoundedCrossing:
    def test_fraction_and_coefficient(self):
        fraction, coefficient = derive_constants_thm29(1)
        assert fraction > 0.083 and fraction == pytest.approx(0.0830, abs=1e-4)
        assert 1.844e-4 <= coefficient <= 1.846e-4
        assert coefficient == pytest.approx(0.083 * math.sqrt(3) / (8 * math.pi ** 4))

    def test_factor(self):
        assert derive_constants_thm29(1).factor == pytest.approx(derive_constants_thm29(1).coefficient / 2)
        with pytest.raises(DomainError):
            derive_constants_thm29(0)


class TestMainBounds:
    def test_tw2(self):
        r = main_bounds(2)
        assert r.cusp_area_lower == 0
        assert r.cusp_area_upper == pytest.approx(17.3205, abs=1e-4)
        assert r.upper_strict

    def test_tw3(self):
        r = main_bounds(3)
        assert r.cusp_area_lower == pytest.approx(2.27898e-19, rel=1e-5)
        assert r.cusp_area_upper == pytest.approx(34.641, abs=1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            main_bounds(1)

    def test_exceptional_flag(self):
        assert main_bounds(2, exceptional=True).exceptional

    @given(st.integers(2, 10**6))
    def test_lower_below_upper(self, tw):
        r = main_bounds(tw)
        assert 0 <= r.cusp_area_lower <= r.cusp_area_upper
        assert r.slope_length_lower <= r.cusp_area_upper
        assert r.surgery_volume_lower <= r.surgery_volume_upper


class TestSlopeLength:
    def test_values(self):
        assert slope_length_lower(9, 1, 3) == 3

    @pytest.mark.parametrize("args", [(9, 1, 4), (0, 1, 1), (9, 0, 1), (9, 1, 0)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            slope_length_lower(*args)


class TestSurgery:
    def test_threshold(self):
        s = surgery_bounds(1.361e20)
        assert s.ell_min == pytest.approx(10.339, abs=1e-3)
        assert s.ell_min > 2 * math.pi
        plain = (1 - (2 * math.pi / s.ell_min) ** 2) ** 1.5
        assert s.fkp_factor == pytest.approx(plain, rel=1e-9)
        assert s.hyperbolic_guaranteed

    def test_small(self):
        assert surgery_bounds(4).fkp_factor is None
        assert not surgery_bounds(4).hyperbolic_guaranteed
        assert surgery_bounds(2).volume_lower == 0


class TestDensity:
    def test_tw3(self, oracle):
        assert cusp_density_lower(3) == pytest.approx(float(oracle["A"]) / (40 * oracle["v3"]), rel=1e-10)

    def test_limit(self, oracle):
        assert cusp_density_lower(1e9) == pytest.approx(float(oracle["A"]) / (20 * oracle["v3"]), rel=1e-6)

    def test_monotone_and_bounded(self):
        values = [cusp_density_lower(t) for t in (3, 4, 10, 1000)]
        assert values == sorted(values)
        assert values[-1] < math.sqrt(3) / (2 * geometric_constants().v3)

    def test_domain(self):
        with pytest.raises(DomainError):
            cusp_density_lower(2)


class TestVerification:
    def test_all_named_constants(self):
        traces = verify_all()
        assert set(traces) == set(bounds.NAMED_CONSTANTS)
        assert all(e.passed for entries in traces.values() for e in entries)

    def test_finiteness_chain(self):
        by = {e.name: e for e in finiteness_threshold_check()}
        assert by["slope_length"].value == pytest.approx(6.5004, abs=1e-4)
        assert by["epsilon"].value == pytest.approx(0.2168, abs=1e-4)
        assert "10 v3" in by["tw_from_volume"].statement

    def test_tampered_v3(self):
        with pytest.raises(DerivationMismatch, match="tw_from_volume"):
            finiteness_threshold_check(v3=1.02)

    def test_precision_env(self, monkeypatch):
        monkeypatch.setenv(bounds.PRECISION_ENV, "80")
        assert bounds.precision() == 80
        assert derive_constant_A()[0] == pytest.approx(2.27898e-19, rel=1e-5)
        monkeypatch.setenv(bounds.PRECISION_ENV, "5")
        with pytest.raises(DomainError):
            bounds.precision()

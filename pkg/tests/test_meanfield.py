import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lambertw

import vcspace as v
from vcspace.meanfield import theory_csv_rows

OMEGA = 0.5671432904097838  # root of pi * e^pi = 1


class TestPoisson:
    def test_zero_rate(self):
        assert v.poisson_pmf(0.0, 0) == 1.0
        assert v.poisson_pmf(0.0, 3) == 0.0

    def test_unit_rate(self):
        assert v.poisson_pmf(1.0, 1) == pytest.approx(math.exp(-1), abs=1e-12)

    def test_normalization(self):
        total = sum(v.poisson_pmf(4.0, k) for k in range(51))
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            v.poisson_pmf(-1.0, 0)


class TestFixedPoint:
    def test_zero_degrees(self):
        s = v.solve_fixed_point(0.0, 0.0)
        assert s.pi1 == s.pi2 == 1.0
        assert s.Q == pytest.approx(0.0, abs=1e-9)
        assert s.x == 0.0
        assert s.q_plus == 1.0
        assert s.q_zero == 0.0

    def test_symmetric_unit_degree(self):
        s = v.solve_fixed_point(1.0, 1.0)
        assert s.pi1 == pytest.approx(OMEGA, abs=1e-6)
        assert s.pi2 == pytest.approx(OMEGA, abs=1e-6)
        assert s.residual < 1e-12

    def test_symmetric_matches_lambert_w(self):
        for c in (0.5, 1.0, 2.0, 2.7, 4.0, 8.0, 20.0):
            s = v.solve_fixed_point(c, c)
            w = float(lambertw(c).real)
            assert s.pi1 == pytest.approx(w / c, abs=1e-9), c

    def test_side_swap_symmetry(self):
        a = v.solve_fixed_point(3.0, 1.2)
        b = v.solve_fixed_point(1.2, 3.0)
        assert a.pi1 == pytest.approx(b.pi2, abs=1e-12)
        assert a.x1 == pytest.approx(b.x2, abs=1e-12)
        assert a.q1_zero == pytest.approx(b.q2_zero, abs=1e-12)
        assert a.Q == pytest.approx(b.Q, abs=1e-12)
        assert a.x == pytest.approx(b.x, abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.0, 20.0), st.floats(0.0, 20.0))
    def test_identities_on_random_degrees(self, c1, c2):
        s = v.solve_fixed_point(c1, c2)
        # pi/q identity
        assert abs(s.pi1 - s.q1_plus) < 1e-12
        assert abs(s.pi2 - s.q2_plus) < 1e-12
        # the two coverage routes coincide
        assert abs(s.x - (1.0 - s.q_plus - s.q_zero / 2)) < 1e-10
        assert 0.0 <= s.x <= 1.0 or math.isclose(s.x, 0.0, abs_tol=1e-12)
        assert s.residual < 1e-12

    def test_rejects_negative_degree(self):
        with pytest.raises(ValueError):
            v.solve_fixed_point(-0.1, 1.0)

    def test_critical_percolation_point(self):
        # c1*c2 = 1 is the giant-component critical manifold; the damped map
        # alone converges sublinearly there, the polish must still land it
        for c1, c2 in ((1.0, 1.0), (0.5, 2.0), (2.0, 0.5)):
            s = v.solve_fixed_point(c1, c2)
            assert s.residual < 1e-12
            assert s.Q == pytest.approx(0.0, abs=1e-5)


class TestTheoryCurve:
    def test_equal_ratio_coverage_small_c(self):
        # x = 1 - pi - c*pi^2/2 at the symmetric fixed point
        s = v.solve_fixed_point(1.0, 1.0)
        assert s.x == pytest.approx(1 - OMEGA - OMEGA * OMEGA / 2, abs=1e-6)

    def test_plateau_4_2(self):
        rows = v.theory_curve("4:2", [12.0])
        assert rows[0].x == pytest.approx(1 / 3, abs=1e-4)

    def test_plateau_4_3(self):
        rows = v.theory_curve("4:3", [14.0])
        assert rows[0].x == pytest.approx(3 / 7, abs=1e-4)

    def test_plateau_4_1(self):
        rows = v.theory_curve("4:1", [6.0])
        assert rows[0].x == pytest.approx(0.2, abs=5e-4)

    def test_monotone_coverage(self):
        grid = [0.5 * k for k in range(1, 25)]
        xs = [s.x for s in v.theory_curve("4:2", grid)]
        assert all(b >= a - 1e-9 for a, b in zip(xs, xs[1:]))

    def test_csv_rows_shape(self):
        rows = theory_csv_rows("1:1", [1.0, 2.0])
        assert rows[0] == "ratio,c,c1,c2,Q,x,q_plus,q_zero,residual"
        assert len(rows) == 3
        first = rows[1].split(",")
        assert first[0] == "1:1"
        assert float(first[1]) == 1.0
        assert float(first[2]) == float(first[3]) == 1.0

    def test_side_degrees(self):
        c1, c2 = v.side_degrees("4:2", 4.0)
        assert c1 == pytest.approx(3.0)
        assert c2 == pytest.approx(6.0)
        assert 2 * c1 * c2 / (c1 + c2) == pytest.approx(4.0)


class TestClosedFormsAgainstSeries:
    """The closed forms are degree-distribution sums; evaluate those directly."""

    @pytest.mark.parametrize("c1,c2", [(1.0, 1.0), (0.7, 2.1), (3.0, 1.5),
                                       (4.5, 9.0)])
    def test_coverage_series(self, c1, c2):
        s = v.solve_fixed_point(c1, c2)
        kmax = 120
        x1 = (1.0
              - sum(v.poisson_pmf(c1, k) * (1 - s.pi2) ** k
                    for k in range(kmax))
              - sum(v.poisson_pmf(c1, k) * (1 - s.pi2) ** (k - 1) * k * s.pi2 / 2
                    for k in range(1, kmax)))
        assert s.x1 == pytest.approx(x1, abs=1e-10)

    @pytest.mark.parametrize("c1,c2", [(1.0, 1.0), (2.0, 2.0), (3.0, 1.5)])
    def test_giant_component_series(self, c1, c2):
        s = v.solve_fixed_point(c1, c2)
        kmax = 120
        q1 = 1.0 - sum(v.poisson_pmf(c1, k) * (1 - s.Q2) ** k
                       for k in range(kmax))
        assert s.Q1 == pytest.approx(q1, abs=1e-10)

    @pytest.mark.parametrize("c1,c2", [(1.0, 1.0), (2.0, 2.0), (3.0, 1.5)])
    def test_unfrozen_series(self, c1, c2):
        # exactly one uncovered backbone among the neighbors
        s = v.solve_fixed_point(c1, c2)
        kmax = 120
        q1_zero = sum(v.poisson_pmf(c1, k) * k * s.q2_plus
                      * (1 - s.q2_plus) ** (k - 1)
                      for k in range(1, kmax))
        assert s.q1_zero == pytest.approx(q1_zero, abs=1e-10)

"""Tests for circle arithmetic, cocycle lifting, and harmonic smoothing."""

import numpy as np
import pytest

from qpfactor import (
    PhaseAssignment,
    PhaseGauge,
    assign_phase,
    circular_distance,
    harmonic_smooth,
    lift_to_integers,
    load_phase_csv,
    save_phase_csv,
    winding,
    wrap_unit,
)
from qpfactor.circular import center_residue, nearest_landmark
from qpfactor.errors import (
    CoverageError,
    FormatError,
    InvalidArgumentError,
    LiftFailureError,
    SignalIOError,
)


class TestWrapUnit:
    def test_half_open_boundary(self):
        # the interval is (-1/2, 1/2]: +1/2 stays, -1/2 maps to +1/2
        assert wrap_unit(0.5) == 0.5
        assert wrap_unit(-0.5) == 0.5

    def test_scalar_values(self):
        assert wrap_unit(0.0) == 0.0
        assert wrap_unit(0.6) == pytest.approx(-0.4)
        assert wrap_unit(-0.6) == pytest.approx(0.4)
        assert wrap_unit(3.25) == pytest.approx(0.25)
        assert wrap_unit(-7.1) == pytest.approx(-0.1)

    def test_scalar_returns_float(self):
        assert isinstance(wrap_unit(1.3), float)

    def test_array_input(self):
        out = wrap_unit(np.array([0.0, 0.5, 1.0, 1.5, -0.25]))
        assert out == pytest.approx([0.0, 0.5, 0.0, 0.5, -0.25])

    def test_integer_shifts_are_invisible(self):
        x = np.linspace(-0.49, 0.5, 23)
        assert wrap_unit(x + 5.0) == pytest.approx(x)
        assert wrap_unit(x - 3.0) == pytest.approx(x)


class TestCircularDistance:
    def test_wraps_across_zero(self):
        assert circular_distance(0.9, 0.1) == pytest.approx(0.2)
        assert circular_distance(0.1, 0.9) == pytest.approx(0.2)

    def test_antipodal_is_half(self):
        assert circular_distance(0.0, 0.5) == 0.5
        assert circular_distance(0.25, 0.75) == 0.5

    def test_range(self):
        rng = np.random.default_rng(7)
        a = rng.uniform(-3, 3, size=200)
        b = rng.uniform(-3, 3, size=200)
        d = circular_distance(a, b)
        assert np.all(d >= 0.0)
        assert np.all(d <= 0.5)
        assert circular_distance(a, a) == pytest.approx(np.zeros(200))


class TestCenterResidue:
    def test_odd_prime(self):
        assert center_residue(46, 47) == -1
        assert center_residue(23, 47) == 23
        assert center_residue(24, 47) == -23
        assert center_residue(0, 47) == 0
        assert center_residue(-1, 47) == -1
        assert center_residue(47, 47) == 0

    def test_p_two_keeps_binary(self):
        assert center_residue(0, 2) == 0
        assert center_residue(1, 2) == 1
        assert center_residue(3, 2) == 1

    def test_magnitude_bound(self):
        for p in (2, 3, 5, 47, 997):
            for v in range(-2 * p, 2 * p + 1):
                r = center_residue(v, p)
                assert (r - v) % p == 0
                assert abs(r) <= p // 2 if p > 2 else r in (0, 1)


class TestLiftToIntegers:
    def test_centers_values(self):
        lifted = lift_to_integers({(0, 1): 46, (1, 2): 1}, 47, [])
        assert lifted == {(0, 1): -1, (1, 2): 1}

    def test_drops_zeros(self):
        lifted = lift_to_integers({(0, 1): 47, (1, 2): 0, (2, 3): 5}, 47, [])
        assert lifted == {(2, 3): 5}

    def test_valid_on_triangles(self):
        # z(1,2) - z(0,2) + z(0,1) = 1 - 2 + 1 = 0
        cocycle = {(0, 1): 1, (1, 2): 1, (0, 2): 2}
        lifted = lift_to_integers(cocycle, 47, [(0, 1, 2)])
        assert lifted == cocycle

    def test_small_prime_lift_fails(self):
        # valid mod 3 (1 - 2 + 1 = 0) but the centered lift sends 2 to -1,
        # and 1 - (-1) + 1 = 3 is not zero over the integers
        cocycle = {(0, 1): 1, (1, 2): 1, (0, 2): 2}
        with pytest.raises(LiftFailureError):
            lift_to_integers(cocycle, 3, [(0, 1, 2)])

    def test_triangles_missing_edges_count_as_zero(self):
        lifted = lift_to_integers({(0, 1): 1, (1, 2): 46}, 47, [(0, 1, 2)])
        assert lifted == {(0, 1): 1, (1, 2): -1}


class TestHarmonicSmooth:
    def test_four_cycle_spreads_discrepancy(self):
        z = {(0, 1): 0, (1, 2): 0, (2, 3): 0, (0, 3): 1}
        res = harmonic_smooth(z, 4)
        assert res.f == pytest.approx([0.0, 0.25, 0.5, 0.75])
        assert res.w[(0, 1)] == pytest.approx(0.25)
        assert res.w[(1, 2)] == pytest.approx(0.25)
        assert res.w[(2, 3)] == pytest.approx(0.25)
        assert res.w[(0, 3)] == pytest.approx(-0.25)
        assert res.normal_residual <= 1e-8

    def test_anchor_is_zero(self):
        z = {(0, 1): 2, (1, 2): -1}
        res = harmonic_smooth(z, 3)
        assert res.f[0] == 0.0

    def test_tree_fits_exactly(self):
        rng = np.random.default_rng(11)
        n = 40
        # random spanning tree: attach each vertex to an earlier one
        z = {}
        for b in range(1, n):
            a = int(rng.integers(0, b))
            z[(a, b)] = int(rng.integers(-5, 6))
        res = harmonic_smooth(z, n)
        for (a, b), val in z.items():
            assert res.f[b] - res.f[a] == pytest.approx(val, abs=1e-9)
            assert abs(res.w[(a, b)]) <= 1e-9
        assert res.normal_residual <= 1e-8

    def test_cycle_traversal_conservation(self):
        # around any cycle the potential differences telescope away, so the
        # traversal sum of w must cancel the traversal sum of z
        rng = np.random.default_rng(23)
        n = 100
        z = {(i, i + 1): int(rng.integers(-4, 5)) for i in range(n - 1)}
        z[(0, n - 1)] = int(rng.integers(-4, 5))
        res = harmonic_smooth(z, n)
        forward = [(i, i + 1) for i in range(n - 1)]
        sum_z = sum(z[e] for e in forward) - z[(0, n - 1)]
        sum_w = sum(res.w[e] for e in forward) - res.w[(0, n - 1)]
        assert abs(sum_w + sum_z) <= 1e-8

    def test_random_connected_graphs_converge(self):
        rng = np.random.default_rng(5)
        for trial in range(10):
            n = int(rng.integers(5, 60))
            z = {}
            for b in range(1, n):
                a = int(rng.integers(0, b))
                z[(a, b)] = int(rng.integers(-3, 4))
            extra = int(rng.integers(0, 3 * n))
            for _ in range(extra):
                a, b = sorted(rng.integers(0, n, size=2))
                if a != b:
                    z[(int(a), int(b))] = int(rng.integers(-3, 4))
            res = harmonic_smooth(z, n)
            assert res.normal_residual <= 1e-8
            assert res.f.shape == (n,)

    def test_single_vertex(self):
        res = harmonic_smooth({}, 1)
        assert res.f == pytest.approx([0.0])
        assert res.w == {}

    def test_disconnected_graph_raises(self):
        with pytest.raises(InvalidArgumentError, match="components"):
            harmonic_smooth({(0, 1): 1, (2, 3): 1}, 4)

    def test_unordered_edge_raises(self):
        with pytest.raises(InvalidArgumentError):
            harmonic_smooth({(1, 0): 1}, 2)

    def test_endpoint_out_of_range_raises(self):
        with pytest.raises(InvalidArgumentError):
            harmonic_smooth({(0, 5): 1}, 3)

    def test_no_vertices_raises(self):
        with pytest.raises(InvalidArgumentError):
            harmonic_smooth({}, 0)


class TestNearestLandmark:
    def test_basic_assignment(self):
        pts = np.array([[0.0], [1.0], [4.0], [5.0]])
        lms = np.array([[0.0], [5.0]])
        idx, dist = nearest_landmark(pts, lms)
        assert list(idx) == [0, 0, 1, 1]
        assert dist == pytest.approx([0.0, 1.0, 1.0, 0.0])

    def test_tie_prefers_first_index(self):
        idx, _ = nearest_landmark(np.array([[1.0]]), np.array([[0.0], [2.0]]))
        assert idx[0] == 0


class TestAssignPhase:
    def test_theta_from_nearest_landmark(self):
        f = np.array([0.0, 0.3, 1.7, -0.25])
        pts = np.array([[0.0], [1.0], [2.0], [3.0], [1.1]])
        lms = np.array([[0.0], [1.0], [2.0], [3.0]])
        pa = assign_phase(f, pts, lms, scale=0.5)
        assert pa.theta == pytest.approx([0.0, 0.3, 0.7, 0.75, 0.3])
        assert pa.scale == 0.5
        assert pa.gauge == PhaseGauge(0, 1)

    def test_uncovered_point_raises(self):
        f = np.array([0.0])
        pts = np.array([[0.0], [2.0]])
        lms = np.array([[0.0]])
        with pytest.raises(CoverageError):
            assign_phase(f, pts, lms, scale=0.5)

    def test_values_in_unit_interval(self):
        rng = np.random.default_rng(3)
        f = rng.normal(size=20) * 10
        lms = rng.normal(size=(20, 2))
        pa = assign_phase(f, lms, lms, scale=0.1)
        assert np.all(pa.theta >= 0.0)
        assert np.all(pa.theta < 1.0)


class TestPhaseAssignment:
    def test_rejects_out_of_range_theta(self):
        with pytest.raises(InvalidArgumentError):
            PhaseAssignment(np.array([0.2, 1.0]), 1.0, PhaseGauge(0))
        with pytest.raises(InvalidArgumentError):
            PhaseAssignment(np.array([-0.1]), 1.0, PhaseGauge(0))

    def test_flipped_negates_phase(self):
        pa = PhaseAssignment(np.array([0.0, 0.25, 0.5]), 1.0, PhaseGauge(4))
        fl = pa.flipped()
        assert fl.theta == pytest.approx([0.0, 0.75, 0.5])
        assert fl.gauge == PhaseGauge(4, -1)
        assert fl.scale == pa.scale

    def test_double_flip_is_identity(self):
        theta = np.array([0.0, 0.1, 0.85, 0.5])
        pa = PhaseAssignment(theta, 2.0, PhaseGauge(0))
        back = pa.flipped().flipped()
        assert back.theta == pytest.approx(theta)
        assert back.gauge.sign == 1

    def test_flip_of_tiny_value_stays_in_range(self):
        pa = PhaseAssignment(np.array([1e-18]), 1.0, PhaseGauge(0))
        fl = pa.flipped()
        assert 0.0 <= fl.theta[0] < 1.0


class TestWinding:
    def test_three_turns(self):
        theta = (np.arange(31) / 10.0) % 1.0
        assert winding(theta) == pytest.approx(3.0, abs=1e-12)

    def test_reversal_negates(self):
        theta = (np.arange(31) / 10.0) % 1.0
        assert winding(theta[::-1]) == pytest.approx(-3.0, abs=1e-12)

    def test_constant_sequence(self):
        assert winding(np.full(8, 0.4)) == 0.0

    def test_partial_turn(self):
        theta = np.array([0.0, 0.2, 0.4, 0.6])
        assert winding(theta) == pytest.approx(0.6)

    def test_needs_two_samples(self):
        with pytest.raises(InvalidArgumentError):
            winding(np.array([0.5]))


class TestPhaseCsv:
    def test_roundtrip_exact(self, tmp_path):
        path = tmp_path / "phase.csv"
        x = np.array([0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0])
        theta = np.array([0.0, 0.123456789012345678, 0.9999999, 0.5])
        save_phase_csv(x, theta, path)
        x2, t2 = load_phase_csv(path)
        assert np.array_equal(x, x2)
        assert np.array_equal(theta, t2)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n0,0.5\n")
        with pytest.raises(FormatError, match="header"):
            load_phase_csv(path)

    def test_wrong_column_count(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,theta\n0,0.5,9\n")
        with pytest.raises(FormatError, match="columns"):
            load_phase_csv(path)

    def test_non_numeric_field(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,theta\n0,spam\n")
        with pytest.raises(FormatError, match="non-numeric"):
            load_phase_csv(path)

    def test_no_data_rows(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,theta\n")
        with pytest.raises(FormatError, match="no data"):
            load_phase_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(SignalIOError):
            load_phase_csv(tmp_path / "nope.csv")

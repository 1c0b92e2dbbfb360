import csv
import math

import numpy as np
import pytest

from geodesics import (
    PathKind,
    integrate_geodesic,
    normalize_velocity,
    null_arrival,
    static_worldline,
)
from spacetime import ChartPoint, FlatFRW
from utils.errors import HorizonError, OutOfSegmentError, UnsupportedGeometryError


def test_static_worldline_in_flat_space(minkowski, constants):
    path = static_worldline(minkowski, ChartPoint(2.0, 1.0, 0.0, 0.0), (0.0, 5.0))
    position = path.position_at(3.0)[0]
    assert position[0] == pytest.approx(constants.c * 5.0)
    assert position[1] == 1.0
    assert path.geodesic


def test_static_observer_runs_slow_near_mass(schwarzschild, constants):
    r = 4.0 * schwarzschild.r_s
    path = static_worldline(schwarzschild, [0.0, r, math.pi / 2, 0.0], (0.0, 1.0))
    lapse = math.sqrt(1.0 - schwarzschild.r_s / r)
    assert path.position_at(1.0)[0, 0] == pytest.approx(constants.c / lapse)
    assert not path.geodesic


def test_frw_comoving_observer_is_geodesic(constants):
    universe = FlatFRW(0.5, 1.0, constants)
    path = static_worldline(universe, ChartPoint(10.0, 3.0, 0.0, 0.0), (0.0, 1.0))
    assert path.geodesic


def test_boosted_straight_line(minkowski):
    u0 = normalize_velocity(minkowski, [0.0, 0.0, 0.0, 0.0], [0.6, 0.0, 0.0])
    assert u0[0] == pytest.approx(1.25)
    path = integrate_geodesic(minkowski, [0.0, 0.0, 0.0, 0.0], u0, (0.0, 1.0e-6), n_samples=11)
    end = path.position_at(1.0e-6)[0]
    s = minkowski.constants.c * 1.0e-6
    assert end[0] == pytest.approx(1.25 * s, rel=1e-9)
    assert end[1] == pytest.approx(0.75 * s, rel=1e-9)
    assert path.norm_drift(minkowski) < 1e-10


def test_radial_fall_keeps_normalisation(schwarzschild):
    start = [0.0, 10.0 * schwarzschild.r_s, math.pi / 2, 0.0]
    u0 = normalize_velocity(schwarzschild, start, [0.0, 0.0, 0.0])
    path = integrate_geodesic(schwarzschild, start, u0, (0.0, 1.0e-4))
    assert path.norm_drift(schwarzschild) < 1e-8
    # falls inward, stays on its radial line
    assert path.points[-1, 1] < path.points[0, 1]
    np.testing.assert_allclose(path.points[:, 2], math.pi / 2)


def test_superluminal_velocity_rejected(minkowski):
    with pytest.raises(ValueError):
        normalize_velocity(minkowski, [0.0, 0.0, 0.0, 0.0], [1.0, 0.5, 0.0])


def test_null_velocity(minkowski):
    k = normalize_velocity(minkowski, [0.0, 0.0, 0.0, 0.0], [0.0, 2.0, 0.0], kind="null")
    np.testing.assert_allclose(k, [2.0, 0.0, 2.0, 0.0])
    with pytest.raises(ValueError):
        normalize_velocity(minkowski, [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0], kind=PathKind.NULL)


def test_unnormalised_initial_velocity_rejected(minkowski):
    with pytest.raises(ValueError):
        integrate_geodesic(minkowski, [0.0, 0.0, 0.0, 0.0], [1.0, 0.5, 0.0, 0.0], (0.0, 1.0))


def test_segment_bounds(minkowski):
    path = static_worldline(minkowski, [0.0, 0.0, 0.0, 0.0], (0.0, 1.0))
    with pytest.raises(OutOfSegmentError):
        path.position_at(2.0)


def test_csv_export(minkowski, tmp_path):
    u0 = normalize_velocity(minkowski, [0.0, 0.0, 0.0, 0.0], [0.1, 0.0, 0.0])
    path = integrate_geodesic(minkowski, [0.0, 0.0, 0.0, 0.0], u0, (0.0, 1.0), n_samples=5)
    target = tmp_path / "path.csv"
    path.to_csv(target)
    with open(target, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["tau", "x0", "x1", "x2", "x3", "u0", "u1", "u2", "u3"]
    assert len(rows) == 6
    assert float(rows[-1][0]) == pytest.approx(1.0)


def test_radial_null_arrival(schwarzschild):
    r_s = schwarzschild.r_s
    source = np.array([[0.0, 5.0 * r_s, 1.0, 0.0]])
    target = np.array([[6.0 * r_s, 1.0, 0.0]])
    arrival = null_arrival(schwarzschild, source, target)
    expected = schwarzschild.tortoise(6.0 * r_s) - schwarzschild.tortoise(5.0 * r_s)
    assert arrival[0] == pytest.approx(expected)
    # slower than light in flat coordinates
    assert arrival[0] > r_s


def test_null_transport_is_radial_only(schwarzschild):
    r_s = schwarzschild.r_s
    with pytest.raises(UnsupportedGeometryError):
        null_arrival(schwarzschild, np.array([[0.0, 5.0 * r_s, 1.0, 0.0]]), np.array([[5.0 * r_s, 1.5, 0.0]]))
    with pytest.raises(HorizonError):
        null_arrival(schwarzschild, np.array([[0.0, 0.5 * r_s, 1.0, 0.0]]), np.array([[5.0 * r_s, 1.0, 0.0]]))


def _circular_orbit(metric, r):
    mass = 0.5 * metric.r_s
    omega = math.sqrt(mass / r ** 3)
    start = [0.0, r, math.pi / 2, 0.0]
    return start, omega, normalize_velocity(metric, start, [0.0, 0.0, omega])


def test_circular_orbit_at_six_masses(schwarzschild, constants):
    r = 3.0 * schwarzschild.r_s
    start, omega, u0 = _circular_orbit(schwarzschild, r)
    # one revolution in x0 is 2 pi / omega; proper time runs slower by sqrt(1 - 3M/r)
    tau = 2.0 * math.pi / omega * math.sqrt(0.5) / constants.c
    path = integrate_geodesic(schwarzschild, start, u0, (0.0, tau))
    assert np.max(np.abs(path.points[:, 1] - r)) < 1e-6 * r
    np.testing.assert_allclose(path.velocities[:, 3] / path.velocities[:, 0], omega, rtol=1e-6)
    assert path.points[-1, 3] == pytest.approx(2.0 * math.pi, rel=1e-6)


def test_geodesic_retraces_itself_backwards(schwarzschild):
    r = 10.0 * schwarzschild.r_s
    start, omega, _ = _circular_orbit(schwarzschild, r)
    u0 = normalize_velocity(schwarzschild, start, [-0.05, 0.0, 0.6 * omega])
    tau = 1.0e-4
    forward = integrate_geodesic(schwarzschild, start, u0, (0.0, tau))
    end = forward.state_at_s(forward.c * tau)[0]
    backward = integrate_geodesic(schwarzschild, end[:4], -end[4:], (0.0, tau))
    returned = backward.state_at_s(backward.c * tau)[0]
    scale = np.array([forward.c * tau, r, 1.0, 1.0])
    np.testing.assert_allclose((returned[:4] - np.asarray(start)) / scale, 0.0, rtol=0, atol=1e-6)
    np.testing.assert_allclose(-returned[4:], u0, rtol=0, atol=1e-6 * np.max(np.abs(u0)))


def test_norm_holds_over_a_hundred_dynamical_times(schwarzschild, constants):
    r = 10.0 * schwarzschild.r_s
    start, omega, u0 = _circular_orbit(schwarzschild, r)
    tau = 100.0 / omega * math.sqrt(1.0 - 1.5 * schwarzschild.r_s / r) / constants.c
    path = integrate_geodesic(schwarzschild, start, u0, (0.0, tau))
    assert path.points[-1, 0] >= 100.0 / omega * (1.0 - 1e-6)
    assert path.norm_drift(schwarzschild) < 1e-8

import math

import numpy as np
import pytest

from geodesics import static_worldline
from regions import (
    RadiusProfile,
    build_solid,
    contains,
    contains_batch,
    critical_energy,
    cylinder,
    four_volume,
    horizon_check,
    horizon_radius,
    radar_coordinates,
    worldsheet_area,
)
from regions.sampling import integrate_box
from spacetime import DustBall
from utils.errors import HorizonError, OutOfSegmentError, UnsupportedGeometryError


def test_minkowski_radar_distance(minkowski, constants):
    path = static_worldline(minkowski, [0.0, 0.0, 0.0, 0.0], (0.0, 20.0 / constants.c))
    coords = radar_coordinates(minkowski, path, [5.0, 1.0, 0.0, 0.0], tolerance=1e-12)
    assert coords.radar_distance == pytest.approx(1.0, rel=1e-9)
    assert coords.tau_mid == pytest.approx(5.0 / constants.c, rel=1e-9)
    assert coords.tau_reception - coords.tau_emission == pytest.approx(2.0 / constants.c, rel=1e-9)


def test_schwarzschild_static_observer_radar(schwarzschild, constants):
    r_s = schwarzschild.r_s
    r0, r1 = 10.0 * r_s, 12.0 * r_s
    path = static_worldline(schwarzschild, [0.0, r0, 1.0, 0.0], (0.0, 60.0 * r_s / constants.c))
    coords = radar_coordinates(schwarzschild, path, [20.0 * r_s, r1, 1.0, 0.0], tolerance=1e-9)
    lapse = math.sqrt(1.0 - r_s / r0)
    expected = lapse * abs(schwarzschild.tortoise(r1) - schwarzschild.tortoise(r0))
    assert coords.radar_distance == pytest.approx(expected, rel=1e-9)


def test_event_outside_segment(minkowski, constants):
    path = static_worldline(minkowski, [0.0, 0.0, 0.0, 0.0], (0.0, 20.0 / constants.c))
    with pytest.raises(OutOfSegmentError):
        radar_coordinates(minkowski, path, [100.0, 1.0, 0.0, 0.0])


def test_event_inside_horizon(schwarzschild, constants):
    r_s = schwarzschild.r_s
    path = static_worldline(schwarzschild, [0.0, 10.0 * r_s, 1.0, 0.0], (0.0, 60.0 * r_s / constants.c))
    with pytest.raises(HorizonError):
        radar_coordinates(schwarzschild, path, [20.0 * r_s, 0.5 * r_s, 1.0, 0.0])


def test_cylinder_membership(minkowski):
    solid = cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], 1.0, 1.0e-8)
    # the segment starts one radar margin (1 m of c*t) after the worldline does
    assert contains(minkowski, solid, [2.5, 0.5, 0.0, 0.0])
    assert not contains(minkowski, solid, [2.5, 1.5, 0.0, 0.0])
    assert not contains(minkowski, solid, [0.5, 0.2, 0.0, 0.0])
    events = np.array([[2.5, 0.0, 0.5, 0.0], [2.5, 0.0, 0.0, 1.2], [9.0, 0.0, 0.0, 0.0]])
    np.testing.assert_array_equal(contains_batch(minkowski, solid, events), [True, False, False])


def test_literal_cones_halve_the_radius(minkowski):
    solid = cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], 1.0, 1.0e-8, paper_literal_cones=True)
    assert solid.radius_factor == 0.5
    assert contains(minkowski, solid, [2.0, 0.4, 0.0, 0.0])
    assert not contains(minkowski, solid, [2.0, 0.6, 0.0, 0.0])


def test_cylinder_four_volume(minkowski):
    r, t = 1.0, 1.0e-8
    solid = cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], r, t)
    estimate = four_volume(minkowski, solid, n_samples=40_000, seed=20240101)
    expected = 4.0 / 3.0 * math.pi * r ** 3 * t
    assert abs(estimate.estimate - expected) <= 4.0 * estimate.standard_error
    assert estimate.n_accepted > 0


@pytest.mark.slow
def test_cylinder_four_volume_to_one_percent(minkowski):
    solid = cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], 1.0, 1.0e-8)
    estimate = four_volume(minkowski, solid, n_samples=1_000_000, seed=20240101)
    expected = 4.0 / 3.0 * math.pi * 1.0e-8
    assert estimate.estimate == pytest.approx(expected, rel=0.01)


def test_four_volume_is_independent_of_workers(minkowski):
    solid = cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], 1.0, 1.0e-8)
    serial = four_volume(minkowski, solid, n_samples=6_000, seed=9, block_size=1_000, workers=1)
    threaded = four_volume(minkowski, solid, n_samples=6_000, seed=9, block_size=1_000, workers=3)
    assert serial.estimate == threaded.estimate
    assert serial.standard_error == threaded.standard_error


def test_box_integral_of_constant():
    def integrand(X):
        return {"volume": np.ones(len(X))}, np.ones(len(X), dtype=bool)

    result = integrate_box(np.zeros(4), np.array([1.0, 2.0, 3.0, 4.0]), integrand, 1_000, seed=1)
    assert result["volume"].estimate == pytest.approx(24.0)
    assert result["volume"].standard_error == 0.0


def test_profile_areas():
    assert RadiusProfile.constant(2.0, 3.0).area() == 6.0
    assert RadiusProfile.cone(2.0, 3.0).area() == 3.0
    table = RadiusProfile.table([0.0, 1.0, 2.0], [0.0, 2.0, 2.0])
    assert table.area() == pytest.approx(3.0)
    assert table.max_radius == 2.0
    assert table(0.5) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        RadiusProfile.table([0.0, 0.0], [1.0, 1.0])


def test_worldsheet_area_of_cone(minkowski):
    solid = build_solid(minkowski, [0.0, 0.0, 0.0, 0.0], RadiusProfile.cone(1.0, 1.0e-8))
    assert worldsheet_area(solid).area == pytest.approx(0.5e-8)


def test_critical_energy_and_horizon_radius(constants):
    r = 1.0e3
    energy = critical_energy(r, constants)
    assert energy == pytest.approx(r * constants.c ** 4 / (2.0 * constants.G))
    assert horizon_radius(energy, constants) == pytest.approx(r, rel=1e-12)
    with pytest.raises(ValueError):
        critical_energy(0.0, constants)


def test_horizon_check_on_collapsed_ball(constants):
    radius = 1.0e3
    mass = 1.5 * radius * constants.c ** 2 / (2.0 * constants.G)
    ball = DustBall(mass, radius, constants)
    solid = cylinder(ball, [0.0, 0.0, 0.0, 0.0], radius, 1.0e-6)
    check = horizon_check(ball, solid)
    assert not check.ok
    assert check.effective_radius == pytest.approx(ball.schwarzschild_radius, rel=1e-6)
    assert len(check.samples) == 33


def test_horizon_check_passes_in_flat_space(minkowski):
    check = horizon_check(minkowski, cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], 1.0, 1.0))
    assert check.ok
    assert check.effective_radius is None


def test_static_observer_radar_distance_is_stationary(schwarzschild, constants):
    r_s = schwarzschild.r_s
    r0, r1 = 20.0 * r_s, 25.0 * r_s
    path = static_worldline(schwarzschild, [0.0, r0, 1.0, 0.0], (0.0, 200.0 * r_s / constants.c))
    distances = [radar_coordinates(schwarzschild, path, [x0 * r_s, r1, 1.0, 0.0], tolerance=1e-7).radar_distance
                 for x0 in (50.0, 80.0, 110.0)]
    np.testing.assert_allclose(distances, distances[0], rtol=1e-8)
    # light is delayed by the mass: the echo comes back later than the chart separation suggests
    assert distances[0] > r1 - r0


def test_standard_error_falls_as_inverse_square_root(minkowski):
    solid = cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], 1.0, 1.0e-8)
    small = four_volume(minkowski, solid, n_samples=2_500, seed=3)
    large = four_volume(minkowski, solid, n_samples=40_000, seed=3)
    assert 3.5 < small.standard_error / large.standard_error < 4.5


def test_cone_four_volume(minkowski):
    r, t = 1.0, 1.0e-8
    solid = build_solid(minkowski, [0.0, 0.0, 0.0, 0.0], RadiusProfile.cone(r, t))
    estimate = four_volume(minkowski, solid, n_samples=40_000, seed=17)
    assert abs(estimate.estimate - math.pi * r ** 3 * t / 3.0) <= 4.0 * estimate.standard_error


def test_zero_radius_solid_is_empty(minkowski, constants):
    solid = cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], 0.0, 1.0e-8)
    volume = four_volume(minkowski, solid, n_samples=1_000, seed=1)
    assert volume.estimate == 0.0 and volume.standard_error == 0.0
    assert worldsheet_area(solid).area == 0.0
    assert not contains(minkowski, solid, [0.5e-8 * constants.c, 0.1, 0.0, 0.0])


def test_cylinder_volume_grows_with_radius_and_duration(minkowski):
    def volume(r, t):
        solid = cylinder(minkowski, [0.0, 0.0, 0.0, 0.0], r, t)
        return four_volume(minkowski, solid, n_samples=20_000, seed=5)

    ladder = [volume(1.0, 1.0e-8), volume(2.0, 1.0e-8), volume(2.0, 3.0e-8)]
    for lower, higher in zip(ladder, ladder[1:]):
        spread = 4.0 * math.hypot(lower.standard_error, higher.standard_error)
        assert higher.estimate - lower.estimate > spread


def test_exterior_four_volume_is_unsupported(schwarzschild, constants):
    r = 10.0 * schwarzschild.r_s
    solid = cylinder(schwarzschild, [0.0, r, math.pi / 2, 0.0], 1.0e3, 1.0e-5)
    with pytest.raises(UnsupportedGeometryError) as info:
        four_volume(schwarzschild, solid, n_samples=1_000, seed=1)
    assert info.value.module == "regions"
    # on-ray events still have radar coordinates
    assert contains(schwarzschild, solid, [constants.c * 1.0e-5, r + 500.0, math.pi / 2, 0.0])

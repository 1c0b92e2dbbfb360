import math

import numpy as np
import pytest

from spacetime import (
    FINITE_DIFFERENCE,
    ChartPoint,
    DustBall,
    FlatFRW,
    MetricKind,
    SchwarzschildInterior,
    christoffel_at,
    energy_density_si,
    enclosed_energy,
    make_metric,
    metric_at,
    ricci_scalar_at,
    ricci_tensor_at,
    stress_energy_at,
)
from geodesics import normalize_velocity
from utils.errors import EnergyPositivityError, SingularChartError, UnsupportedGeometryError


def test_minkowski_is_flat(minkowski):
    point = ChartPoint(1.0, 2.0, -3.0, 4.0)
    np.testing.assert_array_equal(metric_at(minkowski, point), np.diag([-1.0, 1.0, 1.0, 1.0]))
    assert not np.any(christoffel_at(minkowski, point))
    assert not np.any(ricci_tensor_at(minkowski, point))
    assert np.max(np.abs(ricci_tensor_at(minkowski, point, mode=FINITE_DIFFERENCE))) == 0.0


def test_schwarzschild_vacuum_by_finite_differences(schwarzschild):
    r = 10.0 * schwarzschild.r_s
    point = [0.0, r, 1.1, 0.3]
    ricci = ricci_tensor_at(schwarzschild, point, mode=FINITE_DIFFERENCE)
    mixed = np.linalg.inv(metric_at(schwarzschild, point)) @ ricci
    # tidal curvature scale r_s / r^3
    assert np.max(np.abs(mixed)) < 1e-6 * schwarzschild.r_s / r ** 3
    assert abs(ricci_scalar_at(schwarzschild, point, mode=FINITE_DIFFERENCE)) < 1e-6 * schwarzschild.r_s / r ** 3


def test_christoffel_modes_agree(schwarzschild):
    point = [0.0, 7.0 * schwarzschild.r_s, 0.9, 0.0]
    analytic = christoffel_at(schwarzschild, point)
    numeric = christoffel_at(schwarzschild, point, mode=FINITE_DIFFERENCE)
    np.testing.assert_allclose(numeric, analytic, rtol=1e-7, atol=1e-12 * np.max(np.abs(analytic)))
    # torsion-free
    np.testing.assert_array_equal(analytic, analytic.transpose(0, 2, 1))


def test_frw_dust_ricci_scalar(constants):
    universe = FlatFRW(2.0 / 3.0, 1.0, constants)
    point = ChartPoint(1000.0, 5.0, 0.0, -2.0)
    x0 = constants.c * 1000.0
    assert ricci_scalar_at(universe, point) == pytest.approx(4.0 / (3.0 * x0 ** 2), rel=1e-12)
    assert ricci_scalar_at(universe, point, mode=FINITE_DIFFERENCE) == pytest.approx(
        4.0 / (3.0 * x0 ** 2), rel=1e-6)


def test_frw_stress_energy_matches_source(constants):
    universe = FlatFRW(2.0 / 3.0, 1.0, constants)
    point = ChartPoint(1000.0, 0.0, 0.0, 0.0)
    tensor = stress_energy_at(universe, point)
    source = float(energy_density_si(universe, point.geometric(constants.c)[None, :])[0])
    assert tensor.energy_density == pytest.approx(source, rel=1e-9)
    # dust: trace is minus the energy density
    assert tensor.trace == pytest.approx(-source, rel=1e-9)


def test_interior_trace_matches_ricci_scalar(constants):
    star = SchwarzschildInterior(2.0e30, 7.0e8, constants)
    point = [0.0, 3.0e8, math.pi / 2, 0.0]
    tensor = stress_energy_at(star, point)
    scalar = ricci_scalar_at(star, point)
    # R = -8 pi G T / c^4
    assert scalar == pytest.approx(-8.0 * math.pi * constants.G * tensor.trace / constants.c ** 4, rel=1e-9)


def test_negative_vacuum_energy_rejected(minkowski):
    with pytest.raises(EnergyPositivityError):
        stress_energy_at(minkowski, [0.0, 0.0, 0.0, 0.0], vacuum_energy=-1.0)
    shifted = stress_energy_at(minkowski, [0.0, 0.0, 0.0, 0.0], vacuum_energy=2.0)
    assert shifted.energy_density == pytest.approx(2.0)
    assert shifted.lambda_adjustment == 2.0


def test_dust_ball_curvature_comes_from_source(constants):
    ball = DustBall(1.0e30, 1.0e4, constants)
    with pytest.raises(UnsupportedGeometryError):
        ricci_tensor_at(ball, [0.0, 0.0, 0.0, 0.0], mode=FINITE_DIFFERENCE)
    inside = ricci_scalar_at(ball, [0.0, 1.0, 0.0, 0.0])
    assert inside == pytest.approx(3.0 * ball.schwarzschild_radius / ball.radius ** 3)
    assert ricci_scalar_at(ball, [0.0, 2.0e4, 0.0, 0.0]) == 0.0


def test_enclosed_energy_of_dust_ball(constants):
    ball = DustBall(1.0e30, 1.0e4, constants)
    assert enclosed_energy(ball, [0.0, 0.0, 0.0, 0.0], 2.0e4) == pytest.approx(1.0e30 * constants.c ** 2, rel=1e-8)
    assert enclosed_energy(ball, [0.0, 0.0, 0.0, 0.0], 0.5e4) == pytest.approx(
        0.125 * 1.0e30 * constants.c ** 2, rel=1e-8)


def test_chart_domain(schwarzschild):
    with pytest.raises(SingularChartError):
        metric_at(schwarzschild, [0.0, 0.5 * schwarzschild.r_s, 1.0, 0.0])
    with pytest.raises(SingularChartError):
        metric_at(schwarzschild, [0.0, 10.0 * schwarzschild.r_s, 0.0, 0.0])
    with pytest.raises(SingularChartError):
        ChartPoint(float("nan"), 0.0, 0.0, 0.0)


def test_make_metric(constants):
    star = make_metric("schwarzschild_interior", constants, mass=2.0e30, radius=7.0e8)
    assert star.kind == MetricKind.SCHWARZSCHILD_INTERIOR
    assert star.describe()["parameters"]["compactness"] == pytest.approx(star.r_s / 7.0e8)
    with pytest.raises(ValueError):
        make_metric("kerr", constants)
    with pytest.raises(ValueError):
        # beyond the Buchdahl limit
        make_metric("schwarzschild_interior", constants, mass=2.0e30, radius=3000.0)


@pytest.mark.parametrize("r", [1.0e8, 3.0e8, 6.9e8])
def test_large_radius_star_points_are_regular(constants, r):
    star = SchwarzschildInterior(2.0e30, 7.0e8, constants)
    point = [0.0, r, math.pi / 2, 0.0]
    g = metric_at(star, point)
    assert g[0, 0] < 0 and g[3, 3] == pytest.approx(r * r, rel=1e-12)
    assert christoffel_at(star, point).shape == (4, 4, 4)
    assert stress_energy_at(star, point).energy_density > 0


def test_large_radius_exterior_point_is_regular(schwarzschild):
    point = [0.0, 1.0e8, math.pi / 2, 0.0]
    g = metric_at(schwarzschild, point)
    assert g[2, 2] == pytest.approx(1.0e16)
    u = normalize_velocity(schwarzschild, point, [0.0, 0.0, 1.0e-9])
    assert u @ g @ u == pytest.approx(-1.0, abs=1e-12)


def test_compact_star_curvature_matches_matter_trace(constants):
    # compactness r_s / R ~ 0.3: pressure is a sizeable share of the trace
    star = SchwarzschildInterior(2.0e30, 1.0e4, constants)
    point = np.array([0.0, 5.0e3, math.pi / 2, 0.0])
    from_metric = ricci_scalar_at(star, point, mode=FINITE_DIFFERENCE)
    trace_si = float(star.matter_trace_batch(point[None, :])[0]) * constants.c ** 4 / constants.G
    from_matter = -8.0 * math.pi * constants.G * trace_si / constants.c ** 4
    assert from_metric == pytest.approx(from_matter, rel=1e-6)
    assert float(star.ricci_scalar_batch(point[None, :])[0]) == pytest.approx(from_metric, rel=1e-6)


@pytest.mark.parametrize("exponent", [0.6, 2.0 / 3.0, 0.8])
def test_frw_curvature_matches_matter_trace(constants, exponent):
    universe = FlatFRW(exponent, 1.0, constants)
    point = ChartPoint(1000.0, 1.0e3, -2.0e3, 5.0e2)
    X = point.geometric(constants.c)[None, :]
    from_metric = ricci_scalar_at(universe, point, mode=FINITE_DIFFERENCE)
    from_matter = -8.0 * math.pi * float(universe.matter_trace_batch(X)[0])
    assert from_metric == pytest.approx(from_matter, rel=1e-6)
    assert float(universe.ricci_scalar_batch(X)[0]) == pytest.approx(from_metric, rel=1e-6)


def test_finite_difference_curvature_is_fourth_order(constants):
    universe = FlatFRW(2.0 / 3.0, 1.0, constants)
    point = ChartPoint(1000.0, 0.0, 0.0, 0.0)
    x0 = constants.c * 1000.0
    exact = ricci_scalar_at(universe, point)
    coarse = abs(ricci_scalar_at(universe, point, mode=FINITE_DIFFERENCE, h=0.02 * x0) - exact)
    fine = abs(ricci_scalar_at(universe, point, mode=FINITE_DIFFERENCE, h=0.01 * x0) - exact)
    assert fine > 0
    assert 14.0 < coarse / fine < 18.0

import math

import pytest

from units import (
    Dimension,
    PhysicalConstants,
    Quantity,
    UnitSystem,
    compton_schwarzschild_crossover,
    convert,
    planck_scale,
    to_geometric,
    to_si,
)
from utils.errors import InvalidConstantsError, UnknownDimensionError


def test_planck_time_matches_codata(constants):
    scale = planck_scale(constants)
    assert f"{scale.time:.3e}" == "5.391e-44"
    assert scale.length == pytest.approx(constants.c * scale.time, rel=1e-15)
    assert f"{scale.length:.3e}" == "1.616e-35"


def test_constants_carry_derived_planck_scale(constants):
    assert constants.planck_time == pytest.approx(planck_scale(constants).time, rel=1e-15)
    assert constants.schwarzschild_factor == pytest.approx(2.0 * constants.G / constants.c ** 2)


def test_overrides_change_planck_scale():
    doubled = PhysicalConstants.with_overrides({"hbar": 2.0 * PhysicalConstants().hbar})
    assert doubled.planck_time == pytest.approx(math.sqrt(2.0) * PhysicalConstants().planck_time, rel=1e-12)


@pytest.mark.parametrize("overrides", [{"hbar": -1.0}, {"G": 0.0}, {"c": float("nan")}])
def test_non_positive_constants_rejected(overrides):
    with pytest.raises(InvalidConstantsError):
        PhysicalConstants.with_overrides(overrides)


def test_unknown_constant_rejected():
    with pytest.raises(InvalidConstantsError):
        PhysicalConstants.with_overrides({"k_B": 1.0})


def test_constants_file_yaml(tmp_path):
    path = tmp_path / "constants.yaml"
    path.write_text("c: 1.0\nG: 1.0\nhbar: 1.0\n", encoding="utf-8")
    loaded = PhysicalConstants.from_file(path)
    assert loaded.planck_time == pytest.approx(1.0)
    assert loaded.planck_length == pytest.approx(1.0)


def test_constants_file_must_be_mapping(tmp_path):
    path = tmp_path / "constants.json"
    path.write_text("[1, 2, 3]", encoding="utf-8")
    with pytest.raises(InvalidConstantsError):
        PhysicalConstants.from_file(path)


def test_geometric_conversion_factors(constants):
    # one second of time is c meters, one joule is G/c^4 meters
    assert to_geometric(1.0, "time", constants) == pytest.approx(constants.c)
    assert to_geometric(1.0, Dimension.ENERGY, constants) == pytest.approx(constants.G / constants.c ** 4)
    solar_mass = 1.989e30
    assert to_si(to_geometric(solar_mass, "mass", constants), "mass", constants) == pytest.approx(solar_mass)


def test_quantity_convert(constants):
    energy = Quantity.of(1.0e44, "energy")
    geometric = convert(energy, UnitSystem.GEOMETRIC, constants)
    assert geometric.system == UnitSystem.GEOMETRIC
    assert geometric.value == pytest.approx(1.0e44 * constants.G / constants.c ** 4)
    assert convert(geometric, "si", constants).value == pytest.approx(1.0e44)


def test_unknown_dimension_tag():
    with pytest.raises(UnknownDimensionError):
        to_geometric(1.0, "luminosity")
    with pytest.raises(UnknownDimensionError):
        Quantity.of(1.0, "luminosity")


def test_compton_equals_schwarzschild_at_crossover(constants):
    m = compton_schwarzschild_crossover(constants)
    compton = 2.0 * math.pi * constants.hbar / (m * constants.c)
    schwarzschild = 2.0 * m * constants.G / constants.c ** 2
    assert compton == pytest.approx(schwarzschild, rel=1e-12)

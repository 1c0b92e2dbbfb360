"""
Physical constants, the Planck scale and SI <-> geometric unit conversion.

Geometric units set G = c = 1 and keep lengths in meters: times become
``c*t`` and energies ``G*E/c^4`` (both meters). Curvature keeps its m^-2.
"""
import json
import math
import logging
from enum import Enum
from pathlib import Path
from functools import lru_cache
from typing import Dict, NamedTuple, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import constants as codata

from utils.errors import InvalidConstantsError, UnknownDimensionError

logger = logging.getLogger(__name__)


class PhysicalConstants(BaseModel):
    """hbar [J s], G [m^3 kg^-1 s^-2], c [m/s] and the derived Planck scale"""

    model_config = ConfigDict(frozen=True)

    hbar: float = codata.hbar
    G: float = codata.G
    c: float = codata.c
    planck_time: float = 0.0
    planck_length: float = 0.0

    @model_validator(mode="before")
    @classmethod
    def _derive_planck_scale(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        hbar = data.get("hbar", codata.hbar)
        G = data.get("G", codata.G)
        c = data.get("c", codata.c)
        for name, value in (("hbar", hbar), ("G", G), ("c", c)):
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise InvalidConstantsError(f"constant {name} must be a positive finite number, got {value!r}")
        t_p = math.sqrt(hbar * G / c ** 5)
        data["planck_time"] = t_p
        data["planck_length"] = c * t_p
        return data

    @property
    def schwarzschild_factor(self) -> float:
        """2G/c^2: Schwarzschild radius per kilogram [m/kg]"""
        return 2.0 * self.G / self.c ** 2

    def echo(self) -> Dict[str, float]:
        return {"hbar": self.hbar, "G": self.G, "c": self.c,
                "planck_time": self.planck_time, "planck_length": self.planck_length}

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "PhysicalConstants":
        """Load an override block ({hbar, G, c}, any subset) from JSON or YAML"""
        path = Path(path)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                if path.suffix.lower() in ('.yaml', '.yml'):
                    data = yaml.safe_load(f) or {}
                else:
                    data = json.load(f)
        except (OSError, ValueError, yaml.YAMLError) as e:
            raise InvalidConstantsError(f"could not read constants file {path}: {e}")
        if not isinstance(data, dict):
            raise InvalidConstantsError(f"constants file {path} must hold a mapping")
        return cls.with_overrides(data)

    @classmethod
    def with_overrides(cls, overrides: Optional[Dict[str, float]] = None,
                       base: Optional["PhysicalConstants"] = None) -> "PhysicalConstants":
        base = base or cls()
        values = {"hbar": base.hbar, "G": base.G, "c": base.c}
        for key, value in (overrides or {}).items():
            if key not in values:
                raise InvalidConstantsError(f"unknown constant '{key}' (expected hbar, G, c)")
            values[key] = value
        return cls(**values)


class PlanckScale(NamedTuple):
    length: float
    time: float


class UnitSystem(str, Enum):
    SI = "si"
    GEOMETRIC = "geometric"


class Dimension(str, Enum):
    LENGTH = "length"
    TIME = "time"
    ENERGY = "energy"
    MASS = "mass"
    CURVATURE = "curvature"
    FOUR_VOLUME = "four-volume"
    WORLDSHEET_AREA = "worldsheet-area"
    ENERGY_DENSITY = "energy-density"
    MASS_DENSITY = "mass-density"


class Quantity(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    dimension: Dimension
    system: UnitSystem = UnitSystem.SI

    @classmethod
    def of(cls, value: float, dimension: Union[Dimension, str],
           system: Union[UnitSystem, str] = UnitSystem.SI) -> "Quantity":
        """Build a quantity from a raw dimension tag, rejecting unknown tags"""
        return cls(value=value, dimension=_as_dimension(dimension), system=UnitSystem(system))


@lru_cache(maxsize=1)
def default_constants() -> PhysicalConstants:
    """CODATA constants, or the file named by QGL_CONSTANTS when configured"""
    from config import config

    if config.has_constants_override():
        logger.debug(f"Loading constants override from {config.constants_file}")
        return PhysicalConstants.from_file(config.constants_file)
    return PhysicalConstants()


def planck_scale(constants: Optional[PhysicalConstants] = None) -> PlanckScale:
    """t_P = sqrt(hbar G / c^5), l_P = c t_P"""
    constants = constants or default_constants()
    for name in ("hbar", "G", "c"):
        value = getattr(constants, name)
        if value <= 0:
            raise InvalidConstantsError(f"constant {name} must be positive")
    t_p = math.sqrt(constants.hbar * constants.G / constants.c ** 5)
    return PlanckScale(length=constants.c * t_p, time=t_p)


def compton_schwarzschild_crossover(constants: Optional[PhysicalConstants] = None) -> float:
    """Mass [kg] whose Compton wavelength 2*pi*hbar/(m c) equals its Schwarzschild radius 2 m G/c^2"""
    constants = constants or default_constants()
    return math.sqrt(math.pi * constants.hbar * constants.c / constants.G)


def geometric_factor(dimension: Union[Dimension, str], constants: Optional[PhysicalConstants] = None) -> float:
    """Multiplier taking an SI value of ``dimension`` into geometric units"""
    constants = constants or default_constants()
    dimension = _as_dimension(dimension)
    c, G = constants.c, constants.G
    factors = {
        Dimension.LENGTH: 1.0,
        Dimension.TIME: c,
        Dimension.ENERGY: G / c ** 4,
        Dimension.MASS: G / c ** 2,
        Dimension.CURVATURE: 1.0,
        Dimension.FOUR_VOLUME: c,
        Dimension.WORLDSHEET_AREA: c,
        Dimension.ENERGY_DENSITY: G / c ** 4,
        Dimension.MASS_DENSITY: G / c ** 2,
    }
    return factors[dimension]


def convert(quantity: Quantity, target: Union[UnitSystem, str],
            constants: Optional[PhysicalConstants] = None) -> Quantity:
    """Convert a quantity between SI and geometric units"""
    target = UnitSystem(target)
    if quantity.system == target:
        return quantity
    factor = geometric_factor(quantity.dimension, constants)
    if target == UnitSystem.GEOMETRIC:
        value = quantity.value * factor
    else:
        value = quantity.value / factor
    return Quantity(value=value, dimension=quantity.dimension, system=target)


def to_geometric(value: float, dimension: Union[Dimension, str],
                 constants: Optional[PhysicalConstants] = None) -> float:
    return value * geometric_factor(dimension, constants)


def to_si(value: float, dimension: Union[Dimension, str],
          constants: Optional[PhysicalConstants] = None) -> float:
    return value / geometric_factor(dimension, constants)


def _as_dimension(tag: Union[Dimension, str]) -> Dimension:
    try:
        return Dimension(tag)
    except ValueError:
        valid = ", ".join(d.value for d in Dimension)
        raise UnknownDimensionError(f"unknown dimension tag '{tag}' (expected one of: {valid})")


__all__ = [
    "PhysicalConstants",
    "PlanckScale",
    "UnitSystem",
    "Dimension",
    "Quantity",
    "default_constants",
    "planck_scale",
    "compton_schwarzschild_crossover",
    "geometric_factor",
    "convert",
    "to_geometric",
    "to_si",
]

"""
Cosmological estimates: events since the big bang and how a saturating
event budget divides between spatial cells and clock ticks.
"""
import logging
from typing import Dict, Optional

from scipy import constants as codata

from units import PhysicalConstants, default_constants, planck_scale

logger = logging.getLogger(__name__)

WIEN_DISPLACEMENT = codata.physical_constants["Wien wavelength displacement law constant"][0]
CMB_TEMPERATURE = 2.7255


def _positive(name: str, value: float) -> None:
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")


def ops_since_big_bang(T: float, constants: Optional[PhysicalConstants] = None) -> float:
    """(T/t_P)^2 elementary events in a universe of age T [s]"""
    _positive("age", T)
    t_p = planck_scale(constants).time
    return (T / t_p) ** 2


def resolution_tradeoff(R: float, T: float, ticks_per_clock: float,
                        constants: Optional[PhysicalConstants] = None) -> Dict[str, float]:
    """
    Split the saturating budget (T/t_P)^2 into ticks per clock and spatial
    cells of a region of size R. One tick per clock gives the finest
    spatial resolution; more ticks trade space for time.
    """
    _positive("radius", R)
    _positive("age", T)
    if ticks_per_clock < 1:
        raise ValueError("each clock ticks at least once")
    budget = ops_since_big_bang(T, constants)
    if ticks_per_clock > budget:
        raise ValueError(f"{ticks_per_clock:.3e} ticks exceed the event budget {budget:.3e}")
    cells = budget / ticks_per_clock
    return {
        "events": budget,
        "cells": cells,
        "ticks_per_clock": ticks_per_clock,
        "tick_spacing": T / ticks_per_clock,
        "spatial_resolution": R / cells ** (1.0 / 3.0),
    }


def uniform_distribution_stats(R: float, T: float,
                               constants: Optional[PhysicalConstants] = None) -> Dict[str, float]:
    """Cells, ticks and resolutions when events spread uniformly through space and time"""
    _positive("radius", R)
    _positive("age", T)
    constants = constants or default_constants()
    scale = planck_scale(constants)
    tick_spacing = (T * scale.time) ** 0.5
    return {
        "cells": (R / scale.length) ** 1.5,
        "ticks_per_clock": (T / scale.time) ** 0.5,
        "tick_spacing": tick_spacing,
        "spatial_resolution": constants.c * tick_spacing,
    }


def background_radiation_resolution(temperature: float = CMB_TEMPERATURE) -> float:
    """Peak wavelength [m] of black-body radiation at ``temperature`` [K] (Wien)"""
    _positive("temperature", temperature)
    return WIEN_DISPLACEMENT / temperature

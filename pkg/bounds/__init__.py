"""
Bounds on the number of elementary events ("ticks and clicks") in a
region of spacetime, and their holographic and cosmological companions.

Event counts are dimensionless; energies in J, times in s, lengths in m,
world-sheet areas in m*s and curvature integrals in m*s.
"""
import math
import logging
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field

from bounds.cosmology import (
    CMB_TEMPERATURE,
    background_radiation_resolution,
    ops_since_big_bang,
    resolution_tradeoff,
    uniform_distribution_stats,
)
from config import config
from regions import (
    CovariantSolid,
    MonteCarloEstimate,
    WorldSheet,
    critical_energy,
    horizon_check,
    integrate_over_solid,
    worldsheet_area,
)
from spacetime import MetricField
from units import PhysicalConstants, default_constants, planck_scale
from utils.errors import EnergyPositivityError

logger = logging.getLogger(__name__)


class BoundMethod(str, Enum):
    EQ1_GEOMETRIC = "eq1_geometric"
    EQ2_STRESS_ENERGY = "eq2_stress_energy"
    EQ3_CURVATURE = "eq3_curvature"
    ML_DIRECT = "ml_direct"


class BoundReport(BaseModel):
    """An event bound with its inputs echoed"""

    n_max_events: float = Field(ge=0)
    method: BoundMethod
    inputs: Dict[str, Any] = Field(default_factory=dict)
    region: Optional[str] = None
    standard_error: Optional[float] = None
    saturation_ratio: Optional[float] = None
    curvature_integral: Optional[float] = None
    wavelength: Optional[float] = None
    monte_carlo: Optional[Dict[str, Any]] = None
    flags: List[str] = Field(default_factory=list)


class CurvatureLimit(BaseModel):
    """int R dV against 4 pi times the world-sheet area"""

    curvature_integral: float
    standard_error: float
    limit: float
    ratio: float
    ratio_error: float
    status: str
    region: Optional[str] = None


class SolidBounds(BaseModel):
    """Every region bound of one solid, from a single shared sample set"""

    geometric: BoundReport
    stress_energy: BoundReport
    curvature: BoundReport
    curvature_limit: CurvatureLimit
    four_volume: Dict[str, Any]
    horizon: Dict[str, Any]
    consistency_sigma: float


# ----------------------------------------------------------------------
# closed-form bounds
# ----------------------------------------------------------------------

def ml_event_bound(E: float, t: float, constants: Optional[PhysicalConstants] = None) -> float:
    """Margolus-Levitin count 2 E t / (pi hbar) for energy E above the ground state"""
    if E < 0:
        raise EnergyPositivityError(
            f"energy above the ground state must be non-negative, got {E!r} J; "
            f"apply the vacuum-energy adjustment first", module="bounds")
    if t < 0:
        raise ValueError("duration must be non-negative")
    constants = constants or default_constants()
    return 2.0 * E * t / (math.pi * constants.hbar)


def qgl_bound(r: Optional[float] = None, t: Optional[float] = None,
              area: Union[float, WorldSheet, None] = None,
              constants: Optional[PhysicalConstants] = None) -> float:
    """r t / (pi l_P t_P), or A / (pi l_P t_P) for a world-sheet area A [m s]"""
    if isinstance(area, WorldSheet):
        area = area.area
    if area is None:
        if r is None or t is None:
            raise ValueError("give either r and t or a world-sheet area")
        if r < 0 or t < 0:
            raise ValueError("radius and duration must be non-negative")
        area = r * t
    elif area < 0:
        raise ValueError("world-sheet area must be non-negative")
    scale = planck_scale(constants)
    return area / (math.pi * scale.length * scale.time)


def holographic_quanta_bound(r: float, constants: Optional[PhysicalConstants] = None) -> float:
    """Quanta of wavelength <= 2r that fit in a sphere of radius r: r^2 / (pi l_P^2)"""
    if r <= 0:
        raise ValueError("radius must be positive")
    return r * r / (math.pi * planck_scale(constants).length ** 2)


def covariant_entropy_bound(area: float, constants: Optional[PhysicalConstants] = None) -> float:
    """Bits on a light sheet of area A [m^2]: A / (4 ln2 l_P^2)"""
    if area < 0:
        raise ValueError("area must be non-negative")
    return area / (4.0 * math.log(2.0) * planck_scale(constants).length ** 2)


def spacelike_ops_bound(area: float, constants: Optional[PhysicalConstants] = None) -> float:
    """Events projected onto a spacelike two-surface of area A [m^2]: A / (pi l_P^2)"""
    if area < 0:
        raise ValueError("area must be non-negative")
    return area / (math.pi * planck_scale(constants).length ** 2)


def ops_exceed_bits(ops: float, bits: float) -> bool:
    """Whether a computation's event count is at least its count of participating bits"""
    if ops < 0 or bits < 0:
        raise ValueError("counts must be non-negative")
    return ops >= bits


# ----------------------------------------------------------------------
# region bounds
# ----------------------------------------------------------------------

def _trace_channel(metric: MetricField, vacuum_energy: float):
    c, G = metric.constants.c, metric.constants.G
    to_si = c ** 4 / G

    def trace(X):
        eps, pressure = metric.matter_batch(X)
        eps_si = to_si * eps + vacuum_energy
        trace_si = to_si * (-eps + 3.0 * pressure) - 4.0 * vacuum_energy
        scale = max(float(np.max(np.abs(trace_si), initial=0.0)),
                    float(np.max(np.abs(eps_si), initial=0.0)))
        tolerance = config.positivity_rtol * scale
        bad = (trace_si > tolerance) | (eps_si < -tolerance)
        if np.any(bad):
            where = X[np.argmax(bad)]
            hint = "" if vacuum_energy else "; supply a vacuum-energy (cosmological constant) offset"
            raise EnergyPositivityError(
                f"positive stress-energy trace {float(trace_si[np.argmax(bad)]):.6e} J/m^3 at "
                f"{where.tolist()}: the ground-state energy must be zero or positive{hint}",
                module="bounds")
        return trace_si

    return trace


def _region_integrals(metric: MetricField, solid: CovariantSolid, n_samples: Optional[int],
                      seed: int, vacuum_energy: float, **kwargs) -> Dict[str, MonteCarloEstimate]:
    channels = {
        "trace": _trace_channel(metric, vacuum_energy),
        "curvature": metric.ricci_scalar_batch,
    }
    return integrate_over_solid(metric, solid, channels, n_samples=n_samples, seed=seed, **kwargs)


def _mc_echo(estimate: MonteCarloEstimate) -> Dict[str, Any]:
    return {"seed": estimate.seed, "n_samples": estimate.n_samples, "n_accepted": estimate.n_accepted}


def _solid_inputs(metric: MetricField, solid: CovariantSolid) -> Dict[str, Any]:
    return {"metric": metric.describe(), "solid": solid.describe(),
            "r": solid.covariant_radius, "t": solid.duration}


def _stress_energy_report(metric, solid, trace: MonteCarloEstimate, vacuum_energy: float,
                          reference: float) -> BoundReport:
    factor = -2.0 / (math.pi * metric.constants.hbar)
    count = factor * trace.estimate
    inputs = _solid_inputs(metric, solid)
    inputs["vacuum_energy"] = vacuum_energy
    return BoundReport(
        n_max_events=max(count, 0.0),
        method=BoundMethod.EQ2_STRESS_ENERGY,
        inputs=inputs,
        region=solid.label or None,
        standard_error=abs(factor) * trace.standard_error,
        saturation_ratio=count / reference if reference > 0 else None,
        monte_carlo=_mc_echo(trace),
    )


def _curvature_report(metric, solid, curvature: MonteCarloEstimate, reference: float) -> BoundReport:
    c, G, hbar = metric.constants.c, metric.constants.G, metric.constants.hbar
    factor = c ** 4 / (4.0 * math.pi ** 2 * hbar * G)
    count = factor * curvature.estimate
    return BoundReport(
        n_max_events=max(count, 0.0),
        method=BoundMethod.EQ3_CURVATURE,
        inputs=_solid_inputs(metric, solid),
        region=solid.label or None,
        standard_error=factor * curvature.standard_error,
        saturation_ratio=count / reference if reference > 0 else None,
        curvature_integral=curvature.estimate,
        monte_carlo=_mc_echo(curvature),
    )


def _curvature_limit(solid: CovariantSolid, curvature: MonteCarloEstimate,
                     area: float) -> CurvatureLimit:
    limit = 4.0 * math.pi * area
    if limit > 0:
        ratio = curvature.estimate / limit
        ratio_error = curvature.standard_error / limit
    else:
        ratio = ratio_error = 0.0
    tolerance = config.saturation_tolerance
    if ratio > 1.0 + tolerance:
        status = "violated"
    elif ratio >= 1.0 - tolerance:
        status = "saturated"
    else:
        status = "ok"
    return CurvatureLimit(curvature_integral=curvature.estimate, standard_error=curvature.standard_error,
                          limit=limit, ratio=ratio, ratio_error=ratio_error, status=status,
                          region=solid.label or None)


def covariant_ml_bound(metric: MetricField, solid: CovariantSolid, n_samples: Optional[int] = None,
                       seed: int = 0, vacuum_energy: float = 0.0, **kwargs) -> BoundReport:
    """(-2 / pi hbar) int T^a_a dV over the solid"""
    integrals = integrate_over_solid(metric, solid, {"trace": _trace_channel(metric, vacuum_energy)},
                                     n_samples=n_samples, seed=seed, **kwargs)
    reference = qgl_bound(area=worldsheet_area(solid), constants=metric.constants)
    return _stress_energy_report(metric, solid, integrals["trace"], vacuum_energy, reference)


def curvature_event_bound(metric: MetricField, solid: CovariantSolid, n_samples: Optional[int] = None,
                          seed: int = 0, **kwargs) -> BoundReport:
    """(c^4 / 4 pi^2 hbar G) int R dV over the solid"""
    integrals = integrate_over_solid(metric, solid, {"curvature": metric.ricci_scalar_batch},
                                     n_samples=n_samples, seed=seed, **kwargs)
    reference = qgl_bound(area=worldsheet_area(solid), constants=metric.constants)
    return _curvature_report(metric, solid, integrals["curvature"], reference)


def curvature_limit_check(metric: MetricField, solid: CovariantSolid, n_samples: Optional[int] = None,
                          seed: int = 0, **kwargs) -> CurvatureLimit:
    """Ratio of int R dV to 4 pi A; 'saturated' within the saturation tolerance of 1"""
    integrals = integrate_over_solid(metric, solid, {"curvature": metric.ricci_scalar_batch},
                                     n_samples=n_samples, seed=seed, **kwargs)
    return _curvature_limit(solid, integrals["curvature"], worldsheet_area(solid).area)


def evaluate_solid(metric: MetricField, solid: CovariantSolid, n_samples: Optional[int] = None,
                   seed: int = 0, vacuum_energy: float = 0.0, **kwargs) -> SolidBounds:
    """
    Geometric, stress-energy and curvature bounds plus the curvature limit for
    one solid. When the solid hides a horizon the geometric bound uses the
    horizon radius instead of the covariant radius.
    """
    horizon = horizon_check(metric, solid)
    sheet = worldsheet_area(solid)
    flags = []
    if horizon.ok:
        geometric_count = qgl_bound(area=sheet, constants=metric.constants)
        r_used = solid.covariant_radius
    else:
        r_used = horizon.effective_radius
        geometric_count = qgl_bound(r_used, solid.duration, constants=metric.constants)
        flags.append("horizon")

    integrals = _region_integrals(metric, solid, n_samples, seed, vacuum_energy, **kwargs)
    stress = _stress_energy_report(metric, solid, integrals["trace"], vacuum_energy, geometric_count)
    curvature = _curvature_report(metric, solid, integrals["curvature"], geometric_count)
    limit = _curvature_limit(solid, integrals["curvature"], sheet.area)

    geometric = BoundReport(
        n_max_events=geometric_count,
        method=BoundMethod.EQ1_GEOMETRIC,
        inputs={"r": r_used, "t": solid.duration, "A": sheet.area},
        region=solid.label or None,
        saturation_ratio=1.0,
        flags=flags,
    )

    combined = math.hypot(stress.standard_error or 0.0, curvature.standard_error or 0.0)
    difference = abs(stress.n_max_events - curvature.n_max_events)
    sigma = difference / combined if combined > 0 else (0.0 if difference == 0 else math.inf)
    if sigma > config.mc_sigma and not vacuum_energy:
        logger.warning(f"Stress-energy and curvature counts differ by {sigma:.1f} standard errors for '{solid.label}'")

    return SolidBounds(
        geometric=geometric,
        stress_energy=stress,
        curvature=curvature,
        curvature_limit=limit,
        four_volume=integrals["volume"].to_dict(),
        horizon=horizon.to_dict(),
        consistency_sigma=sigma,
    )


def compactness_saturation_fit(compactness: Sequence[float], ratios: Sequence[float],
                               errors: Optional[Sequence[float]] = None) -> Dict[str, Any]:
    """Straight-line fit of curvature-limit ratios against r_s/r, extrapolated to r_s/r = 1"""
    x = np.asarray(compactness, dtype=float)
    y = np.asarray(ratios, dtype=float)
    if len(x) < 2 or len(x) != len(y):
        raise ValueError("saturation fit needs at least two (compactness, ratio) pairs")
    weights = None
    if errors is not None:
        sigma = np.asarray(errors, dtype=float)
        if np.all(sigma > 0):
            weights = 1.0 / sigma
    slope, intercept = np.polyfit(x, y, 1, w=weights)
    extrapolated = float(slope + intercept)
    return {
        "slope": float(slope),
        "intercept": float(intercept),
        "ratio_at_unit_compactness": extrapolated,
        "saturated": abs(extrapolated - 1.0) <= config.saturation_tolerance,
    }


def holographic_report(r: float, constants: Optional[PhysicalConstants] = None) -> Dict[str, Any]:
    """Quanta, bits and spacelike-ops bounds for a sphere of radius r"""
    area = 4.0 * math.pi * r * r
    return {
        "r": r,
        "wavelength": 2.0 * r,
        "quanta": holographic_quanta_bound(r, constants),
        "area": area,
        "bits_bound": covariant_entropy_bound(area, constants),
        "spacelike_ops": spacelike_ops_bound(area, constants),
    }


__all__ = [
    "BoundMethod",
    "BoundReport",
    "CMB_TEMPERATURE",
    "CurvatureLimit",
    "SolidBounds",
    "background_radiation_resolution",
    "compactness_saturation_fit",
    "covariant_entropy_bound",
    "covariant_ml_bound",
    "critical_energy",
    "curvature_event_bound",
    "curvature_limit_check",
    "evaluate_solid",
    "holographic_quanta_bound",
    "holographic_report",
    "ml_event_bound",
    "ops_exceed_bits",
    "ops_since_big_bang",
    "qgl_bound",
    "resolution_tradeoff",
    "spacelike_ops_bound",
    "uniform_distribution_stats",
]

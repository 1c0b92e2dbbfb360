"""
Metric catalog and curvature engine.

Tensor components are returned in the coordinate basis of the metric's
chart with x0 = c*t, i.e. in geometric units; stress-energy is returned in
SI (J/m^3).
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Union

import numpy as np
from scipy import integrate

from config import config
from spacetime.catalog import (
    Chart,
    DustBall,
    FlatFRW,
    MetricField,
    MetricKind,
    Minkowski,
    SchwarzschildExterior,
    SchwarzschildInterior,
    make_metric,
)
from spacetime.curvature import (
    christoffel_from_derivatives,
    metric_derivatives_fd,
    ricci_from_riemann,
    riemann_tensor,
    scalar_from_ricci,
    step_sizes,
)
from utils.errors import EnergyPositivityError, SingularChartError, UnsupportedGeometryError

logger = logging.getLogger(__name__)

ANALYTIC = "analytic"
FINITE_DIFFERENCE = "finite-difference"


@dataclass(frozen=True)
class ChartPoint:
    """Coordinate time t [s] and three spatial chart coordinates [m or rad]"""

    t: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.t, self.x1, self.x2, self.x3)):
            raise SingularChartError(f"chart point has non-finite coordinates: {self}")

    def geometric(self, c: float) -> np.ndarray:
        return np.array([c * self.t, self.x1, self.x2, self.x3])

    @classmethod
    def from_geometric(cls, x: Sequence[float], c: float) -> "ChartPoint":
        return cls(float(x[0]) / c, float(x[1]), float(x[2]), float(x[3]))


PointLike = Union[ChartPoint, np.ndarray, Sequence[float]]


def as_geometric(metric: MetricField, p: PointLike) -> np.ndarray:
    """Chart point as a geometric coordinate array (x0 = c t)"""
    if isinstance(p, ChartPoint):
        return p.geometric(metric.constants.c)
    return np.asarray(p, dtype=float)


@dataclass
class StressEnergy:
    """T_ab [J/m^3], its trace T^a_a and the vacuum-energy offset applied to it"""

    T_ab: np.ndarray
    trace: float
    energy_density: float
    lambda_adjustment: float = 0.0

    def to_dict(self) -> Dict:
        return {
            "T_ab": self.T_ab.tolist(),
            "trace": self.trace,
            "energy_density": self.energy_density,
            "lambda_adjustment": self.lambda_adjustment,
        }


def metric_at(metric: MetricField, p: PointLike) -> np.ndarray:
    """Symmetric g_ab with signature (-,+,+,+)"""
    x = as_geometric(metric, p)
    metric.check_domain(x)
    g = metric.metric(x)
    g = 0.5 * (g + g.T)
    # congruence by the diagonal scales keeps the signature and removes r^2 factors
    scales = np.sqrt(np.abs(np.diag(g)))
    if np.any(scales == 0.0):
        scales = np.ones(4)
    eigenvalues = np.linalg.eigvalsh(g / np.outer(scales, scales))
    if np.min(np.abs(eigenvalues)) <= 1e-12 or \
            np.sum(eigenvalues < 0) != 1 or np.sum(eigenvalues > 0) != 3:
        raise SingularChartError(
            f"metric at {x.tolist()} is degenerate or has the wrong signature: {eigenvalues.tolist()}")
    return g


def christoffel_at(metric: MetricField, p: PointLike, mode: str = ANALYTIC,
                   h: Optional[float] = None) -> np.ndarray:
    """Gamma^a_bc (geometric units), symmetric in b, c"""
    x = as_geometric(metric, p)
    g = metric_at(metric, x)
    if mode == ANALYTIC:
        dg = metric.metric_derivatives(x)
    elif mode == FINITE_DIFFERENCE:
        dg = metric_derivatives_fd(metric, x, step_sizes(metric, x, h))
    else:
        raise ValueError(f"unknown Christoffel mode '{mode}'")
    return christoffel_from_derivatives(g, dg)


def ricci_tensor_at(metric: MetricField, p: PointLike, mode: str = ANALYTIC,
                    h: Optional[float] = None) -> np.ndarray:
    """R_ab [m^-2]: closed form, or contraction of a finite-difference Riemann tensor"""
    x = as_geometric(metric, p)
    metric_at(metric, x)
    if mode == ANALYTIC:
        return metric.ricci_tensor(x)
    if mode != FINITE_DIFFERENCE:
        raise ValueError(f"unknown curvature mode '{mode}'")
    if metric.curvature_from_source:
        raise UnsupportedGeometryError(
            f"{metric.kind.value} curvature is defined by its source, not by metric derivatives",
            module="spacetime")
    riemann = riemann_tensor(metric.christoffel, x, step_sizes(metric, x, h))
    return ricci_from_riemann(riemann)


def ricci_scalar_at(metric: MetricField, p: PointLike, mode: str = ANALYTIC,
                    h: Optional[float] = None) -> float:
    """Ricci scalar R [m^-2]"""
    x = as_geometric(metric, p)
    g = metric_at(metric, x)
    if mode == ANALYTIC:
        return float(metric.ricci_scalar_batch(x[None, :])[0])
    return scalar_from_ricci(g, ricci_tensor_at(metric, x, mode=mode, h=h))


def stress_energy_at(metric: MetricField, p: PointLike, vacuum_energy: float = 0.0,
                     mode: str = ANALYTIC, h: Optional[float] = None) -> StressEnergy:
    """
    T_ab = (c^4 / 8 pi G)(R_ab - g_ab R / 2), optionally shifted by a
    vacuum-energy offset lambda [J/m^3]: T_ab -> T_ab - lambda g_ab.
    """
    x = as_geometric(metric, p)
    g = metric_at(metric, x)
    ricci = ricci_tensor_at(metric, x, mode=mode, h=h)
    g_inv = np.linalg.inv(g)
    scalar = float(np.einsum('ab,ab->', g_inv, ricci))
    einstein = ricci - 0.5 * g * scalar
    c, G = metric.constants.c, metric.constants.G
    to_si = c ** 4 / (8.0 * math.pi * G)
    T_ab = to_si * einstein - vacuum_energy * g
    trace = float(np.einsum('ab,ab->', g_inv, T_ab))

    # energy density seen by the static (or comoving) observer
    u = np.zeros(4)
    u[0] = 1.0 / math.sqrt(-g[0, 0])
    energy_density = float(u @ T_ab @ u)

    tolerance = config.positivity_rtol * float(np.max(np.abs(T_ab)))
    if trace > tolerance or energy_density < -tolerance:
        hint = "" if vacuum_energy else "; supply a vacuum-energy (cosmological constant) offset"
        raise EnergyPositivityError(
            f"negative effective energy at {x.tolist()}: trace {trace:.6e} J/m^3, "
            f"energy density {energy_density:.6e} J/m^3 (the ground-state energy must be "
            f"zero or positive){hint}", module="spacetime")

    return StressEnergy(T_ab=T_ab, trace=trace, energy_density=energy_density,
                        lambda_adjustment=vacuum_energy)


def energy_density_si(metric: MetricField, X: np.ndarray) -> np.ndarray:
    """Source energy density [J/m^3] at an (N, 4) array of chart points"""
    eps, _ = metric.matter_batch(np.atleast_2d(X))
    return eps * metric.constants.c ** 4 / metric.constants.G


def enclosed_energy(metric: MetricField, center: PointLike, radius: float) -> float:
    """
    Energy [J] inside a ball of proper radius ``radius`` about ``center``,
    integrated on a flat measure along a radial ray: E = int 4 pi d^2 eps(d) dd.
    """
    if radius <= 0:
        return 0.0
    x_center = as_geometric(metric, center)

    def integrand(d):
        point = metric.point_at_distance(x_center, d)
        return 4.0 * math.pi * d * d * float(energy_density_si(metric, point)[0])

    breakpoints = [b for b in metric.radial_breakpoints() if 0.0 < b < radius]
    value, error = integrate.quad(integrand, 0.0, radius, points=breakpoints or None, limit=200)
    logger.debug(f"enclosed energy within {radius:.6e} m: {value:.6e} J (+/- {error:.1e})")
    return value


__all__ = [
    "Chart",
    "ChartPoint",
    "DustBall",
    "FlatFRW",
    "MetricField",
    "MetricKind",
    "Minkowski",
    "SchwarzschildExterior",
    "SchwarzschildInterior",
    "StressEnergy",
    "ANALYTIC",
    "FINITE_DIFFERENCE",
    "as_geometric",
    "christoffel_at",
    "energy_density_si",
    "enclosed_energy",
    "make_metric",
    "metric_at",
    "ricci_scalar_at",
    "ricci_tensor_at",
    "stress_energy_at",
]

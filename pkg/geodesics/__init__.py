"""
Timelike and null geodesics on catalog metrics.

Paths are integrated in geometric units with proper length s = c*tau as
the parameter, so timelike velocities satisfy g(u, u) = -1.
"""
import csv
import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp

from config import config
from spacetime import Chart, MetricField, PointLike, as_geometric, metric_at
from utils.errors import (
    HorizonError,
    OutOfSegmentError,
    PartialPathError,
    StiffnessError,
    UnsupportedGeometryError,
)

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-9


class PathKind(str, Enum):
    TIMELIKE = "timelike"
    NULL = "null"


@dataclass
class GeodesicPath:
    """Samples (s, x, u) of a worldline; s = c*tau in meters"""

    kind: PathKind
    s: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    c: float
    geodesic: bool = True
    interpolant: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    @property
    def tau(self) -> np.ndarray:
        """Affine parameter in seconds"""
        return self.s / self.c

    @property
    def span(self) -> Tuple[float, float]:
        return float(self.s[0]), float(self.s[-1])

    def state_at_s(self, s_values: np.ndarray) -> np.ndarray:
        """(M, 8) positions and velocities at parameter values s (meters)"""
        s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
        lo, hi = self.span
        slack = 1e-12 * max(abs(lo), abs(hi), 1.0)
        if np.any(s_values < lo - slack) or np.any(s_values > hi + slack):
            raise OutOfSegmentError(
                f"requested parameter outside the integrated segment [{lo / self.c:.6e}, {hi / self.c:.6e}] s")
        if self.interpolant is not None:
            return self.interpolant(np.clip(s_values, lo, hi))
        columns = [np.interp(s_values, self.s, self.points[:, i]) for i in range(4)]
        columns += [np.interp(s_values, self.s, self.velocities[:, i]) for i in range(4)]
        return np.stack(columns, axis=1)

    def position_at_s(self, s_values: np.ndarray) -> np.ndarray:
        return self.state_at_s(s_values)[:, :4]

    def position_at(self, tau: Union[float, np.ndarray]) -> np.ndarray:
        return self.position_at_s(np.asarray(tau, dtype=float) * self.c)

    def norms(self, metric: MetricField) -> np.ndarray:
        return np.array([u @ metric.metric(x) @ u for x, u in zip(self.points, self.velocities)])

    def norm_drift(self, metric: MetricField) -> float:
        """max |g(u,u) - target| over the samples"""
        target = -1.0 if self.kind == PathKind.TIMELIKE else 0.0
        return float(np.max(np.abs(self.norms(metric) - target)))

    def to_csv(self, filepath: Union[str, Path]) -> None:
        """Write tau [s], coordinates and velocity components, one row per sample"""
        with open(filepath, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f)
            writer.writerow(["tau", "x0", "x1", "x2", "x3", "u0", "u1", "u2", "u3"])
            for tau, x, u in zip(self.tau, self.points, self.velocities):
                writer.writerow([repr(float(tau))] + [repr(float(v)) for v in x] + [repr(float(v)) for v in u])


def _norm(metric: MetricField, x: np.ndarray, u: np.ndarray) -> float:
    return float(u @ metric.metric(x) @ u)


def normalize_velocity(metric: MetricField, p: PointLike, direction: Sequence[float],
                       kind: Union[PathKind, str] = PathKind.TIMELIKE) -> np.ndarray:
    """
    Future-directed 4-velocity from a spatial direction.

    For timelike paths ``direction`` is the coordinate velocity dx^i/dx^0;
    for null paths any non-zero spatial vector, with the time component
    solved from g(k, k) = 0.
    """
    kind = PathKind(kind)
    x = as_geometric(metric, p)
    g = metric_at(metric, x)
    v = np.asarray(direction, dtype=float)
    if v.shape != (3,):
        raise ValueError("direction must be a spatial 3-vector")

    if kind == PathKind.TIMELIKE:
        w = np.concatenate([[1.0], v])
        norm = float(w @ g @ w)
        if norm >= 0:
            raise ValueError(f"coordinate velocity {v.tolist()} is not timelike at {x.tolist()}")
        u = w / math.sqrt(-norm)
        target = -1.0
    else:
        if not np.any(v):
            raise ValueError("null direction must be non-zero")
        a = g[0, 0]
        b = 2.0 * float(g[0, 1:] @ v)
        c = float(v @ g[1:, 1:] @ v)
        discriminant = b * b - 4.0 * a * c
        if discriminant < 0:
            raise ValueError(f"no null vector along {v.tolist()} at {x.tolist()}")
        roots = [(-b + s * math.sqrt(discriminant)) / (2.0 * a) for s in (1.0, -1.0)]
        u = np.concatenate([[max(roots)], v])
        target = 0.0

    residual = abs(float(u @ g @ u) - target)
    if residual > 1e-12 * max(1.0, float(np.max(np.abs(u))) ** 2):
        raise ValueError(f"normalisation residual {residual:.3e} exceeds 1e-12")
    return u


def integrate_geodesic(metric: MetricField, p0: PointLike, u0: Sequence[float],
                       span: Tuple[float, float], tol: Optional[float] = None,
                       kind: Union[PathKind, str] = PathKind.TIMELIKE,
                       method: str = "RK45", n_samples: Optional[int] = None) -> GeodesicPath:
    """
    Solve d2x/ds2 + Gamma^a_bc u^b u^c = 0 over the proper-time interval
    ``span`` [s] with an adaptive embedded Runge-Kutta pair. No norm
    re-projection is applied; the drift stays observable.
    """
    kind = PathKind(kind)
    tol = tol or config.geodesic_tolerance
    c = metric.constants.c
    x0 = as_geometric(metric, p0)
    metric_at(metric, x0)
    u0 = np.asarray(u0, dtype=float)
    tau_lo, tau_hi = span
    if tau_hi <= tau_lo:
        raise ValueError("geodesic span must be increasing")

    norm = _norm(metric, x0, u0)
    if kind == PathKind.TIMELIKE and abs(norm + 1.0) > NORM_TOLERANCE:
        raise ValueError(f"initial velocity has g(u,u) = {norm:.12f}, expected -1")
    if kind == PathKind.NULL and abs(norm) > NORM_TOLERANCE * max(1.0, u0[0] ** 2):
        raise ValueError(f"initial velocity has g(k,k) = {norm:.3e}, expected 0")

    def rhs(_, y):
        gamma = metric.christoffel(y[:4])
        u = y[4:]
        return np.concatenate([u, -np.einsum('abc,b,c->a', gamma, u, u)])

    def chart_exit(_, y):
        return metric.singularity_margin(y[:4])

    chart_exit.terminal = True
    chart_exit.direction = -1

    scales = metric.coordinate_scales(x0)
    atol = np.concatenate([tol * scales, np.full(4, tol)])
    s_span = (c * tau_lo, c * tau_hi)
    solution = solve_ivp(rhs, s_span, np.concatenate([x0, u0]), method=method, rtol=tol, atol=atol,
                         dense_output=True, events=[chart_exit])
    logger.debug(f"geodesic integration: {solution.t.size} steps, status {solution.status}")

    if solution.status == -1:
        raise StiffnessError(f"geodesic integration failed: {solution.message}")

    if n_samples and solution.status == 0:
        s_values = np.linspace(s_span[0], s_span[1], n_samples)
        states = solution.sol(s_values).T
    else:
        s_values = solution.t
        states = solution.y.T

    dense = solution.sol

    path = GeodesicPath(kind=kind, s=s_values, points=states[:, :4], velocities=states[:, 4:], c=c,
                        interpolant=lambda s: dense(s).T)

    if solution.status == 1:
        raise PartialPathError(
            f"geodesic reached a chart singularity at tau = {s_values[-1] / c:.6e} s, "
            f"x = {states[-1, :4].tolist()}", path=path)
    return path


def static_worldline(metric: MetricField, p0: PointLike, span: Tuple[float, float]) -> GeodesicPath:
    """
    Worldline at fixed spatial chart coordinates, parametrised by proper time.
    A geodesic for comoving FRW observers and at symmetry centres; an
    accelerated observer otherwise (``geodesic`` is False then).
    """
    x0 = as_geometric(metric, p0)
    is_geodesic = metric.is_static_geodesic(x0)
    if not (metric.static or is_geodesic):
        raise UnsupportedGeometryError(
            f"{metric.kind.value} has no static observers", module="geodesics")
    if not (metric.chart == Chart.SPHERICAL and x0[1] == 0.0):
        metric.check_domain(x0)
    lapse = metric.lapse(x0)
    c = metric.constants.c
    tau_lo, tau_hi = span
    if tau_hi <= tau_lo:
        raise ValueError("worldline span must be increasing")

    def interpolant(s):
        s = np.atleast_1d(s)
        states = np.zeros((len(s), 8))
        states[:, 0] = x0[0] + s / lapse
        states[:, 1:4] = x0[1:]
        states[:, 4] = 1.0 / lapse
        return states

    s_values = np.array([c * tau_lo, c * tau_hi])
    states = interpolant(s_values)
    return GeodesicPath(kind=PathKind.TIMELIKE, s=s_values, points=states[:, :4],
                        velocities=states[:, 4:], c=c, geodesic=is_geodesic, interpolant=interpolant)


def null_arrival(metric: MetricField, X_from: np.ndarray, Y_to: np.ndarray) -> np.ndarray:
    """
    Arrival coordinate time of future radial null rays, reduced to 1-D
    radial transport (closed-form tortoise or conformal-time integrals).
    """
    X_from = np.atleast_2d(X_from)
    Y_to = np.atleast_2d(Y_to)
    arrival = metric.null_arrival(X_from, Y_to)
    if np.any(np.isnan(arrival)):
        raise HorizonError("light ray cannot escape: the cone is trapped")
    return arrival


__all__ = [
    "GeodesicPath",
    "PathKind",
    "integrate_geodesic",
    "normalize_velocity",
    "null_arrival",
    "static_worldline",
]

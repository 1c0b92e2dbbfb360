"""
Analytic metric families.

All geometry is evaluated in geometric units: the chart coordinate
x[0] = c*t is a length, masses enter as GM/c^2 and matter fields as
G/c^4 times their SI energy density (m^-2). Cartesian charts use
(ct, x, y, z); spherical charts use (ct, r, theta, phi).
"""
import math
import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import optimize

from units import PhysicalConstants, default_constants
from utils.errors import HorizonError, SingularChartError, UnsupportedGeometryError

logger = logging.getLogger(__name__)

ANGLE_EPS = 1e-12


class MetricKind(str, Enum):
    MINKOWSKI = "minkowski"
    SCHWARZSCHILD_EXTERIOR = "schwarzschild_exterior"
    SCHWARZSCHILD_INTERIOR = "schwarzschild_interior"
    FLAT_FRW = "flat_frw"
    DUST_BALL = "dust_ball"


class Chart(str, Enum):
    CARTESIAN = "cartesian"
    SPHERICAL = "spherical"


class MetricField(ABC):
    """A named analytic spacetime with signature (-,+,+,+)"""

    kind: MetricKind
    chart: Chart
    static: bool = True
    curvature_from_source: bool = False

    def __init__(self, constants: Optional[PhysicalConstants] = None):
        self.constants = constants or default_constants()

    # -- description -------------------------------------------------

    @abstractmethod
    def parameters(self) -> Dict[str, float]:
        """SI parameters, echoed into reports"""

    @property
    @abstractmethod
    def length_scale(self) -> float:
        """Characteristic length [m] used to size finite-difference steps"""

    def describe(self) -> Dict:
        return {"kind": self.kind.value, "chart": self.chart.value, "parameters": self.parameters()}

    def coordinate_scales(self, x: np.ndarray) -> np.ndarray:
        scales = np.maximum(np.abs(x), self.length_scale)
        if self.chart == Chart.SPHERICAL:
            scales[2] = 1.0
            scales[3] = 1.0
        return scales

    # -- geometry ----------------------------------------------------

    def singularity_margin(self, x: np.ndarray) -> float:
        """Positive inside the chart domain, crosses zero at a coordinate singularity"""
        return 1.0

    def check_domain(self, x: np.ndarray) -> None:
        if not np.all(np.isfinite(x)):
            raise SingularChartError(f"non-finite chart point {x.tolist()}")
        if self.singularity_margin(x) <= 0:
            raise SingularChartError(
                f"point {x.tolist()} is outside the {self.kind.value} chart domain")

    @abstractmethod
    def metric(self, x: np.ndarray) -> np.ndarray:
        """g_ab at a geometric chart point (no domain check)"""

    @abstractmethod
    def metric_derivatives(self, x: np.ndarray) -> np.ndarray:
        """dg[c, a, b] = d_c g_ab"""

    def christoffel(self, x: np.ndarray) -> np.ndarray:
        from spacetime.curvature import christoffel_from_derivatives
        return christoffel_from_derivatives(self.metric(x), self.metric_derivatives(x))

    @abstractmethod
    def ricci_tensor(self, x: np.ndarray) -> np.ndarray:
        """Closed-form R_ab [m^-2]"""

    @abstractmethod
    def ricci_scalar_batch(self, X: np.ndarray) -> np.ndarray:
        """Closed-form R [m^-2] at an (N, 4) array of chart points"""

    @abstractmethod
    def matter_batch(self, X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Perfect-fluid energy density and pressure (geometric, m^-2) of the source"""

    def matter_trace_batch(self, X: np.ndarray) -> np.ndarray:
        """T^a_a from the matter model (geometric): -eps + 3p"""
        eps, p = self.matter_batch(X)
        return -eps + 3.0 * p

    @abstractmethod
    def sqrt_neg_det_batch(self, X: np.ndarray) -> np.ndarray:
        """sqrt(-det g) at an (N, 4) array of chart points"""

    def is_static_geodesic(self, x: np.ndarray) -> bool:
        """Whether the static worldline through x is a geodesic"""
        return False

    def lapse(self, x: np.ndarray) -> float:
        """sqrt(-g_00) for static observers"""
        return math.sqrt(-self.metric(x)[0, 0])

    # -- light propagation -------------------------------------------

    @abstractmethod
    def null_arrival(self, X_from: np.ndarray, Y_to: np.ndarray) -> np.ndarray:
        """
        Coordinate time x0 at which a future null ray leaving X_from (N, 4)
        reaches the spatial points Y_to (N, 3). NaN where no connection exists.
        """

    # -- regions -----------------------------------------------------

    def sampling_box(self, path, s_lo: float, s_hi: float, r_max: float) -> Tuple[np.ndarray, np.ndarray]:
        """Chart box containing every event within radar distance r_max of the path"""
        raise UnsupportedGeometryError(
            f"four-volume sampling is not available for {self.kind.value}")

    def point_at_distance(self, center: np.ndarray, distance: float) -> np.ndarray:
        """Chart point at proper radial distance ``distance`` from ``center``"""
        point = np.array(center, dtype=float)
        point[1] += distance
        return point

    def radial_breakpoints(self) -> List[float]:
        return []


# ----------------------------------------------------------------------
# Flat measure
# ----------------------------------------------------------------------

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])


class _FlatMeasure(MetricField):
    chart = Chart.CARTESIAN

    def metric(self, x: np.ndarray) -> np.ndarray:
        return ETA.copy()

    def metric_derivatives(self, x: np.ndarray) -> np.ndarray:
        return np.zeros((4, 4, 4))

    def sqrt_neg_det_batch(self, X: np.ndarray) -> np.ndarray:
        return np.ones(len(X))

    def is_static_geodesic(self, x: np.ndarray) -> bool:
        return True

    def null_arrival(self, X_from: np.ndarray, Y_to: np.ndarray) -> np.ndarray:
        return X_from[:, 0] + np.linalg.norm(Y_to - X_from[:, 1:], axis=1)

    def sampling_box(self, path, s_lo, s_hi, r_max):
        ends = path.position_at_s(np.array([s_lo, s_hi]))
        points = np.vstack([path.points, ends])
        gamma = float(np.max(np.abs(path.velocities[:, 0])))
        spatial_lo = points[:, 1:].min(axis=0) - gamma * r_max
        spatial_hi = points[:, 1:].max(axis=0) + gamma * r_max
        lo = np.concatenate([[ends[0, 0]], spatial_lo])
        hi = np.concatenate([[ends[1, 0]], spatial_hi])
        return lo, hi


class Minkowski(_FlatMeasure):
    kind = MetricKind.MINKOWSKI

    def parameters(self) -> Dict[str, float]:
        return {}

    @property
    def length_scale(self) -> float:
        return 1.0

    def ricci_tensor(self, x):
        return np.zeros((4, 4))

    def ricci_scalar_batch(self, X):
        return np.zeros(len(X))

    def matter_batch(self, X):
        zeros = np.zeros(len(X))
        return zeros, zeros.copy()


class DustBall(_FlatMeasure):
    """
    Static, pressureless ball of mass M and radius R centred on the spatial
    origin, on a flat (weak-field) measure. Its curvature is the one the
    linearised Einstein equation assigns to the source.
    """

    kind = MetricKind.DUST_BALL
    curvature_from_source = True

    def __init__(self, mass: float, radius: float, constants: Optional[PhysicalConstants] = None):
        super().__init__(constants)
        if mass < 0 or radius <= 0:
            raise ValueError("dust ball needs mass >= 0 and radius > 0")
        self.mass = mass
        self.radius = radius
        self.mass_geo = self.constants.G * mass / self.constants.c ** 2
        self.density_geo = 3.0 * self.mass_geo / (4.0 * math.pi * radius ** 3)

    @property
    def schwarzschild_radius(self) -> float:
        return 2.0 * self.mass_geo

    def parameters(self):
        return {"mass": self.mass, "radius": self.radius,
                "schwarzschild_radius": self.schwarzschild_radius}

    @property
    def length_scale(self):
        return self.radius

    def _inside(self, X: np.ndarray) -> np.ndarray:
        return np.linalg.norm(X[:, 1:], axis=1) <= self.radius

    def ricci_tensor(self, x):
        if not self._inside(np.atleast_2d(x))[0]:
            return np.zeros((4, 4))
        return 4.0 * math.pi * self.density_geo * np.eye(4)

    def ricci_scalar_batch(self, X):
        return np.where(self._inside(X), 8.0 * math.pi * self.density_geo, 0.0)

    def matter_batch(self, X):
        eps = np.where(self._inside(X), self.density_geo, 0.0)
        return eps, np.zeros(len(X))

    def radial_breakpoints(self):
        return [self.radius]


# ----------------------------------------------------------------------
# Schwarzschild
# ----------------------------------------------------------------------

class _Spherical(MetricField):
    chart = Chart.SPHERICAL

    def singularity_margin(self, x):
        return min(x[1], math.sin(x[2]) - ANGLE_EPS)

    def point_at_distance(self, center, distance):
        point = np.array(center, dtype=float)
        point[1] = center[1] + distance
        if point[1] > 0 and math.sin(point[2]) <= ANGLE_EPS:
            point[2] = math.pi / 2
        return point

    @abstractmethod
    def tortoise(self, r: np.ndarray) -> np.ndarray:
        """Radial null coordinate: d(x0) = d(tortoise) along radial light rays"""

    def _radial_lapse(self, r: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def null_arrival(self, X_from, Y_to):
        r_from = X_from[:, 1]
        r_to = Y_to[:, 0]
        at_center = (r_from <= 0.0) | (r_to <= 0.0)
        same_ray = (np.abs(X_from[:, 2] - Y_to[:, 1]) <= ANGLE_EPS) & \
                   (np.abs(X_from[:, 3] - Y_to[:, 2]) <= ANGLE_EPS)
        if not np.all(at_center | same_ray):
            raise UnsupportedGeometryError(
                "null rays are reduced to radial transport; events must share the angular "
                "position of the worldline or one end must sit at r = 0", module="geodesics")
        return X_from[:, 0] + np.abs(self.tortoise(r_to) - self.tortoise(r_from))

    def _schwarzschild_metric(self, x, r_s):
        r, theta = x[1], x[2]
        f = 1.0 - r_s / r
        sin2 = math.sin(theta) ** 2
        return np.diag([-f, 1.0 / f, r * r, r * r * sin2])

    def _schwarzschild_derivatives(self, x, r_s):
        r, theta = x[1], x[2]
        f = 1.0 - r_s / r
        df = r_s / (r * r)
        dg = np.zeros((4, 4, 4))
        dg[1, 0, 0] = -df
        dg[1, 1, 1] = -df / (f * f)
        dg[1, 2, 2] = 2.0 * r
        dg[1, 3, 3] = 2.0 * r * math.sin(theta) ** 2
        dg[2, 3, 3] = r * r * math.sin(2.0 * theta)
        return dg


def _exterior_tortoise(r: np.ndarray, r_s: float) -> np.ndarray:
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(r > r_s, r + r_s * np.log(r / r_s - 1.0), np.nan)


class SchwarzschildExterior(_Spherical):
    kind = MetricKind.SCHWARZSCHILD_EXTERIOR

    def __init__(self, mass: float, constants: Optional[PhysicalConstants] = None):
        super().__init__(constants)
        if mass <= 0:
            raise ValueError("Schwarzschild mass must be positive")
        self.mass = mass
        self.r_s = self.constants.schwarzschild_factor * mass

    @classmethod
    def from_schwarzschild_radius(cls, r_s: float, constants: Optional[PhysicalConstants] = None):
        constants = constants or default_constants()
        return cls(r_s / constants.schwarzschild_factor, constants)

    def parameters(self):
        return {"mass": self.mass, "schwarzschild_radius": self.r_s}

    @property
    def length_scale(self):
        return self.r_s

    def singularity_margin(self, x):
        # the exterior chart ends at the horizon
        return min(x[1] - self.r_s * (1.0 + 1e-12), math.sin(x[2]) - ANGLE_EPS)

    def metric(self, x):
        return self._schwarzschild_metric(x, self.r_s)

    def metric_derivatives(self, x):
        return self._schwarzschild_derivatives(x, self.r_s)

    def ricci_tensor(self, x):
        return np.zeros((4, 4))

    def ricci_scalar_batch(self, X):
        return np.zeros(len(X))

    def matter_batch(self, X):
        zeros = np.zeros(len(X))
        return zeros, zeros.copy()

    def sqrt_neg_det_batch(self, X):
        return X[:, 1] ** 2 * np.abs(np.sin(X[:, 2]))

    def tortoise(self, r):
        return _exterior_tortoise(np.asarray(r, dtype=float), self.r_s)

    def null_arrival(self, X_from, Y_to):
        if np.any(X_from[:, 1] <= self.r_s) or np.any(Y_to[:, 0] <= self.r_s):
            raise HorizonError("light ray starts or ends inside the Schwarzschild horizon")
        return super().null_arrival(X_from, Y_to)

    def sampling_box(self, path, s_lo, s_hi, r_max):
        # radial transport only reaches events on the worldline's own ray; the
        # exterior has no r = 0 centre through which every direction is radial
        raise UnsupportedGeometryError(
            "four-volume sampling is not available for schwarzschild_exterior: radar "
            "coordinates reach only events on the radial ray of the worldline")


class SchwarzschildInterior(_Spherical):
    """Constant-density star (Schwarzschild interior) glued to the vacuum exterior"""

    kind = MetricKind.SCHWARZSCHILD_INTERIOR

    def __init__(self, mass: float, radius: float, constants: Optional[PhysicalConstants] = None):
        super().__init__(constants)
        if mass <= 0 or radius <= 0:
            raise ValueError("interior star needs positive mass and radius")
        self.mass = mass
        self.radius = radius
        self.r_s = self.constants.schwarzschild_factor * mass
        if self.r_s / radius >= 8.0 / 9.0:
            raise ValueError(
                f"compactness r_s/R = {self.r_s / radius:.4f} exceeds the Buchdahl limit 8/9")
        m = self.r_s / 2.0
        self._A = math.sqrt(1.0 - self.r_s / radius)
        self._k = 2.0 * m / radius ** 3
        self.density_geo = 3.0 * m / (4.0 * math.pi * radius ** 3)

    def parameters(self):
        return {"mass": self.mass, "radius": self.radius, "schwarzschild_radius": self.r_s,
                "compactness": self.r_s / self.radius}

    @property
    def length_scale(self):
        return self.radius

    def _B(self, r):
        return np.sqrt(1.0 - self._k * np.asarray(r, dtype=float) ** 2)

    def pressure_geo(self, r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        B = self._B(np.minimum(r, self.radius))
        p = self.density_geo * (B - self._A) / (3.0 * self._A - B)
        return np.where(r <= self.radius, p, 0.0)

    def metric(self, x):
        r, theta = x[1], x[2]
        if r > self.radius:
            return self._schwarzschild_metric(x, self.r_s)
        B = float(self._B(r))
        lapse = 0.5 * (3.0 * self._A - B)
        return np.diag([-lapse ** 2, 1.0 / B ** 2, r * r, r * r * math.sin(theta) ** 2])

    def metric_derivatives(self, x):
        r, theta = x[1], x[2]
        if r > self.radius:
            return self._schwarzschild_derivatives(x, self.r_s)
        B = float(self._B(r))
        dB = -self._k * r / B
        dg = np.zeros((4, 4, 4))
        dg[1, 0, 0] = 0.5 * (3.0 * self._A - B) * dB
        dg[1, 1, 1] = -2.0 * dB / B ** 3
        dg[1, 2, 2] = 2.0 * r
        dg[1, 3, 3] = 2.0 * r * math.sin(theta) ** 2
        dg[2, 3, 3] = r * r * math.sin(2.0 * theta)
        return dg

    def is_static_geodesic(self, x):
        return x[1] == 0.0

    def lapse(self, x):
        r = min(x[1], self.radius)
        if x[1] > self.radius:
            return math.sqrt(1.0 - self.r_s / x[1])
        return 0.5 * (3.0 * self._A - float(self._B(r)))

    def singularity_margin(self, x):
        # r = 0 is the regular centre of the star but a chart singularity of (r, theta, phi)
        return min(x[1], math.sin(x[2]) - ANGLE_EPS)

    def ricci_tensor(self, x):
        r = x[1]
        if r > self.radius:
            return np.zeros((4, 4))
        g = self.metric(x)
        rho = self.density_geo
        p = float(self.pressure_geo(r))
        u_lower = np.array([-math.sqrt(-g[0, 0]), 0.0, 0.0, 0.0])
        T = (rho + p) * np.outer(u_lower, u_lower) + p * g
        trace = -rho + 3.0 * p
        return 8.0 * math.pi * (T - 0.5 * g * trace)

    def ricci_scalar_batch(self, X):
        r = X[:, 1]
        inside = r <= self.radius
        return np.where(inside, 8.0 * math.pi * (self.density_geo - 3.0 * self.pressure_geo(r)), 0.0)

    def matter_batch(self, X):
        r = X[:, 1]
        eps = np.where(r <= self.radius, self.density_geo, 0.0)
        return eps, self.pressure_geo(r)

    def sqrt_neg_det_batch(self, X):
        r = X[:, 1]
        B = self._B(np.minimum(r, self.radius))
        inside = 0.5 * (3.0 * self._A - B) / B
        return np.where(r <= self.radius, inside, 1.0) * r ** 2 * np.abs(np.sin(X[:, 2]))

    def tortoise(self, r):
        r = np.asarray(r, dtype=float)
        a = 3.0 * self._A
        root_k = math.sqrt(self._k)
        scale = 4.0 / (root_k * math.sqrt(a * a - 1.0))
        stretch = math.sqrt((a + 1.0) / (a - 1.0))

        def interior(radius):
            psi = np.arcsin(np.clip(root_k * radius, 0.0, 1.0))
            return scale * np.arctan(stretch * np.tan(psi / 2.0))

        surface = interior(self.radius)
        outside = surface + _exterior_tortoise(np.maximum(r, self.radius), self.r_s) \
            - _exterior_tortoise(np.array(self.radius), self.r_s)
        return np.where(r <= self.radius, interior(np.minimum(r, self.radius)), outside)

    def radial_breakpoints(self):
        return [self.radius]

    def sampling_box(self, path, s_lo, s_hi, r_max):
        if np.any(np.abs(path.points[:, 1]) > 0.0):
            raise UnsupportedGeometryError(
                "four-volumes in the star are sampled about the static centre r = 0 only")
        ends = path.position_at_s(np.array([s_lo, s_hi]))
        central_lapse = self.lapse(np.array([0.0, 0.0, math.pi / 2, 0.0]))
        origin = float(self.tortoise(0.0))

        def radar_excess(r):
            return central_lapse * (float(self.tortoise(r)) - origin) - r_max

        upper = max(r_max, self.radius)
        while radar_excess(upper) < 0:
            upper *= 2.0
        r_coord = optimize.brentq(radar_excess, 0.0, upper) if r_max > 0 else 0.0
        lo = np.array([ends[0, 0], 0.0, 0.0, 0.0])
        hi = np.array([ends[1, 0], r_coord * (1.0 + 1e-9), math.pi, 2.0 * math.pi])
        return lo, hi


# ----------------------------------------------------------------------
# Cosmology
# ----------------------------------------------------------------------

class FlatFRW(MetricField):
    """
    Spatially flat FRW universe with a(t) = (t/t0)^p in comoving Cartesian
    coordinates. p = 2/3 is the dust epoch, p = 1/2 radiation.
    """

    kind = MetricKind.FLAT_FRW
    chart = Chart.CARTESIAN
    static = False

    def __init__(self, exponent: float = 2.0 / 3.0, reference_time: float = 1.0,
                 constants: Optional[PhysicalConstants] = None):
        super().__init__(constants)
        if not 0.0 < exponent < 1.0:
            raise ValueError("power-law exponent must lie in (0, 1)")
        if reference_time <= 0:
            raise ValueError("reference time must be positive")
        self.exponent = exponent
        self.reference_time = reference_time
        self._X = self.constants.c * reference_time

    def parameters(self):
        return {"exponent": self.exponent, "reference_time": self.reference_time}

    @property
    def length_scale(self):
        return self._X

    def scale_factor(self, x0):
        return (np.asarray(x0, dtype=float) / self._X) ** self.exponent

    def hubble_rate(self, x0):
        """H = a'/a per meter of c*t"""
        return self.exponent / np.asarray(x0, dtype=float)

    def singularity_margin(self, x):
        return x[0]

    def metric(self, x):
        a2 = float(self.scale_factor(x[0])) ** 2
        return np.diag([-1.0, a2, a2, a2])

    def metric_derivatives(self, x):
        a = float(self.scale_factor(x[0]))
        adot = self.exponent * a / x[0]
        dg = np.zeros((4, 4, 4))
        for i in (1, 2, 3):
            dg[0, i, i] = 2.0 * a * adot
        return dg

    def is_static_geodesic(self, x):
        return True

    def ricci_tensor(self, x):
        p, x0 = self.exponent, x[0]
        a2 = float(self.scale_factor(x0)) ** 2
        ricci = np.zeros((4, 4))
        ricci[0, 0] = -3.0 * p * (p - 1.0) / x0 ** 2
        for i in (1, 2, 3):
            ricci[i, i] = a2 * p * (3.0 * p - 1.0) / x0 ** 2
        return ricci

    def ricci_scalar_batch(self, X):
        p = self.exponent
        return 6.0 * p * (2.0 * p - 1.0) / X[:, 0] ** 2

    def matter_batch(self, X):
        # Friedmann and acceleration equations
        p = self.exponent
        x0 = X[:, 0]
        eps = 3.0 * p * p / (8.0 * math.pi * x0 ** 2)
        pressure = -p * (3.0 * p - 2.0) / (8.0 * math.pi * x0 ** 2)
        return eps, pressure

    def sqrt_neg_det_batch(self, X):
        return self.scale_factor(X[:, 0]) ** 3

    def conformal_time(self, x0):
        p = self.exponent
        return self._X ** p * np.asarray(x0, dtype=float) ** (1.0 - p) / (1.0 - p)

    def _inverse_conformal_time(self, eta):
        p = self.exponent
        return (np.asarray(eta, dtype=float) * (1.0 - p) / self._X ** p) ** (1.0 / (1.0 - p))

    def null_arrival(self, X_from, Y_to):
        if np.any(X_from[:, 0] <= 0):
            raise HorizonError("light ray leaves from the initial singularity")
        chi = np.linalg.norm(Y_to - X_from[:, 1:], axis=1)
        return self._inverse_conformal_time(self.conformal_time(X_from[:, 0]) + chi)

    def point_at_distance(self, center, distance):
        point = np.array(center, dtype=float)
        point[1] += distance / float(self.scale_factor(center[0]))
        return point

    def sampling_box(self, path, s_lo, s_hi, r_max):
        drift = np.max(np.abs(path.points[:, 1:] - path.points[0, 1:]))
        if drift > 1e-12 * self._X:
            raise UnsupportedGeometryError("FRW four-volumes are sampled about comoving observers only")
        ends = path.position_at_s(np.array([s_lo, s_hi]))
        if ends[0, 0] <= 0:
            raise HorizonError("the radar construction reaches back to the initial singularity")
        # comoving reach of a radar sphere of radius r_max is at most r_max / a(earliest emission)
        chi_max = r_max / float(self.scale_factor(ends[0, 0]))
        center = path.points[0, 1:]
        lo = np.concatenate([[ends[0, 0]], center - chi_max])
        hi = np.concatenate([[ends[1, 0]], center + chi_max])
        return lo, hi


def make_metric(kind, constants: Optional[PhysicalConstants] = None, **params) -> MetricField:
    """Build a catalog metric from its kind and SI parameters"""
    kind = MetricKind(kind)
    builders = {
        MetricKind.MINKOWSKI: Minkowski,
        MetricKind.SCHWARZSCHILD_EXTERIOR: SchwarzschildExterior,
        MetricKind.SCHWARZSCHILD_INTERIOR: SchwarzschildInterior,
        MetricKind.FLAT_FRW: FlatFRW,
        MetricKind.DUST_BALL: DustBall,
    }
    return builders[kind](constants=constants, **params)

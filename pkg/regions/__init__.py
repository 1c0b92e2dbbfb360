"""
Covariant spheres, cylinders and solids of rotation about a timelike
geodesic, built with Einstein radar synchronisation.

An event has radar coordinates (tau_mid, d) when a light signal emitted
from the worldline at tau_e reaches it and returns at tau_r, with
tau_mid = (tau_e + tau_r)/2 and d = c (tau_r - tau_e)/2. The sphere of
radius x at tau is the set of events with tau_mid = tau and d <= x.
"""
import math
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import config
from geodesics import (
    GeodesicPath,
    integrate_geodesic,
    normalize_velocity,
    static_worldline,
)
from regions.profiles import ProfileKind, RadiusProfile
from regions.sampling import MonteCarloEstimate, integrate_box
from spacetime import MetricField, PointLike, as_geometric, enclosed_energy
from units import PhysicalConstants, default_constants
from utils.errors import DegenerateRegionError, HorizonError, OutOfSegmentError

logger = logging.getLogger(__name__)

MAX_BISECTIONS = 200


@dataclass
class RadarCoordinates:
    tau_mid: float
    radar_distance: float
    tau_emission: float
    tau_reception: float

    def to_dict(self) -> Dict:
        return {"tau_mid": self.tau_mid, "radar_distance": self.radar_distance,
                "tau_emission": self.tau_emission, "tau_reception": self.tau_reception}


@dataclass
class RadarBatch:
    tau_mid: np.ndarray
    radar_distance: np.ndarray
    connected: np.ndarray
    trapped: np.ndarray


@dataclass
class CovariantSolid:
    """
    Spheres of radius rho(tau) about ``geodesic`` for tau in [0, t], where
    tau is proper time measured from ``tau_origin`` on the path. The path
    must extend a radar margin beyond both ends of the segment.
    """

    geodesic: GeodesicPath
    profile: RadiusProfile
    tau_origin: float = 0.0
    paper_literal_cones: bool = False
    label: str = ""

    @property
    def duration(self) -> float:
        return self.profile.duration

    @property
    def covariant_radius(self) -> float:
        return self.profile.max_radius

    @property
    def radius_factor(self) -> float:
        """Radar radius of the sphere labelled x: x, or x/2 with cones at tau -/+ x/2c"""
        return 0.5 if self.paper_literal_cones else 1.0

    def radar_span(self) -> Tuple[float, float]:
        """Proper-length range [m] of the path touched by radar signals of the solid"""
        c = self.geodesic.c
        margin = self.radius_factor * self.covariant_radius
        return c * self.tau_origin - margin, c * (self.tau_origin + self.duration) + margin

    def describe(self) -> Dict:
        return {
            "label": self.label,
            "profile": self.profile.to_dict(),
            "covariant_radius": self.covariant_radius,
            "duration": self.duration,
            "tau_origin": self.tau_origin,
            "paper_literal_cones": self.paper_literal_cones,
            "geodesic": {"kind": self.geodesic.kind.value, "is_geodesic": self.geodesic.geodesic},
        }


@dataclass
class WorldSheet:
    area: float
    construction: str = "radius-sheet-of-solid"

    def to_dict(self) -> Dict:
        return {"area": self.area, "construction": self.construction}


@dataclass
class HorizonCheck:
    ok: bool
    effective_radius: Optional[float] = None
    max_enclosed_energy: float = 0.0
    samples: List[Dict[str, float]] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {"ok": self.ok, "effective_radius": self.effective_radius,
                "max_enclosed_energy": self.max_enclosed_energy, "samples": self.samples}


# ----------------------------------------------------------------------
# construction
# ----------------------------------------------------------------------

def build_solid(metric: MetricField, start: PointLike, profile: RadiusProfile,
                velocity: Optional[Sequence[float]] = None, paper_literal_cones: bool = False,
                label: str = "") -> CovariantSolid:
    """
    Solid whose worldline leaves ``start`` at the earliest radar emission;
    the segment [0, t] begins one radar margin later. Without a coordinate
    velocity the observer stays at fixed spatial chart coordinates.
    """
    c = metric.constants.c
    factor = 0.5 if paper_literal_cones else 1.0
    margin = factor * profile.max_radius / c
    span = (0.0, profile.duration + 2.0 * margin)
    if velocity is None:
        path = static_worldline(metric, start, span)
    else:
        u0 = normalize_velocity(metric, start, velocity)
        path = integrate_geodesic(metric, start, u0, span)
    return CovariantSolid(geodesic=path, profile=profile, tau_origin=margin,
                          paper_literal_cones=paper_literal_cones, label=label)


def cylinder(metric: MetricField, start: PointLike, radius: float, duration: float,
             **kwargs) -> CovariantSolid:
    return build_solid(metric, start, RadiusProfile.constant(radius, duration), **kwargs)


# ----------------------------------------------------------------------
# radar coordinates
# ----------------------------------------------------------------------

def _bisect(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, n: int,
            tolerance: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised bisection for the root of increasing residuals on [lo, hi]"""
    a = np.full(n, lo)
    b = np.full(n, hi)
    f_a = fn(a)
    f_b = fn(b)
    trapped = np.isnan(f_a) | np.isnan(f_b)
    bracketed = (f_a <= 0) & (f_b >= 0) & ~trapped
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tolerance:
            break
        mid = 0.5 * (a + b)
        f_mid = fn(mid)
        trapped |= np.isnan(f_mid)
        right = f_mid < 0
        a = np.where(right, mid, a)
        b = np.where(right, b, mid)
        if np.max(b - a) <= tolerance:
            break
    return 0.5 * (a + b), bracketed & ~trapped, trapped


def radar_batch(metric: MetricField, path: GeodesicPath, events: np.ndarray,
                span: Optional[Tuple[float, float]] = None,
                tolerance: Optional[float] = None) -> RadarBatch:
    """
    Radar coordinates of an (N, 4) array of geometric chart events. Events
    without a null connection inside ``span`` (proper length, m) are
    flagged instead of raising.
    """
    events = np.atleast_2d(np.asarray(events, dtype=float))
    n = len(events)
    lo, hi = span or path.span
    if tolerance is None:
        tolerance = config.radar_tolerance * (hi - lo)
    tolerance = max(tolerance, 4.0 * np.finfo(float).eps * max(abs(lo), abs(hi)))

    def emission_residual(s):
        P = path.position_at_s(s)
        with np.errstate(invalid="ignore"):
            return metric.null_arrival(P, events[:, 1:]) - events[:, 0]

    def reception_residual(s):
        P = path.position_at_s(s)
        with np.errstate(invalid="ignore"):
            return P[:, 0] - metric.null_arrival(events, P[:, 1:])

    s_e, ok_e, trapped_e = _bisect(emission_residual, lo, hi, n, tolerance)
    s_r, ok_r, trapped_r = _bisect(reception_residual, lo, hi, n, tolerance)
    c = path.c
    return RadarBatch(
        tau_mid=(s_e + s_r) / (2.0 * c),
        radar_distance=np.maximum(s_r - s_e, 0.0) / 2.0,
        connected=ok_e & ok_r,
        trapped=trapped_e | trapped_r,
    )


def radar_coordinates(metric: MetricField, geodesic: GeodesicPath, event: PointLike,
                      tolerance: Optional[float] = None) -> RadarCoordinates:
    """Radar time [s] and distance [m] of one event relative to the worldline"""
    x = as_geometric(metric, event)
    batch = radar_batch(metric, geodesic, x[None, :], tolerance=tolerance)
    if batch.trapped[0]:
        raise HorizonError(
            f"event {x.tolist()} lies in a trapped region: its light cone cannot reach the worldline")
    if not batch.connected[0]:
        lo, hi = geodesic.span
        raise OutOfSegmentError(
            f"event {x.tolist()} has no null connection with the worldline segment "
            f"tau in [{lo / geodesic.c:.6e}, {hi / geodesic.c:.6e}] s")
    tau_mid = float(batch.tau_mid[0])
    distance = float(batch.radar_distance[0])
    half = distance / geodesic.c
    return RadarCoordinates(tau_mid=tau_mid, radar_distance=distance,
                            tau_emission=tau_mid - half, tau_reception=tau_mid + half)


# ----------------------------------------------------------------------
# membership and integrals
# ----------------------------------------------------------------------

def _inside(solid: CovariantSolid, tau_mid: np.ndarray, distance: np.ndarray) -> np.ndarray:
    tau = tau_mid - solid.tau_origin
    slack = 1e-12 * max(solid.duration, 1e-300)
    in_time = (tau >= -slack) & (tau <= solid.duration + slack)
    return in_time & (distance <= solid.radius_factor * solid.profile(tau))


def contains(metric: MetricField, solid: CovariantSolid, event: PointLike) -> bool:
    """Whether 0 <= tau_mid <= t and d <= rho(tau_mid)"""
    coords = radar_coordinates(metric, solid.geodesic, event)
    return bool(_inside(solid, np.array([coords.tau_mid]), np.array([coords.radar_distance]))[0])


def contains_batch(metric: MetricField, solid: CovariantSolid, events: np.ndarray) -> np.ndarray:
    """Membership of an (N, 4) array of events; events without radar coordinates are outside"""
    batch = radar_batch(metric, solid.geodesic, events, span=solid.radar_span(),
                        tolerance=config.radar_tolerance * solid.geodesic.c * max(solid.duration, 1e-300))
    return batch.connected & _inside(solid, batch.tau_mid, batch.radar_distance)


Channel = Callable[[np.ndarray], np.ndarray]


def integrate_over_solid(metric: MetricField, solid: CovariantSolid, channels: Dict[str, Channel],
                         n_samples: Optional[int] = None, seed: int = 0,
                         block_size: Optional[int] = None,
                         workers: Optional[int] = None) -> Dict[str, MonteCarloEstimate]:
    """
    Monte Carlo integrals of f dV over the solid, dV = sqrt(-g) d^3x dt
    (t in seconds), for each channel f. The ``volume`` channel (f = 1) is
    always included.
    """
    n_samples = n_samples or config.n_samples
    names = ["volume"] + [name for name in channels if name != "volume"]
    if solid.covariant_radius == 0.0 or solid.duration == 0.0:
        return {name: MonteCarloEstimate(0.0, 0.0, n_samples, 0, seed, 0.0) for name in names}

    s_lo, s_hi = solid.radar_span()
    lo, hi = metric.sampling_box(solid.geodesic, s_lo, s_hi,
                                 solid.radius_factor * solid.covariant_radius)
    c = metric.constants.c

    def integrand(X):
        accepted = contains_batch(metric, solid, X)
        measure = np.zeros(len(X))
        inside = X[accepted]
        measure[accepted] = metric.sqrt_neg_det_batch(inside) / c
        weights = {"volume": measure}
        for name, fn in channels.items():
            if name == "volume":
                continue
            values = np.zeros(len(X))
            values[accepted] = measure[accepted] * fn(inside)
            weights[name] = values
        return weights, accepted

    results = integrate_box(lo, hi, integrand, n_samples, seed, block_size, workers)
    if results["volume"].n_accepted == 0:
        raise DegenerateRegionError(
            f"no Monte Carlo sample out of {n_samples} landed inside the solid "
            f"(radius {solid.covariant_radius:.3e} m, duration {solid.duration:.3e} s); "
            f"increase n_samples")
    logger.debug(f"four-volume: {results['volume'].n_accepted}/{n_samples} samples accepted")
    return results


def four_volume(metric: MetricField, solid: CovariantSolid, n_samples: Optional[int] = None,
                seed: int = 0, **kwargs) -> MonteCarloEstimate:
    """Four-volume [m^3 s] of the solid with its standard error"""
    return integrate_over_solid(metric, solid, {}, n_samples=n_samples, seed=seed, **kwargs)["volume"]


def worldsheet_area(solid: CovariantSolid) -> WorldSheet:
    """Area [m s] of the sheet swept by the radii: integral of rho over [0, t]"""
    return WorldSheet(area=solid.profile.area())


# ----------------------------------------------------------------------
# horizons
# ----------------------------------------------------------------------

def critical_energy(r: float, constants: Optional[PhysicalConstants] = None) -> float:
    """Energy [J] at which a sphere of radius r collapses to a black hole: r c^4 / 2G"""
    if r <= 0:
        raise ValueError("radius must be positive")
    constants = constants or default_constants()
    return r * constants.c ** 4 / (2.0 * constants.G)


def horizon_radius(E: float, constants: Optional[PhysicalConstants] = None) -> float:
    """Schwarzschild radius [m] of energy E: 2 G E / c^4"""
    if E <= 0:
        raise ValueError("energy must be positive")
    constants = constants or default_constants()
    return 2.0 * constants.G * E / constants.c ** 4


def horizon_check(metric: MetricField, solid: CovariantSolid, n_tau: int = 33) -> HorizonCheck:
    """
    Compare the energy enclosed by each sampled sphere with the critical
    energy of its radius. A violation returns the horizon radius of the
    largest enclosed energy, to be used as r in the event bound.
    """
    taus = np.linspace(0.0, solid.duration, n_tau)
    max_energy = 0.0
    violated = False
    samples = []
    for tau in taus:
        radius = float(solid.radius_factor * solid.profile(tau))
        if radius <= 0:
            continue
        center = solid.geodesic.position_at(solid.tau_origin + tau)[0]
        energy = enclosed_energy(metric, center, radius)
        critical = critical_energy(radius, metric.constants)
        samples.append({"tau": float(tau), "radius": radius, "enclosed_energy": energy,
                        "critical_energy": critical})
        max_energy = max(max_energy, energy)
        if energy > critical * (1.0 + config.identity_rtol):
            violated = True
    if not violated:
        return HorizonCheck(ok=True, max_enclosed_energy=max_energy, samples=samples)
    effective = horizon_radius(max_energy, metric.constants)
    logger.warning(f"solid '{solid.label}' hides a horizon: effective radius {effective:.6e} m")
    return HorizonCheck(ok=False, effective_radius=effective, max_enclosed_energy=max_energy,
                        samples=samples)


__all__ = [
    "CovariantSolid",
    "HorizonCheck",
    "MonteCarloEstimate",
    "ProfileKind",
    "RadarBatch",
    "RadarCoordinates",
    "RadiusProfile",
    "WorldSheet",
    "build_solid",
    "contains",
    "contains_batch",
    "critical_energy",
    "cylinder",
    "four_volume",
    "horizon_check",
    "horizon_radius",
    "integrate_over_solid",
    "radar_batch",
    "radar_coordinates",
    "worldsheet_area",
]

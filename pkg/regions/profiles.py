"""
Radius profiles rho(tau) of covariant solids of rotation.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid


class ProfileKind(str, Enum):
    CONSTANT = "constant"
    CONE = "cone"
    TABLE = "table"


@dataclass(frozen=True)
class RadiusProfile:
    """
    Sphere radius [m] as a function of proper time tau in [0, duration] [s].

    ``constant`` gives a cylinder, ``cone`` grows linearly from 0 to
    ``radius`` and ``table`` interpolates linearly between samples.
    """

    kind: ProfileKind
    duration: float
    radius: float = 0.0
    taus: Tuple[float, ...] = field(default=())
    radii: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.duration < 0:
            raise ValueError("profile duration must be non-negative")
        if self.kind == ProfileKind.TABLE:
            taus = np.asarray(self.taus, dtype=float)
            radii = np.asarray(self.radii, dtype=float)
            if len(taus) < 2 or len(taus) != len(radii):
                raise ValueError("table profile needs matching tau and radius samples (at least 2)")
            if taus[0] != 0.0 or np.any(np.diff(taus) <= 0):
                raise ValueError("table profile taus must start at 0 and increase strictly")
            if np.any(radii < 0):
                raise ValueError("radius profile must be non-negative")
        elif self.radius < 0:
            raise ValueError("radius profile must be non-negative")

    @classmethod
    def constant(cls, radius: float, duration: float) -> "RadiusProfile":
        return cls(ProfileKind.CONSTANT, duration, radius)

    @classmethod
    def cone(cls, radius: float, duration: float) -> "RadiusProfile":
        return cls(ProfileKind.CONE, duration, radius)

    @classmethod
    def table(cls, taus: Sequence[float], radii: Sequence[float]) -> "RadiusProfile":
        taus = tuple(float(t) for t in taus)
        return cls(ProfileKind.TABLE, taus[-1] if taus else 0.0, max(radii, default=0.0),
                   taus, tuple(float(r) for r in radii))

    def __call__(self, tau: Union[float, np.ndarray]) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        if self.kind == ProfileKind.CONSTANT:
            return np.full_like(tau, self.radius)
        if self.kind == ProfileKind.CONE:
            if self.duration == 0:
                return np.zeros_like(tau)
            return self.radius * np.clip(tau, 0.0, self.duration) / self.duration
        return np.interp(tau, self.taus, self.radii)

    @property
    def max_radius(self) -> float:
        if self.kind == ProfileKind.TABLE:
            return float(max(self.radii))
        return self.radius

    def area(self) -> float:
        """integral of rho over [0, duration] [m s]"""
        if self.kind == ProfileKind.CONSTANT:
            return self.radius * self.duration
        if self.kind == ProfileKind.CONE:
            return 0.5 * self.radius * self.duration
        return float(trapezoid(self.radii, self.taus))

    def scaled(self, radius_factor: float = 1.0, duration_factor: float = 1.0) -> "RadiusProfile":
        if self.kind == ProfileKind.TABLE:
            return RadiusProfile.table([t * duration_factor for t in self.taus],
                                       [r * radius_factor for r in self.radii])
        return RadiusProfile(self.kind, self.duration * duration_factor, self.radius * radius_factor)

    def to_dict(self) -> Dict:
        data = {"kind": self.kind.value, "duration": self.duration, "radius": self.max_radius}
        if self.kind == ProfileKind.TABLE:
            data["taus"] = list(self.taus)
            data["radii"] = list(self.radii)
        return data

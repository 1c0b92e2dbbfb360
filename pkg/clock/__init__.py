"""
Finite-dimensional quantum clocks.

A clock ticks when its state evolves into an orthogonal state. Times are
in seconds and Hamiltonians in joules.
"""
import math
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import optimize

from config import config
from units import default_constants
from utils.errors import InvalidClockError, NonUnitaryError, NumericError

logger = logging.getLogger(__name__)

HERMITIAN_RTOL = 1e-12
NORM_TOLERANCE = 1e-12
UNITARY_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class QuantumClock:
    """Hamiltonian H [J] and initial state psi0 of a d-level clock"""

    hamiltonian: np.ndarray
    initial_state: np.ndarray
    hbar: float = field(default_factory=lambda: default_constants().hbar)
    name: str = ""

    def __post_init__(self):
        H = np.asarray(self.hamiltonian, dtype=complex)
        psi = np.asarray(self.initial_state, dtype=complex).reshape(-1)
        object.__setattr__(self, "hamiltonian", H)
        object.__setattr__(self, "initial_state", psi)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise InvalidClockError(f"Hamiltonian must be square, got shape {H.shape}")
        d = H.shape[0]
        if d < 1 or d > config.max_clock_dimension:
            raise InvalidClockError(
                f"clock dimension {d} outside 1..{config.max_clock_dimension}")
        if psi.shape != (d,):
            raise InvalidClockError(f"initial state has {psi.size} components, Hamiltonian is {d}x{d}")
        if not (np.all(np.isfinite(H)) and np.all(np.isfinite(psi))):
            raise InvalidClockError("clock contains non-finite entries")
        scale = max(float(np.max(np.abs(H))), 1e-300)
        if np.max(np.abs(H - H.conj().T)) > HERMITIAN_RTOL * scale:
            raise InvalidClockError("Hamiltonian is not Hermitian to 1e-12")
        norm = float(np.linalg.norm(psi))
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidClockError(f"initial state has norm {norm!r}, expected 1")

    @property
    def dimension(self) -> int:
        return self.hamiltonian.shape[0]

    @cached_property
    def spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvalues [J] and the populations |<k|psi0>|^2"""
        try:
            energies, vectors = np.linalg.eigh(self.hamiltonian)
        except np.linalg.LinAlgError as e:
            raise NumericError(f"eigendecomposition failed: {e}", module="clock")
        object.__setattr__(self, "_eigenvectors", vectors)
        coefficients = vectors.conj().T @ self.initial_state
        return energies, np.abs(coefficients) ** 2

    @property
    def eigenvectors(self) -> np.ndarray:
        self.spectrum
        return self._eigenvectors

    @property
    def energy_mean(self) -> float:
        """<H> above the ground-state energy [J]"""
        energies, weights = self.spectrum
        return max(float(weights @ energies - energies[0]), 0.0)

    @property
    def energy_std(self) -> float:
        energies, weights = self.spectrum
        shifted = energies - energies[0]
        mean = float(weights @ shifted)
        return math.sqrt(max(float(weights @ shifted ** 2) - mean * mean, 0.0))

    def revival_time(self) -> Optional[float]:
        """2 pi hbar over the smallest level splitting among populated levels; None if stationary"""
        energies, weights = self.spectrum
        populated = energies[weights > 1e-15]
        gaps = np.abs(populated[:, None] - populated[None, :])
        scale = max(float(np.max(np.abs(energies))), 1e-300)
        gaps = gaps[gaps > 1e-12 * scale]
        if gaps.size == 0:
            return None
        return 2.0 * math.pi * self.hbar / float(np.min(gaps))

    def describe(self) -> Dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "energy_mean": self.energy_mean,
            "energy_std": self.energy_std,
        }


def survival_amplitude(clock: QuantumClock, t):
    """<psi0| exp(-i H t / hbar) |psi0>, scalar or array in t [s]"""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("time must be non-negative")
    energies, weights = clock.spectrum
    phases = np.exp(-1j * np.multiply.outer(t_arr, energies) / clock.hbar)
    amplitude = phases @ weights
    return complex(amplitude) if amplitude.ndim == 0 else amplitude


def evolve(clock: QuantumClock, t: float) -> np.ndarray:
    """psi(t) = exp(-i H t / hbar) psi0"""
    if t < 0:
        raise ValueError("time must be non-negative")
    energies, _ = clock.spectrum
    vectors = clock.eigenvectors
    return vectors @ (np.exp(-1j * energies * t / clock.hbar) * (vectors.conj().T @ clock.initial_state))


def _sub_threshold_minima(clock: QuantumClock, t_max: float, grid: int, threshold: float,
                          first_only: bool) -> List[float]:
    times = np.linspace(0.0, t_max, grid)
    magnitude = np.abs(survival_amplitude(clock, times))

    def offset(v, centre):
        return abs(survival_amplitude(clock, (centre + v) * t_max))

    found = []
    for i in range(1, grid):
        left = magnitude[i - 1]
        here = magnitude[i]
        right = magnitude[i + 1] if i + 1 < grid else math.inf
        if not (here <= left and here <= right and (here < left or here < right)):
            continue
        # offsets from the grid point
        centre = times[i] / t_max
        lo = times[i - 1] / t_max - centre
        hi = times[min(i + 1, grid - 1)] / t_max - centre
        result = optimize.minimize_scalar(offset, bounds=(lo, hi), args=(centre,), method="bounded",
                                          options={"xatol": 1e-15})
        if result.fun < threshold:
            found.append((centre + float(result.x)) * t_max)
            if first_only:
                break
    logger.debug(f"scan of {grid} points up to {t_max:.6e} s: {len(found)} sub-threshold minima")
    return found


def first_orthogonal_time(clock: QuantumClock, t_max: Optional[float] = None,
                          grid: Optional[int] = None, threshold: Optional[float] = None) -> Optional[float]:
    """
    Smallest t <= t_max with |amplitude| below threshold, located on a
    uniform scan and refined by bounded minimisation. None when the clock
    never reaches an orthogonal state in the window.
    """
    grid = grid or config.scan_grid
    threshold = threshold if threshold is not None else config.orthogonality_threshold
    if t_max is None:
        t_max = clock.revival_time()
        if t_max is None:
            return None
    if t_max <= 0:
        raise ValueError("scan window must be positive")
    minima = _sub_threshold_minima(clock, t_max, grid, threshold, first_only=True)
    return minima[0] if minima else None


def tick_count(clock: QuantumClock, duration: float, grid: Optional[int] = None,
               threshold: Optional[float] = None) -> int:
    """Number of disjoint sub-threshold dips of the survival amplitude in (0, duration]"""
    if duration <= 0:
        raise ValueError("duration must be positive")
    grid = grid or config.scan_grid
    threshold = threshold if threshold is not None else config.orthogonality_threshold
    return len(_sub_threshold_minima(clock, duration, grid, threshold, first_only=False))


def ml_lower_bound(clock: QuantumClock) -> float:
    """pi hbar / 2E; infinite for a stationary state"""
    energy = clock.energy_mean
    if energy <= 0:
        return math.inf
    return math.pi * clock.hbar / (2.0 * energy)


def heisenberg_lower_bound(clock: QuantumClock) -> float:
    """pi hbar / 2 Delta E; infinite for an energy eigenstate"""
    spread = clock.energy_std
    if spread <= 0:
        return math.inf
    return math.pi * clock.hbar / (2.0 * spread)


def frame_transform(clock: QuantumClock, U: np.ndarray) -> QuantumClock:
    """Clock seen in a rotated frame: H' = U H U^dagger, psi0' = U psi0"""
    U = np.asarray(U, dtype=complex)
    d = clock.dimension
    if U.shape != (d, d):
        raise NonUnitaryError(f"transformation has shape {U.shape}, clock is {d}-dimensional")
    if np.max(np.abs(U.conj().T @ U - np.eye(d))) > UNITARY_TOLERANCE:
        raise NonUnitaryError("transformation is not unitary to 1e-12")
    H = U @ clock.hamiltonian @ U.conj().T
    H = 0.5 * (H + H.conj().T)
    psi = U @ clock.initial_state
    psi = psi / np.linalg.norm(psi)
    return QuantumClock(H, psi, hbar=clock.hbar, name=clock.name)


def clock_summary(clock: QuantumClock, t_max: Optional[float] = None) -> Dict:
    """Tick time, both lower bounds and the M-L saturation of one clock"""
    t_orth = first_orthogonal_time(clock, t_max=t_max)
    ml = ml_lower_bound(clock)
    heisenberg = heisenberg_lower_bound(clock)
    summary = clock.describe()
    summary.update({
        "first_orthogonal_time": t_orth,
        "ml_lower_bound": ml,
        "heisenberg_lower_bound": heisenberg,
        "ml_saturation": (ml / t_orth) if t_orth and math.isfinite(ml) else None,
    })
    return summary


from clock.presets import ladder_clock, parse_preset, qubit_clock, random_clock, random_unitary  # noqa: E402

__all__ = [
    "QuantumClock",
    "clock_summary",
    "evolve",
    "first_orthogonal_time",
    "frame_transform",
    "heisenberg_lower_bound",
    "ladder_clock",
    "ml_lower_bound",
    "parse_preset",
    "qubit_clock",
    "random_clock",
    "random_unitary",
    "survival_amplitude",
    "tick_count",
]

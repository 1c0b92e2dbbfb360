"""
Named clock presets: qubit(omega), ladder(d, spacing) and seeded random clocks.
"""
import re
from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from units import default_constants
from utils.errors import InvalidClockError

PRESET_PATTERN = re.compile(r"^\s*(qubit|ladder|random)\s*\(([^)]*)\)\s*$")


def _hbar(hbar: Optional[float]) -> float:
    return hbar if hbar is not None else default_constants().hbar


def qubit_clock(omega: float, hbar: Optional[float] = None):
    """H = hbar omega sigma_z / 2 started in |+x>, which ticks after pi/omega"""
    from clock import QuantumClock

    if omega <= 0:
        raise InvalidClockError("qubit frequency must be positive")
    hbar = _hbar(hbar)
    H = 0.5 * hbar * omega * np.diag([1.0, -1.0])
    psi = np.array([1.0, 1.0]) / np.sqrt(2.0)
    return QuantumClock(H, psi, hbar=hbar, name=f"qubit({omega!r})")


def ladder_clock(d: int, spacing: float, hbar: Optional[float] = None):
    """Equally spaced levels k * spacing [J] in equal superposition; orthogonal after 2 pi hbar / (d spacing)"""
    from clock import QuantumClock

    if d < 2 or spacing <= 0:
        raise InvalidClockError("ladder clock needs d >= 2 and a positive spacing")
    H = np.diag(spacing * np.arange(d, dtype=float))
    psi = np.full(d, 1.0 / np.sqrt(d))
    return QuantumClock(H, psi, hbar=_hbar(hbar), name=f"ladder({d}, {spacing!r})")


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed d x d unitary"""
    if d == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1))
    return unitary_group.rvs(d, random_state=rng)


def random_clock(d: int, seed: int, hbar: Optional[float] = None, scale: float = 1.0):
    """
    Seeded d-level clock that reaches an orthogonal state: m <= d populated
    levels on an equally spaced ladder, the rest placed at random energies,
    all rotated by a Haar-random unitary. ``scale`` sets the spacing in
    units of hbar * 1 rad/s.
    """
    from clock import QuantumClock

    if d < 2:
        raise InvalidClockError("random clocks need at least two levels")
    hbar = _hbar(hbar)
    rng = np.random.default_rng(seed)
    spacing = hbar * scale * rng.uniform(0.5, 2.0)
    populated = int(rng.integers(2, d + 1))
    offset = rng.uniform(0.0, 3.0) * spacing
    energies = offset + spacing * np.arange(populated, dtype=float)
    if d > populated:
        spare = rng.uniform(0.0, offset + populated * spacing, size=d - populated)
        energies = np.concatenate([energies, spare])
    state = np.zeros(d, dtype=complex)
    phases = np.exp(2j * np.pi * rng.random(populated))
    state[:populated] = phases / np.sqrt(populated)
    U = random_unitary(d, rng)
    H = U @ np.diag(energies) @ U.conj().T
    H = 0.5 * (H + H.conj().T)
    psi = U @ state
    return QuantumClock(H, psi / np.linalg.norm(psi), hbar=hbar, name=f"random({d}, {seed})")


def parse_preset(text: str, hbar: Optional[float] = None):
    """Build a clock from 'qubit(omega)', 'ladder(d, spacing)' or 'random(d, seed)'"""
    match = PRESET_PATTERN.match(text)
    if not match:
        raise InvalidClockError(f"unknown clock preset '{text}'")
    name, raw = match.groups()
    try:
        args = [float(a) for a in raw.split(",") if a.strip()]
    except ValueError:
        raise InvalidClockError(f"preset '{text}' has non-numeric arguments")
    try:
        if name == "qubit" and len(args) == 1:
            return qubit_clock(args[0], hbar)
        if name == "ladder" and len(args) == 2:
            return ladder_clock(int(args[0]), args[1], hbar)
        if name == "random" and len(args) in (2, 3):
            return random_clock(int(args[0]), int(args[1]), hbar, *args[2:])
    except (TypeError, ValueError) as e:
        raise InvalidClockError(f"preset '{text}': {e}")
    raise InvalidClockError(f"preset '{text}' has the wrong number of arguments")

"""
Christoffel symbols, Riemann and Ricci tensors from metric components.

Derivatives use central 5-point stencils, accurate to O(h^4).
"""
from typing import Callable, Optional

import numpy as np

from config import config

STENCIL_OFFSETS = (-2.0, -1.0, 1.0, 2.0)
STENCIL_WEIGHTS = (1.0, -8.0, 8.0, -1.0)


def step_sizes(metric, x: np.ndarray, h: Optional[float] = None) -> np.ndarray:
    """Per-axis steps: an explicit h on every axis, else fd_step_factor times the local scale"""
    if h is not None:
        if h <= 0:
            raise ValueError("finite-difference step must be positive")
        return np.full(4, float(h))
    return config.fd_step_factor * metric.coordinate_scales(np.asarray(x, dtype=float))


def five_point_derivative(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
                          steps: np.ndarray) -> np.ndarray:
    """Stack of partial derivatives d_c fn(x) along each coordinate axis c"""
    x = np.asarray(x, dtype=float)
    derivatives = []
    for axis in range(len(x)):
        accum = None
        for offset, weight in zip(STENCIL_OFFSETS, STENCIL_WEIGHTS):
            shifted = x.copy()
            shifted[axis] += offset * steps[axis]
            term = weight * fn(shifted)
            accum = term if accum is None else accum + term
        derivatives.append(accum / (12.0 * steps[axis]))
    return np.stack(derivatives)


def christoffel_from_derivatives(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma^a_bc = 1/2 g^ad (d_b g_dc + d_c g_db - d_d g_bc), with dg[c, a, b] = d_c g_ab"""
    g_inv = np.linalg.inv(g)
    lowered = (np.einsum('bdc->dbc', dg)
               + np.einsum('cdb->dbc', dg)
               - dg)
    gamma = 0.5 * np.einsum('ad,dbc->abc', g_inv, lowered)
    return 0.5 * (gamma + gamma.transpose(0, 2, 1))


def metric_derivatives_fd(metric, x: np.ndarray, steps: np.ndarray) -> np.ndarray:
    return five_point_derivative(metric.metric, x, steps)


def riemann_tensor(christoffel: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
                   steps: np.ndarray) -> np.ndarray:
    """R^a_bcd = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb"""
    gamma = christoffel(x)
    d_gamma = five_point_derivative(christoffel, x, steps)  # d_gamma[e, a, b, c]
    return (np.einsum('cadb->abcd', d_gamma)
            - np.einsum('dacb->abcd', d_gamma)
            + np.einsum('ace,edb->abcd', gamma, gamma)
            - np.einsum('ade,ecb->abcd', gamma, gamma))


def ricci_from_riemann(riemann: np.ndarray) -> np.ndarray:
    return np.einsum('abad->bd', riemann)


def scalar_from_ricci(g: np.ndarray, ricci: np.ndarray) -> float:
    return float(np.einsum('bd,bd->', np.linalg.inv(g), ricci))

"""Central finite differences with Richardson extrapolation.

All steps follow the cube-root-of-epsilon rule, scaled per coordinate:
delta_j = rel_step * max(1, |x_j|).  Richardson extrapolation combines the
central estimates at steps (delta, delta/2) to cancel the leading O(delta^2)
truncation term, leaving O(delta^4).  With rel_step = 6e-6 this puts the
noise floor of first derivatives near 1e-11, which downstream second-level
differentiation (flow Jacobians, bracket derivatives) relies on.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

# cube-root-of-eps step for first derivatives of O(1) smooth functions
DEFAULT_REL_STEP = 6e-6


def coordinate_steps(x: np.ndarray, rel_step: float = DEFAULT_REL_STEP) -> np.ndarray:
    """Per-coordinate step sizes delta_j = rel_step * max(1, |x_j|)."""
    x = np.asarray(x, dtype=float)
    return rel_step * np.maximum(1.0, np.abs(x))


def _central(f: Callable, x: np.ndarray, j: int, h: float):
    e = np.zeros_like(x)
    e[j] = h
    return (np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2.0 * h)


def richardson_pair(d_h, d_h2):
    """Extrapolate central-difference estimates taken at steps h and h/2."""
    return (4.0 * np.asarray(d_h2) - np.asarray(d_h)) / 3.0


def central_gradient(f: Callable[[np.ndarray], float], x: np.ndarray,
                     rel_step: float = DEFAULT_REL_STEP,
                     richardson: bool = True) -> np.ndarray:
    """Gradient of a scalar function by central differences."""
    x = np.asarray(x, dtype=float)
    steps = coordinate_steps(x, rel_step)
    g = np.empty_like(x)
    for j, h in enumerate(steps):
        d1 = _central(f, x, j, h)
        if richardson:
            d2 = _central(f, x, j, 0.5 * h)
            g[j] = richardson_pair(d1, d2)
        else:
            g[j] = d1
    return g


def central_jacobian(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
                     rel_step: float = DEFAULT_REL_STEP,
                     richardson: bool = True) -> np.ndarray:
    """Jacobian of a vector function, column by column.

    Returns the (m, d) matrix J[i, j] = d f_i / d x_j.
    """
    x = np.asarray(x, dtype=float)
    steps = coordinate_steps(x, rel_step)
    cols = []
    for j, h in enumerate(steps):
        d1 = _central(f, x, j, h)
        if richardson:
            d2 = _central(f, x, j, 0.5 * h)
            cols.append(richardson_pair(d1, d2))
        else:
            cols.append(d1)
    return np.stack(cols, axis=-1)


def central_hessian(f: Callable[[np.ndarray], float], x: np.ndarray,
                    rel_step: float = 1e-4) -> np.ndarray:
    """Hessian of a scalar function from second-order central stencils.

    Uses the fourth-root-of-eps step appropriate for second derivatives.
    The result is explicitly symmetrised.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    steps = coordinate_steps(x, rel_step)
    H = np.empty((d, d))
    f0 = float(f(x))
    for j in range(d):
        hj = steps[j]
        ej = np.zeros(d)
        ej[j] = hj
        H[j, j] = (float(f(x + ej)) - 2.0 * f0 + float(f(x - ej))) / hj**2
        for k in range(j + 1, d):
            hk = steps[k]
            ek = np.zeros(d)
            ek[k] = hk
            val = (float(f(x + ej + ek)) - float(f(x + ej - ek))
                   - float(f(x - ej + ek)) + float(f(x - ej - ek))) / (4.0 * hj * hk)
            H[j, k] = H[k, j] = val
    return 0.5 * (H + H.T)

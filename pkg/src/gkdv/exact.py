"""Closed-form soliton of the geophysical KdV equation.

    eta(x, tau) = 2 (u + w) sech^2( sqrt(1.5 (u + w)) (x - u tau) )

Used as ground truth for every error metric in the package.
"""

from __future__ import annotations

import numpy as np

from .hyperalgebra import _sech
from .params import GkdvParams


def exact_eval(params: GkdvParams, x, tau):
    scalar = np.ndim(x) == 0 and np.ndim(tau) == 0
    z = params.k * (np.asarray(x, dtype=float) - params.u * np.asarray(tau, dtype=float))
    val = params.amplitude * _sech(z) ** 2
    return float(val) if scalar else val


def initial_condition_eval(params: GkdvParams, x):
    return exact_eval(params, x, 0.0)


def fd_residual(params: GkdvParams, x, tau, hx: float = 1e-3, ht: float = 1e-4):
    """Finite-difference residual of the PDE for the closed form.

    Fourth-order central stencils in both x and tau, so truncation error stays
    well below round-off amplification at these step sizes.
    """
    def f(dx, dt):
        return exact_eval(params, np.asarray(x) + dx, np.asarray(tau) + dt)

    eta = f(0.0, 0.0)
    eta_t = (f(0, -2 * ht) - 8 * f(0, -ht) + 8 * f(0, ht) - f(0, 2 * ht)) / (12 * ht)
    eta_x = (f(-2 * hx, 0) - 8 * f(-hx, 0) + 8 * f(hx, 0) - f(2 * hx, 0)) / (12 * hx)
    eta_xxx = (
        f(-3 * hx, 0) - 8 * f(-2 * hx, 0) + 13 * f(-hx, 0)
        - 13 * f(hx, 0) + 8 * f(2 * hx, 0) - f(3 * hx, 0)
    ) / (8 * hx**3)
    return eta_t - params.w * eta_x + 1.5 * eta * eta_x + eta_xxx / 6.0

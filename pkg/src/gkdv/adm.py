"""Adomian decomposition of the geophysical KdV equation.

    eta_tau - w eta_x + 3/2 eta eta_x + 1/6 eta_xxx = 0
    eta(x, 0) = 2 (u + w) sech^2(k x),   k = sqrt(1.5 (u + w))

With L = d/dtau, R = 1/6 d^3/dx^3 - w d/dx and N eta = eta eta_x the
components follow

    eta_0 = eta(x, 0)
    eta_{n+1} = -L^{-1}(R eta_n + 3/2 A_n),   A_n = sum_j eta_j (eta_{n-j})_x

and every component is held exactly as a :class:`HyperPoly`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .hyperalgebra import (HyperPoly, HyperTerm, IncompatibleWavenumber, _diff_tau,
                           add, canonicalize, diff_x, evaluate, integrate_tau, mul)
from .params import DEFAULT_U, GkdvParams

DEFAULT_TERMS = 5

__all__ = [
    "AdmSolution", "GkdvParams", "DEFAULT_TERMS", "DEFAULT_U", "adomian_polynomial",
    "apply_R", "eval_partial_sum", "initial_term", "next_term", "residual", "solve",
]


def initial_term(params: GkdvParams) -> HyperPoly:
    return canonicalize([HyperTerm(params.amplitude, 2, 0, 0)], params.k)


def apply_R(p: HyperPoly, params: GkdvParams) -> HyperPoly:
    if p.k != params.k:
        raise IncompatibleWavenumber(f"polynomial k={p.k!r} does not match params k={params.k!r}")
    d1 = diff_x(p)
    d3 = diff_x(diff_x(d1))
    return add(d3.scale(1.0 / 6.0), d1.scale(-params.w))


def adomian_polynomial(components: Sequence[HyperPoly], n: int) -> HyperPoly:
    """A_n for the quadratic nonlinearity eta * eta_x."""
    if n < 0 or len(components) < n + 1:
        raise ValueError(f"A_{n} needs {n + 1} components, got {len(components)}")
    acc = HyperPoly.zero(components[0].k)
    for j in range(n + 1):
        acc = add(acc, mul(components[j], diff_x(components[n - j])))
    return acc


def next_term(components: Sequence[HyperPoly], params: GkdvParams) -> HyperPoly:
    if not components:
        raise ValueError("next_term needs at least the initial component")
    n = len(components) - 1
    rhs = add(apply_R(components[n], params), adomian_polynomial(components, n).scale(1.5))
    return integrate_tau(rhs).scale(-1.0)


@dataclass(frozen=True)
class AdmSolution:
    params: GkdvParams
    components: tuple[HyperPoly, ...]

    @property
    def n_terms(self) -> int:
        return len(self.components)

    def _check(self, n_terms: int) -> None:
        if not 1 <= n_terms <= len(self.components):
            raise ValueError(f"n_terms must be in [1, {len(self.components)}], got {n_terms}")

    def partial_sum(self, n_terms: int) -> HyperPoly:
        self._check(n_terms)
        acc = self.components[0]
        for comp in self.components[1:n_terms]:
            acc = add(acc, comp)
        return acc


def solve(params: GkdvParams, n_terms: int = DEFAULT_TERMS) -> AdmSolution:
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    comps = [initial_term(params)]
    while len(comps) < n_terms:
        comps.append(next_term(comps, params))
    for n, comp in enumerate(comps):
        assert all(t.tau_pow == n for t in comp.terms), f"eta_{n} is not homogeneous in tau"
    return AdmSolution(params, tuple(comps))


def eval_partial_sum(sol: AdmSolution, n_terms: int, x, tau):
    """Sum of the first ``n_terms`` components at ``(x, tau)``."""
    sol._check(n_terms)
    total = evaluate(sol.components[0], x, tau)
    for comp in sol.components[1:n_terms]:
        total = total + evaluate(comp, x, tau)
    return total


def residual(sol: AdmSolution, n_terms: int, x, tau):
    """PDE residual of the truncated series at ``(x, tau)``.

    All derivatives are taken exactly in the term algebra; only the final
    product eta * eta_x is formed pointwise.
    """
    s = sol.partial_sum(n_terms)
    s_x = diff_x(s)
    s_xxx = diff_x(diff_x(s_x))
    s_t = _diff_tau(s)
    eta = evaluate(s, x, tau)
    eta_x = evaluate(s_x, x, tau)
    return (evaluate(s_t, x, tau) - sol.params.w * eta_x
            + 1.5 * eta * eta_x + evaluate(s_xxx, x, tau) / 6.0)

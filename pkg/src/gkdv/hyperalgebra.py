"""Closed-form algebra on sums of ``c * sech(kx)**a * tanh(kx)**b * tau**m``.

Every component of the Adomian series for the sech^2 soliton lives in this
family, and the family is closed under the operations the recursion needs:
addition, multiplication, d/dx and integration in tau from 0.

Canonical form keeps ``b`` in {0, 1} (``tanh**2 = 1 - sech**2``), merges like
terms, prunes coefficients that are negligible relative to the largest one and
sorts terms by ``(m, a, b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

PRUNE_RELATIVE = 1e-14


class IncompatibleWavenumber(ValueError):
    """Raised when combining polynomials built for different parameter sets."""


class HyperTerm(NamedTuple):
    coeff: float
    sech_pow: int
    tanh_pow: int
    tau_pow: int

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.tau_pow, self.sech_pow, self.tanh_pow)


def _reduce_tanh(term: HyperTerm) -> list[HyperTerm]:
    # sech^a tanh^b = sech^a tanh^(b-2) - sech^(a+2) tanh^(b-2), applied until b < 2
    pending = [term]
    out = []
    while pending:
        c, a, b, m = pending.pop()
        if b < 2:
            out.append(HyperTerm(c, a, b, m))
        else:
            pending.append(HyperTerm(c, a, b - 2, m))
            pending.append(HyperTerm(-c, a + 2, b - 2, m))
    return out


def canonicalize(raw: Iterable[HyperTerm], k: float) -> "HyperPoly":
    """Bring an arbitrary term list into canonical form at wavenumber ``k``."""
    merged: dict[tuple[int, int, int], float] = {}
    for term in raw:
        term = HyperTerm(*term)
        if not math.isfinite(term.coeff):
            raise ValueError(f"non-finite coefficient in term {term}")
        if term.sech_pow < 0 or term.tanh_pow < 0 or term.tau_pow < 0:
            raise ValueError(f"negative exponent in term {term}")
        for t in _reduce_tanh(term):
            merged[t.key] = merged.get(t.key, 0.0) + t.coeff

    if not merged:
        return HyperPoly(k, ())
    biggest = max(abs(c) for c in merged.values())
    cutoff = PRUNE_RELATIVE * biggest
    terms = tuple(
        HyperTerm(c, a, b, m)
        for (m, a, b), c in sorted(merged.items())
        if c != 0.0 and abs(c) >= cutoff
    )
    return HyperPoly(k, terms)


def _sech(z):
    # 2 e^{-|z|} / (1 + e^{-2|z|}) never overflows
    e = np.exp(-np.abs(z))
    return 2.0 * e / (1.0 + e * e)


@dataclass(frozen=True)
class HyperPoly:
    """Canonical polynomial in sech(kx), tanh(kx) and tau.

    Build instances through :func:`canonicalize` (or the helpers below); the
    constructor trusts its input.
    """

    k: float
    terms: tuple[HyperTerm, ...] = ()

    def __post_init__(self):
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"wavenumber must be positive and finite, got {self.k}")

    @classmethod
    def zero(cls, k: float) -> "HyperPoly":
        return cls(k, ())

    @classmethod
    def monomial(cls, coeff: float, sech_pow: int = 0, tanh_pow: int = 0,
                 tau_pow: int = 0, *, k: float) -> "HyperPoly":
        return canonicalize([HyperTerm(coeff, sech_pow, tanh_pow, tau_pow)], k)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "HyperPoly") -> "HyperPoly":
        return add(self, other)

    def __sub__(self, other: "HyperPoly") -> "HyperPoly":
        return add(self, other.scale(-1.0))

    def __neg__(self) -> "HyperPoly":
        return self.scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, HyperPoly):
            return mul(self, other)
        return self.scale(float(other))

    __rmul__ = __mul__

    def scale(self, factor: float) -> "HyperPoly":
        return canonicalize(
            [HyperTerm(factor * t.coeff, t.sech_pow, t.tanh_pow, t.tau_pow) for t in self.terms],
            self.k,
        )

    def __call__(self, x, tau):
        return evaluate(self, x, tau)

    def to_text(self) -> str:
        """Debug serialization, one term per line."""
        return "".join(
            f"{t.coeff:.17g} * sech^{t.sech_pow} * tanh^{t.tanh_pow} * tau^{t.tau_pow}\n"
            for t in self.terms
        )

    def max_tau_power(self) -> int:
        return max((t.tau_pow for t in self.terms), default=0)


def _check_k(p: HyperPoly, q: HyperPoly) -> None:
    if p.k != q.k:
        raise IncompatibleWavenumber(f"wavenumbers differ: {p.k!r} vs {q.k!r}")


def add(p: HyperPoly, q: HyperPoly) -> HyperPoly:
    _check_k(p, q)
    return canonicalize(p.terms + q.terms, p.k)


def mul(p: HyperPoly, q: HyperPoly) -> HyperPoly:
    _check_k(p, q)
    products = [
        HyperTerm(s.coeff * t.coeff, s.sech_pow + t.sech_pow,
                  s.tanh_pow + t.tanh_pow, s.tau_pow + t.tau_pow)
        for s in p.terms
        for t in q.terms
    ]
    return canonicalize(products, p.k)


def diff_x(p: HyperPoly) -> HyperPoly:
    """Exact derivative in x.

    d/dx sech^a        = -a k sech^a tanh
    d/dx sech^a tanh   = -a k sech^a + (a + 1) k sech^(a+2)
    """
    k = p.k
    out = []
    for c, a, b, m in p.terms:
        if b == 0:
            if a:
                out.append(HyperTerm(-a * k * c, a, 1, m))
        else:
            if a:
                out.append(HyperTerm(-a * k * c, a, 0, m))
            out.append(HyperTerm((a + 1) * k * c, a + 2, 0, m))
    return canonicalize(out, k)


def integrate_tau(p: HyperPoly) -> HyperPoly:
    """Integral from 0 to tau; the result vanishes at tau = 0."""
    return canonicalize(
        [HyperTerm(c / (m + 1), a, b, m + 1) for c, a, b, m in p.terms], p.k
    )


def _diff_tau(p: HyperPoly) -> HyperPoly:
    return canonicalize(
        [HyperTerm(c * m, a, b, m - 1) for c, a, b, m in p.terms if m > 0], p.k
    )


def evaluate(p: HyperPoly, x, tau):
    """Evaluate ``p`` at ``(x, tau)``; broadcasts over numpy arrays.

    Terms are accumulated in canonical order so results are reproducible.
    """
    scalar = np.ndim(x) == 0 and np.ndim(tau) == 0
    x = np.asarray(x, dtype=float)
    tau = np.asarray(tau, dtype=float)
    s = _sech(p.k * x)
    t = np.tanh(p.k * x)
    total = np.zeros(np.broadcast(x, tau).shape)
    for c, a, b, m in p.terms:
        val = c * s**a
        if b:
            val = val * t
        if m:
            val = val * tau**m
        total = total + val
    return float(total) if scalar else total

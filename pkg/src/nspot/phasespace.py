"""Scenario (iii): the continuous phase-space representation applied
numerically. The operators

    P_j = (1/sqrt2)(p_j - i d/dq^j),   Q^k = (1/sqrt2)(q^k + i d/dp_k)

act on complex functions psi(q; p) through central differences, so every
identity ([P,Q] = -i, eigenfunction relations, the potential equation for the
singular Omega_0) is checked as an O(h^2) residual rather than symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .continuum import IsometryParams, _as_point
from .errors import SingularPointError, StencilError, ValidationError

_SQRT2 = math.sqrt(2.0)
DEFAULT_STEP = 1e-4


class PhasePoint(NamedTuple):
    q: np.ndarray
    p: np.ndarray


def phase_point(q, p) -> PhasePoint:
    return PhasePoint(_as_point(q), _as_point(p))


@dataclass
class PhaseField:
    """Complex-valued function handle of (q, p) with an optional declared
    singular-set predicate."""

    fn: Callable
    singular: Callable | None = None

    def __call__(self, z: PhasePoint) -> complex:
        return complex(self.fn(z))

    def hits_singular(self, z: PhasePoint) -> bool:
        return self.singular is not None and bool(self.singular(z))


def _as_field(psi) -> PhaseField:
    return psi if isinstance(psi, PhaseField) else PhaseField(psi)


def _shift(z: PhasePoint, which: str, axis: int, delta: float) -> PhasePoint:
    q, p = z.q.copy(), z.p.copy()
    if which == "q":
        q[axis] += delta
    else:
        p[axis] += delta
    return PhasePoint(q, p)


def _central(psi: PhaseField, z: PhasePoint, which: str, axis: int, h: float) -> complex:
    zp = _shift(z, which, axis, +h)
    zm = _shift(z, which, axis, -h)
    if psi.hits_singular(zp) or psi.hits_singular(zm) or psi.hits_singular(z):
        raise StencilError("stencil touches the declared singular set")
    return (psi(zp) - psi(zm)) / (2.0 * h)


def apply_P(psi, axis: int, z: PhasePoint, h: float = DEFAULT_STEP) -> complex:
    """(1/sqrt2)(p_j psi - i d_qj psi) with a central difference, O(h^2)."""
    if h <= 0:
        raise ValidationError("step must be positive")
    psi = _as_field(psi)
    return (z.p[axis] * psi(z) - 1j * _central(psi, z, "q", axis, h)) / _SQRT2


def apply_Q(psi, axis: int, z: PhasePoint, h: float = DEFAULT_STEP) -> complex:
    """(1/sqrt2)(q^k psi + i d_pk psi) with a central difference, O(h^2)."""
    if h <= 0:
        raise ValidationError("step must be positive")
    psi = _as_field(psi)
    return (z.q[axis] * psi(z) + 1j * _central(psi, z, "p", axis, h)) / _SQRT2


def psi_momentum(k, z: PhasePoint, amplitude: complex = 1.0) -> complex:
    """Momentum eigenfunction A exp[i (sqrt2 k_j - p_j) q^j]; P_j psi = k_j psi."""
    if amplitude == 0:
        raise ValidationError("amplitude must be nonzero")
    k = _as_point(k)
    return amplitude * np.exp(1j * float(np.dot(_SQRT2 * k - z.p, z.q)))


def psi_position(x, z: PhasePoint, amplitude: complex = 1.0) -> complex:
    """Position eigenfunction B exp[-i (sqrt2 x^j - q^j) p_j]; Q^j psi = x^j psi."""
    if amplitude == 0:
        raise ValidationError("amplitude must be nonzero")
    x = _as_point(x)
    return amplitude * np.exp(-1j * float(np.dot(_SQRT2 * x - z.q, z.p)))


def omega0(z: PhasePoint) -> complex:
    """The singular phase-space potential e^{-i p.q} / (4 sqrt2 pi |q|)."""
    r = float(np.linalg.norm(z.q))
    if r == 0.0:
        raise SingularPointError("Omega_0 diverges as |q| -> 0")
    return np.exp(-1j * float(np.dot(z.p, z.q))) / (4.0 * _SQRT2 * math.pi * r)


def omega0_field() -> PhaseField:
    return PhaseField(omega0, singular=lambda z: float(np.linalg.norm(z.q)) == 0.0)


def pde_residual_omega(z: PhasePoint, h: float = 1e-3) -> complex:
    """Residual of -1/2 delta^{jk} (p_j - i d_qj)(p_k - i d_qk) Omega_0 by
    nested central differences; O(h^2) away from |q| = 0."""
    return pde_residual(omega0_field(), z, h)


def pde_residual(psi, z: PhasePoint, h: float = 1e-3) -> complex:
    """-1/2 sum_j (p_j - i d_qj)^2 psi via nested central differences."""
    psi = _as_field(psi)

    def once(axis):
        def inner(zz: PhasePoint) -> complex:
            return zz.p[axis] * psi(zz) - 1j * _central(psi, zz, "q", axis, h)

        return PhaseField(inner, singular=psi.singular)

    total = 0.0 + 0.0j
    for axis in range(3):
        g = once(axis)
        total += z.p[axis] * g(z) - 1j * _central(g, z, "q", axis, h)
    return -0.5 * total


def canonical_io3(z: PhasePoint, g: IsometryParams) -> PhasePoint:
    """The IO(3) subgroup of canonical transformations generated by
    S(phat, q) = (c^j + r^j_k q^k) phat_j:  qhat = c + R q, p = R^T phat."""
    qhat = g.translation + g.rotation @ z.q
    phat = g.rotation @ z.p
    return PhasePoint(qhat, phat)

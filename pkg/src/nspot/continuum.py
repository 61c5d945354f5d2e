"""Scenario (i): the Coulomb potential on E3 and its Green's function,
finite-difference Laplacian residuals, trivariate polynomial fields, and the
translation-as-truncated-exponential operator exp(-c.grad) acting on them,
plus the inhomogeneous orthogonal group action x -> c + R x."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularPointError, StencilError, ValidationError

FOUR_PI = 4.0 * math.pi


def _as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (3,):
        raise ValidationError("a point must have exactly three components")
    if not np.all(np.isfinite(a)):
        raise ValidationError("point components must be finite")
    return a


def coulomb_v0(p) -> float:
    """V0(x) = 1/(4 pi |x|), the source-at-origin potential; singular at 0."""
    r = float(np.linalg.norm(_as_point(p)))
    if r == 0.0:
        raise SingularPointError("V0 diverges at the origin")
    return 1.0 / (FOUR_PI * r)


def greens_e3(p, source) -> float:
    """Green's function 1/(4 pi |x - xhat|) for the E3 potential equation."""
    d = _as_point(p) - _as_point(source)
    r = float(np.linalg.norm(d))
    if r == 0.0:
        raise SingularPointError("coincident field and source points")
    return 1.0 / (FOUR_PI * r)


def fd_laplacian(f, p, h: float, singular=None) -> float:
    """Central 7-point second-difference Laplacian of a scalar callable, O(h^2).

    `singular` is an optional predicate declaring points the stencil must not
    touch (raises StencilError). Singularities are declared by the caller, not
    auto-detected, so the evaluation itself stays pure.
    """
    if h <= 0:
        raise ValidationError("step must be positive")
    p = _as_point(p)
    pts = [p]
    for j in range(3):
        for s in (+1.0, -1.0):
            q = p.copy()
            q[j] += s * h
            pts.append(q)
    if singular is not None and any(singular(q) for q in pts):
        raise StencilError("stencil touches a declared singular point")
    c = f(pts[0])
    acc = -6.0 * c
    for q in pts[1:]:
        acc += f(q)
    return acc / (h * h)


@dataclass
class PolyField:
    """Trivariate polynomial as a sparse map (i, j, k) -> coefficient."""

    coeffs: dict = field(default_factory=dict)

    @staticmethod
    def from_terms(terms) -> "PolyField":
        f = PolyField()
        for expo, c in dict(terms).items():
            if c != 0.0:
                f.coeffs[tuple(int(e) for e in expo)] = float(c)
        return f

    def degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def __call__(self, p) -> float:
        x, y, z = _as_point(p)
        return sum(c * x ** i * y ** j * z ** k for (i, j, k), c in self.coeffs.items())

    def partial(self, axis: int) -> "PolyField":
        out = {}
        for expo, c in self.coeffs.items():
            n = expo[axis]
            if n == 0:
                continue
            e = list(expo)
            e[axis] = n - 1
            key = tuple(e)
            out[key] = out.get(key, 0.0) + c * n
        return PolyField.from_terms(out)

    def directional(self, c3) -> "PolyField":
        # (c . grad) f
        c3 = _as_point(c3)
        out = PolyField()
        for axis in range(3):
            if c3[axis] != 0.0:
                out = out + self.partial(axis).scaled(c3[axis])
        return out

    def laplacian(self) -> "PolyField":
        out = PolyField()
        for axis in range(3):
            out = out + self.partial(axis).partial(axis)
        return out

    def scaled(self, a: float) -> "PolyField":
        return PolyField.from_terms({e: a * c for e, c in self.coeffs.items()})

    def __add__(self, other: "PolyField") -> "PolyField":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0.0) + c
        return PolyField.from_terms(out)

    def exact_shift(self, c3) -> "PolyField":
        """f(x - c) by direct binomial expansion of every monomial (oracle
        route, independent of the exponential-series operator)."""
        c3 = _as_point(c3)
        out = {}
        for (i, j, k), coef in self.coeffs.items():
            for a in range(i + 1):
                for b in range(j + 1):
                    for d in range(k + 1):
                        w = (
                            coef
                            * math.comb(i, a) * (-c3[0]) ** (i - a)
                            * math.comb(j, b) * (-c3[1]) ** (j - b)
                            * math.comb(k, d) * (-c3[2]) ** (k - d)
                        )
                        out[(a, b, d)] = out.get((a, b, d), 0.0) + w
        return PolyField.from_terms(out)

    def max_coeff_diff(self, other: "PolyField") -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self.coeffs.get(e, 0.0) - other.coeffs.get(e, 0.0)) for e in keys), default=0.0)


def translate_exp(f: PolyField, c, order: int) -> PolyField:
    """Apply sum_{j<=order} (-1)^j/j! (c.grad)^j to f.

    For order >= degree(f) this equals the exact substitution f(x - c):
    the Taylor series of a polynomial is finite, so the truncated
    exponential exp(-c.grad) acts exactly."""
    if order < 0:
        raise ValidationError("order must be non-negative")
    out = f
    term = f
    for j in range(1, order + 1):
        term = term.directional(c).scaled(-1.0 / j)
        out = out + term
    return out


@dataclass(frozen=True)
class IsometryParams:
    """Rotation r^j_k plus translation c^j of the inhomogeneous orthogonal
    group; validated orthogonal on construction (R^T R = 1 within 1e-12)."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        c = np.asarray(self.translation, dtype=float)
        if r.shape != (3, 3) or c.shape != (3,):
            raise ValidationError("rotation must be 3x3 and translation length 3")
        if np.max(np.abs(r.T @ r - np.eye(3))) > 1e-12:
            raise ValidationError("rotation matrix is not orthogonal")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", c)

    @property
    def is_proper(self) -> bool:
        return np.linalg.det(self.rotation) > 0

    def inverse_apply(self, phat) -> np.ndarray:
        # x = a (xhat - c) with a = R^{-1} = R^T
        return self.rotation.T @ (_as_point(phat) - self.translation)


def io3_apply(p, g: IsometryParams) -> np.ndarray:
    """xhat = c + R x."""
    return g.translation + g.rotation @ _as_point(p)


def rotation_from_axis_angle(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix (proper orthogonal) about a unit axis."""
    a = _as_point(axis)
    a = a / np.linalg.norm(a)
    K = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + math.sin(angle) * K + (1 - math.cos(angle)) * (K @ K)

"""Scenario (iv) operator algebra. The weighted difference operators on
half-line lattice functions (f(n) := 0 for n < 0),

    (D# f)(n) = (1/sqrt2)[sqrt(n+1) f(n+1) - sqrt(n) f(n-1)]
    (D0 f)(n) = (1/sqrt2)[sqrt(n+1) f(n+1) + sqrt(n) f(n-1)],

realize P = -i D# and Q = D0 as an exact discrete representation:
D# D0 - D0 D# = identity, hence [P, Q] = -i with no O(h^2) truncation error.
Truncating to n <= N corrupts only the outermost rows; the interior of every
composed identity is exact, which is what the tests pin down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .specfun import hermite_weighted


@dataclass
class HalfLineField:
    """Values on n in {0..N} (per axis for multi-axis arrays); the value is
    zero by convention for n < 0, and the top `truncated_rows` entries of a
    derived field are flagged invalid (they would need data beyond N)."""

    values: np.ndarray
    truncated_rows: int = 0

    @property
    def n_max(self) -> int:
        return self.values.shape[0] - 1

    def valid_slice(self):
        hi = self.values.shape[0] - self.truncated_rows
        return self.values[:hi]


def _weights(n_pts: int):
    n = np.arange(n_pts, dtype=float)
    return np.sqrt(n + 1.0), np.sqrt(n)


def _shift_down(values: np.ndarray, axis: int) -> np.ndarray:
    # g(n) = f(n+1), zero-filled at the top (the flagged row)
    out = np.zeros_like(values)
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    src[axis] = slice(1, None)
    dst[axis] = slice(0, -1)
    out[tuple(dst)] = values[tuple(src)]
    return out


def _shift_up(values: np.ndarray, axis: int) -> np.ndarray:
    # g(n) = f(n-1), implicit zero at n = 0
    out = np.zeros_like(values)
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    src[axis] = slice(0, -1)
    dst[axis] = slice(1, None)
    out[tuple(dst)] = values[tuple(src)]
    return out


def _axis_broadcast(w: np.ndarray, ndim: int, axis: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = w.size
    return w.reshape(shape)


def delta_sharp(f: HalfLineField, axis: int = 0) -> HalfLineField:
    """(D# f)(n) = (1/sqrt2)[sqrt(n+1) f(n+1) - sqrt(n) f(n-1)]."""
    v = f.values
    up, dn = _weights(v.shape[axis])
    out = (
        _axis_broadcast(up, v.ndim, axis) * _shift_down(v, axis)
        - _axis_broadcast(dn, v.ndim, axis) * _shift_up(v, axis)
    ) / math.sqrt(2.0)
    return HalfLineField(out, truncated_rows=f.truncated_rows + 1)


def delta_circ(f: HalfLineField, axis: int = 0) -> HalfLineField:
    """(D0 f)(n) = (1/sqrt2)[sqrt(n+1) f(n+1) + sqrt(n) f(n-1)]."""
    v = f.values
    up, dn = _weights(v.shape[axis])
    out = (
        _axis_broadcast(up, v.ndim, axis) * _shift_down(v, axis)
        + _axis_broadcast(dn, v.ndim, axis) * _shift_up(v, axis)
    ) / math.sqrt(2.0)
    return HalfLineField(out, truncated_rows=f.truncated_rows + 1)


@dataclass
class OperatorMatrix:
    """Dense one-axis operator truncated to indices 0..N; composed identities
    are only trustworthy on the interior rows 0..N-2."""

    label: str
    matrix: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_max(self) -> int:
        return self.size - 1

    @property
    def interior(self) -> slice:
        return slice(0, self.size - 1 if self.size > 1 else 1)


def _sharp_matrix(n_trunc: int, dtype=float) -> np.ndarray:
    # entries computed in the requested (real) dtype so extended-precision
    # callers get extended-precision square roots, not cast float64 ones
    w = np.sqrt(np.arange(1, n_trunc + 1, dtype=dtype) / dtype(2))
    return np.diag(w, 1) - np.diag(w, -1)


def _circ_matrix(n_trunc: int, dtype=float) -> np.ndarray:
    w = np.sqrt(np.arange(1, n_trunc + 1, dtype=dtype) / dtype(2))
    return np.diag(w, 1) + np.diag(w, -1)


def op_matrix(label: str, n_trunc: int) -> OperatorMatrix:
    """Truncated one-axis operator matrix on indices 0..N.

    P_{n,n+1} = -i sqrt((n+1)/2), P_{n,n-1} = +i sqrt(n/2) (Hermitian);
    Q_{n,n+1} = sqrt((n+1)/2),   Q_{n,n-1} = sqrt(n/2)    (real symmetric);
    'casimir' is the one-axis building block D# D# of delta^{jk} D#_j D#_k.
    """
    if n_trunc < 2:
        raise DomainError("truncation must be at least 2")
    if label == "P":
        m = -1j * _sharp_matrix(n_trunc)
    elif label == "Q":
        m = _circ_matrix(n_trunc).astype(complex)
    elif label == "delta_sharp":
        m = _sharp_matrix(n_trunc)
    elif label == "delta_circ":
        m = _circ_matrix(n_trunc)
    elif label == "casimir":
        s = _sharp_matrix(n_trunc)
        m = s @ s
    else:
        raise DomainError(f"unknown operator label {label!r}")
    return OperatorMatrix(label, m)


def commutator_residual(n_trunc: int) -> np.ndarray:
    """Entrywise |(PQ - QP) + i I| on the truncated matrices.

    The products are carried in extended precision so the returned residual
    reflects the operator algebra (exactly zero on rows/columns 0..N-2) and
    not the rounding of fl(sqrt(x))^2; in float64 that rounding alone reaches
    ~2e-14 by N = 64. Truncation corrupts the boundary rows: the diagonal of
    row N comes out at i N instead of -i."""
    if n_trunc < 4:
        raise DomainError("need truncation >= 4")
    sharp = _sharp_matrix(n_trunc, dtype=np.longdouble)
    circ = _circ_matrix(n_trunc, dtype=np.longdouble)
    # PQ - QP = -i (D# D0 - D0 D#) with real D#, D0
    comm = sharp @ circ - circ @ sharp
    resid = np.abs(comm - np.eye(n_trunc + 1, dtype=np.longdouble))
    return resid.astype(float)


def xi(n: int, k: float) -> complex:
    """Momentum eigenfunction of the discrete representation:
    xi_n(k) = i^n e^{-k^2/2} H_n(k) / (pi^{1/4} 2^{n/2} sqrt(n!)).

    The i^n phase makes -i D# xi_n = k xi_n hold with the paper's signs."""
    if n < 0:
        raise DomainError("index must be non-negative")
    return (1j) ** (n % 4) * hermite_weighted(n, k)


@dataclass(frozen=True)
class EllipseState:
    """A point of the n-th phase-plane ellipse
    (1/2)[ell^2 p^2 + x^2/ell^2] - 1/2 = n."""

    n: int
    ell: float
    x: float
    p: float

    def invariant(self) -> float:
        return 0.5 * ((self.ell * self.p) ** 2 + (self.x / self.ell) ** 2) - 0.5


def ellipse_points(n: int, ell: float, angle: float) -> EllipseState:
    """The point of the n-th ellipse at the given phase angle:
    x = ell sqrt(2n+1) cos(angle), p = sqrt(2n+1)/ell sin(angle)."""
    if n < 0:
        raise DomainError("ellipse index must be non-negative")
    if ell <= 0:
        raise DomainError("characteristic length must be positive")
    r = math.sqrt(2.0 * n + 1.0)
    return EllipseState(n, ell, ell * r * math.cos(angle), r / ell * math.sin(angle))


def index_of_x(x: float, ell: float) -> float:
    """The small-ell approximation n = (x/ell)^2/2 - 1/2 (p suppressed)."""
    if ell <= 0:
        raise DomainError("characteristic length must be positive")
    return 0.5 * (x / ell) ** 2 - 0.5

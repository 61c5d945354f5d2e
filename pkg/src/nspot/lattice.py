"""Scenario (ii): the cubic-lattice difference operators, the discrete
potential equation with its six-neighbor mean-value property, and the lattice
Green's function

    U0(n) = 1/(4 (2 pi)^3) int_{[-pi,pi]^3} e^{i k.n} / sum_j sin^2(k_j/2) d^3k.

Writing 1/A = int_0^inf e^{-A t} dt for A = sum sin^2(k_j/2) and using the
generating integral (1/2pi) int e^{i k n} e^{t cos k} dk = I_n(t) reduces this
to the one-dimensional Bessel form

    U0(n) = 1/2 int_0^inf e^{-3t} I_{|n1|}(t) I_{|n2|}(t) I_{|n3|}(t) dt,

which is what the production evaluator integrates (scaled Bessel factors,
panel Gauss-Legendre under t = u/(1-u), analytic t^{-3/2} tail). The original
Brillouin-zone triple integral is kept as an independent oracle, handled by a
dyadic singularity-excluding subdivision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import bessel_i_scaled, elliptic_K, gauss_rule

_TWO_PI = 2.0 * math.pi


@dataclass
class LatticeField:
    """Real values on a finite box lo[j] <= n_j <= hi[j] of the integer
    lattice; reads outside the box follow the declared policy."""

    lo: tuple
    hi: tuple
    values: np.ndarray
    policy: str = "error"

    def __post_init__(self):
        self.lo = tuple(int(v) for v in self.lo)
        self.hi = tuple(int(v) for v in self.hi)
        shape = tuple(h - l + 1 for l, h in zip(self.lo, self.hi))
        if any(s < 1 for s in shape):
            raise DomainError("box must be non-empty on every axis")
        if self.values.shape != shape:
            raise DomainError(f"value array shape {self.values.shape} != box shape {shape}")
        if self.policy not in ("error", "zero"):
            raise DomainError("out-of-box policy must be 'error' or 'zero'")

    @classmethod
    def from_function(cls, lo, hi, fn, policy="error") -> "LatticeField":
        lo = tuple(int(v) for v in lo)
        hi = tuple(int(v) for v in hi)
        vals = np.empty(tuple(h - l + 1 for l, h in zip(lo, hi)))
        for i1 in range(lo[0], hi[0] + 1):
            for i2 in range(lo[1], hi[1] + 1):
                for i3 in range(lo[2], hi[2] + 1):
                    vals[i1 - lo[0], i2 - lo[1], i3 - lo[2]] = fn((i1, i2, i3))
        return cls(lo, hi, vals, policy)

    def inside(self, n) -> bool:
        return all(l <= v <= h for v, l, h in zip(n, self.lo, self.hi))

    def __call__(self, n) -> float:
        if not self.inside(n):
            if self.policy == "zero":
                return 0.0
            raise DomainError(f"index {tuple(n)} outside box {self.lo}..{self.hi}")
        return float(self.values[tuple(v - l for v, l in zip(n, self.lo))])


def _shifted_box(f: LatticeField, axis: int, lo_shift: int, hi_shift: int):
    lo = list(f.lo)
    hi = list(f.hi)
    lo[axis] += lo_shift
    hi[axis] += hi_shift
    if lo[axis] > hi[axis]:
        raise DomainError("box too small for the difference operator")
    return tuple(lo), tuple(hi)


def _slice_shift(f: LatticeField, axis: int, shift: int, lo, hi) -> np.ndarray:
    idx = []
    for j in range(3):
        a = lo[j] - f.lo[j]
        b = hi[j] - f.lo[j] + 1
        if j == axis:
            a += shift
            b += shift
        idx.append(slice(a, b))
    return f.values[tuple(idx)]


def delta_right(f: LatticeField, axis: int) -> LatticeField:
    """(Delta_j f)(n) = f(n + e_j) - f(n); output box loses its top slab."""
    lo, hi = _shifted_box(f, axis, 0, -1)
    vals = _slice_shift(f, axis, 1, lo, hi) - _slice_shift(f, axis, 0, lo, hi)
    return LatticeField(lo, hi, vals, f.policy)


def delta_left(f: LatticeField, axis: int) -> LatticeField:
    """(Delta'_j f)(n) = f(n) - f(n - e_j)."""
    lo, hi = _shifted_box(f, axis, 1, 0)
    vals = _slice_shift(f, axis, 0, lo, hi) - _slice_shift(f, axis, -1, lo, hi)
    return LatticeField(lo, hi, vals, f.policy)


def delta_mean(f: LatticeField, axis: int) -> LatticeField:
    """(Deltabar_j f)(n) = [f(n + e_j) - f(n - e_j)] / 2."""
    lo, hi = _shifted_box(f, axis, 1, -1)
    vals = 0.5 * (_slice_shift(f, axis, 1, lo, hi) - _slice_shift(f, axis, -1, lo, hi))
    return LatticeField(lo, hi, vals, f.policy)


def lattice_laplacian(f: LatticeField, n) -> float:
    """delta^{jk} Delta_j Delta'_k f at an interior point: the 7-point stencil
    sum_j [f(n+e_j) - 2 f(n) + f(n-e_j)]."""
    n = tuple(int(v) for v in n)
    if not all(f.lo[j] < n[j] < f.hi[j] for j in range(3)):
        raise DomainError(f"{n} is not interior to the box")
    acc = -6.0 * f(n)
    for j in range(3):
        for s in (1, -1):
            m = list(n)
            m[j] += s
            acc += f(tuple(m))
    return acc


def neighbor_mean(f: LatticeField, n) -> float:
    """Arithmetic mean of the six lattice neighbors."""
    n = tuple(int(v) for v in n)
    acc = 0.0
    for j in range(3):
        for s in (1, -1):
            m = list(n)
            m[j] += s
            acc += f(tuple(m))
    return acc / 6.0


# --- Green's function -------------------------------------------------------

_U0_CACHE: dict = {}


def _u0_panel_edges(n_low: int = 31, k_max: int = 34) -> np.ndarray:
    # [0, 1/2] resolved uniformly, then dyadic panels accumulating at u = 1
    # (one per octave of t); t_max = 2^k_max - 1 ~ 1.7e10 puts the truncated
    # integrand below 1e-16.
    edges = list(np.linspace(0.0, 0.5, n_low + 1))
    edges += [1.0 - 0.5 ** (k + 1) for k in range(1, k_max)]
    return np.array(edges)


_U0_GRID_CACHE: dict = {}


def _u0_grid(quad_points: int):
    # all panel nodes flattened into one batch: (t values, u values, weights
    # already carrying the panel half-widths and the du/dt jacobian)
    if quad_points in _U0_GRID_CACHE:
        return _U0_GRID_CACHE[quad_points]
    rule = gauss_rule("legendre_unit_interval", quad_points)
    edges = _u0_panel_edges()
    us, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        us.append(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes)
        ws.append(0.5 * (b - a) * rule.weights)
    u = np.concatenate(us)
    w = np.concatenate(ws) / (1.0 - u) ** 2
    t = u / (1.0 - u)
    t_max = edges[-1] / (1.0 - edges[-1])
    _U0_GRID_CACHE[quad_points] = (t, w, t_max)
    return _U0_GRID_CACHE[quad_points]


def u0(n, quad_points: int = 16) -> float:
    """Lattice Green's function U0(n1, n2, n3) to ~1e-12 absolute.

    Panel Gauss-Legendre on u = t/(1+t) of the reduced Bessel integral, plus
    the analytic tail int_T^inf (2 pi t)^{-3/2} [1 - (4|n|^2-3)/(8t)] dt."""
    key = tuple(sorted(abs(int(v)) for v in n)) + (quad_points,)
    if key in _U0_CACHE:
        return _U0_CACHE[key]
    n1, n2, n3 = key[:3]
    t, w, t_max = _u0_grid(quad_points)
    g = bessel_i_scaled(n1, t) * bessel_i_scaled(n2, t) * bessel_i_scaled(n3, t)
    total = float(np.dot(w, g))
    mu = 4.0 * (n1 * n1 + n2 * n2 + n3 * n3)
    tail = (_TWO_PI) ** -1.5 * (2.0 / math.sqrt(t_max) - (mu - 3.0) / 12.0 * t_max ** -1.5)
    val = 0.5 * (total + tail)
    _U0_CACHE[key] = val
    return val


def u0_origin_closed() -> float:
    """The elliptic-integral closed form of U0(0,0,0):

    1/2 [18 + 12 sqrt2 - 10 sqrt3 - 7 sqrt6] {(2/pi) K[(2-sqrt3)(sqrt3-sqrt2)]}^2
    with K taken in the modulus convention (the choice that matches the
    Bessel-integral evaluation; the parameter convention is off by 4%)."""
    k = (2.0 - math.sqrt(3.0)) * (math.sqrt(3.0) - math.sqrt(2.0))
    pref = 0.5 * (18.0 + 12.0 * math.sqrt(2.0) - 10.0 * math.sqrt(3.0) - 7.0 * math.sqrt(6.0))
    return pref * ((2.0 / math.pi) * elliptic_K(k)) ** 2


def u0_asymptotic(n) -> float:
    """Large-|n| behavior 1/(4 pi |n|) plus the direction-dependent
    1/(32 pi |n|^3) {5 sum_j n_j^4 / |n|^4 - 3} correction; the brace term is
    what breaks O(3) down to the cubic group."""
    n = np.asarray(n, dtype=float)
    r = float(np.linalg.norm(n))
    if r == 0.0:
        raise DomainError("asymptotic form undefined at the origin")
    brace = 5.0 * float(np.sum(n ** 4)) / r ** 4 - 3.0
    return 1.0 / (4.0 * math.pi * r) + brace / (32.0 * math.pi * r ** 3)


def u0_brillouin(n, levels: int = 24, points: int = 12) -> float:
    """Direct quadrature of the Brillouin-zone triple integral (the oracle).

    1/(4 pi^3) int_{[0,pi]^3} cos(n1 k1) cos(n2 k2) cos(n3 k3) / sum sin^2(k_j/2),
    via dyadic octant subdivision toward the integrable 1/k^2 singularity;
    the innermost cube [0,eps]^3 contributes 4 eps G0 (1 + O(eps^2)) with
    G0 = int_{[0,1]^3} dv/|v|^2 evaluated by a 1D error-function integral.
    Good for small |n| (oscillation limits the product rule); ~1e-12 absolute
    at the default settings for |n_j| <= 2."""
    n1, n2, n3 = (abs(int(v)) for v in n)
    rule = gauss_rule("legendre_unit_interval", points)
    x, w = rule.nodes, rule.weights

    def box(lo3, hi3):
        xs = [0.5 * (h + l) + 0.5 * (h - l) * x for l, h in zip(lo3, hi3)]
        ws = [0.5 * (h - l) * w for l, h in zip(lo3, hi3)]
        K1, K2, K3 = np.meshgrid(xs[0], xs[1], xs[2], indexing="ij")
        num = np.cos(n1 * K1) * np.cos(n2 * K2) * np.cos(n3 * K3)
        den = np.sin(K1 / 2) ** 2 + np.sin(K2 / 2) ** 2 + np.sin(K3 / 2) ** 2
        W3 = ws[0][:, None, None] * ws[1][None, :, None] * ws[2][None, None, :]
        return float(np.sum(W3 * num / den))

    total = 0.0
    a = math.pi
    for _ in range(levels):
        h = a / 2.0
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    if i == j == k == 0:
                        continue
                    total += box((i * h, j * h, k * h), ((i + 1) * h, (j + 1) * h, (k + 1) * h))
        a = h
    total += 4.0 * a * _unit_cube_inverse_square()
    return total / (4.0 * math.pi ** 3)


_G0_CACHE = [0.0]


def _unit_cube_inverse_square() -> float:
    # G0 = int_{[0,1]^3} dv/|v|^2 = int_0^inf [(sqrt(pi)/2) erf(sqrt(u))/sqrt(u)]^3 du
    if _G0_CACHE[0]:
        return _G0_CACHE[0]
    rule = gauss_rule("legendre_unit_interval", 32)
    s = 0.5 * (rule.nodes + 1.0)
    w = 0.5 * rule.weights
    total = 0.0
    edges = [0.0] + [1.0 - 0.5 ** m for m in range(1, 40)]
    for a, b in zip(edges[:-1], edges[1:]):
        sm = a + (b - a) * s
        um = sm / (1.0 - sm)
        g = np.array([(0.5 * math.sqrt(math.pi) * math.erf(math.sqrt(u)) / math.sqrt(u)) ** 3 for u in um])
        total += (b - a) * float(np.dot(w, g / (1.0 - sm) ** 2))
    _G0_CACHE[0] = total
    return total


def u0_field(radius: int, quad_points: int = 16) -> LatticeField:
    """U0 sampled on the box [-radius, radius]^3 (policy 'error')."""
    r = int(radius)
    return LatticeField.from_function(
        (-r, -r, -r), (r, r, r), lambda n: u0(n, quad_points=quad_points)
    )

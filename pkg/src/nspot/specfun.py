"""Special-function kernel: Hermite polynomials and functions, log-factorial,
the Stirling series, the complete elliptic integral, exponentially scaled
modified Bessel functions, and Gaussian quadrature rules.

Everything here is plain double-precision numerics built on the classical
three-term recurrences; no external special-function library is used. The
normalized Hermite functions are carried in weighted form so that values stay
O(1) for arbitrarily large degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

SQRT_PI = math.sqrt(math.pi)
INV_PI4 = math.pi ** -0.25  # pi^{-1/4}, value of the 0th Hermite function at 0

# Stirling series for Gamma(n):
#   Gamma(n) = sqrt(2 pi) n^{n-1/2} e^{-n} [1 + 1/(12n) + 1/(288 n^2)
#              - 139/(51840 n^3) - 571/(2488320 n^4) + O(n^-5)]
_STIRLING_COEFFS = (
    1.0 / 12.0,
    1.0 / 288.0,
    -139.0 / 51840.0,
    -571.0 / 2488320.0,
)


@dataclass(frozen=True)
class QuadratureRule:
    """Gaussian quadrature nodes/weights with a declared weight convention.

    kind 'legendre_unit_interval': integrates f over [-1, 1] (weight 1).
    kind 'hermite_weight': integrates f(k) e^{-k^2} over the real line.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.size < 1 or nodes.size != weights.size:
            raise DomainError("nodes and weights must be equally sized, length >= 1")
        if nodes.size > 1 and not np.all(np.diff(nodes) > 0):
            raise DomainError("nodes must be strictly increasing")
        if self.kind not in ("legendre_unit_interval", "hermite_weight"):
            raise DomainError(f"unknown rule kind {self.kind!r}")

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def hermite_phys(n: int, k: float) -> float:
    """Physicists' Hermite polynomial H_n(k).

    Three-term recurrence H_0 = 1, H_1 = 2k, H_{n+1} = 2k H_n - 2n H_{n-1}.
    Raises OverflowError once the unweighted value leaves double range;
    large-n callers should use hermite_weighted instead.
    """
    if n < 0:
        raise DomainError("degree must be non-negative")
    if not math.isfinite(k):
        raise DomainError("argument must be finite")
    if n == 0:
        return 1.0
    hm, h = 1.0, 2.0 * k
    for j in range(1, n):
        hm, h = h, 2.0 * k * h - 2.0 * j * hm
        if math.isinf(h):
            raise OverflowError(f"H_{j + 1}({k}) overflows double range")
    return h


def hermite_weighted(n: int, k: float) -> float:
    """Normalized Hermite function e^{-k^2/2} H_n(k) / (pi^{1/4} 2^{n/2} sqrt(n!)).

    The recurrence is carried directly in the weighted (orthonormal) form,
        h_0 = pi^{-1/4} e^{-k^2/2},  h_1 = sqrt(2) k h_0,
        h_{n+1} = sqrt(2/(n+1)) k h_n - sqrt(n/(n+1)) h_{n-1},
    so values remain O(1) and no intermediate overflows occur for n <= 1e4.
    """
    if n < 0:
        raise DomainError("degree must be non-negative")
    if not math.isfinite(k):
        raise DomainError("argument must be finite")
    h = INV_PI4 * math.exp(-0.5 * k * k)
    if n == 0:
        return h
    hm, h = h, math.sqrt(2.0) * k * h
    for j in range(1, n):
        hm, h = h, math.sqrt(2.0 / (j + 1)) * k * h - math.sqrt(j / (j + 1.0)) * hm
    return h


_LNFACT_CACHE = np.zeros(1)


def ln_factorial(n: int) -> float:
    """ln(n!) by cached cumulative summation of ln(k); exact-rounding quality
    for n up to well beyond 1e6."""
    global _LNFACT_CACHE
    if n < 0:
        raise DomainError("factorial argument must be non-negative")
    if n >= _LNFACT_CACHE.size:
        hi = max(n + 1, 2 * _LNFACT_CACHE.size, 1024)
        logs = np.log(np.arange(1, hi, dtype=float))
        _LNFACT_CACHE = np.concatenate(([0.0], np.cumsum(logs)))
    return float(_LNFACT_CACHE[n])


def gamma_stirling(n: float, order: int = 4) -> float:
    """Stirling approximation to Gamma(n), truncated at the given order (0..4).

    Gamma(n) ~ sqrt(2 pi) n^{n-1/2} e^{-n} (1 + 1/(12n) + 1/(288n^2)
               - 139/(51840 n^3) - 571/(2488320 n^4)).
    """
    if n <= 0:
        raise DomainError("Stirling series requires n > 0")
    if not 0 <= order <= 4:
        raise DomainError("order must be in 0..4")
    bracket = 1.0
    for j in range(order):
        bracket += _STIRLING_COEFFS[j] / n ** (j + 1)
    return math.sqrt(2.0 * math.pi) * math.exp((n - 0.5) * math.log(n) - n) * bracket


def elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention:

        K(k) = \\int_0^{pi/2} [1 - k^2 sin^2 t]^{-1/2} dt,   0 <= k < 1,

    via the arithmetic-geometric mean: K = pi / (2 agm(1, sqrt(1-k^2)))."""
    if not 0.0 <= k < 1.0:
        raise DomainError("modulus must lie in [0, 1)")
    a, b = 1.0, math.sqrt(1.0 - k * k)
    while abs(a - b) > 1e-16 * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def bessel_i_scaled(n: int, t):
    """Exponentially scaled modified Bessel function e^{-t} I_n(t), t >= 0.

    Power series for small t, Miller downward recurrence with the
    normalization e^{-t} [I_0 + 2 sum_{k>=1} I_k] = 1 in the middle range,
    and the large-argument asymptotic series
        e^{-t} I_n(t) ~ (2 pi t)^{-1/2} [1 - (mu-1)/(8t) + ...],  mu = 4 n^2,
    beyond it. The asymptotic branch keeps the evaluation valid for the very
    large arguments (t ~ 1e10) needed by the lattice Green's function tail.
    Accepts a scalar or ndarray t; relative accuracy ~1e-13.
    """
    if n < 0:
        raise DomainError("order must be non-negative")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("argument must be non-negative")
    out = np.empty_like(t_arr)
    flat_t = np.atleast_1d(t_arr)
    flat_o = np.atleast_1d(out)

    t_asym = max(2.0e4, 8.0 * n * n)
    small = flat_t <= 50.0
    large = flat_t >= t_asym
    mid = ~(small | large)
    if np.any(small):
        flat_o[small] = _ive_series(n, flat_t[small])
    if np.any(mid):
        flat_o[mid] = _ive_miller(n, flat_t[mid])
    if np.any(large):
        flat_o[large] = _ive_asymptotic(n, flat_t[large])
    return float(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def _ive_series(n: int, t: np.ndarray) -> np.ndarray:
    # e^{-t} (t/2)^n sum_k (t^2/4)^k / (k! (n+k)!); all terms positive.
    out = np.empty_like(t)
    zero = t == 0.0
    out[zero] = 1.0 if n == 0 else 0.0
    tz = t[~zero]
    if tz.size:
        lpref = n * np.log(0.5 * tz) - tz - ln_factorial(n)
        q = 0.25 * tz * tz
        s = np.ones_like(tz)
        term = np.ones_like(tz)
        for k in range(1, 400):
            term = term * q / (k * (n + k))
            s += term
            if np.all(term < 1e-18 * s):
                break
        with np.errstate(under="ignore"):
            out[~zero] = np.exp(lpref + np.log(s))
    return out


def _ive_miller(n: int, t: np.ndarray) -> np.ndarray:
    # Downward recurrence I_{k-1} = I_{k+1} + (2k/t) I_k from a start index
    # high enough that the unwanted solution has died out, normalized by
    # e^{-t}(I_0 + 2 sum I_k) = 1 (generating function at theta = 0).
    M = int(n + 10 + 9.2 * math.sqrt(float(np.max(t))))
    ip1 = np.zeros_like(t)
    ik = np.full_like(t, 1e-300)
    target = np.zeros_like(t)
    norm = np.zeros_like(t)
    for k in range(M, 0, -1):
        im1 = ip1 + (2.0 * k / t) * ik
        if k - 1 == n:
            target = im1.copy()
        if k - 1 >= 1:
            norm += im1
        ip1, ik = ik, im1
        big = np.abs(ik) > 1e250
        if np.any(big):
            ip1[big] *= 1e-250
            ik[big] *= 1e-250
            norm[big] *= 1e-250
            target[big] *= 1e-250
    return target / (ik + 2.0 * norm)


def _ive_asymptotic(n: int, t: np.ndarray) -> np.ndarray:
    mu = 4.0 * n * n
    s = np.ones_like(t)
    term = np.ones_like(t)
    for k in range(1, 40):
        term = term * (-(mu - (2 * k - 1) ** 2) / (8.0 * k * t))
        s += term
        if np.all(np.abs(term) < 1e-17 * np.abs(s)):
            break
    return s / np.sqrt(2.0 * math.pi * t)


def gauss_rule(kind: str, n: int) -> QuadratureRule:
    """Gaussian quadrature rule with n points.

    Initial nodes come from the symmetric Jacobi (recurrence) matrix; every
    node is then polished by Newton iteration on the orthogonal-polynomial
    recurrence to ~1e-15. Weights use the classical closed forms
        legendre: w = 2 / ((1-x^2) P_N'(x)^2)
        hermite:  w = e^{-x^2} / sum_{k<N} htilde_k(x)^2   (Christoffel form,
    with htilde the weighted Hermite functions, so nothing overflows)."""
    if n < 1:
        raise DomainError("rule size must be >= 1")
    if kind == "legendre_unit_interval":
        nodes, weights = _gauss_legendre(n)
    elif kind == "hermite_weight":
        nodes, weights = _gauss_hermite(n)
    else:
        raise DomainError(f"unknown rule kind {kind!r}")
    return QuadratureRule(nodes, weights, kind)


def _jacobi_nodes(offdiag: np.ndarray) -> np.ndarray:
    J = np.diag(offdiag, 1) + np.diag(offdiag, -1)
    return np.linalg.eigvalsh(J)


def _legendre_pair(n: int, x):
    # P_n(x) and P_{n-1}(x) via (j+1) P_{j+1} = (2j+1) x P_j - j P_{j-1}
    pm, p = np.ones_like(x), x.copy() if isinstance(x, np.ndarray) else x
    for j in range(1, n):
        pm, p = p, ((2 * j + 1) * x * p - j * pm) / (j + 1)
    return p, pm


def _gauss_legendre(n: int):
    if n == 1:
        return np.array([0.0]), np.array([2.0])
    j = np.arange(1, n, dtype=float)
    x = _jacobi_nodes(j / np.sqrt(4.0 * j * j - 1.0))
    for it in range(60):
        p, pm = _legendre_pair(n, x)
        dp = n * (x * p - pm) / (x * x - 1.0)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-15 * max(1.0, float(np.max(np.abs(x)))):
            break
    else:
        raise ConvergenceError("Legendre Newton iteration did not converge")
    p, pm = _legendre_pair(n, x)
    dp = n * (x * p - pm) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    return x, w


def _hermite_functions_upto(n: int, x: np.ndarray) -> np.ndarray:
    # rows k = 0..n of the weighted Hermite functions htilde_k(x)
    out = np.empty((n + 1, x.size))
    out[0] = INV_PI4 * np.exp(-0.5 * x * x)
    if n >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, n):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1.0)) * out[k - 1]
    return out

def _gauss_hermite(n: int):
    if n == 1:
        return np.array([0.0]), np.array([SQRT_PI])
    j = np.arange(1, n, dtype=float)
    x = _jacobi_nodes(np.sqrt(0.5 * j))
    for it in range(60):
        h = _hermite_functions_upto(n, x)
        # htilde_n'(x) = sqrt(2n) htilde_{n-1}(x) - x htilde_n(x)
        dh = math.sqrt(2.0 * n) * h[n - 1] - x * h[n]
        dx = h[n] / dh
        x -= dx
        if np.max(np.abs(dx)) < 1e-15 * max(1.0, float(np.max(np.abs(x)))):
            break
    else:
        raise ConvergenceError("Hermite Newton iteration did not converge")
    h = _hermite_functions_upto(n - 1, x)
    with np.errstate(under="ignore"):
        w = np.exp(-x * x) / np.sum(h * h, axis=0)
    return x, w

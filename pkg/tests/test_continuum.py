import math

import numpy as np
import pytest

from nspot import continuum
from nspot.continuum import IsometryParams, PolyField
from nspot.errors import SingularPointError, StencilError, ValidationError

INV_4PI = 0.07957747154594766788444188  # 1/(4 pi)

RNG = np.random.default_rng(24301)


def random_rotation(rng):
    axis = rng.normal(size=3)
    return continuum.rotation_from_axis_angle(axis, rng.uniform(0, 2 * math.pi))


def test_coulomb_v0_values():
    assert continuum.coulomb_v0((1, 0, 0)) == pytest.approx(INV_4PI, rel=1e-14)
    assert continuum.coulomb_v0((2, 0, 0)) == pytest.approx(0.5 * INV_4PI, rel=1e-14)
    with pytest.raises(SingularPointError):
        continuum.coulomb_v0((0, 0, 0))


def test_greens_e3():
    assert continuum.greens_e3((1, 1, 1), (1, 1, 0)) == pytest.approx(INV_4PI, rel=1e-14)
    assert continuum.greens_e3((2, 0, 0), (0, 0, 0)) == continuum.coulomb_v0((2, 0, 0))
    for _ in range(10):
        a, b = RNG.normal(size=3), RNG.normal(size=3)
        assert continuum.greens_e3(a, b) == pytest.approx(continuum.greens_e3(b, a), rel=1e-15)
    with pytest.raises(SingularPointError):
        continuum.greens_e3((1, 2, 3), (1, 2, 3))


def test_v0_rotational_invariance():
    for _ in range(20):
        p = RNG.normal(size=3)
        if np.linalg.norm(p) < 0.1:
            continue
        R = random_rotation(RNG)
        assert continuum.coulomb_v0(R @ p) == pytest.approx(continuum.coulomb_v0(p), rel=1e-12)


def test_fd_laplacian_quadratics():
    f = lambda p: p[0] ** 2
    assert continuum.fd_laplacian(f, (0.3, 1.0, -2.0), 1e-3) == pytest.approx(2.0, abs=1e-9)
    g = lambda p: p[0] ** 2 - p[1] ** 2
    assert continuum.fd_laplacian(g, (0.7, 0.1, 0.4), 1e-3) == pytest.approx(0.0, abs=1e-9)


def test_fd_laplacian_coulomb_residual_bound():
    h = 1e-2
    r = continuum.fd_laplacian(continuum.coulomb_v0, (1.0, 0.5, -0.3), h)
    assert abs(r) <= 10 * h * h


def test_fd_laplacian_h2_convergence():
    # log-log slope 2 +- 0.2 over h in {1e-1, 1e-2, 1e-3} at off-origin points
    hs = np.array([1e-1, 1e-2, 1e-3])
    slopes = []
    for _ in range(50):
        p = RNG.normal(size=3)
        nrm = np.linalg.norm(p)
        if nrm == 0:
            continue
        p *= RNG.uniform(0.5, 3.0) / nrm
        res = np.array([abs(continuum.fd_laplacian(continuum.coulomb_v0, p, h)) for h in hs])
        if np.any(res == 0):
            continue
        slope = np.polyfit(np.log(hs), np.log(res), 1)[0]
        slopes.append(slope)
    assert abs(np.median(slopes) - 2.0) < 0.2


def test_fd_laplacian_singular_guard():
    singular = lambda q: np.linalg.norm(q) < 1e-12
    with pytest.raises(StencilError):
        # the minus-x stencil point lands exactly on the origin
        continuum.fd_laplacian(continuum.coulomb_v0, (1e-2, 0, 0), 1e-2, singular=singular)


def test_translate_exp_exact_on_harmonic_quadratic():
    f = PolyField.from_terms({(2, 0, 0): 1.0, (0, 2, 0): -1.0})  # x^2 - y^2
    shifted = continuum.translate_exp(f, (1.0, 2.0, 0.0), order=2)
    # (x-1)^2 - (y-2)^2 = x^2 - 2x + 1 - y^2 + 4y - 4
    expect = PolyField.from_terms(
        {(2, 0, 0): 1.0, (1, 0, 0): -2.0, (0, 2, 0): -1.0, (0, 1, 0): 4.0, (0, 0, 0): -3.0}
    )
    assert shifted.max_coeff_diff(expect) < 1e-12


def test_translate_exp_identity_and_truncation():
    f = PolyField.from_terms({(1, 1, 1): 2.0, (0, 0, 0): 1.0})
    assert continuum.translate_exp(f, (0, 0, 0), 0).max_coeff_diff(f) == 0.0
    # order >= degree equals the binomial-expansion shift exactly
    c = (0.3, -1.2, 0.8)
    assert continuum.translate_exp(f, c, 3).max_coeff_diff(f.exact_shift(c)) < 1e-12


@pytest.mark.parametrize("order", [4, 5, 7])
def test_translate_exp_matches_exact_shift_degree4(order):
    # harmonic polynomials of degree <= 4
    harmonics = [
        PolyField.from_terms({(1, 0, 0): 1.0}),
        PolyField.from_terms({(1, 1, 0): 1.0}),
        PolyField.from_terms({(2, 0, 0): 1.0, (0, 2, 0): -1.0}),
        PolyField.from_terms({(1, 1, 1): 1.0}),
        PolyField.from_terms({(3, 0, 0): 1.0, (1, 2, 0): -3.0}),  # x^3 - 3xy^2
        PolyField.from_terms({(2, 0, 1): 1.0, (0, 2, 1): -1.0}),  # z(x^2-y^2)
        PolyField.from_terms({(4, 0, 0): 1.0, (2, 2, 0): -6.0, (0, 4, 0): 1.0}),
    ]
    for f in harmonics:
        assert f.laplacian().max_coeff_diff(PolyField()) < 1e-12  # really harmonic
        c = RNG.uniform(-2, 2, size=3)
        got = continuum.translate_exp(f, c, order)
        assert got.max_coeff_diff(f.exact_shift(c)) < 1e-12


def test_translated_field_stays_harmonic():
    f = PolyField.from_terms({(1, 1, 1): 1.0})  # xyz
    g = continuum.translate_exp(f, (0.5, -0.25, 1.5), order=3)
    assert abs(continuum.fd_laplacian(g, (0.2, 0.9, -0.4), 1e-3)) < 1e-8


def test_io3_apply_and_inverse():
    ident = IsometryParams(np.eye(3), np.zeros(3))
    p = np.array([0.3, -1.0, 2.0])
    assert np.allclose(continuum.io3_apply(p, ident), p)

    c = np.array([1.0, -2.0, 0.5])
    g = IsometryParams(np.eye(3), c)
    ginv = IsometryParams(np.eye(3), -c)
    assert np.max(np.abs(continuum.io3_apply(continuum.io3_apply(p, g), ginv) - p)) < 1e-14

    R = random_rotation(RNG)
    g = IsometryParams(R, c)
    phat = continuum.io3_apply(p, g)
    assert np.max(np.abs(g.inverse_apply(phat) - p)) < 1e-12


def test_io3_isometry_property():
    for _ in range(20):
        g = IsometryParams(random_rotation(RNG), RNG.normal(size=3))
        p, q = RNG.normal(size=3), RNG.normal(size=3)
        d0 = np.linalg.norm(p - q)
        d1 = np.linalg.norm(continuum.io3_apply(p, g) - continuum.io3_apply(q, g))
        assert d1 == pytest.approx(d0, rel=1e-12, abs=1e-12)


def test_io3_rejects_non_orthogonal():
    with pytest.raises(ValidationError):
        IsometryParams(np.eye(3) * 1.1, np.zeros(3))


def test_dirichlet_integral_never_decreases_at_harmonic_field():
    # J[f] = int_box 1/2 |grad f|^2 with exact polynomial gradients and a
    # Gauss-Legendre tensor grid (exact for polynomial integrands); h has the
    # boundary factor (x^2-1)(y^2-1)(z^2-1) so it vanishes on the box faces.
    from nspot.specfun import gauss_rule

    rule = gauss_rule("legendre_unit_interval", 12)
    X, Y, Z = np.meshgrid(rule.nodes, rule.nodes, rule.nodes, indexing="ij")
    W = (
        rule.weights[:, None, None]
        * rule.weights[None, :, None]
        * rule.weights[None, None, :]
    )

    def dirichlet(f: PolyField) -> float:
        total = np.zeros_like(X)
        for axis in range(3):
            g = f.partial(axis)
            vals = np.zeros_like(X)
            for (i, j, k), cc in g.coeffs.items():
                vals += cc * X ** i * Y ** j * Z ** k
            total += vals ** 2
        return 0.5 * float(np.sum(W * total))

    f = PolyField.from_terms({(2, 0, 0): 1.0, (0, 2, 0): -1.0})
    bump = PolyField.from_terms({(2, 0, 0): 1.0, (0, 0, 0): -1.0})  # x^2-1

    def boundary_zero(g: PolyField) -> PolyField:
        out = PolyField.from_terms({(0, 0, 0): 1.0})
        for axis in range(3):
            expo = [0, 0, 0]
            expo[axis] = 2
            face = PolyField.from_terms({tuple(expo): 1.0, (0, 0, 0): -1.0})
            out = _poly_mul(out, face)
        return _poly_mul(out, g)

    J0 = dirichlet(f)
    for _ in range(10):
        g = PolyField.from_terms(
            {(RNG.integers(0, 2), RNG.integers(0, 2), RNG.integers(0, 2)): RNG.uniform(-1, 1)}
        )
        h = boundary_zero(g)
        for eps in (1e-3, -1e-3, 0.1, -0.1):
            fh = f + h.scaled(eps)
            assert dirichlet(fh) >= J0 - 1e-12


def _poly_mul(a: PolyField, b: PolyField) -> PolyField:
    out = {}
    for ea, ca in a.coeffs.items():
        for eb, cb in b.coeffs.items():
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            out[e] = out.get(e, 0.0) + ca * cb
    return PolyField.from_terms(out)

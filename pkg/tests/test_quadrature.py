import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import roots_legendre

from conftest import rel
from sphere_trilinear.errors import NotIntegrable, TruncationUnsound, UnsupportedDimension
from sphere_trilinear.fields import constant, coordinate, monomial, smooth_test_fields
from sphere_trilinear.lorentz import stereographic
from sphere_trilinear.quadrature import (
    TripleScheme,
    chart_tail_fraction,
    integrate,
    integrate_triple,
    kernel_row_integral,
    noncompact_K,
    reduced_constant_K,
    sphere_area,
    sphere_grid,
)
from sphere_trilinear.representations import lambda_to_alpha
from sphere_trilinear.special import closed_form_I

ONES = [constant()] * 3


# -- grids


@pytest.mark.parametrize("res", [2, 3, 5, 16, 33])
def test_grid_total_weight_n3(res):
    grid = sphere_grid(3, res)
    assert np.all(grid.weights > 0)
    assert abs(grid.weights.sum() - 4 * np.pi) < 1e-10
    assert np.allclose(np.linalg.norm(grid.nodes, axis=-1), 1.0, atol=1e-14)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_grid_total_weight_higher(n):
    grid = sphere_grid(n, 6)
    assert np.all(grid.weights > 0)
    assert rel(grid.weights.sum(), sphere_area(n)) < 1e-8
    for i in range(1, n + 1):
        assert abs(integrate(coordinate(i), grid)) < 1e-10
    assert abs(sphere_area(4) - 2 * np.pi**2) < 1e-12


def test_grid_moments():
    grid = sphere_grid(3, 4)
    assert abs(integrate(monomial((2, 0, 0)), grid) - 4 * np.pi / 3) < 1e-10
    assert abs(integrate(constant(), grid) - 4 * np.pi) < 1e-10
    for i in (1, 2, 3):
        assert abs(integrate(coordinate(i), grid)) < 1e-10
    # x1^2 x2^2 over S^2 is 4 pi / 15
    assert abs(integrate(monomial((2, 2, 0)), sphere_grid(3, 6)) - 4 * np.pi / 15) < 1e-12


def test_grid_errors():
    with pytest.raises(UnsupportedDimension):
        sphere_grid(2, 8)
    with pytest.raises(ValueError):
        sphere_grid(3, 1)


def test_kernel_row_integral_against_grid():
    # smooth exponent so the grid is accurate
    grid = sphere_grid(4, 24)
    x = np.array([0.0, 0.6, 0.0, 0.8])
    d = np.linalg.norm(grid.nodes - x, axis=-1)
    assert rel(np.dot(grid.weights, d**2.0), kernel_row_integral(2.0, 4)) < 1e-12
    assert rel(kernel_row_integral(0.0, 3), 4 * np.pi) < 1e-14


# -- stereographic change of variables


def _plane_integral(f, radius, n_r=4000, n_phi=256):
    r, wr = roots_legendre(n_r)
    r = 0.5 * radius * (r + 1)
    wr = 0.5 * radius * wr
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    xi = np.stack([np.outer(r, np.cos(phi)), np.outer(r, np.sin(phi))], axis=-1)
    dens = 4.0 / (1 + r**2) ** 2
    vals = f(stereographic(xi)) * dens[:, None] * r[:, None]
    return complex(np.sum(wr[:, None] * vals) * 2 * np.pi / n_phi)


def test_stereographic_change_of_variables():
    # f vanishes to second order at 1^-, so the truncated tail is negligible
    f = lambda x: (1 + x[..., 0]) ** 2 * (1.0 + 0.3 * x[..., 1] + 0.2 * x[..., 2] ** 2)  # noqa: E731
    sphere = integrate(f, sphere_grid(3, 16))
    plane = _plane_integral(f, 50.0)
    assert abs(plane - sphere) / abs(sphere) < 1e-4


def test_chart_tail_fraction():
    # n = 3: the cap beyond radius R has area 4 pi / (1 + R^2)
    for r in (1.0, 20.0, 50.0):
        assert rel(chart_tail_fraction(r, 3), 1 / (1 + r * r)) < 1e-12
    plane = _plane_integral(constant(), 20.0)
    assert rel(plane, 4 * np.pi * (1 - chart_tail_fraction(20.0, 3))) < 1e-8


# -- triple integrals


def test_scheme_validation():
    with pytest.raises(ValueError):
        TripleScheme("bogus")
    with pytest.raises(ValueError):
        TripleScheme(resolution=1)
    with pytest.raises(ValueError):
        TripleScheme("noncompact", truncation_radius=0)
    with pytest.raises(ValueError):
        TripleScheme(singular="ignore")


@pytest.mark.parametrize("kind,res,tol", [
    ("tensor_product", 8, 1e-12),
    ("monte_carlo", 20000, 1e-12),
    ("reduced_constant", 40, 1e-6),
    ("noncompact", 20000, 1e-2),
])
def test_kernel_one_gives_area_cubed(kind, res, tol):
    res_ = integrate_triple((1, 1, 1), *ONES, TripleScheme(kind, resolution=res))
    assert rel(res_.value, (4 * np.pi) ** 3) < max(tol, 2 * res_.error_indicator / (4 * np.pi) ** 3)


def test_not_integrable_is_refused():
    for kind in ("tensor_product", "monte_carlo", "reduced_constant", "noncompact"):
        with pytest.raises(NotIntegrable):
            integrate_triple((-0.5, -0.5, -0.5), *ONES, TripleScheme(kind))
    with pytest.raises(NotIntegrable):
        reduced_constant_K((-1.0, 0, 0))


def test_near_boundary_sampling_is_finite():
    # the pair exponent is almost -(n - 1): most proposal draws sit extremely close
    f = lambda a, b, c: np.ones(a.shape[:-1])  # noqa: E731
    res = noncompact_K((-0.99, -0.99, 1.99), f, resolution=3000)
    assert np.isfinite(res.value) and np.isfinite(res.error_indicator)
    res = integrate_triple((-0.99, 0.0, 0.0), *ONES, TripleScheme("monte_carlo", resolution=3000))
    assert np.isfinite(res.value) and np.isfinite(res.error_indicator)


def test_truncation_guard_follows_from_integrability():
    # Re(alpha_i + alpha_j) > -2 rho is implied by Re alpha_j > -rho, so the
    # integrability refusal always comes first
    with pytest.raises(NotIntegrable):
        noncompact_K((-1.0, -1.0, 3.0), lambda a, b, c: 1.0, resolution=100)
    assert issubclass(TruncationUnsound, ValueError)


def test_reduced_requires_constants():
    with pytest.raises(ValueError):
        integrate_triple((0, 0, 0), coordinate(1), constant(), constant(), TripleScheme("reduced_constant"))


def test_reduced_examples():
    surface_at_zero = 8 * np.pi**5
    assert rel(reduced_constant_K((0, 0, 0), 3, 200), surface_at_zero) < 1e-3
    assert rel(reduced_constant_K((1, 1, 1), 3, 200), (4 * np.pi) ** 3) < 1e-6
    lam = (0.3, 0.2, 0.1)
    ref = closed_form_I(lam, 3, "surface")
    assert rel(reduced_constant_K(lambda_to_alpha(lam), 3, 200), ref) < 1e-3


@settings(max_examples=15)
@given(
    st.tuples(*[st.floats(-0.1, 0.45) for _ in range(3)]),
    st.tuples(*[st.floats(-1.0, 1.0) for _ in range(3)]),
    st.sampled_from([3, 4, 5]),
)
def test_reduced_matches_surface_closed_form(re, im, n):
    lam = np.array(re) + 1j * np.array(im)
    ref = closed_form_I(lam, n, "surface")
    assert rel(reduced_constant_K(lambda_to_alpha(lam), n, 200), ref) < 1e-6


def test_reduced_scheme_indicator():
    res = integrate_triple((0, 0, 0), *[constant(2.0)] * 3, TripleScheme("reduced_constant", resolution=200))
    assert rel(res.value, 8 * 8 * np.pi**5) < 1e-3
    assert 0 <= res.error_indicator < 1e-3 * abs(res.value)


def test_tensor_against_closed_form():
    res = integrate_triple((0, 0, 0), *ONES, TripleScheme(resolution=16))
    ref = closed_form_I((0, 0, 0), 3, "surface")
    assert rel(res.value, ref) < 1e-2
    # and the literal constant is off by 2^9
    assert rel(res.value, 512 * closed_form_I((0, 0, 0))) < 1e-2


def test_singular_treatments():
    ref = closed_form_I((0, 0, 0), 3, "surface")
    sub = integrate_triple((0, 0, 0), *ONES, TripleScheme(resolution=16)).value
    exc = integrate_triple((0, 0, 0), *ONES, TripleScheme(resolution=16, singular="excise")).value
    assert abs(sub - ref) < abs(exc - ref)


def test_monte_carlo_against_closed_form():
    res = integrate_triple((0, 0, 0), *ONES, TripleScheme("monte_carlo", resolution=200000, seed=1))
    ref = closed_form_I((0, 0, 0), 3, "surface")
    assert abs(res.value - ref) < 3 * res.error_indicator
    assert res.error_indicator < 0.02 * abs(ref)


@pytest.mark.parametrize("kind,res", [("tensor_product", 12), ("monte_carlo", 40000)])
def test_antisymmetry_probe(kind, res):
    f1 = coordinate(1)
    for alpha in ((0, 0, 0), (0.3, 0.3, 0.3)):
        out = integrate_triple(alpha, f1, constant(), constant(), TripleScheme(kind, resolution=res, seed=2))
        scale = abs(integrate_triple(alpha, *ONES, TripleScheme(kind, resolution=res, seed=2)).value)
        assert abs(out.value) < max(1e-10 * scale, 3 * out.error_indicator)


def test_noncompact_against_closed_form():
    ref = closed_form_I((0, 0, 0), 3, "surface")
    res = noncompact_K((0, 0, 0), lambda a, b, c: np.ones(a.shape[:-1]), resolution=200000, seed=4)
    assert abs(res.value - ref) < res.error_indicator
    assert res.error_indicator < 0.03 * abs(ref)


def test_noncompact_truncation_monotonicity():
    f = lambda a, b, c: np.ones(a.shape[:-1])  # noqa: E731
    r20 = noncompact_K((0, 0, 0), f, truncation_radius=20, resolution=200000, seed=5)
    r50 = noncompact_K((0, 0, 0), f, truncation_radius=50, resolution=200000, seed=5)
    assert abs(r20.value - r50.value) < r20.error_indicator + r50.error_indicator
    assert r20.error_indicator > r50.error_indicator


def test_tensor_refinement_is_monotone():
    fields = smooth_test_fields(3)
    vals = [integrate_triple((0.1, 0.2, 0.3), *fields, TripleScheme(resolution=r)).value for r in (4, 8, 16, 32)]
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    assert diffs[0] > diffs[1] > diffs[2]


def test_triple_permutation_symmetry():
    f1, f2, f3 = smooth_test_fields(3)
    s = TripleScheme(resolution=10)
    a = integrate_triple((0.1, 0.2, 0.4), f1, f2, f3, s).value
    b = integrate_triple((0.2, 0.1, 0.4), f2, f1, f3, s).value
    assert rel(b, a) < 1e-12


@pytest.mark.parametrize("kind,res", [("tensor_product", 12), ("monte_carlo", 50000), ("noncompact", 50000)])
def test_determinism_and_parallel_consistency(kind, res):
    fields = smooth_test_fields(3) if kind != "noncompact" else ONES
    one = integrate_triple((0, 0.1, 0.2), *fields, TripleScheme(kind, resolution=res, seed=9))
    two = integrate_triple((0, 0.1, 0.2), *fields, TripleScheme(kind, resolution=res, seed=9))
    assert one.value == two.value and one.error_indicator == two.error_indicator
    par = integrate_triple((0, 0.1, 0.2), *fields, TripleScheme(kind, resolution=res, seed=9, workers=4))
    assert rel(par.value, one.value) < 1e-12

import itertools

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import rel
from strategies import complex_numbers
from sphere_trilinear.errors import OnPoleHyperplane, PoleOfGamma
from sphere_trilinear.quadrature import sphere_area
from sphere_trilinear.representations import alpha_to_lambda, lambda_to_alpha
from sphere_trilinear.special import (
    closed_form_I,
    log_gamma,
    log_prefactor,
    normalized_I,
    normalizer,
    pole_distance,
    reciprocal_gamma,
    surface_to_literal_ratio,
)

mpmath.mp.dps = 30

moderate = st.builds(
    complex,
    st.floats(-30, 30, allow_nan=False),
    st.floats(-30, 30, allow_nan=False),
).filter(lambda z: abs(z) <= 50 and min(abs(z - k) for k in range(-31, 1)) > 1e-3)


# -- log-Gamma


def test_log_gamma_examples():
    assert abs(log_gamma(1.0)) < 1e-15
    assert abs(log_gamma(2.0)) < 1e-15
    assert abs(log_gamma(0.5) - 0.5 * np.log(np.pi)) < 1e-14
    assert abs(log_gamma(0.5) - 0.5723649429247001) < 1e-14


@given(moderate)
def test_log_gamma_against_mpmath(z):
    ref = complex(mpmath.loggamma(mpmath.mpc(z.real, z.imag)))
    got = complex(log_gamma(z))
    # the real part carries the magnitude; the imaginary part is the branch
    assert abs(got.real - ref.real) <= 1e-12 * max(1.0, abs(ref.real))
    assert abs(np.exp(1j * got.imag) - np.exp(1j * ref.imag)) <= 1e-11 * max(1.0, abs(ref))


@given(moderate.filter(lambda z: abs(z) < 40))
def test_log_gamma_recurrence(z):
    lhs = np.exp(log_gamma(z + 1) - log_gamma(z))
    assert abs(lhs - z) <= 1e-12 * abs(z)


@given(moderate.filter(lambda z: abs(z.imag) > 1e-3 or abs(z.real - round(z.real)) > 1e-3))
def test_log_gamma_reflection(z):
    # Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    lhs = np.exp(log_gamma(z) + log_gamma(1 - z))
    rhs = np.pi / np.sin(np.pi * z)
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_log_gamma_vectorized_and_poles():
    z = np.array([1.0, 2.5, 3 + 4j])
    ref = [complex(mpmath.loggamma(v)) for v in (1.0, 2.5, mpmath.mpc(3, 4))]
    assert np.allclose(log_gamma(z), ref, rtol=1e-13, atol=1e-14)
    for bad in (0, -1, -7.0):
        with pytest.raises(PoleOfGamma):
            log_gamma(bad)


def test_reciprocal_gamma_vanishes_at_poles():
    assert np.array_equal(reciprocal_gamma(np.array([0.0, -1.0, -4.0])), np.zeros(3))
    assert abs(reciprocal_gamma(0.5) - 1 / np.sqrt(np.pi)) < 1e-15
    z = -2.5 + 0.3j
    assert abs(reciprocal_gamma(z) - complex(mpmath.rgamma(mpmath.mpc(z.real, z.imag)))) < 1e-13


# -- closed form


def _mp_closed_form(lam, n, prefactor):
    lam = [mpmath.mpc(complex(v).real, complex(v).imag) for v in lam]
    rho = mpmath.mpf(n - 1) / 2
    s = sum(lam)
    num = mpmath.gamma((s + rho) / 2)
    for a in lambda_to_alpha([complex(v) for v in lam]):
        num *= mpmath.gamma((mpmath.mpc(a.real, a.imag) + rho) / 2)
    den = mpmath.gamma(rho + lam[0]) * mpmath.gamma(rho + lam[1]) * mpmath.gamma(rho + lam[2])
    return complex(prefactor * mpmath.power(2, s) * num / den)


def test_closed_form_origin():
    ref = float(mpmath.pi**5 / 64)
    assert abs(closed_form_I((0, 0, 0)) - ref) / ref < 1e-13
    assert abs(closed_form_I((0, 0, 0)) - 4.7815574) < 1e-6


@given(st.tuples(complex_numbers(0.45), complex_numbers(0.45), complex_numbers(0.45)), st.sampled_from([3, 4, 5]))
def test_closed_form_against_mpmath(lam, n):
    assume(pole_distance(lambda_to_alpha(lam), n) > 1e-6)
    pref = (mpmath.sqrt(mpmath.pi) / 2) ** (3 * (n - 1))
    ref = _mp_closed_form(lam, n, pref)
    assert rel(closed_form_I(lam, n), ref) < 1e-11


@given(st.tuples(complex_numbers(1.0), complex_numbers(1.0), complex_numbers(1.0)))
def test_closed_form_symmetry(lam):
    assume(pole_distance(lambda_to_alpha(lam)) > 1e-6)
    base = closed_form_I(lam)
    for perm in itertools.permutations(lam):
        assert rel(closed_form_I(perm), base) < 1e-13


def test_denominator_pole_gives_zero():
    assert closed_form_I((-1.0, 0.31, 0.47 + 0.2j)) == 0
    # lambda_j = -rho - m with everything else generic
    assert closed_form_I((0.2, -3.0, 0.9), n=3) == 0


def test_numerator_pole_is_refused():
    rho = 1.0
    lam = alpha_to_lambda((-rho, 0.3, 0.4))
    with pytest.raises(OnPoleHyperplane):
        closed_form_I(lam)
    with pytest.raises(OnPoleHyperplane):
        closed_form_I((-1 / 3, -1 / 3, -1 / 3))


def test_surface_convention_matches_total_measure():
    for n in (3, 4, 5, 6):
        rho = 0.5 * (n - 1)
        omega = sphere_area(n)
        assert rel(closed_form_I((rho, rho, rho), n, "surface"), omega**3) < 1e-12


def test_surface_to_literal_ratio():
    assert abs(surface_to_literal_ratio(3) - 512.0) < 1e-9
    for n in (3, 4, 5):
        rho = 0.5 * (n - 1)
        expected = 2.0 ** (9 * rho) / float(mpmath.gamma(2 * rho))
        assert rel(surface_to_literal_ratio(n), expected) < 1e-12
    assert abs(closed_form_I((0, 0, 0), 3, "surface") - 8 * np.pi**5) < 1e-9
    with pytest.raises(ValueError):
        log_prefactor(3, "other")


# -- normalized form and poles


def test_normalized_examples():
    assert abs(normalized_I((0, 0, 0)) - np.pi**3 / 64) < 1e-14
    assert abs(normalized_I((0, 0, 0)) - 0.4844731) < 1e-7
    lam = alpha_to_lambda((-1.0, 0.3, 0.4))
    v = normalized_I(lam)
    assert np.isfinite(v) and v != 0
    assert normalized_I((-1.0, 0.2, 0.3)) == 0
    assert normalized_I((-4.0, 0.2, 0.3)) == 0
    assert normalized_I((0.1, -2.5 - 1.0, 0.3), n=4) == 0


@given(st.tuples(complex_numbers(0.45), complex_numbers(0.45), complex_numbers(0.45)))
def test_normalized_is_quotient(lam):
    assume(pole_distance(lambda_to_alpha(lam)) > 1e-6)
    assert rel(normalized_I(lam), closed_form_I(lam) / normalizer(lam)) < 1e-11


def test_normalizer_infinite_on_hyperplane():
    assert np.isinf(normalizer((-1 / 3, -1 / 3, -1 / 3)))


def test_pole_distance_examples():
    assert pole_distance((-1.0, 0, 0)) == 0.0
    assert abs(pole_distance((0, 0, 0)) - 1.0) < 1e-15
    assert abs(pole_distance((1, 1, 1)) - 2.0) < 1e-15
    assert abs(pole_distance((0.5j, 0, 0), kmax=0) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        pole_distance((0, 0, 0), kmax=-1)


def test_entirety_probe():
    # dense grid in a polydisk, including points on every hyperplane with k <= 3
    rho = 1.0
    vals = []
    axis = np.linspace(-4, 2, 13)
    for a1, a2, a3 in itertools.product(axis, axis, axis):
        vals.append(normalized_I(alpha_to_lambda((a1, a2, a3))))
    for k in range(4):
        for other in np.linspace(-2, 2, 5):
            for alpha in ((-rho - 2 * k, other, 0.3j), (0.7, -rho - 2 * k - other - 0.7, other)):
                vals.append(normalized_I(alpha_to_lambda(alpha)))
    vals = np.array(vals)
    assert np.all(np.isfinite(vals))
    assert np.max(np.abs(vals)) < 1e6


@pytest.mark.parametrize("base", [(-0.2, -0.3, -0.5), (0.1 + 0.2j, -0.6, -0.5 - 0.2j)])
def test_simple_pole_on_sum_hyperplane(base):
    d = np.ones(3) / np.sqrt(3)
    prods = [eps * closed_form_I(np.asarray(base) + eps * d) for eps in (1e-3, 1e-4, 1e-5)]
    # the correction to the residue is O(eps)
    assert abs(prods[1] / prods[0] - 1) < 3e-2
    assert abs(prods[2] / prods[1] - 1) < 3e-3
    assert np.isfinite(prods[-1]) and abs(prods[-1]) > 0

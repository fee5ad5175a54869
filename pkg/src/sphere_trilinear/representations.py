"""Spherical principal series, the distance kernels, and the lambda <-> alpha map.

A scalar field is any callable taking points of shape ``(..., n)`` and
returning values of shape ``(...)``; see :mod:`sphere_trilinear.fields`.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import CoincidentPoints
from .lorentz import GroupElement, act, conformal_factor, stereographic

ScalarField = Callable[[np.ndarray], np.ndarray]

_DIST_GUARD = 1e-300


def rho_of(n: int) -> float:
    return 0.5 * (n - 1)


def cpow(base, exponent) -> np.ndarray:
    """base**exponent for strictly positive real bases and complex exponents.

    Uses exp(exponent * log(base)) with the real logarithm, so there is no
    branch choice to make.
    """
    base = np.asarray(base, dtype=float)
    exponent = complex(exponent) if np.ndim(exponent) == 0 else np.asarray(exponent, dtype=complex)
    return np.exp(exponent * np.log(base))


def lambda_to_alpha(lam) -> np.ndarray:
    """alpha_1 = -l1 + l2 + l3 and cyclically."""
    l1, l2, l3 = np.asarray(lam, dtype=complex)
    return np.array([-l1 + l2 + l3, l1 - l2 + l3, l1 + l2 - l3])


def alpha_to_lambda(alpha) -> np.ndarray:
    a1, a2, a3 = np.asarray(alpha, dtype=complex)
    return 0.5 * np.array([a2 + a3, a3 + a1, a1 + a2])


def integrable(alpha, n: int = 3) -> bool:
    """Whether the three-point kernel is absolutely integrable on S x S x S.

    Holds iff Re alpha_j > -rho for each j and Re(alpha_1+alpha_2+alpha_3) > -rho.
    """
    a = np.asarray(alpha, dtype=complex).real
    rho = rho_of(n)
    return bool(np.all(a > -rho) and a.sum() > -rho)


def _power_of_distance(dist, exponent) -> np.ndarray:
    """|x-y|^exponent with the conventions for coincident points."""
    dist = np.asarray(dist, dtype=float)
    exponent = complex(exponent)
    zero = dist <= _DIST_GUARD
    if np.any(zero):
        if exponent == 0:
            pass
        elif exponent.real <= 0:
            raise CoincidentPoints("kernel evaluated at coincident points")
    safe = np.where(zero, 1.0, dist)
    out = cpow(safe, exponent)
    if exponent != 0:
        out = np.where(zero, 0.0, out)
    return out


def kernel_k(alpha, x, y) -> np.ndarray:
    """Two-point kernel |x - y|^{-rho + alpha}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rho = rho_of(x.shape[-1])
    return _power_of_distance(np.linalg.norm(x - y, axis=-1), -rho + complex(alpha))


def kernel_K(alpha, x1, x2, x3) -> np.ndarray:
    """Three-point kernel; alpha_j is paired with the two points other than x_j."""
    a1, a2, a3 = np.asarray(alpha, dtype=complex)
    return kernel_k(a1, x2, x3) * kernel_k(a2, x3, x1) * kernel_k(a3, x1, x2)


def kernel_J(alpha, y1, y2, y3) -> np.ndarray:
    """Noncompact-picture kernel on (R^{n-1})^3."""
    a1, a2, a3 = np.asarray(alpha, dtype=complex)
    y1, y2, y3 = (np.asarray(y, dtype=float) for y in (y1, y2, y3))
    rho = rho_of(y1.shape[-1] + 1)
    d = lambda u, v: np.linalg.norm(u - v, axis=-1)  # noqa: E731
    return (
        _power_of_distance(d(y1, y2), -rho + a3)
        * _power_of_distance(d(y2, y3), -rho + a1)
        * _power_of_distance(d(y3, y1), -rho + a2)
    )


def psi_weight(alpha, y1, y2, y3) -> np.ndarray:
    """Product of (1 + |y_i|^2)^{-rho - (alpha_j + alpha_k)/2} over i."""
    a1, a2, a3 = np.asarray(alpha, dtype=complex)
    y1, y2, y3 = (np.asarray(y, dtype=float) for y in (y1, y2, y3))
    rho = rho_of(y1.shape[-1] + 1)
    w = lambda y, e: cpow(1.0 + np.sum(y * y, axis=-1), e)  # noqa: E731
    return (
        w(y1, -rho - 0.5 * (a2 + a3))
        * w(y2, -rho - 0.5 * (a3 + a1))
        * w(y3, -rho - 0.5 * (a1 + a2))
    )


def noncompact_constant(alpha, n: int) -> complex:
    """Constant C with K_alpha(f) = C * J_alpha((f o c) Psi_alpha).

    Every chordal distance picks up a factor 2 under the chart, so the
    kernel contributes 2^{sum(alpha) - 3 rho} on top of the 2^{3(n-1)} from
    the three measures.
    """
    alpha = np.asarray(alpha, dtype=complex)
    return complex(2.0 ** (alpha.sum() + 3 * rho_of(n)))


def kernel_K_from_chart(alpha, y1, y2, y3) -> np.ndarray:
    """Reassemble K_alpha(c(y1), c(y2), c(y3)) from kernel_J and psi_weight."""
    alpha = np.asarray(alpha, dtype=complex)
    y1 = np.asarray(y1, dtype=float)
    n = y1.shape[-1] + 1
    rho = rho_of(n)
    chart_density = np.prod(
        [cpow(1.0 + np.sum(np.asarray(y) ** 2, axis=-1), 2 * rho) for y in (y1, y2, y3)], axis=0
    )
    return (
        2.0 ** (alpha.sum() - 3 * rho)
        * kernel_J(alpha, y1, y2, y3)
        * psi_weight(alpha, y1, y2, y3)
        * chart_density
    )


def rep_apply(lam, g: GroupElement, f: ScalarField) -> ScalarField:
    """pi_lambda(g) f : x -> kappa(g^{-1}, x)^{rho + lambda} f(g^{-1}(x))."""
    lam = complex(lam)
    g_inv = g.inverse()
    exponent = rho_of(g.n) + lam

    def transformed(x):
        x = np.asarray(x, dtype=float)
        return cpow(conformal_factor(g_inv, x), exponent) * f(act(g_inv, x))

    return transformed


def rep_apply_pair(sigma, tau, g: GroupElement, f: Callable) -> Callable:
    """Tensor product pi_sigma (x) pi_tau acting on a two-variable field f(x1, x2)."""
    g_inv = g.inverse()
    rho = rho_of(g.n)

    def transformed(x1, x2):
        return (
            cpow(conformal_factor(g_inv, x1), rho + complex(sigma))
            * cpow(conformal_factor(g_inv, x2), rho + complex(tau))
            * f(act(g_inv, x1), act(g_inv, x2))
        )

    return transformed


def pullback(f: ScalarField) -> Callable:
    """f o c, a field on R^{n-1}."""
    return lambda y: f(stereographic(y))

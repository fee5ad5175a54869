"""Objects on the space of ordered pairs of distinct points, G/H with H = MA.

H is the stabilizer of the pair (1^+, 1^-): boosts along the x_1 axis times
rotations of the last n - 1 coordinates.  Everything here is an exact
pointwise formula; no integration is involved.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CoincidentPoints, SingularPoint
from .lorentz import (
    GroupElement,
    act,
    boost,
    bracket,
    check_dimension,
    conformal_factor,
    lift,
    one_minus,
    one_plus,
    rotation,
)
from .representations import cpow, rho_of

PairField = Callable[[np.ndarray, np.ndarray], np.ndarray]

SINGULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HElement:
    """h = a_t m, with m a rotation k in SO(n - 1) of the coordinates x_2..x_n."""

    t: float
    k: np.ndarray

    def __post_init__(self):
        k = np.array(self.k, dtype=float)
        k.setflags(write=False)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "k", k)
        # validates orthogonality and determinant
        self.group_element()

    @property
    def n(self) -> int:
        return self.k.shape[0] + 1

    def group_element(self) -> GroupElement:
        n = check_dimension(self.k.shape[0] + 1)
        m = np.eye(n)
        m[1:, 1:] = self.k
        return boost(self.t, n) @ rotation(m)

    def __matmul__(self, other: "HElement") -> "HElement":
        # M commutes with A, so (a_t m)(a_s m') = a_{t+s} m m'
        return HElement(self.t + other.t, self.k @ other.k)


def nu(zeta, h: HElement) -> complex:
    """Character nu_zeta(a_t m) = e^{t zeta}."""
    return complex(np.exp(h.t * complex(zeta)))


def psi_proj(s1, s2, s3) -> tuple[np.ndarray, np.ndarray]:
    """Psi(Pi, s3) for the plane Pi spanned by the lifts of s1 and s2.

    Returns ``(projection, closed_form)``.  The first removes from the lift of
    s3 its component along Pi, with coefficients fixed by the two
    orthogonality conditions against the lifts of s1 and s2, and takes
    2 (-q)^{1/2}; the second is 2 |s1 - s3| |s2 - s3| / |s1 - s2|.

    Raises
    ------
    CoincidentPoints
        If s1 and s2 coincide, so that Pi is not a plane.
    """
    s1, s2, s3 = (np.asarray(s, dtype=float) for s in (s1, s2, s3))
    d12 = np.linalg.norm(s1 - s2, axis=-1)
    if np.any(d12 <= SINGULAR_TOL):
        raise CoincidentPoints("s1 and s2 must be distinct")
    u1, u2, u3 = lift(s1), lift(s2), lift(s3)
    b12 = bracket(u1, u2)
    gram = np.zeros(b12.shape + (2, 2))
    gram[..., 0, 1] = gram[..., 1, 0] = b12
    gram[..., 0, 0] = bracket(u1, u1)
    gram[..., 1, 1] = bracket(u2, u2)
    rhs = np.stack([bracket(u3, u1), bracket(u3, u2)], axis=-1)
    coef = np.linalg.solve(gram, rhs[..., None])[..., 0]
    sigma = u3 - coef[..., :1] * u1 - coef[..., 1:] * u2
    projection = 2.0 * np.sqrt(np.maximum(-bracket(sigma, sigma), 0.0))
    closed = 2.0 * np.linalg.norm(s1 - s3, axis=-1) * np.linalg.norm(s2 - s3, axis=-1) / d12
    return projection, closed


def psi0(s) -> np.ndarray:
    """Psi for the base plane through 1^+ and 1^-: 2 |(x_2, ..., x_n)|."""
    s = np.asarray(s, dtype=float)
    return 2.0 * np.linalg.norm(s[..., 1:], axis=-1)


def theta(lam, zeta, s) -> np.ndarray:
    """Theta_{lam,zeta}(s) = |1^+ - s|^{-rho-lam+zeta} |1^- - s|^{-rho-lam-zeta}.

    Raises
    ------
    SingularPoint
        At s = 1^+ or s = 1^-.
    """
    s = np.asarray(s, dtype=float)
    n = s.shape[-1]
    rho = rho_of(n)
    lam, zeta = complex(lam), complex(zeta)
    dp = np.linalg.norm(s - one_plus(n), axis=-1)
    dm = np.linalg.norm(s - one_minus(n), axis=-1)
    if np.any(dp <= SINGULAR_TOL) or np.any(dm <= SINGULAR_TOL):
        raise SingularPoint("Theta is singular at 1^+ and 1^-")
    return cpow(dp, -rho - lam + zeta) * cpow(dm, -rho - lam - zeta)


def theta_field(lam, zeta) -> Callable:
    return lambda s: theta(lam, zeta, s)


def p_map(sigma, tau, f: PairField, g: GroupElement) -> complex:
    """(P_{sigma,tau} f)(g) = kappa(g,1^+)^{rho+sigma} kappa(g,1^-)^{rho+tau} f(g 1^+, g 1^-)."""
    n = g.n
    rho = rho_of(n)
    p, m = one_plus(n), one_minus(n)
    value = (
        cpow(conformal_factor(g, p), rho + complex(sigma))
        * cpow(conformal_factor(g, m), rho + complex(tau))
        * f(act(g, p), act(g, m))
    )
    return complex(value)


def gh_measure_weight(s, t) -> np.ndarray:
    """Density |s - t|^{-2(n-1)} of the invariant measure on pairs of distinct points."""
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    d = np.linalg.norm(s - t, axis=-1)
    if np.any(d <= SINGULAR_TOL):
        raise CoincidentPoints("the invariant measure is singular on the diagonal")
    return d ** (-2.0 * (s.shape[-1] - 1))


def isometry_sides(sigma, tau, f: PairField, g: GroupElement) -> tuple[float, float]:
    """Both sides of |P f(g)|^2 = 2^{-2(n-1)} |s - t|^{2(n-1)} |f(s, t)|^2, (s, t) = g(1^+, 1^-).

    The identity holds for imaginary sigma and tau; integrated against the
    invariant measure it gives ||P f||^2 = 2^{-2(n-1)} ||f||^2.
    """
    n = g.n
    s, t = act(g, one_plus(n)), act(g, one_minus(n))
    lhs = abs(p_map(sigma, tau, f, g)) ** 2
    rhs = 2.0 ** (-2 * (n - 1)) / float(gh_measure_weight(s, t)) * abs(complex(f(s, t))) ** 2
    return float(lhs), float(rhs)

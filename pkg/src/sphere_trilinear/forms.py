"""The invariant trilinear form T_lambda, its residual checks and the normalized form."""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from .lorentz import GroupElement
from .quadrature import SphereGrid, TripleScheme, TrilinearResult, integrate_triple
from .representations import ScalarField, lambda_to_alpha, rep_apply
from .special import normalizer

RESIDUAL_FLOOR = 1e-300

__all__ = [
    "TrilinearResult",
    "trilinear",
    "invariance_residual",
    "duality_residual",
    "normalized_trilinear",
]


def _relative(a: complex, b: complex) -> float:
    return float(abs(a - b) / (abs(b) + RESIDUAL_FLOOR))


def trilinear(lam, f1: ScalarField, f2: ScalarField, f3: ScalarField,
              scheme: TripleScheme | None = None) -> TrilinearResult:
    """T_lambda(f1, f2, f3) = K_alpha(f1 (x) f2 (x) f3) with alpha = lambda_to_alpha(lam).

    Raises
    ------
    NotIntegrable
        If alpha lies outside the integrability domain.
    """
    scheme = scheme or TripleScheme()
    return integrate_triple(lambda_to_alpha(lam), f1, f2, f3, scheme)


def invariance_residual(lam, f1, f2, f3, g: GroupElement,
                        scheme: TripleScheme | None = None) -> float:
    """Relative change of T_lambda when every slot is moved by pi_{lambda_j}(g).

    Both evaluations use the same scheme, seed included.
    """
    scheme = scheme or TripleScheme(n=g.n)
    base = trilinear(lam, f1, f2, f3, scheme).value
    moved = [rep_apply(l, g, f) for l, f in zip(np.asarray(lam, dtype=complex), (f1, f2, f3))]
    return _relative(trilinear(lam, *moved, scheme).value, base)


def duality_residual(lam, phi: ScalarField, psi: ScalarField, g: GroupElement,
                     grid: SphereGrid) -> float:
    """Relative grid-sum defect of int pi_{-lam}(g) phi * pi_lam(g) psi = int phi psi."""
    lam = complex(lam)
    x = grid.nodes
    plain = complex(np.dot(grid.weights, phi(x) * psi(x)))
    moved = complex(np.dot(grid.weights, rep_apply(-lam, g, phi)(x) * rep_apply(lam, g, psi)(x)))
    return _relative(moved, plain)


def normalized_trilinear(lam, f1, f2, f3, scheme: TripleScheme | None = None) -> TrilinearResult:
    """T_lambda divided by the four-Gamma normalizer (numerical path, integrable lambda only)."""
    res = trilinear(lam, f1, f2, f3, scheme)
    norm = normalizer(lam, res.scheme.n)
    return replace(res, value=res.value / norm, error_indicator=res.error_indicator / abs(norm))

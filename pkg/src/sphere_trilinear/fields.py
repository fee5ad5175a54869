"""Small library of smooth test fields on the sphere.

Each constructor returns a pure callable ``f(x) -> values`` over points of
shape ``(..., n)``.  Values are complex so fields compose freely with the
complex powers of the principal series.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

ScalarField = Callable[[np.ndarray], np.ndarray]


def constant(value: complex = 1.0) -> ScalarField:
    value = complex(value)

    def f(x):
        x = np.asarray(x)
        return np.full(x.shape[:-1], value, dtype=complex)

    return f


def coordinate(i: int) -> ScalarField:
    """The coordinate function x_i (1-based, as on the sphere)."""

    def f(x):
        return np.asarray(x, dtype=float)[..., i - 1].astype(complex)

    return f


def monomial(powers: Sequence[int], coefficient: complex = 1.0) -> ScalarField:
    """coefficient * prod_i x_i^{powers[i]} restricted to the sphere."""
    powers = tuple(int(p) for p in powers)
    coefficient = complex(coefficient)

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape[:-1], coefficient, dtype=complex)
        for i, p in enumerate(powers):
            if p:
                out = out * x[..., i] ** p
        return out

    return f


def polynomial(terms: dict) -> ScalarField:
    """Sum of monomials given as ``{powers_tuple: coefficient}``."""
    parts = [monomial(p, c) for p, c in terms.items()]
    return add(*parts)


def add(*fields: ScalarField) -> ScalarField:
    def f(x):
        out = fields[0](x)
        for g in fields[1:]:
            out = out + g(x)
        return out

    return f


def multiply(*fields: ScalarField) -> ScalarField:
    def f(x):
        out = fields[0](x)
        for g in fields[1:]:
            out = out * g(x)
        return out

    return f


def scaled(field: ScalarField, c: complex) -> ScalarField:
    c = complex(c)
    return lambda x: c * field(x)


def smooth_test_fields(n: int = 3) -> list[ScalarField]:
    """Three low-degree polynomial fields used by the invariance checks."""
    e = np.eye(n, dtype=int)
    return [
        polynomial({tuple(0 * e[0]): 1.0, tuple(e[0]): 0.5}),
        polynomial({tuple(0 * e[0]): 1.0, tuple(e[1]): 0.3, tuple(e[0] + e[2]): 0.2}),
        polynomial({tuple(0 * e[0]): 0.8, tuple(2 * e[2]): 0.4, tuple(e[1]): -0.25}),
    ]

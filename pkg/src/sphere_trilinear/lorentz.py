"""The conformal group SO_0(1, n) acting on the unit sphere S^{n-1}.

Points of the sphere are plain float arrays whose last axis has length ``n``;
every pointwise function accepts a single point of shape ``(n,)`` or a batch
of shape ``(..., n)`` and broadcasts over the leading axes.

Group elements are wrapped in :class:`GroupElement`, an immutable
``(n+1) x (n+1)`` matrix validated against the Lorentz form
``eta = diag(1, -1, ..., -1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (
    InvalidGroupElement,
    InvalidRotation,
    NumericalDegeneracy,
    PoleOfChart,
    UnsupportedDimension,
)

GROUP_TOL = 1e-10
SPHERE_TOL = 1e-12
DEFAULT_ORBIT_TOL = 1e-9


def check_dimension(n: int) -> int:
    n = int(n)
    if n < 3:
        raise UnsupportedDimension(f"n must be >= 3, got {n}")
    return n


def eta(n: int) -> np.ndarray:
    """Matrix of the quadratic form q(x) = x0^2 - x1^2 - ... - xn^2."""
    d = -np.ones(n + 1)
    d[0] = 1.0
    return np.diag(d)


def bracket(x, y) -> np.ndarray:
    """Lorentz bilinear form ``[x, y]`` on R^{1,n}, batched over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x[..., 0] * y[..., 0] - np.sum(x[..., 1:] * y[..., 1:], axis=-1)


def quadratic_form(x) -> np.ndarray:
    return bracket(x, x)


# --------------------------------------------------------------------------
# points


def sphere_point(coords, tol: float = SPHERE_TOL) -> np.ndarray:
    """Validate and return a point (or batch of points) of S^{n-1}."""
    x = np.array(coords, dtype=float)
    if x.ndim == 0:
        raise ValueError("a sphere point needs at least one axis")
    check_dimension(x.shape[-1])
    norm = np.linalg.norm(x, axis=-1)
    if np.any(np.abs(norm - 1.0) > tol):
        raise ValueError("coordinates are not on the unit sphere")
    return x


def one_plus(n: int = 3) -> np.ndarray:
    x = np.zeros(check_dimension(n))
    x[0] = 1.0
    return x


def one_minus(n: int = 3) -> np.ndarray:
    return -one_plus(n)


def basis_vector(i: int, n: int = 3) -> np.ndarray:
    """Unit vector e_i with the 1-based indexing used for sphere coordinates."""
    x = np.zeros(check_dimension(n))
    x[i - 1] = 1.0
    return x


def random_sphere_points(rng: np.random.Generator, size: int, n: int = 3) -> np.ndarray:
    x = rng.standard_normal((size, check_dimension(n)))
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def lift(x) -> np.ndarray:
    """Isotropic representative (1, x_1, ..., x_n) of the point x."""
    x = np.asarray(x, dtype=float)
    return np.concatenate([np.ones(x.shape[:-1] + (1,)), x], axis=-1)


# --------------------------------------------------------------------------
# group elements


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of the identity component SO_0(1, n)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidGroupElement("matrix must be square")
        check_dimension(m.shape[0] - 1)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        self.validate()

    def validate(self, tol: float = GROUP_TOL) -> None:
        m = self.matrix
        e = eta(self.n)
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if np.max(np.abs(m.T @ e @ m - e)) > tol * scale:
            raise InvalidGroupElement("matrix does not preserve the Lorentz form")
        if abs(np.linalg.det(m) - 1.0) > tol * scale:
            raise InvalidGroupElement("determinant is not +1")
        if m[0, 0] < 1.0 - tol:
            raise InvalidGroupElement("matrix is not in the identity component")

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    @classmethod
    def identity(cls, n: int = 3) -> "GroupElement":
        return cls(np.eye(check_dimension(n) + 1))

    def inverse(self) -> "GroupElement":
        e = eta(self.n)
        return GroupElement(e @ self.matrix.T @ e)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        return GroupElement(self.matrix @ other.matrix)

    def __call__(self, x) -> np.ndarray:
        return act(self, x)

    def allclose(self, other: "GroupElement", atol: float = 1e-10) -> bool:
        return bool(np.allclose(self.matrix, other.matrix, rtol=0.0, atol=atol))


def _check_rotation(k, size: int | None = None) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise InvalidRotation("rotation must be a square matrix")
    if size is not None and k.shape[0] != size:
        raise InvalidRotation(f"rotation must be {size}x{size}")
    if np.max(np.abs(k.T @ k - np.eye(k.shape[0]))) > GROUP_TOL:
        raise InvalidRotation("rotation is not orthogonal")
    if abs(np.linalg.det(k) - 1.0) > GROUP_TOL:
        raise InvalidRotation("rotation does not have determinant +1")
    return k


def rotation(k) -> GroupElement:
    """Embed k in SO(n) as the block matrix diag(1, k)."""
    k = _check_rotation(k)
    n = k.shape[0]
    g = np.eye(n + 1)
    g[1:, 1:] = k
    return GroupElement(g)


def boost(t: float, n: int = 3) -> GroupElement:
    """The one-parameter subgroup a_t mixing x0 and x1."""
    n = check_dimension(n)
    t = float(t)
    if not np.isfinite(t):
        raise ValueError("boost parameter must be finite")
    g = np.eye(n + 1)
    ch, sh = np.cosh(t), np.sinh(t)
    g[0, 0] = g[1, 1] = ch
    g[0, 1] = g[1, 0] = sh
    return GroupElement(g)


def _translation(xi, sign: float) -> GroupElement:
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if not np.all(np.isfinite(xi)):
        raise ValueError("translation vector must be finite")
    n = check_dimension(xi.size + 1)
    h = 0.5 * float(xi @ xi)
    g = np.eye(n + 1)
    g[0, 0] = 1.0 + h
    g[0, 1] = -sign * h
    g[1, 0] = sign * h
    g[1, 1] = 1.0 - h
    g[0, 2:] = xi
    g[1, 2:] = sign * xi
    g[2:, 0] = xi
    g[2:, 1] = -sign * xi
    return GroupElement(g)


def n_translation(xi) -> GroupElement:
    """Element n_xi of the unipotent subgroup N fixing 1^+."""
    return _translation(xi, 1.0)


def nbar_translation(xi) -> GroupElement:
    """Element of the opposite unipotent subgroup, the Cartan-involution image of N."""
    return _translation(xi, -1.0)


GeneratorKind = Literal["rotation", "boost", "n_translation", "nbar_translation"]


def make_generator(kind: GeneratorKind, param, n: int = 3) -> GroupElement:
    if kind == "rotation":
        return rotation(param)
    if kind == "boost":
        return boost(param, n)
    if kind == "n_translation":
        return n_translation(param)
    if kind == "nbar_translation":
        return nbar_translation(param)
    raise ValueError(f"unknown generator kind {kind!r}")


def random_rotation(rng: np.random.Generator, size: int) -> np.ndarray:
    """Seeded element of SO(size) from the QR factorization of a Gaussian matrix."""
    a = rng.standard_normal((size, size))
    q, r = np.linalg.qr(a)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_group_element(seed: int, scale: float, n: int = 3) -> GroupElement:
    """Deterministic product k * a_t * n_xi with |t| <= scale and |xi| <= scale."""
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    n = check_dimension(n)
    rng = np.random.default_rng(seed)
    k = random_rotation(rng, n)
    t = rng.uniform(-scale, scale)
    direction = rng.standard_normal(n - 1)
    direction /= np.linalg.norm(direction)
    xi = direction * rng.uniform(0.0, scale)
    return rotation(k) @ boost(t, n) @ n_translation(xi)


# --------------------------------------------------------------------------
# action on the sphere


def _image_lift(g: GroupElement, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != g.n:
        raise ValueError(f"point dimension {x.shape[-1]} does not match group n={g.n}")
    y = lift(x) @ g.matrix.T
    if np.any(y[..., 0] <= 0.0):
        raise NumericalDegeneracy("(g x~)_0 <= 0; the matrix is not in SO_0(1, n)")
    return y


def act(g: GroupElement, x) -> np.ndarray:
    """Conformal action g(x): normalize g x~ so that its 0-th coordinate is 1."""
    y = _image_lift(g, x)
    return y[..., 1:] / y[..., :1]


def conformal_factor(g: GroupElement, x) -> np.ndarray:
    """kappa(g, x) = 1 / (g x~)_0."""
    return 1.0 / _image_lift(g, x)[..., 0]


def jacobian(g: GroupElement, x) -> np.ndarray:
    return conformal_factor(g, x) ** (g.n - 1)


def tangent_frame(x) -> np.ndarray:
    """Orthonormal basis of the tangent space at a single point x, as rows."""
    x = np.asarray(x, dtype=float)
    n = x.size
    q = np.linalg.qr(np.column_stack([x, np.eye(n)[:, : n - 1]]))[0]
    return q[:, 1:].T


def finite_difference_jacobian(g: GroupElement, x, step: float = 1e-5) -> float:
    """|det Dg(x)| from central differences along great circles through x."""
    x = np.asarray(x, dtype=float)
    frame = tangent_frame(x)
    cols = []
    for v in frame:
        plus = act(g, np.cos(step) * x + np.sin(step) * v)
        minus = act(g, np.cos(step) * x - np.sin(step) * v)
        cols.append((plus - minus) / (2.0 * step))
    d = np.array(cols).T
    return float(np.sqrt(abs(np.linalg.det(d.T @ d))))


# --------------------------------------------------------------------------
# stereographic chart


def stereographic(xi) -> np.ndarray:
    """The chart c: R^{n-1} -> S minus {1^-}."""
    xi = np.asarray(xi, dtype=float)
    r2 = np.sum(xi * xi, axis=-1, keepdims=True)
    return np.concatenate([(1.0 - r2) / (1.0 + r2), 2.0 * xi / (1.0 + r2)], axis=-1)


def stereographic_inv(x, tol: float = SPHERE_TOL) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    denom = 1.0 + x[..., :1]
    if np.any(np.linalg.norm(x - one_minus(x.shape[-1]), axis=-1) <= tol):
        raise PoleOfChart("the chart is undefined at 1^-")
    return x[..., 1:] / denom


# --------------------------------------------------------------------------
# Iwasawa decomposition G = K A N


def iwasawa(g: GroupElement) -> tuple[np.ndarray, float, np.ndarray]:
    """Return (k, t, xi) with g = rotation(k) @ boost(t) @ n_translation(xi).

    N fixes w+ = (1, 1, 0, ..., 0) and a_t scales it by e^t, so
    (g w+)_0 = e^t and g w+ / e^t = k w+ pins down the first column of k.
    The remaining M-ambiguity is read off the lower-right block of
    k0^{-1} g, which equals the M-component because N and A act trivially
    on e_2..e_n modulo w+.
    """
    n = g.n
    m = g.matrix
    w_plus = np.zeros(n + 1)
    w_plus[:2] = 1.0
    image = m @ w_plus
    t = float(np.log(image[0]))
    s = image[1:] / image[0]
    s /= np.linalg.norm(s)

    # any rotation carrying e_1 to s
    k0 = np.linalg.qr(np.column_stack([s, np.eye(n)]))[0][:, :n]
    if k0[:, 0] @ s < 0:
        k0[:, 0] = -k0[:, 0]
    if np.linalg.det(k0) < 0:
        k0[:, -1] = -k0[:, -1]

    emb = np.eye(n + 1)
    emb[1:, 1:] = k0
    p = emb.T @ m  # in P = MAN
    mblock = p[2:, 2:]
    u, _, vt = np.linalg.svd(mblock)
    mblock = u @ vt
    k = k0.copy()
    k[:, 1:] = k0[:, 1:] @ mblock

    kmat = np.eye(n + 1)
    kmat[1:, 1:] = k
    nmat = boost(-t, n).matrix @ kmat.T @ m
    xi = nmat[2:, 0].copy()
    return k, t, xi


# --------------------------------------------------------------------------
# orbits of G on S x S x S


ORBIT_LABELS = ("O0", "O1", "O2", "O3", "O4")


def classify_orbit(x1, x2, x3, tol: float = DEFAULT_ORBIT_TOL) -> str:
    """Label of the G-orbit of (x1, x2, x3); equality means distance < tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    x1, x2, x3 = (np.asarray(x, dtype=float) for x in (x1, x2, x3))
    e12 = np.linalg.norm(x1 - x2) < tol
    e23 = np.linalg.norm(x2 - x3) < tol
    e13 = np.linalg.norm(x1 - x3) < tol
    if e12 and e23 and e13:
        return "O4"
    if e23:
        return "O1"
    if e13:
        return "O2"
    if e12:
        return "O3"
    return "O0"

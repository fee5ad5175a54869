"""Quadrature on S^{n-1} and on S x S x S for the singular three-point kernel.

Three evaluation paths for the triple integral are provided:

* ``tensor_product``: a product grid on the sphere, with the triple sum
  written as the trace of a product of three Nystrom matrices
  ``tr(F1 T3 F2 T1 F3 T2)``.  The singular diagonal of each matrix is
  replaced by the value that makes its row sums exact (singularity
  subtraction); ``singular="excise"`` drops near-diagonal pairs instead.
* ``monte_carlo``: seeded samples from a balance-heuristic mixture of three
  chains, each drawing two points near their predecessor with density
  proportional to |x - y|^gamma so that pair singularities cancel.
* ``reduced_constant``: constant fields only; a three-dimensional integral
  obtained by fixing x1 = 1^+ and x2 on a meridian.
* ``noncompact``: the same integral pulled back to (R^{n-1})^3 by the
  stereographic chart and sampled inside a ball.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Literal

import numpy as np
from scipy.special import betainc, roots_jacobi, roots_legendre

from .errors import NotIntegrable, TruncationUnsound
from .lorentz import check_dimension, random_sphere_points, stereographic
from .representations import (
    cpow,
    integrable,
    kernel_J,
    noncompact_constant,
    psi_weight,
    rho_of,
)
from .special import log_gamma

SchemeKind = Literal["tensor_product", "monte_carlo", "reduced_constant", "noncompact"]

MC_BLOCK = 1 << 14
# floor on Beta draws: keeps sampled pairs at distance >= ~1e-12
_MIN_BETA_DRAW = 1e-24


def sphere_area(n: int) -> float:
    """omega_{n-1} = 2 pi^{n/2} / Gamma(n/2); n = 1 gives the two points of S^0."""
    return float(np.real(2.0 * np.pi ** (n / 2) * np.exp(-log_gamma(n / 2))))


def kernel_row_integral(beta, n: int) -> complex:
    """Integral over y in S^{n-1} of |x - y|^beta, independent of x.

    omega_{n-2} 2^{beta+n-2} B((beta+n-1)/2, (n-1)/2), valid for Re beta > 1 - n.
    """
    beta = complex(beta)
    a = 0.5 * (beta + n - 1)
    b = 0.5 * (n - 1)
    log_beta_fn = log_gamma(a) + log_gamma(b) - log_gamma(a + b)
    return complex(sphere_area(n - 1) * 2.0 ** (beta + n - 2) * np.exp(log_beta_fn))


# --------------------------------------------------------------------------
# sphere grids


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Product quadrature on S^{n-1}: nodes of shape (N, n), positive weights."""

    nodes: np.ndarray
    weights: np.ndarray
    n: int
    resolution: int

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def spacing(self) -> float:
        """Nominal node spacing pi / resolution along the polar direction."""
        return np.pi / self.resolution


def _circle(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    m = 2 * resolution
    phi = 2.0 * np.pi * np.arange(m) / m
    return np.column_stack([np.cos(phi), np.sin(phi)]), np.full(m, 2.0 * np.pi / m)


def _sphere_nodes(n: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    if n == 2:
        return _circle(resolution)
    a = 0.5 * (n - 3)
    if a == 0:
        t, wt = roots_legendre(resolution)
    else:
        t, wt = roots_jacobi(resolution, a, a)
    sub_x, sub_w = _sphere_nodes(n - 1, resolution)
    r = np.sqrt(1.0 - t * t)
    nodes = np.concatenate(
        [
            np.repeat(t, sub_w.size)[:, None],
            (r[:, None, None] * sub_x[None, :, :]).reshape(-1, n - 1),
        ],
        axis=1,
    )
    weights = (wt[:, None] * sub_w[None, :]).reshape(-1)
    return nodes, weights


def sphere_grid(n: int = 3, resolution: int = 16) -> SphereGrid:
    """Gauss rule in x_1 (Legendre for n = 3, Gegenbauer above) times a grid on S^{n-2}.

    The circle factor is the uniform rule with 2 * resolution points, so
    rotations about the x_1 axis by multiples of pi / resolution map the
    grid onto itself.
    """
    n = check_dimension(n)
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    nodes, weights = _sphere_nodes(n, int(resolution))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return SphereGrid(nodes, weights, n, int(resolution))


def integrate(f: Callable, grid: SphereGrid) -> complex:
    """Weighted node sum of f, in node order."""
    return complex(np.dot(grid.weights, np.asarray(f(grid.nodes), dtype=complex)))


# --------------------------------------------------------------------------
# schemes and results


@dataclass(frozen=True)
class TripleScheme:
    """How to discretize the triple integral.

    ``resolution`` is the sphere-grid resolution for ``tensor_product``, the
    outer node count for ``reduced_constant`` and the sample count for the
    two Monte Carlo kinds.  ``workers > 1`` fans the work out over threads;
    the block decomposition does not depend on it, so results are identical.
    """

    kind: SchemeKind = "tensor_product"
    resolution: int = 16
    seed: int = 0
    truncation_radius: float = 50.0
    n: int = 3
    workers: int = 1
    singular: Literal["subtract", "excise"] = "subtract"

    def __post_init__(self):
        if self.kind not in ("tensor_product", "monte_carlo", "reduced_constant", "noncompact"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")
        if self.kind == "noncompact" and not self.truncation_radius > 0:
            raise ValueError("truncation_radius must be positive")
        if self.singular not in ("subtract", "excise"):
            raise ValueError(f"unknown singular treatment {self.singular!r}")
        check_dimension(self.n)

    def halved(self) -> "TripleScheme":
        return replace(self, resolution=max(2, self.resolution // 2))

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "resolution": self.resolution,
            "seed": self.seed,
            "truncation_radius": self.truncation_radius,
            "n": self.n,
            "singular": self.singular,
        }


@dataclass(frozen=True)
class TrilinearResult:
    value: complex
    error_indicator: float
    scheme: TripleScheme


def _require_integrable(alpha, n: int) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=complex)
    if not integrable(alpha, n):
        raise NotIntegrable(
            f"alpha={alpha} is outside the integrability domain for n={n}; "
            "use the closed form or the normalized form instead"
        )
    return alpha


# --------------------------------------------------------------------------
# tensor-product path


def _pair_distances(nodes: np.ndarray) -> np.ndarray:
    gram = np.clip(nodes @ nodes.T, -1.0, 1.0)
    d2 = np.maximum(2.0 - 2.0 * gram, 0.0)
    # the Gram form loses digits for close pairs; recompute those directly
    close = d2 < 1e-4
    if np.any(close):
        i, j = np.nonzero(close)
        diff = nodes[i] - nodes[j]
        d2[i, j] = np.sum(diff * diff, axis=-1)
    return np.sqrt(d2)


def nystrom_matrix(beta, grid: SphereGrid, dist: np.ndarray | None = None,
                   singular: str = "subtract") -> np.ndarray:
    """T[j, k] ~ w_k |x_j - x_k|^beta, so (T phi)_j ~ integral of |x_j - y|^beta phi(y)."""
    if dist is None:
        dist = _pair_distances(grid.nodes)
    beta = complex(beta)
    n = grid.n
    if singular == "excise":
        keep = dist >= 0.5 * grid.spacing
        t = np.where(keep, cpow(np.where(keep, dist, 1.0), beta), 0.0)
        return t * grid.weights[None, :]
    off = ~np.eye(grid.size, dtype=bool)
    t = np.where(off, cpow(np.where(off, dist, 1.0), beta), 0.0) * grid.weights[None, :]
    diag = kernel_row_integral(beta, n) - t.sum(axis=1)
    t[np.diag_indices(grid.size)] = diag
    return t


def _trace_of_product(f1, f2, f3, t1, t2, t3, workers: int) -> complex:
    # tr(F1 T3 F2 T1 F3 T2) = sum_ij A_ij B_ji with A = F1 T3 F2, B = T1 F3 T2
    a = (f1[:, None] * t3) * f2[None, :]
    left = t1 * f3[None, :]
    size = f1.size
    block = max(64, -(-size // 8))
    starts = list(range(0, size, block))

    def partial(s):
        rows = slice(s, min(s + block, size))
        b = left[rows] @ t2
        return np.sum(a[:, rows] * b.T)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(partial, starts))
    else:
        parts = [partial(s) for s in starts]
    total = 0j
    for p in parts:
        total += p
    return complex(total)


def _tensor_estimate(alpha, fields, n: int, resolution: int, singular: str, workers: int) -> complex:
    grid = sphere_grid(n, resolution)
    dist = _pair_distances(grid.nodes)
    rho = rho_of(n)
    t1, t2, t3 = (nystrom_matrix(a - rho, grid, dist, singular) for a in alpha)
    vals = [np.asarray(f(grid.nodes), dtype=complex) for f in fields]
    return _trace_of_product(*vals, t1, t2, t3, workers)


# --------------------------------------------------------------------------
# Monte Carlo on S x S x S

# chain orders: each starts at one point and walks around the triangle
_CHAINS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
# index of the exponent attached to the pair (i, j): alpha_k with k the third index
_PAIR_EXPONENT = {(0, 1): 2, (1, 0): 2, (1, 2): 0, (2, 1): 0, (0, 2): 1, (2, 0): 1}


def _proposal_exponents(alpha, n: int) -> dict:
    rho = rho_of(n)
    return {pair: min(0.0, float(np.real(alpha[k])) - rho) for pair, k in _PAIR_EXPONENT.items()}


def _random_tangent(rng, x):
    v = rng.standard_normal(x.shape)
    v -= np.sum(v * x, axis=-1, keepdims=True) * x
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _sample_near_on_sphere(rng, x, gamma: float):
    """y with density |x - y|^gamma / kernel_row_integral(gamma) w.r.t. dsigma."""
    n = x.shape[-1]
    u = rng.beta(0.5 * gamma + 0.5 * (n - 1), 0.5 * (n - 1), size=x.shape[0])
    # near the integrability boundary the draw can underflow to 0; the
    # weights are evaluated at the realized point, so a floor only moves it
    u = np.maximum(u, _MIN_BETA_DRAW)
    t = 1.0 - 2.0 * u
    s = 2.0 * np.sqrt(u * (1.0 - u))
    return t[:, None] * x + s[:, None] * _random_tangent(rng, x)


def _sphere_pair_density(x, y, gamma: float, norm: float) -> np.ndarray:
    d = np.linalg.norm(x - y, axis=-1)
    return d**gamma / norm


def _mc_sphere_block(alpha, fields, n, gammas, norms, rng, size):
    area = sphere_area(n)
    per_chain = size // 3
    pts_all = []
    for order in _CHAINS:
        a, b, c = order
        pts = [None, None, None]
        pts[a] = random_sphere_points(rng, per_chain, n)
        pts[b] = _sample_near_on_sphere(rng, pts[a], gammas[(a, b)])
        pts[c] = _sample_near_on_sphere(rng, pts[b], gammas[(b, c)])
        pts_all.append(pts)
    x = [np.concatenate([p[i] for p in pts_all]) for i in range(3)]
    mix = np.zeros(x[0].shape[0])
    for a, b, c in _CHAINS:
        mix += (
            _sphere_pair_density(x[a], x[b], gammas[(a, b)], norms[(a, b)])
            * _sphere_pair_density(x[b], x[c], gammas[(b, c)], norms[(b, c)])
        )
    mix /= 3.0 * area
    rho = rho_of(n)
    d23 = np.linalg.norm(x[1] - x[2], axis=-1)
    d31 = np.linalg.norm(x[2] - x[0], axis=-1)
    d12 = np.linalg.norm(x[0] - x[1], axis=-1)
    kern = cpow(d23, alpha[0] - rho) * cpow(d31, alpha[1] - rho) * cpow(d12, alpha[2] - rho)
    vals = kern * fields[0](x[0]) * fields[1](x[1]) * fields[2](x[2])
    return vals / mix


# --------------------------------------------------------------------------
# Monte Carlo in the noncompact picture


def _sample_offsets(rng, size: int, dim: int, gamma: float):
    """Offsets d in R^dim with density q(d) = C |d|^gamma (1+|d|^2)^{-(a+b)}.

    r^2 / (1 + r^2) ~ Beta(a, b) with a = (gamma + dim)/2, b = dim/2.
    """
    a, b = 0.5 * (gamma + dim), 0.5 * dim
    v = np.maximum(rng.beta(a, b, size=size), _MIN_BETA_DRAW)
    r = np.sqrt(v / (1.0 - v))
    direction = rng.standard_normal((size, dim))
    direction /= np.linalg.norm(direction, axis=-1, keepdims=True)
    return r[:, None] * direction


def _offset_density(d, gamma: float) -> np.ndarray:
    dim = d.shape[-1]
    a, b = 0.5 * (gamma + dim), 0.5 * dim
    log_beta_fn = np.real(log_gamma(a) + log_gamma(b) - log_gamma(a + b))
    r2 = np.sum(d * d, axis=-1)
    return 2.0 * r2 ** (0.5 * gamma) * (1.0 + r2) ** (-(a + b)) / (np.exp(log_beta_fn) * sphere_area(dim))


def _mc_plane_block(alpha, f, n, gammas, radius, rng, size):
    dim = n - 1
    per_chain = size // 3
    pts_all = []
    for a, b, c in _CHAINS:
        pts = [None, None, None]
        # gamma = 0 offsets from the origin reproduce the chart image of dsigma
        pts[a] = _sample_offsets(rng, per_chain, dim, 0.0)
        pts[b] = pts[a] + _sample_offsets(rng, per_chain, dim, gammas[(a, b)])
        pts[c] = pts[b] + _sample_offsets(rng, per_chain, dim, gammas[(b, c)])
        pts_all.append(pts)
    y = [np.concatenate([p[i] for p in pts_all]) for i in range(3)]
    mix = np.zeros(y[0].shape[0])
    for a, b, c in _CHAINS:
        mix += (
            _offset_density(y[a], 0.0)
            * _offset_density(y[b] - y[a], gammas[(a, b)])
            * _offset_density(y[c] - y[b], gammas[(b, c)])
        )
    mix /= 3.0
    inside = np.ones(mix.size, dtype=bool)
    for yi in y:
        inside &= np.sum(yi * yi, axis=-1) < radius * radius
    vals = np.zeros(mix.size, dtype=complex)
    if np.any(inside):
        yy = [yi[inside] for yi in y]
        integrand = (
            kernel_J(alpha, *yy)
            * psi_weight(alpha, *yy)
            * f(*(stereographic(yi) for yi in yy))
        )
        vals[inside] = noncompact_constant(alpha, n) * integrand / mix[inside]
    return vals


def _run_blocks(block_fn, samples: int, seed: int, workers: int) -> np.ndarray:
    nblocks = max(2, -(-samples // MC_BLOCK))
    nblocks += nblocks % 2
    size = 3 * (-(-samples // (3 * nblocks)))
    seeds = np.random.SeedSequence(seed).spawn(nblocks)

    def run(ss):
        return block_fn(np.random.default_rng(ss), size)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, seeds))
    else:
        parts = [run(ss) for ss in seeds]
    return np.array([p.mean() for p in parts]), np.array([p.var() for p in parts]), size


def _mc_summary(means, variances, size) -> tuple[complex, float]:
    """Estimate and error indicator from equal-size blocks.

    The indicator is max(|full - first half|, 2 standard errors); the
    half-versus-full difference alone is too often small by chance.
    """
    full = complex(means.mean())
    half = complex(means[: means.size // 2].mean())
    stderr = float(np.sqrt(np.mean(variances) / (means.size * size)))
    return full, max(abs(full - half), 2.0 * stderr)


# --------------------------------------------------------------------------
# public entry points


def integrate_triple(alpha, f1, f2, f3, scheme: TripleScheme) -> TrilinearResult:
    """Integral of K_alpha(x1, x2, x3) f1(x1) f2(x2) f3(x3) over S x S x S.

    Raises
    ------
    NotIntegrable
        Outside the absolute-integrability domain of the kernel.
    """
    n = scheme.n
    alpha = _require_integrable(alpha, n)
    fields = (f1, f2, f3)
    if scheme.kind == "tensor_product":
        est = _tensor_estimate(alpha, fields, n, scheme.resolution, scheme.singular, scheme.workers)
        half = _tensor_estimate(alpha, fields, n, scheme.halved().resolution, scheme.singular, scheme.workers)
        return TrilinearResult(est, abs(est - half), scheme)
    if scheme.kind == "monte_carlo":
        gammas = _proposal_exponents(alpha, n)
        norms = {p: float(np.real(kernel_row_integral(g, n))) for p, g in gammas.items()}
        block = lambda rng, size: _mc_sphere_block(alpha, fields, n, gammas, norms, rng, size)  # noqa: E731
        est, err = _mc_summary(*_run_blocks(block, scheme.resolution, scheme.seed, scheme.workers))
        return TrilinearResult(est, err, scheme)
    if scheme.kind == "noncompact":
        product = lambda x1, x2, x3: f1(x1) * f2(x2) * f3(x3)  # noqa: E731
        return noncompact_K(alpha, product, scheme.truncation_radius, scheme.resolution,
                            n=n, seed=scheme.seed, workers=scheme.workers)
    if scheme.kind == "reduced_constant":
        probe = random_sphere_points(np.random.default_rng(12345), 8, n)
        values = [np.asarray(f(probe)) for f in fields]
        if not all(np.allclose(v, v[0], rtol=0, atol=1e-14) for v in values):
            raise ValueError("the reduced_constant scheme only accepts constant fields")
        scale = complex(np.prod([v[0] for v in values]))
        res = reduced_constant_K(alpha, n, scheme.resolution, with_indicator=True)
        return TrilinearResult(scale * res.value, abs(scale) * res.error_indicator, scheme)
    raise ValueError(f"unknown scheme kind {scheme.kind!r}")


def chart_tail_fraction(radius: float, n: int) -> float:
    """Fraction of the measure of S carried by the chart image of |y| > radius."""
    rho = rho_of(n)
    return float(betainc(rho, rho, 1.0 / (1.0 + radius * radius)))


def noncompact_K(alpha, f: Callable, truncation_radius: float = 50.0, resolution: int = 200_000,
                 n: int = 3, seed: int = 0, workers: int = 1) -> TrilinearResult:
    """Plane-picture Monte Carlo estimate of K_alpha(f) for f on S x S x S.

    Samples (y1, y2, y3) from a three-chain mixture in (R^{n-1})^3 and keeps
    the ones inside the ball of the given radius.

    Raises
    ------
    NotIntegrable, TruncationUnsound
    """
    n = check_dimension(n)
    alpha = _require_integrable(alpha, n)
    rho = rho_of(n)
    for i in range(3):
        for j in range(i + 1, 3):
            if not np.real(alpha[i] + alpha[j]) > -2 * rho:
                raise TruncationUnsound("integrand does not decay fast enough for truncation")
    if not truncation_radius > 0:
        raise ValueError("truncation_radius must be positive")
    gammas = _proposal_exponents(alpha, n)
    block = lambda rng, size: _mc_plane_block(alpha, f, n, gammas, truncation_radius, rng, size)  # noqa: E731
    est, err = _mc_summary(*_run_blocks(block, resolution, seed, workers))
    # crude truncation term: each of the three points misses this fraction of S
    err += 3.0 * chart_tail_fraction(truncation_radius, n) * abs(est)
    scheme = TripleScheme("noncompact", max(2, resolution), seed, truncation_radius, n, workers)
    return TrilinearResult(est, err, scheme)


# --------------------------------------------------------------------------
# reduced three-dimensional integral for constant fields


def _power_weights_unit(num: int, power) -> tuple[np.ndarray, np.ndarray]:
    """Product-integration rule on (0, 1) for the weight u^power, power complex.

    Nodes are Gauss-Legendre; the weights integrate u^power times any
    polynomial of degree < num exactly, using the closed-form moments
    int_0^1 u^s P_k(2u - 1) du = prod_{j<k} (s - j) / prod_{j<=k} (s + j + 1).
    """
    x, w = roots_legendre(num)
    u = 0.5 * (1.0 + x)
    s = complex(power)
    moments = np.empty(num, dtype=complex)
    moments[0] = 1.0 / (s + 1.0)
    for k in range(1, num):
        moments[k] = moments[k - 1] * (s - k + 1) / (s + k + 1)
    # Legendre values at the nodes, shape (num, num)
    leg = np.empty((num, num))
    leg[0] = 1.0
    if num > 1:
        leg[1] = x
    for k in range(1, num - 1):
        leg[k + 1] = ((2 * k + 1) * x * leg[k] - k * leg[k - 1]) / (k + 1)
    scale = (2 * np.arange(num) + 1) * moments
    weights = 0.5 * w * (scale @ leg)
    return u, weights


def _half_sphere_integral(theta, b_near, b_far, n, n_phi, n_psi, scale=0.0):
    """Integral of |y-P|^b_near |y-Q|^b_far over the half of S closer to P.

    Q sits at geodesic angle theta from P.  Polar coordinates (psi, phi)
    about P with phi measured from the direction of Q; the bisector of P and
    Q is psi = atan2(tan(theta/2), cos phi).

    * psi in (0, min(theta, psi_max)): product integration against
      u^{b_near + n - 2}, absorbing the singularity at P exactly.
    * psi beyond theta: logarithmic substitution, since |y-Q| varies on the
      scale of psi itself there.
    * phi: Gauss-Legendre after a sinh map centred on phi = pi/2, where
      psi_max swings from ~theta/2 to ~pi over a window of width ~theta.

    The result is multiplied by theta^{-scale}; every factor is combined in
    log space first, so theta far below the double range of theta^2 is fine.
    Returns one value per entry of theta.
    """
    theta = np.asarray(theta, dtype=float)[:, None, None]
    log_theta = np.log(theta)
    sin_t = np.sin(theta)

    x, wx = roots_legendre(n_phi)
    x = x[None, :, None]
    eps = np.tan(0.5 * np.minimum(theta, 3.0))
    kappa = np.arcsinh(0.5 * np.pi / eps)
    phi = 0.5 * np.pi + eps * np.sinh(kappa * x)
    wphi = wx[None, :, None] * eps * kappa * np.cosh(kappa * x) * np.sin(phi) ** (n - 3)

    psi_max = np.arctan2(np.tan(0.5 * theta), np.cos(phi))
    psi_split = np.minimum(psi_max, theta)

    def log_chord_far(psi):
        # y - Q in the frame (P, direction of Q, rest)
        dx = -2.0 * np.sin(0.5 * (psi + theta)) * np.sin(0.5 * (psi - theta))
        dy = np.sin(psi) * np.cos(phi) - sin_t
        dz = np.sin(psi) * np.sin(phi)
        return np.log(np.hypot(np.hypot(dx, dy), dz))

    # segment A: psi = psi_split u, weight u^{b_near + n - 2} taken exactly
    u, wu = _power_weights_unit(n_psi, b_near + n - 2)
    psi = psi_split * u[None, None, :]
    log_a = (
        b_near * np.log(np.sinc(0.5 * psi / np.pi))
        + (n - 2) * np.log(np.sinc(psi / np.pi))
        + (b_near + n - 1) * np.log(psi_split)
        + b_far * log_chord_far(psi)
        - scale * log_theta
    )
    total = np.sum(wu * np.exp(log_a), axis=2)

    # segment B: psi = psi_split (psi_max / psi_split)^x
    xl, wl = roots_legendre(n_psi)
    xl = 0.5 * (xl + 1.0)
    span = np.log(psi_max / psi_split)
    log_psi = np.log(psi_split) + span * xl
    psi = np.exp(log_psi)
    log_b = (
        b_near * np.log(2.0 * np.sin(0.5 * psi))
        + b_far * log_chord_far(psi)
        + (n - 2) * np.log(np.sin(psi))
        + log_psi
        - scale * log_theta
    )
    total = total + span[..., 0] * np.sum(0.5 * wl * np.exp(log_b), axis=2)

    return sphere_area(n - 2) * np.sum(wphi[..., 0] * total, axis=1)


def _reduced_estimate(alpha, n: int, resolution: int) -> complex:
    rho = rho_of(n)
    b1, b2, b3 = (complex(a) - rho for a in alpha)
    n_outer = resolution
    n_inner = max(16, resolution // 5)

    # theta -> 0 behaves like theta^{e} for the two exponents below; stretch
    # theta = pi v^q so that v^{q (e + 1) - 1} is smooth enough for Gauss-Legendre
    e_merge = float(np.real(b1 + b2 + b3)) + 2 * n - 3
    e_pair = float(np.real(b3)) + n - 2
    m = min(e_merge, e_pair) + 1.0
    v, wv = roots_legendre(n_outer)
    v = 0.5 * (v + 1.0)
    wv = 0.5 * wv
    # keep the smallest theta inside the normal double range
    q_max = np.log(1e-280 / np.pi) / np.log(v[0])
    q = float(np.clip(6.0 / m, 2.0, min(60.0, q_max)))
    log_theta = np.log(np.pi) + q * np.log(v)
    theta = np.exp(log_theta)

    # inner integral ~ theta^{b1 + b2 + n - 1} when the three points merge
    scale = min(0.0, float(np.real(b1 + b2)) + n - 1)
    inner = _half_sphere_integral(theta, b2, b1, n, n_inner, n_inner, scale)
    inner = inner + _half_sphere_integral(theta, b1, b2, n, n_inner, n_inner, scale)
    log_outer = (
        np.log(np.pi * q * wv)
        + (q - 1.0) * np.log(v)
        + (n - 2) * np.log(np.sin(theta))
        + b3 * np.log(2.0 * np.sin(0.5 * theta))
        + scale * log_theta
    )
    return complex(sphere_area(n) * sphere_area(n - 1) * np.sum(np.exp(log_outer) * inner))


def reduced_constant_K(alpha, n: int = 3, resolution: int = 200, with_indicator: bool = False):
    """K(alpha) on constant functions via a three-dimensional integral.

    By rotation invariance x1 = 1^+ (factor omega_{n-1}) and x2 ranges over
    a meridian at polar angle theta (factor omega_{n-2} sin^{n-2} theta).
    The remaining sphere of x3 is split along the bisector of x1 and x2 and
    each half is integrated in polar coordinates about its own singular point.

    Returns a complex value, or a :class:`TrilinearResult` whose indicator
    is the change from half resolution when ``with_indicator`` is set.
    """
    n = check_dimension(n)
    alpha = _require_integrable(alpha, n)
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    value = _reduced_estimate(alpha, n, resolution)
    if not with_indicator:
        return value
    half = _reduced_estimate(alpha, n, max(2, resolution // 2))
    return TrilinearResult(value, abs(value - half), TripleScheme("reduced_constant", resolution, n=n))

"""Conformal geometry of S^{n-1} under SO_0(1, n) and the invariant trilinear forms K_alpha.

Modules
-------
lorentz          group elements, conformal action, chart, Iwasawa, orbits
representations  principal series, kernels k, K, J, Psi and the parameter map
special          log-Gamma, closed-form value on constants, pole bookkeeping
quadrature       sphere grids and the singular triple integral
forms            the trilinear form and its residual checks
symmetric_space  H = MA, characters, Psi, Theta and the map P
cli              command-line harness
"""
from .errors import (
    CoincidentPoints,
    InvalidGroupElement,
    InvalidRotation,
    NotIntegrable,
    NumericalDegeneracy,
    OnPoleHyperplane,
    PoleOfChart,
    PoleOfGamma,
    SingularPoint,
    SphereTrilinearError,
    TruncationUnsound,
    UnsupportedDimension,
)
from .fields import constant, coordinate, monomial, polynomial, smooth_test_fields
from .forms import duality_residual, invariance_residual, normalized_trilinear, trilinear
from .lorentz import (
    GroupElement,
    act,
    boost,
    classify_orbit,
    conformal_factor,
    iwasawa,
    jacobian,
    lift,
    make_generator,
    n_translation,
    nbar_translation,
    one_minus,
    one_plus,
    random_group_element,
    rotation,
    stereographic,
    stereographic_inv,
)
from .quadrature import (
    SphereGrid,
    TripleScheme,
    TrilinearResult,
    integrate,
    integrate_triple,
    noncompact_K,
    reduced_constant_K,
    sphere_grid,
)
from .representations import (
    alpha_to_lambda,
    integrable,
    kernel_J,
    kernel_k,
    kernel_K,
    lambda_to_alpha,
    psi_weight,
    rep_apply,
    rep_apply_pair,
)
from .special import (
    closed_form_I,
    log_gamma,
    normalized_I,
    normalizer,
    pole_distance,
    surface_to_literal_ratio,
)
from .symmetric_space import HElement, gh_measure_weight, nu, p_map, psi0, psi_proj, theta

__version__ = "0.1.0"

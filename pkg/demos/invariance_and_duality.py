"""Invariance of the trilinear form under the group action, and the
duality pairing between pi_lambda and pi_{-lambda}, on smooth polynomial fields.

Both are exact identities for the integrals; on a grid the residuals shrink
as the grid is refined.

Run: python3 demos/invariance_and_duality.py
"""
from sphere_trilinear import random_group_element, smooth_test_fields
from sphere_trilinear.forms import duality_residual, invariance_residual
from sphere_trilinear.lorentz import boost
from sphere_trilinear.quadrature import TripleScheme, sphere_grid

fields = smooth_test_fields(3)
for seed in range(3):
    g = random_group_element(seed, 1.0, 3)
    row = [invariance_residual((0, 0, 0), *fields, g, TripleScheme(resolution=r)) for r in (8, 16, 24)]
    print(f"seed {seed}: invariance residual at 8/16/24 =", "  ".join(f"{v:.2e}" for v in row))

phi, psi = fields[:2]
for t in (1.0, 3.0):
    row = [duality_residual(0.37j, phi, psi, boost(t), sphere_grid(3, r)) for r in (8, 16, 32, 64)]
    print(f"boost({t}): duality residual at 8/16/32/64 =", "  ".join(f"{v:.1e}" for v in row))

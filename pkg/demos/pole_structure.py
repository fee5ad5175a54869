"""Simple poles of the closed form across lambda_1 + lambda_2 + lambda_3 = -rho,
and finiteness of the normalized form on the pole hyperplanes.

Run: python3 demos/pole_structure.py
"""
import numpy as np

from sphere_trilinear.representations import alpha_to_lambda
from sphere_trilinear.special import closed_form_I, normalized_I

d = np.ones(3) / np.sqrt(3)
for base in [(-0.2, -0.3, -0.5), (-1 / 3, -1 / 3, -1 / 3)]:
    prods = [e * closed_form_I(np.array(base) + e * d) for e in (1e-1, 1e-2, 1e-3, 1e-4)]
    ratios = [abs(prods[i + 1] / prods[i] - 1) for i in range(3)]
    print(f"base {np.round(base, 4)}: eps*I ->", ", ".join(f"{p.real:.6f}" for p in prods),
          "| ratio deviations", ", ".join(f"{r:.1e}" for r in ratios))

# the deviation is O(eps), so how close to 1 the first ratio is depends on the base point
for k in range(4):
    a = (-1.0 - 2 * k, 0.3, 0.1j)
    print(f"alpha_1 = -rho - {2 * k}: normalized I = {normalized_I(alpha_to_lambda(a)):.6g}")

"""The coherent-state kernel, its Gram matrices, and the identity quadrature.

The overlap of two phase-space points is a Gaussian in their separation
times a phase linear in the symplectic cross terms; every Gram matrix it
generates is positive semidefinite, free rotation leaves all dressed
overlaps invariant, and integrating the normalized landscape against the
weighted measure prod_k w_k dq_k dp_k / (2 pi) returns exactly 1.
"""

import numpy as np

from coherentlab import (
    CoherentPoint,
    ModeBasis,
    QuadratureGrid,
    SuperposedState,
    evolve_free,
    identity_check,
    overlap,
    v_value,
)

basis = ModeBasis(omegas=[1.0, 0.6], weights=[1.0, 1.8])
rng = np.random.default_rng(3)

a = CoherentPoint(q=[0.0, 1.0], p=[0.5, -0.5])
b = CoherentPoint(q=[2.0, 1.0], p=[0.5, 0.5])
val = overlap(a, b, basis)
print(f"<a|b> = {val:.6f}  |.| = {abs(val):.6f}")

pts = [CoherentPoint(q=rng.normal(0, 2, 2), p=rng.normal(0, 2, 2)) for _ in range(6)]
state = SuperposedState(rng.normal(size=6) + 1j * rng.normal(size=6), pts, basis)
eigs = np.linalg.eigvalsh(state.gram())
print(f"Gram eigenvalues of a random 6-point cloud: min = {eigs.min():.3e} (all >= 0)")

rotated = evolve_free(state, dt=1.37)
print(f"norm before/after free rotation: {state.norm_sq:.12f} / {rotated.norm_sq:.12f}")

peak = v_value(state, pts[0])
print(f"landscape value at the first component center: {peak:.4f}")

single = SuperposedState.single(a, basis)
for spacing in (1.0, 0.5, 0.25):
    val = identity_check(single, QuadratureGrid(spacing=spacing, margin=8.0))
    print(f"identity quadrature at spacing {spacing:4.2f}: {val:.12f}")

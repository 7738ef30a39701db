#!/usr/bin/env python3
"""Functional calculus: spectral functions act as multiplication operators.

In transform space every operator of the commutative algebra is just
pointwise multiplication.  Basis coefficients model the elliptic case; the
script applies the generator, spectral projections, a reflection, and reads
off operator norms and compactness diagnostics from the spectral data.
"""

import numpy as np

from toeplitz_spectra import (
    CalculusVector,
    Geometry,
    apply_calculus,
    builtin,
    compactness_estimate,
    gamma_elliptic,
    sup_norm,
)

k = np.arange(0, 16)
vec = CalculusVector(Geometry.ELLIPTIC, k, np.exp(-0.5 * k).astype(complex))
print("coefficient vector f_k = e^{-k/2}, norm =", round(vec.norm(), 6))

print("\ngenerator N acts as multiplication by k:")
out = apply_calculus(lambda kk: kk, vec)
print("  (N f)_k =", np.round(out.coefficients.real, 4))

print("\nspectral projection onto {k < 4} is idempotent:")
proj = (k < 4).astype(float)
once = apply_calculus(proj, vec)
twice = apply_calculus(proj, once)
print("  max |P f - P^2 f| =", float(np.max(np.abs(once.coefficients - twice.coefficients))))

print("\nreflection phi(k) = (-1)^k is a bounded involution that is *not* a")
print("Toeplitz operator with any reasonable radial symbol:")
refl = (-1.0) ** k
back = apply_calculus(refl, apply_calculus(refl, vec))
print("  max |R^2 f - f| =", float(np.max(np.abs(back.coefficients - vec.coefficients))))

print("\noperator norms are sup-norms of the spectral function (grid lower bounds):")
for text, sym in [
    ("indicator of (0, 1/2)", builtin("indicator", Geometry.ELLIPTIC, lo=0, hi=0.5)),
    ("oscillatory radial", builtin("osc_radial", Geometry.ELLIPTIC, beta=0.25, alpha=0.5)),
]:
    sf = gamma_elliptic(sym, lam=0.0, k_set=np.arange(0, 201, 4), tol=1e-6)
    rep = compactness_estimate(sf)
    print(f"  {text:25s} ||T_a|| >= {sup_norm(sf):.6f}   compactness: {rep.verdict}")

#!/usr/bin/env python3
"""Spectral functions in the three geometries.

A Toeplitz operator whose symbol is invariant under one of the three model
group actions is unitarily equivalent to multiplication by its spectral
function.  This script evaluates that function for a handful of symbols --
smooth, discontinuous, unbounded-oscillatory and distributional -- and prints
small tables.
"""

import numpy as np

from toeplitz_spectra import (
    Geometry,
    builtin,
    gamma_elliptic,
    gamma_hyperbolic,
    gamma_parabolic,
    sum_symbols,
)

np.set_printoptions(precision=6, suppress=True)

print("=== elliptic (radial symbols), spectrum k = 0, 1, 2, ... ===")
ks = np.arange(0, 12)
for text, sym in [
    ("constant 1", builtin("constant", Geometry.ELLIPTIC, value=1.0)),
    ("indicator of rho in (0, 1/2)", builtin("indicator", Geometry.ELLIPTIC, lo=0, hi=0.5)),
    ("point mass at rho = 1/2", builtin("delta", Geometry.ELLIPTIC, loc=0.5)),
    ("oscillatory (1-rho^2)^(-1/4) sin (1-rho^2)^(-1/2)",
     builtin("osc_radial", Geometry.ELLIPTIC, beta=0.25, alpha=0.5)),
]:
    sf = gamma_elliptic(sym, lam=0.0, k_set=ks, tol=1e-8)
    print(f"{text:55s} gamma(k) = {sf.values.real}")

print()
print("=== parabolic (vertical symbols), spectrum eta > 0 ===")
eta = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
for text, sym in [
    ("constant 1", builtin("constant", Geometry.PARABOLIC, value=1.0)),
    ("indicator of y in (0, 1)", builtin("indicator", Geometry.PARABOLIC, lo=0, hi=1)),
    ("point mass at y = 1 (gives 2 eta e^{-2 eta})", builtin("delta", Geometry.PARABOLIC, loc=1.0)),
    ("mixed: indicator + derivative of point mass",
     sum_symbols([builtin("indicator", Geometry.PARABOLIC, lo=0, hi=1),
                  builtin("delta_derivative", Geometry.PARABOLIC, order=1, loc=1.0)])),
]:
    sf = gamma_parabolic(sym, lam=0.0, eta_grid=eta)
    print(f"{text:55s} gamma(eta) = {sf.values.real}")

print()
print("=== hyperbolic (angular symbols), spectrum eta in R ===")
eta = np.array([-4.0, -1.0, 0.0, 1.0, 4.0])
for text, sym in [
    ("constant 1", builtin("constant", Geometry.HYPERBOLIC, value=1.0)),
    ("indicator of theta in (0, pi/2)",
     builtin("indicator", Geometry.HYPERBOLIC, lo=0, hi=np.pi / 2)),
    ("point mass at theta = pi/2", builtin("delta", Geometry.HYPERBOLIC, loc=np.pi / 2)),
]:
    sf = gamma_hyperbolic(sym, lam=1.0, eta_grid=eta)
    print(f"{text:55s} gamma(eta) = {sf.values.real}")

print()
print("The indicator of (0, pi/2) at lam = 0 has the closed form 1/(1+e^(-pi eta)):")
sym = builtin("indicator", Geometry.HYPERBOLIC, lo=0, hi=np.pi / 2)
sf = gamma_hyperbolic(sym, lam=0.0, eta_grid=eta)
closed = 1.0 / (1.0 + np.exp(-np.pi * eta))
print("  computed:   ", sf.values.real)
print("  closed form:", closed)

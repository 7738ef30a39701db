"""The acceptance battery: every release-gating criterion as a callable.

Each criterion returns (passed, detail).  ``run_all`` executes them in order
and prints one line per criterion; the test suite and the ``selftest``
command both run through this module so there is exactly one definition of
"done".
"""

from __future__ import annotations

import math
import os
import subprocess
import sys
import tempfile

import numpy as np

from .classify import OscillationMetric, builtin_calibration, oscillation_modulus
from .oracle import (
    FormComparison,
    WavePacket,
    hyperbolic_form_direct,
    hyperbolic_form_spectral,
    normalization_probe,
    parabolic_form_direct,
    parabolic_form_spectral,
    resolution_apply_check,
    toeplitz_matrix_disk,
    unitarity_check_parabolic,
)
from .quadrature import adaptive_integrate
from .specfun import ln_vartheta_sq
from .spectra import (
    compactness_estimate,
    gamma_elliptic,
    gamma_hyperbolic,
    gamma_parabolic,
)
from .symbols import Geometry, SymbolSpec, builtin

LAMBDAS = (-0.5, 0.0, 1.0, 2.5)


def _rho_squared():
    return SymbolSpec(Geometry.ELLIPTIC, function_part=lambda r: np.asarray(r) ** 2,
                      label="rho^2", source="")


def check_normalization():
    """gamma_1 = 1 in all three geometries, |error| <= 1e-10 on default grids."""
    worst = 0.0
    for lam in LAMBDAS:
        e = gamma_elliptic(builtin("constant", Geometry.ELLIPTIC, value=1.0), lam)
        p = gamma_parabolic(builtin("constant", Geometry.PARABOLIC, value=1.0), lam)
        h = gamma_hyperbolic(builtin("constant", Geometry.HYPERBOLIC, value=1.0), lam, tol=1e-11)
        for sf in (e, p, h):
            worst = max(worst, float(np.max(np.abs(sf.values - 1.0))))
    return worst <= 1e-10, f"max |gamma_1 - 1| = {worst:.3e} (tol 1e-10)"


def check_elliptic_closed_form():
    """a = rho^2 gives gamma(k) = (k+1)/(k+lam+2) to 1e-9 relative, k <= 200."""
    worst = 0.0
    sym = _rho_squared()
    for lam in LAMBDAS:
        ks = np.arange(0, 201)
        sf = gamma_elliptic(sym, lam, ks)
        expect = (ks + 1.0) / (ks + lam + 2.0)
        worst = max(worst, float(np.max(np.abs(sf.values.real - expect) / expect)))
    return worst <= 1e-9, f"max rel err = {worst:.3e} (tol 1e-9)"


def check_vartheta_identity():
    """Gamma-form and integral form of the angular weight agree to 1e-8 on
    |eta| <= 20; the compensated weight stays bounded on |eta| <= 50."""
    worst = 0.0
    for lam in LAMBDAS:
        for eta in np.linspace(-20.0, 20.0, 41):
            shift = max(0.0, -2.0 * math.pi * eta)
            res = adaptive_integrate(
                lambda th: np.exp(-2.0 * eta * th + lam * np.log(np.sin(th)) - shift),
                0.0, math.pi / 2.0, tol=1e-14, rtol=5e-13)
            res2 = adaptive_integrate(
                lambda ps: np.exp(-2.0 * eta * (math.pi - ps) + lam * np.log(np.sin(ps)) - shift),
                0.0, math.pi / 2.0, tol=1e-14, rtol=5e-13)
            integral = (res.value + res2.value) * math.exp(shift)
            ln_sq_quad = -math.log(2.0**lam * (lam + 1.0) * integral)
            rel = abs(math.expm1(ln_sq_quad - ln_vartheta_sq(lam, eta)))
            worst = max(worst, rel)
    if worst > 1e-8:
        return False, f"Gamma-form vs quadrature worst rel = {worst:.3e} (tol 1e-8)"
    eps = 0.1
    qmax = 0.0
    for lam in LAMBDAS:
        eta = np.linspace(-50.0, 50.0, 201)
        q = np.exp(ln_vartheta_sq(lam, eta) - math.pi * eta + (math.pi - eps) * np.abs(eta))
        if not np.all(np.isfinite(q)):
            return False, "compensated weight not finite on |eta| <= 50"
        qmax = max(qmax, float(np.max(q)))
    return qmax < 1e4, f"identity worst rel = {worst:.3e}; compensated sup = {qmax:.3e} (< 1e4)"


def check_diagonalization():
    """Radial battery at N = 24: off-diagonals < 1e-8, diagonal equals the
    spectral function to 1e-6 relative; the non-invariant detector fires."""
    battery = [
        builtin("constant", Geometry.ELLIPTIC, value=1.0),
        builtin("indicator", Geometry.ELLIPTIC, lo=0.0, hi=0.5),
        _rho_squared(),
        builtin("delta", Geometry.ELLIPTIC, loc=0.5),
    ]
    worst_off, worst_diag = 0.0, 0.0
    for lam in (0.0, 1.0, 2.5):
        for sym in battery:
            tm = toeplitz_matrix_disk(sym, lam, 24)
            sf = gamma_elliptic(sym, lam, np.arange(24))
            worst_off = max(worst_off, tm.offdiag_max())
            denom = np.maximum(np.abs(sf.values), 1e-300)
            worst_diag = max(worst_diag, float(np.max(np.abs(np.diag(tm.entries) - sf.values) / denom)))
    detector = toeplitz_matrix_disk(lambda z: np.real(z), 0.0, 8).offdiag_max()
    ok = worst_off < 1e-8 and worst_diag <= 1e-6 and detector > 0.1
    return ok, (f"offdiag = {worst_off:.3e} (< 1e-8), diag rel = {worst_diag:.3e} (<= 1e-6), "
                f"non-radial detector = {detector:.3f} (> 0.1)")


def check_parabolic_forms():
    """Direct vs spectral coherent forms, plus the two closed-form anchors."""
    worst = 0.0
    for lam in (0.0, 1.0):
        battery = [
            builtin("constant", Geometry.PARABOLIC, value=1.0),
            builtin("indicator", Geometry.PARABOLIC, lo=0.0, hi=1.0),
            builtin("delta", Geometry.PARABOLIC, loc=1.0),
        ]
        for sym in battery:
            for mu, nu in ((1.0, 1.0), (1.0, 2.0), (2.0, 2.0)):
                direct, _ = parabolic_form_direct(sym, lam, mu, nu, tol=1e-8)
                sf = gamma_parabolic(sym, lam, [1.0])
                spectral = parabolic_form_spectral(sf, lam, mu, nu)
                worst = max(worst, abs(direct - spectral) / abs(spectral))
    if worst > 1e-5:
        return False, f"direct vs spectral worst rel = {worst:.3e} (tol 1e-5)"
    anchors = []
    for lam in (0.0, 1.0):
        fc = unitarity_check_parabolic(lam, 1.0, 2.0, tol=1e-9)
        anchors.append(fc.rel_err)
    delta_direct, _ = parabolic_form_direct(builtin("delta", Geometry.PARABOLIC, loc=1.0),
                                            0.0, 1.0, 1.0, tol=1e-9)
    delta_err = abs(delta_direct - 0.0625)
    ok = max(anchors) <= 1e-6 and delta_err <= 1e-6
    return ok, (f"battery rel = {worst:.3e} (<= 1e-5); a=1 closed form rel = {max(anchors):.3e}; "
                f"|delta form - 0.0625| = {delta_err:.3e} (<= 1e-6)")


def check_normalization_probe():
    """Only the 1/Gamma(lam+1) prefactor reconciles the transform-space form
    with the direct form.  (At lam = 1 both candidates coincide because
    Gamma(2) = 1, so exclusivity is enforced at lam = 2.5.)"""
    details = []
    ok = True
    for lam in (1.0, 2.5):
        probe = normalization_probe(lam)
        ok = ok and probe.winner == "1/Gamma(lam+1)"
        details.append(f"lam={lam}: winner={probe.winner}")
    probe = normalization_probe(2.5)
    sqrt_err = probe.comparisons["1/sqrt(Gamma(lam+1))"].rel_err
    inv_err = probe.comparisons["1/Gamma(lam+1)"].rel_err
    ok = ok and sqrt_err > 1e-3 and inv_err < 1e-6
    details.append(f"lam=2.5 exclusivity: 1/Gamma rel={inv_err:.1e}, 1/sqrt rel={sqrt_err:.1e}")
    return ok, "; ".join(details)


def check_hyperbolic_forms():
    """Direct vs spectral packet forms, plus the narrow-packet localization."""
    worst = 0.0
    for lam in (0.0, 1.0):
        battery = [
            builtin("constant", Geometry.HYPERBOLIC, value=1.0),
            builtin("indicator", Geometry.HYPERBOLIC, lo=0.0, hi=math.pi / 2.0),
            builtin("delta", Geometry.HYPERBOLIC, loc=math.pi / 2.0),
        ]
        for sym in battery:
            for packet in (WavePacket(0.0, 1.0), WavePacket(2.0, 0.5)):
                direct, _ = hyperbolic_form_direct(sym, lam, packet, tol=1e-7)
                sf = gamma_hyperbolic(sym, lam, [0.0])
                spectral = hyperbolic_form_spectral(sf, packet)
                worst = max(worst, abs(direct - spectral) / abs(spectral))
    if worst > 1e-4:
        return False, f"direct vs spectral worst rel = {worst:.3e} (tol 1e-4)"
    chi = builtin("indicator", Geometry.HYPERBOLIC, lo=0.0, hi=math.pi / 2.0)
    packet = WavePacket(2.0, 0.05)
    direct, _ = hyperbolic_form_direct(chi, 0.0, packet, tol=1e-6)
    gamma_at = gamma_hyperbolic(chi, 0.0, [2.0]).values[0].real
    loc_err = abs(direct - gamma_at)
    ok = loc_err <= 1e-2
    return ok, f"battery rel = {worst:.3e} (<= 1e-4); localization |form - gamma(2)| = {loc_err:.3e} (<= 1e-2)"


def check_kernel():
    """Truncated resolution of identity applied to a coherent state matches
    the incomplete-gamma closed form; the cutoff limits behave."""
    worst = 0.0
    for eta_cut in (0.5, 2.0, 10.0):
        for z in (1j, 1 + 1j):
            fc = resolution_apply_check(0.0, eta_cut, 1.0, z, tol=1e-7)
            worst = max(worst, fc.rel_err)
    if worst > 1e-5:
        return False, f"worst rel = {worst:.3e} (tol 1e-5)"
    small = resolution_apply_check(0.0, 1e-4, 1.0, 1j, tol=1e-8)
    fmu = math.sqrt(math.gamma(2.0)) * 0.25
    big = resolution_apply_check(0.0, 100.0, 1.0, 1j, tol=1e-7)
    lim0 = abs(small.direct)
    liminf = abs(big.direct - fmu) / abs(fmu)
    ok = lim0 <= 1e-7 and liminf <= 1e-6
    return ok, (f"battery rel = {worst:.3e} (<= 1e-5); |E(0+)f| = {lim0:.1e} (~0); "
                f"E(inf)f vs f rel = {liminf:.1e} (<= 1e-6)")


def check_compactness():
    """Oscillatory-symbol decay: the radial eigenvalue sequence drops below a
    fifth of its head; the angular spectral function flattens at large eta."""
    osc_r = builtin("osc_radial", Geometry.ELLIPTIC, beta=0.25, alpha=0.5)
    ks = np.concatenate([np.arange(0, 11), np.arange(150, 201)])
    sf = gamma_elliptic(osc_r, 0.0, ks, tol=1e-6)
    head = float(np.max(np.abs(sf.values[:11])))
    tail = float(np.max(np.abs(sf.values[11:])))
    if not tail < 0.2 * head:
        return False, f"radial tail/head = {tail / head:.3f} (need < 0.2)"
    osc_a = builtin("osc_angular", Geometry.HYPERBOLIC, beta=0.5, alpha=1.0)
    sf = gamma_hyperbolic(osc_a, 0.0, [5e3, 1e4], tol=1e-3)
    drift = float(np.abs(sf.values[1] - sf.values[0]))
    ok = drift <= 1e-2
    return ok, (f"radial tail/head = {tail / head:.3f} (< 0.2); "
                f"|gamma(1e4) - gamma(5e3)| = {drift:.3e} (<= 1e-2)")


def check_classification():
    """The four calibration classifications reproduce with default thresholds."""
    results = {}
    results["reflection"] = oscillation_modulus(
        builtin_calibration("reflection"), OscillationMetric.ADJACENT_RATIO).verdict
    results["hmv"] = oscillation_modulus(
        builtin_calibration("hmv"), OscillationMetric.LOG).verdict
    dl = builtin("delta", Geometry.PARABOLIC, loc=1.0)
    sf = gamma_parabolic(dl, 0.0, np.geomspace(1e-3, 1e4, 513))
    results["parabolic delta"] = oscillation_modulus(sf, OscillationMetric.LOG).verdict
    results["hyp delta"] = oscillation_modulus(
        builtin_calibration("hyp_delta"), OscillationMetric.ARCSINH).verdict
    expected = {
        "reflection": "violates",
        "hmv": "violates",
        "parabolic delta": "consistent-with-membership",
        "hyp delta": "consistent-with-membership",
    }
    ok = results == expected
    return ok, "; ".join(f"{k}: {v}" for k, v in results.items())


def check_determinism():
    """Two gamma runs with identical configuration produce identical bytes."""
    import contextlib
    import io

    from .cli import main as cli_main

    with tempfile.TemporaryDirectory() as tmp:
        paths = [os.path.join(tmp, f"run{i}.csv") for i in (1, 2)]
        blobs = []
        for path in paths:
            with contextlib.redirect_stdout(io.StringIO()):
                code = cli_main([
                    "gamma", "--geometry", "parabolic", "--lambda", "0.5",
                    "--symbol", "sum(indicator:0,1; delta:loc=1)",
                    "--grid", "log:0.1:10:40", "--out", path,
                ])
            if code != 0:
                return False, f"gamma run exited with {code}"
            with open(path, "rb") as fh:
                blobs.append(fh.read())
    ok = blobs[0] == blobs[1] and len(blobs[0]) > 0
    return ok, f"two runs, {len(blobs[0])} bytes each, identical = {ok}"


CRITERIA = (
    ("normalization gamma_1 = 1", check_normalization),
    ("elliptic closed form rho^2", check_elliptic_closed_form),
    ("angular weight identity + asymptotics", check_vartheta_identity),
    ("diagonalization oracle", check_diagonalization),
    ("parabolic form equality", check_parabolic_forms),
    ("parabolic normalization probe", check_normalization_probe),
    ("hyperbolic form equality", check_hyperbolic_forms),
    ("resolution-of-identity kernel", check_kernel),
    ("compactness / decay", check_compactness),
    ("classification calibration", check_classification),
    ("output determinism", check_determinism),
)


def run_all(verbose=False):
    """Run every acceptance criterion; returns [(name, passed, detail)]."""
    results = []
    for name, fn in CRITERIA:
        try:
            passed, detail = fn()
        except Exception as exc:  # a criterion crashing is a failure, not an abort
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, passed, detail))
        if verbose:
            status = "PASS" if passed else "FAIL"
            print(f"[{status}] {name}: {detail}")
    if verbose:
        n_ok = sum(1 for _, ok, _ in results if ok)
        print(f"{n_ok}/{len(results)} acceptance criteria passed")
    return results

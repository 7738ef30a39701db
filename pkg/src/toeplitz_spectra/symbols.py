"""Symbols of the three invariant geometries, including distributional parts.

A symbol is a function of the invariant coordinate of its geometry --
rho = |z| on the disk, y = Im z or theta = arg z on the half-plane -- plus a
finite sum of Dirac-delta derivatives at interior points.  Symbols carry the
structural hints (jump locations, singular endpoints, oscillatory-power
parameters) that the spectral-function integrators need to choose a stable
integration strategy.

The module also owns the one-line text syntax used on the command line, e.g.
``constant:1``, ``indicator:0,0.5``, ``delta:loc=1``, and
``sum(indicator:0,0.5; delta:loc=0.25,coef=2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "Geometry",
    "DeltaTerm",
    "SymbolSpec",
    "builtin",
    "sum_symbols",
    "eval_function_part",
    "parse_symbol",
    "format_symbol",
    "BUILTIN_NAMES",
]

MAX_DELTA_ORDER = 4

BUILTIN_NAMES = (
    "constant",
    "indicator",
    "power",
    "osc_radial",
    "osc_angular",
    "delta",
    "delta_derivative",
)


class Geometry(enum.Enum):
    """Invariance class of a symbol and the domain of its coordinate."""

    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"

    @property
    def domain(self):
        if self is Geometry.ELLIPTIC:
            return (0.0, 1.0)
        if self is Geometry.PARABOLIC:
            return (0.0, math.inf)
        return (0.0, math.pi)

    def contains_interior(self, x) -> bool:
        lo, hi = self.domain
        return lo < x < hi

    @classmethod
    def parse(cls, text):
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise DomainError(f"unknown geometry {text!r}; expected elliptic, parabolic or hyperbolic")


@dataclass(frozen=True)
class DeltaTerm:
    """c * delta^(order)(x - location); acts on test functions by
    (delta^(m)(.-x0), psi) = (-1)^m psi^(m)(x0)."""

    order: int
    location: float
    coefficient: float = 1.0

    def __post_init__(self):
        if self.order != int(self.order) or not 0 <= int(self.order) <= MAX_DELTA_ORDER:
            raise DomainError(f"delta derivative order must be an integer in [0, {MAX_DELTA_ORDER}], got {self.order}")
        object.__setattr__(self, "order", int(self.order))
        if not math.isfinite(self.location):
            raise DomainError("delta location must be finite")
        if not math.isfinite(self.coefficient):
            raise DomainError("delta coefficient must be finite")


@dataclass(frozen=True)
class SymbolSpec:
    """A symbol: optional function part plus a finite list of delta terms.

    ``breakpoints`` are interior jump locations of the function part,
    ``singular_left``/``singular_right`` declare integrable endpoint
    singularities, and ``osc_power`` carries (beta, alpha) for the
    oscillatory power families so integrators can switch to the phase
    substitution.  ``components`` holds the summands of a formal sum; the
    spectral functions evaluate such symbols term by term (they are linear).
    """

    geometry: Geometry
    function_part: object = None  # vectorized callable ndarray -> ndarray, or None
    delta_terms: tuple = ()
    label: str = ""
    breakpoints: tuple = ()
    singular_left: bool = False
    singular_right: bool = False
    osc_power: tuple | None = None
    components: tuple = ()
    source: str = ""

    def __post_init__(self):
        lo, hi = self.geometry.domain
        all_terms = self.all_delta_terms()
        locations = [t.location for t in all_terms]
        for t in all_terms:
            if not (lo < t.location < hi):
                raise DomainError(
                    f"delta location {t.location} not interior to {self.geometry.value} domain ({lo}, {hi})"
                )
        if len(set(locations)) != len(locations):
            raise DomainError("delta term locations must be pairwise distinct")
        for p in self.breakpoints:
            if not (lo <= p <= hi):
                raise DomainError(f"breakpoint {p} outside domain [{lo}, {hi}]")
        if self.components:
            for c in self.components:
                if c.geometry is not self.geometry:
                    raise DomainError("all summands of a symbol must share its geometry")

    def all_delta_terms(self):
        if self.components:
            out = []
            for c in self.components:
                out.extend(c.all_delta_terms())
            return tuple(out)
        return tuple(self.delta_terms)

    @property
    def has_function_part(self) -> bool:
        if self.components:
            return any(c.has_function_part for c in self.components)
        return self.function_part is not None


def eval_function_part(spec: SymbolSpec, x: float) -> float:
    """Evaluate the function part at an interior point; delta terms never contribute."""
    if not spec.geometry.contains_interior(x):
        lo, hi = spec.geometry.domain
        raise DomainError(f"{x} is not interior to the {spec.geometry.value} domain ({lo}, {hi})")
    if spec.components:
        val = sum(
            float(np.asarray(c.function_part(np.asarray(x, dtype=float))))
            for c in spec.components
            if c.function_part is not None
        )
    elif spec.function_part is None:
        val = 0.0
    else:
        val = float(np.asarray(spec.function_part(np.asarray(x, dtype=float))))
    if not math.isfinite(val):
        raise DomainError(f"symbol {spec.label or spec.source or '<anonymous>'} evaluated non-finite at {x}")
    return val


def _require(params, name, keys, optional=()):
    unknown = set(params) - set(keys) - set(optional)
    if unknown:
        raise DomainError(f"{name}: unknown parameter(s) {sorted(unknown)}")
    missing = set(keys) - set(params)
    if missing:
        raise DomainError(f"{name}: missing parameter(s) {sorted(missing)}")


def builtin(name: str, geometry, **params) -> SymbolSpec:
    """Construct one of the built-in symbols by name.

    Recognized names: constant, indicator, power, osc_radial, osc_angular,
    delta, delta_derivative.  ``power`` is the oscillatory power family of
    the given geometry (radial for elliptic, angular for hyperbolic).
    """
    geometry = geometry if isinstance(geometry, Geometry) else Geometry.parse(geometry)
    lo, hi = geometry.domain

    if name == "constant":
        _require(params, name, ("value",))
        v = float(params["value"])
        return SymbolSpec(
            geometry,
            function_part=lambda x, v=v: np.full(np.shape(x), v, dtype=float),
            label=f"constant {v}",
            source=f"constant:{_fmt(v)}",
        )

    if name == "indicator":
        _require(params, name, ("lo", "hi"))
        a, b = float(params["lo"]), float(params["hi"])
        if not (lo <= a < b <= hi):
            raise DomainError(f"indicator bounds must satisfy {lo} <= lo < hi <= {hi}, got ({a}, {b})")
        return SymbolSpec(
            geometry,
            function_part=lambda x, a=a, b=b: ((np.asarray(x) > a) & (np.asarray(x) < b)).astype(float),
            label=f"indicator ({a}, {b})",
            breakpoints=tuple(p for p in (a, b) if lo < p < hi),
            source=f"indicator:{_fmt(a)},{_fmt(b)}",
        )

    if name == "power":
        if geometry is Geometry.ELLIPTIC:
            return builtin("osc_radial", geometry, **params)
        if geometry is Geometry.HYPERBOLIC:
            return builtin("osc_angular", geometry, **params)
        raise DomainError("power: no oscillatory power family for the parabolic geometry")

    if name == "osc_radial":
        if geometry is not Geometry.ELLIPTIC:
            raise DomainError("osc_radial is an elliptic (radial) symbol")
        _require(params, name, ("beta", "alpha"))
        beta, alpha = float(params["beta"]), float(params["alpha"])
        if not (0.0 < beta < alpha):
            raise DomainError(f"osc_radial requires 0 < beta < alpha, got beta={beta}, alpha={alpha}")

        def f(rho, beta=beta, alpha=alpha):
            u = 1.0 - np.asarray(rho, dtype=float) ** 2
            return u ** (-beta) * np.sin(u ** (-alpha))

        return SymbolSpec(
            geometry,
            function_part=f,
            label=f"(1-rho^2)^(-{beta}) sin (1-rho^2)^(-{alpha})",
            singular_right=True,
            osc_power=(beta, alpha),
            source=f"osc_radial:beta={_fmt(beta)},alpha={_fmt(alpha)}",
        )

    if name == "osc_angular":
        if geometry is not Geometry.HYPERBOLIC:
            raise DomainError("osc_angular is a hyperbolic (angular) symbol")
        _require(params, name, ("beta", "alpha"))
        beta, alpha = float(params["beta"]), float(params["alpha"])
        if not (0.0 < beta < 1.0 and alpha > 0.0):
            raise DomainError(f"osc_angular requires 0 < beta < 1 and alpha > 0, got beta={beta}, alpha={alpha}")

        def f(theta, beta=beta, alpha=alpha):
            th = np.asarray(theta, dtype=float)
            return th ** (-beta) * np.sin(th ** (-alpha))

        return SymbolSpec(
            geometry,
            function_part=f,
            label=f"theta^(-{beta}) sin theta^(-{alpha})",
            singular_left=True,
            osc_power=(beta, alpha),
            source=f"osc_angular:beta={_fmt(beta)},alpha={_fmt(alpha)}",
        )

    if name == "delta":
        _require(params, name, ("loc",), optional=("coef",))
        loc = float(params["loc"])
        coef = float(params.get("coef", 1.0))
        src = f"delta:loc={_fmt(loc)}" + (f",coef={_fmt(coef)}" if coef != 1.0 else "")
        return SymbolSpec(
            geometry,
            delta_terms=(DeltaTerm(0, loc, coef),),
            label=f"{coef} delta(x - {loc})",
            source=src,
        )

    if name == "delta_derivative":
        _require(params, name, ("order", "loc"), optional=("coef",))
        term = DeltaTerm(params["order"], float(params["loc"]), float(params.get("coef", 1.0)))
        return SymbolSpec(
            geometry,
            delta_terms=(term,),
            label=f"{term.coefficient} delta^({term.order})(x - {term.location})",
            source=_delta_source(term),
        )

    raise DomainError(f"unknown builtin symbol {name!r}; known: {', '.join(BUILTIN_NAMES)}")


def sum_symbols(parts) -> SymbolSpec:
    """Formal sum of symbols of one geometry.

    Delta terms at the same location are merged when their derivative orders
    match; otherwise the pairwise-distinct-location rule applies.
    """
    parts = [p for p in parts]
    if not parts:
        raise DomainError("sum of symbols needs at least one summand")
    geometry = parts[0].geometry
    flat = []
    for p in parts:
        flat.extend(p.components if p.components else (p,))
    # merge identical (order, location) delta pairs
    merged = {}
    plain = []
    for p in flat:
        if p.function_part is None and len(p.delta_terms) == 1:
            t = p.delta_terms[0]
            key = (t.order, t.location)
            if key in merged:
                old = merged[key]
                merged[key] = DeltaTerm(t.order, t.location, old.coefficient + t.coefficient)
                continue
            merged[key] = t
            plain.append(("delta", key))
        else:
            plain.append(("part", p))
    comps = []
    for kind, payload in plain:
        if kind == "delta":
            t = merged[payload]
            comps.append(SymbolSpec(geometry, delta_terms=(t,), label=f"{t.coefficient} delta^({t.order})(x - {t.location})",
                                    source=_delta_source(t)))
        else:
            comps.append(payload)
    label = " + ".join(c.label or c.source for c in comps)
    source = "sum(" + "; ".join(c.source for c in comps) + ")"
    return SymbolSpec(geometry, components=tuple(comps), label=label, source=source)


def _delta_source(t: DeltaTerm) -> str:
    if t.order == 0:
        return f"delta:loc={_fmt(t.location)}" + (f",coef={_fmt(t.coefficient)}" if t.coefficient != 1.0 else "")
    return f"delta_derivative:order={t.order},loc={_fmt(t.location)}" + (
        f",coef={_fmt(t.coefficient)}" if t.coefficient != 1.0 else ""
    )


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# text syntax


def format_symbol(spec: SymbolSpec) -> str:
    """Canonical text form; inverse of :func:`parse_symbol` for builtins."""
    if not spec.source:
        raise DomainError("symbol has no text form (constructed from a raw callable)")
    return spec.source


def parse_symbol(text: str, geometry) -> SymbolSpec:
    """Parse the command-line symbol syntax.

    Grammar::

        symbol   := term | "sum(" term (";" term)* ")"
        term     := name [":" arg ("," arg)*]
        arg      := value | key "=" value

    Positional arguments are accepted where unambiguous: ``constant:1`` and
    ``indicator:0,0.5``.
    """
    geometry = geometry if isinstance(geometry, Geometry) else Geometry.parse(geometry)
    text = text.strip()
    if text.startswith("sum(") and text.endswith(")"):
        inner = text[4:-1]
        items = [s.strip() for s in inner.split(";") if s.strip()]
        if not items:
            raise DomainError("empty sum(...)")
        return sum_symbols([_parse_term(s, geometry) for s in items])
    return _parse_term(text, geometry)


_POSITIONAL = {"constant": ("value",), "indicator": ("lo", "hi")}


def _parse_term(text: str, geometry: Geometry) -> SymbolSpec:
    name, _, argstr = text.partition(":")
    name = name.strip()
    if name not in BUILTIN_NAMES:
        raise DomainError(f"unknown symbol {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    params = {}
    args = [a.strip() for a in argstr.split(",") if a.strip()] if argstr else []
    positional = list(_POSITIONAL.get(name, ()))
    for arg in args:
        if "=" in arg:
            key, _, val = arg.partition("=")
            params[key.strip()] = _parse_number(val, arg)
        else:
            if not positional:
                raise DomainError(f"{name}: unexpected positional argument {arg!r}")
            params[positional.pop(0)] = _parse_number(arg, arg)
    return builtin(name, geometry, **params)


def _parse_number(val: str, context: str):
    try:
        return float(val)
    except ValueError:
        raise DomainError(f"could not parse number in {context!r}")

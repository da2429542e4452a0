"""Catalog of scalar convex/concave functions with closed-form integral means.

Each entry packages an evaluator, its domain interval, the declared
curvature direction, and (when one exists) a closed form for the
integral mean A(f; a, b).  The closed forms are written with
log1p/expm1 so they remain accurate for nearly equal endpoints.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ValidationError
from .means import ln_identric, pow_integral_mean

CONVEX = "convex"
CONCAVE = "concave"

_INF = float("inf")


@dataclass(frozen=True)
class Interval:
    """A real interval, possibly unbounded, with open/closed endpoints."""

    lo: float = -_INF
    hi: float = _INF
    lo_open: bool = False
    hi_open: bool = False

    def contains(self, x: float, slack: float = 0.0) -> bool:
        # slack widens closed endpoints only; open endpoints guard singularities
        lo_ok = x > self.lo if self.lo_open else x >= self.lo - slack
        hi_ok = x < self.hi if self.hi_open else x <= self.hi + slack
        return bool(lo_ok and hi_ok)

    def contains_array(self, x, slack: float = 0.0):
        x = np.asarray(x, dtype=float)
        lo_ok = x > self.lo if self.lo_open else x >= self.lo - slack
        hi_ok = x < self.hi if self.hi_open else x <= self.hi + slack
        return lo_ok & hi_ok

    def contains_segment(self, lo: float, hi: float, slack: float = 0.0) -> bool:
        return self.contains(lo, slack) and self.contains(hi, slack)

    def __str__(self):
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True, eq=False)
class ConvexFunctionSpec:
    """A named scalar function with curvature metadata.

    evaluate accepts floats and numpy arrays.  integral_mean, when
    present, returns A(f; a, b) in closed form and must handle a == b.
    The direction is declared metadata: it is trusted by the chain
    checkers and only spot-checked by check_direction.
    """

    name: str
    domain: Interval
    direction: str
    evaluate: object
    integral_mean: object = None
    parameters: dict = field(default_factory=dict)

    @property
    def is_convex(self) -> bool:
        return self.direction == CONVEX

    def evaluate_many(self, x):
        """Vectorized evaluation with an elementwise fallback."""
        x = np.asarray(x, dtype=float)
        try:
            y = np.asarray(self.evaluate(x), dtype=float)
            if y.shape == x.shape:
                return y
        except (TypeError, ValueError):
            pass
        flat = np.array([float(self.evaluate(v)) for v in x.ravel()])
        return flat.reshape(x.shape)

    def with_direction(self, direction: str) -> "ConvexFunctionSpec":
        if direction not in (CONVEX, CONCAVE):
            raise ValidationError(f"unknown direction {direction!r}")
        return replace(self, direction=direction)


def _im_square(a, b):
    return (a * a + a * b + b * b) / 3.0


def _im_exp(a, b):
    d = b - a
    if d == 0.0:
        return math.exp(a)
    return math.exp(a) * math.expm1(d) / d


def _im_neglog(a, b):
    return -float(ln_identric(a, b))


def _im_kyfan(a, b):
    return float(ln_identric(1.0 - a, 1.0 - b)) - float(ln_identric(a, b))


def _im_xlogx(a, b):
    lo, hi = (a, b) if a <= b else (b, a)
    if lo == hi:
        return a * math.log(a)
    r = (hi - lo) / lo
    return (
        0.5 * (lo + hi) * math.log(hi)
        + 0.5 * lo * math.log1p(r) / r
        - 0.25 * (lo + hi)
    )


def _im_harmonic_frac(a, b):
    d = b - a
    if d == 0.0:
        return a / (1.0 + a)
    return 1.0 - math.log1p(d / (1.0 + a)) / d


def _no_params(name, params):
    if params:
        raise ValidationError(f"function {name!r} takes no parameters, got {sorted(params)}")


def _make_square(params):
    _no_params("square", params)
    return ConvexFunctionSpec("square", Interval(), CONVEX, lambda x: x * x, _im_square)


def _make_exp(params):
    _no_params("exp", params)
    return ConvexFunctionSpec("exp", Interval(), CONVEX, np.exp, _im_exp)


def _make_neglog(params):
    _no_params("neglog", params)
    return ConvexFunctionSpec(
        "neglog", Interval(0.0, _INF, lo_open=True), CONVEX, lambda x: -np.log(x), _im_neglog
    )


def _make_kyfan(params):
    _no_params("kyfan", params)
    return ConvexFunctionSpec(
        "kyfan",
        Interval(0.0, 0.5, lo_open=True),
        CONVEX,
        lambda x: np.log1p(-x) - np.log(x),
        _im_kyfan,
    )


def _make_powp(params):
    extra = set(params) - {"p"}
    if extra:
        raise ValidationError(f"function 'powp' takes only parameter 'p', got {sorted(extra)}")
    if "p" not in params:
        raise ValidationError("function 'powp' requires parameter 'p'")
    p = float(params["p"])
    if not p >= 1.0:
        raise ValidationError(f"function 'powp' requires p >= 1, got {p}")
    return ConvexFunctionSpec(
        "powp",
        Interval(0.0, _INF),
        CONVEX,
        lambda x: x ** p,
        lambda a, b: float(pow_integral_mean(a, b, p)),
        parameters={"p": p},
    )


def _make_xlogx(params):
    _no_params("xlogx", params)
    return ConvexFunctionSpec(
        "xlogx", Interval(0.0, _INF, lo_open=True), CONVEX, lambda x: x * np.log(x), _im_xlogx
    )


def _make_harmonic_frac(params):
    _no_params("harmonic_frac", params)
    return ConvexFunctionSpec(
        "harmonic_frac",
        Interval(0.0, _INF),
        CONCAVE,
        lambda x: x / (1.0 + x),
        _im_harmonic_frac,
    )


_FACTORIES = {
    "square": _make_square,
    "exp": _make_exp,
    "neglog": _make_neglog,
    "kyfan": _make_kyfan,
    "powp": _make_powp,
    "xlogx": _make_xlogx,
    "harmonic_frac": _make_harmonic_frac,
}

CATALOG_NAMES = tuple(sorted(_FACTORIES))


def get_function(name: str, params: dict | None = None) -> ConvexFunctionSpec:
    """Look up a catalog function by name, with an optional parameter mapping."""
    if name not in _FACTORIES:
        raise ValidationError(f"unknown function {name!r}; known: {', '.join(CATALOG_NAMES)}")
    return _FACTORIES[name](dict(params or {}))


def check_direction(f: ConvexFunctionSpec, trials: int = 200, seed: int = 0, span=(-8.0, 8.0)):
    """Midpoint spot-check of the declared curvature on random in-domain pairs.

    Not a proof; it samples f((x+y)/2) against (f(x)+f(y))/2 and returns
    False on any violation beyond rounding.
    """
    lo = max(f.domain.lo, span[0])
    hi = min(f.domain.hi, span[1])
    if f.domain.lo_open:
        lo = lo + 1e-6 * max(1.0, abs(lo))
    if f.domain.hi_open:
        hi = hi - 1e-6 * max(1.0, abs(hi))
    rng = np.random.default_rng(seed)
    x = rng.uniform(lo, hi, trials)
    y = rng.uniform(lo, hi, trials)
    fx = f.evaluate_many(x)
    fy = f.evaluate_many(y)
    fmid = f.evaluate_many(0.5 * (x + y))
    scale = np.maximum(1.0, np.maximum(np.abs(fx), np.abs(fy)))
    gap = 0.5 * (fx + fy) - fmid
    if f.is_convex:
        return bool(np.all(gap >= -1e-12 * scale))
    return bool(np.all(gap <= 1e-12 * scale))

"""The refinement engine for the weighted interpolation of Jensen's inequality.

For an instance (f, points x_j, lambda, mu, w1, w2) the one-parameter family

    phi(t) = sum_i mu_i * f( sum_j [(1-t) w1(i,j) + t w2(i,j)] lambda_j x_j )

is sandwiched between the two Jensen sides f(sum lambda_j x_j) and
sum lambda_j f(x_j) for every t in [0, 1], is convex in t (concave when f
is concave, with every inequality reversed), and so is its t-average,
which for scalar points collapses to a sum of endpoint integral means.
This module evaluates phi, checks the resulting chains, and tightens the
middle bound over t.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError
from .functions import ConvexFunctionSpec
from .means import integral_mean
from .measures import (
    DoublyStochasticMatrix,
    ProbabilityVector,
    WeightFunction,
    embed_doubly_stochastic,
)
from .numerics import adaptive_simpson, golden_section_minimize

TOL_FLOOR = 1e-9


def chain_tolerance(lower: float, upper: float) -> float:
    """Slack tolerance for a chain: relative with an absolute floor of TOL_FLOOR."""
    return TOL_FLOOR * max(1.0, abs(lower), abs(upper))


def rel_err(lhs: float, rhs: float) -> float:
    """|lhs - rhs| relative to max(1, |lhs|, |rhs|)."""
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class IdentityCheck:
    """One internal cross-check: two routes to the same value, with tolerance."""

    name: str
    lhs: float
    rhs: float
    rel_err: float
    tol: float
    ok: bool


def make_identity_check(name: str, lhs: float, rhs: float, tol: float) -> IdentityCheck:
    e = rel_err(lhs, rhs)
    return IdentityCheck(name, float(lhs), float(rhs), e, tol, e <= tol)


@dataclass(frozen=True)
class RefinementChain:
    """A verified inequality chain: lower <= middle member(s) <= upper.

    middle is a float, a pair of floats (four-member chains), or a list
    of (t, value) pairs.  passed reflects the slack signs only; attached
    identity checks are reported separately.
    """

    lower: float
    middle: object
    upper: float
    slack_lower: float
    slack_upper: float
    passed: bool
    tol: float
    inner_slacks: tuple = ()
    identity_checks: tuple = ()


def _assemble(lower, middle, upper, mid_lo, mid_hi, inner=(), checks=()):
    tol = chain_tolerance(lower, upper)
    slack_lower = mid_lo - lower
    slack_upper = upper - mid_hi
    passed = (
        slack_lower >= -tol
        and slack_upper >= -tol
        and all(s >= -tol for s in inner)
    )
    return RefinementChain(
        lower=float(lower),
        middle=middle,
        upper=float(upper),
        slack_lower=float(slack_lower),
        slack_upper=float(slack_upper),
        passed=bool(passed),
        tol=tol,
        inner_slacks=tuple(float(s) for s in inner),
        identity_checks=tuple(checks),
    )


@dataclass(frozen=True, eq=False)
class HadamardWeights:
    """Nonnegative averaging weights p with nodes t in [0, 1]."""

    p: np.ndarray
    t: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        t = np.array(self.t, dtype=float)
        if p.ndim != 1 or t.ndim != 1 or p.size != t.size or p.size == 0:
            raise ValidationError("p and t must be nonempty 1-D sequences of equal length")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(t))):
            raise ValidationError("averaging weights and nodes must be finite")
        if np.any(p < 0.0):
            raise ValidationError("averaging weights must be nonnegative")
        if not p.sum() > 0.0:
            raise ValidationError("averaging weights must have positive total")
        if np.any((t < 0.0) | (t > 1.0)):
            raise ValidationError("nodes must lie in [0, 1]")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "t", t)

    @property
    def total(self) -> float:
        return float(self.p.sum())


@dataclass(frozen=True, eq=False)
class JensenInstance:
    """An immutable problem instance; inner row sums are cached at construction.

    points is a length-n sequence of scalars (d = 1) or of d-tuples; for
    d > 1 the function must supply an evaluator accepting a length-d
    vector and domain checking is the caller's responsibility.
    """

    f: ConvexFunctionSpec
    points: np.ndarray
    lam: ProbabilityVector
    mu: ProbabilityVector
    w1: WeightFunction
    w2: WeightFunction
    s1: np.ndarray = field(init=False, repr=False)
    s2: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim not in (1, 2) or pts.shape[0] == 0:
            raise ValidationError("points must be a nonempty 1-D or 2-D array")
        n = pts.shape[0]
        if n != len(self.lam):
            raise ValidationError(f"{n} points but |lambda| = {len(self.lam)}")
        m = len(self.mu)
        for label, w in (("w1", self.w1), ("w2", self.w2)):
            if w.shape != (m, n):
                raise ValidationError(f"{label} has shape {w.shape}, expected ({m}, {n})")
            if not np.array_equal(w.mu.weights, self.mu.weights):
                raise ValidationError(f"{label} is normalized against a different mu")
            if not np.array_equal(w.lam.weights, self.lam.weights):
                raise ValidationError(f"{label} is normalized against a different lambda")
        if pts.ndim == 1:
            inside = self.f.domain.contains_array(pts)
            if not np.all(inside):
                j = int(np.argmin(inside))
                raise ValidationError(
                    f"point {j} = {pts[j]} is outside the domain of "
                    f"{self.f.name} ({self.f.domain})"
                )
        object.__setattr__(self, "points", pts)
        lamx = self.lam.weights[:, None] * pts if pts.ndim == 2 else self.lam.weights * pts
        object.__setattr__(self, "s1", self.w1.values @ lamx)
        object.__setattr__(self, "s2", self.w2.values @ lamx)

    @property
    def dim(self) -> int:
        return 1 if self.points.ndim == 1 else self.points.shape[1]

    def jensen_sides(self):
        """(f(lambda-mean of points), lambda-mean of f(points))."""
        if self.dim == 1:
            mean = float(self.lam.weights @ self.points)
            left = float(self.f.evaluate_many(np.array([mean]))[0])
            right = float(self.lam.weights @ self.f.evaluate_many(self.points))
        else:
            mean = self.lam.weights @ self.points
            left = float(self.f.evaluate(mean))
            right = float(
                sum(
                    lj * float(self.f.evaluate(xj))
                    for lj, xj in zip(self.lam.weights, self.points)
                )
            )
        return left, right

    def oriented_bounds(self):
        """(lower, upper) in chain order: Jensen sides swap when f is concave."""
        left, right = self.jensen_sides()
        return (left, right) if self.f.is_convex else (right, left)


def _check_t(ts: np.ndarray):
    bad = ~np.isfinite(ts) | (ts < 0.0) | (ts > 1.0)
    if np.any(bad):
        raise ValidationError(f"t must lie in [0, 1], got {float(ts[np.argmax(bad)])}")


def phi_values(inst: JensenInstance, ts) -> np.ndarray:
    """Vectorized phi over a grid of t values."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    _check_t(ts)
    if inst.dim == 1:
        # (1-t)*s1 + t*s2 keeps the endpoints exactly on s1 and s2
        inner = (1.0 - ts)[:, None] * inst.s1[None, :] + ts[:, None] * inst.s2[None, :]
        slack = 1e-12 * max(1.0, float(np.max(np.abs(inner))))
        inside = inst.f.domain.contains_array(inner, slack=slack)
        if not np.all(inside):
            k, i = np.unravel_index(int(np.argmin(inside)), inner.shape)
            raise DomainError(
                f"inner combination for row i={i} at t={ts[k]} is {inner[k, i]}, "
                f"outside the domain of {inst.f.name} ({inst.f.domain})"
            )
        vals = inst.f.evaluate_many(inner)
        return vals @ inst.mu.weights
    out = np.empty(ts.size)
    for k, t in enumerate(ts):
        inner = (1.0 - t) * inst.s1 + t * inst.s2
        out[k] = sum(
            mi * float(inst.f.evaluate(row)) for mi, row in zip(inst.mu.weights, inner)
        )
    return out


def phi(inst: JensenInstance, t: float) -> float:
    """phi at a single t in [0, 1]."""
    return float(phi_values(inst, [float(t)])[0])


def chain_at_t(inst: JensenInstance, t_grid) -> RefinementChain:
    """Check the sandwich lower <= phi(t) <= upper on each grid point."""
    ts = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if ts.size == 0:
        raise ValidationError("t grid must be nonempty")
    vals = phi_values(inst, ts)
    lower, upper = inst.oriented_bounds()
    middle = [(float(t), float(v)) for t, v in zip(ts, vals)]
    return _assemble(lower, middle, upper, float(vals.min()), float(vals.max()))


def phi_integral_closed(inst: JensenInstance) -> float:
    """t-average of phi as the mu-mean of endpoint integral means (scalar points only)."""
    if inst.dim != 1:
        raise ValidationError("the closed integral form needs scalar points")
    return float(
        sum(
            mi * integral_mean(inst.f, a, b)
            for mi, a, b in zip(inst.mu.weights, inst.s1, inst.s2)
        )
    )


def phi_integral_quad(inst: JensenInstance, atol=1e-10, rtol=1e-10) -> float:
    """t-average of phi by adaptive quadrature on [0, 1]."""
    return adaptive_simpson(lambda t: phi(inst, t), 0.0, 1.0, atol=atol, rtol=rtol)


def chain_integral(inst: JensenInstance, method: str = "auto") -> RefinementChain:
    """Check the sandwich for the t-average of phi.

    method: "auto" (closed form when points are scalar), "closed", or
    "quadrature".
    """
    if method not in ("auto", "closed", "quadrature"):
        raise ValidationError(f"unknown method {method!r}")
    if method == "closed" or (method == "auto" and inst.dim == 1):
        mid = phi_integral_closed(inst)
    else:
        mid = phi_integral_quad(inst)
    lower, upper = inst.oriented_bounds()
    return _assemble(lower, float(mid), upper, mid, mid)


def chain_hadamard(inst: JensenInstance, hw: HadamardWeights) -> RefinementChain:
    """Four-member chain: the sandwich around phi(weighted node mean) and the
    weighted mean of phi over the nodes, ordered by the declared direction."""
    t_bar = float(hw.p @ hw.t) / hw.total
    vals = phi_values(inst, hw.t)
    m_point = phi(inst, t_bar)
    m_avg = float(hw.p @ vals) / hw.total
    lower, upper = inst.oriented_bounds()
    if inst.f.is_convex:
        seq = (lower, m_point, m_avg, upper)
    else:
        seq = (lower, m_avg, m_point, upper)
    inner = (seq[2] - seq[1],)
    return _assemble(
        seq[0], (seq[1], seq[2]), seq[3], seq[1], seq[2], inner=inner
    )


@dataclass(frozen=True)
class ConvexityCheck:
    """Outcome of the random midpoint-convexity check on phi."""

    ok: bool
    witnesses: tuple


def phi_convexity_check(inst: JensenInstance, trials: int = 100, seed: int = 0) -> ConvexityCheck:
    """Check phi(a*t1 + (1-a)*t2) against a*phi(t1) + (1-a)*phi(t2) on random triples.

    The inequality direction follows the declared curvature of f.
    Violations beyond the chain tolerance are returned as witnesses.
    """
    if trials < 1:
        raise ValidationError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed)
    t1 = rng.random(trials)
    t2 = rng.random(trials)
    alpha = rng.random(trials)
    tm = alpha * t1 + (1.0 - alpha) * t2
    v1 = phi_values(inst, t1)
    v2 = phi_values(inst, t2)
    vm = phi_values(inst, tm)
    lower, upper = inst.oriented_bounds()
    tol = chain_tolerance(lower, upper)
    gap = alpha * v1 + (1.0 - alpha) * v2 - vm
    if not inst.f.is_convex:
        gap = -gap
    bad = gap < -tol
    witnesses = tuple(
        {
            "t1": float(t1[k]),
            "t2": float(t2[k]),
            "alpha": float(alpha[k]),
            "combined": float(vm[k]),
            "bound": float(alpha[k] * v1[k] + (1.0 - alpha[k]) * v2[k]),
        }
        for k in np.nonzero(bad)[0]
    )
    return ConvexityCheck(ok=not witnesses, witnesses=witnesses)


def tighten(inst: JensenInstance, tol_t: float):
    """Golden-section search for the best middle bound over t in [0, 1].

    Minimizes phi for convex f and maximizes it for concave f; a flat
    plateau resolves to its leftmost bracket.  Returns (t_star, value).
    """
    if not tol_t > 0.0:
        raise ValidationError(f"tol_t must be positive, got {tol_t}")
    if inst.f.is_convex:
        t_star, value = golden_section_minimize(lambda t: phi(inst, t), 0.0, 1.0, tol_t)
        return t_star, value
    t_star, neg = golden_section_minimize(lambda t: -phi(inst, t), 0.0, 1.0, tol_t)
    return t_star, -neg


def matrix_instance(points, f: ConvexFunctionSpec, b: DoublyStochasticMatrix,
                    c: DoublyStochasticMatrix) -> JensenInstance:
    """Instance with uniform measures and the two matrices embedded as weights."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if b.n != n or c.n != n:
        raise ValidationError(
            f"matrix orders ({b.n}, {c.n}) do not match the {n} points"
        )
    uni = ProbabilityVector.uniform(n)
    return JensenInstance(
        f=f,
        points=pts,
        lam=uni,
        mu=uni,
        w1=embed_doubly_stochastic(b),
        w2=embed_doubly_stochastic(c),
    )


def chain_matrix(points, f: ConvexFunctionSpec, b: DoublyStochasticMatrix,
                 c: DoublyStochasticMatrix, t_grid) -> RefinementChain:
    """Sandwich check for the doubly-stochastic form of the interpolation."""
    return chain_at_t(matrix_instance(points, f, b, c), t_grid)

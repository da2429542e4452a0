"""Command-line front end: verify instance files, generate test objects, tighten bounds.

Instance files are JSON documents.  Reports are JSON written to standard
output with all numbers at 17 significant digits, so values survive a
round-trip exactly and identical inputs produce byte-identical reports.
Exit codes: 0 all chains pass, 1 a chain violated its tolerance, 2
input/validation/numeric error.
"""

import argparse
import json
import sys

import numpy as np

from . import apps, refine
from .errors import NumericError, ValidationError
from .functions import get_function
from .measures import (
    DoublyStochasticMatrix,
    ProbabilityVector,
    WeightFunction,
    embed_doubly_stochastic,
    random_doubly_stochastic,
    random_weight,
)
from .refine import HadamardWeights, JensenInstance

DEFAULT_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)

_APPLICATIONS = ("jensen", "agm", "kyfan", "lp", "powersum", "matrixpower", "harmonic")

_KNOWN_FIELDS = {
    "lambda",
    "mu",
    "points",
    "function",
    "weights",
    "t_grid",
    "application",
    "space",
    "p",
    "hadamard",
    "seed",
}


# ---------------------------------------------------------------------------
# deterministic JSON rendering (17 significant digits)


def _render(obj, out, indent):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for k, (key, val) in enumerate(items):
            out.append(f'{pad}  {json.dumps(str(key))}: ')
            _render(val, out, indent + 1)
            out.append(",\n" if k + 1 < len(items) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for k, val in enumerate(seq):
            out.append(pad + "  ")
            _render(val, out, indent + 1)
            out.append(",\n" if k + 1 < len(seq) else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(f"{float(obj):.17g}")
    elif obj is None:
        out.append("null")
    else:
        out.append(json.dumps(str(obj)))


def render_json(obj) -> str:
    out = []
    _render(obj, out, 0)
    return "".join(out)


def _matrix_to_lists(values) -> list:
    return [[float(v) for v in row] for row in values]


# ---------------------------------------------------------------------------
# instance-file parsing


def _load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: instance file must be a JSON object")
    unknown = set(doc) - _KNOWN_FIELDS
    if unknown:
        raise ValidationError(f"{path}: unknown field(s) {sorted(unknown)}")
    return doc


def _field(doc, name, required=False):
    if name not in doc:
        if required:
            raise ValidationError(f"missing required field {name!r}")
        return None
    return doc[name]


def _as_float_array(raw, field):
    try:
        return np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{field}: not a numeric array ({exc})") from exc


def _prob(doc, name) -> ProbabilityVector:
    raw = _field(doc, name, required=True)
    try:
        return ProbabilityVector(_as_float_array(raw, name))
    except ValidationError as exc:
        raise (exc if str(exc).startswith(f"{name}:") else ValidationError(f"{name}: {exc}")) from exc


def _parse_function(doc):
    spec = _field(doc, "function", required=True)
    if not isinstance(spec, dict) or "name" not in spec:
        raise ValidationError("function: expected an object with a 'name' field")
    extra = set(spec) - {"name", "params", "direction"}
    if extra:
        raise ValidationError(f"function: unknown field(s) {sorted(extra)}")
    f = get_function(spec["name"], spec.get("params"))
    if "direction" in spec:
        f = f.with_direction(spec["direction"])
    return f


def _parse_weight_entry(entry, mu, lam) -> WeightFunction:
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ValidationError("weight entry: expected an object with a 'kind' field")
    kind = entry["kind"]
    if kind == "ones":
        return WeightFunction.ones(mu, lam)
    if kind == "rank_one":
        if "u" not in entry or "v" not in entry:
            raise ValidationError("rank_one weight needs 'u' and 'v' arrays")
        from .measures import rank_one_weight

        return rank_one_weight(
            _as_float_array(entry["u"], "u"), _as_float_array(entry["v"], "v"), mu, lam
        )
    if kind == "matrix":
        if "values" not in entry:
            raise ValidationError("matrix weight needs a 'values' grid")
        return WeightFunction(_as_float_array(entry["values"], "values"), mu, lam)
    raise ValidationError(f"unknown weight kind {kind!r}; expected ones, rank_one or matrix")


def _is_uniform(pv: ProbabilityVector) -> bool:
    n = len(pv)
    return bool(np.allclose(pv.weights, 1.0 / n, rtol=0.0, atol=1e-12))


def _parse_weights(doc, n_points):
    """Returns (lam, mu, w1, w2, ds_pair or None)."""
    weights = _field(doc, "weights", required=True)
    if not isinstance(weights, dict):
        raise ValidationError("weights: expected an object")
    if "B" in weights or "C" in weights:
        extra = set(weights) - {"B", "C"}
        if extra:
            raise ValidationError(f"weights: unexpected field(s) {sorted(extra)} beside B/C")
        if "B" not in weights or "C" not in weights:
            raise ValidationError("weights: B and C must both be present")
        def _matrix(key):
            try:
                return DoublyStochasticMatrix(_as_float_array(weights[key], f"weights.{key}"))
            except ValidationError as exc:
                msg = str(exc)
                if msg.startswith(f"weights.{key}:"):
                    raise
                raise ValidationError(f"weights.{key}: {msg}") from exc

        b = _matrix("B")
        c = _matrix("C")
        if b.n != c.n:
            raise ValidationError(f"weights: B is {b.n}x{b.n} but C is {c.n}x{c.n}")
        n = b.n
        if n_points is not None and n_points != n:
            raise ValidationError(f"weights: matrices are {n}x{n} but there are {n_points} points")
        uni = ProbabilityVector.uniform(n)
        for name in ("lambda", "mu"):
            if name in doc:
                pv = _prob(doc, name)
                if len(pv) != n or not _is_uniform(pv):
                    raise ValidationError(
                        f"{name}: the B/C matrix form fixes {name} to uniform({n})"
                    )
        return uni, uni, embed_doubly_stochastic(b), embed_doubly_stochastic(c), (b, c)
    extra = set(weights) - {"omega1", "omega2"}
    if extra:
        raise ValidationError(f"weights: unknown field(s) {sorted(extra)}")
    if "omega1" not in weights or "omega2" not in weights:
        raise ValidationError("weights: omega1 and omega2 must both be present")
    lam = _prob(doc, "lambda")
    mu = _prob(doc, "mu")
    try:
        w1 = _parse_weight_entry(weights["omega1"], mu, lam)
    except ValidationError as exc:
        raise ValidationError(f"weights.omega1: {exc}") from exc
    try:
        w2 = _parse_weight_entry(weights["omega2"], mu, lam)
    except ValidationError as exc:
        raise ValidationError(f"weights.omega2: {exc}") from exc
    return lam, mu, w1, w2, None


def _parse_points(doc, ndim):
    raw = _field(doc, "points", required=True)
    pts = _as_float_array(raw, "points")
    if pts.ndim != ndim:
        raise ValidationError(f"points: expected a {ndim}-D array, got {pts.ndim}-D")
    return pts


def _parse_space(doc, width):
    raw = _field(doc, "space")
    if raw is None:
        return apps.FiniteMeasureSpace.counting(width)
    if not isinstance(raw, dict) or "masses" not in raw:
        raise ValidationError("space: expected an object with a 'masses' array")
    extra = set(raw) - {"masses"}
    if extra:
        raise ValidationError(f"space: unknown field(s) {sorted(extra)}")
    try:
        return apps.FiniteMeasureSpace(_as_float_array(raw["masses"], "space.masses"))
    except ValidationError as exc:
        msg = str(exc)
        if msg.startswith("space.masses:"):
            raise
        raise ValidationError(f"space.masses: {msg}") from exc


def _parse_p(doc):
    p = _field(doc, "p", required=True)
    if not isinstance(p, (int, float)):
        raise ValidationError(f"p: expected a number, got {p!r}")
    return float(p)


def _parse_hadamard(doc):
    raw = _field(doc, "hadamard")
    if raw is None:
        return None
    if not isinstance(raw, dict) or "p" not in raw or "t" not in raw:
        raise ValidationError("hadamard: expected an object with 'p' and 't' arrays")
    extra = set(raw) - {"p", "t"}
    if extra:
        raise ValidationError(f"hadamard: unknown field(s) {sorted(extra)}")
    try:
        return HadamardWeights(
            _as_float_array(raw["p"], "hadamard.p"), _as_float_array(raw["t"], "hadamard.t")
        )
    except ValidationError as exc:
        msg = str(exc)
        if msg.startswith("hadamard."):
            raise
        raise ValidationError(f"hadamard: {msg}") from exc


def _reject_fields(doc, application, *names):
    for name in names:
        if name in doc:
            raise ValidationError(
                f"{name}: not a valid field for application {application!r}"
            )


# ---------------------------------------------------------------------------
# report assembly


def _chain_pass(chain, tol):
    return (
        chain.slack_lower >= -tol
        and chain.slack_upper >= -tol
        and all(s >= -tol for s in chain.inner_slacks)
    )


def _identity_entries(chain):
    return [
        {
            "name": chk.name,
            "lhs": chk.lhs,
            "rhs": chk.rhs,
            "rel_err": chk.rel_err,
            "tol": chk.tol,
            "ok": chk.ok,
        }
        for chk in chain.identity_checks
    ]


def _grid_witnesses(chain, tol):
    lo = chain.lower - tol
    hi = chain.upper + tol
    return [
        {"t": t, "value": v, "lower": chain.lower, "upper": chain.upper}
        for t, v in chain.middle
        if v < lo or v > hi
    ]


def _scalar_witnesses(chain, tol, label):
    if _chain_pass(chain, tol):
        return []
    return [
        {
            "member": label,
            "value": chain.middle,
            "lower": chain.lower,
            "upper": chain.upper,
        }
    ]


def _tol_for(chain, tol_flag):
    if tol_flag is None:
        return chain.tol
    return tol_flag * max(1.0, abs(chain.lower), abs(chain.upper))


def _verify_jensen(doc, tol_flag, grid_flag):
    f = _parse_function(doc)
    pts = _parse_points(doc, 1)
    lam, mu, w1, w2, _ = _parse_weights(doc, pts.size)
    _reject_fields(doc, "jensen", "space", "p")
    inst = JensenInstance(f=f, points=pts, lam=lam, mu=mu, w1=w1, w2=w2)
    if grid_flag is not None:
        grid = _as_float_array(grid_flag, "--grid")
    else:
        grid = _as_float_array(doc.get("t_grid", list(DEFAULT_GRID)), "t_grid")
    grid_chain = refine.chain_at_t(inst, grid)
    int_closed = refine.chain_integral(inst, method="closed")
    int_quad = refine.phi_integral_quad(inst)
    tol = _tol_for(grid_chain, tol_flag)
    ok = _chain_pass(grid_chain, tol) and _chain_pass(int_closed, tol)
    witnesses = _grid_witnesses(grid_chain, tol)
    identity = [
        {
            "name": "integral-closed-vs-quadrature",
            "lhs": int_closed.middle,
            "rhs": int_quad,
            "rel_err": refine.rel_err(int_closed.middle, int_quad),
            "tol": 1e-8,
            "ok": refine.rel_err(int_closed.middle, int_quad) <= 1e-8,
        }
    ]
    ok = ok and identity[0]["ok"]
    slacks = {
        "lower": grid_chain.slack_lower,
        "upper": grid_chain.slack_upper,
        "integral_lower": int_closed.slack_lower,
        "integral_upper": int_closed.slack_upper,
    }
    hw = _parse_hadamard(doc)
    if hw is not None:
        had = refine.chain_hadamard(inst, hw)
        ok = ok and _chain_pass(had, tol)
        slacks["hadamard_lower"] = had.slack_lower
        slacks["hadamard_inner"] = had.inner_slacks[0]
        slacks["hadamard_upper"] = had.slack_upper
        if not _chain_pass(had, tol):
            witnesses.append(
                {
                    "member": "hadamard",
                    "value": list(had.middle),
                    "lower": had.lower,
                    "upper": had.upper,
                }
            )
    report = {
        "application": "jensen",
        "tolerance": tol,
        "lower": grid_chain.lower,
        "upper": grid_chain.upper,
        "middle": [{"t": t, "value": v} for t, v in grid_chain.middle],
        "integral": int_closed.middle,
        "slacks": slacks,
        "pass": ok,
        "identity_checks": identity,
        "witnesses": witnesses,
    }
    return report, ok


def _verify_scalar_app(application, chain, tol_flag, extra=None):
    tol = _tol_for(chain, tol_flag)
    ok = _chain_pass(chain, tol) and all(chk.ok for chk in chain.identity_checks)
    report = {
        "application": application,
        "tolerance": tol,
        "lower": chain.lower,
        "upper": chain.upper,
        "middle": chain.middle,
        "slacks": {"lower": chain.slack_lower, "upper": chain.slack_upper},
        "pass": ok,
        "identity_checks": _identity_entries(chain),
        "witnesses": _scalar_witnesses(chain, tol, "middle"),
    }
    if extra:
        report.update(extra)
    return report, ok


def _verify_matrixpower(doc, tol_flag):
    _reject_fields(doc, "matrixpower", "function", "points", "space", "t_grid", "hadamard")
    weights = _field(doc, "weights", required=True)
    if not isinstance(weights, dict) or "B" not in weights or "C" not in weights:
        raise ValidationError("matrixpower needs weights given as B and C matrices")
    _, _, _, _, pair = _parse_weights(doc, None)
    b, c = pair
    p = _parse_p(doc)
    lower, middle, upper = apps.matrix_power_bounds(b, c, p)
    tol = (tol_flag if tol_flag is not None else refine.TOL_FLOOR) * max(
        1.0, abs(lower), abs(upper)
    )
    slack_lower = middle - lower
    slack_upper = upper - middle
    ok = slack_lower >= -tol and slack_upper >= -tol
    report = {
        "application": "matrixpower",
        "tolerance": tol,
        "lower": lower,
        "upper": upper,
        "middle": middle,
        "slacks": {"lower": slack_lower, "upper": slack_upper},
        "pass": ok,
        "identity_checks": [],
        "witnesses": []
        if ok
        else [{"member": "middle", "value": middle, "lower": lower, "upper": upper}],
    }
    return report, ok


def run_verify(doc: dict, tol_flag=None, grid_flag=None):
    """Dispatch a parsed instance document; returns (report dict, all-pass bool)."""
    application = doc.get("application", "jensen")
    if application not in _APPLICATIONS:
        raise ValidationError(
            f"application: unknown {application!r}; expected one of {', '.join(_APPLICATIONS)}"
        )
    if application == "jensen":
        return _verify_jensen(doc, tol_flag, grid_flag)
    if application == "matrixpower":
        return _verify_matrixpower(doc, tol_flag)
    _reject_fields(doc, application, "function", "t_grid", "hadamard")
    if application in ("agm", "kyfan", "powersum"):
        _reject_fields(doc, application, "space")
        pts = _parse_points(doc, 1)
        lam, mu, w1, w2, _ = _parse_weights(doc, pts.size)
        if application == "agm":
            chain = apps.agm_chain(pts, lam, mu, w1, w2)
        elif application == "kyfan":
            chain = apps.kyfan_chain(pts, lam, mu, w1, w2)
        else:
            chain = apps.power_sum_chain(pts, _parse_p(doc), lam, mu, w1, w2)
        return _verify_scalar_app(application, chain, tol_flag)
    # lp and harmonic take an n x |X| sample grid
    pts = _parse_points(doc, 2)
    fv = apps.FunctionVector(pts)
    space = _parse_space(doc, pts.shape[1])
    lam, mu, w1, w2, _ = _parse_weights(doc, pts.shape[0])
    if application == "lp":
        chain = apps.lp_chain(fv, space, _parse_p(doc), lam, mu, w1, w2)
    else:
        _reject_fields(doc, application, "p")
        chain = apps.harmonic_chain(fv, space, lam, mu, w1, w2)
    return _verify_scalar_app(application, chain, tol_flag)


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(path: str, tol=None, grid=None) -> int:
    doc = _load_document(path)
    report, ok = run_verify(doc, tol_flag=tol, grid_flag=grid)
    sys.stdout.write(render_json(report) + "\n")
    return 0 if ok else 1


def cmd_generate(kind: str, n: int, m=None, seed: int = 0, out=None) -> int:
    if kind == "ds":
        matrix = random_doubly_stochastic(n, seed)
        payload = _matrix_to_lists(matrix.values)
    elif kind == "weight":
        rows = m if m is not None else n
        w = random_weight(ProbabilityVector.uniform(rows), ProbabilityVector.uniform(n), seed)
        payload = {"kind": "matrix", "values": _matrix_to_lists(w.values)}
    else:
        raise ValidationError(f"unknown generator kind {kind!r}; expected ds or weight")
    text = render_json(payload) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def cmd_tighten(path: str, tol_t: float = 1e-8) -> int:
    doc = _load_document(path)
    application = doc.get("application", "jensen")
    if application != "jensen":
        raise ValidationError("tighten needs a jensen-style instance (function + points)")
    f = _parse_function(doc)
    pts = _parse_points(doc, 1)
    lam, mu, w1, w2, _ = _parse_weights(doc, pts.size)
    inst = JensenInstance(f=f, points=pts, lam=lam, mu=mu, w1=w1, w2=w2)
    t_star, value = refine.tighten(inst, tol_t)
    report = {
        "t_star": t_star,
        "value": value,
        "phi_at_0": refine.phi(inst, 0.0),
        "phi_at_1": refine.phi(inst, 1.0),
        "bracket_width": tol_t,
    }
    sys.stdout.write(render_json(report) + "\n")
    return 0


def _parse_grid_flag(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"--grid: {exc}") from exc
    if not values:
        raise ValidationError("--grid: needs at least one value")
    return values


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="jensenchain",
        description="Verify refinement chains of the discrete Jensen inequality.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="verify the chains of a JSON instance file")
    p_verify.add_argument("path")
    p_verify.add_argument("--tol", type=float, default=None, help="chain tolerance scale")
    p_verify.add_argument("--grid", type=str, default=None, help="comma list of t values")

    p_gen = sub.add_parser("generate", help="generate a doubly stochastic matrix or weight")
    p_gen.add_argument("kind", choices=("ds", "weight"))
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--m", type=int, default=None)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", type=str, default=None)

    p_tight = sub.add_parser("tighten", help="search the best middle bound over t")
    p_tight.add_argument("path")
    p_tight.add_argument("--tol", type=float, default=1e-8, help="bracket width for t")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            grid = _parse_grid_flag(args.grid) if args.grid is not None else None
            return cmd_verify(args.path, tol=args.tol, grid=grid)
        if args.command == "generate":
            if args.n < 1 or (args.m is not None and args.m < 1):
                raise ValidationError("dimensions must be positive")
            return cmd_generate(args.kind, args.n, m=args.m, seed=args.seed, out=args.out)
        return cmd_tighten(args.path, tol_t=args.tol)
    except (ValidationError, NumericError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

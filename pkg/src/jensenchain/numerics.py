"""Scalar numerical routines: adaptive Simpson quadrature, golden-section search.

Both are deliberately plain: the integrands in this package are smooth
convex/concave scalars on bounded intervals, and the objective of the
1-D search is convex (possibly flat).
"""

import math

from .errors import NumericError, ValidationError

QUAD_ATOL = 1e-10
QUAD_RTOL = 1e-10
QUAD_MAX_DEPTH = 40

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _panel(f, a, b, fa, fm, fb, whole, tol, depth, max_depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    h = 0.5 * (b - a)
    left = h / 6.0 * (fa + 4.0 * flm + fm)
    right = h / 6.0 * (fm + 4.0 * frm + fb)
    s2 = left + right
    err = s2 - whole
    # 1e-16*|s2| floor: stop once rounding noise dominates the panel estimate
    if abs(err) <= 15.0 * max(tol, 1e-16 * abs(s2)):
        return s2 + err / 15.0
    if depth >= max_depth:
        raise NumericError(
            f"adaptive Simpson did not converge on [{a}, {b}] "
            f"(residual {abs(err):.3e} at depth {depth})"
        )
    half = 0.5 * tol
    return _panel(f, a, m, fa, flm, fm, left, half, depth + 1, max_depth) + _panel(
        f, m, b, fm, frm, fb, right, half, depth + 1, max_depth
    )


def adaptive_simpson(f, a, b, atol=QUAD_ATOL, rtol=QUAD_RTOL, max_depth=QUAD_MAX_DEPTH):
    """Integrate f over [a, b] by adaptive Simpson with Richardson extrapolation.

    The panel acceptance test combines the absolute tolerance with a
    relative one scaled by the first whole-interval estimate.  Raises
    NumericError when the depth cap is hit before the tolerance is met.
    """
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0
    fa = f(a)
    fb = f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = max(atol, rtol * abs(whole))
    return sign * _panel(f, a, b, fa, fm, fb, whole, tol, 0, max_depth)


def golden_section_minimize(f, a, b, tol, max_iter=1000):
    """Minimize a unimodal-or-flat f on [a, b]; returns (x_star, f(x_star)).

    Ties shrink the bracket from the right, so a flat plateau resolves to
    its leftmost point.  The final bracket width is at most tol.
    """
    if not tol > 0.0:
        raise ValidationError(f"search tolerance must be positive, got {tol}")
    if b - a <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    it = 0
    while (b - a) > tol and it < max_iter:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        it += 1
    x = 0.5 * (a + b)
    return x, f(x)

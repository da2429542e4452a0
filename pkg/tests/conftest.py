"""Shared corpus generators and independent oracles.

The oracles here re-implement definitions with plain Python loops (no
caching, no vectorization) so library results are always checked against
an independent evaluation path.
"""

import numpy as np
import pytest

from jensenchain import (
    JensenInstance,
    ProbabilityVector,
    get_function,
    interpolate_weight,
    rank_one_weight,
)

# sampling ranges keeping every point strictly inside each catalog domain
FUN_RANGES = {
    "square": (-2.0, 2.0),
    "exp": (-2.0, 2.0),
    "neglog": (0.05, 3.0),
    "kyfan": (0.02, 0.5),
    "powp": (0.0, 2.0),
    "xlogx": (0.05, 3.0),
    "harmonic_frac": (0.0, 4.0),
}


def rand_prob(rng, n):
    w = rng.random(n) + 1e-3
    return ProbabilityVector(w / w.sum())


def rand_weight(rng, mu, lam):
    w = rank_one_weight(rng.standard_normal(len(mu)), rng.standard_normal(len(lam)), mu, lam)
    extra = rank_one_weight(rng.standard_normal(len(mu)), rng.standard_normal(len(lam)), mu, lam)
    return interpolate_weight(w, extra, float(rng.random()))


def make_instance(rng, name, n_max=8, m_max=8):
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    lam = rand_prob(rng, n)
    mu = rand_prob(rng, m)
    lo, hi = FUN_RANGES[name]
    pts = rng.uniform(lo, hi, n)
    params = {"p": float(rng.choice([1.0, 1.5, 2.0, 3.0]))} if name == "powp" else None
    f = get_function(name, params)
    w1 = rand_weight(rng, mu, lam)
    w2 = rand_weight(rng, mu, lam)
    return JensenInstance(f=f, points=pts, lam=lam, mu=mu, w1=w1, w2=w2)


def direct_phi(inst, t):
    """Definition of phi evaluated with explicit loops; independent of the engine."""
    total = 0.0
    m, n = inst.w1.shape
    for i in range(m):
        inner = 0.0
        for j in range(n):
            wij = (1.0 - t) * inst.w1.values[i, j] + t * inst.w2.values[i, j]
            inner += wij * inst.lam.weights[j] * inst.points[j]
        total += inst.mu.weights[i] * float(inst.f.evaluate(inner))
    return total


def composite_midpoint(g, n_panels=64):
    h = 1.0 / n_panels
    return h * sum(g((k + 0.5) * h) for k in range(n_panels))


def composite_trapezoid(g, n_panels=64):
    h = 1.0 / n_panels
    total = 0.5 * (g(0.0) + g(1.0))
    total += sum(g(k * h) for k in range(1, n_panels))
    return total * h


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)

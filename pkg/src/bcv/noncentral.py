"""Noncentral-region machinery: the exponential-fixpoint iterates and the
J constants controlling the subordinated second-derivative estimate.

The iterates alpha_0(theta) = theta, alpha_{k+1} = 1 - e^{-alpha_k} decrease
slowly to zero; they drive both the limit constants

    J(k, a) = a (2 L_k(a) log(27/16)
                 + (log 4 - 2 log(27/16)) alpha_{k-1}(1)^2 e^{-a alpha_{k-1}(1)}),
    L_k(a)  = integral_0^1 (alpha_{k-1}(theta)/theta)^2 e^{-a alpha_{k-1}(theta)} dtheta,

and the finite-n bound on J_n(m, a) = sup over the edge region of
E phi^2(x)/phi^2(W_n^{(m)}(x)), where W_n^{(m)} is the m-fold composition of
theta -> (S_{n-2}(theta) + V)/n.  A seeded Monte Carlo simulator of that
composition sanity-checks the bound.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import QuadConfig
from .dist import LOG4, LOG2716
from .quadrature import adaptive_simpson


@dataclass(frozen=True)
class AlphaIterates:
    """alpha_0(theta) ... alpha_m(theta) for one theta."""
    values: tuple
    m: int

    def __post_init__(self):
        if len(self.values) != self.m + 1:
            raise ValueError("need m+1 iterate values")


def alpha_seq(m, theta):
    if m < 0:
        raise ValueError("iterate depth m must be >= 0")
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0,1]")
    vals = [float(theta)]
    for _ in range(m):
        vals.append(-math.expm1(-vals[-1]))
    return AlphaIterates(tuple(vals), m)


def alpha_iter(m, theta):
    """alpha_m(theta) with alpha_0 = theta, alpha_{k+1} = 1 - e^{-alpha_k}."""
    return alpha_seq(m, theta).values[-1]


def first_valid_i(a, max_depth=10_000):
    """Smallest i >= 1 with a < 1/alpha_{i-1}(1); the iterates vanish slowly,
    so this grows roughly like 2a."""
    if a <= 0.0:
        raise ValueError("a must be positive")
    v = 1.0
    for i in range(1, max_depth + 1):
        if a * v < 1.0:
            return i
        v = -math.expm1(-v)
    raise RuntimeError(f"no valid index below depth {max_depth}")


@dataclass(frozen=True)
class NoncentralParams:
    a: float
    m: int
    i: int

    def __post_init__(self):
        if self.i != first_valid_i(self.a):
            raise ValueError(f"i must be the first valid index {first_valid_i(self.a)}")
        if self.i > self.m:
            raise ValueError("need i <= m")


def b_n(a, n):
    """Edge-region scale 2a/(1 + sqrt(1 - 4a/n)); decreases to a as n grows."""
    if n <= 4.0 * a:
        raise ValueError(f"need n > 4a = {4.0 * a:g}")
    return 2.0 * a / (1.0 + math.sqrt(1.0 - 4.0 * a / n))


def epsilon_n(n):
    """Discretization slack (4/n) log(27/16) + e^{-n/2}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 4.0 * LOG2716 / n + math.exp(-n / 2.0)


def _alpha_fn(k):
    # alpha_{k}(theta) as a scalar function of theta
    def fn(theta):
        v = theta
        for _ in range(k):
            v = -math.expm1(-v)
        return v
    return fn


def L_k(k, a, quad=QuadConfig()):
    """L_k(a) = integral_0^1 (alpha_{k-1}(theta)/theta)^2 e^{-a alpha_{k-1}(theta)} dtheta.

    The integrand extends continuously by 1 at theta = 0 (alpha_{k-1}(theta)
    ~ theta there); values lie in (0, 1].
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if a < 0.0:
        raise ValueError("a must be >= 0")
    alpha = _alpha_fn(k - 1)

    def integrand(theta):
        if theta == 0.0:
            return 1.0
        v = alpha(theta)
        return (v / theta) ** 2 * math.exp(-a * v)

    return adaptive_simpson(integrand, 0.0, 1.0, quad)


def J_limit(k, a, quad=QuadConfig()):
    """Limit constant J(k, a); the second term decays exponentially in a."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if a <= 0.0:
        raise ValueError("a must be positive")
    a1 = alpha_iter(k - 1, 1.0)
    return a * (2.0 * L_k(k, a, quad) * LOG2716
                + (LOG4 - 2.0 * LOG2716) * a1 * a1 * math.exp(-a * a1))


def finite_n_J_bound(n, m, a, quad=QuadConfig()):
    """Finite-n upper bound for J_n(m, a):

        b_n e^{2 b_n m / n} (2 log(27/16) L_m(b_n)
            + (log 4 - 2 log(27/16)) alpha_{m-1}(1)^2 e^{-b_n alpha_{m-1}(1)}
            + epsilon_n),

    valid under the hypothesis b_n <= 1/alpha_{m-1}(1); converges to
    J_limit(m, a) as n grows.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    b = b_n(a, n)
    a1 = alpha_iter(m - 1, 1.0)
    if b > 1.0 / a1:
        raise ValueError(
            f"hypothesis fails: b_n = {b:.6g} > 1/alpha_{{m-1}}(1) = {1.0 / a1:.6g}")
    return b * math.exp(2.0 * b * m / n) * (
        2.0 * LOG2716 * L_k(m, b, quad)
        + (LOG4 - 2.0 * LOG2716) * a1 * a1 * math.exp(-b * a1)
        + epsilon_n(n))


def edge_region_max(a, n):
    """Right endpoint of the edge region {x <= 1/2 : n phi^2(x) < a}."""
    if n <= 4.0 * a:
        raise ValueError(f"need n > 4a = {4.0 * a:g}")
    return 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * a / n))


@dataclass(frozen=True)
class SimulatedJ:
    value: float
    std_error: float
    arg_x: float
    grid: tuple
    estimates: tuple
    std_errors: tuple


def simulate_J(n, m, a, trials, rng, grid_points=64):
    """Monte Carlo estimate of J_n(m, a).

    For each x on a grid over the edge region, draws trials paths of the
    m-fold composition W of theta -> (S_{n-2}(theta) + V)/n started at x and
    averages phi^2(x)/phi^2(W).  Reports the max over the grid with its
    standard error; per-point estimates ride along.  Each grid point uses an
    rng stream spawned from the caller's generator, so results do not depend
    on evaluation order.
    """
    if trials < 10_000:
        raise ValueError("need trials >= 1e4 for a usable standard error")
    if m < 1:
        raise ValueError("m must be >= 1")
    xa = edge_region_max(a, n)
    xs = np.linspace(0.0, xa, grid_points + 2)[1:-1]
    streams = rng.spawn(len(xs))
    est = np.empty(len(xs))
    se = np.empty(len(xs))
    for idx, (x, g) in enumerate(zip(xs, streams)):
        theta = np.full(trials, x)
        for _ in range(m):
            s = g.binomial(n - 2, theta)
            v = g.random(trials) + g.random(trials)
            theta = (s + v) / n
        if not (np.all(theta > 0.0) and np.all(theta < 1.0)):
            raise AssertionError("composition left (0,1); V in (0,2) forbids this")
        ratio = (x * (1.0 - x)) / (theta * (1.0 - theta))
        est[idx] = np.mean(ratio)
        se[idx] = np.std(ratio, ddof=1) / math.sqrt(trials)
    k = int(np.argmax(est))
    return SimulatedJ(float(est[k]), float(se[k]), float(xs[k]),
                      tuple(xs), tuple(est), tuple(se))

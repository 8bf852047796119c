"""Independent reference implementations used by the tests.

Everything here is deliberately built on different machinery than the
package -- exact rational arithmetic, symbolic algebra, generic library
quadrature, high-precision floats, Monte Carlo -- so that agreement with
the package is evidence of correctness rather than a tautology.
"""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import sympy
from scipy import integrate

_Y, _X = sympy.symbols("y x")


# ---------------------------------------------------------------------------
# exact rational arithmetic


def frac_binom_pmf(n, k, p):
    """Binomial(n, p) pmf at k as an exact Fraction (p a Fraction)."""
    p = Fraction(p)
    return math.comb(n, k) * p ** k * (1 - p) ** (n - k)


def frac_bernstein(values, x):
    """Exact Bernstein sum: values are f(k/n) for k = 0..n, x a Fraction."""
    n = len(values) - 1
    x = Fraction(x)
    return sum(Fraction(v) * frac_binom_pmf(n, k, x) for k, v in enumerate(values))


def frac_bernstein_grid(values):
    """One exact Bernstein iteration of the grid values f(k/n), k = 0..n."""
    n = len(values) - 1
    return [frac_bernstein(values, Fraction(i, n)) for i in range(n + 1)]


# ---------------------------------------------------------------------------
# symbolic algebra


def sympy_bernstein_expr(fexpr, n):
    """The Bernstein image of a sympy expression in y, as an expression in x."""
    terms = sum(fexpr.subs(_Y, sympy.Rational(k, n)) * sympy.binomial(n, k)
                * _X ** k * (1 - _X) ** (n - k) for k in range(n + 1))
    return sympy.expand(terms)


def sympy_bernstein_derivative(fexpr, n, m, x):
    """Exact m-th derivative of the Bernstein image at rational x, as float."""
    d = sympy.diff(sympy_bernstein_expr(fexpr, n), _X, m)
    return float(d.subs(_X, sympy.Rational(x)))


SYMPY_Y = _Y


# ---------------------------------------------------------------------------
# generic quadrature


def quad_integral(f, a, b):
    """scipy.integrate.quad with a tight tolerance; returns the value only."""
    val, _ = integrate.quad(f, a, b, epsabs=1e-12, epsrel=1e-12, limit=400)
    return val


def riemann_midpoint(f, a, b, points):
    ts = a + (b - a) * (np.arange(points) + 0.5) / points
    return (b - a) * float(np.mean([f(float(t)) for t in ts]))


# ---------------------------------------------------------------------------
# high-precision floats


def mp_nu(lam, dps=40):
    """The Poisson jump profile at lam, computed with mpmath arithmetic."""
    with mp.workdps(dps):
        lam = mp.mpf(lam)
        c = int(mp.ceil(lam))
        pm = mp.e ** (-lam) * lam ** c / mp.factorial(c)
        p0 = mp.e ** (-lam)
        cm = sum(mp.e ** (-lam) * lam ** k / mp.factorial(k) for k in range(c + 1))
        return float(mp.sqrt(lam) * (2 * pm - p0) + (2 * cm - 1 - p0) / mp.sqrt(lam))


def mp_inv_moment_shift(y, dps=40):
    """E 1/(y+V) via the closed second difference of t log t, high precision."""
    with mp.workdps(dps):
        y = mp.mpf(y)
        def xlogx(t):
            return t * mp.log(t) if t > 0 else mp.mpf(0)
        return float(xlogx(y + 2) - 2 * xlogx(y + 1) + xlogx(y))


# ---------------------------------------------------------------------------
# Monte Carlo


def mc_H_n(n, x, trials, seed):
    """Monte Carlo estimate of the weighted inverse-moment sum

        phi(x) sqrt(n) E |S - nx| (1/(S + V) + 1/(n - S + V')),

    S binomial(n, x), V and V' independent sums of two uniforms.
    Returns (estimate, standard error)."""
    rng = np.random.default_rng(seed)
    s = rng.binomial(n, x, size=trials).astype(float)
    v1 = rng.random(trials) + rng.random(trials)
    v2 = rng.random(trials) + rng.random(trials)
    vals = np.abs(s - n * x) * (1.0 / (s + v1) + 1.0 / (n - s + v2))
    c = math.sqrt(x * (1.0 - x)) * math.sqrt(n)
    return c * float(np.mean(vals)), c * float(np.std(vals, ddof=1)) / math.sqrt(trials)


# ---------------------------------------------------------------------------
# elementary recursions (re-derived, not imported)


def plain_alpha(k, theta):
    """k-fold iterate of t -> 1 - e^{-t} starting at theta, plain math."""
    v = float(theta)
    for _ in range(k):
        v = 1.0 - math.exp(-v)
    return v

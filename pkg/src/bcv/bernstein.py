"""Bernstein operator machinery.

Evaluation of B_n f, exact iteration of B_n on grid vectors, Krawtchouk
polynomials and their orthogonality under the binomial law, the two closed
representations of (B_n f)^(m), the Kantorovich representation through
Irwin-Hall smoothing, and exact absolute central moments of S_n(x)/n.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import QuadConfig
from .dist import BinomialLaw
from .quadrature import adaptive_simpson


class ConsistencyError(RuntimeError):
    """Two representations of the same quantity disagreed beyond tolerance."""


@dataclass(frozen=True)
class RealFn:
    """A real-valued function on [0,1]; the evaluator must accept numpy arrays."""
    evaluator: Callable
    label: str = "f"

    def __call__(self, y):
        return self.evaluator(y)


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Piecewise-linear interpolant with constant extension beyond the ends."""
    breakpoints: tuple
    values: tuple
    label: str = "piecewise-linear"

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.ndim != 1 or len(bp) < 2:
            raise ValueError("need at least two breakpoints")
        if len(bp) != len(self.values):
            raise ValueError("breakpoints and values must have equal length")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if bp[0] < 0.0 or bp[-1] > 1.0:
            raise ValueError("breakpoints must lie in [0,1]")

    def __call__(self, y):
        out = np.interp(y, self.breakpoints, self.values)
        return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class GridVector:
    """Values of a function at j/n, j = 0..n; the state B_n iterates on."""
    n: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.n + 1:
            raise ValueError(f"grid vector for n={self.n} needs {self.n + 1} values")


def phi(x):
    """The weight sqrt(x(1-x)), in [0, 1/2] and symmetric about 1/2."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("x must lie in [0,1]")
    out = np.sqrt(x * (1.0 - x))
    return out if out.ndim else float(out)


def grid_vector(f, n):
    vals = np.asarray(f(np.arange(n + 1) / n), dtype=float)
    return GridVector(n, vals)


def _apply_grid(gv, x):
    """B_n applied to the grid values, evaluated at a single x."""
    return float(BinomialLaw(gv.n, x).pmf_vector() @ gv.values)


def bernstein_apply(f, n, x):
    """B_n f(x) = sum_k f(k/n) C(n,k) x^k (1-x)^(n-k)."""
    return _apply_grid(grid_vector(f, n), x)


def bernstein_apply_many(f, n, xs):
    """B_n f on an array of points, sharing one grid evaluation of f."""
    gv = grid_vector(f, n)
    return np.array([_apply_grid(gv, float(x)) for x in np.asarray(xs, dtype=float)])


def _iteration_matrix(n):
    # row i holds the binomial(n, i/n) pmf, so M @ v evaluates B_n v on the grid
    return np.vstack([BinomialLaw(n, i / n).pmf_vector() for i in range(n + 1)])


def bernstein_iterate(f, n, k, x):
    """The k-th iterate B_n^k f at x, computed exactly on the (n+1)-point grid.

    B_n f depends on f only through its grid values, so each iteration is a
    single (n+1) x (n+1) stochastic-matrix product; cost O(k n^2).
    """
    if k < 1:
        raise ValueError("iterate count k must be >= 1")
    gv = grid_vector(f, n)
    if k > 1:
        M = _iteration_matrix(n)
        vals = gv.values
        for _ in range(k - 1):
            vals = M @ vals
        gv = GridVector(n, vals)
    return _apply_grid(gv, x)


def _gen_binom(z, j):
    """Generalized binomial coefficient C(z, j) for real (or array) z."""
    z = np.asarray(z, dtype=float)
    out = np.ones_like(z)
    for t in range(j):
        out = out * (z - t)
    out = out / math.factorial(j)
    return out if out.ndim else float(out)


def krawtchouk(n, m, x, y):
    """Krawtchouk polynomial K_m(x; y) for the binomial(n, x) law:

        K_m(x;y) = sum_j C(n-y, m-j) C(y, j) (-x)^(m-j) (1-x)^j,

    with generalized binomial coefficients, so y may be any real.
    """
    if not 0 <= m <= n:
        raise ValueError(f"m must lie in [0, n], got m={m}, n={n}")
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    for j in range(m + 1):
        out = out + (_gen_binom(n - y, m - j) * _gen_binom(y, j)
                     * (-x) ** (m - j) * (1.0 - x) ** j)
    return out if out.ndim else float(out)


def krawtchouk_k1(n, x, y):
    return np.asarray(y, dtype=float) - n * x


def krawtchouk_k2(n, x, y):
    d = np.asarray(y, dtype=float) - n * x
    return 0.5 * (d * d - (1.0 - 2.0 * x) * d - n * x * (1.0 - x))


def krawtchouk_orthogonality_check(n, x, r, m):
    """Return (E K_r K_m under binomial(n,x), C(n,m) phi^(2m)(x) delta_rm).

    Restricted to n <= 30: the brute-force expectation loses accuracy for
    larger n and every intended use is small.
    """
    if n > 30:
        raise ValueError("orthogonality check is restricted to n <= 30")
    if not (0 <= r <= n and 0 <= m <= n):
        raise ValueError("r and m must lie in [0, n]")
    k = np.arange(n + 1)
    p = BinomialLaw(n, x).pmf_vector()
    computed = float(np.sum(p * krawtchouk(n, r, x, k) * krawtchouk(n, m, x, k)))
    expected = math.comb(n, m) * phi(x) ** (2 * m) if r == m else 0.0
    return computed, expected


def falling_factorial(n, m):
    out = 1
    for t in range(m):
        out *= n - t
    return out


def forward_difference(phi_fn, h, m, y):
    """m-th forward difference at step h:

        sum_j C(m,j) (-1)^(m-j) phi_fn(y + h j).
    """
    if m < 0:
        raise ValueError("difference order m must be >= 0")
    if h < 0:
        raise ValueError("step h must be >= 0")
    return float(sum(math.comb(m, j) * (-1) ** (m - j) * phi_fn(y + h * j)
                     for j in range(m + 1)))


def bernstein_derivative(f, n, m, x, rel_tol=1e-9):
    """(B_n f)^(m)(x) computed two ways, returning the Krawtchouk form:

        (m!/phi^(2m)(x)) E f(S_n(x)/n) K_m(x; S_n(x))
      = (n)_m E Delta_{1/n}^m f(S_{n-m}(x)/n).

    Raises ConsistencyError if the two representations disagree beyond
    rel_tol; that signals a numerics bug, not a user error.  Both
    expectations can cancel far below the magnitude of their terms, and the
    log-space pmf carries small relative noise per term, so the disagreement
    is also measured against the absolute-sum envelopes of the two sums: a
    formula bug moves the result by orders of magnitude more than that.
    """
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, n], got m={m}, n={n}")
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0,1)")
    k = np.arange(n + 1)
    p = BinomialLaw(n, x).pmf_vector()
    fk = np.asarray(f(k / n), dtype=float)
    pref = math.factorial(m) / phi(x) ** (2 * m)
    terms = p * fk * krawtchouk(n, m, x, k)
    kraw = pref * float(np.sum(terms))
    kraw_env = pref * float(np.sum(np.abs(terms)))

    j = np.arange(n - m + 1)
    pj = BinomialLaw(n - m, x).pmf_vector() if m < n else np.array([1.0])
    # Delta_{1/n}^m f(j/n) for all j at once, reusing the grid values of f
    diff = np.zeros(n - m + 1)
    for l in range(m + 1):
        diff = diff + math.comb(m, l) * (-1) ** (m - l) * fk[j + l]
    fall = falling_factorial(n, m)
    fdiff = fall * float(np.sum(pj * diff))
    fdiff_env = fall * float(np.sum(pj * np.abs(diff)))

    scale = max(1.0, abs(kraw), abs(fdiff))
    floor = 1e-10 * (kraw_env + fdiff_env)
    if abs(kraw - fdiff) > rel_tol * scale + floor:
        raise ConsistencyError(
            f"derivative representations disagree: {kraw!r} vs {fdiff!r} "
            f"(n={n}, m={m}, x={x})")
    return kraw


def irwin_hall_density(m, t):
    """Density of U_1 + ... + U_m on [0, m], in closed form for m <= 3."""
    if m == 1:
        return 1.0 if 0.0 <= t <= 1.0 else 0.0
    if m == 2:
        return max(0.0, min(t, 2.0 - t))
    if m == 3:
        if t < 0.0 or t > 3.0:
            return 0.0
        if t <= 1.0:
            return 0.5 * t * t
        if t <= 2.0:
            return 0.5 * (-2.0 * t * t + 6.0 * t - 3.0)
        return 0.5 * (3.0 - t) ** 2
    raise ValueError("Irwin-Hall density implemented for m <= 3 only")


def kantorovich_check(f, f_deriv, n, m, x, quad=QuadConfig(abs_tol=1e-12)):
    """Return both sides of the smoothed-derivative representation

        (B_n f)^(m)(x) = ((n)_m / n^m) E f^(m)((S_{n-m}(x) + U_1+...+U_m)/n),

    the right side integrated against the exact Irwin-Hall density (m <= 3).
    f_deriv is the analytic m-th derivative of f.
    """
    if m not in (1, 2, 3):
        raise ValueError("kantorovich representation implemented for m in {1,2,3}")
    lhs = bernstein_derivative(f, n, m, x)
    j = np.arange(n - m + 1)
    pj = BinomialLaw(n - m, x).pmf_vector() if m < n else np.array([1.0])

    def integrand(t):
        return irwin_hall_density(m, t) * float(np.sum(pj * f_deriv((j + t) / n)))

    # integrate per unit interval: the density has kinks at the integers
    rhs = sum(adaptive_simpson(integrand, float(a), float(a + 1), quad) for a in range(m))
    rhs *= falling_factorial(n, m) / n ** m
    return lhs, rhs


def central_moment(n, x, k):
    """Exact absolute central moment E |S_n(x)/n - x|^k (finite sum)."""
    if k < 1:
        raise ValueError("moment order k must be >= 1")
    j = np.arange(n + 1)
    p = BinomialLaw(n, x).pmf_vector()
    return float(np.sum(p * np.abs(j / n - x) ** k))


def central_moment_closed(n, x, k):
    """Closed forms for the even central moments k in {2, 4, 6}."""
    p2 = x * (1.0 - x)
    if k == 2:
        return p2 / n
    if k == 4:
        return 3.0 * p2 ** 2 / n ** 2 + p2 * (1.0 - 6.0 * p2) / n ** 3
    if k == 6:
        return (p2 / n ** 5) * (15.0 * p2 ** 2 * n ** 2
                                + 5.0 * p2 * (5.0 - 26.0 * p2) * n
                                + 1.0 - 30.0 * p2 * (1.0 - 2.0 * x) ** 2)
    raise ValueError("closed forms available for k in {2, 4, 6}")

"""Discrete laws and inverse moments.

Binomial and Poisson laws with log-space pmfs, the triangular law of
V = U1 + U2 on [0, 2], the beta(1, m) laws, total variation distance, the
binomial-Poisson total variation bound, the Stirling bound on the binomial
mode, and the closed form E 1/(y+V) = (y+2)log(y+2) - 2(y+1)log(y+1) + y log y.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlogy

LOG4 = math.log(4.0)
LOG2716 = math.log(27.0 / 16.0)


@dataclass(frozen=True)
class BinomialLaw:
    """Law of the number of successes in n trials with probability x."""
    n: int
    x: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"success probability must lie in [0,1], got {self.x}")

    @property
    def mean(self):
        return self.n * self.x

    def support(self):
        return np.arange(self.n + 1)

    def logpmf(self, k):
        k = np.asarray(k, dtype=float)
        n, x = self.n, self.x
        out = np.full(k.shape, -np.inf)
        valid = (k >= 0) & (k <= n) & (k == np.floor(k))
        if x == 0.0:
            out[valid & (k == 0)] = 0.0
        elif x == 1.0:
            out[valid & (k == n)] = 0.0
        else:
            kv = k[valid]
            out[valid] = (gammaln(n + 1) - gammaln(kv + 1) - gammaln(n - kv + 1)
                          + kv * math.log(x) + (n - kv) * math.log1p(-x))
        return out if out.ndim else float(out)

    def pmf(self, k):
        return np.exp(self.logpmf(k))

    def pmf_vector(self):
        """All n+1 probabilities; sums to 1 up to rounding."""
        return np.exp(self.logpmf(self.support()))

    def cdf(self, k):
        k = np.asarray(k)
        p = self.pmf_vector()
        c = np.concatenate([[0.0], np.cumsum(p)])
        idx = np.clip(np.floor(np.asarray(k, dtype=float)).astype(int) + 1, 0, self.n + 1)
        out = np.minimum(c[idx], 1.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class PoissonLaw:
    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"Poisson mean must be >= 0, got {self.lam}")

    @property
    def mean(self):
        return self.lam

    def truncation(self):
        """Support cutoff k* with tail mass below 1e-15 for lam <= 100."""
        return math.ceil(self.lam) + math.ceil(40.0 * math.sqrt(self.lam + 1.0)) + 40

    def support(self):
        return np.arange(self.truncation() + 1)

    def logpmf(self, k):
        k = np.asarray(k, dtype=float)
        out = np.full(k.shape, -np.inf)
        valid = (k >= 0) & (k == np.floor(k))
        if self.lam == 0.0:
            out[valid & (k == 0)] = 0.0
        else:
            kv = k[valid]
            out[valid] = kv * math.log(self.lam) - self.lam - gammaln(kv + 1)
        return out if out.ndim else float(out)

    def pmf(self, k):
        return np.exp(self.logpmf(k))

    def pmf_vector(self):
        return np.exp(self.logpmf(self.support()))

    def cdf(self, k):
        k = np.asarray(k)
        p = self.pmf_vector()
        c = np.concatenate([[0.0], np.cumsum(p)])
        idx = np.clip(np.floor(np.asarray(k, dtype=float)).astype(int) + 1, 0, len(p))
        out = np.minimum(c[idx], 1.0)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class TriangularV:
    """Law of V = U1 + U2: tent density min(v, 2-v) on [0, 2]."""

    mean = 1.0
    var = 1.0 / 6.0

    def density(self, v):
        v = np.asarray(v, dtype=float)
        out = np.maximum(0.0, np.minimum(v, 2.0 - v))
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class BetaOneM:
    """beta(1, m) law with density m(1-theta)^(m-1) on [0, 1]."""
    m: int

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")

    @property
    def mean(self):
        return 1.0 / (self.m + 1)

    @property
    def second_moment(self):
        return 2.0 / ((self.m + 1) * (self.m + 2))

    def density(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.where((theta >= 0) & (theta <= 1),
                       self.m * (1.0 - theta) ** (self.m - 1), 0.0)
        return out if out.ndim else float(out)


def law_pmf(law, k):
    """pmf of a BinomialLaw or PoissonLaw at k (0 outside the support)."""
    if np.any(np.asarray(k) < 0):
        raise ValueError("k must be nonnegative")
    return law.pmf(k)


def tv_distance(p, q):
    """Total variation distance (1/2) sum_k |p(k) - q(k)|.

    Both laws live on the nonnegative integers; the sum is truncated where
    both effective supports end (binomial at n, Poisson where the tail is
    below 1e-15), so the truncation error is < 1e-14.
    """
    hi = max(int(p.support()[-1]), int(q.support()[-1]))
    k = np.arange(hi + 1)
    return 0.5 * float(np.sum(np.abs(p.pmf(k) - q.pmf(k))))


def tv_binom_poisson_bound(n, lam):
    """Upper bound for d_TV(S_n(lam/n), N_lam), valid for n >= 10:

        (lam/n) (sqrt(2)/4 + (4/11)(3 lam + 4) lam^2 / n).
    """
    if n < 10:
        raise ValueError(f"the bound requires n >= 10, got n={n}")
    if lam < 0:
        raise ValueError("lam must be >= 0")
    return (lam / n) * (math.sqrt(2.0) / 4.0 + (4.0 / 11.0) * (3.0 * lam + 4.0) * lam ** 2 / n)


def stirling_mode_bound_check(n, m):
    """Check P(S_n(m/n) = m) <= (1/sqrt(2 pi)) sqrt(n/(m(n-m)))."""
    if not 1 <= m <= n - 1:
        raise ValueError(f"m must lie in [1, n-1], got m={m}, n={n}")
    pmf = BinomialLaw(n, m / n).pmf(m)
    bound = math.sqrt(n / (m * (n - m))) / math.sqrt(2.0 * math.pi)
    return bool(pmf <= bound)


def inv_moment_shift_V(y):
    """E 1/(y+V) for V = U1+U2, via the second difference of y log y.

    Equals (y+2)log(y+2) - 2(y+1)log(y+1) + y log y with 0 log 0 = 0.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError("y must be >= 0")
    out = xlogy(y + 2.0, y + 2.0) - 2.0 * xlogy(y + 1.0, y + 1.0) + xlogy(y, y)
    return out if out.ndim else float(out)


def sample(law, rng, size=None):
    """Draw from a BinomialLaw, TriangularV or BetaOneM with a numpy Generator."""
    if isinstance(law, BinomialLaw):
        return rng.binomial(law.n, law.x, size=size)
    if isinstance(law, TriangularV):
        return rng.random(size) + rng.random(size)
    if isinstance(law, BetaOneM):
        return rng.beta(1.0, law.m, size=size)
    raise TypeError(f"cannot sample from {type(law).__name__}")

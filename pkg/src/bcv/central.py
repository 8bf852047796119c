"""Central-region quantities for the converse estimate.

The key object is

    H_n(x) = phi(x) sqrt(n) ( E|S_n(x)-nx| / (S_n(x)+V)
                            + E|S_n(1-x)-n(1-x)| / (S_n(1-x)+V) ),

with S_n(x) binomial(n, x) and V = U_1 + U_2 independent uniform.  Everything
here feeds the claim sup_x H_n(x) <= 1 for large n: the inverse-moment
quantity I_n, its Poisson-limit profile nu, the envelope C(lambda), the
asymptotic bound on H_n, and the auxiliary kernel K(s) and inverse-beta
moment bound used downstream.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, pdtr

from .config import QuadConfig, SupSearchConfig
from .dist import (LOG4, LOG2716, BetaOneM, BinomialLaw, PoissonLaw,
                   inv_moment_shift_V)
from .quadrature import adaptive_simpson
from .search import golden_max


@dataclass(frozen=True)
class CentralParams:
    """Threshold and constant for the two-branch bound on I_n.

    The defaults satisfy sqrt(2/pi) + 1/sqrt(lambda0) <= c, which is what
    makes the large-lambda branch work; lambda0 this size renders the
    resulting finite-n bound vacuous at desk scale, and the code keeps it
    only for transparency.
    """
    lambda0: float = 223600.0
    c: float = 0.8

    def __post_init__(self):
        if not self.lambda0 > 5.0:
            raise ValueError("lambda0 must exceed 5")
        if math.sqrt(2.0 / math.pi) + 1.0 / math.sqrt(self.lambda0) > self.c:
            raise ValueError("need sqrt(2/pi) + 1/sqrt(lambda0) <= c")


@dataclass(frozen=True)
class SupSearchResult:
    sup_value: float
    arg: float
    scan_range: tuple
    tail_certificate: str


def I_n_brute(n, x):
    """I_n(x) = phi(x) sqrt(n) E|S_n(x) - nx|/(S_n(x) + 1), summed directly."""
    law = BinomialLaw(n, x)
    k = np.arange(n + 1)
    return float(math.sqrt(x * (1.0 - x)) * math.sqrt(n)
                 * np.sum(law.pmf_vector() * np.abs(k - n * x) / (k + 1.0)))


def I_n_closed(n, x):
    """Closed form of I_n through the cdf at ceil(nx):

        (n(1-x)^{3/2}/(n+1)) ( sqrt(lam) (2 P(S = ceil(lam)) - P(S = 0))
          + (1/sqrt(lam)) (2 P(S <= ceil(lam)) - 1 - P(S = 0)) ),

    lam = nx.  Matches I_n_brute to high relative accuracy.
    """
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0,1)")
    lam = n * x
    m = math.ceil(lam)
    law = BinomialLaw(n, x)
    pm = law.pmf(m)
    p0 = law.pmf(0)
    cm = float(np.sum(law.pmf_vector()[:m + 1]))
    return (n * (1.0 - x) ** 1.5 / (n + 1.0)) * (
        math.sqrt(lam) * (2.0 * pm - p0)
        + (2.0 * cm - 1.0 - p0) / math.sqrt(lam))


def nu(lam):
    """Poisson-limit profile of I_n:

        nu(lam) = sqrt(lam) (2 P(N = ceil(lam)) - P(N = 0))
                + (1/sqrt(lam)) (2 P(N <= ceil(lam)) - 1 - P(N = 0)),

    N Poisson(lam).  Jumps at integer lam through the ceiling."""
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    law = PoissonLaw(lam)
    m = math.ceil(lam)
    pm = law.pmf(m)
    p0 = law.pmf(0)
    cm = law.cdf(m)
    return (math.sqrt(lam) * (2.0 * pm - p0)
            + (2.0 * cm - 1.0 - p0) / math.sqrt(lam))


def _nu_vec(lam):
    # vectorized twin of nu() for scans; pdtr is the regularized Poisson cdf
    lam = np.asarray(lam, dtype=float)
    m = np.ceil(lam)
    pm = np.exp(m * np.log(lam) - lam - gammaln(m + 1.0))
    p0 = np.exp(-lam)
    cm = pdtr(m, lam)
    return np.sqrt(lam) * (2.0 * pm - p0) + (2.0 * cm - 1.0 - p0) / np.sqrt(lam)


def r_of_lambda(lam):
    """r(lam) = (log 4 - 2 log(27/16)) lam^{3/2} e^{-lam}; peaks at lam = 3/2."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam < 0.0):
        raise ValueError("lam must be >= 0")
    out = (LOG4 - 2.0 * LOG2716) * lam ** 1.5 * np.exp(-lam)
    return out if out.ndim else float(out)


def C_of_lambda(lam):
    """C(lam) = 2 log(27/16) nu(lam) + r(lam), extended by C(0) = 0."""
    if lam < 0.0:
        raise ValueError("lam must be >= 0")
    if lam == 0.0:
        return 0.0
    return 2.0 * LOG2716 * nu(lam) + r_of_lambda(lam)


def C_tilde(lam, c=0.8):
    """Flat-profile variant 2 c log(27/16) + r(lam)."""
    return 2.0 * c * LOG2716 + r_of_lambda(lam)


def _scan_lambdas(scan):
    lams = np.linspace(0.0, scan.lambda_max, scan.points + 1)[1:]
    ints = np.arange(1.0, math.floor(scan.lambda_max) + 1.0)
    # the ceiling jumps at integers; sample both sides and the integer itself
    extra = np.concatenate([ints - 1e-9, ints, ints + 1e-9])
    return np.unique(np.concatenate([lams, extra]))


def _tail_certificate(bound=0.87):
    lams = np.linspace(60.0, 200.0, 1001)
    nu_cap = math.sqrt(2.0 / math.pi) + 0.02
    if np.max(_nu_vec(lams)) > nu_cap:
        raise RuntimeError("tail envelope for nu failed on [60,200]")
    r60 = r_of_lambda(60.0)
    if not r60 < 1e-20:
        raise RuntimeError("tail bound for r failed at lambda=60")
    cert = ("for lambda >= 60: r(lambda) <= r(60) < 1e-20 (r decreasing there) "
            "and nu(lambda) <= sqrt(2/pi)+0.02 checked on [60,200], "
            f"so C(lambda) <= 2*log(27/16)*0.82 < {bound}")
    return cert


def _refine_on_piece(fn, lam, lams, tol):
    """Golden refinement around lam without crossing the ceiling's jumps."""
    i = int(np.searchsorted(lams, lam))
    lo = lams[max(i - 1, 0)]
    hi = lams[min(i + 1, len(lams) - 1)]
    m = math.ceil(lam) if lam > 0 else 1
    lo = max(lo, m - 1 + 1e-12)
    hi = min(hi, float(m))
    if hi <= lo:
        return lam, fn(lam)
    return golden_max(fn, lo, hi, tol)


def sup_C(scan=SupSearchConfig()):
    """sup over lambda of C(lambda), scanned on (0, lambda_max] with a
    certificate that the tail beyond 60 stays below the reported sup."""
    if scan.lambda_max < 60.0:
        raise ValueError("scan must cover (0, 60]")
    lams = _scan_lambdas(scan)
    vals = 2.0 * LOG2716 * _nu_vec(lams) + r_of_lambda(lams)
    i = int(np.argmax(vals))
    value, arg = float(vals[i]), float(lams[i])
    if scan.refine:
        arg2, refined = _refine_on_piece(C_of_lambda, arg, lams, scan.refine_tol)
        if abs(refined - value) > 1e-3:
            raise RuntimeError("scan too coarse: refinement moved the sup by "
                               f"{abs(refined - value):.2e}")
        if refined > value:
            value, arg = refined, arg2
    return SupSearchResult(value, arg, (0.0, scan.lambda_max), _tail_certificate())


def sup_C_tilde(scan=SupSearchConfig(), c=0.8):
    """sup over lambda of the flat-profile variant; the lambda-dependence is
    all in r, whose unique maximum sits at lambda = 3/2."""
    if scan.lambda_max < 60.0:
        raise ValueError("scan must cover (0, 60]")
    lams = _scan_lambdas(scan)
    vals = C_tilde(lams, c)
    i = int(np.argmax(vals))
    value, arg = float(vals[i]), float(lams[i])
    if scan.refine:
        arg2, refined = golden_max(lambda t: C_tilde(t, c),
                                   max(arg - 0.1, 1e-12), arg + 0.1, scan.refine_tol)
        if refined > value:
            value, arg = refined, arg2
    cert = ("r is unimodal with peak at lambda = 3/2 and r(60) < 1e-20, "
            "so the scanned maximum is global")
    return SupSearchResult(value, arg, (0.0, scan.lambda_max), cert)


def H_n_exact(n, x):
    """H_n(x) by exact summation over the binomial support.

    Uses E 1/(y + V) from inv_moment_shift_V; the mirrored term needs
    E 1/(n - S_n(x) + 2 - V), which equals E 1/(n - S_n(x) + V) because
    2 - V has the law of V.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    if not 0.0 < x <= 0.5:
        raise ValueError("x must lie in (0, 1/2]")
    k = np.arange(n + 1)
    p = BinomialLaw(n, x).pmf_vector()
    inv = inv_moment_shift_V(k)
    return float(math.sqrt(x * (1.0 - x)) * math.sqrt(n)
                 * np.sum(p * np.abs(k - n * x) * (inv + inv[::-1])))


def sup_H_n(n, points=4096, refine=True, refine_tol=1e-12):
    """sup of H_n over (0, 1/2] on a grid with golden refinement."""
    xs = np.linspace(0.0, 0.5, points + 1)[1:]
    vals = np.array([H_n_exact(n, float(x)) for x in xs])
    i = int(np.argmax(vals))
    value, arg = float(vals[i]), float(xs[i])
    if refine:
        lo = xs[max(i - 1, 0)]
        hi = xs[min(i + 1, len(xs) - 1)]
        arg2, v2 = golden_max(lambda t: H_n_exact(n, t), float(lo), float(hi), refine_tol)
        if v2 > value:
            value, arg = v2, arg2
    cert = "H_n(x) -> 0 as x -> 0+ (exact sum is continuous with H_n(0+) = 0)"
    return SupSearchResult(value, arg, (0.0, 0.5), cert)


def D_coeff(lambda0):
    """D(lambda0) = 3 sqrt(lambda0) (lambda0+1) (sqrt(2)/4 + (2/11)(3 lambda0 + 4) lambda0)."""
    if lambda0 <= 0.0:
        raise ValueError("lambda0 must be positive")
    return (3.0 * math.sqrt(lambda0) * (lambda0 + 1.0)
            * (math.sqrt(2.0) / 4.0 + (2.0 / 11.0) * (3.0 * lambda0 + 4.0) * lambda0))


def H_n_sup_bound(n, params=CentralParams()):
    """Asymptotic upper bound for sup_x H_n(x):

        0.99 + (2 D(lambda0) log(27/16)) / n + n^{3/2} / 2^{n+1/2}.

    Requires n >= 2 lambda0; with the default threshold this only bites for
    astronomically large n, so treat the value as an envelope, not an
    estimate.
    """
    if n < 2.0 * params.lambda0:
        raise ValueError(f"bound needs n >= 2*lambda0 = {2.0 * params.lambda0:g}")
    tail = math.exp(1.5 * math.log(n) - (n + 0.5) * LOG4 / 2.0)
    return 0.99 + 2.0 * D_coeff(params.lambda0) * LOG2716 / n + tail


def H_n_upper(n, x):
    """Pointwise upper bound for H_n by splitting at V's mean:

        2 log(27/16) (I_n(x) + I_n(1-x))
          + (log 4 - 2 log(27/16)) (nx)^{3/2} (1-x)^{n+1/2}
          + n^{3/2} / 2^{n+1/2}.
    """
    if not 0.0 < x <= 0.5:
        raise ValueError("x must lie in (0, 1/2]")
    mid = (LOG4 - 2.0 * LOG2716) * (n * x) ** 1.5 * math.exp((n + 0.5) * math.log1p(-x))
    tail = math.exp(1.5 * math.log(n) - (n + 0.5) * LOG4 / 2.0)
    return 2.0 * LOG2716 * (I_n_closed(n, x) + I_n_closed(n, 1.0 - x)) + mid + tail


def I_n_branch_check(n, x, lambda0, c=0.8):
    """Check the two-branch bound on I_n at one point:

        I_n(x) <= c (1-x)                          if nx >= lambda0,
        I_n(x) <= (1-x)(nu(nx) + D(lambda0)/n)     if nx <  lambda0.

    lambda0 and c are plain floats so small surrogate thresholds can be
    exercised; the caller owns the hypotheses that make each branch valid.
    """
    if n < 2.0 * lambda0:
        raise ValueError(f"branch bound needs n >= 2*lambda0 = {2.0 * lambda0:g}")
    lam = n * x
    v = I_n_closed(n, x)
    if lam >= lambda0:
        return v <= c * (1.0 - x)
    return v <= (1.0 - x) * (nu(lam) + D_coeff(lambda0) / n)


def K_func(s):
    """Decreasing kernel with limit sqrt(3):

        K(s) = sqrt(3+1/s) + (3/(8 sqrt(s)))(3+1/s)
             + (3/(16 s)) sqrt((3+1/s)(15+25/s+1/s^2))
             + (7/(16 s sqrt(s)))(15+25/s+1/s^2).
    """
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise ValueError("s must be positive")
    a = 3.0 + 1.0 / s
    b = 15.0 + 25.0 / s + 1.0 / s ** 2
    rs = np.sqrt(s)
    out = (np.sqrt(a) + 3.0 / (8.0 * rs) * a
           + 3.0 / (16.0 * s) * np.sqrt(a * b) + 7.0 / (16.0 * s * rs) * b)
    return out if out.ndim else float(out)


def phi_ratio_moment_sides(m, x, z, quad=QuadConfig()):
    """Both sides of the inverse-beta moment bound

        E (phi(x)/phi(x+(z-x) B))^m
          <= 1 + (m/(2(m+1))) |z-x|/phi^2
             + (m/(4(m+1))) |z-x|^2/phi^4 + ((m+4)/(4(m+1))) |z-x|^3/phi^6,

    B ~ Beta(1, m).  The left side is integrated adaptively; when z sits on
    the boundary the integrand stays bounded (for m = 2 it tends to 2x or
    2(1-x), for m >= 3 to zero).
    """
    if m not in (2, 3):
        raise ValueError("m must be 2 or 3")
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0,1)")
    if not 0.0 <= z <= 1.0:
        raise ValueError("z must lie in [0,1]")
    beta = BetaOneM(m)
    phim = (x * (1.0 - x)) ** (m / 2.0)

    def integrand(t):
        pt = x + (z - x) * t
        w = pt * (1.0 - pt)
        if w <= 0.0:
            # t = 1 with z on the boundary: finite limit of the integrand
            if m >= 3:
                return 0.0
            return 2.0 * (x if z >= 0.5 else 1.0 - x)
        return beta.density(t) * phim / w ** (m / 2.0)

    lhs = adaptive_simpson(integrand, 0.0, 1.0, quad)
    d = abs(z - x)
    p2 = x * (1.0 - x)
    rhs = (1.0 + m / (2.0 * (m + 1.0)) * d / p2
           + m / (4.0 * (m + 1.0)) * d ** 2 / p2 ** 2
           + (m + 4.0) / (4.0 * (m + 1.0)) * d ** 3 / p2 ** 3)
    return lhs, rhs


def phi_ratio_moment_check(m, x, z, quad=QuadConfig()):
    lhs, rhs = phi_ratio_moment_sides(m, x, z, quad)
    return lhs <= rhs + 10.0 * quad.abs_tol

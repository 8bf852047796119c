"""Golden-section maximization helpers for the sup searches."""

import numpy as np

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, tol=1e-13, max_iter=200):
    """Return (argmax, max) of f on [lo, hi] by golden-section search.

    Assumes f is unimodal on the bracket; on a multimodal bracket it still
    converges to a local maximum, so callers feed it brackets around coarse
    grid winners only.
    """
    if hi < lo:
        lo, hi = hi, lo
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def refine_grid_max(f, xs, values, top=8, tol=1e-13):
    """Refine the best cells of a 1-d grid scan.

    xs is the sorted grid, values = f(xs) already computed. Runs golden-section
    around each of the `top` best points (bracket: the two neighbouring grid
    points) and returns (argmax, max) never worse than the grid answer.
    """
    order = np.argsort(values)[::-1][:top]
    best_i = int(order[0])
    best = (float(xs[best_i]), float(values[best_i]))
    for i in order:
        lo = xs[max(int(i) - 1, 0)]
        hi = xs[min(int(i) + 1, len(xs) - 1)]
        if hi <= lo:
            continue
        x, v = golden_max(f, float(lo), float(hi), tol=tol)
        if v > best[1]:
            best = (x, v)
    return best

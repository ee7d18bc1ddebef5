"""Pure-Python (NumPy) kernels.

Reference implementation of the hot loops in ``_ckernels.pyx``. Both modules
expose the same functions with the same semantics; ``_backend`` picks one at
import time.
"""
import numpy as np

from .errors import ConvergenceError, NumericalError

EXPANSION = 2.0
# relative slack for the monotonicity assertion (pow may be off by an ulp)
MONOTONE_SLACK = 1e-12


def ordered_sum(values):
    """Sum in ascending index order (``np.sum`` uses pairwise summation)."""
    values = np.asarray(values)
    if values.size == 0:
        return values.dtype.type(0)
    return np.add.accumulate(values)[-1]


def modular_scaled(a, p, w, lam):
    """Return sum_j w_j (a_j/lam)^p_j with the essential-sup rule on p_j = inf."""
    a = np.asarray(a, dtype=float)
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    inf = np.isinf(p)
    if np.any(a[inf] > lam):
        return np.inf
    fin = ~inf
    return _finite_modular(a[fin], p[fin], w[fin], lam)


def _finite_modular(af, pf, wf, lam):
    # overflow to +inf is the right answer far below the norm
    with np.errstate(over="ignore"):
        return float(ordered_sum(wf * (af / lam) ** pf))


def luxemburg(a, p, w, tol, max_iter):
    """Luxemburg norm of ``a = |f|`` by bracketed bisection.

    Returns ``(value, iterations, bracket_width, saturated)``. ``value`` is
    the upper end of the final bracket, so the modular at ``value`` never
    exceeds one. ``saturated`` is set when the norm equals the supremum of
    ``a`` over the infinite-exponent atoms.
    """
    a = np.asarray(a, dtype=float)
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    if a.size == 0:
        return 0.0, 0, 0.0, False
    m = float(a.max())
    if m == 0.0:
        return 0.0, 0, 0.0, False

    inf = np.isinf(p)
    m_inf = float(a[inf].max()) if inf.any() else 0.0
    keep = (~inf) & (a > 0)
    af, pf, wf = a[keep], p[keep], w[keep]
    if af.size == 0:
        return m_inf, 0, 0.0, True
    if m_inf > 0.0 and _finite_modular(af, pf, wf, m_inf) <= 1.0:
        return m_inf, 0, 0.0, True

    iterations = 0
    lo = max(m / EXPANSION, m_inf)
    r_lo = _finite_modular(af, pf, wf, lo)
    while r_lo <= 1.0:
        if iterations >= max_iter:
            raise ConvergenceError("lower bracket expansion did not terminate",
                                   lo, np.inf, iterations)
        lo = max(lo / EXPANSION, m_inf)
        r_lo = _finite_modular(af, pf, wf, lo)
        iterations += 1

    mass = float(ordered_sum(w))
    hi = m * EXPANSION * max(1.0, mass)
    r_hi = _finite_modular(af, pf, wf, hi)
    while r_hi > 1.0:
        if iterations >= max_iter:
            raise ConvergenceError("upper bracket expansion did not terminate",
                                   lo, hi, iterations)
        hi *= EXPANSION
        r_hi = _finite_modular(af, pf, wf, hi)
        iterations += 1

    while hi - lo > tol * hi:
        if iterations >= max_iter:
            raise ConvergenceError(
                f"bisection did not converge in {max_iter} iterations",
                lo, hi, iterations)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        r = _finite_modular(af, pf, wf, mid)
        if r > r_lo * (1 + MONOTONE_SLACK) or r < r_hi * (1 - MONOTONE_SLACK):
            raise NumericalError("modular is not monotone in the scale",
                                 lo=lo, mid=mid, hi=hi,
                                 r_lo=r_lo, r_mid=r, r_hi=r_hi)
        if r > 1.0:
            lo, r_lo = mid, r
        else:
            hi, r_hi = mid, r
        iterations += 1
    return hi, iterations, hi - lo, False


def luxemburg_batch(a_rows, p, w, tol, max_iter):
    """Apply :func:`luxemburg` to every row of a 2-D array."""
    a_rows = np.asarray(a_rows, dtype=float)
    values = np.empty(a_rows.shape[0])
    for i, row in enumerate(a_rows):
        values[i] = luxemburg(row, p, w, tol, max_iter)[0]
    return values

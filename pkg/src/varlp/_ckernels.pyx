# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the modular and the Luxemburg bisection.

Same functions and semantics as ``_pykernels``. Summation runs in ascending
atom index order.
"""
import numpy as np

from libc.math cimport pow, INFINITY, isinf

from .errors import ConvergenceError, NumericalError

cdef double EXPANSION = 2.0
cdef double MONOTONE_SLACK = 1e-12

cdef enum Status:
    OK = 0
    LOWER_EXPANSION = 1
    UPPER_EXPANSION = 2
    NO_CONVERGENCE = 3
    NOT_MONOTONE = 4


def ordered_sum(values):
    values = np.asarray(values)
    if values.size == 0:
        return values.dtype.type(0)
    return np.add.accumulate(values)[-1]


cdef double _finite_modular(const double[::1] a, const double[::1] p,
                            const double[::1] w, double lam) noexcept nogil:
    cdef Py_ssize_t j
    cdef double total = 0.0
    for j in range(a.shape[0]):
        if isinf(p[j]) or a[j] == 0.0:
            continue
        total += w[j] * pow(a[j] / lam, p[j])
    return total


def modular_scaled(a, p, w, double lam):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t j
    for j in range(av.shape[0]):
        if isinf(pv[j]) and av[j] > lam:
            return INFINITY
    return _finite_modular(av, pv, wv, lam)


cdef struct BisectState:
    double lo
    double hi
    double r_lo
    double r_hi
    double r_mid
    double mid
    int iterations
    int saturated


cdef Status _luxemburg(const double[::1] a, const double[::1] p,
                       const double[::1] w, double tol, int max_iter,
                       BisectState* st) noexcept nogil:
    cdef Py_ssize_t j, n = a.shape[0]
    cdef double m = 0.0, m_inf = 0.0, mass = 0.0, mid, r
    cdef bint has_finite = False

    st.iterations = 0
    st.saturated = 0
    st.lo = 0.0
    st.hi = 0.0
    for j in range(n):
        if a[j] > m:
            m = a[j]
        if isinf(p[j]):
            if a[j] > m_inf:
                m_inf = a[j]
        elif a[j] > 0.0:
            has_finite = True
        mass += w[j]
    if m == 0.0:
        return OK
    if not has_finite:
        st.lo = m_inf
        st.hi = m_inf
        st.saturated = 1
        return OK
    if m_inf > 0.0 and _finite_modular(a, p, w, m_inf) <= 1.0:
        st.lo = m_inf
        st.hi = m_inf
        st.saturated = 1
        return OK

    st.lo = m / EXPANSION
    if st.lo < m_inf:
        st.lo = m_inf
    st.r_lo = _finite_modular(a, p, w, st.lo)
    while st.r_lo <= 1.0:
        if st.iterations >= max_iter:
            st.hi = INFINITY
            return LOWER_EXPANSION
        st.lo = st.lo / EXPANSION
        if st.lo < m_inf:
            st.lo = m_inf
        st.r_lo = _finite_modular(a, p, w, st.lo)
        st.iterations += 1

    st.hi = m * EXPANSION * (mass if mass > 1.0 else 1.0)
    st.r_hi = _finite_modular(a, p, w, st.hi)
    while st.r_hi > 1.0:
        if st.iterations >= max_iter:
            return UPPER_EXPANSION
        st.hi *= EXPANSION
        st.r_hi = _finite_modular(a, p, w, st.hi)
        st.iterations += 1

    while st.hi - st.lo > tol * st.hi:
        if st.iterations >= max_iter:
            return NO_CONVERGENCE
        mid = 0.5 * (st.lo + st.hi)
        if not (st.lo < mid and mid < st.hi):
            break
        r = _finite_modular(a, p, w, mid)
        if r > st.r_lo * (1.0 + MONOTONE_SLACK) or r < st.r_hi * (1.0 - MONOTONE_SLACK):
            st.mid = mid
            st.r_mid = r
            return NOT_MONOTONE
        if r > 1.0:
            st.lo = mid
            st.r_lo = r
        else:
            st.hi = mid
            st.r_hi = r
        st.iterations += 1
    return OK


cdef object _raise(Status status, BisectState* st, int max_iter):
    if status == LOWER_EXPANSION:
        raise ConvergenceError("lower bracket expansion did not terminate",
                               st.lo, st.hi, st.iterations)
    if status == UPPER_EXPANSION:
        raise ConvergenceError("upper bracket expansion did not terminate",
                               st.lo, st.hi, st.iterations)
    if status == NO_CONVERGENCE:
        raise ConvergenceError(
            f"bisection did not converge in {max_iter} iterations",
            st.lo, st.hi, st.iterations)
    raise NumericalError("modular is not monotone in the scale",
                         lo=st.lo, mid=st.mid, hi=st.hi, r_lo=st.r_lo,
                         r_mid=st.r_mid, r_hi=st.r_hi)


def luxemburg(a, p, w, double tol, int max_iter):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef BisectState st
    cdef Status status
    with nogil:
        status = _luxemburg(av, pv, wv, tol, max_iter, &st)
    if status != OK:
        _raise(status, &st, max_iter)
    return st.hi, st.iterations, st.hi - st.lo, bool(st.saturated)


def luxemburg_batch(a_rows, p, w, double tol, int max_iter):
    cdef const double[:, ::1] rows = np.ascontiguousarray(a_rows, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t i, n = rows.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef BisectState st
    cdef Status status = OK
    with nogil:
        for i in range(n):
            status = _luxemburg(rows[i], pv, wv, tol, max_iter, &st)
            if status != OK:
                break
            ov[i] = st.hi
    if status != OK:
        _raise(status, &st, max_iter)
    return out

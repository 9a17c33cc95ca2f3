# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled crossing kernel: event-driven x-sweep over segment intervals.

The arithmetic mirrors ``_kernels_py`` operation for operation (and the
build disables FP contraction), so both backends return bit-identical
rows; keep the two in lockstep when editing either.
"""

from libc.math cimport fabs, hypot

import numpy as np

cdef double PARALLEL_EPS = 1e-14


cdef void _test_pair(Py_ssize_t i, Py_ssize_t j,
                     double a1x, double a1y, double d1x, double d1y, double l1,
                     double a2x, double a2y, double d2x, double d2y, double l2,
                     double tol, list rows):
    cdef double rx = a2x - a1x
    cdef double ry = a2y - a1y
    cdef double denom = d1x * d2y - d1y * d2x
    cdef double cr1 = rx * d1y - ry * d1x
    cdef double cr2 = rx * d2y - ry * d2x
    cdef double s, t, sv, tv, px, py, t0, t1, lo, hi, ov0, ov1, ext
    if fabs(denom) <= PARALLEL_EPS * l1 * l2:
        if fabs(cr1) <= tol * l1:
            t0 = (rx * d1x + ry * d1y) / (l1 * l1)
            t1 = ((rx + d2x) * d1x + (ry + d2y) * d1y) / (l1 * l1)
            if t0 <= t1:
                lo = t0
                hi = t1
            else:
                lo = t1
                hi = t0
            ov0 = lo if lo > 0.0 else 0.0
            ov1 = hi if hi < 1.0 else 1.0
            ext = (ov1 - ov0) * l1
            if ext > tol:
                rows.append((<double> i, <double> j, 0.0, 0.0, 0.0, 0.0, 2.0))
            elif ext >= -tol:
                sv = 0.5 * (ov0 + ov1)
                if sv < 0.0:
                    sv = 0.0
                if sv > 1.0:
                    sv = 1.0
                px = a1x + sv * d1x
                py = a1y + sv * d1y
                tv = ((px - a2x) * d2x + (py - a2y) * d2y) / (l2 * l2)
                if tv < 0.0:
                    tv = 0.0
                if tv > 1.0:
                    tv = 1.0
                rows.append((<double> i, <double> j, sv, tv, px, py, 0.0))
        return
    s = cr2 / denom
    t = cr1 / denom
    if -tol / l1 <= s <= 1.0 + tol / l1 and -tol / l2 <= t <= 1.0 + tol / l2:
        sv = s
        if sv < 0.0:
            sv = 0.0
        if sv > 1.0:
            sv = 1.0
        tv = t
        if tv < 0.0:
            tv = 0.0
        if tv > 1.0:
            tv = 1.0
        rows.append((<double> i, <double> j, sv, tv,
                     a1x + sv * d1x, a1y + sv * d1y, 0.0))


cdef _frames(v):
    a = np.asarray(v[:-1], dtype=np.float64)
    b = np.asarray(v[1:], dtype=np.float64)
    d = b - a
    ln = np.hypot(d[:, 0], d[:, 1])
    xlo = np.minimum(a[:, 0], b[:, 0])
    xhi = np.maximum(a[:, 0], b[:, 0])
    # np.array copies: the input may be a read-only vertex buffer.
    return (np.array(a[:, 0]), np.array(a[:, 1]),
            np.array(d[:, 0]), np.array(d[:, 1]),
            ln, xlo, xhi)


def polyline_crossings(p, q, double tol):
    pf = _frames(np.asarray(p))
    qf = _frames(np.asarray(q))
    cdef double[::1] pax = pf[0], pay = pf[1], pdx = pf[2], pdy = pf[3]
    cdef double[::1] pln = pf[4], pxlo = pf[5], pxhi = pf[6]
    cdef double[::1] qax = qf[0], qay = qf[1], qdx = qf[2], qdy = qf[3]
    cdef double[::1] qln = qf[4], qxlo = qf[5], qxhi = qf[6]
    cdef Py_ssize_t n_p = pax.shape[0]
    cdef Py_ssize_t n_q = qax.shape[0]

    pord_arr = np.argsort(pf[5], kind="stable").astype(np.intp)
    qord_arr = np.argsort(qf[5], kind="stable").astype(np.intp)
    cdef Py_ssize_t[::1] pord = pord_arr
    cdef Py_ssize_t[::1] qord = qord_arr

    pact_arr = np.empty(n_p, dtype=np.intp)
    qact_arr = np.empty(n_q, dtype=np.intp)
    cdef Py_ssize_t[::1] pact = pact_arr
    cdef Py_ssize_t[::1] qact = qact_arr

    cdef list rows = []
    cdef Py_ssize_t ip = 0, iq = 0, na_p = 0, na_q = 0, k, m, w, seg
    cdef double xcur
    cdef bint take_p

    while ip < n_p or iq < n_q:
        take_p = iq >= n_q or (ip < n_p and pxlo[pord[ip]] <= qxlo[qord[iq]])
        if take_p:
            seg = pord[ip]
            ip += 1
            xcur = pxlo[seg]
            w = 0
            for k in range(na_q):
                m = qact[k]
                if qxhi[m] >= xcur - tol:
                    qact[w] = m
                    w += 1
            na_q = w
            for k in range(na_q):
                m = qact[k]
                _test_pair(seg, m,
                           pax[seg], pay[seg], pdx[seg], pdy[seg], pln[seg],
                           qax[m], qay[m], qdx[m], qdy[m], qln[m],
                           tol, rows)
            pact[na_p] = seg
            na_p += 1
        else:
            seg = qord[iq]
            iq += 1
            xcur = qxlo[seg]
            w = 0
            for k in range(na_p):
                m = pact[k]
                if pxhi[m] >= xcur - tol:
                    pact[w] = m
                    w += 1
            na_p = w
            for k in range(na_p):
                m = pact[k]
                _test_pair(m, seg,
                           pax[m], pay[m], pdx[m], pdy[m], pln[m],
                           qax[seg], qay[seg], qdx[seg], qdy[seg], qln[seg],
                           tol, rows)
            qact[na_q] = seg
            na_q += 1

    if not rows:
        return np.empty((0, 7))
    return np.array(rows)


def self_crossings(p, double tol):
    pf = _frames(np.asarray(p))
    cdef double[::1] pax = pf[0], pay = pf[1], pdx = pf[2], pdy = pf[3]
    cdef double[::1] pln = pf[4], pxlo = pf[5], pxhi = pf[6]
    cdef Py_ssize_t n_p = pax.shape[0]

    pord_arr = np.argsort(pf[5], kind="stable").astype(np.intp)
    cdef Py_ssize_t[::1] pord = pord_arr
    act_arr = np.empty(n_p, dtype=np.intp)
    cdef Py_ssize_t[::1] act = act_arr

    cdef list rows = []
    cdef Py_ssize_t ip = 0, na = 0, k, m, w, seg, i, j
    cdef double xcur

    while ip < n_p:
        seg = pord[ip]
        ip += 1
        xcur = pxlo[seg]
        w = 0
        for k in range(na):
            m = act[k]
            if pxhi[m] >= xcur - tol:
                act[w] = m
                w += 1
        na = w
        for k in range(na):
            m = act[k]
            if m - seg <= 1 and seg - m <= 1:
                continue
            if m < seg:
                i = m
                j = seg
            else:
                i = seg
                j = m
            _test_pair(i, j,
                       pax[i], pay[i], pdx[i], pdy[i], pln[i],
                       pax[j], pay[j], pdx[j], pdy[j], pln[j],
                       tol, rows)
        act[na] = seg
        na += 1

    if not rows:
        return np.empty((0, 7))
    return np.array(rows)

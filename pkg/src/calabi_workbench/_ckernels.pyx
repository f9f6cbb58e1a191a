# cython: cdivision=True
"""Compiled hot loops: Fourier-mode field evaluation and compensated sums."""
from libc.math cimport cos, sin, sqrt, M_PI
from libc.stdlib cimport malloc, free

import numpy as np


cdef void _powers(double c, double s, Py_ssize_t top, double* re, double* im) noexcept nogil:
    # re[k] + i im[k] = (c + i s)^k by repeated multiplication; error grows like k eps
    cdef Py_ssize_t k
    re[0] = 1.0
    im[0] = 0.0
    for k in range(1, top + 1):
        re[k] = re[k - 1] * c - im[k - 1] * s
        im[k] = re[k - 1] * s + im[k - 1] * c


def eval_modes(const double[::1] x, const double[::1] y,
               const long long[::1] m, const long long[::1] p,
               const double[::1] amp, const double[::1] phase,
               bint with_grad=True):
    """Sum of ``amp cos(2 pi (m x + p y / sqrt 3) + phase)`` and its gradient.

    Two sincos evaluations per point; every mode is assembled from integer
    powers of ``exp(2 pi i x)`` and ``exp(2 pi i y / sqrt 3)``.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t nm = m.shape[0]
    cdef Py_ssize_t i, j, mm, pp
    cdef Py_ssize_t mtop = 0, ptop = 0
    cdef double tp = 2.0 * M_PI
    cdef double ty = 2.0 * M_PI / sqrt(3.0)
    cdef double ar, ai, br, bi, er, ei, acc, gxa, gya, s
    cdef double last_y = 0.0
    cdef bint have_y = False

    for j in range(nm):
        mtop = max(mtop, abs(m[j]))
        ptop = max(ptop, abs(p[j]))

    val = np.zeros(n)
    gx = np.zeros(n) if with_grad else None
    gy = np.zeros(n) if with_grad else None
    cdef double[::1] v = val
    cdef double[::1] vx
    cdef double[::1] vy
    if with_grad:
        vx = gx
        vy = gy
    if nm == 0:
        return val, gx, gy

    cph = np.cos(np.asarray(phase))
    sph = np.sin(np.asarray(phase))
    cdef double[::1] cp = cph
    cdef double[::1] sp = sph
    cdef double* zr = <double*> malloc((mtop + 1) * sizeof(double))
    cdef double* zi = <double*> malloc((mtop + 1) * sizeof(double))
    cdef double* wr = <double*> malloc((ptop + 1) * sizeof(double))
    cdef double* wi = <double*> malloc((ptop + 1) * sizeof(double))
    if zr == NULL or zi == NULL or wr == NULL or wi == NULL:
        free(zr); free(zi); free(wr); free(wi)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                _powers(cos(tp * x[i]), sin(tp * x[i]), mtop, zr, zi)
                # rows of a grid share their height; reuse the table
                if not have_y or y[i] != last_y:
                    _powers(cos(ty * y[i]), sin(ty * y[i]), ptop, wr, wi)
                    last_y = y[i]
                    have_y = True
                acc = 0.0
                gxa = 0.0
                gya = 0.0
                for j in range(nm):
                    mm = m[j]
                    pp = p[j]
                    if mm >= 0:
                        ar = zr[mm]
                        ai = zi[mm]
                    else:
                        ar = zr[-mm]
                        ai = -zi[-mm]
                    if pp >= 0:
                        br = wr[pp]
                        bi = wi[pp]
                    else:
                        br = wr[-pp]
                        bi = -wi[-pp]
                    er = ar * br - ai * bi
                    ei = ar * bi + ai * br
                    # cos and sin of the full phase
                    acc = acc + amp[j] * (er * cp[j] - ei * sp[j])
                    if with_grad:
                        s = amp[j] * (er * sp[j] + ei * cp[j])
                        gxa = gxa - tp * mm * s
                        gya = gya - ty * pp * s
                v[i] = acc
                if with_grad:
                    vx[i] = gxa
                    vy[i] = gya
    finally:
        free(zr); free(zi); free(wr); free(wi)
    return val, gx, gy


def compensated_sum(const double[::1] a):
    """Neumaier summation in index order."""
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double s = 0.0, c = 0.0, t, ai
    with nogil:
        for i in range(n):
            ai = a[i]
            t = s + ai
            if abs(s) >= abs(ai):
                c = c + ((s - t) + ai)
            else:
                c = c + ((ai - t) + s)
            s = t
    return s + c

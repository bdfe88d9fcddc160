# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of trapgas._kernels._purepy (see that module for the math).

Scalar reductions run as tight C loops over the level arrays; the formulas
and stability branches match the pure-numpy backend term by term.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, expm1, fabs, hypot, log, log1p, tanh

cnp.import_array()

BACKEND = "compiled"

cdef double XBIG = 700.0


def count_bose(const double[::1] e, const double[::1] w, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef double x, acc = 0.0
    for i in range(n):
        x = beta * (e[i] - mu)
        if x < XBIG:
            acc += w[i] / expm1(x)
    return acc


def count_fermi(const double[::1] e, const double[::1] w, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef double x, acc = 0.0
    for i in range(n):
        x = beta * (e[i] - mu)
        acc += w[i] * 0.5 * (1.0 - tanh(0.5 * x))
    return acc


def energy_bose(const double[::1] e, const double[::1] w, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef double x, acc = 0.0
    for i in range(n):
        x = beta * (e[i] - mu)
        if x < XBIG:
            acc += w[i] * e[i] / expm1(x)
    return acc


def energy_fermi(const double[::1] e, const double[::1] w, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef double x, acc = 0.0
    for i in range(n):
        x = beta * (e[i] - mu)
        acc += w[i] * e[i] * 0.5 * (1.0 - tanh(0.5 * x))
    return acc


def occ_bose(const double[::1] e, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n)
    cdef double x
    for i in range(n):
        x = beta * (e[i] - mu)
        if x < XBIG:
            out[i] = 1.0 / expm1(x)
    return out


def occ_fermi(const double[::1] e, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    for i in range(n):
        out[i] = 0.5 * (1.0 - tanh(0.5 * beta * (e[i] - mu)))
    return out


def entropy_bose(const double[::1] e, const double[::1] w, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef double x, acc = 0.0
    for i in range(n):
        x = beta * (e[i] - mu)
        if x < XBIG:
            acc += w[i] * (x / expm1(x) - log1p(-exp(-x)))
    return acc


def entropy_fermi(const double[::1] e, const double[::1] w, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef double ax, t, acc = 0.0
    for i in range(n):
        ax = fabs(beta * (e[i] - mu))
        t = exp(-ax)
        acc += w[i] * (log1p(t) + ax * t / (1.0 + t))
    return acc


def log_xi_bose(const double[::1] e, const double[::1] w, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef double x, acc = 0.0
    for i in range(n):
        x = beta * (e[i] - mu)
        acc -= w[i] * log1p(-exp(-x))
    return acc


def log_xi_fermi(const double[::1] e, const double[::1] w, double beta, double mu):
    cdef Py_ssize_t i, n = e.shape[0]
    cdef double x, acc = 0.0
    for i in range(n):
        x = beta * (e[i] - mu)
        if x < 0.0:
            acc += w[i] * (-x + log1p(exp(x)))
        else:
            acc += w[i] * log1p(exp(-x))
    return acc


cdef inline double _bcs_n(double xi, double delta, double beta, double d_eps) nogil:
    cdef double ek, ratio
    if fabs(xi) <= d_eps:
        ek = hypot(xi, delta)
    else:
        ek = fabs(xi)
    if ek > 0.0:
        ratio = xi / ek
    else:
        ratio = 0.0
    return 0.5 * (1.0 - ratio * tanh(0.5 * beta * ek))


def bcs_occ(const double[::1] t, double mu, double delta, double beta, double d_eps):
    cdef Py_ssize_t i, n = t.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    for i in range(n):
        out[i] = _bcs_n(t[i] - mu, delta, beta, d_eps)
    return out


def bcs_count(const double[::1] t, const double[::1] w, double mu, double delta,
              double beta, double d_eps):
    cdef Py_ssize_t i, n = t.shape[0]
    cdef double acc = 0.0
    for i in range(n):
        acc += w[i] * _bcs_n(t[i] - mu, delta, beta, d_eps)
    return acc


def bcs_energy(const double[::1] t, const double[::1] w, double mu, double delta,
               double beta, double d_eps):
    cdef Py_ssize_t i, n = t.shape[0]
    cdef double acc = 0.0
    for i in range(n):
        acc += w[i] * t[i] * _bcs_n(t[i] - mu, delta, beta, d_eps)
    return acc


def bcs_gap_sum(const double[::1] t, const double[::1] w, double mu, double delta,
                double beta, double d_eps):
    cdef Py_ssize_t i, n = t.shape[0]
    cdef double xi, ek, acc = 0.0
    for i in range(n):
        xi = t[i] - mu
        if fabs(xi) <= d_eps:
            ek = hypot(xi, delta)
            if ek > 0.0:
                acc += w[i] * tanh(0.5 * beta * ek) / ek
            else:
                acc += w[i] * 0.5 * beta
    return acc


def bcs_entropy(const double[::1] t, const double[::1] w, double mu, double delta,
                double beta, double d_eps):
    cdef Py_ssize_t i, n = t.shape[0]
    cdef double xi, ax, tt, ek, th, nn, mm, s, acc = 0.0
    for i in range(n):
        xi = t[i] - mu
        if delta > 0.0 and fabs(xi) <= d_eps:
            ek = hypot(xi, delta)
            th = (xi / ek) * tanh(0.5 * beta * ek)
            nn = 0.5 * (1.0 - th)
            mm = 0.5 * (1.0 + th)
            s = 0.0
            if nn > 0.0:
                s -= nn * log(nn)
            if mm > 0.0:
                s -= mm * log(mm)
            acc += w[i] * s
        else:
            ax = fabs(beta * xi)
            tt = exp(-ax)
            acc += w[i] * (log1p(tt) + ax * tt / (1.0 + tt))
    return acc

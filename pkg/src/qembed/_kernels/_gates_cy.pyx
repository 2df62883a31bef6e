# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate kernels: in-place updates of a complex128 statevector.

Same contract as _gates_py: big-endian indexing, qubit 0 is the most
significant bit (bit n-1-q of the flat index).
"""

from libc.math cimport cos, sin, sqrt


def rx(double complex[::1] state, int n, int q, double angle):
    cdef double c = cos(0.5 * angle)
    cdef double s = sin(0.5 * angle)
    cdef Py_ssize_t dim = 1 << n
    cdef Py_ssize_t mask = 1 << (n - 1 - q)
    cdef Py_ssize_t i, j
    cdef double complex a0, a1, ims = 1j * s
    for i in range(dim):
        if not (i & mask):
            j = i | mask
            a0 = state[i]
            a1 = state[j]
            state[i] = c * a0 - ims * a1
            state[j] = c * a1 - ims * a0


def ry(double complex[::1] state, int n, int q, double angle):
    cdef double c = cos(0.5 * angle)
    cdef double s = sin(0.5 * angle)
    cdef Py_ssize_t dim = 1 << n
    cdef Py_ssize_t mask = 1 << (n - 1 - q)
    cdef Py_ssize_t i, j
    cdef double complex a0, a1
    for i in range(dim):
        if not (i & mask):
            j = i | mask
            a0 = state[i]
            a1 = state[j]
            state[i] = c * a0 - s * a1
            state[j] = s * a0 + c * a1


def h(double complex[::1] state, int n, int q):
    cdef double inv = 1.0 / sqrt(2.0)
    cdef Py_ssize_t dim = 1 << n
    cdef Py_ssize_t mask = 1 << (n - 1 - q)
    cdef Py_ssize_t i, j
    cdef double complex a0, a1
    for i in range(dim):
        if not (i & mask):
            j = i | mask
            a0 = state[i]
            a1 = state[j]
            state[i] = inv * (a0 + a1)
            state[j] = inv * (a0 - a1)


def zz(double complex[::1] state, int n, int qa, int qb, double angle):
    cdef double complex eq = cos(0.5 * angle) - 1j * sin(0.5 * angle)
    cdef double complex ne = eq.conjugate()
    cdef Py_ssize_t dim = 1 << n
    cdef Py_ssize_t sa = n - 1 - qa
    cdef Py_ssize_t sb = n - 1 - qb
    cdef Py_ssize_t i
    for i in range(dim):
        if ((i >> sa) ^ (i >> sb)) & 1:
            state[i] = state[i] * ne
        else:
            state[i] = state[i] * eq


def cswap(double complex[::1] state, int n, int qc, int qa, int qb):
    cdef Py_ssize_t dim = 1 << n
    cdef Py_ssize_t mc = 1 << (n - 1 - qc)
    cdef Py_ssize_t ma = 1 << (n - 1 - qa)
    cdef Py_ssize_t mb = 1 << (n - 1 - qb)
    cdef Py_ssize_t i, j
    cdef double complex tmp
    for i in range(dim):
        if (i & mc) and not (i & ma) and (i & mb):
            j = (i | ma) & ~mb
            tmp = state[i]
            state[i] = state[j]
            state[j] = tmp

"""Pure-numpy gate kernels; drop-in fallback for the compiled extension.

Every function mutates a C-contiguous complex128 statevector of length
2**n in place.  Basis indices are big-endian: qubit 0 is the most
significant bit, so axis q of the [2]*n reshape addresses qubit q.
"""

import math

import numpy as np


def _axis_pair(state, n, q):
    # Length-1 slices keep writable views even when n == 1.
    view = state.reshape((2,) * n)
    lo = [slice(None)] * n
    hi = [slice(None)] * n
    lo[q], hi[q] = slice(0, 1), slice(1, 2)
    return view[tuple(lo)], view[tuple(hi)]


def rx(state, n, q, angle):
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    a0, a1 = _axis_pair(state, n, q)
    new0 = c * a0 - 1j * s * a1
    a1 *= c
    a1 -= 1j * s * a0
    a0[...] = new0


def ry(state, n, q, angle):
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    a0, a1 = _axis_pair(state, n, q)
    new0 = c * a0 - s * a1
    a1 *= c
    a1 += s * a0
    a0[...] = new0


def h(state, n, q):
    inv = 1.0 / math.sqrt(2.0)
    a0, a1 = _axis_pair(state, n, q)
    new0 = (a0 + a1) * inv
    a1 *= -inv
    a1 += inv * a0
    a0[...] = new0


def zz(state, n, qa, qb, angle):
    eq = complex(math.cos(0.5 * angle), -math.sin(0.5 * angle))
    view = state.reshape((2,) * n)
    idx = [slice(None)] * n
    for ba in (0, 1):
        for bb in (0, 1):
            idx[qa], idx[qb] = ba, bb
            view[tuple(idx)] *= eq if ba == bb else eq.conjugate()


def cswap(state, n, qc, qa, qb):
    view = state.reshape((2,) * n)
    i01 = [slice(None)] * n
    i01[qc], i01[qa], i01[qb] = 1, 0, 1
    i10 = [slice(None)] * n
    i10[qc], i10[qa], i10[qb] = 1, 1, 0
    tmp = np.copy(view[tuple(i01)])
    view[tuple(i01)] = view[tuple(i10)]
    view[tuple(i10)] = tmp

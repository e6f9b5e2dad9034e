# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cycle-stepped weight-stationary array; twin of ``_refsim_py``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


def simulate(int64_t sr, int64_t sc, int64_t t, int64_t ar, int64_t ac, int64_t delay):
    cdef int64_t cycles = 0, macs = 0, ifmap = 0, filt = 0, psum = 0, ofmap = 0
    cdef int64_t col0 = 0, row0, r, c, a, b, k, tau, written, p
    cdef bint first = True, readback, misaligned = False
    cdef int64_t n = ar * ac
    cdef int64_t *in_reg = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *ps_reg = <int64_t *> malloc(n * sizeof(int64_t))
    if in_reg == NULL or ps_reg == NULL:
        free(in_reg)
        free(ps_reg)
        raise MemoryError()
    try:
        with nogil:
            while col0 < sc:
                c = ac if sc - col0 > ac else sc - col0
                row0 = 0
                while row0 < sr:
                    r = ar if sr - row0 > ar else sr - row0
                    if not first:
                        cycles += delay
                    first = False
                    readback = row0 > 0

                    for p in range(r):
                        filt += c
                        cycles += 1

                    for p in range(r * c):
                        in_reg[p] = -1
                        ps_reg[p] = -1
                    written = 0
                    tau = 0
                    while written < t * c:
                        a = r - 1
                        while a >= 0:
                            b = c - 1
                            while b >= 0:
                                if b > 0:
                                    k = in_reg[a * c + b - 1]
                                else:
                                    k = tau - a
                                    if k >= 0 and k < t:
                                        ifmap += 1
                                    else:
                                        k = -1
                                in_reg[a * c + b] = k
                                if k == -1:
                                    ps_reg[a * c + b] = -1
                                else:
                                    if a == 0:
                                        if readback:
                                            psum += 1
                                    elif ps_reg[(a - 1) * c + b] != k:
                                        misaligned = True
                                    macs += 1
                                    ps_reg[a * c + b] = k
                                    if a == r - 1:
                                        ofmap += 1
                                        written += 1
                                b -= 1
                            a -= 1
                        tau += 1
                        cycles += 1
                    row0 += r
                col0 += c
    finally:
        free(in_reg)
        free(ps_reg)
    if misaligned:
        raise RuntimeError("partial sum misaligned with input vector")
    return cycles, macs, ifmap, filt, psum, ofmap

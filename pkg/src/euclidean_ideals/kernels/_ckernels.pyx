# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_fallback`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, ceil, floor

cnp.import_array()

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"


class NodeLimitExceeded(RuntimeError):
    pass


def enumerate_ellipsoid(q, double bound, long max_nodes):
    cdef int n = len(q)
    cdef double[:, :] Q = np.ascontiguousarray(np.array(q, dtype=np.float64))
    cdef long[:] x = np.zeros(n, dtype=np.int64)
    cdef long[:] hi = np.zeros(n, dtype=np.int64)
    cdef double[:] centers = np.zeros(n, dtype=np.float64)
    cdef double[:] partial = np.zeros(n + 1, dtype=np.float64)
    cdef long nodes = 0
    cdef int i = n - 1
    cdef int j
    cdef double c, room, r, d
    cdef double slack = bound * (1 + 1e-12) + 1e-12
    cdef bint pos
    out = []

    # top level
    c = 0.0
    room = bound / Q[i, i]
    if room < 0:
        return out
    r = sqrt(room)
    centers[i] = c
    x[i] = <long>max(ceil(c - r - 1e-12), 0.0) - 1
    hi[i] = <long>floor(c + r + 1e-12)
    while True:
        x[i] += 1
        if x[i] > hi[i]:
            i += 1
            if i == n:
                break
            continue
        nodes += 1
        if nodes > max_nodes:
            raise NodeLimitExceeded(f"more than {max_nodes} enumeration nodes")
        d = x[i] - centers[i]
        partial[i] = partial[i + 1] + Q[i, i] * d * d
        if partial[i] > slack:
            continue
        if i == 0:
            pos = False
            for j in range(n - 1, -1, -1):
                if x[j] != 0:
                    pos = x[j] > 0
                    break
            if pos:
                out.append(tuple([x[j] for j in range(n)]))
            continue
        i -= 1
        c = 0.0
        for j in range(i + 1, n):
            c -= Q[i, j] * x[j]
        centers[i] = c
        room = (bound - partial[i + 1]) / Q[i, i]
        if room < 0:
            i += 1
            continue
        r = sqrt(room)
        x[i] = <long>ceil(c - r - 1e-12) - 1
        hi[i] = <long>floor(c + r + 1e-12)
    return out


def sieve_segment(long lo, long hi, base_primes):
    cdef long size = hi - lo
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] flags = np.ones(size, dtype=np.uint8)
    cdef long p, first, k, v
    for v in range(lo, min(hi, 2)):
        flags[v - lo] = 0
    for bp in base_primes:
        p = bp
        if p * p >= hi:
            break
        first = (lo + p - 1) // p * p
        if first < p * p:
            first = p * p
        k = first - lo
        while k < size:
            flags[k] = 0
            k += p
    return flags.view(np.bool_)


def progression_primes(long lo, long hi, long residue, long modulus, base_primes):
    flags = sieve_segment(lo, hi, base_primes)
    cdef long first = lo + ((residue - lo) % modulus + modulus) % modulus
    idx = np.arange(first - lo, hi - lo, modulus)
    return (idx[flags[idx]] + lo).astype(np.int64)


cdef unsigned long long _powmod(unsigned long long b, unsigned long long e, unsigned long long m):
    cdef unsigned long long r = 1 % m
    b %= m
    while e:
        if e & 1:
            r = <unsigned long long>((<u128>r * b) % m)
        b = <unsigned long long>((<u128>b * b) % m)
        e >>= 1
    return r


def power_orders_ok(bases, exps, long long modulus):
    cdef unsigned long long m = modulus
    cdef unsigned long long b
    out = []
    for base in bases:
        b = (<long long>base) % modulus
        ok = True
        for e in exps:
            if _powmod(b, <unsigned long long>e, m) == 1:
                ok = False
                break
        out.append(ok)
    return out

"""Pure-Python implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``EUCLIDEAN_IDEALS_PURE=1`` is set.
"""

from __future__ import annotations

import math

import numpy as np


class NodeLimitExceeded(RuntimeError):
    pass


def enumerate_ellipsoid(q, bound: float, max_nodes: int) -> list[tuple[int, ...]]:
    """Integer x != 0 with sum_i q[i][i] * (x_i + sum_{j>i} q[i][j] x_j)^2 <= bound.

    ``q`` is the Fincke-Pohst form of a positive definite quadratic form
    (diagonal holds the squared Gram-Schmidt norms, strict upper triangle
    the mu coefficients).  Returns one vector per +-pair: the one whose
    last nonzero coordinate is positive.
    """
    n = len(q)
    x = [0] * n
    centers = [0.0] * n
    partial = [0.0] * (n + 1)  # partial[i]: contribution of levels > i
    out = []
    nodes = 0
    i = n - 1

    def center(i):
        return -sum(q[i][j] * x[j] for j in range(i + 1, n))

    def start(i):
        c = center(i)
        centers[i] = c
        room = (bound - partial[i + 1]) / q[i][i]
        if room < 0:
            return None
        r = math.sqrt(room)
        return math.ceil(c - r - 1e-12), math.floor(c + r + 1e-12)

    limits = [None] * n
    limits[i] = start(i)
    if limits[i] is None:
        return out
    # top level only needs the non-negative half (sign symmetry)
    lo, hi = limits[i]
    limits[i] = (max(lo, 0), hi)
    x[i] = limits[i][0] - 1
    while True:
        x[i] += 1
        if limits[i] is None or x[i] > limits[i][1]:
            i += 1
            if i == n:
                break
            continue
        nodes += 1
        if nodes > max_nodes:
            raise NodeLimitExceeded(f"more than {max_nodes} enumeration nodes")
        d = x[i] - centers[i]
        partial[i] = partial[i + 1] + q[i][i] * d * d
        if partial[i] > bound * (1 + 1e-12) + 1e-12:
            continue
        if i == 0:
            if any(x):
                last = next(v for v in reversed(x) if v)
                if last > 0:
                    out.append(tuple(x))
            continue
        i -= 1
        limits[i] = start(i)
        if limits[i] is None:
            i += 1
            continue
        x[i] = limits[i][0] - 1
    return out


def sieve_segment(lo: int, hi: int, base_primes) -> np.ndarray:
    """Boolean primality flags for the integers in [lo, hi)."""
    size = hi - lo
    flags = np.ones(size, dtype=bool)
    for v in range(lo, min(hi, 2)):
        flags[v - lo] = False
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        first = max(p * p, (lo + p - 1) // p * p)
        flags[first - lo :: p] = False
    return flags


def progression_primes(lo: int, hi: int, residue: int, modulus: int, base_primes) -> np.ndarray:
    """Primes p in [lo, hi) with p = residue (mod modulus)."""
    flags = sieve_segment(lo, hi, base_primes)
    first = lo + (residue - lo) % modulus
    idx = np.arange(first - lo, hi - lo, modulus)
    return (idx[flags[idx]] + lo).astype(np.int64)


def power_orders_ok(bases, exps, modulus: int) -> list[bool]:
    """For each base b: b^e != 1 (mod modulus) for every e in exps."""
    return [all(pow(int(b), int(e), modulus) != 1 for e in exps) for b in bases]

"""Maximal orders of totally real fields given by a monic polynomial.

Elements are integer coordinate vectors over the integral basis.  The
basis is stored as ``(1/denominator) * numerators`` in power-basis
coordinates.  Ideals are integral and kept in row Hermite form over the
integral basis, so equal ideals compare equal as matrices.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import mpmath
from mpmath import iv

from . import kernels
from . import linalg as L
from . import polynomial as P
from .zmod import factorize


class ReducibleError(ValueError):
    pass


class EnumerationLimit(RuntimeError):
    """Short-vector enumeration hit its node cap."""


DEFAULT_MAX_NODES = 2_000_000


def _power_sums(f, count):
    """Newton power sums s_k = sum of k-th powers of the roots, k < count."""
    n = len(f) - 1
    a = [Fraction(c, f[-1]) for c in f]  # monic normalization
    s = [Fraction(n)]
    for k in range(1, count):
        total = Fraction(0)
        for i in range(1, min(k, n) + 1):
            coeff = a[n - i]
            if i < k:
                total -= coeff * s[k - i]
            else:
                total -= coeff * k
        s.append(total)
    return s


class MaximalOrder:
    """Ring of integers of Q[x]/(poly) together with its arithmetic."""

    def __init__(self, poly, numerators, denominator):
        self.poly = tuple(int(c) for c in poly)
        self.n = len(self.poly) - 1
        self.numerators = [list(map(int, r)) for r in numerators]
        self.denominator = int(denominator)
        n = self.n
        self._basis_q = [[Fraction(c, self.denominator) for c in row] for row in self.numerators]
        self._basis_inv = L.inverse(self._basis_q)
        # structure constants
        table = []
        for i in range(n):
            row = []
            for j in range(n):
                prod = self._mul_power(self._basis_q[i], self._basis_q[j])
                coords = L.vec_mat(prod, self._basis_inv)
                if any(c.denominator != 1 for c in coords):
                    raise ArithmeticError("basis is not closed under multiplication")
                row.append([int(c) for c in coords])
            table.append(row)
        self.table = table
        s = _power_sums(list(self.poly), n)
        self.basis_traces = []
        for row in self._basis_q:
            t = sum(c * s[k] for k, c in enumerate(row))
            assert t.denominator == 1
            self.basis_traces.append(int(t))
        self.trace_form = [
            [sum(c * t for c, t in zip(table[i][j], self.basis_traces)) for j in range(n)] for i in range(n)
        ]
        self.discriminant = int(L.det(self.trace_form))
        self.one = tuple(int(c) for c in self.from_power_basis([1] + [0] * (n - 1)))
        self.theta = tuple(int(c) for c in self.from_power_basis([0, 1] + [0] * (n - 2)))

    # ------------------------------------------------------------------ basics

    @property
    def degree(self) -> int:
        return self.n

    @cached_property
    def index(self) -> int:
        """[O : Z[theta]]."""
        d = P.discriminant(list(self.poly))
        q, r = divmod(d, self.discriminant)
        k = math.isqrt(q)
        assert r == 0 and k * k == q
        return k

    def _mul_power(self, a, b):
        prod = P.mul(a, b)
        _, r = P.divmod_q(prod, list(self.poly))
        r = list(r) + [Fraction(0)] * (self.n - len(r))
        return r

    def to_power_basis(self, x) -> list[Fraction]:
        return L.vec_mat(list(x), self._basis_q)

    def from_power_basis(self, v) -> list[Fraction]:
        v = [Fraction(c) for c in v] + [Fraction(0)] * (self.n - len(v))
        return L.vec_mat(v, self._basis_inv)

    def element(self, coords) -> OrderElement:
        return OrderElement(self, tuple(int(c) for c in coords))

    def mul(self, a, b) -> tuple[int, ...]:
        n = self.n
        out = [0] * n
        t = self.table
        for i in range(n):
            ai = a[i]
            if not ai:
                continue
            for j in range(n):
                c = ai * b[j]
                if c:
                    row = t[i][j]
                    for k in range(n):
                        out[k] += c * row[k]
        return tuple(out)

    def mul_matrix(self, a):
        """Rows: coordinates of a * w_i."""
        n = self.n
        return [self.mul(a, tuple(int(i == j) for j in range(n))) for i in range(n)]

    def norm(self, a) -> int:
        return L.int_det(self.mul_matrix(a))

    def trace(self, a) -> int:
        return sum(c * t for c, t in zip(a, self.basis_traces))

    def t2(self, a) -> int:
        """Sum of squares of the real embeddings, exactly: Tr(a^2)."""
        g = self.trace_form
        n = self.n
        return sum(a[i] * g[i][j] * a[j] for i in range(n) for j in range(n))

    def power(self, a, e: int):
        if e < 0:
            a = self.inverse(a)
            e = -e
            if any(Fraction(c).denominator != 1 for c in a):
                raise ArithmeticError("negative power of a non-unit")
            a = tuple(int(c) for c in a)
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inverse(self, a) -> list[Fraction]:
        """Coordinates of 1/a (rational in general)."""
        return L.vec_mat(list(self.one), L.inverse(self.mul_matrix(a)))

    def is_integral_coords(self, v) -> bool:
        return all(Fraction(c).denominator == 1 for c in v)

    def divide(self, a, b):
        """a / b as rational coordinates."""
        inv = L.inverse(self.mul_matrix(b))
        return L.vec_mat(list(a), inv)

    # --------------------------------------------------------------- embeddings

    @cached_property
    def _roots_mp(self):
        with mpmath.workprec(256):
            return [+x for _, _, x in self.root_intervals]

    @cached_property
    def root_intervals(self):
        return root_intervals(list(self.poly), 256)

    def root_intervals_at(self, prec: int):
        if prec <= 256:
            return self.root_intervals
        cache = self.__dict__.setdefault("_root_cache", {})
        if prec not in cache:
            cache[prec] = root_intervals(list(self.poly), prec)
        return cache[prec]

    def embed_interval(self, a, prec: int = 256):
        """Certified interval images of a under the real embeddings."""
        pb = self.to_power_basis(a)
        out = []
        old, iv.prec = iv.prec, max(prec, 256)
        try:
            for lo, hi, _ in self.root_intervals_at(prec):
                r = iv.mpf([lo, hi])
                acc = iv.mpf(0)
                for c in reversed(pb):
                    acc = acc * r + iv.mpf(c.numerator) / c.denominator
                out.append(acc)
        finally:
            iv.prec = old
        return out

    def real_embeddings(self, prec: int = 256):
        """Certified real roots of the defining polynomial (all of them)."""
        if prec <= 256:
            return self._roots_mp
        return real_roots(list(self.poly), prec)

    @cached_property
    def embedding_matrix_mp(self):
        """E[i][k] = sigma_k(w_i) at 256 bits."""
        with mpmath.workprec(256):
            roots = self._roots_mp
            return [
                [sum(mpmath.mpf(c.numerator) / c.denominator * r**k for k, c in enumerate(row)) for r in roots]
                for row in self._basis_q
            ]

    @cached_property
    def embedding_matrix(self):
        return [[float(x) for x in row] for row in self.embedding_matrix_mp]

    def embed(self, a, prec: int | None = None):
        """The n real images of a (mpf at 256 bits, or at ``prec`` bits)."""
        if prec is not None and prec > 256:
            roots = self.real_embeddings(prec)
            with mpmath.workprec(prec):
                pb = self.to_power_basis(a)
                return [sum(mpmath.mpf(c.numerator) / c.denominator * r**k for k, c in enumerate(pb)) for r in roots]
        E = self.embedding_matrix_mp
        with mpmath.workprec(256):
            return [sum(a[i] * E[i][k] for i in range(self.n) if a[i]) for k in range(self.n)]

    def embed_float(self, a):
        E = self.embedding_matrix
        return [sum(a[i] * E[i][k] for i in range(self.n)) for k in range(self.n)]

    def log_embedding(self, a, prec: int = 256):
        with mpmath.workprec(prec):
            return [mpmath.log(abs(x)) for x in self.embed(a)]

    def coords_from_embedding(self, values):
        """Round an embedding vector back to integer coordinates (or None)."""
        with mpmath.workprec(256):
            E = mpmath.matrix(self.embedding_matrix_mp)
            x = mpmath.lu_solve(E.T, mpmath.matrix(values))
            coords = [int(mpmath.nint(c)) for c in x]
            if max(abs(c - r) for c, r in zip(x, coords)) > mpmath.mpf(2) ** -40:
                return None
        return tuple(coords)

    # -------------------------------------------------------------- ideals

    def ideal(self, rows, modulus: int | None = None) -> Ideal:
        """Ideal generated (as a Z-module) by the given coordinate rows."""
        n = self.n
        if modulus:
            h = L.hnf_mod(rows, n, modulus)
        else:
            h = L.hnf(rows, n)
        if len(h) != n:
            raise ValueError("generators do not span a full-rank ideal")
        return Ideal(self, tuple(tuple(r) for r in h))

    def unit_ideal(self) -> Ideal:
        return Ideal(self, tuple(tuple(int(i == j) for j in range(self.n)) for i in range(self.n)))

    def principal_ideal(self, a) -> Ideal:
        nm = abs(self.norm(a))
        if nm == 0:
            raise ZeroDivisionError("zero element")
        return self.ideal(self.mul_matrix(a), modulus=nm)

    def ideal_from_generators(self, gens, modulus: int | None = None) -> Ideal:
        rows = []
        for g in gens:
            if isinstance(g, int):
                g = tuple(g * c for c in self.one)
            rows += self.mul_matrix(g)
        return self.ideal(rows, modulus=modulus)

    # ---------------------------------------------------------- prime splitting

    def factor_rational_prime(self, q: int) -> list[PrimeIdeal]:
        cache = self.__dict__.setdefault("_prime_cache", {})
        if q not in cache:
            if self.index % q:
                cache[q] = self._kummer_dedekind(q)
            else:
                cache[q] = self._split_general(q)
            total = sum(p.e * p.f for p in cache[q])
            assert total == self.n, (q, total)
        return cache[q]

    def _kummer_dedekind(self, q: int) -> list[PrimeIdeal]:
        out = []
        for g, e in P.factor_mod(list(self.poly), q):
            # g(theta) in integral-basis coordinates
            pb = list(g) + [0] * (self.n - len(g))
            if len(g) > self.n:
                pb = P.rem_mod(g, list(self.poly), q)
                pb = list(pb) + [0] * (self.n - len(pb))
            gen = tuple(int(c) for c in self.from_power_basis(pb))
            ideal = self.ideal_from_generators([q, gen], modulus=q)
            out.append(PrimeIdeal(ideal, q, gen, e, len(g) - 1))
        return _sorted_primes(out)

    def _split_general(self, q: int) -> list[PrimeIdeal]:
        """Maximal ideals of O/qO by refining zero sets with Berlekamp elements."""
        n = self.n
        tq = [[[c % q for c in self.table[i][j]] for j in range(n)] for i in range(n)]
        one = [c % q for c in self.one]
        basis = [[int(i == j) for j in range(n)] for i in range(n)]

        def mulq(a, b):
            out = [0] * n
            for i in range(n):
                if a[i]:
                    for j in range(n):
                        c = a[i] * b[j]
                        if c:
                            row = tq[i][j]
                            for k in range(n):
                                out[k] += c * row[k]
            return [x % q for x in out]

        def powq(a, e):
            r = one
            while e:
                if e & 1:
                    r = mulq(r, a)
                a = mulq(a, a)
                e >>= 1
            return r

        k = 1
        while q**k < n:
            k += 1
        radical = L.row_space_mod(L.kernel_mod([powq(b, q**k) for b in basis], q), q)
        # Berlekamp elements: x^q - x in the radical
        berl = [[a - b for a, b in zip(powq(b, q), b)] for b in basis]
        fixed = L.kernel_mod(berl + radical, q)
        fixed = [v[:n] for v in fixed if any(v[:n])]
        fixed = L.row_space_mod(fixed, q)
        r = len(fixed) - len(radical)  # the Berlekamp space contains the radical
        pieces = [radical]
        rng = random.Random(q)
        while len(pieces) < r:
            x = [sum(rng.randrange(q) * v[j] for v in fixed) % q for j in range(n)]
            refined = []
            for piece in pieces:
                for c in range(q):
                    xc = [(a - c * b) % q for a, b in zip(x, one)]
                    span = L.row_space_mod(piece + [mulq(xc, b) for b in basis], q)
                    if len(span) < n:
                        refined.append(span)
            pieces = refined
        primes = []
        for span in pieces:
            f = n - len(span)
            rows = [list(v) for v in span]
            ideal = self.ideal(rows, modulus=q)
            pi = _two_element(self, ideal, q, f)
            prime = PrimeIdeal(ideal, q, pi, 1, f)
            e = 1
            while prime.power(e + 1).contains(tuple(q * c for c in self.one)):
                e += 1
            primes.append(PrimeIdeal(ideal, q, pi, e, f))
        return _sorted_primes(primes)

    # ------------------------------------------------------- short elements

    def lattice_gram(self, ideal: Ideal):
        H = [list(r) for r in ideal.hnf]
        G = self.trace_form
        return L.mat_mul(L.mat_mul(H, G), [list(c) for c in zip(*H)])

    def short_elements(self, ideal: Ideal, t2_bound, max_nodes: int = DEFAULT_MAX_NODES) -> list[OrderElement]:
        """Nonzero elements of the ideal with T2 <= bound, one per +- pair."""
        H = [list(r) for r in ideal.hnf]
        gram = self.lattice_gram(ideal)
        T, red = L.lll_gram(gram)
        basis = L.mat_mul(T, H)
        q = fincke_pohst_form([[float(x) for x in row] for row in red])
        bound = float(t2_bound)
        try:
            vecs = kernels.enumerate_ellipsoid(q, bound * (1 + 1e-9) + 1e-9, max_nodes)
        except kernels.NodeLimitExceeded as exc:
            raise EnumerationLimit(str(exc)) from None
        out = []
        for v in vecs:
            coords = tuple(L.vec_mat(list(v), basis))
            if self.t2(coords) <= t2_bound:
                out.append(_canonical_sign(self.element(coords)))
        out.sort(key=lambda e: (self.t2(e.coords), e.coords))
        return out

    def weighted_short_vectors(self, ideal: Ideal, weights, bound: float, max_nodes: int = DEFAULT_MAX_NODES):
        """Coordinates x of ideal elements with sum_k weights[k] * sigma_k(x)^2 <= bound.

        Floating point with a relative safety margin; callers verify hits
        exactly.
        """
        H = [list(r) for r in ideal.hnf]
        n = self.n
        E = self.embedding_matrix_mp
        with mpmath.workprec(256):
            roots = [mpmath.sqrt(mpmath.mpf(w)) for w in weights]
            rows = [[sum(h[i] * E[i][k] for i in range(n) if h[i]) * roots[k] for k in range(n)] for h in H]
            scale = mpmath.mpf(2) ** 200 / max(abs(x) for row in rows for x in row)
            ints = [[int(mpmath.nint(x * scale)) for x in row] for row in rows]
        # LLL on the exact Gram of a 200-bit rounding; the transform is exact regardless
        gram = [[sum(a * b for a, b in zip(u, v)) for v in ints] for u in ints]
        T, _ = L.lll_gram(gram)
        basis = L.mat_mul(T, H)
        with mpmath.workprec(256):
            A = [[sum(t * rows[j][k] for j, t in enumerate(trow) if t) for k in range(n)] for trow in T]
            red = [[float(mpmath.fsum(A[a][k] * A[b][k] for k in range(n))) for b in range(n)] for a in range(n)]
        q = fincke_pohst_form(red)
        try:
            vecs = kernels.enumerate_ellipsoid(q, bound * (1 + 1e-6) + 1e-9, max_nodes)
        except kernels.NodeLimitExceeded as exc:
            raise EnumerationLimit(str(exc)) from None
        return [tuple(L.vec_mat(list(v), basis)) for v in vecs]

    def minkowski_bound(self) -> float:
        n = self.n
        return math.factorial(n) / n**n * math.sqrt(abs(self.discriminant))

    def __repr__(self) -> str:
        return f"MaximalOrder({P.to_string(list(self.poly))}, disc={self.discriminant})"


def _two_element(order: MaximalOrder, ideal: Ideal, q: int, f: int):
    """An element pi with ideal = qO + pi O."""
    n = order.n
    rows = [list(r) for r in ideal.hnf]
    cands = list(rows)
    rng = random.Random(q * 7919 + f)
    for _ in range(2000):
        cands.append([sum(rng.randrange(-2, 3) * r[j] for r in rows) for j in range(n)])
    for c in cands:
        c = tuple(c)
        if not any(c):
            continue
        if order.ideal_from_generators([q, c], modulus=q).hnf == ideal.hnf:
            return c
    raise ArithmeticError("no two-element generator found")


def _sorted_primes(primes):
    return sorted(primes, key=lambda p: (p.f, p.e, p.ideal.hnf))


def _canonical_sign(el: OrderElement) -> OrderElement:
    for c in el.coords:
        if c:
            return el if c > 0 else OrderElement(el.order, tuple(-x for x in el.coords))
    return el


def fincke_pohst_form(gram):
    """Cholesky-style decomposition used by the enumeration kernel.

    Returns q with q[i][i] = B_i (squared GS norms) and q[i][j] = mu_ji for
    j > i, so that x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
    """
    n = len(gram)
    a = [[float(x) for x in row] for row in gram]
    q = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            q[i][j] = a[i][j]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    for i in range(n):
        for j in range(i):
            q[i][j] = 0.0
        if q[i][i] <= 0:
            raise ArithmeticError("quadratic form is not positive definite")
    return q


def real_roots(f, prec: int):
    """All roots of f, certified real and isolated to about 2^-prec."""
    with mpmath.workprec(prec):
        return [+x for _, _, x in root_intervals(f, prec)]


def root_intervals(f, prec: int):
    """(lo, hi, mid) per real root, each [lo, hi] certified by a sign change."""
    n = len(f) - 1
    with mpmath.workprec(prec + 64):
        approx = mpmath.polyroots(list(reversed(f)), maxsteps=200, extraprec=prec + 64)
    roots = sorted(mpmath.re(r) for r in approx)
    if len(roots) != n:
        raise ArithmeticError("root finding failed")
    old = iv.prec
    iv.prec = prec + 32
    try:
        out = []
        for r in roots:
            with mpmath.workprec(prec + 64):
                x = r
                fp = [c * i for i, c in enumerate(f)][1:]
                for _ in range(8):
                    x = x - P.evaluate(f, x) / P.evaluate(fp, x)
                delta = mpmath.mpf(2) ** (-prec + 8) * max(1, abs(x))
                a, b = x - delta, x + delta
            lo = iv.mpf(a)
            hi = iv.mpf(b)
            flo = P.evaluate([iv.mpf(c) for c in f], lo)
            fhi = P.evaluate([iv.mpf(c) for c in f], hi)
            if not ((flo.b < 0 and fhi.a > 0) or (flo.a > 0 and fhi.b < 0)):
                raise ArithmeticError("could not certify a real root; is the field totally real?")
            out.append((a, b, x))
        for (a1, b1, _), (a2, b2, _) in zip(out, out[1:]):
            if b1 >= a2:
                raise ArithmeticError("root intervals overlap")
    finally:
        iv.prec = old
    return out


@dataclass(frozen=True, eq=False)
class OrderElement:
    order: MaximalOrder = field(repr=False)
    coords: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, OrderElement) and self.coords == other.coords and self.order is other.order

    def __hash__(self):
        return hash(self.coords)

    def __mul__(self, other):
        return OrderElement(self.order, self.order.mul(self.coords, other.coords))

    def __neg__(self):
        return OrderElement(self.order, tuple(-c for c in self.coords))

    def __pow__(self, e: int):
        return OrderElement(self.order, self.order.power(self.coords, e))

    def norm(self) -> int:
        return self.order.norm(self.coords)

    def trace(self) -> int:
        return self.order.trace(self.coords)

    def t2(self) -> int:
        return self.order.t2(self.coords)

    def power_basis(self) -> list[Fraction]:
        return self.order.to_power_basis(self.coords)


@dataclass(frozen=True)
class Ideal:
    order: MaximalOrder = field(repr=False, compare=False, hash=False)
    hnf: tuple[tuple[int, ...], ...]

    @property
    def norm(self) -> int:
        return math.prod(self.hnf[i][i] for i in range(len(self.hnf)))

    def contains(self, a) -> bool:
        if isinstance(a, OrderElement):
            a = a.coords
        return L.in_lattice(a, self.hnf)

    def __mul__(self, other: Ideal) -> Ideal:
        o = self.order
        rows = [o.mul(a, b) for a in self.hnf for b in other.hnf]
        return o.ideal(rows, modulus=self.norm * other.norm)

    def __pow__(self, k: int) -> Ideal:
        result = self.order.unit_ideal()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def contains_ideal(self, other: Ideal) -> bool:
        return all(self.contains(r) for r in other.hnf)

    def __le__(self, other: Ideal) -> bool:
        return other.contains_ideal(self)


@dataclass(frozen=True)
class PrimeIdeal:
    ideal: Ideal
    residue_prime: int
    generator: tuple[int, ...]  # second element of the two-element form
    e: int
    f: int

    @property
    def norm(self) -> int:
        return self.residue_prime**self.f

    @property
    def two_element_form(self):
        return self.residue_prime, self.generator

    def power(self, k: int) -> Ideal:
        cache = self.__dict__.setdefault("_powers", {})  # frozen: write via __dict__
        if k not in cache:
            cache[k] = self.ideal**k
        return cache[k]

    def valuation(self, a) -> int:
        """v_P(a) for nonzero a in O."""
        if isinstance(a, OrderElement):
            a = a.coords
        v = 0
        while self.power(v + 1).contains(a):
            v += 1
        return v

    def __repr__(self):
        return f"PrimeIdeal(q={self.residue_prime}, e={self.e}, f={self.f})"


def ideal_norm(ideal: Ideal) -> int:
    return ideal.norm


# ------------------------------------------------------------ construction


def _dedekind_ok(f, q) -> bool:
    """Dedekind's criterion: Z[theta] is q-maximal."""
    facs = P.factor_mod(f, q)
    g = [1]
    h = [1]
    for fac, e in facs:
        g = P.mul(g, fac)
        for _ in range(e - 1):
            h = P.mul(h, fac)
    gh = P.mul(g, h)
    diff = P.add(gh, [-c for c in f])
    F = [c // q for c in diff]
    assert all(c % q == 0 for c in diff)
    common = P.gcd_mod(P.gcd_mod(F, g, q), h, q) if P.reduce_mod(F, q) else P.gcd_mod(g, h, q)
    return len(common) <= 1


def _round_two_step(poly, numerators, denominator, q):
    """One p-radical enlargement; returns (numerators, denominator, grew)."""
    order = MaximalOrder(poly, numerators, denominator)
    n = order.n
    # radical of O/qO
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    k = 1
    while q**k < n:
        k += 1

    def powq(a, e):
        r = order.one
        while e:
            if e & 1:
                r = tuple(c % q for c in order.mul(r, a))
            a = tuple(c % q for c in order.mul(a, a))
            e >>= 1
        return r

    frob = [list(powq(b, q**k)) for b in basis]
    rad = L.kernel_mod(frob, q)
    I = L.hnf_mod(rad, n, q)  # rad + qO
    # U = {x : x I subset q I}
    rows = []
    for b in basis:
        row = []
        for g in I:
            prod = order.mul(b, tuple(g))
            coords = L.hnf_coordinates(prod, I)
            assert coords is not None
            row += [c % q for c in coords]
        rows.append(row)
    ker = L.kernel_mod(rows, q)
    if not ker:
        return numerators, denominator, False
    U = L.hnf_mod(ker, n, q)  # in O-coordinates, contains qO
    # new order (1/q) U in power-basis coordinates over denominator * q
    new_rows = [L.vec_mat(u, numerators) for u in U]
    new_rows = L.hnf(new_rows, n)
    d = denominator * q
    g = math.gcd(d, *[c for r in new_rows for c in r])
    new_rows = [[c // g for c in r] for r in new_rows]
    return new_rows, d // g, True


def maximal_order(poly) -> MaximalOrder:
    """Integral basis via Dedekind's criterion and p-radical enlargement."""
    f = [int(c) for c in poly]
    if f[-1] != 1:
        raise ValueError("polynomial must be monic")
    n = len(f) - 1
    disc = P.discriminant(f)
    if disc == 0:
        raise ReducibleError("polynomial has a repeated factor")
    if _has_rational_factor(f):
        raise ReducibleError(f"{P.to_string(f)} is reducible over Q")
    numerators = L.identity(n)
    denominator = 1
    for q, e in factorize(abs(disc)):
        if e < 2 or _dedekind_ok(f, q):
            continue
        grew = True
        while grew:
            numerators, denominator, grew = _round_two_step(f, numerators, denominator, q)
    return MaximalOrder(f, numerators, denominator)


def _has_rational_factor(f) -> bool:
    """Irreducibility screen: a factor mod some good prime pattern or a rational root."""
    n = len(f) - 1
    # rational roots of a monic integer polynomial are integer divisors of f[0]
    if f[0] == 0:
        return True
    for d in _divisors_abs(f[0]):
        for r in (d, -d):
            if P.evaluate(f, r) == 0:
                return True
    if n <= 3:
        return False
    # degrees of factors mod several primes must be compatible with a split
    disc = P.discriminant(f)
    possible = {n}
    for q in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        if disc % q == 0:
            continue
        degs = [len(g) - 1 for g, _ in P.factor_mod(f, q)]
        sums = {0}
        for d in degs:
            sums |= {s + d for s in sums}
        possible &= sums
    return any(0 < s < n for s in possible)


def _divisors_abs(m):
    m = abs(m)
    out = set()
    for d in range(1, math.isqrt(m) + 1):
        if m % d == 0:
            out |= {d, m // d}
    return sorted(out)


def factor_rational_prime(order: MaximalOrder, q: int) -> list[PrimeIdeal]:
    return order.factor_rational_prime(q)


def minkowski_embedding(elem: OrderElement, precision: int = 256):
    return elem.order.embed(elem.coords, prec=precision)


def short_elements(ideal: Ideal, t2_bound, max_nodes: int = DEFAULT_MAX_NODES):
    return ideal.order.short_elements(ideal, t2_bound, max_nodes)

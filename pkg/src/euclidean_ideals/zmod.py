"""Arithmetic in Z and in the unit groups (Z/nZ)^x.

Residues are canonicalized to ``[0, n)``.  Subgroups are kept as explicit
sorted tuples; the moduli handled downstream stay below ~10^6 so this is
cheap and makes coset logic easy to check by hand.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce

import numpy as np

# Witnesses 2..41 make Miller-Rabin deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981
_TRIAL_LIMIT = 10**6

DEFAULT_SEED = 0


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=8)
def small_primes(limit: int) -> tuple[int, ...]:
    """All primes <= limit (plain Eratosthenes)."""
    if limit < 2:
        return ()
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


def _rho(n: int, rng: random.Random) -> int:
    # Brent's variant; returns a nontrivial factor of composite n.
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)

    def __iter__(self):
        return iter(self.factors)


def factorize(n: int, seed: int = DEFAULT_SEED) -> Factorization:
    """Trial division to 10^6, then seeded Pollard-Brent rho."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    counts: dict[int, int] = {}
    m = n
    for p in small_primes(min(_TRIAL_LIMIT, math.isqrt(n) + 1)):
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    if m > 1:
        rng = random.Random(seed)
        stack = [m]
        while stack:
            k = stack.pop()
            if is_prime(k):
                counts[k] = counts.get(k, 0) + 1
                continue
            r = math.isqrt(k)
            if r * r == k:
                stack += [r, r]
                continue
            d = _rho(k, rng)
            stack += [d, k // d]
    return Factorization(n, tuple(sorted(counts.items())))


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        # moduli are pairwise coprime
        t = (r - x) * pow(m, -1, n) % n
        x += m * t
        m *= n
    return x % m


def _require_unit(x: int, n: int) -> int:
    x %= n
    if math.gcd(x, n) != 1:
        raise ValueError(f"{x} is not a unit modulo {n}")
    return x


def element_order(x: int, n: int) -> int:
    """Smallest k >= 1 with x^k = 1 (mod n)."""
    x = _require_unit(x, n)
    if n == 1:
        return 1
    order = carmichael_lambda(n)
    for p, _ in factorize(order):
        while order % p == 0 and pow(x, order // p, n) == 1:
            order //= p
    return order


def carmichael_lambda(n: int) -> int:
    parts = []
    for p, e in factorize(n):
        if p == 2:
            parts.append(1 if e == 1 else 2 if e == 2 else 2 ** (e - 2))
        else:
            parts.append((p - 1) * p ** (e - 1))
    return reduce(math.lcm, parts, 1)


def strip_two_part(c: int, n: int) -> int:
    """Return c^(2^m) where 2^m exactly divides the order of c."""
    c = _require_unit(c, n)
    order = element_order(c, n)
    m = (order & -order).bit_length() - 1
    return pow(c, 2**m, n)


def jacobi_symbol(a: int, n: int) -> int:
    if n < 1 or n % 2 == 0:
        raise ValueError("jacobi_symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def primitive_root(p: int) -> int:
    """Least primitive root modulo an odd prime power or 2, 4."""
    if p in (2, 4):
        return p - 1
    fac = factorize(p)
    if len(fac.factors) != 1 or fac.factors[0][0] == 2:
        raise ValueError(f"{p} has no primitive root handled here")
    phi = euler_phi(p)
    qs = factorize(phi).primes
    for g in range(2, p):
        if math.gcd(g, p) == 1 and all(pow(g, phi // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class UnitGroupModN:
    n: int
    generators: tuple[int, ...]
    generator_orders: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.generator_orders)

    def exponent_table(self) -> tuple[np.ndarray, np.ndarray]:
        """Every unit with its exponent vector over the generators.

        Returns ``(elements, exps)`` where ``elements[k]`` equals the product
        of ``generators[i] ** exps[k, i]`` modulo n.
        """
        elems = np.ones(1, dtype=np.int64)
        exps = np.zeros((1, 0), dtype=np.int64)
        for g, o in zip(self.generators, self.generator_orders):
            powers = np.array([pow(g, k, self.n) for k in range(o)], dtype=np.int64)
            elems = (elems[:, None] * powers[None, :] % self.n).reshape(-1)
            col = np.tile(np.arange(o, dtype=np.int64), len(exps))
            exps = np.hstack([np.repeat(exps, o, axis=0), col[:, None]])
        return elems, exps

    def elements(self) -> tuple[int, ...]:
        return tuple(sorted(int(x) for x in self.exponent_table()[0]))


def unit_group(n: int) -> UnitGroupModN:
    """CRT decomposition of (Z/nZ)^x into cyclic factors."""
    if n < 2:
        raise ValueError("unit_group needs n >= 2")
    pieces = []  # (prime power, local generator, order)
    for p, e in factorize(n):
        q = p**e
        if p == 2:
            if e >= 2:
                pieces.append((q, q - 1, 2))
            if e >= 3:
                pieces.append((q, 5, 2 ** (e - 2)))
        else:
            g = primitive_root(p)
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            pieces.append((q, g, (p - 1) * p ** (e - 1)))
    gens, orders = [], []
    for q, g, o in pieces:
        rest = n // q
        gens.append(crt([g, 1], [q, rest]) if rest > 1 else g % n)
        orders.append(o)
    return UnitGroupModN(n, tuple(gens), tuple(orders))


@lru_cache(maxsize=64)
def units_mod(n: int) -> np.ndarray:
    """Sorted array of residues coprime to n."""
    r = np.arange(n, dtype=np.int64)
    return r[np.gcd(r, n) == 1] if n > 1 else np.zeros(1, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class SubgroupModN:
    n: int
    elements: tuple[int, ...]

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(self.elements)] = True
        return m

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x % self.n in self.members

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupModN)
            and self.n == other.n
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((self.n, self.elements))

    def __repr__(self) -> str:
        head = ", ".join(map(str, self.elements[:6]))
        more = ", ..." if len(self.elements) > 6 else ""
        return f"SubgroupModN(n={self.n}, order={self.order}, [{head}{more}])"

    def intersect(self, other: SubgroupModN) -> SubgroupModN:
        if other.n != self.n:
            raise ValueError("moduli differ")
        return _from_mask(self.n, self.mask & other.mask)

    def lift(self, level: int) -> SubgroupModN:
        """Preimage under reduction (Z/level)^x -> (Z/n)^x."""
        if level % self.n:
            raise ValueError(f"{self.n} does not divide {level}")
        u = units_mod(level)
        if self.n == 1:
            return SubgroupModN(level, tuple(int(x) for x in u))
        return SubgroupModN(level, tuple(int(x) for x in u[self.mask[u % self.n]]))

    def reduce(self, m: int) -> SubgroupModN:
        """Image under reduction to modulus m (m | n)."""
        if self.n % m:
            raise ValueError(f"{m} does not divide {self.n}")
        if m == 1:
            return SubgroupModN(1, (0,))
        return SubgroupModN(m, tuple(sorted({x % m for x in self.elements})))

    def coset_index(self) -> dict[int, int]:
        """Map every unit mod n to the index of its coset (ordered by least element)."""
        label: dict[int, int] = {}
        k = 0
        for x in units_mod(self.n):
            x = int(x)
            if x in label:
                continue
            for h in self.elements:
                label[x * h % self.n] = k
            k += 1
        return label


def _from_mask(n: int, mask: np.ndarray) -> SubgroupModN:
    return SubgroupModN(n, tuple(int(x) for x in np.flatnonzero(mask)))


def full_group(n: int) -> SubgroupModN:
    return SubgroupModN(n, tuple(int(x) for x in units_mod(n)))


def kernel_of_reduction(n: int, m: int) -> SubgroupModN:
    """Units mod n that are 1 mod m."""
    u = units_mod(n)
    return SubgroupModN(n, tuple(int(x) for x in u[u % m == 1 % m]))


def subgroup_closure(gens, n: int) -> SubgroupModN:
    """Smallest subgroup of (Z/nZ)^x containing gens."""
    gens = [_require_unit(g, n) for g in gens]
    if n == 1:
        return SubgroupModN(1, (0,))
    current = {1}
    for g in gens:
        if g in current:
            continue
        # extend by the cyclic group <g>: cosets of current
        new = set(current)
        frontier = list(current)
        power = g
        while power not in current:
            shifted = [x * power % n for x in frontier]
            new.update(shifted)
            power = power * g % n
        current = new
    return SubgroupModN(n, tuple(sorted(current)))


def quotient_order(x: int, sub: SubgroupModN) -> int:
    """Order of the coset x*sub in (Z/n)^x / sub."""
    x = _require_unit(x, sub.n)
    order = element_order(x, sub.n)
    for p, _ in factorize(order):
        while order % p == 0 and pow(x, order // p, sub.n) in sub:
            order //= p
    return order


def iter_units(n: int):
    return (int(x) for x in units_mod(n))


__all__ = [
    "Factorization",
    "SubgroupModN",
    "UnitGroupModN",
    "carmichael_lambda",
    "crt",
    "divisors",
    "element_order",
    "euler_phi",
    "factorize",
    "full_group",
    "is_prime",
    "iter_units",
    "jacobi_symbol",
    "kernel_of_reduction",
    "primitive_root",
    "quotient_order",
    "small_primes",
    "strip_two_part",
    "subgroup_closure",
    "unit_group",
    "units_mod",
]

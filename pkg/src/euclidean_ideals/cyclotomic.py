"""Subfields of cyclotomic fields through the Galois correspondence.

An abelian field is a pair (level n, subgroup H of (Z/n)^x): the fixed
field of H inside Q(zeta_n).  Everything here is pure group bookkeeping
except :func:`defining_polynomial`, which evaluates Gaussian periods in
interval arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from mpmath import iv

from . import polynomial as P
from .zmod import (
    SubgroupModN,
    divisors,
    euler_phi,
    factorize,
    is_prime,
    small_primes,
    subgroup_closure,
    unit_group,
    units_mod,
)

PRECISION_CAP = 4096


class PrecisionError(RuntimeError):
    """Interval arithmetic could not certify a result below the precision cap."""


class AmbiguousFieldError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class AbelianFieldSpec:
    level: int
    fixing_subgroup: SubgroupModN

    def __post_init__(self):
        if self.fixing_subgroup.n != self.level:
            raise ValueError("subgroup modulus must equal the level")
        if euler_phi(self.level) % self.fixing_subgroup.order:
            raise ValueError("subgroup order does not divide phi(level)")

    @classmethod
    def from_generators(cls, level: int, gens) -> AbelianFieldSpec:
        return cls(level, subgroup_closure(gens, level))

    @classmethod
    def rationals(cls) -> AbelianFieldSpec:
        return cls(1, SubgroupModN(1, (0,)))

    @classmethod
    def cyclotomic(cls, n: int) -> AbelianFieldSpec:
        return cls(n, subgroup_closure([], n))

    @property
    def degree(self) -> int:
        return euler_phi(self.level) // self.fixing_subgroup.order

    @cached_property
    def conductor(self) -> int:
        return conductor(self)

    @cached_property
    def canonical(self) -> AbelianFieldSpec:
        m = self.conductor
        if m == self.level:
            return self
        return AbelianFieldSpec(m, self.fixing_subgroup.reduce(m))

    def at_level(self, level: int) -> AbelianFieldSpec:
        if level % self.level:
            raise ValueError(f"level {self.level} does not divide {level}")
        if level == self.level:
            return self
        return AbelianFieldSpec(level, self.fixing_subgroup.lift(level))

    def key(self) -> tuple[int, tuple[int, ...]]:
        c = self.canonical
        return c.level, c.fixing_subgroup.elements

    def __eq__(self, other) -> bool:
        return isinstance(other, AbelianFieldSpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"AbelianFieldSpec(conductor={self.conductor}, degree={self.degree})"

    def generators(self) -> list[int]:
        """A small generating set of the fixing subgroup (greedy)."""
        gens: list[int] = []
        current = subgroup_closure([], self.level)
        for x in self.fixing_subgroup.elements:
            if x not in current:
                gens.append(x)
                current = subgroup_closure(gens, self.level)
                if current.order == self.fixing_subgroup.order:
                    break
        return gens

    def descriptor(self) -> str:
        """``level:g1,g2`` form accepted by the command line."""
        c = self.canonical
        return f"{c.level}:" + ",".join(map(str, c.generators()))

    def contains(self, other: AbelianFieldSpec) -> bool:
        """True iff ``other`` is a subfield of this field."""
        n = math.lcm(self.level, other.level)
        mine = self.at_level(n).fixing_subgroup
        theirs = other.at_level(n).fixing_subgroup
        return bool(np.all(theirs.mask[list(mine.elements)]))


def conductor(spec: AbelianFieldSpec) -> int:
    """Smallest m | level whose reduction kernel lies inside the fixing subgroup."""
    n = spec.level
    if n == 1:
        return 1
    u = units_mod(n)
    mask = spec.fixing_subgroup.mask
    for m in divisors(n):
        if m % 4 == 2:
            # Q(zeta_m) = Q(zeta_{m/2}) for m = 2 mod 4; never minimal
            continue
        if bool(np.all(mask[u[u % m == 1 % m]])):
            return m
    return n


def enumerate_prime_degree_subfields(n: int, p: int) -> list[AbelianFieldSpec]:
    """All subfields of Q(zeta_n) of degree p, each at its conductor."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 3 or euler_phi(n) % p:
        return []
    ug = unit_group(n)
    elems, exps = ug.exponent_table()
    active = [i for i, o in enumerate(ug.generator_orders) if o % p == 0]
    out = []
    seen = set()
    for vec in itertools.product(range(p), repeat=len(active)):
        nz = [v for v in vec if v]
        if not nz or nz[0] != 1:
            continue  # projective normalization: first nonzero entry is 1
        # homomorphism g_i -> v_i in Z/p (well defined since p | ord g_i)
        values = np.zeros(len(elems), dtype=np.int64)
        for i, v in zip(active, vec):
            values = (values + v * exps[:, i]) % p
        kernel = np.sort(elems[values == 0])
        spec = AbelianFieldSpec(n, SubgroupModN(n, tuple(int(x) for x in kernel))).canonical
        if spec.key() not in seen:
            seen.add(spec.key())
            out.append(spec)
    out.sort(key=lambda s: (s.conductor, s.key()[1]))
    return out


def inertia_subgroup(level: int, q: int) -> SubgroupModN:
    v = 0
    m = level
    while m % q == 0:
        m //= q
        v += 1
    u = units_mod(level)
    return SubgroupModN(level, tuple(int(x) for x in u[u % m == 1 % m]))


def ramification_index(spec: AbelianFieldSpec, q: int) -> int:
    """e(q) = |I_q H / H| = |I_q| / |I_q cap H|."""
    c = spec.canonical
    if c.level % q:
        return 1
    inertia = inertia_subgroup(c.level, q)
    inter = int(np.count_nonzero(c.fixing_subgroup.mask[list(inertia.elements)]))
    return inertia.order // inter


def ramified_primes(spec: AbelianFieldSpec) -> list[tuple[int, int]]:
    out = []
    for q in factorize(spec.conductor).primes if spec.conductor > 1 else ():
        e = ramification_index(spec, q)
        if e > 1:
            out.append((q, e))
    return out


def compositum(a: AbelianFieldSpec, b: AbelianFieldSpec) -> AbelianFieldSpec:
    n = math.lcm(a.level, b.level)
    ha = a.at_level(n).fixing_subgroup
    hb = b.at_level(n).fixing_subgroup
    return AbelianFieldSpec(n, ha.intersect(hb)).canonical


def intersection(a: AbelianFieldSpec, b: AbelianFieldSpec) -> AbelianFieldSpec:
    n = math.lcm(a.level, b.level)
    ha = a.at_level(n).fixing_subgroup
    hb = b.at_level(n).fixing_subgroup
    return AbelianFieldSpec(n, subgroup_closure(ha.elements + hb.elements, n) if n > 1 else ha).canonical


def is_totally_real(spec: AbelianFieldSpec) -> bool:
    return (spec.level - 1) % spec.level in spec.fixing_subgroup


def frobenius_class(spec: AbelianFieldSpec, q: int) -> tuple[int, ...]:
    """The coset (q mod level) * H, as a sorted tuple of residues."""
    n = spec.level
    if n > 1 and math.gcd(q, n) != 1:
        raise ValueError(f"{q} divides the level {n}")
    if n == 1:
        return (0,)
    x = q % n
    return tuple(sorted(x * h % n for h in spec.fixing_subgroup.elements))


def splits_completely(spec: AbelianFieldSpec, q: int) -> bool:
    c = spec.canonical
    if c.level > 1 and math.gcd(q, c.level) != 1:
        return False
    return c.level == 1 or q % c.level in c.fixing_subgroup


@dataclass(frozen=True)
class GaussianPeriodPolynomial:
    coefficients: tuple[int, ...]  # constant term first, monic
    level: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def discriminant(self) -> int:
        return P.discriminant(list(self.coefficients))

    def __str__(self) -> str:
        return P.to_string(list(self.coefficients))


def _periods(m: int, cosets, prec: int):
    iv.prec = prec
    two_pi = 2 * iv.pi
    return [sum((iv.cos(two_pi * a / m) for a in coset), iv.mpf(0)) for coset in cosets]


def period_cosets(spec: AbelianFieldSpec) -> list[list[int]]:
    """Cosets of the fixing subgroup at the conductor; the subgroup itself first."""
    c = spec.canonical
    label = c.fixing_subgroup.coset_index()
    cosets: dict[int, list[int]] = {}
    for a, k in label.items():
        cosets.setdefault(k, []).append(a)
    return [sorted(cosets[k]) for k in sorted(cosets)]


def defining_polynomial(spec: AbelianFieldSpec, start_prec: int = 128) -> GaussianPeriodPolynomial:
    """Minimal polynomial of the Gaussian period over the fixing subgroup."""
    c = spec.canonical
    m = c.level
    if not is_totally_real(c):
        raise ValueError("Gaussian periods here assume a totally real field")
    if m < 3:
        return GaussianPeriodPolynomial((0, 1), m)
    cosets = period_cosets(c)
    prec = start_prec
    old = iv.prec
    try:
        while prec <= PRECISION_CAP:
            etas = _periods(m, cosets, prec)
            poly = [iv.mpf(1)]
            for e in etas:
                shifted = [iv.mpf(0)] + poly
                for i in range(len(poly)):
                    shifted[i] -= e * poly[i]
                poly = shifted
            coeffs = []
            for ci in poly:
                lo, hi = math.ceil(ci.a), math.floor(ci.b)
                if lo != hi:
                    break
                coeffs.append(int(lo))
            else:
                return GaussianPeriodPolynomial(tuple(coeffs), m)
            prec *= 2
    finally:
        iv.prec = old
    raise PrecisionError(f"Gaussian periods for conductor {m} not certified at {PRECISION_CAP} bits")


def fingerprint_primes(bad: int, count: int, start: int = 2) -> list[int]:
    out = []
    limit = 4096
    while len(out) < count:
        out = [q for q in small_primes(limit) if q >= start and bad % q][:count]
        limit *= 2
    return out


def identify_field(poly, candidates, count: int = 200, max_count: int = 3200) -> AbelianFieldSpec | None:
    """The candidate whose split primes match those of ``poly``, if any."""
    poly = list(poly)
    n = len(poly) - 1
    cands = [c for c in candidates if c.degree == n]
    if not cands:
        return None
    disc = P.discriminant(poly)
    if disc == 0:
        raise ValueError("polynomial is not squarefree")
    while True:
        bad = abs(disc) * math.prod(c.conductor for c in cands)
        primes = fingerprint_primes(bad, count)
        split = [P.splits_completely_mod(poly, q) for q in primes]
        matches = [c for c in cands if all(splits_completely(c, q) == s for q, s in zip(primes, split))]
        if len(matches) <= 1:
            return matches[0] if matches else None
        if count >= max_count:
            raise AmbiguousFieldError(f"{len(matches)} candidates match {P.to_string(poly)}")
        count *= 2


def genus_field(spec: AbelianFieldSpec) -> AbelianFieldSpec:
    """Compositum of the prime-power-conductor slices of the field.

    The slice at q is the field fixed by the elements whose q-component
    lies in H; the genus field is their compositum, with fixing subgroup
    the product of the groups H cap I_q.
    """
    c = spec.canonical
    field = AbelianFieldSpec.rationals()
    for q in (factorize(c.level).primes if c.level > 1 else ()):
        field = compositum(field, local_slice(c, q))
    return field


def local_slice(spec: AbelianFieldSpec, q: int) -> AbelianFieldSpec:
    """Subfield of Q(zeta_{q^a}) whose characters are the q-parts of the field's."""
    c = spec.canonical
    n = c.level
    qa = 1
    while n % (qa * q) == 0:
        qa *= q
    if qa == 1:
        return AbelianFieldSpec.rationals()
    inertia = inertia_subgroup(n, q)
    inter = [x for x in inertia.elements if x in c.fixing_subgroup]
    # (H cap I_q) viewed inside (Z/q^a)^x via reduction
    sub = SubgroupModN(qa, tuple(sorted({x % qa for x in inter})))
    return AbelianFieldSpec(qa, sub).canonical

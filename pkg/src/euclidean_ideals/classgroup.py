"""Class groups by relations plus certified non-principality, genus numbers,
and the analytic class number formula as an independent check."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

import mpmath

from . import cyclotomic as C
from . import linalg as L
from .orders import DEFAULT_MAX_NODES, Ideal, MaximalOrder, OrderElement, PrimeIdeal
from .units import UnitSystem, find_units, saturate_at
from .zmod import factorize, is_prime, small_primes, units_mod

ANALYTIC_TOLERANCE = 1e-4
ANALYTIC_PREC = 128


class ClassGroupError(RuntimeError):
    pass


class AnalyticMismatchError(ArithmeticError):
    """Analytic class number is not within tolerance of an integer."""


class GenusInconsistencyError(ArithmeticError):
    pass


@dataclass
class ClassGroupResult:
    order: MaximalOrder = field(repr=False)
    class_number: int
    invariants: list[int]
    is_cyclic: bool
    generator: PrimeIdeal | None
    relation_log: list[tuple[Ideal, OrderElement]] = field(repr=False)
    factor_base: list[PrimeIdeal] = field(repr=False)
    relation_hnf: list[list[int]] = field(repr=False)
    nonprincipal_certificates: list[tuple[Ideal, int]] = field(default_factory=list, repr=False)

    def class_vector(self, exponents):
        """Canonical representative of the class of prod P_i^exponents[i]."""
        return _reduce(list(exponents), self.relation_hnf)

    def class_order(self, exponents) -> int:
        v = list(exponents)
        acc = [0] * len(v)
        for k in range(1, self.class_number + 1):
            acc = [a + b for a, b in zip(acc, v)]
            if not any(_reduce(acc, self.relation_hnf)):
                return k
        raise ClassGroupError("class order exceeds the class number")

    def verify_witnesses(self) -> bool:
        o = self.order
        return all(o.principal_ideal(a.coords) == ideal for ideal, a in self.relation_log)


@dataclass
class GenusCertificate:
    genus_number: int
    ramified_primes: list[tuple[int, int]]
    hcf_abelian: str | None = None


# ------------------------------------------------------------- factor base


def factor_base(order: MaximalOrder) -> list[PrimeIdeal]:
    """All primes above rational q <= Minkowski bound."""
    bound = order.minkowski_bound()
    out = []
    for q in small_primes(max(2, int(bound)) + 1):
        if q > bound:
            break
        out.extend(order.factor_rational_prime(q))
    out.sort(key=lambda p: (p.norm, p.residue_prime, p.ideal.hnf))
    return out


def _reduce(v, H):
    v = list(v)
    for row in H:
        c = next(i for i, x in enumerate(row) if x)
        q = v[c] // row[c]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return v


class _Relations:
    def __init__(self, order: MaximalOrder, fb: list[PrimeIdeal]):
        self.order = order
        self.fb = fb
        self.index = {}
        for i, p in enumerate(fb):
            self.index.setdefault(p.residue_prime, []).append(i)
        self.rows: list[list[int]] = []
        self.witness: list[tuple[list[int], tuple[int, ...]]] = []
        self.seen: set = set()
        self.hnf: list[list[int]] = []
        self.det = 0

    def add_vector(self, vec, coords) -> bool:
        key = tuple(vec)
        if not any(vec) or key in self.seen:
            return False
        self.seen.add(key)
        if self.det and not any(_reduce(vec, self.hnf)):
            return False
        self.rows.append(list(vec))
        self.witness.append((list(vec), tuple(coords)))
        self._rebuild()
        return True

    def _rebuild(self):
        m = len(self.fb)
        if self.det:
            h = L.hnf_mod(self.hnf + self.rows[-1:], m, self.det)
        else:
            h = L.hnf(self.rows, m)
        self.hnf = [r for r in h if any(r)]
        if len(self.hnf) == m:
            self.det = math.prod(self.hnf[i][i] for i in range(m))

    def try_element(self, coords) -> bool:
        o = self.order
        nm = abs(o.norm(coords))
        if nm == 0:
            return False
        rest = nm
        vec = [0] * len(self.fb)
        for q, idxs in self.index.items():
            e = 0
            while rest % q == 0:
                rest //= q
                e += 1
            if not e:
                continue
            total = 0
            for i in idxs:
                v = self.fb[i].valuation(coords)
                vec[i] = v
                total += v * self.fb[i].f
            if total != e:
                raise ClassGroupError("valuations do not account for the norm")
        if rest != 1:
            return False
        return self.add_vector(vec, coords)


def _ideal_of(order, fb, vec) -> Ideal:
    out = order.unit_ideal()
    for p, e in zip(fb, vec):
        if e:
            out = out * p.power(e)
    return out


def _gather(rel: _Relations, order: MaximalOrder, scale: float, max_nodes: int):
    n = order.n
    targets = [order.unit_ideal()] + [p.ideal for p in rel.fb]
    for ideal in targets:
        bound = n * (ideal.norm * scale) ** (2 / n)
        for e in order.short_elements(ideal, bound, max_nodes):
            rel.try_element(e.coords)


# ------------------------------------------------------- principality search


def _subdivision(units: UnitSystem):
    logs = [[float(x) for x in row] for row in units.log_matrix()]
    n = units.order.n
    spread = max(sum(abs(row[m]) for row in logs) for m in range(n)) if logs else 0.0
    k = max(1, math.ceil(spread))
    return logs, k


def find_generator(ideal: Ideal, units: UnitSystem, max_nodes: int = DEFAULT_MAX_NODES):
    """A generator of ``ideal`` or None, decided by exhausting the unit domain.

    Every generator has a unit multiple whose log vector lies in the
    fundamental cell of the known units; each of the k^r subcells is
    covered by one weighted ellipsoid.
    """
    order = ideal.order
    n = order.n
    N = ideal.norm
    logs, k = _subdivision(units)
    r = len(logs)
    delta = [sum(abs(row[m]) for row in logs) / (2 * k) for m in range(n)]
    bound = N ** (2 / n) * sum(math.exp(2 * d) for d in delta)
    for cell in itertools.product(range(k), repeat=r):
        c = [sum((cell[i] + 0.5) / k * logs[i][m] for i in range(r)) for m in range(n)]
        weights = [math.exp(-2 * x) for x in c]
        for coords in order.weighted_short_vectors(ideal, weights, bound, max_nodes):
            if abs(order.norm(coords)) == N:
                return order.element(coords)
    return None


def is_principal(ideal: Ideal, units: UnitSystem | None = None, max_nodes: int = DEFAULT_MAX_NODES) -> bool:
    units = units or find_units(ideal.order)
    return find_generator(ideal, units, max_nodes) is not None


# ------------------------------------------------------------- class group


def _enumerate_classes(order, fb, hnf, det):
    """Smallest-norm product of factor-base primes in each class."""
    m = len(fb)
    zero = tuple([0] * m)
    reps = {tuple(_reduce(list(zero), hnf)): zero}
    heap = [(1, zero)]
    seen = {zero}
    while heap and len(reps) < det:
        norm, vec = heapq.heappop(heap)
        for i, p in enumerate(fb):
            nv = list(vec)
            nv[i] += 1
            nv = tuple(nv)
            if nv in seen:
                continue
            seen.add(nv)
            key = tuple(_reduce(list(nv), hnf))
            if key not in reps:
                reps[key] = nv
            if len(seen) < 50 * det * m:
                heapq.heappush(heap, (norm * p.norm, nv))
    if len(reps) < det:
        raise ClassGroupError("could not reach every class from the factor base")
    return reps


def class_group(order: MaximalOrder, units: UnitSystem | None = None, max_nodes: int = DEFAULT_MAX_NODES):
    fb = factor_base(order)
    m = len(fb)
    units = units or find_units(order, max_nodes)
    rel = _Relations(order, fb)
    if m == 0:
        return ClassGroupResult(order, 1, [], True, None, [], fb, [])
    for q in sorted(rel.index):
        vec = [0] * m
        for i in rel.index[q]:
            vec[i] = fb[i].e
        rel.add_vector(vec, tuple(q * c for c in order.one))
    scale = 4.0
    while not rel.det:
        _gather(rel, order, scale, max_nodes)
        scale *= 4
        if scale > 4.0**8:
            raise ClassGroupError("relation search did not reach full rank")
    certified: dict = {}
    while True:
        reps = _enumerate_classes(order, fb, rel.hnf, rel.det)
        found = False
        for key, vec in sorted(reps.items(), key=lambda kv: kv[1]):
            if not any(key) or key in certified:
                continue
            ideal = _ideal_of(order, fb, vec)
            alpha = find_generator(ideal, units, max_nodes)
            if alpha is not None:
                rel.add_vector(list(vec), alpha.coords)
                certified.clear()
                found = True
                break
            certified[key] = ideal
        if not found:
            break
    h = rel.det
    invariants = [d for d in L.smith_invariants(rel.hnf) if d != 1]
    cyclic = len(invariants) <= 1
    result = ClassGroupResult(
        order,
        h,
        invariants,
        cyclic,
        None,
        [(_ideal_of(order, fb, v), order.element(c)) for v, c in rel.witness],
        fb,
        rel.hnf,
        [(ideal, ideal.norm) for ideal in certified.values()],
    )
    if h > 1 and cyclic:
        for i, p in enumerate(fb):
            e = [0] * m
            e[i] = 1
            if result.class_order(e) == h:
                result.generator = p
                break
    return result


# --------------------------------------------------------- genus and HCF


def genus_number(spec: C.AbelianFieldSpec) -> GenusCertificate:
    ram = C.ramified_primes(spec)
    prod = math.prod(e for _, e in ram)
    g, r = divmod(prod, spec.degree)
    if r:
        raise GenusInconsistencyError(f"product of ramification indices {prod} not divisible by {spec.degree}")
    return GenusCertificate(g, ram)


def _is_power_of(h: int, p: int) -> bool:
    while h % p == 0:
        h //= p
    return h == 1


def hcf_abelian_certificate(spec: C.AbelianFieldSpec, cg: ClassGroupResult | int) -> GenusCertificate:
    cert = genus_number(spec)
    h = cg if isinstance(cg, int) else cg.class_number
    p = spec.degree
    if h == 1:
        status = "trivial"
    elif h == cert.genus_number and C.is_totally_real(C.genus_field(spec)):
        status = "certified"
    else:
        status = "unknown"
    if status != "unknown":
        if cert.genus_number % h:
            raise GenusInconsistencyError(f"h = {h} does not divide g = {cert.genus_number}")
        if is_prime(p) and not _is_power_of(h, p):
            raise GenusInconsistencyError(f"h = {h} is not a power of {p}")
    cert.hcf_abelian = status
    return cert


# ----------------------------------------------------------- analytic check


def _quotient_labels(spec: C.AbelianFieldSpec):
    """Cyclic quotient (Z/m)^x / H: label each unit by its coset exponent."""
    c = spec.canonical
    m, H, p = c.level, c.fixing_subgroup, c.degree
    units = [int(a) for a in units_mod(m)]
    gen = next(a for a in units if all(pow(a, p // q, m) not in H for q in factorize(p).primes) and a not in H)
    labels = {}
    coset = sorted(H.elements)
    power = 1
    for j in range(p):
        for h in coset:
            labels[power * h % m] = j
        power = power * gen % m
    if len(labels) != len(units):
        raise ValueError("quotient by the fixing subgroup is not cyclic")
    return m, p, labels


def analytic_hr(spec: C.AbelianFieldSpec, prec: int = ANALYTIC_PREC):
    """h*R from the class number formula for a totally real cyclic field."""
    m, p, labels = _quotient_labels(spec)
    if not C.is_totally_real(spec.canonical):
        raise ValueError("field is not totally real")
    with mpmath.workprec(prec):
        zeta_p = mpmath.expjpi(mpmath.mpf(2) / p)
        logsin = {a: mpmath.log(2 * mpmath.sin(mpmath.pi * a / m)) for a in labels}
        roots = {a: mpmath.expjpi(mpmath.mpf(2 * a) / m) for a in labels}
        prod = mpmath.mpc(1)
        for k in range(1, p):
            chi = {a: zeta_p ** (k * j % p) for a, j in labels.items()}
            tau = mpmath.fsum(chi[a] * roots[a] for a in labels)
            s = mpmath.fsum(mpmath.conj(chi[a]) * logsin[a] for a in labels)
            prod *= -tau * s / m
        disc = mpmath.mpf(m) ** (p - 1)
        value = mpmath.sqrt(disc) * prod / 2 ** (p - 1)
        if abs(mpmath.im(value)) > mpmath.mpf(10) ** -20 * abs(value):
            raise ArithmeticError("product of L-values is not real")
        return mpmath.re(value)


def analytic_class_number(spec: C.AbelianFieldSpec, regulator, tolerance: float = ANALYTIC_TOLERANCE) -> int:
    with mpmath.workprec(ANALYTIC_PREC):
        value = analytic_hr(spec) / mpmath.mpf(regulator)
        h = int(mpmath.nint(value))
        residue = abs(value - h)
    if h < 1 or residue >= tolerance:
        raise AnalyticMismatchError(f"analytic class number {mpmath.nstr(value, 12)} is not integral")
    return h


def certified_field_data(order: MaximalOrder, spec: C.AbelianFieldSpec, max_nodes: int = DEFAULT_MAX_NODES):
    """Class group, fundamental units and the analytic cross-check together.

    When the class-number formula exposes a unit index k > 1, the unit
    system is saturated at the primes dividing k and checked again.
    """
    units = find_units(order, max_nodes)
    cg = class_group(order, units, max_nodes)
    with mpmath.workprec(ANALYTIC_PREC):
        ratio = cg.class_number * mpmath.mpf(units.regulator) / analytic_hr(spec)
    k = int(mpmath.nint(ratio))
    if k > 1 and abs(ratio - k) < ANALYTIC_TOLERANCE:
        units = saturate_at(units, factorize(k).primes)
    h_analytic = analytic_class_number(spec, units.regulator)
    if h_analytic != cg.class_number:
        raise AnalyticMismatchError(f"class group gives h = {cg.class_number}, analytic formula {h_analytic}")
    return cg, units

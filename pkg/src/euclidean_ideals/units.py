"""Unit groups of totally real fields: fundamental systems, regulators, independence."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import iv

from . import linalg as L
from .orders import DEFAULT_MAX_NODES, EnumerationLimit, MaximalOrder, OrderElement

SATURATION_PRIMES = (2, 3, 5, 7)
BOUND_DOUBLINGS = 6
MAX_RINGS = 40
WEIGHTED_BOUND = 25.0
_PREC = 256
MAX_PREC = 1 << 14


class UnitSearchError(RuntimeError):
    pass


class DependentUnitsError(ValueError):
    """Regulator determinant encloses zero."""


class IndeterminateError(RuntimeError):
    pass


@dataclass
class UnitSystem:
    order: MaximalOrder = field(repr=False)
    units: list[OrderElement]
    regulator: mpmath.mpf
    regulator_error: float
    saturated: bool
    saturation_bound: int = max(SATURATION_PRIMES)

    def log_matrix(self):
        return [log_vector(u) for u in self.units]


def log_vector(elem: OrderElement):
    return [_mid(x) for x in _interval_logs(elem)]


def _mid(x):
    """Midpoint of an interval at working precision (iv rounds to iv.prec)."""
    old, iv.prec = iv.prec, _PREC
    try:
        with mpmath.workprec(_PREC):
            return mpmath.mpf(x.mid)
    finally:
        iv.prec = old


def _interval_logs(elem: OrderElement):
    """Interval logs |sigma(elem)|, raising precision until no image straddles zero."""
    prec = _PREC
    while prec <= MAX_PREC:
        images = elem.order.embed_interval(elem.coords, prec)
        if all(not (x.a <= 0 <= x.b) for x in images):
            old, iv.prec = iv.prec, _PREC
            try:
                return [iv.log(x if x.a > 0 else -x) for x in images]
            finally:
                iv.prec = old
        prec *= 2
    raise IndeterminateError("embedding interval contains zero")


def _interval_det(m):
    k = len(m)
    if k == 0:
        return iv.mpf(1)
    total = iv.mpf(0)
    for perm in itertools.permutations(range(k)):
        sign = 1
        for i in range(k):
            for j in range(i + 1, k):
                if perm[i] > perm[j]:
                    sign = -sign
        term = iv.mpf(sign)
        for i, j in enumerate(perm):
            term = term * m[i][j]
        total = total + term
    return total


def regulator_interval(units):
    """Certified enclosure of the regulator of the given units."""
    units = list(units)
    if not units:
        return iv.mpf(1)
    order = units[0].order
    n = order.n
    if len(units) != n - 1:
        raise ValueError(f"need {n - 1} units, got {len(units)}")
    for u in units:
        if abs(u.norm()) != 1:
            raise ValueError("regulator input is not a unit")
    logs = [_interval_logs(u) for u in units]
    # drop the embedding carrying the largest |log|
    drop = max(range(n), key=lambda k: max(abs(float(_mid(row[k]))) for row in logs))
    keep = [k for k in range(n) if k != drop]
    old, iv.prec = iv.prec, _PREC
    try:
        det = _interval_det([[row[k] for k in keep] for row in logs])
        if det.a <= 0 <= det.b:
            raise DependentUnitsError("units are multiplicatively dependent")
        return det if det.a > 0 else -det
    finally:
        iv.prec = old


def regulator(units):
    """|det| of the log-embedding matrix with one embedding dropped."""
    r = regulator_interval(units)
    with mpmath.workprec(_PREC):
        return _mid(r)


# ------------------------------------------------------------------ lattice


class _LogLattice:
    """Basis of the subgroup generated by the units seen so far (mod +-1)."""

    def __init__(self, order: MaximalOrder):
        self.order = order
        self.rank_target = order.n - 1
        self.basis: list[OrderElement] = []
        self.logs: list[list] = []

    def _coords_in_basis(self, lv):
        # least squares solve in the first rank_target embeddings
        r = len(self.basis)
        with mpmath.workprec(_PREC):
            A = mpmath.matrix([[row[k] for k in range(self.rank_target)] for row in self.logs]).T
            x = mpmath.lu_solve(A, mpmath.matrix(lv[: self.rank_target]))
            resid = max(abs(sum(x[i] * self.logs[i][k] for i in range(r)) - lv[k]) for k in range(self.order.n))
        return [x[i] for i in range(r)], resid

    def _independent(self, lv) -> bool:
        rows = self.logs + [lv]
        with mpmath.workprec(_PREC):
            g = mpmath.matrix([[mpmath.fdot(a, b) for b in rows] for a in rows])
            scale = max(1, max(abs(x) for row in rows for x in row)) ** (2 * len(rows))
            return abs(mpmath.det(g)) > mpmath.mpf(10) ** -40 * scale

    def add(self, unit: OrderElement) -> bool:
        """Enlarge the lattice by ``unit``; returns True when it changed."""
        lv = log_vector(unit)
        if max(abs(x) for x in lv) < mpmath.mpf(10) ** -30:
            return False  # +-1
        if len(self.basis) < self.rank_target and self._independent(lv):
            self.basis.append(unit)
            self.logs.append(lv)
            return True
        x, resid = self._coords_in_basis(lv)
        if resid > mpmath.mpf(10) ** -30:
            raise UnitSearchError("unit outside the span of the current basis")
        if all(abs(c - mpmath.nint(c)) < mpmath.mpf(10) ** -30 for c in x):
            return False
        d = next(
            (d for d in range(2, 10**4) if all(abs(d * c - mpmath.nint(d * c)) < mpmath.mpf(10) ** -25 for c in x)),
            None,
        )
        if d is None:
            raise UnitSearchError("could not recognise a rational relation")
        r = len(self.basis)
        rows = [[d * int(i == j) for j in range(r)] for i in range(r)]
        rows.append([int(mpmath.nint(d * c)) for c in x])
        T, red = L.lll_rows(rows)
        gens = self.basis + [unit]
        zero = [i for i, row in enumerate(red) if not any(row)]
        assert len(zero) == 1
        rel = T[zero[0]]
        prod = self.order.one
        for g, e in zip(gens, rel):
            prod = self.order.mul(prod, self.order.power(g.coords, e))
        if prod not in (self.order.one, tuple(-c for c in self.order.one)):
            raise UnitSearchError("relation failed exact verification")
        new = [self._combine(gens, T[i]) for i in range(len(T)) if i != zero[0]]
        self.basis = new
        self.logs = [log_vector(u) for u in new]
        return True

    def _combine(self, gens, exps) -> OrderElement:
        order = self.order
        out = order.one
        for g, e in zip(gens, exps):
            if e:
                out = order.mul(out, order.power(g.coords, e))
        return order.element(out)

    def reduce(self):
        if len(self.basis) < 2:
            return
        with mpmath.workprec(_PREC):
            gram = [
                [Fraction(int(mpmath.nint(mpmath.fdot(a, b) * 2**80)), 2**80) for b in self.logs] for a in self.logs
            ]
        T, _ = L.lll_gram(gram)
        self.basis = [self._combine(self.basis, row) for row in T]
        self.logs = [log_vector(u) for u in self.basis]


class _RatioPool:
    """Units a/b from elements generating the same principal ideal."""

    def __init__(self, order: MaximalOrder):
        self.order = order
        self.by_norm: dict[int, list] = {}
        self.bases: dict = {}

    def feed(self, elems):
        order = self.order
        out = []
        for e in elems:
            nm = abs(e.norm())
            if nm == 1:
                continue
            group = self.by_norm.setdefault(nm, [])
            group.append(e)
            if len(group) == 1:
                continue
            if len(group) == 2:
                self._register(group[0])
            key = order.principal_ideal(e.coords).hnf
            base = self.bases.get(key)
            if base is None:
                self.bases[key] = (e, None)
                continue
            elem, inv = base
            if inv is None:
                inv = L.inverse(order.mul_matrix(elem.coords))
                self.bases[key] = (elem, inv)
            q = L.vec_mat(list(e.coords), inv)
            if all(c.denominator == 1 for c in q):
                out.append(order.element(q))
        return out

    def _register(self, e):
        key = self.order.principal_ideal(e.coords).hnf
        self.bases.setdefault(key, (e, None))


def _nth_root(order: MaximalOrder, unit: OrderElement, ell: int):
    """An ell-th root of unit in O, or None."""
    vals = order.embed(unit.coords)
    if ell % 2 == 0 and any(v < 0 for v in vals):
        return None
    with mpmath.workprec(_PREC):
        mags = [abs(v) ** (mpmath.mpf(1) / ell) for v in vals]
        if ell % 2:
            patterns = [tuple(1 if v > 0 else -1 for v in vals)]
        else:
            patterns = [(1,) + s for s in itertools.product((1, -1), repeat=order.n - 1)]
        for signs in patterns:
            coords = order.coords_from_embedding([s * m for s, m in zip(signs, mags)])
            if coords is None:
                continue
            if order.power(coords, ell) == unit.coords:
                return order.element(coords)
    return None


def _saturate(lattice: _LogLattice, primes=SATURATION_PRIMES) -> bool:
    order = lattice.order
    changed = True
    while changed:
        changed = False
        for ell in primes:
            r = len(lattice.basis)
            for exps in itertools.product(range(ell), repeat=r):
                if not any(exps):
                    continue
                eta = lattice._combine(lattice.basis, exps)
                for sign in (1, -1):
                    cand = eta if sign == 1 else -eta
                    root = _nth_root(order, cand, ell)
                    if root is not None:
                        lattice.add(root)
                        lattice.reduce()
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return True


def find_units(order: MaximalOrder, max_nodes: int = DEFAULT_MAX_NODES) -> UnitSystem:
    cache = order.__dict__.setdefault("_unit_cache", {})
    if "system" in cache:
        return cache["system"]
    n = order.n
    lattice = _LogLattice(order)
    base = 3 * abs(order.discriminant) ** (1 / 3)
    whole = order.unit_ideal()
    pool = _RatioPool(order)

    def absorb(elems):
        cands = [e for e in elems if abs(e.norm()) == 1]
        cands += pool.feed(elems)
        cands.sort(key=lambda e: (e.t2(), e.coords))
        for u in cands:
            lattice.add(u)

    try:
        for k in range(BOUND_DOUBLINGS + 1):
            absorb(order.short_elements(whole, base * 2**k, max_nodes))
            if len(lattice.basis) == n - 1:
                break
        # skewed units: weighted searches centred on a grid in the trace-zero log plane
        ring = 1
        frame = _trace_zero_frame(n)
        while len(lattice.basis) < n - 1:
            if ring > MAX_RINGS:
                raise UnitSearchError(f"found rank {len(lattice.basis)} < {n - 1} within {MAX_RINGS} rings")
            found = []
            for point in _ring_points(n - 1, ring):
                c = [sum(t * v[k] for t, v in zip(point, frame)) for k in range(n)]
                weights = [math.exp(-2 * x) for x in c]
                for coords in order.weighted_short_vectors(whole, weights, WEIGHTED_BOUND, max_nodes):
                    found.append(order.element(coords))
            absorb(_dedupe(found))
            ring += 1
    except EnumerationLimit as exc:
        raise UnitSearchError(f"node cap reached before rank {n - 1}: {exc}") from None
    lattice.reduce()
    saturated = _saturate(lattice)
    units = [_normalize_sign(u) for u in lattice.basis]
    reg = regulator_interval(units)
    with mpmath.workprec(_PREC):
        value = _mid(reg)
        err = float(mpmath.mpf(reg.delta) / value)
    system = UnitSystem(order, units, value, err, saturated)
    cache["system"] = system
    return system


def saturate_at(system: UnitSystem, primes) -> UnitSystem:
    """Extract ell-th roots for the given primes and rebuild the system."""
    order = system.order
    lattice = _LogLattice(order)
    for u in system.units:
        lattice.add(u)
    _saturate(lattice, tuple(primes))
    lattice.reduce()
    units = [_normalize_sign(u) for u in lattice.basis]
    reg = regulator_interval(units)
    with mpmath.workprec(_PREC):
        value = _mid(reg)
        err = float(mpmath.mpf(reg.delta) / value)
    new = UnitSystem(order, units, value, err, True, max(max(primes), system.saturation_bound))
    order.__dict__.setdefault("_unit_cache", {})["system"] = new
    return new


def _trace_zero_frame(n: int):
    """Orthonormal basis of the sum-zero hyperplane in R^n."""
    frame = []
    for i in range(1, n):
        v = [1.0] * i + [-float(i)] + [0.0] * (n - i - 1)
        norm = math.sqrt(sum(x * x for x in v))
        frame.append([x / norm for x in v])
    return frame


def _ring_points(dim: int, r: int):
    for point in itertools.product(range(-r, r + 1), repeat=dim):
        if max(abs(t) for t in point) == r:
            yield point


def _dedupe(elems):
    seen = {}
    for e in elems:
        c = _sign_canonical(e.coords)
        seen.setdefault(c, e.order.element(c))
    return [seen[k] for k in sorted(seen)]


def _sign_canonical(coords):
    lead = next(c for c in coords if c)
    return tuple(coords) if lead > 0 else tuple(-c for c in coords)


def _normalize_sign(u: OrderElement) -> OrderElement:
    # positive first embedding
    return u if u.order.embed_float(u.coords)[0] > 0 else -u


# ----------------------------------------------------------- independence


def _field_key(order: MaximalOrder):
    return order.poly


def _rational_power_product(order, elems, exps):
    out = [Fraction(c) for c in order.one]
    for e, k in zip(elems, exps):
        if k == 0:
            continue
        base = [Fraction(c) for c in e.coords] if k > 0 else order.inverse(e.coords)
        for _ in range(abs(k)):
            out = list(order.mul(out, base))
    return out


def _as_rational(order, coords):
    one = order.one
    lead = next(i for i, c in enumerate(one) if c)
    r = Fraction(coords[lead], one[lead])
    if all(Fraction(c) == r * o for c, o in zip(coords, one)):
        return r
    return None


def multiplicatively_independent(elems, relation_bound: int = 10**6) -> bool:
    """Independence over Q of the log vectors in the compositum of the fields.

    Elements may come from several fields; distinct fields must be linearly
    disjoint (true for distinct fields of the same prime degree).
    """
    elems = list(elems)
    if not elems:
        return True
    fields = []
    for e in elems:
        if all(_field_key(f) != _field_key(e.order) for f in fields):
            fields.append(e.order)
    idx = {_field_key(f): i for i, f in enumerate(fields)}
    combos = list(itertools.product(*[range(f.n) for f in fields]))
    old, iv.prec = iv.prec, _PREC
    try:
        vecs = []
        for e in elems:
            s = idx[_field_key(e.order)]
            logs = _interval_logs(e)
            deg_other = math.prod(f.n for f in fields) // e.order.n
            lognorm = iv.log(iv.mpf(abs(e.norm()))) * deg_other
            vecs.append([logs[c[s]] for c in combos] + [lognorm])
        if len(elems) > len(vecs[0]):
            indep = False
        else:
            gram = [[sum((a * b for a, b in zip(u, v)), iv.mpf(0)) for v in vecs] for u in vecs]
            det = _interval_det(gram)
            indep = det.a > 0 or det.b < 0
    finally:
        iv.prec = old
    if indep:
        return True
    # search an integer relation and verify it exactly
    with mpmath.workprec(_PREC):
        scale = mpmath.mpf(2) ** 120
        rows = []
        for i, v in enumerate(vecs):
            rows.append([int(mpmath.nint(_mid(x) * scale)) for x in v] + [int(i == j) for j in range(len(elems))])
    T, red = L.lll_rows(rows)
    m = len(vecs[0])
    for row in red:
        rel = row[m:]
        if not any(rel) or max(abs(c) for c in rel) > relation_bound:
            continue
        if _verify_relation(elems, fields, idx, rel):
            return False
    raise IndeterminateError("independence undecided at working precision")


def _verify_relation(elems, fields, idx, rel) -> bool:
    total = Fraction(1)
    for f in fields:
        members = [(e, k) for e, k in zip(elems, rel) if idx[_field_key(e.order)] == idx[_field_key(f)]]
        if not members:
            continue
        prod = _rational_power_product(f, [e for e, _ in members], [k for _, k in members])
        r = _as_rational(f, prod)
        if r is None:
            return False
        total *= r
    return abs(total) == 1

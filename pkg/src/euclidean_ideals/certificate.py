"""Pair qualification for Euclidean ideal classes and the residue class d mod f."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import cyclotomic as C
from . import polynomial as P
from .classgroup import (
    AnalyticMismatchError,
    ClassGroupError,
    ClassGroupResult,
    GenusCertificate,
    certified_field_data,
    hcf_abelian_certificate,
)
from .orders import DEFAULT_MAX_NODES, EnumerationLimit, MaximalOrder, maximal_order
from .units import IndeterminateError, UnitSearchError, UnitSystem
from .zmod import SubgroupModN, factorize, is_prime, quotient_order, strip_two_part

CONCLUSION = "at least one of K1, K2 has a Euclidean ideal class"

# (serial, p, q, polynomial, class number) as printed
H1_ROWS = [
    (1, 7, 13, "x^3 - x^2 - 2x + 1", 1),
    (2, 7, 13, "x^3 - x^2 - 4x - 1", 1),
    (3, 7, 19, "x^3 - x^2 - 2x + 1", 1),
    (4, 7, 19, "x^3 - x^2 - 6x + 7", 1),
    (5, 7, 31, "x^3 - x^2 - 2x + 1", 1),
    (6, 7, 31, "x^3 - x^2 - 10x + 8", 1),
    (7, 7, 37, "x^3 - x^2 - 2x + 1", 1),
    (8, 7, 37, "x^3 - x^2 - 12x - 11", 1),
    (9, 7, 43, "x^3 - x^2 - 2x + 1", 1),
    (10, 7, 43, "x^3 - x^2 - 14x - 8", 1),
    (11, 7, 61, "x^3 - x^2 - 2x + 1", 1),
    (12, 7, 61, "x^3 - x^2 - 20x + 9", 1),
    (13, 7, 67, "x^3 - x^2 - 2x + 1", 1),
    (14, 7, 67, "x^3 - x^2 - 22x - 5", 1),
    (15, 13, 19, "x^3 - x^2 - 6x + 7", 1),
]
H3_ROWS = [
    (1, 7, 13, "x^3 - x^2 - 30x - 27", 3),
    (2, 7, 13, "x^3 - x^2 - 30x + 64", 3),
    (3, 7, 19, "x^3 - x^2 - 44x - 69", 3),
    (4, 7, 19, "x^3 - x^2 - 44x + 64", 3),
    (5, 7, 31, "x^3 - x^2 - 72x - 209", 3),
    (6, 7, 31, "x^3 - x^2 - 72x + 225", 3),
    (7, 7, 37, "x^3 - x^2 - 86x + 211", 3),
    (8, 7, 37, "x^3 - x^2 - 86x - 48", 3),
    (9, 7, 43, "x^3 - x^2 - 100x + 379", 3),
    (10, 7, 43, "x^3 - x^2 - 100x - 223", 3),
    (11, 7, 61, "x^3 - x^2 - 142x + 680", 3),
    (12, 7, 61, "x^3 - x^2 - 142x - 601", 3),
    (13, 7, 67, "x^3 - x^2 - 156x - 608", 3),
    (14, 7, 67, "x^3 - x^2 - 156x + 799", 3),
    (15, 13, 19, "x^3 - x^2 - 82x + 64", 3),
]
TABLE_PAIRS = [(7, 13), (7, 19), (7, 31), (7, 37), (7, 43), (7, 61), (7, 67), (13, 19)]

RESOURCE_ERRORS = (
    EnumerationLimit,
    UnitSearchError,
    ClassGroupError,
    IndeterminateError,
    C.PrecisionError,
    AnalyticMismatchError,
)


class QualificationError(ValueError):
    pass


class NoSimultaneousGeneratorError(RuntimeError):
    pass


# ------------------------------------------------------------- field data


@dataclass
class FieldData:
    spec: C.AbelianFieldSpec
    polynomial: tuple[int, ...]
    order: MaximalOrder = field(repr=False)
    class_group: ClassGroupResult = field(repr=False)
    units: UnitSystem = field(repr=False)
    genus: GenusCertificate

    @property
    def class_number(self) -> int:
        return self.class_group.class_number

    @property
    def hilbert_class_field(self) -> C.AbelianFieldSpec | None:
        status = self.genus.hcf_abelian
        if status == "trivial":
            return self.spec.canonical
        if status == "certified":
            return C.genus_field(self.spec)
        return None


_FIELD_CACHE: dict = {}


def field_data(spec: C.AbelianFieldSpec, poly=None, max_nodes: int = DEFAULT_MAX_NODES) -> FieldData:
    """Order, class group, units and genus certificate of an abelian field.

    ``poly`` defaults to the Gaussian period polynomial.
    """
    if poly is None:
        poly = C.defining_polynomial(spec).coefficients
    poly = tuple(int(c) for c in poly)
    key = (spec.key(), poly, max_nodes)
    if key not in _FIELD_CACHE:
        order = maximal_order(list(poly))
        cg, units = certified_field_data(order, spec, max_nodes)
        genus = hcf_abelian_certificate(spec, cg)
        _FIELD_CACHE[key] = FieldData(spec.canonical, poly, order, cg, units, genus)
    return _FIELD_CACHE[key]


def clear_cache():
    _FIELD_CACHE.clear()


# ----------------------------------------------------------------- context


@dataclass
class PairContext:
    K1: C.AbelianFieldSpec
    K2: C.AbelianFieldSpec
    H_K1: C.AbelianFieldSpec
    H_K2: C.AbelianFieldSpec
    h1: int
    h2: int
    f1: int
    f2: int
    f: int
    G: SubgroupModN = field(repr=False)
    H1: SubgroupModN = field(repr=False)
    H2: SubgroupModN = field(repr=False)
    Hprime: SubgroupModN = field(repr=False)
    Hdoubleprime: SubgroupModN = field(repr=False)


def _fixing_at(spec: C.AbelianFieldSpec, level: int) -> SubgroupModN:
    c = spec.canonical
    return c.at_level(level).fixing_subgroup


def build_pair_context(K1: C.AbelianFieldSpec, K2: C.AbelianFieldSpec, cg1, cg2) -> PairContext:
    """Subgroups of (Z/f)^x for the field diagram of the pair.

    ``cg1``/``cg2`` are FieldData or (ClassGroupResult, GenusCertificate)
    pairs.  The quotient orders |G/H'| = h1, |G/H''| = h2 hold exactly when
    H(K_i) meets K1K2 in K_i, which is checked.
    """
    hcfs = []
    hs = []
    for K, data in ((K1, cg1), (K2, cg2)):
        if isinstance(data, FieldData):
            cg, genus = data.class_group, data.genus
        else:
            cg, genus = data
        if not cg.is_cyclic:
            raise QualificationError(f"class group of {K.descriptor()} is not cyclic")
        if genus.hcf_abelian == "trivial":
            hcfs.append(K.canonical)
        elif genus.hcf_abelian == "certified":
            hcfs.append(C.genus_field(K))
        else:
            raise QualificationError(f"Hilbert class field of {K.descriptor()} not certified abelian")
        hs.append(cg.class_number)
    f1, f2 = hcfs[0].conductor, hcfs[1].conductor
    f = math.lcm(16, f1, f2)
    G = _fixing_at(K1, f).intersect(_fixing_at(K2, f))
    H1 = _fixing_at(hcfs[0], f)
    H2 = _fixing_at(hcfs[1], f)
    Hp = G.intersect(H1)
    Hpp = G.intersect(H2)
    ctx = PairContext(K1.canonical, K2.canonical, hcfs[0], hcfs[1], hs[0], hs[1], f1, f2, f, G, H1, H2, Hp, Hpp)
    if G.order // Hp.order != hs[0] or G.order // Hpp.order != hs[1]:
        raise QualificationError("Hilbert class field meets the compositum beyond K_i")
    return ctx


def is_relatively_ramified(ctx_or_pair, i: int) -> bool:
    """Some rational prime has a larger ramification index in K1K2 than in K_i."""
    if isinstance(ctx_or_pair, PairContext):
        K1, K2 = ctx_or_pair.K1, ctx_or_pair.K2
    else:
        K1, K2 = ctx_or_pair
    Ki = K1 if i == 1 else K2
    comp = C.compositum(K1, K2)
    primes = factorize(comp.conductor).primes if comp.conductor > 1 else ()
    return any(C.ramification_index(comp, q) != C.ramification_index(Ki, q) for q in primes)


# --------------------------------------------------------------- certificate


@dataclass
class ResidueClassCertificate:
    d: int
    f: int
    u1: int
    checks: dict[str, bool]

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"d": str(self.d), "f": str(self.f), "u1": str(self.u1), "checks": dict(self.checks)}


def _construction_checks(ctx: PairContext, d: int) -> dict[str, bool]:
    f = ctx.f
    c1 = ctx.G.order // ctx.Hprime.order
    c2 = ctx.G.order // ctx.Hdoubleprime.order
    in_g = d in ctx.G
    return {
        "in_G": in_g,
        "generates_C1": in_g and quotient_order(d, ctx.Hprime) == c1,
        "generates_C2": in_g and quotient_order(d, ctx.Hdoubleprime) == c2,
        "gcd_condition": d % 2 == 1 and math.gcd((d - 1) // 2, f) == 1,
    }


def choose_residue_class(ctx: PairContext) -> ResidueClassCertificate:
    f = ctx.f
    nontrivial = [H for H, h in ((ctx.Hprime, ctx.h1), (ctx.Hdoubleprime, ctx.h2)) if h > 1]
    if not nontrivial:
        d = f - 1
    else:
        orders = [ctx.G.order // H.order for H in nontrivial]
        c = next(
            (c for c in ctx.G.elements if all(quotient_order(c, H) == k for H, k in zip(nontrivial, orders))),
            None,
        )
        if c is None:
            raise NoSimultaneousGeneratorError("no element of G generates both class group quotients")
        d = (-strip_two_part(c, f)) % f
    checks = _construction_checks(ctx, d)
    if not all(checks.values()):
        raise ArithmeticError(f"constructed d = {d} fails {[k for k, v in checks.items() if not v]}")
    return ResidueClassCertificate(d, f, d if d > 0 else f, checks)


def verify_certificate(ctx: PairContext, cert: ResidueClassCertificate) -> dict[str, bool]:
    """Recheck the four conditions from the field specs alone."""
    d, f = cert.d % ctx.f, ctx.f
    out = {}
    in_fields = []
    for K in (ctx.K1, ctx.K2):
        m = K.conductor
        in_fields.append(m == 1 or d % m in K.fixing_subgroup)
    out["in_G"] = all(in_fields)
    for name, K, H in (("generates_C1", ctx.K1, ctx.H_K1), ("generates_C2", ctx.K2, ctx.H_K2)):
        level = H.conductor
        if level == 1 or H.degree == K.degree:
            out[name] = out["in_G"]
            continue
        fix_K = _fixing_at(K, level)
        fix_H = H.canonical.fixing_subgroup
        index = fix_K.order // fix_H.order
        out[name] = d % level in fix_K and quotient_order(d % level, fix_H) == index
    gcd_ok = d % 2 == 1 and math.gcd((d - 1) // 2, f) == 1
    odd_primes = [q for q in factorize(f).primes if q != 2]
    local_ok = d % 4 != 1 and d % 2 == 1 and all(d % q != 1 for q in odd_primes)
    out["gcd_condition"] = gcd_ok and local_ok
    out["gcd_forms_agree"] = gcd_ok == local_ok
    out["u1_lift"] = cert.u1 > 0 and cert.u1 % f == d and cert.u1 <= f
    return out


# ----------------------------------------------------------- qualification


@dataclass
class QualificationReport:
    K1: str
    K2: str
    distinct: bool
    degrees_odd_prime: bool
    class_groups_cyclic: bool | None = None
    class_numbers: list[int] | None = None
    genus_numbers: list[int] | None = None
    hcf_abelian: list[str] | None = None
    relatively_ramified: list[bool] | None = None
    conclusion: str = "undecided"
    reasons: list[str] = field(default_factory=list)
    certificate: ResidueClassCertificate | None = None
    verification: dict[str, bool] | None = None
    statement: str | None = None
    context: PairContext | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {
            "K1": self.K1,
            "K2": self.K2,
            "distinct": self.distinct,
            "degrees_odd_prime": self.degrees_odd_prime,
            "class_groups_cyclic": self.class_groups_cyclic,
            "class_numbers": self.class_numbers,
            "genus_numbers": self.genus_numbers,
            "hcf_abelian": self.hcf_abelian,
            "relatively_ramified": self.relatively_ramified,
            "conclusion": self.conclusion,
            "reasons": list(self.reasons),
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "verification": self.verification,
            "statement": self.statement,
        }
        if self.context is not None:
            out["f"] = str(self.context.f)
            out["G_order"] = self.context.G.order
        return out


def _odd_prime(n: int) -> bool:
    return n > 2 and is_prime(n)


def qualify_pair(
    K1: C.AbelianFieldSpec,
    K2: C.AbelianFieldSpec,
    poly1=None,
    poly2=None,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> QualificationReport:
    rep = QualificationReport(
        K1.descriptor(),
        K2.descriptor(),
        distinct=K1 != K2,
        degrees_odd_prime=_odd_prime(K1.degree) and _odd_prime(K2.degree),
    )
    if not rep.distinct:
        rep.conclusion = "rejected"
        rep.reasons.append("fields are not distinct")
        return rep
    if not rep.degrees_odd_prime:
        rep.conclusion = "rejected"
        rep.reasons.append("degree is not an odd prime")
        return rep
    try:
        data = [field_data(K1, poly1, max_nodes), field_data(K2, poly2, max_nodes)]
    except RESOURCE_ERRORS as exc:
        rep.conclusion = "undecided"
        rep.reasons.append(f"resource limit: {exc}")
        return rep
    rep.class_numbers = [d.class_number for d in data]
    rep.genus_numbers = [d.genus.genus_number for d in data]
    rep.class_groups_cyclic = all(d.class_group.is_cyclic for d in data)
    rep.hcf_abelian = [d.genus.hcf_abelian for d in data]
    rep.relatively_ramified = [is_relatively_ramified((K1, K2), 1), is_relatively_ramified((K1, K2), 2)]
    if not rep.class_groups_cyclic:
        rep.conclusion = "rejected"
        rep.reasons.append("class group not cyclic")
    if not all(rep.relatively_ramified):
        rep.conclusion = "rejected"
        rep.reasons.append("not relatively ramified")
    if rep.reasons:
        return rep
    if "unknown" in rep.hcf_abelian:
        rep.conclusion = "undecided"
        rep.reasons.append("Hilbert class field not certified abelian over Q")
        return rep
    ctx = build_pair_context(K1, K2, data[0], data[1])
    rep.context = ctx
    cert = choose_residue_class(ctx)
    rep.certificate = cert
    rep.verification = verify_certificate(ctx, cert)
    if not all(rep.verification.values()):
        raise ArithmeticError(f"certificate failed independent verification: {rep.verification}")
    rep.conclusion = "qualified"
    rep.statement = CONCLUSION
    return rep


# ------------------------------------------------------------- corollary


def _check_corollary_primes(primes):
    if len(set(primes)) != 4:
        raise QualificationError("primes not distinct")
    for p in primes:
        if not is_prime(p):
            raise QualificationError(f"{p} is not prime")
        if p % 3 != 1:
            raise QualificationError(f"{p} is not 1 mod 3")


def admissible_subfields(p: int, q: int, max_nodes: int = DEFAULT_MAX_NODES):
    """Cubic subfields of Q(zeta_pq) with h = 1, or conductor pq with certified h = 3."""
    out = []
    for spec in C.enumerate_prime_degree_subfields(p * q, 3):
        data = field_data(spec, None, max_nodes)
        h = data.class_number
        if h == 1 or (h == 3 and spec.conductor == p * q and data.genus.hcf_abelian == "certified"):
            out.append(spec)
    return out


def corollary_driver(p1: int, q1: int, p2: int, q2: int, max_nodes: int = DEFAULT_MAX_NODES):
    _check_corollary_primes([p1, q1, p2, q2])
    left = admissible_subfields(p1, q1, max_nodes)
    right = admissible_subfields(p2, q2, max_nodes)
    return [qualify_pair(a, b, max_nodes=max_nodes) for a in left for b in right]


# ----------------------------------------------------------------- tables


def _table_rows(p: int, q: int):
    return [("h=1", *r) for r in H1_ROWS if r[1:3] == (p, q)] + [
        ("h=3", *r) for r in H3_ROWS if r[1:3] == (p, q)
    ]


def reproduce_tables(prime_pairs, max_nodes: int = DEFAULT_MAX_NODES) -> list[dict]:
    """One row per cubic subfield of Q(zeta_pq), with any matching printed rows."""
    rows = []
    for p, q in prime_pairs:
        cands = C.enumerate_prime_degree_subfields(p * q, 3)
        matches = {}
        for table, serial, _, _, text, h_printed in _table_rows(p, q):
            poly = P.parse(text)
            spec = C.identify_field(poly, cands)
            matches.setdefault(spec, []).append((table, serial, poly, h_printed))
        unmatched = matches.pop(None, [])
        for spec in sorted(cands, key=lambda s: (s.conductor, s.descriptor())):
            period = C.defining_polynomial(spec).coefficients
            printed = matches.get(spec, [])
            poly = printed[0][2] if printed else period
            data = field_data(spec, poly, max_nodes)
            rows.append(
                {
                    "p": p,
                    "q": q,
                    "field": spec.descriptor(),
                    "conductor": spec.conductor,
                    "period_polynomial": P.to_string(list(period)),
                    "polynomial": P.to_string(list(poly)),
                    "discriminant": data.order.discriminant,
                    "class_number": data.class_number,
                    "genus_number": data.genus.genus_number,
                    "hcf_abelian": data.genus.hcf_abelian,
                    "regulator": f"{float(data.units.regulator):.12g}",
                    "table_rows": [
                        {"table": t, "serial": s, "printed_class_number": h, "match": h == data.class_number}
                        for t, s, _, h in printed
                    ],
                }
            )
        for table, serial, poly, _ in unmatched:
            rows.append({"p": p, "q": q, "field": None, "polynomial": P.to_string(poly),
                         "table_rows": [{"table": table, "serial": serial, "match": False}]})
    return rows


def cubic_fields_up_to(bound: int) -> list[C.AbelianFieldSpec]:
    """Every cyclic cubic field of conductor <= bound, by conductor."""
    out = []
    for n in range(2, bound + 1):
        out.extend(s for s in C.enumerate_prime_degree_subfields(n, 3) if s.conductor == n)
    return out

import math

import pytest

from euclidean_ideals import certificate as Ct
from euclidean_ideals import cyclotomic as C
from euclidean_ideals import polynomial as P
from euclidean_ideals.zmod import element_order, is_prime, quotient_order, strip_two_part


@pytest.fixture(scope="module")
def ctx_7_13(k7, k13, data7, data13):
    return Ct.build_pair_context(k7, k13, data7, data13)


@pytest.fixture(scope="module")
def ctx_217_247(k217, k247, data217, data247):
    return Ct.build_pair_context(k217, k247, data217, data247)


def test_context_levels(ctx_7_13, ctx_217_247):
    assert ctx_217_247.f == math.lcm(16, 217, 247) == 857584
    assert ctx_217_247.G.order == 34560
    assert ctx_7_13.f == 1456
    assert ctx_7_13.G.order == ctx_7_13.Hprime.order


def test_relative_ramification(k7, k91, k91b, k217, k247):
    assert Ct.is_relatively_ramified((k217, k247), 1)
    assert Ct.is_relatively_ramified((k217, k247), 2)
    assert not Ct.is_relatively_ramified((k91, k7), 1)
    assert not Ct.is_relatively_ramified((k91, k91b), 1)
    assert not Ct.is_relatively_ramified((k91, k91b), 2)


def test_both_h1_gives_minus_one(ctx_7_13):
    cert = Ct.choose_residue_class(ctx_7_13)
    assert cert.d == 1455 and math.gcd(727, 1456) == 1
    assert all(Ct.verify_certificate(ctx_7_13, cert).values())


def test_217_247_certificate(ctx_217_247):
    cert = Ct.choose_residue_class(ctx_217_247)
    checks = Ct.verify_certificate(ctx_217_247, cert)
    assert all(checks.values())
    assert cert.d % 4 == 3
    assert quotient_order(cert.d, ctx_217_247.Hprime) == 3
    assert quotient_order(cert.d, ctx_217_247.Hdoubleprime) == 3


def test_stripped_parity_identity(ctx_217_247):
    f = ctx_217_247.f
    for c in ctx_217_247.G.elements[:200]:
        s = strip_two_part(c, f)
        n = element_order(s, f)
        assert pow(f - s, n, f) == f - 1


def test_verify_rejects_bad_d(ctx_217_247):
    bad = Ct.ResidueClassCertificate(1, ctx_217_247.f, 1, {})
    checks = Ct.verify_certificate(ctx_217_247, bad)
    assert not checks["generates_C1"] and not checks["generates_C2"] and not checks["gcd_condition"]


def test_minus_one_generates_iff_image_generates(ctx_217_247):
    ctx = ctx_217_247
    d = ctx.f - 1
    cert = Ct.ResidueClassCertificate(d, ctx.f, d, {})
    checks = Ct.verify_certificate(ctx, cert)
    assert checks["generates_C1"] == (quotient_order(d, ctx.Hprime) == ctx.G.order // ctx.Hprime.order)


def test_qualify_examples(k7, k13, k91, k217, k247):
    assert Ct.qualify_pair(k217, k247, P.parse("x^3 - x^2 - 72x - 209"), P.parse("x^3 - x^2 - 82x + 64")).conclusion == "qualified"
    rep = Ct.qualify_pair(k7, k13)
    assert rep.conclusion == "qualified" and rep.certificate.d == 1455
    rep = Ct.qualify_pair(k91, k7)
    assert rep.conclusion == "rejected" and "not relatively ramified" in rep.reasons
    assert Ct.qualify_pair(k7, k7).conclusion == "rejected"


def test_qualify_symmetric(k7, k13, k91, k217, k247):
    for a, b in [(k7, k13), (k91, k7), (k217, k247), (k13, k247)]:
        assert Ct.qualify_pair(a, b).conclusion == Ct.qualify_pair(b, a).conclusion


def test_resource_failure_is_undecided(k217, k13):
    Ct.clear_cache()
    try:
        rep = Ct.qualify_pair(k217, k13, max_nodes=5)
        assert rep.conclusion == "undecided"
    finally:
        Ct.clear_cache()


def test_no_simultaneous_generator_error(ctx_217_247):
    ctx = ctx_217_247
    # a context whose G is the trivial coset of H' cannot be generated
    broken = Ct.PairContext(**{**ctx.__dict__, "G": ctx.Hprime.intersect(ctx.Hdoubleprime)})
    with pytest.raises(Ct.NoSimultaneousGeneratorError):
        Ct.choose_residue_class(broken)


def test_corollary_examples():
    reps = Ct.corollary_driver(7, 31, 13, 19)
    pairs = {(r.K1, r.K2): r.conclusion for r in reps}
    assert set(pairs.values()) == {"qualified"}
    conductors = {(int(a.split(":")[0]), int(b.split(":")[0])) for a, b in pairs}
    assert (217, 247) in conductors
    with pytest.raises(Ct.QualificationError):
        Ct.corollary_driver(7, 13, 7, 19)
    with pytest.raises(Ct.QualificationError):
        Ct.corollary_driver(7, 13, 19, 23)


def test_reproduce_examples():
    rows = Ct.reproduce_tables([(7, 13), (13, 19), (7, 19)])
    by = {}
    for r in rows:
        for t in r["table_rows"]:
            by[(t["table"], t["serial"], r["p"], r["q"])] = r
    assert by[("h=1", 1, 7, 13)]["class_number"] == 1
    assert by[("h=1", 2, 7, 13)]["class_number"] == 1
    assert by[("h=3", 1, 7, 13)]["class_number"] == 3
    assert by[("h=3", 2, 7, 13)]["class_number"] == 3
    assert by[("h=3", 15, 13, 19)]["conductor"] == 247
    assert by[("h=3", 3, 7, 19)]["conductor"] == 133
    assert all(t["match"] for r in rows for t in r["table_rows"])


def _qualified_pairs_small():
    fields = Ct.cubic_fields_up_to(100)
    return [(a, b) for i, a in enumerate(fields) for b in fields[i + 1 :]]


def test_certificate_soundness_sweep():
    # every emitted certificate verifies; u1 splits completely in the compositum
    n = 0
    for a, b in _qualified_pairs_small():
        rep = Ct.qualify_pair(a, b)
        if rep.conclusion != "qualified":
            continue
        n += 1
        ctx, cert = rep.context, rep.certificate
        assert all(Ct.verify_certificate(ctx, cert).values())
        assert cert.d % 4 == 3 and cert.u1 % ctx.f == cert.d
        comp = C.compositum(a, b)
        u, found = cert.u1, 0
        while found < 25:
            if is_prime(u):
                assert C.splits_completely(comp, u)
                found += 1
            u += ctx.f
    assert n > 10


def test_report_to_dict_roundtrip(k7, k13):
    import json

    d = Ct.qualify_pair(k7, k13).to_dict()
    assert json.loads(json.dumps(d)) == d

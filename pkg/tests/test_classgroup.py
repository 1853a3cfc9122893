import pytest

from euclidean_ideals import cyclotomic as C
from euclidean_ideals.classgroup import (
    AnalyticMismatchError,
    analytic_class_number,
    class_group,
    genus_number,
    hcf_abelian_certificate,
    is_principal,
)
from euclidean_ideals.orders import factor_rational_prime, maximal_order, short_elements
from euclidean_ideals.units import regulator


def test_genus_number_examples(k7, k13, k91):
    assert genus_number(k91).genus_number == 3
    assert genus_number(k7).genus_number == 1
    assert genus_number(C.compositum(k7, k13)).genus_number == 1


def test_class_group_examples(data7, data91, data247):
    assert data7.class_number == 1
    assert data91.class_number == 3 and data91.class_group.is_cyclic
    assert data247.class_number == 3 and data247.class_group.is_cyclic


def test_class_group_of_163_noncyclic():
    spec = [s for s in C.enumerate_prime_degree_subfields(163, 3)][0]
    order = maximal_order(list(C.defining_polynomial(spec).coefficients))
    cg = class_group(order)
    assert cg.class_number == 4 and cg.invariants == [2, 2] and not cg.is_cyclic


def test_analytic_examples(data7, data91, k7, k91):
    assert analytic_class_number(k7, data7.units.regulator) == 1
    assert analytic_class_number(k91, data91.units.regulator) == 3


def test_analytic_detects_non_fundamental(data91, k91):
    u, v = data91.units.units
    # index 2 halves h: 3/2 is not integral
    with pytest.raises(AnalyticMismatchError):
        analytic_class_number(k91, regulator([u**2, v]))
    # index 3 gives the integer 1, caught by disagreement with the class group
    assert analytic_class_number(k91, regulator([u**3, v])) != data91.class_number


def test_hcf_certificate_examples(k91, k7, data91):
    assert hcf_abelian_certificate(k91, data91.class_group).hcf_abelian == "certified"
    assert hcf_abelian_certificate(k7, 1).hcf_abelian == "trivial"
    k1729 = next(s for s in C.enumerate_prime_degree_subfields(1729, 3) if s.conductor == 1729)
    cert = hcf_abelian_certificate(k1729, 3)
    assert cert.genus_number == 9 and cert.hcf_abelian == "unknown"


def test_witnesses_reverify(data91, data247):
    assert data91.class_group.verify_witnesses()
    assert data247.class_group.verify_witnesses()


def test_generator_is_nonprincipal(data91):
    cg = data91.class_group
    assert cg.generator is not None
    assert not is_principal(cg.generator.ideal, data91.units)
    assert is_principal(cg.generator.power(3), data91.units)


def test_genus_field_unramified_over_k(k91, k247):
    for k in (k91, k247):
        g = C.genus_field(k)
        assert g.degree == 9
        for q, _ in C.ramified_primes(k):
            assert C.ramification_index(g, q) == C.ramification_index(k, q)


def test_principal_primes_have_short_generator(o7):
    # h = 1: every prime above 13 has an element of norm 13 in the search box
    for p in factor_rational_prime(o7, 13):
        assert any(abs(e.norm()) == 13 for e in short_elements(p.ideal, 3 * 13 ** (2 / 3) + 1))
        assert is_principal(p.ideal)

import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from euclidean_ideals.zmod import (
    SubgroupModN,
    crt,
    element_order,
    euler_phi,
    factorize,
    full_group,
    is_prime,
    jacobi_symbol,
    quotient_order,
    strip_two_part,
    subgroup_closure,
    unit_group,
)


@pytest.mark.parametrize(
    "n, expected",
    [(1456, [(2, 4), (7, 1), (13, 1)]), (1, []), (857584, [(2, 4), (7, 1), (13, 1), (19, 1), (31, 1)])],
)
def test_factorize_examples(n, expected):
    assert list(factorize(n)) == expected


def test_factorize_reassembles_small():
    for n in range(1, 10_001):
        fac = factorize(n)
        assert math.prod(p**e for p, e in fac) == n
        assert all(is_prime(p) for p, _ in fac)


@given(st.integers(min_value=2, max_value=10**30))
@settings(max_examples=60, deadline=None)
def test_factorize_matches_sympy(n):
    assert dict(factorize(n)) == sympy.factorint(n)


def test_factorize_seed_invariant():
    n = 1000003 * 998244353 * 1000000007
    assert list(factorize(n, seed=1)) == list(factorize(n, seed=99))


@given(st.integers(min_value=0, max_value=10**24))
@settings(max_examples=200, deadline=None)
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


def test_unit_group_examples():
    g7 = unit_group(7)
    assert sorted(element_order(g, 7) for g in g7.generators) == [6]
    g16 = unit_group(16)
    assert sorted(element_order(g, 16) for g in g16.generators) == [2, 4]
    assert unit_group(91).order == 72 == sum(1 for a in range(91) if math.gcd(a, 91) == 1)


@pytest.mark.parametrize("x, n, order", [(6, 7, 2), (3, 7, 6), (2, 7, 3)])
def test_element_order_examples(x, n, order):
    assert element_order(x, n) == order


def test_element_order_brute_force():
    for n in range(2, 501):
        for x in range(1, n):
            if math.gcd(x, n) != 1:
                continue
            k = element_order(x, n)
            assert pow(x, k, n) == 1 % n
            assert all(pow(x, j, n) != 1 for j in range(1, k))


def test_strip_two_part_examples():
    assert strip_two_part(3, 7) == 2 and element_order(2, 7) == 3
    assert strip_two_part(6, 7) == 1
    assert strip_two_part(2, 7) == 2


def test_strip_two_part_odd_image_91():
    units = [x for x in range(1, 91) if math.gcd(x, 91) == 1]
    subs = {subgroup_closure([g], 91) for g in units}
    subs |= {a.intersect(b) for a in subs for b in subs}
    for c in units:
        s = strip_two_part(c, 91)
        assert element_order(s, 91) % 2 == 1
        for H in subs:
            q = quotient_order(c, H)
            if q % 2:
                # same cyclic image: s lies in <c>H and has the same quotient order
                assert quotient_order(s, H) == q
                assert s in subgroup_closure([c, *H.elements], 91)


def test_jacobi_examples():
    assert jacobi_symbol(2, 7) == 1
    assert jacobi_symbol(7, 7) == 0


def test_jacobi_matches_euler_criterion():
    for p in sympy.primerange(3, 1000):
        for a in range(p):
            e = pow(a, (p - 1) // 2, p)
            assert jacobi_symbol(a, p) == (0 if a == 0 else 1 if e == 1 else -1)


@given(st.integers(-(10**6), 10**6), st.integers(1, 10**5).map(lambda k: 2 * k + 1))
@settings(max_examples=300, deadline=None)
def test_jacobi_matches_sympy(a, n):
    assert jacobi_symbol(a, n) == sympy.jacobi_symbol(a, n)


def test_subgroup_closure_examples():
    assert subgroup_closure([6], 7).elements == (1, 6)
    assert subgroup_closure([], 7).elements == (1,)
    assert subgroup_closure([3], 7) == full_group(7)


def test_subgroup_lift_reduce_roundtrip():
    H = subgroup_closure([2], 91)
    up = H.lift(1456)
    assert up.order == H.order * euler_phi(1456) // euler_phi(91)
    assert up.reduce(91) == H


def test_quotient_order_matches_brute_force():
    H = subgroup_closure([3, 8], 91)
    for x in range(1, 91):
        if math.gcd(x, 91) != 1:
            continue
        k = 1
        while pow(x, k, 91) not in H:
            k += 1
        assert quotient_order(x, H) == k


def test_crt():
    assert crt([2, 3], [7, 13]) % 91 == 16
    assert isinstance(SubgroupModN(7, (1, 6)).order, int)

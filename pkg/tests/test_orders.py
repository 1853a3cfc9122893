import math
import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from euclidean_ideals import cyclotomic as C
from euclidean_ideals import polynomial as P
from euclidean_ideals.certificate import H1_ROWS, H3_ROWS
from euclidean_ideals.orders import (
    EnumerationLimit,
    ReducibleError,
    factor_rational_prime,
    ideal_norm,
    maximal_order,
    minkowski_embedding,
    short_elements,
)
from euclidean_ideals.zmod import small_primes

TABLE_POLYS = sorted({r[3] for r in H1_ROWS + H3_ROWS})


@pytest.mark.parametrize(
    "poly, disc",
    [("x^3 - x^2 - 2x + 1", 49), ("x^3 - x^2 - 30x - 27", 8281), ("x^3 - x^2 - 4x - 1", 169)],
)
def test_maximal_order_examples(poly, disc):
    assert maximal_order(P.parse(poly)).discriminant == disc


def test_power_basis_integral_conductor_7(o7):
    assert o7.index == 1


def test_reducible_rejected():
    with pytest.raises(ReducibleError):
        maximal_order(P.parse("x^3 - 1"))


@pytest.mark.parametrize("poly", TABLE_POLYS)
def test_discriminant_matches_sympy(poly):
    f = P.parse(poly)
    order = maximal_order(f)
    x = sympy.symbols("x")
    expected = sympy.polys.numberfields.basis.round_two(sympy.Poly(sum(c * x**i for i, c in enumerate(f)), x))[1]
    assert order.discriminant == int(expected)
    assert P.discriminant(f) == order.index**2 * order.discriminant


def test_factor_examples(o7):
    ps = factor_rational_prime(o7, 13)
    assert len(ps) == 3 and all(p.f == 1 and p.e == 1 for p in ps)
    (p7,) = factor_rational_prime(o7, 7)
    assert (p7.e, p7.f) == (3, 1)
    (p3,) = factor_rational_prime(o7, 3)
    assert p3.f == 3


def _fields_up_to(bound):
    out = []
    for n in range(7, bound + 1):
        out += [s for s in C.enumerate_prime_degree_subfields(n, 3) if s.conductor == n]
    return out


def test_sum_ef_and_product_equals_q():
    rng = random.Random(5)
    specs = _fields_up_to(250)
    for spec in rng.sample(specs, 12):
        order = maximal_order(list(C.defining_polynomial(spec).coefficients))
        for q in small_primes(40):
            ps = factor_rational_prime(order, q)
            assert sum(p.e * p.f for p in ps) == 3
            prod = order.unit_ideal()
            for p in ps:
                prod = prod * p.power(p.e)
            assert prod == order.ideal_from_generators([q])


def test_ideal_norm_examples(o7):
    assert ideal_norm(o7.unit_ideal()) == 1
    a, b, _ = factor_rational_prime(o7, 13)
    assert ideal_norm(a.ideal) == 13
    assert ideal_norm(a.ideal * b.ideal) == 169


def test_norm_multiplicative(o91):
    rng = random.Random(2)
    primes = [p for q in small_primes(30) for p in factor_rational_prime(o91, q)]
    for _ in range(100):
        a = rng.choice(primes).power(rng.randint(1, 2))
        b = rng.choice(primes).power(rng.randint(1, 2))
        assert (a * b).norm == a.norm * b.norm


@given(st.lists(st.integers(-50, 50), min_size=3, max_size=3).filter(any))
@settings(max_examples=100, deadline=None)
def test_norm_equals_embedding_product(coords):
    order = maximal_order(P.parse("x^3 - x^2 - 30x - 27"))
    vals = order.embed(coords, 128)
    prod = mpmath.fprod(vals)
    n = order.norm(coords)
    assert abs(prod - n) <= 1e-9 * max(1, abs(n))


def test_minkowski_embedding_examples(o7):
    one = o7.element([1, 0, 0])
    assert [float(v) for v in minkowski_embedding(one)] == [1.0, 1.0, 1.0]
    theta = o7.element(o7.from_power_basis([0, 1, 0]))
    vals = sorted(float(v) for v in minkowski_embedding(theta))
    # x^3 - x^2 - 2x + 1 has the roots -2cos(2 pi k/7), k = 1, 2, 3
    expected = sorted(-2 * math.cos(2 * math.pi * k / 7) for k in (1, 2, 3))
    assert all(-2 < v < 2 for v in vals)
    assert vals == pytest.approx(expected, abs=1e-12)


def test_short_elements_examples(o7, data7):
    whole = o7.unit_ideal()
    elems = short_elements(whole, 3.5)
    assert any(e.coords == (1, 0, 0) for e in elems)
    assert not [e for e in short_elements(whole, 2.99) if abs(e.norm()) == 1]
    for p in factor_rational_prime(o7, 13):
        found = [e for e in short_elements(p.ideal, 3 * 13 ** (2 / 3) + 1) if abs(e.norm()) == 13]
        assert bool(found)  # h = 1: every prime principal


def test_short_elements_brute_force(o91):
    (p,) = [p for p in factor_rational_prime(o91, 5)][:1]
    ideal = p.ideal
    bound = 400
    got = {e.coords for e in short_elements(ideal, bound)}
    brute = set()
    r = 12
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            for c in range(-r, r + 1):
                v = (a, b, c)
                if any(v) and ideal.contains(v) and o91.t2(v) <= bound:
                    w = tuple(-x for x in v)
                    brute.add(max(v, w))
    got_canon = {max(v, tuple(-x for x in v)) for v in got}
    assert got_canon == brute
    for v in got:
        assert ideal.contains(v) and o91.t2(v) <= bound


def test_short_elements_node_cap(o91):
    with pytest.raises(EnumerationLimit):
        short_elements(o91.unit_ideal(), 1e9, max_nodes=100)


def test_t2_exact(o91):
    v = (3, -1, 2)
    vals = o91.embed(v, 128)
    assert abs(sum(x * x for x in vals) - o91.t2(v)) < 1e-20
    assert isinstance(o91.t2(v), (int, Fraction))

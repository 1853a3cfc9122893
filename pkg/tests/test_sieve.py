import math

import pytest
import sympy

from euclidean_ideals import certificate as Ct
from euclidean_ideals import cyclotomic as C
from euclidean_ideals import sieve as S


@pytest.fixture(scope="module")
def pair_7_13(k7, k13, data7, data13):
    rep = Ct.qualify_pair(k7, k13)
    units = [*data7.units.units, data13.units.units[0]]
    return rep, C.compositum(k7, k13), units


def test_defaults_inside_window():
    p = S.SieveParams(1455, 1456, 10**6)
    assert p.epsilon == pytest.approx(0.099)
    assert p.a < p.b / (1 - p.epsilon) < 0.5
    assert p.problems() == []


def test_params_validation():
    assert S.SieveParams(3, 12, 1000).problems()
    assert S.SieveParams(5, 16, 1000).problems()  # (5-1)/2 = 2 shares 2 with 16
    with pytest.raises(ValueError):
        S.SieveParams(3, 16, 1000, a=0.2).validate()


def test_safe_prime_example():
    recs = S.heath_brown_set(S.SieveParams(3, 4, 100), lo=2, check=False)
    assert [r.p for r in recs if r.half_type == "prime"] == [7, 11, 23, 47, 59, 83]


def test_heath_brown_brute_force():
    params = S.SieveParams(3, 16, 10**4)
    X = params.X
    lo = X ** (1 - params.epsilon)
    expect = []
    for p in sympy.primerange(2, X):
        if p <= lo or p % 16 != 3:
            continue
        m = (p - 1) // 2
        fac = sympy.factorint(m)
        if sympy.isprime(m):
            expect.append(p)
        elif sum(fac.values()) == 2:
            q1 = min(fac)
            if X**params.a <= q1 <= X**params.b:
                expect.append(p)
    got = S.heath_brown_set(params)
    assert [r.p for r in got] == expect
    assert all(r.p % params.f == params.u1 for r in got)
    assert S.density_report([len(got)], X)[0] > 0


def test_segments_agree_with_single_pass(monkeypatch):
    params = S.SieveParams(1455, 1456, 3 * 10**5)
    whole = [r.p for r in S.heath_brown_set(params)]
    monkeypatch.setattr(S, "SEGMENT", 4096)
    assert [r.p for r in S.heath_brown_set(params)] == whole


def test_m_set_subset_of_window(pair_7_13):
    rep, K, units = pair_7_13
    params = S.SieveParams(rep.certificate.u1, rep.certificate.f, 10**6)
    m = S.m_epsilon_set(K, params)
    assert m.M_count > 0
    e_hi = params.b / (1 - params.epsilon)
    for r in m.records:
        assert r.p % params.f == params.u1
        assert C.splits_completely(K, r.p)
        half = (r.p - 1) // 2
        if r.half_type == "prime":
            assert sympy.isprime(half)
        else:
            q2 = half // r.q1
            assert r.q1 * q2 == half and sympy.isprime(r.q1) and sympy.isprime(q2) and r.q1 <= q2
            assert r.p**params.a < r.q1 < r.p**e_hi
    # an M-count over all p <= X is at least the J-style count over the same progression window
    j_style = [r for r in m.records if r.p > params.X ** (1 - params.epsilon)]
    assert len(j_style) <= m.M_count


def test_signature_trivial_cases(pair_7_13):
    _, _, units = pair_7_13
    one = units[0].order.element(units[0].order.one)
    for p in (1455 * 2 + 1, 13103, 21839):
        if not sympy.isprime(p) or not C.splits_completely(C.AbelianFieldSpec.from_generators(7, [6]), p):
            continue
        assert S.residue_signature(p, [one]) == (1,)
        assert S.residue_signature(p, [units[0] * units[0]]) == (1,)


def test_reduction_is_a_ring_map(pair_7_13):
    _, _, units = pair_7_13
    for p in (13103, 21839, 87359):
        for u in units:
            inv = u ** -1
            assert S.reduce_mod_prime(u, p) * S.reduce_mod_prime(inv, p) % p == 1
            # the image is a root of the characteristic polynomial of u
            o = u.order
            r = S.reduce_mod_prime(u, p)
            m = o.mul_matrix(u.coords)
            charpoly = sympy.Matrix(m).charpoly().all_coeffs()
            assert sum(int(c) * pow(r, len(charpoly) - 1 - i, p) for i, c in enumerate(charpoly)) % p == 0


def test_other_root_never_zero(pair_7_13):
    from euclidean_ideals import polynomial as P

    _, K, units = pair_7_13
    checked = 0
    for p in sympy.primerange(3, 10**6):
        if checked == 100:
            break
        if not C.splits_completely(K, p) or p in (7, 13):
            continue
        for u in units:
            o = u.order
            for r in P.roots_mod(list(o.poly), p):
                val = sum(c * P.evaluate(num, r) * pow(o.denominator, -1, p) for c, num in zip(u.coords, o.numerators))
                assert val % p != 0
        checked += 1
    assert checked == 100


def test_partition_and_winners(pair_7_13):
    rep, K, units = pair_7_13
    params = S.SieveParams(rep.certificate.u1, rep.certificate.f, 10**6)
    report, summary = S.run_sieve(params, K, units)
    assert sum(report.M_n_counts) == report.M_count
    again = [0] * 8
    for r in report.records:
        again[S.cell_index(r.signature)] += 1
        assert S.legendre(-1, r.p) == -1
    assert again == report.M_n_counts
    n0 = report.dominant_n0
    assert report.M_n_counts[n0] == max(report.M_n_counts)
    assert report.M_n_counts.index(max(report.M_n_counts)) == n0
    assert report.winner_count > 0
    for r in report.records:
        if r.winner is None:
            continue
        eta, p = r.winner_residue, r.p
        assert pow(eta, (p - 1) // 2, p) == p - 1
        for l in sympy.primefactors(p - 1):
            assert pow(eta, (p - 1) // l, p) != 1
    assert summary[-1]["M_count"] == report.M_count


def test_all_identical_signatures_fill_one_cell():
    params = S.SieveParams(1455, 1456, 10**5)
    rep = S.SieveReport(params, records=[S.SieveRecord(p, "prime", None) for p in (3, 5, 7)], M_count=3)
    counts = S.partition_m(rep, [(1, -1, 1)] * 3)
    assert sorted(counts) == [0] * 7 + [3]
    assert rep.dominant_n0 == S.cell_index((1, -1, 1))


def test_primitive_root_examples():
    assert S.is_primitive_root(3, 7, [2, 3])
    assert not S.is_primitive_root(2, 7, [2, 3])


def test_density_examples():
    assert S.density_report([0], 1000) == [0.0]
    x = 10**4
    assert S.density_ratio(5, x) == pytest.approx(5 * math.log(x) ** 2 / x)


def test_csv_header_and_determinism(pair_7_13):
    rep, K, units = pair_7_13
    params = S.SieveParams(rep.certificate.u1, rep.certificate.f, 10**5)
    a = S.to_csv(*S.run_sieve(params, K, units))
    b = S.to_csv(*S.run_sieve(params, K, units))
    assert a == b
    assert a.splitlines()[0] == ",".join(S.CSV_HEADER)

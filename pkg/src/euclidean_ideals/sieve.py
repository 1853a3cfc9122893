"""Finite-height sieve over a residue class: safe-prime and semiprime halves,
residue-symbol signatures of units and primitive-root statistics."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from . import cyclotomic as C
from . import kernels
from . import polynomial as P
from .orders import OrderElement
from .zmod import factorize, is_prime, small_primes

SEGMENT = 1 << 20
DEFAULT_A = 0.30
DEFAULT_B = 0.45
MARGIN = 1e-3
CSV_HEADER = ["p", "half_type", "q1", "sig1", "sig2", "sig3", "winner"]


def default_epsilon(b: float = DEFAULT_B) -> float:
    # b/(1-eps) < 1/2  <=>  eps < 1 - 2b
    return 1 - 2 * b - MARGIN


class SignatureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SieveParams:
    u1: int
    f: int
    X: int
    a: float = DEFAULT_A
    b: float = DEFAULT_B
    epsilon: float | None = None

    def __post_init__(self):
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", default_epsilon(self.b))

    def problems(self) -> list[str]:
        out = []
        if self.u1 <= 0 or self.f <= 0:
            out.append("u1 and f must be positive")
            return out
        if math.gcd(self.u1, self.f) != 1:
            out.append("gcd(u1, f) != 1")
        if self.u1 % 2 == 0 or math.gcd((self.u1 - 1) // 2, self.f) != 1:
            out.append("gcd((u1-1)/2, f) != 1")
        if self.f % 16:
            out.append("f is not divisible by 16")
        if not 0 < self.epsilon < 1:
            out.append("epsilon outside (0, 1)")
        if not 0.25 < self.a < self.b < 0.5:
            out.append("need 1/4 < a < b < 1/2")
        if not self.a < self.b / (1 - self.epsilon) < 0.5:
            out.append("need a < b/(1-epsilon) < 1/2")
        if self.X < 100:
            out.append("X must be at least 100")
        return out

    def validate(self):
        bad = self.problems()
        if bad:
            raise ValueError("; ".join(bad))
        return self


@dataclass
class SieveRecord:
    p: int
    half_type: str
    q1: int | None
    signature: tuple[int, ...] | None = None
    winner: int | None = None
    winner_residue: int | None = None

    @property
    def half_factors(self) -> list[int]:
        m = (self.p - 1) // 2
        return [m] if self.q1 is None else [self.q1, m // self.q1]

    def row(self) -> list[str]:
        sig = [str(s) for s in self.signature] if self.signature else ["", "", ""]
        sig += [""] * (3 - len(sig))
        win = "" if self.winner is None else f"eps{self.winner + 1}"
        return [str(self.p), self.half_type, "" if self.q1 is None else str(self.q1), *sig[:3], win]


@dataclass
class SieveReport:
    params: SieveParams
    J_count: int = 0
    M_count: int = 0
    records: list[SieveRecord] = field(default_factory=list)
    M_n_counts: list[int] = field(default_factory=lambda: [0] * 8)
    density_ratio: float = 0.0
    dominant_n0: int | None = None
    winner_count: int = 0
    winner_count_n0: int = 0


# ---------------------------------------------------------------- sieving


def progression(lo: int, hi: int, residue: int, modulus: int):
    """Primes p with lo <= p < hi and p = residue mod modulus, segment by segment."""
    lo = max(lo, 2)
    base = small_primes(math.isqrt(max(hi, 4)) + 1)
    for start in range(lo, hi, SEGMENT):
        for p in kernels.progression_primes(start, min(start + SEGMENT, hi), residue % modulus, modulus, base):
            yield int(p)


def classify_half(p: int, q1_lo: float, q1_hi: float, strict: bool, seed: int = 0):
    """Label (p-1)/2 as ("prime", None) or ("semiprime", q1) within the q1 window, else None.

    ``strict`` selects open window endpoints.
    """
    m = (p - 1) // 2
    if m < 2:
        return None
    if is_prime(m):
        return ("prime", None)
    fac = list(factorize(m, seed))
    if sum(e for _, e in fac) != 2:
        return None
    q1 = fac[0][0]
    inside = q1_lo < q1 < q1_hi if strict else q1_lo <= q1 <= q1_hi
    return ("semiprime", q1) if inside else None


def heath_brown_set(params: SieveParams, lo: int | None = None, check: bool = True, seed: int = 0) -> list[SieveRecord]:
    """Primes p = u1 mod f in (X^(1-eps), X) whose half is prime or a windowed semiprime.

    ``lo`` overrides the lower end of the range (inclusive).
    """
    if check:
        params.validate()
    X = params.X
    start = math.floor(X ** (1 - params.epsilon)) + 1 if lo is None else lo
    q_lo, q_hi = X**params.a, X**params.b
    out = []
    for p in progression(start, X, params.u1, params.f):
        lab = classify_half(p, q_lo, q_hi, strict=False, seed=seed)
        if lab:
            out.append(SieveRecord(p, *lab))
    return out


def m_epsilon_set(K: C.AbelianFieldSpec | None, params: SieveParams, check: bool = True, seed: int = 0) -> SieveReport:
    """Rational primes p <= X, p = u1 mod f, with (p-1)/2 prime or q1*q2, p^a < q1 < p^(b/(1-eps)).

    Each p stands for the degree-one primes of K above it; K, when given,
    must split p completely.
    """
    if check:
        params.validate()
    e_hi = params.b / (1 - params.epsilon)
    records = []
    for p in progression(2, params.X + 1, params.u1, params.f):
        lab = classify_half(p, p**params.a, p**e_hi, strict=True, seed=seed)
        if lab is None:
            continue
        if K is not None and not C.splits_completely(K, p):
            raise ArithmeticError(f"{p} does not split completely in the compositum")
        records.append(SieveRecord(p, *lab))
    rep = SieveReport(params, M_count=len(records), records=records)
    rep.density_ratio = density_ratio(rep.M_count, params.X)
    return rep


# ------------------------------------------------------------- signatures


def reduce_mod_prime(u: OrderElement, p: int) -> int:
    """Image of u under the degree-one prime above p at the smallest root of the polynomial."""
    order = u.order
    roots = P.roots_mod(list(order.poly), p)
    if not roots:
        raise SignatureError(f"no degree-one prime above {p}")
    r = min(roots)
    total = 0
    for c, (num, den) in zip(u.coords, _basis_mod(order)):
        if c:
            total += c * P.evaluate(num, r) * pow(den, -1, p)
    return total % p


def _basis_mod(order):
    return [(row, order.denominator) for row in order.numerators]


def residue_signature(p: int, units, fields=None) -> tuple[int, ...]:
    """Legendre symbols of the units at the chosen degree-one primes above p."""
    if fields is not None:
        for K in fields:
            if not C.splits_completely(K, p):
                raise SignatureError(f"{p} does not split completely")
    out = []
    for u in units:
        r = reduce_mod_prime(u, p)
        s = legendre(r, p)
        if s == 0:
            raise SignatureError(f"unit reduces to 0 modulo a prime above {p}")
        out.append(s)
    return tuple(out)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def cell_index(signature) -> int:
    """Cell 0..7 of a sign tuple; bit i set when the i-th symbol is -1."""
    return sum(1 << i for i, s in enumerate(signature) if s == -1)


def cell_signs(index: int) -> tuple[int, int, int]:
    """The tuple (c1, c2, c3) of a cell, with c_i = -symbol_i."""
    return tuple(1 if index >> i & 1 else -1 for i in range(3))


def partition_m(report: SieveReport, signatures=None) -> list[int]:
    if signatures is not None:
        for rec, sig in zip(report.records, signatures, strict=True):
            rec.signature = tuple(sig)
    counts = [0] * 8
    for rec in report.records:
        counts[cell_index(rec.signature)] += 1
    report.M_n_counts = counts
    report.dominant_n0 = max(range(8), key=lambda i: (counts[i], -i)) if report.records else None
    return counts


# --------------------------------------------------------- primitive roots


def is_primitive_root(g: int, p: int, prime_factors) -> bool:
    g %= p
    if g == 0:
        return False
    return kernels.power_orders_ok([g], [(p - 1) // l for l in prime_factors], p)[0]


def primitive_root_scan(records, units, signs=None) -> int:
    """Set ``winner`` on each record to the first i with c_i*eps_i primitive mod p.

    ``signs`` fixes (c1, c2, c3) for a single cell; by default each record
    uses c_i = -symbol_i so every candidate is a non-residue.  Returns the
    number of records with a winner.
    """
    count = 0
    for rec in records:
        p = rec.p
        cs = signs or tuple(-s for s in rec.signature)
        primes = sorted({2, *rec.half_factors})
        cands = [c * reduce_mod_prime(u, p) % p for c, u in zip(cs, units)]
        ok = kernels.power_orders_ok(cands, [(p - 1) // l for l in primes], p)
        rec.winner = rec.winner_residue = None
        for i, good in enumerate(ok):
            if good:
                rec.winner, rec.winner_residue = i, cands[i]
                count += 1
                break
    return count


# ---------------------------------------------------------------- reports


def density_ratio(count: int, X: float) -> float:
    if X < 100:
        raise ValueError("X must be at least 100")
    return count / (X / math.log(X) ** 2)


def density_report(counts, X) -> list[float]:
    """count / (X / log^2 X), elementwise over paired count and X sequences."""
    if isinstance(X, (int, float)):
        return [density_ratio(c, X) for c in counts]
    return [density_ratio(c, x) for c, x in zip(counts, X, strict=True)]


def x_ladder(X: int, rungs: int = 4, ratio: int = 10) -> list[int]:
    out = [X]
    while len(out) < rungs and out[-1] // ratio >= 100:
        out.append(out[-1] // ratio)
    return out[::-1]


def run_sieve(params: SieveParams, K=None, units=None, rungs: int = 4, seed: int = 0) -> tuple[SieveReport, list[dict]]:
    """M-set, signatures, partition and primitive roots at X, plus a summary per ladder rung."""
    rep = m_epsilon_set(K, params, seed=seed)
    rep.J_count = len(heath_brown_set(params, seed=seed))
    if units:
        partition_m(rep, [residue_signature(r.p, units) for r in rep.records])
        rep.winner_count = primitive_root_scan(rep.records, units)
        rep.winner_count_n0 = sum(
            1 for r in rep.records if r.winner is not None and cell_index(r.signature) == rep.dominant_n0
        )
    summary = []
    for x in x_ladder(params.X, rungs):
        sub = [r for r in rep.records if r.p <= x]
        cells = [0] * 8
        for r in sub:
            if r.signature:
                cells[cell_index(r.signature)] += 1
        summary.append(
            {
                "X": x,
                "M_count": len(sub),
                "M_n_counts": cells,
                "density_ratio": density_ratio(len(sub), x),
                "winners": sum(1 for r in sub if r.winner is not None),
            }
        )
    return rep, summary


def to_csv(report: SieveReport, summary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in report.records:
        w.writerow(rec.row())
    for s in summary:
        cells = " ".join(map(str, s["M_n_counts"]))
        w.writerow([f"X={s['X']}", "summary", str(s["M_count"]), cells, f"{s['density_ratio']:.9f}", "", str(s["winners"])])
    return buf.getvalue()

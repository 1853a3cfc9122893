"""Dense univariate polynomials over Z, Q and F_p.

Coefficient lists are constant term first; this is also the JSON wire form.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction

Poly = list  # list[int] | list[Fraction], constant term first


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f) -> int:
    return len(trim(f)) - 1


def parse(text: str) -> list[int]:
    """Parse e.g. ``"x^3 - x^2 - 30x - 27"`` (``*`` and ``**`` also accepted)."""
    s = text.replace(" ", "").replace("**", "^").replace("*", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    terms = re.findall(r"[+-][^+-]+", s)
    if "".join(terms) != s:
        raise ValueError(f"cannot parse polynomial {text!r}")
    coeffs: dict[int, int] = {}
    for t in terms:
        m = re.fullmatch(r"([+-])(\d*)(x(?:\^(\d+))?)?", t)
        if not m:
            raise ValueError(f"cannot parse term {t!r} in {text!r}")
        sign, num, var, exp = m.groups()
        if not num and not var:
            raise ValueError(f"cannot parse term {t!r} in {text!r}")
        c = int(num) if num else 1
        e = (int(exp) if exp else 1) if var else 0
        coeffs[e] = coeffs.get(e, 0) + (-c if sign == "-" else c)
    f = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        f[e] = c
    return trim(f)


def to_string(f) -> str:
    out = []
    for e in range(len(f) - 1, -1, -1):
        c = f[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            body = ("" if a == 1 else str(a)) + ("x" if e == 1 else f"x^{e}")
        out.append((sign, body))
    if not out:
        return "0"
    first = ("-" if out[0][0] == "-" else "") + out[0][1]
    return " ".join([first] + [f"{s} {b}" for s, b in out[1:]])


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def add(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def divmod_q(f, g):
    """Division over Q."""
    f = [Fraction(c) for c in trim(f)]
    g = [Fraction(c) for c in trim(g)]
    if not g:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        k = len(f) - len(g)
        c = f[-1] / g[-1]
        q[k] = c
        for i, b in enumerate(g):
            f[i + k] -= c * b
        f = trim(f)
    return trim(q), f


def derivative(f):
    return trim([i * f[i] for i in range(1, len(f))])


def resultant(f, g) -> Fraction:
    """Resultant over Q via the Euclidean algorithm."""
    f, g = trim(f), trim(g)
    if not f or not g:
        return Fraction(0)
    res = Fraction(1)
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return res * Fraction(g[0]) ** df
        _, r = divmod_q(f, g)
        if not r:
            return Fraction(0)
        dr = len(r) - 1
        res *= Fraction(g[-1]) ** (df - dr)
        if df % 2 == 1 and dg % 2 == 1:
            res = -res
        f, g = g, r


def discriminant(f) -> int:
    f = trim(f)
    n = len(f) - 1
    r = resultant(f, derivative(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    d = sign * r / f[-1]
    assert d.denominator == 1
    return int(d)


# ---------------------------------------------------------------- F_p


def reduce_mod(f, p):
    return trim([c % p for c in f])


def mul_mod(f, g, p):
    return reduce_mod(mul(f, g), p)


def divmod_mod(f, g, p):
    f = reduce_mod(f, p)
    g = reduce_mod(g, p)
    if not g:
        raise ZeroDivisionError
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        k = len(f) - len(g)
        c = f[-1] * inv % p
        q[k] = c
        for i, b in enumerate(g):
            f[i + k] = (f[i + k] - c * b) % p
        f = trim(f)
    return trim(q), f


def rem_mod(f, g, p):
    return divmod_mod(f, g, p)[1]


def monic_mod(f, p):
    f = reduce_mod(f, p)
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gcd_mod(f, g, p):
    f, g = reduce_mod(f, p), reduce_mod(g, p)
    while g:
        f, g = g, rem_mod(f, g, p)
    return monic_mod(f, p) if f else []


def powmod_mod(base, e, modulus, p):
    result = [1]
    base = rem_mod(base, modulus, p)
    while e:
        if e & 1:
            result = rem_mod(mul(result, base), modulus, p)
        base = rem_mod(mul(base, base), modulus, p)
        e >>= 1
    return result


def splits_completely_mod(f, p) -> bool:
    """True iff f (squarefree mod p) has deg f distinct roots in F_p."""
    f = monic_mod(f, p)
    xp = powmod_mod([0, 1], p, f, p)
    return not rem_mod(add(xp, [0, -1]), f, p)


def roots_mod(f, p) -> list[int]:
    """Sorted distinct roots of f in F_p."""
    f = reduce_mod(f, p)
    if not f:
        raise ValueError("zero polynomial")
    if p < 64:
        return [r for r in range(p) if evaluate(f, r) % p == 0]
    g = gcd_mod(f, add(powmod_mod([0, 1], p, f, p), [0, -1]), p)
    return sorted(r for r, _ in _split_linear(g, p))


def _split_linear(g, p):
    # g: product of distinct monic linear factors
    if degree(g) < 1:
        return []
    return [(fac[0] * -1 % p, 1) for fac in _equal_degree(g, 1, p, random.Random(p))]


def _sqf_parts(f, p):
    """Squarefree decomposition: list of (squarefree poly, multiplicity)."""
    f = monic_mod(f, p)
    out = []
    i = 1
    df = reduce_mod(derivative(f), p)
    if not df:
        # f is a p-th power
        root = [f[k] for k in range(0, len(f), p)]
        return [(g, m * p) for g, m in _sqf_parts(root, p)]
    c = gcd_mod(f, df, p)
    w = divmod_mod(f, c, p)[0]
    while len(w) > 1:
        y = gcd_mod(w, c, p)
        z = divmod_mod(w, y, p)[0]
        if len(z) > 1:
            out.append((monic_mod(z, p), i))
        i += 1
        w = y
        c = divmod_mod(c, y, p)[0]
    if len(c) > 1:
        root = [c[k] for k in range(0, len(c), p)]
        out += [(g, m * p) for g, m in _sqf_parts(root, p)]
    return out


def _distinct_degree(f, p):
    out = []
    h = [0, 1]
    d = 0
    while 2 * (d + 1) <= degree(f):
        d += 1
        h = powmod_mod(h, p, f, p)
        g = gcd_mod(f, add(h, [0, -1]), p)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_mod(f, g, p)[0]
            h = rem_mod(h, f, p)
    if degree(f) > 0:
        out.append((monic_mod(f, p), degree(f)))
    return out


def _equal_degree(g, d, p, rng):
    n = degree(g)
    if n == d:
        return [monic_mod(g, p)]
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = trim(a)
        if degree(a) < 1:
            continue
        if p == 2:
            t, acc = a, a
            for _ in range(d - 1):
                t = rem_mod(mul(t, t), g, p)
                acc = add(acc, t)
            b = reduce_mod(acc, p)
        else:
            b = add(powmod_mod(a, (p**d - 1) // 2, g, p), [-1])
        h = gcd_mod(g, b, p)
        if 0 < degree(h) < n:
            q = divmod_mod(g, h, p)[0]
            return _equal_degree(h, d, p, rng) + _equal_degree(q, d, p, rng)


def factor_mod(f, p, seed: int = 0) -> list[tuple[list[int], int]]:
    """Monic irreducible factorization over F_p, sorted, with multiplicities."""
    rng = random.Random(seed * 1_000_003 + p)
    out = []
    for g, m in _sqf_parts(f, p):
        for h, d in _distinct_degree(g, p):
            for irr in _equal_degree(h, d, p, rng):
                out.append((irr, m))
    out.sort(key=lambda t: (len(t[0]), [c for c in reversed(t[0])], t[1]))
    return out

"""Exact linear algebra over Z, Q and F_p for small dimensions."""

from __future__ import annotations

from fractions import Fraction


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def vec_mat(v, m):
    n = len(m[0])
    out = [0] * n
    for c, row in zip(v, m):
        if c:
            for j in range(n):
                out[j] += c * row[j]
    return out


def det(m) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            out = -out
        out *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return out


def int_det(m) -> int:
    """Determinant of an integer matrix (fraction-free Bareiss)."""
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for c in range(n - 1):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for r in range(c + 1, n):
            for k in range(c + 1, n):
                a[r][k] = (a[r][k] * a[c][c] - a[r][c] * a[c][k]) // prev
        prev = a[c][c]
    return sign * a[n - 1][n - 1] if n else 1


def inverse(m) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def solve_left(v, m):
    """x with x * m = v (m square, invertible), over Q."""
    return vec_mat(v, inverse(m))


# ---------------------------------------------------------------- Hermite form


def hnf(rows, ncols: int | None = None) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows: upper triangular with positive pivots and
    entries above each pivot reduced into ``[0, pivot)``.
    """
    rows = [list(map(int, r)) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: dict[int, list[int]] = {}
    for v in rows:
        _insert(pivots, v, ncols)
    out = [pivots[c] for c in sorted(pivots)]
    # reduce entries above pivots, left to right
    for i in range(len(out)):
        c = _lead(out[i])
        for k in range(i):
            q = out[k][c] // out[i][c]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def _lead(v):
    for i, x in enumerate(v):
        if x:
            return i
    return None


def _insert(pivots, v, ncols):
    v = list(v)
    for c in range(ncols):
        if v[c] == 0:
            continue
        r = pivots.get(c)
        if r is None:
            if v[c] < 0:
                v = [-x for x in v]
            pivots[c] = v
            return
        a, b = r[c], v[c]
        if b % a == 0:
            q = b // a
            v = [x - q * y for x, y in zip(v, r)]
            continue
        g, s, t = _xgcd(a, b)
        new_r = [s * x + t * y for x, y in zip(r, v)]
        v = [(b // g) * x - (a // g) * y for x, y in zip(r, v)]
        if new_r[c] < 0:
            new_r = [-x for x in new_r]
        pivots[c] = new_r
        # keep v small against the rest of the echelon
        for c2 in range(c + 1, ncols):
            r2 = pivots.get(c2)
            if r2 is not None and v[c2]:
                q = v[c2] // r2[c2]
                if q:
                    v = [x - q * y for x, y in zip(v, r2)]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_mod(rows, ncols: int, modulus: int) -> list[list[int]]:
    """HNF of the lattice spanned by ``rows`` together with ``modulus * Z^n``.

    The modulus must be a multiple of the lattice determinant for the
    result to equal ``hnf(rows)``; entries stay bounded by it.
    """
    pivots: dict[int, list[int]] = {}
    d = modulus
    scaled = [[d * int(i == j) for j in range(ncols)] for i in range(ncols)]
    for v in [[x % d for x in r] for r in rows] + scaled:
        for c in range(ncols):
            if v[c] == 0:
                continue
            r = pivots.get(c)
            if r is None:
                pivots[c] = v
                break
            a, b = r[c], v[c]
            g, s, t = _xgcd(a, b)
            new_r = [(s * x + t * y) for x, y in zip(r, v)]
            v = [((b // g) * x - (a // g) * y) % d for x, y in zip(r, v)]
            new_r = [x % d if j > c else x for j, x in enumerate(new_r)]
            pivots[c] = new_r
        # fall through: v reduced to zero
    out = [pivots[c] for c in range(ncols)]
    for i in range(ncols):
        for k in range(i):
            q = out[k][i] // out[i][i]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def in_lattice(v, basis) -> bool:
    """Membership of integer vector v in the lattice of a square HNF basis."""
    v = list(v)
    for i, row in enumerate(basis):
        c = _lead(row)
        if c is None:
            continue
        q, r = divmod(v[c], row[c])
        if r:
            return False
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def hnf_coordinates(v, basis):
    """Integer coordinates of v in a square HNF basis (None if outside)."""
    v = list(v)
    coords = []
    for row in basis:
        c = _lead(row)
        q, r = divmod(v[c], row[c])
        if r:
            return None
        coords.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return coords if not any(v) else None


# ---------------------------------------------------------------- F_p


def kernel_mod(m, p) -> list[list[int]]:
    """Basis of the left kernel {x : x * m = 0 (mod p)}."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    # row reduce [m | I]
    a = [[x % p for x in m[i]] + [int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return [row[cols:] for row in a[r:]]


def rank_mod(m, p) -> int:
    return len(m) - len(kernel_mod(m, p))


def row_space_mod(rows, p) -> list[list[int]]:
    """Reduced echelon basis of the F_p span of rows."""
    a = [[x % p for x in r] for r in rows]
    if not a:
        return []
    cols = len(a[0])
    out = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    out = a[:r]
    return out


# ---------------------------------------------------------------- LLL


def lll_gram(gram, delta=Fraction(99, 100)):
    """LLL on a positive definite Gram matrix (exact rationals).

    Returns ``(transform, reduced_gram)`` where the rows of ``transform``
    are the reduced basis vectors in terms of the input basis.
    """
    n = len(gram)
    g = [[Fraction(x) for x in row] for row in gram]
    t = identity(n)

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = g[i][j] - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
                mu[i][j] = s / bstar[j]
            bstar[i] = g[i][i] - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
        return mu, bstar

    def row_op(i, j, q):
        # b_i -= q * b_j
        t[i] = [a - q * b for a, b in zip(t[i], t[j])]
        gi = [g[i][k] - q * g[j][k] for k in range(n)]
        for k in range(n):
            g[i][k] = gi[k]
            g[k][i] = gi[k]
        g[i][i] = gi[i] - q * g[j][i]

    def swap(i, j):
        t[i], t[j] = t[j], t[i]
        g[i], g[j] = g[j], g[i]
        for row in g:
            row[i], row[j] = row[j], row[i]

    k = 1
    mu, bstar = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                row_op(k, j, q)
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            mu, bstar = gso()
            k = max(k - 1, 1)
    return t, [[x for x in row] for row in g]


def lll_rows(rows, delta=Fraction(99, 100)):
    """LLL-reduce integer row vectors (possibly dependent; zero rows dropped last).

    Returns ``(transform, reduced_rows)``; dependent inputs produce zero rows
    at the front, as in the MLLL variant.
    """
    m = len(rows)
    b = [list(map(int, r)) for r in rows]
    t = identity(m)

    k = 0
    while k < m:
        # Gram-Schmidt of the current prefix (recomputed; dimensions are tiny)
        bstar, mu, norms = _gso_rows(b[: k + 1])
        for j in range(k - 1, -1, -1):
            if norms[j] == 0:
                continue
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                t[k] = [x - q * y for x, y in zip(t[k], t[j])]
                bstar, mu, norms = _gso_rows(b[: k + 1])
        if k > 0 and norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            b[k], b[k - 1] = b[k - 1], b[k]
            t[k], t[k - 1] = t[k - 1], t[k]
            k = max(k - 1, 0)
        else:
            k += 1
    return t, b


def _gso_rows(b):
    n = len(b)
    bstar = []
    norms = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in b[i]]
        for j in range(i):
            if norms[j] == 0:
                continue
            mu[i][j] = sum(x * y for x, y in zip(b[i], bstar[j])) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
        bstar.append(v)
        norms.append(sum(x * x for x in v))
    return bstar, mu, norms


# ---------------------------------------------------------------- Smith form


def smith_invariants(m) -> list[int]:
    """Invariant factors (d_1 | d_2 | ...) of an integer matrix, ones included."""
    a = [list(map(int, r)) for r in m]
    rows, cols = len(a), len(a[0]) if a else 0
    out = []
    t = 0
    while t < min(rows, cols):
        # find a nonzero entry of least absolute value in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if not done:
                best = min(
                    [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
                    + [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
                )
                _, i, j = best
                a[t], a[i] = a[i], a[t]
                for row in a:
                    row[t], row[j] = row[j], row[t]
                continue
            # divisibility condition
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is not None:
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                done = False
        out.append(abs(a[t][t]))
        t += 1
    return out

"""Independent reference computations used by the tests.

None of these call into the package's Smith normal form; they use brute force
or classical formulas instead.
"""

from fractions import Fraction
from itertools import combinations, product
from math import gcd


def det(rows):
    """Laplace/Fraction elimination determinant, no Bareiss."""
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    sign, out = 1, Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        out *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return sign * out


def determinantal_factors(rows, ncols):
    """Invariant factors from gcds of k x k minors (d_k = D_k / D_{k-1})."""
    m = len(rows)
    out, prev = [], 1
    for k in range(1, min(m, ncols) + 1):
        g = 0
        for R in combinations(range(m), k):
            for C in combinations(range(ncols), k):
                g = gcd(g, int(det([[rows[i][j] for j in C] for i in R])))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def kernel_size_mod(rows, ncols, n):
    """``|{x in (Z/n)^a : A x = 0 mod n}|`` by enumeration."""
    count = 0
    for x in product(range(n), repeat=ncols):
        if all(sum(r[j] * x[j] for j in range(ncols)) % n == 0 for r in rows):
            count += 1
    return count


def image_size_mod(rows, ncols, n):
    seen = set()
    for x in product(range(n), repeat=ncols):
        seen.add(tuple(sum(r[j] * x[j] for j in range(ncols)) % n for r in rows))
    return len(seen)


def abelian_group_order(invariants):
    out = 1
    for d in invariants:
        out *= d
    return out


def cyclic_group_cohomology(m, ring_tag, n, k):
    """``H^k(Z/m; F)`` from the 2-periodic resolution, as (kind, data).

    Z[C_m] <-(t-1)- Z[C_m] <-N- Z[C_m] <-(t-1)- ...  Applying Hom(-, F) with
    trivial action gives F -0-> F -m-> F -0-> F -m-> ...
    Returns a string in the package's canonical module notation.
    """
    if k == 0:
        return {"INT": "Z", "RAT": "Q", "MOD": f"Z/{n}", "RAT_MOD_INT": "Q/Z"}[ring_tag]
    if ring_tag == "RAT":
        return "0"
    if ring_tag == "INT":
        return "0" if k % 2 else f"Z/{m}"
    if ring_tag == "RAT_MOD_INT":
        return f"Z/{m}" if k % 2 else "0"
    g = gcd(m, n)
    return "0" if g == 1 else f"Z/{g}"


def resolution_cochains(m, k_max):
    """Hom_G(P_*, Z) for the periodic resolution of Z over Z[C_m].

    P_k = Z[C_m] with boundaries alternating t - 1 and the norm.  With trivial
    action Hom_G(Z[C_m], Z) = Z and a boundary given by a group ring element
    induces multiplication by its augmentation (the column sum of its regular
    representation).  Returns the 1 x 1 coboundaries d^0 .. d^{k_max-1}.
    """
    t = [[1 if (i - j) % m == 1 else 0 for j in range(m)] for i in range(m)]
    tm1 = [[t[i][j] - (1 if i == j else 0) for j in range(m)] for i in range(m)]
    norm = [[1] * m for _ in range(m)]
    maps = []
    for k in range(k_max):
        b = tm1 if k % 2 == 0 else norm
        maps.append([[sum(b[i][0] for i in range(m))]])
    return maps


def random_unimodular(rng, n, steps=6):
    """Product of random elementary integer row operations."""
    a = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        # the inverse picks up the opposite column operation
        for r in range(n):
            inv[r][j] -= c * inv[r][i]
    return a, inv


def matmul(a, b, inner):
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(len(b[0]) if b else 0)]
            for i in range(len(a))]


def elementary_complex(rng, lo, hi, pieces=4):
    """Random integer complex on [lo, hi] built from pieces with known cohomology.

    Each piece is either a lone Z in degree k (contributes Z to H^k) or
    Z --m--> Z from degree k to k+1 (contributes Z/m to H^{k+1} when m > 1,
    nothing when m = 1, and Z in both degrees when m = 0).  Bases are then
    scrambled by unimodular matrices.  Returns (ranks, diffs, expected) with
    expected[k] = (free rank, sorted torsion orders).
    """
    slots = {k: [] for k in range(lo, hi + 1)}
    arrows = []
    expected = {k: [0, []] for k in range(lo, hi + 1)}
    for _ in range(pieces):
        if hi > lo and rng.random() < 0.7:
            k = rng.randrange(lo, hi)
            m = rng.choice([0, 1, 1, 2, 3, 4, 6])
            a, b = len(slots[k]), len(slots[k + 1])
            slots[k].append(None)
            slots[k + 1].append(None)
            arrows.append((k, a, b, m))
            if m == 0:
                expected[k][0] += 1
                expected[k + 1][0] += 1
            elif m > 1:
                expected[k + 1][1].append(m)
        else:
            k = rng.randrange(lo, hi + 1)
            slots[k].append(None)
            expected[k][0] += 1
    ranks = {k: len(v) for k, v in slots.items()}
    diffs = {}
    for k in range(lo, hi):
        diffs[k] = [[0] * ranks[k] for _ in range(ranks[k + 1])]
    for k, a, b, m in arrows:
        diffs[k][b][a] = m
    change = {k: random_unimodular(rng, ranks[k]) for k in slots}
    for k in range(lo, hi):
        P, _ = change[k + 1]
        _, Qinv = change[k]
        if ranks[k] and ranks[k + 1]:
            diffs[k] = matmul(matmul(P, diffs[k], ranks[k + 1]), Qinv, ranks[k])
    return ranks, diffs, {k: (v[0], sorted(v[1])) for k, v in expected.items()}

"""Cochain complexes of free modules on a finite degree window.

Grading is cohomological: ``d^k : C^k -> C^{k+1}``.  Degrees outside the window
carry the zero module.  The mapping cone of ``f : S -> T`` is
``T^k + S^{k+1}`` with differential ``[[d_T, f], [0, -d_S]]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Optional

from .exactla import (
    Matrix,
    integer_inverse,
    rational_nullspace,
    rational_rank,
    rational_solve,
    smith_normal_form,
    solve_integer,
)
from .modcat import (
    INT,
    MOD,
    RAT,
    ZZ,
    CoefficientRing,
    ModuleClass,
    ModuleMap,
    cokernel,
)


class WindowError(ValueError):
    """An operation needed a degree outside the complex's window."""


class NotAChainMap(ValueError):
    pass


@dataclass(frozen=True)
class CochainComplex:
    ring: CoefficientRing
    deg_min: int
    deg_max: int
    ranks: Mapping[int, int]
    differentials: Mapping[int, Matrix]
    labels: Mapping[int, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.deg_min > self.deg_max + 1:
            raise ValueError("empty window must have deg_min == deg_max + 1")
        ranks = {k: int(self.ranks.get(k, 0)) for k in range(self.deg_min, self.deg_max + 1)}
        for k in self.ranks:
            if not self.deg_min <= k <= self.deg_max and self.ranks[k]:
                raise WindowError(f"rank given in degree {k} outside window")
        diffs = {}
        for k in range(self.deg_min, self.deg_max):
            d = self.differentials.get(k)
            if d is None:
                d = Matrix.zeros(ranks[k + 1], ranks[k])
            if d.shape != (ranks[k + 1], ranks[k]):
                raise ValueError(f"d^{k} has shape {d.shape}, expected {(ranks[k + 1], ranks[k])}")
            diffs[k] = d
        for k, d in self.differentials.items():
            if k not in diffs and not d.is_zero():
                raise WindowError(f"nonzero differential d^{k} leaves the window")
        labels = {}
        for k in range(self.deg_min, self.deg_max + 1):
            lab = tuple(self.labels.get(k, ())) or tuple(f"e{k}_{i}" for i in range(ranks[k]))
            if len(lab) != ranks[k]:
                raise ValueError(f"{len(lab)} labels for rank {ranks[k]} in degree {k}")
            labels[k] = lab
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "differentials", diffs)
        object.__setattr__(self, "labels", labels)
        for k in range(self.deg_min, self.deg_max - 1):
            if not self.ring.is_zero_matrix(diffs[k + 1] @ diffs[k]):
                raise ValueError(f"d^{k + 1} d^{k} != 0")

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def d(self, k: int) -> Matrix:
        """``d^k`` as a matrix; zero outside the window."""
        if k in self.differentials:
            return self.differentials[k]
        return Matrix.zeros(self.rank(k + 1), self.rank(k))

    @property
    def degrees(self) -> range:
        return range(self.deg_min, self.deg_max + 1)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.rank(k) for k in self.degrees)

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "window": [self.deg_min, self.deg_max],
            "ranks": [self.rank(k) for k in self.degrees],
            "differentials": [self.d(k).tolist() for k in range(self.deg_min, self.deg_max)],
            "labels": [list(self.labels[k]) for k in self.degrees],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "CochainComplex":
        if isinstance(obj, str):
            obj = json.loads(obj)
        lo, hi = obj["window"]
        ranks = dict(zip(range(lo, hi + 1), obj["ranks"]))
        diffs = {}
        for k, rows in zip(range(lo, hi), obj["differentials"]):
            diffs[k] = Matrix.from_rows(rows, ranks[k]) if rows else Matrix.zeros(0, ranks[k])
        labels = dict(zip(range(lo, hi + 1), map(tuple, obj.get("labels", []))))
        return cls(CoefficientRing.parse(obj["ring"]), lo, hi, ranks, diffs, labels)


def shift(C: CochainComplex, k: int) -> CochainComplex:
    """``C[k]``: ``C[k]^n = C^{n+k}`` with differential multiplied by ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    return CochainComplex(
        C.ring,
        C.deg_min - k,
        C.deg_max - k,
        {n - k: C.rank(n) for n in C.degrees},
        {n - k: C.d(n).scale(sign) if sign < 0 else C.d(n) for n in range(C.deg_min, C.deg_max)},
        {n - k: C.labels[n] for n in C.degrees},
    )


@dataclass(frozen=True)
class ChainMap:
    """Degree-``shift`` map with ``f^k : source^k -> target^{k+shift}``.

    Commutes with differentials up to ``(-1)^shift``.  Missing components are zero.
    """

    source: CochainComplex
    target: CochainComplex
    shift: int
    components: Mapping[int, Matrix]

    def __post_init__(self):
        comps = {}
        for k in self.source.degrees:
            f = self.components.get(k)
            expected = (self.target.rank(k + self.shift), self.source.rank(k))
            if f is None:
                f = Matrix.zeros(*expected)
            inside = self.target.deg_min <= k + self.shift <= self.target.deg_max
            if not inside and not f.is_zero():
                raise WindowError(f"f^{k} lands outside the target window")
            if f.shape != expected:
                raise ValueError(f"f^{k} has shape {f.shape}, expected {expected}")
            comps[k] = f
        object.__setattr__(self, "components", comps)
        if self.source.ring != self.target.ring:
            raise ValueError("source and target live over different rings")

    @property
    def ring(self) -> CoefficientRing:
        return self.source.ring

    def f(self, k: int) -> Matrix:
        if k in self.components:
            return self.components[k]
        return Matrix.zeros(self.target.rank(k + self.shift), self.source.rank(k))

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        _check_parallel(self, other)
        return ChainMap(self.source, self.target, self.shift,
                        {k: self.f(k) - other.f(k) for k in self.source.degrees})

    @classmethod
    def identity(cls, C: CochainComplex) -> "ChainMap":
        return cls(C, C, 0, {k: Matrix.identity(C.rank(k)) for k in C.degrees})


def compose_maps(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g ∘ f`` (degrees add)."""
    if f.target != g.source:
        raise ValueError("cannot compose: target of f is not source of g")
    s = f.shift + g.shift
    comps = {k: g.f(k + f.shift) @ f.f(k) for k in f.source.degrees}
    return ChainMap(f.source, g.target, s, comps)


def _check_parallel(f: ChainMap, g: ChainMap):
    if f.source != g.source or f.target != g.target or f.shift != g.shift:
        raise ValueError("maps do not share source, target and shift")


def verify_chain_map(f: ChainMap) -> bool:
    sign = -1 if f.shift % 2 else 1
    ring = f.ring
    lo = min(f.source.deg_min, f.target.deg_min - f.shift) - 1
    hi = max(f.source.deg_max, f.target.deg_max - f.shift) + 1
    for k in range(lo, hi + 1):
        lhs = f.f(k + 1) @ f.source.d(k)
        rhs = (f.target.d(k + f.shift) @ f.f(k)).scale(sign)
        if not ring.is_zero_matrix(lhs - rhs):
            return False
    return True


def mapping_cone(f: ChainMap) -> CochainComplex:
    """Cone of a degree-0 chain map: ``T^k + S^{k+1}``, ``δ = [[d_T, f], [0, -d_S]]``."""
    if f.shift != 0:
        raise ValueError("mapping_cone needs a degree-0 chain map")
    if not verify_chain_map(f):
        raise NotAChainMap("f does not commute with the differentials")
    S, T = f.source, f.target
    lo = min(T.deg_min, S.deg_min - 1)
    hi = max(T.deg_max, S.deg_max - 1)
    ranks = {k: T.rank(k) + S.rank(k + 1) for k in range(lo, hi + 1)}
    diffs = {}
    for k in range(lo, hi):
        diffs[k] = Matrix.block([
            [T.d(k), f.f(k + 1)],
            [Matrix.zeros(S.rank(k + 2), T.rank(k)), -S.d(k + 1)],
        ])
    labels = {}
    for k in range(lo, hi + 1):
        t = T.labels.get(k, ()) if T.deg_min <= k <= T.deg_max else ()
        s = S.labels.get(k + 1, ()) if S.deg_min <= k + 1 <= S.deg_max else ()
        labels[k] = tuple(f"T:{x}" for x in t) + tuple(f"S:{x}" for x in s)
    return CochainComplex(T.ring, lo, hi, ranks, diffs, labels)


# -- cohomology ---------------------------------------------------------

def _integer_cohomology(C: CochainComplex, k: int) -> ModuleClass:
    d_out = C.d(k).to_int()
    d_in = C.d(k - 1).to_int()
    n = C.rank(k)
    snf = smith_normal_form(d_out)
    r = snf.rank
    if n - r == 0:
        return ModuleClass.zero(ZZ)
    # kernel basis = last columns of V; coordinates via rows of V^{-1}
    Vinv = integer_inverse(snf.V)
    coords = Vinv.submatrix(range(r, n), range(n)) @ d_in
    return cokernel(ModuleMap.of(ZZ, coords))


def _rational_dim(C: CochainComplex, k: int) -> int:
    return C.rank(k) - rational_rank(C.d(k)) - rational_rank(C.d(k - 1))


def _mod_cohomology(C: CochainComplex, k: int) -> ModuleClass:
    n = C.ring.n
    d_out = C.d(k).mod(n)
    d_in = C.d(k - 1).mod(n)
    dim = C.rank(k)
    snf = smith_normal_form(d_out)
    r = snf.rank
    # ker(d_out mod n) is generated by V e_i scaled, with orders e_i
    orders, steps = [], []
    for i in range(dim):
        e = gcd(snf.invariant_factors[i], n) if i < r else n
        orders.append(e)
        steps.append(n // e)
    Vinv = integer_inverse(snf.V)
    y = (Vinv @ d_in).mod(n)
    rel_cols = []
    for j in range(y.cols):
        col = []
        for i in range(dim):
            yi = y[i, j]
            if yi % steps[i]:
                raise ArithmeticError("image of d^{k-1} is not inside ker d^k modulo n")
            col.append((yi // steps[i]) % orders[i])
        rel_cols.append(col)
    pres = Matrix.diagonal(orders)
    if rel_cols:
        pres = pres.hstack(Matrix(dim, len(rel_cols), [rel_cols[j][i] for i in range(dim)
                                                         for j in range(len(rel_cols))]))
    factors = smith_normal_form(pres).invariant_factors
    return ModuleClass.build(C.ring, orders=factors)


def cohomology(C: CochainComplex, k: int) -> ModuleClass:
    """``H^k(C) = ker d^k / im d^{k-1}`` as a module class over ``C.ring``."""
    if not C.deg_min - 1 <= k <= C.deg_max + 1:
        raise WindowError(f"degree {k} is not within the window ±1")
    tag = C.ring.tag
    if tag == RAT:
        return ModuleClass(C.ring, divisible_copies=_rational_dim(C, k))
    if tag == INT:
        return _integer_cohomology(C, k)
    if tag == MOD:
        return _mod_cohomology(C, k)
    # Q/Z is divisible, so H^k(C ⊗ Q/Z) = H^k(C) ⊗ Q/Z + Tor(H^{k+1}(C), Q/Z)
    hk = _integer_cohomology(C, k)
    hk1 = _integer_cohomology(C, k + 1)
    return ModuleClass.build(C.ring, divisible=hk.free_rank, orders=hk1.cyclic_invariants)


def cohomology_all(C: CochainComplex) -> dict[int, ModuleClass]:
    return {k: cohomology(C, k) for k in C.degrees}


# -- homotopies -----------------------------------------------------------

@dataclass(frozen=True)
class Homotopy:
    """``f - g = δ J + J δ`` with ``J^k : source^k -> target^{k+shift-1}``."""

    f: ChainMap
    g: ChainMap
    components: Mapping[int, Matrix]

    def J(self, k: int) -> Matrix:
        s = self.f.shift - 1
        m = self.components.get(k)
        if m is None:
            return Matrix.zeros(self.f.target.rank(k + s), self.f.source.rank(k))
        return m


def verify_homotopy(h: Homotopy) -> bool:
    f, g = h.f, h.g
    _check_parallel(f, g)
    s = f.shift
    S, T = f.source, f.target
    for k, m in h.components.items():
        if m.shape != (T.rank(k + s - 1), S.rank(k)):
            raise ValueError(f"J^{k} has shape {m.shape}, expected {(T.rank(k + s - 1), S.rank(k))}")
    ring = f.ring
    for k in range(S.deg_min - 1, S.deg_max + 2):
        lhs = f.f(k) - g.f(k)
        rhs = T.d(k + s - 1) @ h.J(k) + h.J(k + 1) @ S.d(k)
        if not ring.is_zero_matrix(lhs - rhs):
            return False
    return True


def find_homotopy(f: ChainMap, g: ChainMap) -> Optional[Homotopy]:
    """Solve ``f - g = δ J + J δ`` for ``J`` as one linear system.

    Integer solutions over Z and Q/Z, rational over Q, and integer solutions of
    the system augmented by ``n·I`` over Z/n.
    """
    _check_parallel(f, g)
    s = f.shift
    S, T = f.source, f.target
    ring = f.ring
    # unknown blocks J^k for every k with a nonzero source and target slot
    blocks = {}
    offset = 0
    for k in S.degrees:
        rows, cols = T.rank(k + s - 1), S.rank(k)
        if rows and cols:
            blocks[k] = (offset, rows, cols)
            offset += rows * cols
    nunk = offset
    eq_rows, rhs = [], []
    for k in range(S.deg_min, S.deg_max + 1):
        target_rank = T.rank(k + s)
        src_rank = S.rank(k)
        if not target_rank or not src_rank:
            continue
        diff = f.f(k) - g.f(k)
        dT = T.d(k + s - 1)  # target^{k+s-1} -> target^{k+s}
        dS = S.d(k)          # source^k -> source^{k+1}
        for a in range(target_rank):
            for b in range(src_rank):
                row = [0] * nunk
                if k in blocks:
                    off, r, c = blocks[k]
                    for x in range(r):
                        coef = dT[a, x]
                        if coef:
                            row[off + x * c + b] += coef
                if k + 1 in blocks:
                    off, r, c = blocks[k + 1]
                    for y in range(c):
                        coef = dS[y, b]
                        if coef:
                            row[off + a * c + y] += coef
                eq_rows.append(row)
                rhs.append(diff[a, b])
    if not eq_rows:
        return Homotopy(f, g, {})
    A = Matrix(len(eq_rows), nunk, [e for r in eq_rows for e in r])
    if ring.tag == RAT:
        x = rational_solve(A, rhs)
    elif ring.tag == MOD:
        n = ring.n
        aug = A.mod(n).hstack(Matrix.identity(A.rows).scale(n))
        sol = solve_integer(aug, [int(v) % n for v in rhs])
        x = None if sol is None else tuple(v % n for v in sol[:nunk])
    else:
        x = solve_integer(A.to_int(), [int(v) for v in rhs])
    if x is None:
        return None
    comps = {}
    for k, (off, r, c) in blocks.items():
        comps[k] = Matrix(r, c, x[off:off + r * c])
    h = Homotopy(f, g, comps)
    assert verify_homotopy(h)
    return h


def direct_sum(A: CochainComplex, B: CochainComplex) -> CochainComplex:
    if A.ring != B.ring:
        raise ValueError("ring mismatch")
    lo, hi = min(A.deg_min, B.deg_min), max(A.deg_max, B.deg_max)
    ranks = {k: A.rank(k) + B.rank(k) for k in range(lo, hi + 1)}
    diffs = {k: Matrix.block([[A.d(k), Matrix.zeros(A.rank(k + 1), B.rank(k))],
                              [Matrix.zeros(B.rank(k + 1), A.rank(k)), B.d(k)]])
             for k in range(lo, hi)}
    return CochainComplex(A.ring, lo, hi, ranks, diffs)


def with_ring(C: CochainComplex, ring: CoefficientRing) -> CochainComplex:
    """Same integer presentation, read over another coefficient ring."""
    return CochainComplex(ring, C.deg_min, C.deg_max, C.ranks, C.differentials, C.labels)


def rational_cohomology_basis(C: CochainComplex, k: int):
    """Cocycle representatives of a Q-basis of ``H^k`` and a coordinate function.

    Returns ``(reps, coords)`` where ``coords(v)`` gives the class of a cocycle ``v``
    in the basis ``reps``.
    """
    n = C.rank(k)
    Z = rational_nullspace(C.d(k))
    Bm = C.d(k - 1)
    B = [Bm.col(j) for j in range(Bm.cols)]
    # greedily extend a basis of im d^{k-1} by kernel vectors
    basis = []
    for b in B:
        if rational_rank(_cols_to_matrix(basis + [b], n)) > len(basis):
            basis.append(tuple(Fraction(x) for x in b))
    nb = len(basis)
    reps = []
    for z in Z:
        if rational_rank(_cols_to_matrix(basis + reps + [z], n)) > nb + len(reps):
            reps.append(z)
    M = _cols_to_matrix(basis + reps, n)

    def coords(v):
        sol = rational_solve(M, v)
        if sol is None:
            raise ValueError("vector is not a cocycle")
        return tuple(sol[nb:])

    return reps, coords


def _cols_to_matrix(cols, n) -> Matrix:
    return Matrix(n, len(cols), [Fraction(cols[j][i]) for i in range(n) for j in range(len(cols))])

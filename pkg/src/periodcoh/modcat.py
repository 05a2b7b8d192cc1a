"""Maps between finite free modules over Z, Q, Z/n and Q/Z, and the isomorphism
classes of their kernels, cokernels and images.

Every map is an integer (or, over Q, rational) matrix acting entrywise on
``F^source_rank``.  Classification always goes through the integer Smith normal
form; Q/Z is never enumerated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from typing import Sequence

from .exactla import Matrix, clear_denominators, smith_normal_form

INT = "INT"
RAT = "RAT"
MOD = "MOD"
RAT_MOD_INT = "RAT_MOD_INT"


@dataclass(frozen=True)
class CoefficientRing:
    tag: str
    n: int = 0

    def __post_init__(self):
        if self.tag not in (INT, RAT, MOD, RAT_MOD_INT):
            raise ValueError(f"unknown coefficient ring tag {self.tag!r}")
        if self.tag == MOD and self.n < 2:
            raise ValueError("Z/n needs n >= 2")
        if self.tag != MOD and self.n != 0:
            raise ValueError("only Z/n carries a modulus")

    @classmethod
    def parse(cls, spec: str) -> "CoefficientRing":
        """Parse ``"Z"``, ``"Q"``, ``"Z/<n>"`` or ``"Q/Z"``."""
        s = spec.strip().replace(" ", "")
        if s == "Z":
            return ZZ
        if s == "Q":
            return QQ
        if s == "Q/Z":
            return QZ
        m = re.fullmatch(r"Z/(\d+)(Z)?", s)
        if m:
            return cls(MOD, int(m.group(1)))
        raise ValueError(f"cannot parse coefficient ring {spec!r}")

    def __str__(self):
        return {INT: "Z", RAT: "Q", RAT_MOD_INT: "Q/Z"}.get(self.tag) or f"Z/{self.n}"

    @property
    def is_field(self) -> bool:
        return self.tag == RAT

    def reduce(self, A: Matrix) -> Matrix:
        """Canonical integer representative of ``A`` for this ring (mod n over Z/n)."""
        if self.tag == MOD:
            return A.mod(self.n)
        if self.tag == RAT:
            return A
        return A.to_int()

    def is_zero_matrix(self, A: Matrix) -> bool:
        if self.tag == MOD:
            return all(int(e) % self.n == 0 for e in A.to_int().entries)
        return A.is_zero()


ZZ = CoefficientRing(INT)
QQ = CoefficientRing(RAT)
QZ = CoefficientRing(RAT_MOD_INT)


def Zmod(n: int) -> CoefficientRing:
    return CoefficientRing(MOD, n)


def _chain(orders: Sequence[int]) -> tuple[int, ...]:
    """Rewrite a direct sum of cyclic groups as an invariant-factor chain, dropping Z/1."""
    a = sorted(int(o) for o in orders if int(o) != 1)
    if any(o <= 0 for o in a):
        raise ValueError("cyclic orders must be positive")
    k = len(a)
    for i in range(k):
        for j in range(i + 1, k):
            g = gcd(a[i], a[j])
            a[i], a[j] = g, a[i] // g * a[j]
    return tuple(o for o in a if o != 1)


@dataclass(frozen=True)
class ModuleClass:
    """Isomorphism class ``D^divisible + Z^free + Z/c_1 + ... + Z/c_k`` over a ring.

    ``D`` is Q over the rationals and Q/Z over Q/Z; ``cyclic_invariants`` always
    form a divisibility chain.  Use :meth:`build` to canonicalize arbitrary orders.
    """

    ring: CoefficientRing
    divisible_copies: int = 0
    free_rank: int = 0
    cyclic_invariants: tuple[int, ...] = field(default=())

    def __post_init__(self):
        cyc = tuple(self.cyclic_invariants)
        object.__setattr__(self, "cyclic_invariants", cyc)
        if _chain(cyc) != cyc:
            raise ValueError(f"cyclic invariants {cyc} are not a divisibility chain")
        tag = self.ring.tag
        if tag == RAT and (self.free_rank or cyc):
            raise ValueError("a Q-module class has only divisible copies")
        if tag == INT and self.divisible_copies:
            raise ValueError("a Z-module class has no divisible copies")
        if tag == MOD and (self.free_rank or self.divisible_copies or any(self.ring.n % c for c in cyc)):
            raise ValueError("a Z/n-module class has only cyclic summands dividing n")
        if tag == RAT_MOD_INT and self.free_rank:
            raise ValueError("a Q/Z-module class has no free summands")

    @classmethod
    def build(cls, ring, divisible=0, free=0, orders=()) -> "ModuleClass":
        return cls(ring, divisible, free, _chain(orders))

    @classmethod
    def zero(cls, ring) -> "ModuleClass":
        return cls(ring)

    def is_zero(self) -> bool:
        return not (self.divisible_copies or self.free_rank or self.cyclic_invariants)

    @property
    def torsion_order(self) -> int:
        return prod(self.cyclic_invariants)

    def direct_sum(self, other: "ModuleClass") -> "ModuleClass":
        _same_ring(self, other)
        return ModuleClass.build(
            self.ring,
            self.divisible_copies + other.divisible_copies,
            self.free_rank + other.free_rank,
            self.cyclic_invariants + other.cyclic_invariants,
        )

    def __str__(self):
        parts = []
        if self.divisible_copies:
            base = "Q" if self.ring.tag == RAT else "Q/Z"
            parts.append(_power(base, self.divisible_copies))
        if self.free_rank:
            parts.append(_power("Z", self.free_rank))
        parts += [f"Z/{c}" for c in self.cyclic_invariants]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "divisible_copies": self.divisible_copies,
            "free_rank": self.free_rank,
            "cyclic_invariants": list(self.cyclic_invariants),
            "text": str(self),
        }


def _power(base: str, k: int) -> str:
    if k == 1:
        return base
    return f"({base})^{k}" if "/" in base else f"{base}^{k}"


def _same_ring(a: ModuleClass, b: ModuleClass):
    if a.ring != b.ring:
        raise ValueError(f"ring mismatch: {a.ring} vs {b.ring}")


def module_class_equal(a: ModuleClass, b: ModuleClass) -> bool:
    _same_ring(a, b)
    return (a.divisible_copies, a.free_rank, a.cyclic_invariants) == (
        b.divisible_copies,
        b.free_rank,
        b.cyclic_invariants,
    )


@dataclass(frozen=True)
class ModuleMap:
    ring: CoefficientRing
    source_rank: int
    target_rank: int
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target_rank, self.source_rank):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.source_rank} -> {self.target_rank}"
            )
        if self.ring.tag != RAT and not self.matrix.is_integral():
            raise ValueError(f"maps over {self.ring} must have integer matrices")

    @classmethod
    def of(cls, ring, A: Matrix) -> "ModuleMap":
        return cls(ring, A.cols, A.rows, A)

    @classmethod
    def identity(cls, ring, n: int) -> "ModuleMap":
        return cls.of(ring, Matrix.identity(n))

    @classmethod
    def scalar(cls, ring, c: int, n: int = 1) -> "ModuleMap":
        return cls.of(ring, Matrix.identity(n).scale(c))


def compose(M2: ModuleMap, M1: ModuleMap) -> ModuleMap:
    """``M2 ∘ M1``."""
    if M1.ring != M2.ring:
        raise ValueError(f"ring mismatch: {M1.ring} vs {M2.ring}")
    if M1.target_rank != M2.source_rank:
        raise ValueError(f"cannot compose {M1.source_rank}->{M1.target_rank} with "
                         f"{M2.source_rank}->{M2.target_rank}")
    return ModuleMap(M1.ring, M1.source_rank, M2.target_rank, M2.matrix @ M1.matrix)


def _integer_matrix(M: ModuleMap) -> Matrix:
    A = M.matrix
    if M.ring.tag == RAT:
        return clear_denominators(A)
    if M.ring.tag == MOD:
        return A.mod(M.ring.n)
    return A.to_int()


def kernel(M: ModuleMap) -> tuple[ModuleClass, Matrix]:
    """Kernel class and generators (as columns, in source coordinates).

    Over Q/Z the columns are the torsion generators ``V[:, i] / d_i``; divisible
    summands get no generators.
    """
    ring = M.ring
    A = _integer_matrix(M)
    snf = smith_normal_form(A)
    r = snf.rank
    a = M.source_rank
    V = snf.V
    d = snf.invariant_factors
    if ring.tag in (INT, RAT):
        gens = V.columns(range(r, a))
        if ring.tag == INT:
            return ModuleClass(ring, free_rank=a - r), gens
        return ModuleClass(ring, divisible_copies=a - r), gens
    if ring.tag == MOD:
        n = ring.n
        orders, cols = [], []
        for i in range(a):
            e = gcd(d[i], n) if i < r else n
            if e > 1:
                orders.append(e)
                step = n // e
                cols.append([(step * x) % n for x in V.col(i)])
        gens = Matrix(a, len(cols), [cols[j][i] for i in range(a) for j in range(len(cols))])
        return ModuleClass.build(ring, orders=orders), gens
    # Q/Z: x = V y with d_i y_i = 0 in Q/Z
    orders, cols = [], []
    for i in range(r):
        if d[i] > 1:
            orders.append(d[i])
            cols.append([Fraction(x, d[i]) for x in V.col(i)])
    gens = Matrix(a, len(cols), [cols[j][i] for i in range(a) for j in range(len(cols))])
    return ModuleClass.build(ring, divisible=a - r, orders=orders), gens


def cokernel(M: ModuleMap) -> ModuleClass:
    ring = M.ring
    m = M.target_rank
    if ring.tag == MOD:
        n = ring.n
        aug = _integer_matrix(M).hstack(Matrix.identity(m).scale(n))
        return ModuleClass.build(ring, orders=smith_normal_form(aug).invariant_factors)
    snf = smith_normal_form(_integer_matrix(M))
    r = snf.rank
    if ring.tag == INT:
        return ModuleClass.build(ring, free=m - r, orders=snf.invariant_factors[:r])
    if ring.tag == RAT:
        return ModuleClass(ring, divisible_copies=m - r)
    return ModuleClass(ring, divisible_copies=m - r)


def image(M: ModuleMap) -> ModuleClass:
    ring = M.ring
    snf = smith_normal_form(_integer_matrix(M))
    r = snf.rank
    if ring.tag == INT:
        return ModuleClass(ring, free_rank=r)
    if ring.tag == RAT:
        return ModuleClass(ring, divisible_copies=r)
    if ring.tag == RAT_MOD_INT:
        return ModuleClass(ring, divisible_copies=r)
    n = ring.n
    return ModuleClass.build(ring, orders=[n // gcd(x, n) for x in snf.invariant_factors[:r]])


def image_measure(M: ModuleMap) -> tuple[int, int]:
    """A size for ``im M`` that is strictly monotone along chains of nested images.

    (rank, torsion-of-cokernel) over Z, rank over Q and Q/Z, cardinality over Z/n.
    Two nested images are equal iff their measures agree.
    """
    ring = M.ring
    if ring.tag == MOD:
        cls = image(M)
        return (0, cls.torsion_order)
    snf = smith_normal_form(_integer_matrix(M))
    if ring.tag == INT:
        # larger lattices have smaller index in their saturation
        return (snf.rank, -prod(x for x in snf.invariant_factors if x))
    return (snf.rank, 0)

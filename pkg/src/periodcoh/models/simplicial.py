"""Finite-level simplicial sets, their normalized cochains, and integration
over the simplicial circle.

The circle ``S`` is ``Δ[1]/∂Δ[1]``: its ``n``-simplices are the base point
``*`` and ``σ_1..σ_n``, where ``σ_k`` is the vertex sequence with ``k`` zeros
followed by ones.  A simplicial set here is described by callables for
simplices, faces and degeneracies, so products and nerves come for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Hashable, Sequence

from ..complexes import CochainComplex
from ..exactla import Matrix
from ..modcat import CoefficientRing

BASE = "*"


@dataclass(frozen=True)
class SimplicialSet:
    name: str
    simplices: Callable[[int], Sequence[Hashable]]
    face: Callable[[int, int, Hashable], Hashable]        # (n, i, x) -> d_i x
    degeneracy: Callable[[int, int, Hashable], Hashable]  # (n, i, x) -> s_i x

    def is_degenerate(self, n: int, x) -> bool:
        if n == 0:
            return False
        for i in range(n):
            y = self.face(n, i, x)
            if self.degeneracy(n - 1, i, y) == x:
                return True
        return False

    def nondegenerate(self, n: int) -> list:
        return [x for x in self.simplices(n) if not self.is_degenerate(n, x)]


def point() -> SimplicialSet:
    return SimplicialSet("pt", lambda n: [()], lambda n, i, x: (), lambda n, i, x: ())


def circle() -> SimplicialSet:
    """Simplices are ``BASE`` or the zero count ``k`` in ``1..n`` (that is, ``σ_k``)."""

    def simplices(n):
        return [BASE] + list(range(1, n + 1))

    def face(n, i, x):
        if x == BASE:
            return BASE
        k = x  # zeros at 0..k-1, ones at k..n
        kk = k - 1 if i < k else k
        return BASE if kk in (0, n) else kk

    def degeneracy(n, i, x):
        if x == BASE:
            return BASE
        k = x
        return k + 1 if i < k else k

    return SimplicialSet("S", simplices, face, degeneracy)


def standard_simplex(p: int) -> SimplicialSet:
    """``Δ[p]``: nondecreasing vertex sequences in ``0..p``."""

    def simplices(n):
        out = []

        def rec(prefix, lo):
            if len(prefix) == n + 1:
                out.append(tuple(prefix))
                return
            for v in range(lo, p + 1):
                rec(prefix + [v], v)

        rec([], 0)
        return out

    return SimplicialSet(f"Δ[{p}]", simplices,
                         lambda n, i, x: x[:i] + x[i + 1:],
                         lambda n, i, x: x[: i + 1] + x[i:])


def nerve(m: int) -> SimplicialSet:
    """The bar construction of ``Z/m``: ``n``-simplices are ``n``-tuples of residues."""

    def face(n, i, g):
        if i == 0:
            return g[1:]
        if i == n:
            return g[:-1]
        return g[: i - 1] + ((g[i - 1] + g[i]) % m,) + g[i + 1:]

    return SimplicialSet(f"BZ/{m}", lambda n: list(product(range(m), repeat=n)),
                         face, lambda n, i, g: g[:i] + (0,) + g[i:])


def constant(elements: Sequence[Hashable], name: str = "Γ") -> SimplicialSet:
    elems = list(elements)
    return SimplicialSet(name, lambda n: elems, lambda n, i, x: x, lambda n, i, x: x)


def product_set(X: SimplicialSet, Y: SimplicialSet) -> SimplicialSet:
    return SimplicialSet(
        f"{X.name}x{Y.name}",
        lambda n: [(a, b) for a in X.simplices(n) for b in Y.simplices(n)],
        lambda n, i, x: (X.face(n, i, x[0]), Y.face(n, i, x[1])),
        lambda n, i, x: (X.degeneracy(n, i, x[0]), Y.degeneracy(n, i, x[1])),
    )


def check_simplicial_identities(X: SimplicialSet, levels: int) -> bool:
    """All five simplicial identities on every simplex through ``levels``."""
    for n in range(levels + 1):
        for x in X.simplices(n):
            for j in range(n + 1):
                for i in range(j):
                    if n >= 1 and X.face(n - 1, i, X.face(n, j, x)) != X.face(n - 1, j - 1, X.face(n, i, x)):
                        return False
            for j in range(n + 1):
                sj = X.degeneracy(n, j, x)
                for i in range(n + 2):
                    lhs = X.face(n + 1, i, sj)
                    if i < j:
                        rhs = X.degeneracy(n - 1, j - 1, X.face(n, i, x)) if n >= 1 else None
                    elif i in (j, j + 1):
                        rhs = x
                    else:
                        rhs = X.degeneracy(n - 1, j, X.face(n, i - 1, x)) if n >= 1 else None
                    if rhs is not None and lhs != rhs:
                        return False
                for i in range(j + 1):
                    if X.degeneracy(n + 1, i, sj) != X.degeneracy(n + 1, j + 1, X.degeneracy(n, i, x)):
                        return False
    return True


# -- normalized cochains ------------------------------------------------------

@dataclass(frozen=True)
class NormalizedCochains:
    """Functions on nondegenerate simplices of levels ``0..levels``."""

    X: SimplicialSet
    levels: int

    def basis(self, n: int) -> list:
        return self.X.nondegenerate(n)

    def coboundary(self, n: int) -> Matrix:
        cols = {x: j for j, x in enumerate(self.basis(n))}
        rows = self.basis(n + 1)
        entries = [0] * (len(rows) * len(cols))
        for r, y in enumerate(rows):
            for i in range(n + 2):
                j = cols.get(self.X.face(n + 1, i, y))
                if j is not None:
                    entries[r * len(cols) + j] += -1 if i % 2 else 1
        return Matrix(len(rows), len(cols), entries)

    def complex(self, ring: CoefficientRing) -> CochainComplex:
        ranks = {n: len(self.basis(n)) for n in range(self.levels + 1)}
        diffs = {n: self.coboundary(n) for n in range(self.levels)}
        labels = {n: tuple(repr(x) for x in self.basis(n)) for n in range(self.levels + 1)}
        return CochainComplex(ring, 0, self.levels, ranks, diffs, labels)

    def as_vector(self, n: int, f: Callable) -> tuple:
        return tuple(f(x) for x in self.basis(n))


def integration_matrix(M: SimplicialSet, n: int) -> Matrix:
    """``∫ : C^{n+1}(S × M) -> C^n(M)``, ``(∫f)(m) = Σ_{k=1}^{n+1} (-1)^k f(σ_k, s_{k-1} m)``."""
    SM = product_set(circle(), M)
    src = {x: j for j, x in enumerate(SM.nondegenerate(n + 1))}
    tgt = M.nondegenerate(n)
    entries = [0] * (len(tgt) * len(src))
    for r, m in enumerate(tgt):
        for k in range(1, n + 2):
            j = src.get((k, M.degeneracy(n, k - 1, m)))
            if j is not None:
                entries[r * len(src) + j] += -1 if k % 2 else 1
    return Matrix(len(tgt), len(src), entries)


def pullback_matrix(M: SimplicialSet, n: int) -> Matrix:
    """``pr^* : C^n(M) -> C^n(S × M)`` along the projection to ``M``."""
    SM = product_set(circle(), M)
    rows = SM.nondegenerate(n)
    cols = {x: j for j, x in enumerate(M.nondegenerate(n))}
    entries = [0] * (len(rows) * len(cols))
    for r, (_, m) in enumerate(rows):
        j = cols.get(m)
        if j is not None:
            entries[r * len(cols) + j] = 1
    return Matrix(len(rows), len(cols), entries)


def simplicial_integration(M: SimplicialSet, n: int, cochain: Sequence) -> tuple:
    """Integrate a normalized ``(n+1)``-cochain on ``S × M`` (given on its
    nondegenerate simplices) down to an ``n``-cochain on ``M``.  Zero on level 0."""
    if n < 0:
        return ()
    A = integration_matrix(M, n)
    if len(cochain) != A.cols:
        raise ValueError(f"cochain has {len(cochain)} values, level {n + 1} has {A.cols} simplices")
    return A.apply(list(cochain))


def circle_map_to_nerve(m: int):
    """``c: S × Z/m -> BZ/m``: ``(*, γ)`` goes to the base point and ``(σ_k, γ)``
    to the ``n``-tuple with ``γ`` in slot ``k``."""

    def c(n, x):
        s, g = x
        if s == BASE:
            return (0,) * n
        return tuple(g if j == s - 1 else 0 for j in range(n))

    return c


def check_simplicial_map(X: SimplicialSet, Y: SimplicialSet, f, levels: int) -> bool:
    for n in range(levels + 1):
        for x in X.simplices(n):
            for i in range(n + 1):
                if n >= 1 and f(n - 1, X.face(n, i, x)) != Y.face(n, i, f(n, x)):
                    return False
                if f(n + 1, X.degeneracy(n, i, x)) != Y.degeneracy(n, i, f(n, x)):
                    return False
    return True

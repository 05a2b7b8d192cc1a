"""Normalized bar cochains of a finite cyclic group with trivial coefficients.

A finite stand-in for the classifying space of the circle: ``H^*(BZ/m)`` is
2-periodic, while the z-model stays the reference answer for the circle itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..complexes import CochainComplex, cohomology
from ..exactla import Matrix
from ..modcat import CoefficientRing, ModuleClass

MAX_DEGREE = 6
RANK_LIMIT = 20000


@dataclass(frozen=True)
class BarComplex:
    """Level ``k`` is indexed by ``k``-tuples of nonzero residues mod ``m``."""

    m: int
    levels: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("group order must be >= 2")
        if self.levels < 0:
            raise ValueError("levels must be >= 0")

    def simplices(self, k: int) -> list[tuple[int, ...]]:
        return list(product(range(1, self.m), repeat=k))

    def all_simplices(self, k: int) -> list[tuple[int, ...]]:
        """Every ``k``-simplex of the nerve, degenerate ones included."""
        return list(product(range(self.m), repeat=k))

    def face(self, i: int, g: tuple[int, ...]) -> tuple[int, ...]:
        k = len(g)
        if not 0 <= i <= k:
            raise IndexError(f"face d_{i} on a {k}-simplex")
        if i == 0:
            return g[1:]
        if i == k:
            return g[:-1]
        return g[: i - 1] + ((g[i - 1] + g[i]) % self.m,) + g[i + 1:]

    def degeneracy(self, i: int, g: tuple[int, ...]) -> tuple[int, ...]:
        if not 0 <= i <= len(g):
            raise IndexError(f"degeneracy s_{i} on a {len(g)}-simplex")
        return g[:i] + (0,) + g[i:]

    def coboundary(self, k: int) -> Matrix:
        """``(δf)(g_1..g_{k+1}) = Σ (-1)^i f(d_i g)``, zero on degenerate faces."""
        cols = {g: j for j, g in enumerate(self.simplices(k))}
        rows = self.simplices(k + 1)
        entries = [0] * (len(rows) * len(cols))
        for r, g in enumerate(rows):
            for i in range(k + 2):
                f = self.face(i, g)
                j = cols.get(f)
                if j is not None:
                    entries[r * len(cols) + j] += -1 if i % 2 else 1
        return Matrix(len(rows), len(cols), entries)

    def cochain_complex(self, ring: CoefficientRing) -> CochainComplex:
        ranks = {k: (self.m - 1) ** k for k in range(self.levels + 1)}
        diffs = {k: self.coboundary(k) for k in range(self.levels)}
        return CochainComplex(ring, 0, self.levels, ranks, diffs)


def bar_cohomology(m: int, ring, max_degree: int) -> list[ModuleClass]:
    """``H^k(BZ/m; F)`` for ``0 <= k <= max_degree`` from normalized bar cochains."""
    if isinstance(ring, str):
        ring = CoefficientRing.parse(ring)
    if not 0 <= max_degree <= MAX_DEGREE:
        raise ValueError(f"max_degree must lie in [0, {MAX_DEGREE}]")
    if (m - 1) ** (max_degree + 1) > RANK_LIMIT:
        raise ValueError(f"bar complex of Z/{m} through degree {max_degree + 1} exceeds "
                         f"the rank limit {RANK_LIMIT}")
    C = BarComplex(m, max_degree + 1).cochain_complex(ring)
    return [cohomology(C, k) for k in range(max_degree + 1)]

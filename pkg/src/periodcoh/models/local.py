"""Local systems on the circle: a fiber ``F^r`` with monodromy ``M``.

The two-cell model of the circle gives ``H^0 = ker(I - M)`` and ``H^1 = coker(I - M)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from ..exactla import Matrix, determinant
from ..modcat import MOD, RAT, CoefficientRing, ModuleClass, ModuleMap, cokernel, kernel


@dataclass(frozen=True)
class CircleLocalSystem:
    ring: CoefficientRing
    monodromy: Matrix

    def __post_init__(self):
        M = self.monodromy
        if M.rows != M.cols:
            raise ValueError("monodromy must be square")
        det = determinant(M)
        tag = self.ring.tag
        if tag == RAT:
            ok = det != 0
        elif tag == MOD:
            ok = M.is_integral() and gcd(int(det), self.ring.n) == 1
        else:
            ok = M.is_integral() and det in (1, -1)
        if not ok:
            raise ValueError(f"monodromy is not invertible over {self.ring}")

    @property
    def rank(self) -> int:
        return self.monodromy.rows


def circle_local_cohomology(L: CircleLocalSystem) -> tuple[ModuleClass, ModuleClass]:
    A = ModuleMap.of(L.ring, Matrix.identity(L.rank) - L.monodromy)
    return kernel(A)[0], cokernel(A)

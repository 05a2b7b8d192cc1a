"""Inverse systems ``G_0 <- G_1 <- ... <- G_N`` of finite free modules.

Finite-depth ``lim``/``lim^1`` come from the equalizer map
``Φ: ⊕_{i<=N} G_i -> ⊕_{i<N} G_i``, ``(x_i) -> (x_i - t_i x_{i+1})``.  The
last level has no equation (the tail is open-ended).  Symbolic answers for the
three factorial families live in a small registry; everything else is either
classified by the Mittag-Leffler criterion or reported as finite data only.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod
from typing import Optional, Sequence

from .exactla import Matrix, parse_matrix_lines
from .modcat import (
    INT,
    RAT,
    RAT_MOD_INT,
    CoefficientRing,
    ModuleClass,
    ModuleMap,
    cokernel,
    image,
    image_measure,
    kernel,
    module_class_equal,
)

DEFAULT_HORIZON = 20


@dataclass(frozen=True)
class Tower:
    """``transitions[i]`` is ``t_i : G_{i+1} -> G_i``, a ``ranks[i] x ranks[i+1]`` matrix."""

    ring: CoefficientRing
    ranks: tuple[int, ...]
    transitions: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(int(r) for r in self.ranks))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if len(self.ranks) != len(self.transitions) + 1:
            raise ValueError("need exactly one transition between consecutive levels")
        for i, t in enumerate(self.transitions):
            if t.shape != (self.ranks[i], self.ranks[i + 1]):
                raise ValueError(f"t_{i} has shape {t.shape}, expected {(self.ranks[i], self.ranks[i + 1])}")

    @property
    def depth(self) -> int:
        return len(self.transitions)

    @classmethod
    def rank_one(cls, ring, multipliers: Sequence[int]) -> "Tower":
        """Rank-one tower with ``t_i = ×multipliers[i]``."""
        ts = tuple(Matrix.from_rows([[c]]) for c in multipliers)
        return cls(ring, (1,) * (len(ts) + 1), ts)

    @classmethod
    def factorial(cls, ring, depth: int) -> "Tower":
        """The family ``t_i = ×(i+1)``; the composite ``G_N -> G_0`` is ``×N!``."""
        return cls.rank_one(ring, [i + 1 for i in range(depth)])

    def truncate(self, depth: int) -> "Tower":
        if not 0 <= depth <= self.depth:
            raise ValueError(f"cannot truncate a depth-{self.depth} tower to depth {depth}")
        return Tower(self.ring, self.ranks[: depth + 1], self.transitions[:depth])

    def drop(self, k: int) -> "Tower":
        """Forget the first ``k`` levels."""
        return Tower(self.ring, self.ranks[k:], self.transitions[k:])

    def composite(self, j: int, i: int) -> Matrix:
        """``G_j -> G_i`` for ``i <= j``."""
        if not 0 <= i <= j <= self.depth:
            raise ValueError(f"no composite from level {j} to level {i}")
        M = Matrix.identity(self.ranks[i])
        for s in range(i, j):
            M = M @ self.transitions[s]
        return M

    def equalizer_matrix(self) -> Matrix:
        """The matrix of ``Φ``, block rows ``i < N`` and block columns ``i <= N``."""
        N = self.depth
        blocks = []
        for i in range(N):
            row = []
            for j in range(N + 1):
                if j == i:
                    row.append(Matrix.identity(self.ranks[i]))
                elif j == i + 1:
                    row.append(-self.transitions[i])
                else:
                    row.append(Matrix.zeros(self.ranks[i], self.ranks[j]))
            blocks.append(row)
        if not blocks:
            return Matrix.zeros(0, self.ranks[0])
        return Matrix.block(blocks)

    def to_text(self) -> str:
        """Tower file format: a ``ring depth`` header, then each ``t_i`` as a matrix."""
        out = [f"{self.ring} {self.depth}"]
        out += [t.to_text() for t in self.transitions]
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Tower":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ValueError("empty tower file")
        head = lines[0].split()
        if len(head) != 2:
            raise ValueError("tower header must be 'ring depth'")
        ring = CoefficientRing.parse(head[0])
        depth = int(head[1])
        if depth < 1:
            raise ValueError("tower depth must be at least 1")
        pos, ts = 1, []
        for _ in range(depth):
            M, pos = parse_matrix_lines(lines, pos)
            ts.append(M)
        if pos != len(lines):
            raise ValueError("trailing data after the last transition")
        ranks = [t.rows for t in ts] + [ts[-1].cols]
        return cls(ring, tuple(ranks), tuple(ts))


def truncated_lim_lim1(T: Tower) -> tuple[ModuleClass, ModuleClass]:
    """``(ker Φ, coker Φ)`` at the tower's depth."""
    if T.depth < 1:
        raise ValueError("truncated lim needs depth >= 1")
    phi = ModuleMap.of(T.ring, T.equalizer_matrix())
    return kernel(phi)[0], cokernel(phi)


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class Symbol:
    """A registry answer.  ``group`` is set only for ``CONSTANT``."""

    name: str
    group: Optional[ModuleClass] = None

    def __str__(self):
        if self.name == "CONSTANT":
            return f"CONSTANT({self.group})"
        return self.name

    def pretty(self) -> str:
        if self.name == "CONSTANT":
            return str(self.group)
        return _PRETTY[self.name]

    def is_zero(self) -> bool:
        return self.name == "ZERO" or (self.name == "CONSTANT" and self.group.is_zero())


ZERO = Symbol("ZERO")
Q_GROUP = Symbol("Q_GROUP")
FINITE_ADELES = Symbol("FINITE_ADELES")
FINITE_ADELES_MOD_Q = Symbol("FINITE_ADELES_MOD_Q")
_PRETTY = {"ZERO": "0", "Q_GROUP": "Q", "FINITE_ADELES": "A_f^Q", "FINITE_ADELES_MOD_Q": "A_f^Q/Q"}


def CONSTANT(G: ModuleClass) -> Symbol:
    return ZERO if G.is_zero() else Symbol("CONSTANT", G)


@dataclass(frozen=True)
class Classification:
    kind: str  # MITTAG_LEFFLER, REGISTERED or UNCLASSIFIED
    stabilization_index: Optional[int] = None
    symbol: Optional[Symbol] = None

    def __str__(self):
        if self.kind == "MITTAG_LEFFLER":
            return f"MITTAG_LEFFLER({self.stabilization_index})"
        if self.kind == "REGISTERED":
            return f"REGISTERED({self.symbol})"
        return "UNCLASSIFIED"


UNCLASSIFIED = Classification("UNCLASSIFIED")


def _stable_from(T: Tower, i: int) -> Optional[int]:
    """Smallest ``k >= i`` after which ``im(G_k -> G_i)`` visibly stops shrinking."""
    N = T.depth
    measures = [image_measure(ModuleMap.of(T.ring, T.composite(k, i))) for k in range(i, N + 1)]
    for k in range(i, N + 1):
        m = measures[k - i]
        if T.ranks[i] == 0 or _image_is_zero(T, k, i):
            return k
        later = measures[k - i + 1:]
        if later and all(x == m for x in later):
            return k
    return None


def _image_is_zero(T: Tower, k: int, i: int) -> bool:
    return image(ModuleMap.of(T.ring, T.composite(k, i))).is_zero()


def mittag_leffler_classify(T: Tower, probe_depth: int = 1) -> Classification:
    """Mittag-Leffler if the images into every ``G_i``, ``i <= probe_depth``, stabilize
    inside the window.  The index is the largest gap ``k - i`` needed."""
    if not 0 <= probe_depth <= T.depth:
        raise ValueError(f"probe depth {probe_depth} exceeds tower depth {T.depth}")
    gaps = []
    for i in range(probe_depth + 1):
        k = _stable_from(T, i)
        if k is None:
            return UNCLASSIFIED
        gaps.append(k - i)
    return Classification("MITTAG_LEFFLER", max(gaps))


def is_factorial_type(multipliers: Sequence[int], horizon: int = DEFAULT_HORIZON) -> bool:
    """Every ``m <= min(horizon, L)`` has ``m!`` dividing each run of ``m`` consecutive
    multipliers; at least three multipliers are required to say anything."""
    c = [int(x) for x in multipliers]
    L = len(c)
    if L < 3 or any(x < 1 for x in c):
        return False
    for m in range(1, min(horizon, L) + 1):
        f = factorial(m)
        for s in range(L - m + 1):
            if prod(c[s:s + m]) % f:
                return False
    return True


def _rank_one_multipliers(T: Tower) -> Optional[list[int]]:
    if any(r != 1 for r in T.ranks):
        return None
    out = []
    for t in T.transitions:
        x = t[0, 0]
        if x != int(x):
            return None
        out.append(int(x))
    return out


def registry_lookup(T: Tower, horizon: int = DEFAULT_HORIZON) -> Optional[tuple[Symbol, Symbol]]:
    """``(lim, lim^1)`` symbols for the factorial families over Z, Q and Q/Z."""
    if T.ring.tag not in (INT, RAT, RAT_MOD_INT):
        return None
    cs = _rank_one_multipliers(T)
    if cs is None or not is_factorial_type(cs, horizon):
        return None
    if T.ring.tag == RAT:
        return Q_GROUP, ZERO
    if T.ring.tag == RAT_MOD_INT:
        return FINITE_ADELES, ZERO
    return ZERO, FINITE_ADELES_MOD_Q


@dataclass(frozen=True)
class TowerLimitReport:
    depth: int
    finite_lim: ModuleClass
    finite_lim1: ModuleClass
    classification: Classification
    lim: Optional[Symbol] = None
    lim1: Optional[Symbol] = None

    @property
    def symbol(self) -> Optional[Symbol]:
        return self.classification.symbol

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "lim": None if self.lim is None else str(self.lim),
            "lim1": None if self.lim1 is None else str(self.lim1),
            "classification": str(self.classification),
            "symbol": None if self.symbol is None else str(self.symbol),
            "finite_lim": str(self.finite_lim),
            "finite_lim1": str(self.finite_lim1),
        }


def _ml_limit(T: Tower, probe: int) -> Optional[Symbol]:
    """The limit of a Mittag-Leffler tower when the stable images are all
    isomorphic along the transitions, else ``None``."""
    stables = []
    for i in range(probe + 1):
        k = _stable_from(T, i)
        stables.append(T.composite(k, i) if k is not None else None)
    if any(P is None for P in stables):
        return None
    classes = [image(ModuleMap.of(T.ring, P)) for P in stables]
    if all(c.is_zero() for c in classes):
        return ZERO
    for i in range(probe):
        # t_i maps S_{i+1} onto S_i; it is injective there iff t_i∘P keeps ker P
        P = stables[i + 1]
        kP = kernel(ModuleMap.of(T.ring, P))[0]
        ktP = kernel(ModuleMap.of(T.ring, T.transitions[i] @ P))[0]
        if not module_class_equal(kP, ktP):
            return None
    return CONSTANT(classes[0])


def symbolic_limit(T: Tower, probe_depth: int = 1, horizon: int = DEFAULT_HORIZON) -> TowerLimitReport:
    """Registry match first, then Mittag-Leffler, else finite data only."""
    fin = truncated_lim_lim1(T) if T.depth >= 1 else (kernel(ModuleMap.of(T.ring, Matrix.zeros(0, T.ranks[0])))[0],
                                                    ModuleClass.zero(T.ring))
    k = 0
    while k < T.depth and T.ranks[k] == 0:
        k += 1
    tail = T.drop(k)
    if all(r == 0 for r in tail.ranks):
        return TowerLimitReport(T.depth, *fin, Classification("MITTAG_LEFFLER", 0), ZERO, ZERO)
    hit = registry_lookup(tail, horizon)
    if hit is not None:
        lim, lim1 = hit
        sym = lim1 if lim.is_zero() else lim
        return TowerLimitReport(T.depth, *fin, Classification("REGISTERED", symbol=sym), lim, lim1)
    probe = min(probe_depth, tail.depth)
    cls = mittag_leffler_classify(tail, probe)
    if cls.kind == "MITTAG_LEFFLER":
        return TowerLimitReport(T.depth, *fin, cls, _ml_limit(tail, probe), ZERO)
    return TowerLimitReport(T.depth, *fin, cls)

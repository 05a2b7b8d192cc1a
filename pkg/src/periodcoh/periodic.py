"""Two-periodization of a complex ``X`` along a degree -2 operator ``D``.

The tower is ``X <- X[2] <- X[4] <- ...`` with every map ``D``.  Its homotopy
limit is the cone of ``1 - D̂`` shifted by -1, where ``D̂(x_i) = (D x_{i+1})``.

Two finite truncations are used:

* rectangular, depth ``N_t``: levels ``0..N_t`` map to levels ``0..N_t-1``.
  This is the honest finite stage of the tower; its cone has
  ``H^k = ker Φ^k ⊕ coker Φ^{k-1}`` and feeds the tables and audits.
* square: levels ``0..N_t`` on both sides with the tail of ``D̂`` set to zero.
  Here the periodicity operators ``W``, ``S`` and the homotopy ``J`` are honest
  chain-level maps, so their identities can be checked as matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Optional, Sequence

from .complexes import (
    ChainMap,
    CochainComplex,
    Homotopy,
    compose_maps,
    cohomology,
    mapping_cone,
    rational_cohomology_basis,
    shift,
    verify_chain_map,
    verify_homotopy,
)
from .exactla import Matrix, integer_inverse, rational_nullspace, rational_rank, rational_solve
from .modcat import (
    RAT,
    QQ,
    CoefficientRing,
    ModuleClass,
    ModuleMap,
    cokernel,
    kernel,
)
from .models.poly import GradedOperator, PolyModel, build_s2_model, build_z_model, d_dz, s2_phi_action
from .towers import Symbol, Tower, TowerLimitReport, symbolic_limit


class TruncationBudgetError(ValueError):
    """The z-truncation is too small for the requested tower depth."""


@dataclass(frozen=True)
class PeriodizationInstance:
    """``X`` with a degree -2 chain map ``D`` (``D[k] : X^k -> X^{k-2}``)."""

    X: CochainComplex
    D: Mapping[int, Matrix]
    depth: int
    trunc: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("tower depth must be >= 1")
        D = {}
        for k in self.X.degrees:
            m = self.D.get(k)
            shape = (self.X.rank(k - 2), self.X.rank(k))
            if m is None:
                m = Matrix.zeros(*shape)
            if m.shape != shape:
                raise ValueError(f"D^{k} has shape {m.shape}, expected {shape}")
            D[k] = m
        object.__setattr__(self, "D", D)
        if not verify_chain_map(self.D_map()):
            raise ValueError("D does not commute with the differential")

    @property
    def ring(self) -> CoefficientRing:
        return self.X.ring

    def Dk(self, k: int) -> Matrix:
        if k in self.D:
            return self.D[k]
        return Matrix.zeros(self.X.rank(k - 2), self.X.rank(k))

    def D_map(self) -> ChainMap:
        return ChainMap(self.X, self.X, -2, self.D)

    def tower(self, k: int, depth: Optional[int] = None) -> Tower:
        """The degree-``k`` tower ``G_i = X^{k+2i}`` with ``t_i = D`` on ``X^{k+2i+2}``."""
        n = self.depth if depth is None else depth
        ranks = tuple(self.X.rank(k + 2 * i) for i in range(n + 1))
        ts = tuple(self.Dk(k + 2 * i + 2) for i in range(n))
        return Tower(self.ring, ranks, ts)

    @property
    def degree_range(self) -> range:
        """Total degrees where the truncated product is nonzero."""
        return range(self.X.deg_min - 2 * self.depth, self.X.deg_max + 1)


def model_instance(model: PolyModel, D: GradedOperator, depth: int) -> PeriodizationInstance:
    """``X`` is the model with zero differential and ``D`` the given operator."""
    if D.shift != -2 or D.source != model or D.target != model:
        raise ValueError("D must be a degree -2 operator on the model")
    if model.N < depth + 1:
        raise TruncationBudgetError(f"z-truncation N = {model.N} is too small for depth {depth}; "
                                    f"need N >= {depth + 1}")
    lo, hi = 0, model.max_degree
    X = CochainComplex(model.ring, lo, hi, {k: model.rank(k) for k in range(lo, hi + 1)}, {},
                       {k: model.labels(k) for k in range(lo, hi + 1)})
    return PeriodizationInstance(X, {k: D.matrix(k) for k in range(lo, hi + 1)}, depth, model.N)


def z_instance(ring, N: int, depth: int) -> PeriodizationInstance:
    """``F[[z]]`` truncated at ``z^N`` with ``D = d/dz``."""
    model = build_z_model(ring, N)
    return model_instance(model, d_dz(model), depth)


# -- the operator 1 - D̂ --------------------------------------------------------

def build_one_minus_Dhat(inst: PeriodizationInstance) -> dict[int, ModuleMap]:
    """Per total degree, ``Φ^k : ⊕_{i<=N_t} X^{k+2i} -> ⊕_{i<N_t} X^{k+2i}``."""
    return {k: ModuleMap.of(inst.ring, inst.tower(k).equalizer_matrix()) for k in inst.degree_range}


def _product_complex(inst: PeriodizationInstance, levels: int) -> CochainComplex:
    """``⊕_{i<levels} X[2i]`` on the window where it can be nonzero."""
    X = inst.X
    lo, hi = X.deg_min - 2 * (levels - 1), X.deg_max
    ranks = {k: sum(X.rank(k + 2 * i) for i in range(levels)) for k in range(lo, hi + 1)}
    diffs = {}
    for k in range(lo, hi):
        blocks = [[X.d(k + 2 * i) if i == j else Matrix.zeros(X.rank(k + 1 + 2 * i), X.rank(k + 2 * j))
                   for j in range(levels)] for i in range(levels)]
        diffs[k] = Matrix.block(blocks)
    labels = {k: tuple(f"{lab}@{i}" for i in range(levels)
                       for lab in (X.labels[k + 2 * i] if X.deg_min <= k + 2 * i <= X.deg_max else ()))
              for k in range(lo, hi + 1)}
    return CochainComplex(inst.ring, lo, hi, ranks, diffs, labels)


def _level_offsets(inst: PeriodizationInstance, k: int, levels: int) -> list[int]:
    out, acc = [], 0
    for i in range(levels):
        out.append(acc)
        acc += inst.X.rank(k + 2 * i)
    return out + [acc]


def _levelwise(inst, k: int, levels: int, blocks_fn, out_levels: int, out_k: int) -> Matrix:
    """Assemble a map ``P^k -> P^{out_k}`` from ``blocks_fn(i, j) -> Matrix or None``."""
    X = inst.X
    rows = []
    for i in range(out_levels):
        row = []
        for j in range(levels):
            m = blocks_fn(i, j)
            row.append(m if m is not None else Matrix.zeros(X.rank(out_k + 2 * i), X.rank(k + 2 * j)))
        rows.append(row)
    if not rows:
        return Matrix.zeros(0, sum(X.rank(k + 2 * j) for j in range(levels)))
    if levels == 0:
        return Matrix.zeros(sum(X.rank(out_k + 2 * i) for i in range(out_levels)), 0)
    return Matrix.block(rows)


def rectangular_map(inst: PeriodizationInstance) -> ChainMap:
    """``Φ = proj - D̂`` from levels ``0..N_t`` to levels ``0..N_t-1``."""
    n = inst.depth
    P, Q = _product_complex(inst, n + 1), _product_complex(inst, n)
    comps = {k: inst.tower(k).equalizer_matrix() if Q.deg_min <= k <= Q.deg_max
             else Matrix.zeros(0, P.rank(k)) for k in P.degrees}
    return ChainMap(P, Q, 0, comps)


def holim_complex(inst: PeriodizationInstance) -> CochainComplex:
    """``cone(Φ)[-1]`` for the rectangular truncation."""
    return shift(mapping_cone(rectangular_map(inst)), -1)


# -- square truncation: W, S, I, J ------------------------------------------------

@dataclass(frozen=True)
class SquareModel:
    P: CochainComplex
    one_minus_Dhat: ChainMap
    Y: CochainComplex
    W: ChainMap
    S: ChainMap
    I: ChainMap
    J: dict


def _square(inst: PeriodizationInstance) -> SquareModel:
    n = inst.depth + 1
    P = _product_complex(inst, n)
    X = inst.X

    def Dhat(k, out_k):
        return _levelwise(inst, k, n, lambda i, j: inst.Dk(k + 2 * j) if j == i + 1 else None, n, out_k)

    def prodD(k):
        return _levelwise(inst, k, n, lambda i, j: inst.Dk(k + 2 * j) if i == j else None, n, k - 2)

    def E(k):
        return _levelwise(inst, k, n, lambda i, j: Matrix.identity(X.rank(k + 2 * j)) if j == i + 1 else None,
                          n, k + 2)

    phi = ChainMap(P, P, 0, {k: Matrix.identity(P.rank(k)) - Dhat(k, k) for k in P.degrees})
    Y = mapping_cone(phi)

    def diag(a: Matrix, b: Matrix) -> Matrix:
        return Matrix.block([[a, Matrix.zeros(a.rows, b.cols)], [Matrix.zeros(b.rows, a.cols), b]])

    W = ChainMap(Y, Y, -2, {k: diag(prodD(k), prodD(k + 1)) for k in Y.degrees})
    S = ChainMap(Y, Y, 2, {k: diag(E(k), E(k + 1)) for k in Y.degrees})
    I = ChainMap(Y, Y, 0, {k: diag(Dhat(k, k), Dhat(k + 1, k + 1)) for k in Y.degrees})
    J = {}
    for k in Y.degrees:
        a, b = P.rank(k), P.rank(k + 1)  # Y^k = P^k + P^{k+1}
        a1 = P.rank(k - 1)               # Y^{k-1} = P^{k-1} + P^k
        J[k] = Matrix.block([[Matrix.zeros(a1, a), Matrix.zeros(a1, b)],
                             [Matrix.identity(a), Matrix.zeros(a, b)]])
    return SquareModel(P, phi, Y, W, S, I, J)


def W_operator(inst: PeriodizationInstance) -> ChainMap:
    """``diag(∏D, ∏D)`` on the square cone; degree -2."""
    return _square(inst).W


def S_operator(inst: PeriodizationInstance) -> ChainMap:
    """``diag(E, E)`` with ``E(x_i) = (x_{i+1})``; degree +2."""
    return _square(inst).S


@dataclass(frozen=True)
class PeriodicityProof:
    window: tuple[int, int]
    safe_window: tuple[int, int]
    checks: dict
    J: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def vacuous(self) -> bool:
        return self.safe_window[0] > self.safe_window[1]

    def to_json(self) -> dict:
        return {
            "window": list(self.window),
            "safe_window": list(self.safe_window),
            "checks": dict(self.checks),
            "ok": self.ok,
            "vacuous": self.vacuous,
            "J": {str(k): m.tolist() for k, m in self.J.items() if m.rows and m.cols},
        }


def verify_periodicity(inst: PeriodizationInstance) -> PeriodicityProof:
    """Check on the square cone, as exact matrices:

    * ``δ² = 0`` (enforced when the cone is built),
    * ``W`` and ``S`` commute with ``δ``,
    * ``W∘S = S∘W = I = diag(D̂, D̂)``,
    * ``1 - I = δJ + Jδ`` with ``J = [[0, 0], [1, 0]]``.
    """
    sq = _square(inst)
    Y = sq.Y
    ring = inst.ring
    WS, SW = compose_maps(sq.W, sq.S), compose_maps(sq.S, sq.W)
    same = lambda f, g: all(ring.is_zero_matrix(f.f(k) - g.f(k)) for k in Y.degrees)
    hom = Homotopy(ChainMap.identity(Y), sq.I, sq.J)
    checks = {
        "delta_squared_zero": all(ring.is_zero_matrix(Y.d(k + 1) @ Y.d(k)) for k in Y.degrees),
        "W_chain_map": verify_chain_map(sq.W),
        "S_chain_map": verify_chain_map(sq.S),
        "W_S_equals_I": same(WS, sq.I),
        "S_W_equals_I": same(SW, sq.I),
        "one_minus_I_homotopy": verify_homotopy(hom),
    }
    lo, hi = Y.deg_min, Y.deg_max
    return PeriodicityProof((lo, hi), (lo + 3, hi - 3), checks, dict(sq.J))


# -- tables -----------------------------------------------------------------------

@dataclass(frozen=True)
class TableEntry:
    lim: TowerLimitReport
    lim1: TowerLimitReport  # report for the degree below; its lim^1 contributes

    @property
    def symbol(self) -> Optional[str]:
        a, b = self.lim.lim, self.lim1.lim1
        if a is None or b is None:
            return None
        if b.is_zero():
            return _name(a)
        if a.is_zero():
            return _name(b)
        return f"EXT({_name(b)}, {_name(a)})"

    @property
    def pretty(self) -> str:
        a, b = self.lim.lim, self.lim1.lim1
        if a is None or b is None:
            return "UNCLASSIFIED"
        if b.is_zero():
            return a.pretty()
        if a.is_zero():
            return b.pretty()
        return f"extension of {a.pretty()} by {b.pretty()}"

    def to_json(self) -> dict:
        return {"symbol": self.symbol, "pretty": self.pretty,
                "lim": self.lim.to_json(), "lim1_from_below": self.lim1.to_json()}


def _name(s: Symbol) -> str:
    if s.name == "ZERO":
        return "0"
    if s.name == "CONSTANT" and s.group.ring.tag == RAT and s.group.divisible_copies == 1:
        return "Q_GROUP"
    return str(s)


@dataclass(frozen=True)
class PeriodicCohomologyTable:
    ring: CoefficientRing
    depth: int
    even: TableEntry
    odd: TableEntry
    per_degree: tuple
    periodic_consistent: bool

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "depth": self.depth,
            "even": self.even.symbol,
            "odd": self.odd.symbol,
            "even_detail": self.even.to_json(),
            "odd_detail": self.odd.to_json(),
            "per_degree": list(self.per_degree),
            "periodic_consistent": self.periodic_consistent,
        }


def _entry(inst, k, probe) -> TableEntry:
    return TableEntry(symbolic_limit(inst.tower(k), probe), symbolic_limit(inst.tower(k - 1), probe))


def safe_degrees(inst: PeriodizationInstance) -> range:
    """Degrees ``k`` whose tower reaches level ``N_t`` inside ``X`` and starts no lower
    than ``X`` does, so truncation cannot shorten it."""
    return range(inst.X.deg_min, inst.X.deg_max - 2 * inst.depth + 1)


def periodic_table(inst: PeriodizationInstance, probe: int = 1) -> PeriodicCohomologyTable:
    """Even/odd answers from the degree 0 and 1 towers, with per-degree audit data.

    ``H^k`` is an extension of ``lim`` of the degree-``k`` tower by ``lim^1`` of
    the degree ``k-1`` tower.
    """
    even, odd = _entry(inst, 0, probe), _entry(inst, 1, probe)
    per_degree, consistent = [], True
    H = holim_complex(inst)
    phis = build_one_minus_Dhat(inst)
    safe = safe_degrees(inst)
    for k in inst.degree_range:
        ker = kernel(phis[k])[0]
        cok = cokernel(phis[k - 1]) if k - 1 in phis else ModuleClass.zero(inst.ring)
        row = {"degree": k, "finite_ker": str(ker), "finite_coker_below": str(cok),
               "cone_cohomology": str(cohomology(H, k)), "safe": k in safe}
        if k in safe:
            e = _entry(inst, k, probe)
            row["symbol"] = e.symbol
            ref = even if k % 2 == 0 else odd
            if e.symbol != ref.symbol:
                consistent = False
        per_degree.append(row)
    return PeriodicCohomologyTable(inst.ring, inst.depth, even, odd, tuple(per_degree), consistent)


def periodize(inst: PeriodizationInstance, probe: int = 1) -> tuple[CochainComplex, PeriodicCohomologyTable]:
    return holim_complex(inst), periodic_table(inst, probe)


def periodize_ring(ring, N: int = 10, depth: int = 6):
    """``periodize`` for the z-model over ``ring``."""
    return periodize(z_instance(ring, N, depth))


# -- lim^1 sequence -----------------------------------------------------------------

@dataclass(frozen=True)
class RouteComparison:
    degree: int
    route_a: str
    route_b: str
    agree: bool


def _classes_agree(a: ModuleClass, b: ModuleClass) -> bool:
    """Equal up to extension: same free/divisible rank and same torsion size."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return (a.divisible_copies, a.free_rank, a.torsion_order) == (
        b.divisible_copies, b.free_rank, b.torsion_order)


def _route_b_exact(inst, k, phis) -> ModuleClass:
    ker = kernel(phis[k])[0] if k in phis else ModuleClass.zero(inst.ring)
    cok = cokernel(phis[k - 1]) if k - 1 in phis else ModuleClass.zero(inst.ring)
    return ker.direct_sum(cok)


def _cohomology_tower(inst: PeriodizationInstance, k: int) -> tuple[int, int]:
    """``(dim ker, dim coker)`` of ``Φ`` on the rational cohomology towers in degree ``k``."""
    n = inst.depth
    bases = {}

    def basis(deg):
        if deg not in bases:
            if inst.X.deg_min <= deg <= inst.X.deg_max:
                bases[deg] = rational_cohomology_basis(inst.X, deg)
            else:
                bases[deg] = ([], lambda v: ())
        return bases[deg]

    def induced(deg):
        reps_src, _ = basis(deg)
        reps_tgt, coords = basis(deg - 2)
        cols = [coords(inst.Dk(deg).apply(r)) if reps_tgt else () for r in reps_src]
        return Matrix(len(reps_tgt), len(cols), [cols[j][i] for i in range(len(reps_tgt))
                                                 for j in range(len(cols))])

    ranks = tuple(len(basis(k + 2 * i)[0]) for i in range(n + 1))
    ts = tuple(induced(k + 2 * i + 2) for i in range(n))
    Phi = Tower(QQ, ranks, ts).equalizer_matrix()
    r = rational_rank(Phi)
    return Phi.cols - r, Phi.rows - r


def lim1_sequence_check(inst: PeriodizationInstance) -> list[RouteComparison]:
    """Route A: cohomology of the holim cone.  Route B: ``ker Φ^k`` plus
    ``coker Φ^{k-1}``, using induced maps on cohomology when ``X`` has a
    differential (over Q only)."""
    H = holim_complex(inst)
    out = []
    has_d = any(not m.is_zero() for m in inst.X.differentials.values())
    if has_d and inst.ring.tag != RAT:
        raise ValueError("route B through cohomology towers is implemented over Q only")
    phis = build_one_minus_Dhat(inst)
    for k in H.degrees:
        a = cohomology(H, k)
        if has_d:
            ker_k = _cohomology_tower(inst, k)[0] if k in phis else 0
            cok_k = _cohomology_tower(inst, k - 1)[1] if k - 1 in phis else 0
            b = ModuleClass(inst.ring, divisible_copies=ker_k + cok_k)
            agree = a.divisible_copies == b.divisible_copies
        else:
            b = _route_b_exact(inst, k, phis)
            agree = _classes_agree(a, b)
        out.append(RouteComparison(k, str(a), str(b), agree))
    return out


# -- finite-stage kernel witnesses ---------------------------------------------------

def stacked(inst: PeriodizationInstance, k: int, levels: Sequence) -> tuple:
    """Concatenate per-level coordinate vectors into a vector of ``P^k``."""
    out = []
    for i, v in enumerate(levels):
        if len(v) != inst.X.rank(k + 2 * i):
            raise ValueError(f"level {i} has {len(v)} coordinates, expected {inst.X.rank(k + 2 * i)}")
        out.extend(v)
    return tuple(out)


def unstack(inst: PeriodizationInstance, k: int, vec: Sequence, levels: Optional[int] = None) -> list:
    n = inst.depth + 1 if levels is None else levels
    off = _level_offsets(inst, k, n)
    return [tuple(vec[off[i]:off[i + 1]]) for i in range(n)]


def kernel_basis(inst: PeriodizationInstance, k: int) -> list[tuple]:
    """Rational basis of ``ker Φ^k`` (over Q; works for integer data read over Q)."""
    return rational_nullspace(inst.tower(k).equalizer_matrix())


def apply_levelwise(inst_src, inst_tgt, op: Mapping[int, Matrix], shift_: int, k: int, vec) -> tuple:
    """Apply a degreewise operator level by level: ``(x_i) -> (op x_i)``."""
    levels = unstack(inst_src, k, vec)
    out = []
    for i, x in enumerate(levels):
        m = op.get(k + 2 * i)
        tgt_rank = inst_tgt.X.rank(k + shift_ + 2 * i)
        out.append(m.apply(list(x)) if m is not None and m.cols else (0,) * tgt_rank)
    return stacked(inst_tgt, k + shift_, out)


def is_kernel_vector(inst, k, vec) -> bool:
    return all(x == 0 for x in inst.tower(k).equalizer_matrix().apply(list(vec)))


def coordinates(basis: Sequence[Sequence], vec: Sequence) -> Optional[tuple]:
    """Coefficients of ``vec`` in the given vectors (rational), or ``None``."""
    if not basis:
        return () if all(x == 0 for x in vec) else None
    n = len(vec)
    M = Matrix(n, len(basis), [Fraction(basis[j][i]) for i in range(n) for j in range(len(basis))])
    return rational_solve(M, list(vec))


def factorial_kernel_vector(inst: PeriodizationInstance, k: int, first_level: int = 0) -> tuple:
    """The compatible family ``x_i = t_i x_{i+1}`` on a rank-one tower, starting
    with coefficient 1 at ``first_level`` (zeros below it).

    For the z-model in degree 0 this is ``(1, z, z^2/2!, ...)``; in degree 2 it is
    ``(z, z^2/2!, z^3/3!, ...)``.
    """
    T = inst.tower(k)
    levels, c = [], Fraction(1)
    for i in range(T.depth + 1):
        r = T.ranks[i]
        if i < first_level:
            levels.append((0,) * r)
            continue
        if r != 1:
            raise ValueError("factorial vector needs rank-one levels")
        if i > first_level:
            t = T.transitions[i - 1][0, 0]
            if t == 0:
                raise ValueError(f"transition into level {i - 1} is zero")
            c = c / t
        levels.append((c,))
    return stacked(inst, k, levels)


def W_on_kernels(inst: PeriodizationInstance, k: int, src=None, tgt=None) -> Matrix:
    """Matrix of ``∏D : ker Φ^k -> ker Φ^{k-2}``; bases default to rational nullspace bases."""
    src = kernel_basis(inst, k) if src is None else src
    tgt = kernel_basis(inst, k - 2) if tgt is None else tgt
    cols = []
    for v in src:
        w = apply_levelwise(inst, inst, inst.D, -2, k, v)
        c = coordinates(tgt, w)
        if c is None:
            raise ArithmeticError("∏D left the kernel")
        cols.append(c)
    return Matrix(len(tgt), len(src), [cols[j][i] for i in range(len(tgt)) for j in range(len(src))])


def S_after_W_restricts(inst: PeriodizationInstance, k: int, vec) -> bool:
    """``E(∏D x)`` agrees with ``x`` on levels ``0..N_t-1`` (``E`` drops one level)."""
    w = unstack(inst, k - 2, apply_levelwise(inst, inst, inst.D, -2, k, vec))
    shifted = w[1:]
    x = unstack(inst, k, vec)
    return shifted == x[:-1]


def s2_periodized_action(N: int = 10, depth: int = 6):
    """Periodized action of ``z -> z + w`` on degree-0 classes over Q.

    Returns ``(matrix, basis)`` with basis ``e_1 = (z^i/i!)`` and
    ``e_w = (0, w, wz, wz^2/2!, ...)``.
    """
    model = build_s2_model(QQ, N)
    inst = model_instance(model, d_dz(model), depth)
    phi = s2_phi_action(QQ, N)
    ops = {k: phi.matrix(k) for k in inst.X.degrees}
    e1, ew = [], []
    for i in range(depth + 1):
        basis = model.degree_basis(2 * i)
        e1.append(tuple(Fraction(1, factorial(i)) if m == (i, ()) else 0 for m in basis))
        ew.append(tuple(Fraction(1, factorial(i - 1)) if i >= 1 and m == (i - 1, ("w",)) else 0
                        for m in basis))
    e1, ew = stacked(inst, 0, e1), stacked(inst, 0, ew)
    for v in (e1, ew):
        if not is_kernel_vector(inst, 0, v):
            raise ArithmeticError("S^2 basis vector is not in the kernel")
    if len(kernel_basis(inst, 0)) != 2 or coordinates([e1, ew], kernel_basis(inst, 0)[0]) is None:
        raise ArithmeticError("e_1, e_w do not span the degree-0 kernel")
    cols = [coordinates([e1, ew], apply_levelwise(inst, inst, ops, 0, 0, v)) for v in (e1, ew)]
    return Matrix(2, 2, [cols[j][i] for i in range(2) for j in range(2)]), (e1, ew)


# -- random instances over Q ----------------------------------------------------------

def _random_unimodular(rng: random.Random, n: int) -> Matrix:
    M = Matrix.identity(n)
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            E = Matrix.identity(n) + Matrix(n, n, [rng.choice((-1, 1)) if (r, c) == (i, j) else 0
                                                     for r in range(n) for c in range(n)])
            M = E @ M
    return M


def random_instance(rng: random.Random, width: Optional[int] = None, depth: Optional[int] = None,
                    ring=QQ, max_entry: int = 3) -> PeriodizationInstance:
    """A random ``(X, D)`` with ``X`` on degrees ``0..width-1`` (``width <= 12``).

    ``X`` is cohomology plus contractible pairs, scrambled by unimodular changes
    of basis; ``D`` is a random map on the cohomology part plus ``dh + hd``.
    """
    w = width if width is not None else rng.randint(3, 12)
    if not 1 <= w <= 12:
        raise ValueError("window must have width 1..12")
    n_t = depth if depth is not None else rng.randint(2, 4)
    h = [rng.randint(0, 2) for _ in range(w)]
    pairs = [rng.randint(0, 1) if k + 1 < w else 0 for k in range(w)]  # pair e^k -> f^{k+1}
    # basis of X^k: H part, then sources e (pairs[k]), then targets f (pairs[k-1])
    ranks = [h[k] + pairs[k] + (pairs[k - 1] if k else 0) for k in range(w)]
    d = {}
    for k in range(w - 1):
        M = [[0] * ranks[k] for _ in range(ranks[k + 1])]
        for p in range(pairs[k]):
            M[h[k + 1] + pairs[k + 1] + p][h[k] + p] = 1
        d[k] = Matrix.from_rows(M, ranks[k]) if ranks[k + 1] else Matrix.zeros(0, ranks[k])

    def rnd(r, c):
        return Matrix(r, c, [rng.randint(-max_entry, max_entry) for _ in range(r * c)])

    def rank(k):
        return ranks[k] if 0 <= k < w else 0

    def dd(k):
        return d.get(k, Matrix.zeros(rank(k + 1), rank(k)))

    D = {}
    hh = {k: rnd(rank(k - 3), rank(k)) for k in range(w)}
    for k in range(w):
        DH = Matrix.zeros(rank(k - 2), rank(k))
        if k >= 2:
            blk = rnd(h[k - 2], h[k])
            DH = Matrix(rank(k - 2), rank(k), [blk[i, j] if i < h[k - 2] and j < h[k] else 0
                                               for i in range(rank(k - 2)) for j in range(rank(k))])
        hk1 = hh.get(k + 1, Matrix.zeros(rank(k - 2), rank(k + 1)))
        D[k] = DH + dd(k - 3) @ hh[k] + hk1 @ dd(k)
    P = {k: _random_unimodular(rng, ranks[k]) if ranks[k] else Matrix.identity(0) for k in range(w)}
    Pinv = {k: integer_inverse(P[k]) for k in range(w)}

    def conj(M, tk, sk):
        if tk < 0 or tk >= w or M.rows == 0 or M.cols == 0:
            return M
        return P[tk] @ M @ Pinv[sk]

    d2 = {k: conj(d[k], k + 1, k) for k in d}
    D2 = {k: conj(D[k], k - 2, k) for k in D}
    X = CochainComplex(ring, 0, w - 1, dict(enumerate(ranks)), d2)
    return PeriodizationInstance(X, D2, n_t, name="random")

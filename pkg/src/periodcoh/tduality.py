"""T-duality on the point model ``F[[z]] ⊗ Λ(v, vh)``.

``T = ∫_v ∘ u*`` with ``u*: z -> z + v·vh`` sends the v-side ``F[[z]][v]`` to the
vh-side ``F[[z]][vh]``; ``T' = ∫_vh ∘ (u*)^{-1}`` goes back.  On the plain
model ``T`` kills ``1``; after periodization it swaps the two classes, and
``T'∘T`` is the periodicity operator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactla import Matrix, determinant, rational_rank
from .modcat import MOD, RAT, CoefficientRing
from .models.poly import (
    Element,
    GradedOperator,
    PolyModel,
    compose,
    d_dz,
    inclusion,
    integrate_generator,
    ring_endomorphism,
)
from .periodic import (
    apply_levelwise,
    coordinates,
    factorial_kernel_vector,
    is_kernel_vector,
    kernel_basis,
    model_instance,
    periodic_table,
    z_instance,
)


@dataclass(frozen=True)
class TDualityModel:
    ring: CoefficientRing
    N: int
    full: PolyModel
    side_v: PolyModel
    side_vh: PolyModel
    u_star: GradedOperator
    u_star_inverse: GradedOperator
    integrate_v: GradedOperator
    integrate_vh: GradedOperator


def _z_plus(model: PolyModel, sign: int) -> Element:
    vvh = model.mul(model.gen("v"), model.gen("vh"))
    return Element({(1, ()): 1}) + vvh.scale(sign)


def build_tduality_model(ring, N: int, twisted: bool = True) -> TDualityModel:
    """``twisted=False`` replaces ``u*`` by the identity (the untwisted control)."""
    if isinstance(ring, str):
        ring = CoefficientRing.parse(ring)
    if N < 1:
        raise ValueError("T-duality model needs N >= 1")
    full = PolyModel(ring, N, ("v", "vh"))
    side_v = PolyModel(ring, N, ("v",))
    side_vh = PolyModel(ring, N, ("vh",))
    if twisted:
        us = ring_endomorphism(full, {"z": _z_plus(full, 1)}, "u*")
        usi = ring_endomorphism(full, {"z": _z_plus(full, -1)}, "u*^-1")
    else:
        us = ring_endomorphism(full, {}, "id")
        usi = us
    return TDualityModel(ring, N, full, side_v, side_vh, us, usi,
                         integrate_generator(full, full, "v"), integrate_generator(full, full, "vh"))


def _retarget(op: GradedOperator, model: PolyModel, name: str) -> GradedOperator:
    return GradedOperator(op.source, model, op.shift, dict(op.images), name)


def T_operator(m: TDualityModel) -> GradedOperator:
    """``T : F[[z]][v] -> F[[z]][vh]``, degree -1."""
    op = compose(m.integrate_v, compose(m.u_star, inclusion(m.side_v, m.full)))
    return _retarget(op, m.side_vh, "T")


def T_prime_operator(m: TDualityModel) -> GradedOperator:
    """``T' : F[[z]][vh] -> F[[z]][v]``, degree -1."""
    op = compose(m.integrate_vh, compose(m.u_star_inverse, inclusion(m.side_vh, m.full)))
    return _retarget(op, m.side_v, "T'")


@dataclass(frozen=True)
class UnperiodizedReport:
    T: GradedOperator
    rank: int
    dimension: int
    kills_one: bool
    injective: bool
    surjective: bool

    def to_json(self) -> dict:
        return {
            "T_matrix": {str(d): self.T.matrix(d).tolist() for d in self.T.degrees()},
            "rank": self.rank,
            "dimension": self.dimension,
            "kernel_witnesses": ["1"] if self.kills_one else [],
            "injective": self.injective,
            "surjective": self.surjective,
        }


def T_unperiodized(m: TDualityModel) -> UnperiodizedReport:
    T = T_operator(m)
    rank = sum(rational_rank(T.matrix(d)) for d in T.degrees())
    dim = len(m.side_v.basis)
    kills_one = not T(m.side_v.one())
    return UnperiodizedReport(T, rank, dim, kills_one, rank == dim, rank == len(m.side_vh.basis))


@dataclass(frozen=True)
class PeriodizedReport:
    ring: CoefficientRing
    matrix: Matrix
    det: object
    isomorphism: bool
    identification: str
    vacuous: bool = False

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "periodized_matrix": self.matrix.tolist(),
            "det": str(self.det),
            "isomorphism": self.isomorphism,
            "identification": self.identification,
            "vacuous": self.vacuous,
        }


IDENTIFICATION = ("bases (1, v) -> (1^, v^); the degree -1 class on the dual side is "
                  "identified with v^ through the periodicity operator W")


def _finite_exact_zero(ring: CoefficientRing, N: int, depth: int) -> bool:
    """True when the periodic table is 0 | 0 (so all periodized groups vanish)."""
    tab = periodic_table(z_instance(ring, N, depth))
    return tab.even.symbol == "0" and tab.odd.symbol == "0"


def _classes(m: TDualityModel, depth: int):
    """Kernel classes on both sides: ``1, v`` and ``1^, v^`` (with ``v^`` moved to
    degree -1 by ``W``), each normalized to start with a basis monomial."""
    iv = model_instance(m.side_v, d_dz(m.side_v), depth)
    ih = model_instance(m.side_vh, d_dz(m.side_vh), depth)
    one = factorial_kernel_vector(iv, 0)
    v = factorial_kernel_vector(iv, 1)
    one_h = factorial_kernel_vector(ih, 0)
    vh = factorial_kernel_vector(ih, 1)
    vh_low = apply_levelwise(ih, ih, ih.D, -2, 1, vh)  # W(v^) in degree -1
    for inst, k, x in ((iv, 0, one), (iv, 1, v), (ih, 0, one_h), (ih, 1, vh), (ih, -1, vh_low)):
        if not is_kernel_vector(inst, k, x) or len(kernel_basis(inst, k)) != 1:
            raise ArithmeticError(f"degree-{k} kernel is not spanned by the factorial class")
    return iv, ih, one, v, one_h, vh_low


def T_periodized(ring="Q", N: int = 10, depth: int = 6) -> PeriodizedReport:
    """The 2x2 matrix of ``T`` on periodized classes (columns: images of ``1`` and ``v``)."""
    if isinstance(ring, str):
        ring = CoefficientRing.parse(ring)
    if ring.tag == MOD and _finite_exact_zero(ring, N, depth):
        return PeriodizedReport(ring, Matrix.zeros(0, 0), 1, True, IDENTIFICATION, vacuous=True)
    if ring.tag != RAT:
        raise ValueError(f"periodization over {ring} is not finite-exact; no matrix to report")
    m = build_tduality_model(ring, N)
    iv, ih, one, v, one_h, vh_low = _classes(m, depth)
    T = T_operator(m)
    ops = {k: T.matrix(k) for k in iv.X.degrees}
    t1 = apply_levelwise(iv, ih, ops, -1, 0, one)   # lands in degree -1
    tv = apply_levelwise(iv, ih, ops, -1, 1, v)     # lands in degree 0
    c1 = coordinates([vh_low], t1)
    cv = coordinates([one_h], tv)
    if c1 is None or cv is None:
        raise ArithmeticError("T does not map kernel classes to kernel classes")
    M = Matrix.from_rows([[0, cv[0]], [c1[0], 0]])
    det = determinant(M)
    return PeriodizedReport(ring, M, det, det != 0, IDENTIFICATION)


@dataclass(frozen=True)
class DoubleDualityReport:
    ring: CoefficientRing
    TpT_matrix: Matrix
    W_matrix: Matrix
    equal: bool
    vectors_equal: bool
    vacuous: bool = False

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "TpT_matrix": self.TpT_matrix.tolist(),
            "W_matrix": self.W_matrix.tolist(),
            "double_duality_equal": self.equal,
            "vectors_equal": self.vectors_equal,
            "vacuous": self.vacuous,
        }


def double_tduality(ring="Q", N: int = 10, depth: int = 6) -> DoubleDualityReport:
    """Compare ``T'∘T`` with ``W = ∏D`` on the classes ``1`` and ``v``.

    Both are written in the target basis ``(W 1, W v)``; equality is also checked
    on the raw level vectors.
    """
    if isinstance(ring, str):
        ring = CoefficientRing.parse(ring)
    if ring.tag == MOD and _finite_exact_zero(ring, N, depth):
        z = Matrix.zeros(0, 0)
        return DoubleDualityReport(ring, z, z, True, True, vacuous=True)
    if ring.tag != RAT:
        raise ValueError(f"periodization over {ring} is not finite-exact")
    m = build_tduality_model(ring, N)
    iv, ih, one, v, _, _ = _classes(m, depth)
    T, Tp = T_operator(m), T_prime_operator(m)
    opsT = {k: T.matrix(k) for k in iv.X.degrees}
    opsTp = {k: Tp.matrix(k) for k in ih.X.degrees}
    images = []
    for k, x in ((0, one), (1, v)):
        w = apply_levelwise(iv, iv, iv.D, -2, k, x)
        tpt = apply_levelwise(ih, iv, opsTp, -1, k - 1, apply_levelwise(iv, ih, opsT, -1, k, x))
        images.append((k - 2, w, tpt))
    basis = {k: w for k, w, _ in images}
    cols_w, cols_t = [], []
    for k, w, tpt in images:
        cw, ct = coordinates([basis[k]], w), coordinates([basis[k]], tpt)
        if ct is None:
            raise ArithmeticError("T'∘T left the kernel")
        cols_w.append([cw[0] if k2 == k else 0 for k2 in (-2, -1)])
        cols_t.append([ct[0] if k2 == k else 0 for k2 in (-2, -1)])
    Wm = Matrix(2, 2, [cols_w[j][i] for i in range(2) for j in range(2)])
    Tm = Matrix(2, 2, [cols_t[j][i] for i in range(2) for j in range(2)])
    same = all(w == tpt for _, w, tpt in images)
    return DoubleDualityReport(ring, Tm, Wm, Tm == Wm, same)


def untwisted_double_duality(ring="Q", N: int = 6) -> Matrix:
    """``T'∘T`` on the plain model with ``u*`` replaced by the identity, as one
    block matrix over all degrees.  It vanishes: no twist, no duality."""
    m = build_tduality_model(ring, N, twisted=False)
    op = compose(T_prime_operator(m), T_operator(m))
    blocks = [op.matrix(d) for d in op.degrees()]
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = Matrix.zeros(rows, cols)
    r = c = 0
    entries = list(out.entries)
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                entries[(r + i) * cols + c + j] = b[i, j]
        r += b.rows
        c += b.cols
    return Matrix(rows, cols, entries)

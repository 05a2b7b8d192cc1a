"""Truncated graded rings ``F[[z]]/(z^{N+1}) ⊗ Λ(...)`` and operators on them.

Generators are ``u, v, vh`` (degree 1, odd) and ``w`` (degree 2, ``w^2 = 0``);
``z`` has degree 2.  Monomials are kept in the normal order ``u < v < vh < w``
with Koszul signs.  Products whose z-exponent exceeds ``N`` raise
:class:`TruncationError` instead of being dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Mapping, Optional, Sequence

from ..exactla import Matrix
from ..modcat import CoefficientRing

GEN_ORDER = ("u", "v", "vh", "w")
GEN_DEGREE = {"u": 1, "v": 1, "vh": 1, "w": 2}

Monomial = tuple  # (z_exponent, tuple of generators in normal order)


class TruncationError(ArithmeticError):
    """A product ran past the z-truncation."""


def _normalize_gens(gens: Sequence[str]) -> tuple[str, ...]:
    for g in gens:
        if g not in GEN_DEGREE:
            raise ValueError(f"unknown exterior generator {g!r}")
    if len(set(gens)) != len(gens):
        raise ValueError("repeated exterior generator")
    return tuple(sorted(gens, key=GEN_ORDER.index))


def monomial_degree(mono: Monomial) -> int:
    k, gens = mono
    return 2 * k + sum(GEN_DEGREE[g] for g in gens)


def monomial_label(mono: Monomial) -> str:
    k, gens = mono
    parts = []
    if k == 1:
        parts.append("z")
    elif k > 1:
        parts.append(f"z^{k}")
    parts += list(gens)
    return "*".join(parts) if parts else "1"


def _odd(g: str) -> bool:
    return GEN_DEGREE[g] % 2 == 1


def _merge(a: tuple[str, ...], b: tuple[str, ...]) -> Optional[tuple[int, tuple[str, ...]]]:
    """Sign and normal-ordered product of two exterior monomials, or ``None`` if zero."""
    if set(a) & set(b):
        return None
    seq = list(a) + list(b)
    sign = 1
    # bubble sort, counting swaps of two odd generators
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            x, y = seq[j], seq[j + 1]
            if GEN_ORDER.index(x) > GEN_ORDER.index(y):
                seq[j], seq[j + 1] = y, x
                if _odd(x) and _odd(y):
                    sign = -sign
    return sign, tuple(seq)


class Element(dict):
    """A finite linear combination ``{monomial: coefficient}`` with no zero entries."""

    def clean(self) -> "Element":
        return Element({m: c for m, c in self.items() if c != 0})

    def __add__(self, other):
        out = Element(self)
        for m, c in other.items():
            out[m] = out.get(m, 0) + c
        return out.clean()

    def __neg__(self):
        return Element({m: -c for m, c in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Element":
        return Element({m: c * x for m, x in self.items()}).clean()


@dataclass(frozen=True)
class PolyModel:
    """Basis: every ``z^k · S`` with ``0 <= k <= N`` and ``S`` a subset of the generators."""

    ring: CoefficientRing
    N: int
    generators: tuple[str, ...] = ()
    basis: tuple[Monomial, ...] = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("z-truncation must be >= 0")
        gens = _normalize_gens(self.generators)
        object.__setattr__(self, "generators", gens)
        monos = []
        for r in range(len(gens) + 1):
            for S in combinations(gens, r):
                for k in range(self.N + 1):
                    monos.append((k, S))
        monos.sort(key=lambda m: (monomial_degree(m), m[0], [GEN_ORDER.index(g) for g in m[1]]))
        object.__setattr__(self, "basis", tuple(monos))
        object.__setattr__(self, "_index", {})
        by_deg: dict[int, list] = {}
        for m in monos:
            by_deg.setdefault(monomial_degree(m), []).append(m)
        for d, ms in by_deg.items():
            for i, m in enumerate(ms):
                self._index[m] = (d, i)
        object.__setattr__(self, "_by_degree", {d: tuple(ms) for d, ms in by_deg.items()})

    # -- bookkeeping
    @property
    def max_degree(self) -> int:
        return 2 * self.N + sum(GEN_DEGREE[g] for g in self.generators)

    def degree_basis(self, d: int) -> tuple[Monomial, ...]:
        return self._by_degree.get(d, ())

    def rank(self, d: int) -> int:
        return len(self.degree_basis(d))

    def labels(self, d: int) -> tuple[str, ...]:
        return tuple(monomial_label(m) for m in self.degree_basis(d))

    def index(self, mono: Monomial) -> tuple[int, int]:
        """``(degree, position within degree)``."""
        return self._index[mono]

    def contains(self, mono: Monomial) -> bool:
        return mono in self._index

    # -- elements
    def one(self) -> Element:
        return Element({(0, ()): 1})

    def z(self) -> Element:
        if self.N < 1:
            raise TruncationError("z is not in a model truncated at N = 0")
        return Element({(1, ()): 1})

    def gen(self, g: str) -> Element:
        if g not in self.generators:
            raise ValueError(f"{g} is not a generator of this model")
        return Element({(0, (g,)): 1})

    def mono(self, k: int, gens: Sequence[str] = ()) -> Element:
        m = (k, _normalize_gens(gens))
        if not self.contains(m):
            raise TruncationError(f"monomial {monomial_label(m)} is not in the model")
        return Element({m: 1})

    def mul(self, a: Element, b: Element) -> Element:
        out = Element()
        for (k1, s1), c1 in a.items():
            for (k2, s2), c2 in b.items():
                merged = _merge(s1, s2)
                if merged is None:
                    continue
                sign, s = merged
                k = k1 + k2
                if k > self.N:
                    raise TruncationError(f"z^{k} exceeds the truncation N = {self.N}")
                m = (k, s)
                out[m] = out.get(m, 0) + sign * c1 * c2
        return out.clean()

    def power(self, a: Element, e: int) -> Element:
        out = self.one()
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def vector(self, x: Element, d: int) -> tuple:
        """Coordinates of a homogeneous element in the degree-``d`` basis."""
        vec = [0] * self.rank(d)
        for m, c in x.items():
            dm, i = self.index(m)
            if dm != d:
                raise ValueError(f"{monomial_label(m)} has degree {dm}, not {d}")
            vec[i] = c
        return tuple(vec)

    def element(self, vec: Sequence, d: int) -> Element:
        return Element({m: c for m, c in zip(self.degree_basis(d), vec)}).clean()

    def format(self, x: Element) -> str:
        if not x:
            return "0"
        terms = []
        for m in self.basis:
            c = x.get(m, 0)
            if c:
                lab = monomial_label(m)
                terms.append(lab if c == 1 else f"{c}*{lab}" if lab != "1" else str(c))
        return " + ".join(terms)

    def to_json(self) -> dict:
        degs = sorted(self._by_degree)
        return {
            "ring": str(self.ring),
            "N": self.N,
            "generators": list(self.generators),
            "basis": [{"label": monomial_label(m), "degree": monomial_degree(m)} for m in self.basis],
            "ranks": {str(d): self.rank(d) for d in degs},
        }


@dataclass(frozen=True)
class GradedOperator:
    """A linear map of degree ``shift`` given by the images of basis monomials."""

    source: PolyModel
    target: PolyModel
    shift: int
    images: Mapping[Monomial, Element]
    name: str = ""

    def __post_init__(self):
        for m, img in self.images.items():
            want = monomial_degree(m) + self.shift
            for t in img:
                if monomial_degree(t) != want:
                    raise ValueError(f"{self.name}: image of {monomial_label(m)} is not homogeneous "
                                     f"of degree {want}")
                if not self.target.contains(t):
                    raise TruncationError(f"{self.name}: {monomial_label(t)} outside target")

    def __call__(self, x: Element) -> Element:
        out = Element()
        for m, c in x.items():
            out = out + self.images.get(m, Element()).scale(c)
        return out

    def matrix(self, d: int) -> Matrix:
        """Matrix from source degree ``d`` to target degree ``d + shift``."""
        src = self.source.degree_basis(d)
        tgt_rank = self.target.rank(d + self.shift)
        cols = [self.target.vector(self.images.get(m, Element()), d + self.shift) if self.images.get(m)
                else (0,) * tgt_rank for m in src]
        return Matrix(tgt_rank, len(src), [cols[j][i] for i in range(tgt_rank) for j in range(len(src))])

    def degrees(self) -> list[int]:
        return sorted({monomial_degree(m) for m in self.source.basis})

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "shift": self.shift,
            "matrices": {str(d): self.matrix(d).tolist() for d in self.degrees()},
        }


def compose(g: GradedOperator, f: GradedOperator, name: str = "") -> GradedOperator:
    """``g ∘ f``."""
    if f.target != g.source:
        raise ValueError("cannot compose operators on different models")
    return GradedOperator(f.source, g.target, f.shift + g.shift,
                          {m: g(img) for m, img in f.images.items()}, name or f"{g.name}∘{f.name}")


def linear_operator(source: PolyModel, target: PolyModel, shift: int,
                    rule: Callable[[Monomial], Element], name: str = "") -> GradedOperator:
    return GradedOperator(source, target, shift, {m: rule(m) for m in source.basis}, name)


def ring_endomorphism(model: PolyModel, gen_images: Mapping[str, Element], name: str = "") -> GradedOperator:
    """Multiplicative extension of ``z -> gen_images['z']`` and ``g -> gen_images[g]``.

    Missing generators are fixed.  Each monomial is mapped by repeated
    multiplication in the model, so truncation overflow surfaces as an error.
    """
    imgs = {g: gen_images.get(g, model.gen(g)) for g in model.generators}
    zimg = gen_images.get("z", Element({(1, ()): 1}))

    powers = [model.one()]

    def rule(m):
        k, gens = m
        while len(powers) <= k:
            powers.append(model.mul(powers[-1], zimg))
        x = powers[k]
        for g in gens:
            x = model.mul(x, imgs[g])
        return x

    return linear_operator(model, model, 0, rule, name)


def inclusion(small: PolyModel, big: PolyModel) -> GradedOperator:
    if small.N > big.N or not set(small.generators) <= set(big.generators):
        raise ValueError("model is not a submodel")
    return linear_operator(small, big, 0, lambda m: Element({m: 1}), "incl")


# -- the z-model and the torus operators -----------------------------------

def build_z_model(ring, N: int) -> PolyModel:
    if isinstance(ring, str):
        ring = CoefficientRing.parse(ring)
    return PolyModel(ring, N)


def d_dz(model: PolyModel) -> GradedOperator:
    """``z^k e -> k z^{k-1} e``; degree -2."""
    def rule(m):
        k, gens = m
        return Element({(k - 1, gens): k}) if k else Element()

    return linear_operator(model, model, -2, rule, "d/dz")


def torus_extend(model: PolyModel) -> PolyModel:
    return PolyModel(model.ring, model.N, tuple(set(model.generators) | {"u", "v"}))


def _uv(model: PolyModel) -> Element:
    return model.mul(model.gen("u"), model.gen("v"))


def phi_star(ext: PolyModel) -> GradedOperator:
    """The ring map ``z -> z + uv``, ``u -> u``, ``v -> v``."""
    return ring_endomorphism(ext, {"z": Element({(1, ()): 1}) + _uv(ext)}, "phi*")


def phi_star_inverse(ext: PolyModel) -> GradedOperator:
    return ring_endomorphism(ext, {"z": Element({(1, ()): 1}) - _uv(ext)}, "phi*^-1")


def _strip_front(m: Monomial, g: str) -> Optional[tuple[int, Monomial]]:
    """Write ``m = sign · g · rest``; ``None`` if ``g`` does not divide ``m``."""
    k, gens = m
    if g not in gens:
        return None
    pos = gens.index(g)
    sign = -1 if _odd(g) and sum(_odd(x) for x in gens[:pos]) % 2 else 1
    return sign, (k, gens[:pos] + gens[pos + 1:])


def integrate_generator(source: PolyModel, target: PolyModel, g: str) -> GradedOperator:
    """``∫(g · m) = m``: strip ``g`` from the left; monomials without ``g`` die."""
    def rule(m):
        hit = _strip_front(m, g)
        if hit is None:
            return Element()
        sign, rest = hit
        return Element({rest: sign})

    return linear_operator(source, target, -GEN_DEGREE[g], rule, f"∫_{g}")


def fiber_integrate_T2(ext: PolyModel) -> GradedOperator:
    """Coefficient at ``uv``: ``uv · z^k -> z^k``; degree -2."""
    base = PolyModel(ext.ring, ext.N, tuple(g for g in ext.generators if g not in ("u", "v")))

    def rule(m):
        k, gens = m
        if "u" in gens and "v" in gens:
            # u < v come first in normal order, so m = uv · rest with no sign
            return Element({(k, tuple(x for x in gens if x not in ("u", "v"))): 1})
        return Element()

    return linear_operator(ext, base, -2, rule, "∫_T2")


def compose_D(ext: PolyModel) -> GradedOperator:
    """``∫ ∘ φ* ∘ incl`` on the z-model underlying ``ext``."""
    base = PolyModel(ext.ring, ext.N, tuple(g for g in ext.generators if g not in ("u", "v")))
    return compose(fiber_integrate_T2(ext), compose(phi_star(ext), inclusion(base, ext)), "D")


def build_s2_model(ring, N: int) -> PolyModel:
    if isinstance(ring, str):
        ring = CoefficientRing.parse(ring)
    return PolyModel(ring, N, ("w",))


def s2_phi_action(ring, N: int) -> GradedOperator:
    """The ring map ``z -> z + w``, ``w -> w`` on ``F[w]/(w^2) ⊗ F[[z]]``."""
    model = build_s2_model(ring, N)
    return ring_endomorphism(model, {"z": Element({(1, ()): 1, (0, ("w",)): 1})}, "phi*_S2")


def operator_dump(model: PolyModel, ops: Sequence[GradedOperator]) -> str:
    return json.dumps({"model": model.to_json(), "operators": [op.to_json() for op in ops]},
                      sort_keys=True)

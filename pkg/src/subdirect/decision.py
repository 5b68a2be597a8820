"""Conjugacy and membership for subgroups of products of free groups.

Subgroups are given as preimages ``H = mu^-1(<S>)`` of a subgroup of an
abelian group under a homomorphism ``mu`` defined factor by factor.
Conjugacy in ``H`` reduces to conjugacy in the product plus a coset
intersection in the abelian quotient; finite-index overgroups are handled
through unique roots.  A bounded two-sided search covers membership in
subgroups given only by generators.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .fibre import FibreSpec, SubdirectElement
from .intlin import AbelianGroup, coset_intersects
from .presentations import FiniteGroup, catalogue
from .words import Alphabet, FreeHom, Word, apply_hom, centralizer, free_conjugacy

__all__ = [
    "ProductGroup",
    "PreimageSubgroup",
    "ConjugacyResult",
    "BoundedResult",
    "GeneratorBall",
    "product_conjugacy",
    "product_centralizer",
    "subgroup_conjugacy",
    "finite_index_reduction",
    "member_structured",
    "member_bounded",
]


@dataclass(frozen=True)
class ProductGroup:
    factors: tuple[Alphabet, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("at least one factor")

    def identity(self) -> SubdirectElement:
        return SubdirectElement(A.identity() for A in self.factors)

    def place(self, w: Word, i: int) -> SubdirectElement:
        return SubdirectElement(w if j == i else A.identity() for j, A in enumerate(self.factors))

    def generators(self) -> list[SubdirectElement]:
        return [self.place(g, i) for i, A in enumerate(self.factors) for g in A.gens]

    def check(self, e: Sequence[Word]) -> SubdirectElement:
        if len(e) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components, got {len(e)}")
        return SubdirectElement(e)


@dataclass(frozen=True)
class PreimageSubgroup:
    """``mu^-1(<S>)`` where ``mu`` sums per-factor maps into ``ambient``."""

    D: ProductGroup
    ambient: AbelianGroup
    images: tuple[tuple[tuple[int, ...], ...], ...]
    S: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if len(self.images) != len(self.D.factors):
            raise ValueError("one image list per factor")
        object.__setattr__(
            self, "images", tuple(tuple(self.ambient.check(v) for v in im) for im in self.images)
        )
        object.__setattr__(self, "S", tuple(self.ambient.check(v) for v in self.S))
        maps = tuple(FreeHom(A, im, self.ambient) for A, im in zip(self.D.factors, self.images))
        object.__setattr__(self, "maps", maps)

    @classmethod
    def from_spec(cls, spec: FibreSpec) -> "PreimageSubgroup":
        """The kernel of a kernel-mode spec over an :class:`AbelianGroup`."""
        if not spec.kernel_mode or not isinstance(spec.quotient, AbelianGroup):
            raise ValueError("needs a kernel-mode spec with an abelian quotient")
        return cls(ProductGroup(spec.factors), spec.quotient, tuple(p.images for p in spec.maps))

    def mu(self, e: Sequence[Word]) -> tuple[int, ...]:
        acc = self.ambient.identity()
        for phi, w in zip(self.maps, self.D.check(e)):
            acc = self.ambient.multiply(acc, apply_hom(phi, w))
        return acc

    def __contains__(self, e) -> bool:
        return member_structured(e, self)


# ---------------------------------------------------------------------------
# conjugacy

def product_conjugacy(x: Sequence[Word], y: Sequence[Word], D: ProductGroup) -> SubdirectElement | None:
    """Componentwise conjugator ``g`` with ``g x g^-1 = y``, or ``None``."""
    x, y = D.check(x), D.check(y)
    parts = []
    for u, v in zip(x, y):
        g = free_conjugacy(u, v)
        if g is None:
            return None
        parts.append(g)
    return SubdirectElement(parts)


def product_centralizer(x: Sequence[Word], D: ProductGroup) -> list[SubdirectElement]:
    """Generators of the centralizer: the root of each nontrivial component, every letter otherwise."""
    x = D.check(x)
    return [D.place(g, i) for i, (w, A) in enumerate(zip(x, D.factors)) for g in centralizer(w, A)]


@dataclass
class ConjugacyResult:
    conjugate: bool
    witness: SubdirectElement | None = None
    reason: str = ""
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"answer": "yes" if self.conjugate else "no", "reason": self.reason}
        if self.witness is not None:
            out["witness"] = [str(w) for w in self.witness]
        out.update(self.detail)
        return out


def subgroup_conjugacy(x: Sequence[Word], y: Sequence[Word], H: PreimageSubgroup) -> ConjugacyResult:
    """Decide conjugacy of ``x, y`` inside ``H``.

    All conjugators in the product form ``g C(x)``; one of them lies in ``H``
    iff ``mu(g) + mu(C(x))`` meets ``<S>``.
    """
    D = H.D
    x, y = D.check(x), D.check(y)
    for name, e in (("x", x), ("y", y)):
        if not member_structured(e, H):
            raise ValueError(f"{name} = {e} is not in the subgroup")
    g = product_conjugacy(x, y, D)
    if g is None:
        return ConjugacyResult(False, reason="not conjugate in the ambient product")
    C = product_centralizer(x, D)
    sol = coset_intersects(H.mu(g), [H.mu(c) for c in C], H.S, H.ambient)
    if sol is None:
        return ConjugacyResult(False, reason="no conjugator in the subgroup")
    ks, _ = sol
    w = g
    for c, k in zip(C, ks):
        if k:
            w = w * c ** k
    assert w * x * w.inverse() == y and member_structured(w, H)
    return ConjugacyResult(True, w, reason="conjugator adjusted by the centralizer")


def finite_index_reduction(
    x: Sequence[Word],
    y: Sequence[Word],
    coset_reps: Sequence[SubdirectElement],
    solver: Callable[[SubdirectElement, SubdirectElement], ConjugacyResult],
) -> ConjugacyResult:
    """Conjugacy in ``G`` from conjugacy in a subgroup ``H`` of finite index.

    ``coset_reps`` are right coset representatives ``c_i`` (``G = U H c_i``)
    and ``solver`` decides conjugacy in ``H``.  With ``m = [G:H]!`` both
    ``x^m`` and ``y^m`` lie in ``H``, and roots are unique in products of
    free groups, so ``x ~ y`` in ``G`` iff ``y^m ~ (c_i x c_i^-1)^m`` in ``H``
    for some ``i``.
    """
    m0 = len(coset_reps)
    if m0 < 1:
        raise ValueError("need at least one coset representative")
    m = math.factorial(m0)
    x, y = SubdirectElement(x), SubdirectElement(y)
    ym = y ** m
    for i, c in enumerate(coset_reps):
        res = solver(x.conjugate(c) ** m, ym)
        if res.conjugate:
            g = res.witness * c if res.witness is not None else None
            if g is not None:
                assert g * x * g.inverse() == y
            return ConjugacyResult(True, g, reason=f"found at coset {i}", detail={"coset": i, "m": m})
    return ConjugacyResult(False, reason="no coset representative works", detail={"m": m})


# ---------------------------------------------------------------------------
# membership

def member_structured(h: Sequence[Word], H: PreimageSubgroup) -> bool:
    """``mu(h)`` lies in ``<S>``."""
    return coset_intersects(H.mu(h), [], H.S, H.ambient) is not None


@dataclass
class BoundedResult:
    status: str  # "yes" | "no" | "unknown"
    witness: list[tuple[int, int]] | None = None
    certificate: dict | None = None

    def __post_init__(self):
        assert not (self.witness is not None and self.certificate is not None)

    def to_json(self) -> dict:
        out: dict = {"answer": self.status}
        if self.witness is not None:
            out["witness"] = [[i, s] for i, s in self.witness]
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


class GeneratorBall:
    """Breadth-first ball of products of generators, grown on demand and reusable across queries.

    ``expr[e]`` is a shortest product ``[(index, sign), ...]`` found for ``e``.
    """

    def __init__(self, gens: Sequence[SubdirectElement]):
        self.gens = [SubdirectElement(g) for g in gens]
        if not self.gens:
            raise ValueError("need at least one generator")
        ident = SubdirectElement(w.alphabet.identity() for w in self.gens[0])
        self.expr: dict[SubdirectElement, list[tuple[int, int]]] = {ident: []}
        self.layer = [ident]
        self.depth = 0

    def grow(self):
        steps = [(i, s, g if s > 0 else g.inverse()) for i, g in enumerate(self.gens) for s in (1, -1)]
        nxt = []
        for e in self.layer:
            base = self.expr[e]
            for i, s, g in steps:
                f = e * g
                if f not in self.expr:
                    self.expr[f] = base + [(i, s)]
                    nxt.append(f)
        self.layer = nxt
        self.depth += 1

    def find(self, h: SubdirectElement, depth: int) -> list[tuple[int, int]] | None:
        while self.depth < depth and h not in self.expr:
            self.grow()
        return self.expr.get(h)


def _homs_to(Q: FiniteGroup, factors: Sequence[Alphabet]):
    """All tuples of letter images whose factors commute elementwise (homomorphisms from the product)."""
    ranks = [A.rank for A in factors]
    per_factor = [list(itertools.product(range(Q.order), repeat=r)) for r in ranks]
    t = Q.table

    def commute(u, v):
        return all(t[a][b] == t[b][a] for a in u for b in v)

    def rec(i, chosen):
        if i == len(per_factor):
            yield tuple(chosen)
            return
        for imgs in per_factor[i]:
            if all(commute(imgs, prev) for prev in chosen):
                yield from rec(i + 1, chosen + [imgs])

    yield from rec(0, [])


def _separates(Q: FiniteGroup, imgs, h, gens) -> bool:
    def ev(e):
        acc = Q.e
        for comp, im in zip(e, imgs):
            for x in comp.letters:
                acc = Q.table[acc][im[x - 1] if x > 0 else Q.inv[im[-x - 1]]]
        return acc

    return ev(h) not in Q.closure(ev(g) for g in gens)


def member_bounded(
    h: Sequence[Word],
    gens: Sequence[Sequence[Word]],
    max_length: int = 6,
    max_order: int = 8,
    quotients: Sequence[FiniteGroup] | None = None,
    ball: GeneratorBall | None = None,
) -> BoundedResult:
    """Two interleaved bounded searches for ``h`` in ``<gens>``.

    Phase ``d`` extends the product ball to depth ``d`` looking for ``h``,
    then tries the next slice of finite quotients (smallest first) looking
    for one that separates ``h`` from the image of ``<gens>``.
    """
    h = SubdirectElement(h)
    gens = [SubdirectElement(g) for g in gens]
    ball = ball or GeneratorBall(gens)
    factors = [w.alphabet for w in h]
    qs = [Q for Q in (quotients if quotients is not None else catalogue(max_order)) if Q.order <= max_order]
    qs.sort(key=lambda Q: Q.order)
    size = -(-len(qs) // (max_length + 1)) if qs else 0
    slices = [qs[i * size : (i + 1) * size] for i in range(max_length + 1)]
    for d in range(max_length + 1):
        found = ball.find(h, d)
        if found is not None:
            return BoundedResult("yes", witness=list(found))
        for Q in slices[d]:
            for imgs in _homs_to(Q, factors):
                if _separates(Q, imgs, h, gens):
                    return BoundedResult(
                        "no",
                        certificate={"quotient": Q.name, "order": Q.order, "images": [list(im) for im in imgs]},
                    )
    return BoundedResult("unknown")

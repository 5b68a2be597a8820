"""Fibre products (pullbacks) of free groups over evaluable quotients.

``G = {(x, y) : p1(x) = p2(y)}`` for epimorphisms ``p1, p2`` onto ``Q``.
A spec in *kernel mode* instead describes ``ker(phi_1 + ... + phi_n)`` for
maps onto an abelian ``Q`` (Stallings-Bieri groups and their relatives).
"""
from __future__ import annotations

import itertools
import json
import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, Sequence

from .intlin import AbelianGroup, AbelianHom, IntMatrix, hermite_normal_form, hom_kernel, lattice_solve
from .nilpotent import MagnusAlgebra, basic_commutators
from .presentations import FiniteGroup
from .stallings import NotSurjectiveError, free_basis, kernel_graph
from .words import Alphabet, FreeHom, Word, apply_hom, commutator, exponent_vector, parse_word

__all__ = [
    "SubdirectElement",
    "FibreSpec",
    "GeneratingData",
    "Classification",
    "ClassifyResult",
    "ThreeFactorReport",
    "member",
    "generators",
    "classify_two_factor",
    "three_factor_kernel",
    "normality_test",
    "sb_family",
    "sb_restriction_check",
    "example_fixtures",
    "coset_index",
    "random_word",
]


def random_word(alphabet: Alphabet, length: int, rng: random.Random) -> Word:
    """A uniformly random freely reduced word of exactly ``length`` letters (rank >= 1)."""
    letters: list[int] = []
    choices = [s * x for x in alphabet.letters for s in (1, -1)]
    while len(letters) < length:
        x = rng.choice(choices)
        if not letters or letters[-1] != -x:
            letters.append(x)
    return Word(alphabet, letters)


class SubdirectElement(tuple):
    """A tuple of words, one per factor, multiplied componentwise."""

    def __new__(cls, words: Iterable[Word]):
        return super().__new__(cls, tuple(words))

    def __mul__(self, other: "SubdirectElement") -> "SubdirectElement":
        if len(self) != len(other):
            raise ValueError("arity mismatch")
        return SubdirectElement(u * v for u, v in zip(self, other))

    def inverse(self) -> "SubdirectElement":
        return SubdirectElement(u.inverse() for u in self)

    __invert__ = inverse

    def __pow__(self, n: int) -> "SubdirectElement":
        return SubdirectElement(u ** n for u in self)

    def conjugate(self, g: "SubdirectElement") -> "SubdirectElement":
        """``g * self * g^-1``."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return not any(self)

    def __str__(self) -> str:
        return "(" + ", ".join(str(w) or "1" for w in self) + ")"

    def __repr__(self) -> str:
        return f"SubdirectElement{self}"


# ---------------------------------------------------------------------------
# quotient helpers

def _quotient_to_json(Q) -> dict:
    if isinstance(Q, AbelianGroup):
        return {"abelian": Q.to_json()}
    return Q.to_json()


def _quotient_from_json(data: dict):
    if "finite" in data:
        return FiniteGroup(data["finite"])
    if "abelian" in data:
        return AbelianGroup.from_json(data["abelian"])
    if "nilpotent" in data:
        d = data["nilpotent"]
        return MagnusAlgebra(int(d["rank"]), int(d["class"]))
    raise ValueError(f"unknown quotient description {sorted(data)}")


def _image_to_json(Q, img):
    if isinstance(Q, MagnusAlgebra):
        return str(img)
    if isinstance(Q, AbelianGroup):
        return list(img)
    return img


def _image_from_json(Q, img):
    if isinstance(Q, MagnusAlgebra):
        return parse_word(img, Alphabet(Q.rank))
    return img


def _is_surjective(phi: FreeHom) -> bool:
    Q = phi.target
    if isinstance(Q, FiniteGroup):
        return len(Q.closure(phi.images)) == Q.order
    if isinstance(Q, AbelianGroup):
        return AbelianHom(AbelianGroup(phi.source.rank), Q, phi.images).is_surjective()
    if isinstance(Q, MagnusAlgebra):
        # a subgroup of a nilpotent group that maps onto the abelianization is everything
        rows = [[img.coeffs.get((i,), 0) for i in range(1, Q.rank + 1)] for img in phi.images]
        H = hermite_normal_form(IntMatrix(rows, Q.rank))
        return H.rows == Q.rank and all(H[i, i] == 1 for i in range(Q.rank))
    raise TypeError(f"unsupported quotient {Q!r}")


def _is_abelian(Q) -> bool:
    if isinstance(Q, FiniteGroup):
        return Q.is_abelian()
    if isinstance(Q, AbelianGroup):
        return True
    return Q.cutoff <= 1


def _order(Q) -> int | None:
    if isinstance(Q, FiniteGroup):
        return Q.order
    if isinstance(Q, AbelianGroup):
        return Q.order
    return None


def _is_trivial_group(Q) -> bool:
    return _order(Q) == 1


# ---------------------------------------------------------------------------
# specs

@dataclass(frozen=True)
class FibreSpec:
    """Factors, a quotient and one epimorphism per factor.

    ``images[i]`` lists the images of factor ``i``'s letters in the
    quotient's own element format (table indices, integer vectors, or words
    over the nilpotent quotient's generators).  ``factor_relators`` records
    relators of non-free factors; they must map to the identity.
    """

    factors: tuple[Alphabet, ...]
    quotient: Any
    images: tuple[tuple, ...]
    untwisted: bool = False
    kernel_mode: bool = False
    quotient_finitely_presented: bool = True
    factors_free: tuple[bool, ...] | None = None
    factor_relators: tuple[tuple[Word, ...], ...] | None = None
    name: str = ""
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.factors)
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(
            self,
            "images",
            tuple(tuple(tuple(x) if isinstance(x, list) else x for x in im) for im in self.images),
        )
        if self.factors_free is None:
            object.__setattr__(self, "factors_free", (True,) * n)
        if self.factor_relators is None:
            object.__setattr__(self, "factor_relators", ((),) * n)
        if n < 2 or (n > 2 and not self.kernel_mode):
            raise ValueError("two factors, or two or more in kernel mode")
        if len(self.images) != n or len(self.factors_free) != n or len(self.factor_relators) != n:
            raise ValueError("one image list, freeness flag and relator list per factor")
        if self.kernel_mode and not _is_abelian(self.quotient):
            raise ValueError("kernel mode needs an abelian quotient")
        maps = tuple(FreeHom(A, im, self.quotient) for A, im in zip(self.factors, self.images))
        object.__setattr__(self, "maps", maps)
        for i, phi in enumerate(maps):
            if not _is_surjective(phi):
                raise NotSurjectiveError(f"map on factor {i + 1} is not onto the quotient")
            for r in self.factor_relators[i]:
                if apply_hom(phi, r) != self.quotient.identity():
                    raise ValueError(f"relator {r} of factor {i + 1} does not die in the quotient")
        if self.untwisted and (len(set(A.rank for A in self.factors)) != 1 or len(set(self.images)) != 1):
            raise ValueError("untwisted spec needs identical factors and maps")

    @property
    def arity(self) -> int:
        return len(self.factors)

    def to_json(self) -> dict:
        Q = self.quotient
        return {
            "name": self.name,
            "factors": [A.rank for A in self.factors],
            "factor_names": [list(A.names) if A.names else None for A in self.factors],
            "quotient": _quotient_to_json(Q),
            "maps": [[_image_to_json(Q, img) for img in self._raw_images(i)] for i in range(self.arity)],
            "untwisted": self.untwisted,
            "kernel_mode": self.kernel_mode,
            "quotient_finitely_presented": self.quotient_finitely_presented,
            "factors_free": list(self.factors_free),
            "factor_relators": [[str(r) for r in rels] for rels in self.factor_relators],
        }

    def _raw_images(self, i: int):
        # nilpotent images are serialized as the words given, not their expansions
        return self.images[i] if isinstance(self.quotient, MagnusAlgebra) else self.maps[i].images

    @classmethod
    def from_json(cls, data) -> "FibreSpec":
        if isinstance(data, str):
            data = json.loads(data)
        Q = _quotient_from_json(data["quotient"])
        names = data.get("factor_names") or [None] * len(data["factors"])
        factors = tuple(Alphabet(int(r), nm and tuple(nm)) for r, nm in zip(data["factors"], names))
        images = tuple(tuple(_image_from_json(Q, img) for img in im) for im in data["maps"])
        rels = data.get("factor_relators")
        relators = (
            tuple(tuple(parse_word(r, A) for r in rs) for A, rs in zip(factors, rels)) if rels else None
        )
        free = data.get("factors_free")
        return cls(
            factors,
            Q,
            images,
            untwisted=bool(data.get("untwisted", False)),
            kernel_mode=bool(data.get("kernel_mode", False)),
            quotient_finitely_presented=bool(data.get("quotient_finitely_presented", True)),
            factors_free=tuple(bool(f) for f in free) if free is not None else None,
            factor_relators=relators,
            name=data.get("name", ""),
        )


def member(spec: FibreSpec, e: Sequence[Word]) -> bool:
    if len(e) != spec.arity:
        raise ValueError(f"expected {spec.arity} components, got {len(e)}")
    Q = spec.quotient
    vals = [apply_hom(phi, w) for phi, w in zip(spec.maps, e)]
    if spec.kernel_mode:
        acc = Q.identity()
        for v in vals:
            acc = Q.multiply(acc, v)
        return acc == Q.identity()
    return vals[0] == vals[1]


# ---------------------------------------------------------------------------
# lifting and kernels

def _letters_word(A: Alphabet, vec: Sequence[int]) -> Word:
    return Word(A, [x if c > 0 else -x for x, c in zip(A.letters, vec) for _ in range(abs(c))])


def _lift(phi: FreeHom, value, max_len: int = 4) -> Word:
    """Some word of the source mapping to ``value``."""
    Q, A = phi.target, phi.source
    if isinstance(Q, AbelianGroup):
        rows = [list(img) for img in phi.images] + Q.relation_rows()
        sol = lattice_solve(rows, Q.element(value))
        if sol is None:
            raise NotSurjectiveError(f"{value} is not in the image")
        return _letters_word(A, sol[: A.rank])
    # breadth-first search; exhaustive for finite tables, bounded otherwise
    target = Q.check(value)
    seen = {Q.identity(): A.identity()}
    if target in seen:
        return seen[target]
    frontier = deque([A.identity()])
    labels = [s * x for x in A.letters for s in (1, -1)]
    while frontier:
        w = frontier.popleft()
        if len(w) >= max_len and not isinstance(Q, FiniteGroup):
            continue
        v = apply_hom(phi, w)
        for x in labels:
            u = Q.multiply(v, phi.image_of_letter(x))
            if u not in seen:
                seen[u] = w * A.word((x,))
                if u == target:
                    return seen[u]
                frontier.append(seen[u])
    raise NotSurjectiveError(f"no lift of {value} found")


def _abelian_kernel_normal_gens(phi: FreeHom) -> list[Word]:
    """Normal generators of ``ker phi`` for ``phi`` onto an abelian group.

    The kernel is ``<<[F, F], x^v : v in ker(Z^r -> Q)>>``.  Lattice basis
    vectors of the shape ``+-e_i`` or ``+-e_i +- e_j`` kill or identify
    letters; commutators are only needed among the surviving letter classes.
    """
    A, Q = phi.source, phi.target
    if not isinstance(Q, AbelianGroup):
        raise TypeError("expected an AbelianGroup target")
    _, basis = hom_kernel(AbelianHom(AbelianGroup(A.rank), Q, phi.images))
    parent = list(range(A.rank + 1))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    killed: set[int] = set()
    gens = []
    for v in basis:
        gens.append(_letters_word(A, v))
        support = [i + 1 for i, c in enumerate(v) if c]
        if all(abs(c) <= 1 for c in v):
            if len(support) == 1:
                killed.add(support[0])
            elif len(support) == 2:
                a, b = sorted(map(find, support))
                parent[b] = a
    dead = {find(i) for i in killed}
    reps = sorted({find(x) for x in A.letters} - dead)
    for i, j in itertools.combinations(reps, 2):
        gens.append(commutator(A.gen(i), A.gen(j)))
    return gens


def _magnus_kernel_normal_gens(phi: FreeHom) -> list[Word]:
    """Letters killed or identified, then weight ``c+1`` basic commutators of the survivors."""
    A, Q = phi.source, phi.target
    gens, reps, seen = [], [], {}
    for x in A.letters:
        img = phi.images[x - 1]
        g = A.gen(x)
        if img == Q.identity():
            gens.append(g)
        elif img in seen:
            gens.append(g * A.gen(seen[img]).inverse())
        else:
            seen[img] = x
            reps.append(g)
    gens += basic_commutators(reps, Q.cutoff + 1)
    return gens


def _place(w: Word, i: int, alphabets: Sequence[Alphabet]) -> SubdirectElement:
    return SubdirectElement(w if j == i else A.identity() for j, A in enumerate(alphabets))


@dataclass
class GeneratingData:
    alphabets: tuple[Alphabet, ...]
    lifts: list[SubdirectElement]
    kernel: list[list[Word]]
    exact: bool

    def tuples(self) -> list[SubdirectElement]:
        """Lifts plus each kernel word placed in its own coordinate, duplicates removed."""
        out = list(self.lifts)
        out += [_place(w, i, self.alphabets) for i, ws in enumerate(self.kernel) for w in ws]
        seen, uniq = set(), []
        for t in out:
            if t not in seen and not t.is_identity():
                seen.add(t)
                uniq.append(t)
        return uniq

    def to_json(self) -> dict:
        return {
            "lifts": [str(t) for t in self.lifts],
            "kernel": [[str(w) for w in ws] for ws in self.kernel],
            "exact": self.exact,
        }


def generators(spec: FibreSpec) -> GeneratingData:
    """Lifts of the first factor's letters plus kernel data for each factor.

    For a finite quotient the kernel data are free bases of ``ker p_i`` and
    the result generates ``G`` (``exact``).  Otherwise they are normal
    generators of ``ker p_i`` only.
    """
    if spec.kernel_mode:
        raise ValueError("use three_factor_kernel for kernel-mode specs")
    Q = spec.quotient
    A1, A2 = spec.factors
    p1, p2 = spec.maps
    if _is_trivial_group(Q):
        lifts = []
    elif spec.untwisted:
        lifts = [SubdirectElement((g, Word(A2, g.letters))) for g in A1.gens]
    else:
        lifts = [SubdirectElement((g, _lift(p2, apply_hom(p1, g)))) for g in A1.gens]
    if isinstance(Q, FiniteGroup):
        kernel = [free_basis(kernel_graph(p)) for p in spec.maps]
        exact = all(spec.factors_free)
    elif isinstance(Q, AbelianGroup) and Q.order is not None:
        T = FiniteGroup.abelian(Q.torsion)
        tables = [FreeHom(p.source, [T.element(img) for img in p.images], T) for p in spec.maps]
        kernel = [free_basis(kernel_graph(p)) for p in tables]
        exact = all(spec.factors_free)
    elif isinstance(Q, AbelianGroup):
        kernel = [_abelian_kernel_normal_gens(p) for p in spec.maps]
        exact = False
    else:
        kernel = [_magnus_kernel_normal_gens(p) for p in spec.maps]
        exact = False
    return GeneratingData(spec.factors, lifts, kernel, exact)


# ---------------------------------------------------------------------------
# classification

class Classification(str, Enum):
    FREE = "free"
    FINITE_PRESENTED = "finitely_presented"
    FG_NOT_FP = "finitely_generated_not_finitely_presented"
    NOT_FG = "not_finitely_generated"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ClassifyResult:
    kind: Classification
    index: int | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"class": self.kind.value, "reason": self.reason}
        if self.index is not None:
            out["index"] = self.index
        return out


def _kernel_trivial(phi: FreeHom) -> bool:
    """``ker phi`` is trivial for a free source: rank 0, or rank 1 with an infinite-order image."""
    r, Q = phi.source.rank, phi.target
    if r == 0:
        return True
    if r > 1 or isinstance(Q, FiniteGroup):
        # abelian and nilpotent targets never receive a nonabelian free group injectively;
        # finite targets never receive any infinite group injectively
        return False
    img = phi.images[0]
    if isinstance(Q, AbelianGroup):
        return any(img[: Q.rank])
    return img != Q.identity()  # free nilpotent groups are torsion-free


def classify_two_factor(spec: FibreSpec) -> ClassifyResult:
    """Decision tree for subgroups of a product of two free groups."""
    if spec.kernel_mode or spec.arity != 2:
        raise ValueError("classification applies to two-factor fibre products")
    if not all(spec.factors_free):
        return ClassifyResult(Classification.UNKNOWN, reason="a factor is not free")
    trivial = [_kernel_trivial(p) for p in spec.maps]
    if any(trivial):
        i = trivial.index(True) + 1
        return ClassifyResult(Classification.FREE, reason=f"L{i} is trivial")
    n = _order(spec.quotient)
    if n is not None:
        return ClassifyResult(
            Classification.FINITE_PRESENTED, index=n, reason="finite quotient: L1 x L2 has finite index"
        )
    if spec.quotient_finitely_presented:
        return ClassifyResult(
            Classification.FG_NOT_FP,
            reason="infinite finitely presented quotient, both Li nontrivial and finitely normally generated",
        )
    return ClassifyResult(Classification.NOT_FG, reason="quotient is not finitely presented")


def normality_test(spec: FibreSpec) -> bool:
    """``G`` is normal in the product iff the quotient is abelian."""
    return _is_abelian(spec.quotient)


# ---------------------------------------------------------------------------
# three or more factors

@dataclass
class ThreeFactorReport:
    spec: FibreSpec
    candidates: list[SubdirectElement]
    intersections_ok: bool
    pairs_surjective: bool
    abelian_span_ok: bool
    samples: int

    @property
    def passed(self) -> bool:
        return self.intersections_ok and self.pairs_surjective and self.abelian_span_ok

    def member(self, e: Sequence[Word]) -> bool:
        return member(self.spec, e)

    def to_json(self) -> dict:
        return {
            "candidates": [str(c) for c in self.candidates],
            "intersections_ok": self.intersections_ok,
            "pairs_surjective": self.pairs_surjective,
            "abelian_span_ok": self.abelian_span_ok,
            "samples": self.samples,
            "passed": self.passed,
        }


def _kernel_candidates(spec: FibreSpec) -> list[SubdirectElement]:
    Q, n = spec.quotient, spec.arity
    out: list[SubdirectElement] = []
    for i, phi in enumerate(spec.maps):
        for w in _abelian_kernel_normal_gens(phi):
            out.append(_place(w, i, spec.factors))
    if _is_trivial_group(Q):
        return out
    for i, phi in enumerate(spec.maps):
        j = (i + 1) % n
        for g in spec.factors[i].gens:
            partner = _lift(spec.maps[j], Q.inverse(apply_hom(phi, g)))
            t = [A.identity() for A in spec.factors]
            t[i], t[j] = g, partner
            out.append(SubdirectElement(t))
    return out


def _abelian_span_ok(spec: FibreSpec, gens: Sequence[SubdirectElement]) -> bool:
    """Exponent vectors of ``gens`` plus the commutator-free part span ``ker(Z^N -> Q)``."""
    Q = spec.quotient
    ranks = [A.rank for A in spec.factors]
    N = sum(ranks)
    images = [img for phi in spec.maps for img in phi.images]
    _, basis = hom_kernel(AbelianHom(AbelianGroup(N), Q, images))
    rows = [[c for w in g for c in exponent_vector(w)] for g in gens]
    if not rows:
        return not basis
    # every kernel vector must be an integer combination of the generator vectors
    if any(lattice_solve(rows, v) is None for v in basis):
        return False
    return all(not any(Q.element(_eval_vec(Q, images, r))) for r in rows)


def _eval_vec(Q: AbelianGroup, images, vec) -> list[int]:
    acc = [0] * Q.ngens
    for c, img in zip(vec, images):
        for k, x in enumerate(img):
            acc[k] += c * x
    return acc


def three_factor_kernel(
    factors: Sequence[Alphabet],
    Q: AbelianGroup,
    images: Sequence[Sequence],
    samples: int = 200,
    seed: int = 0,
) -> ThreeFactorReport:
    """``ker(phi_1 + phi_2 + phi_3)`` with candidate generators and sampled checks."""
    spec = FibreSpec(tuple(factors), Q, tuple(tuple(im) for im in images), kernel_mode=True)
    rng = random.Random(seed)
    n = spec.arity
    ident = Q.identity()
    inter = True
    for _ in range(samples):
        i = rng.randrange(n)
        w = random_word(spec.factors[i], rng.randint(0, 8), rng)
        if member(spec, _place(w, i, spec.factors)) != (apply_hom(spec.maps[i], w) == ident):
            inter = False
            break
    # projection to the factors other than k is onto iff phi_k is onto
    pairs = all(_is_surjective(phi) for phi in spec.maps)
    cands = _kernel_candidates(spec)
    span = _abelian_span_ok(spec, cands) and all(member(spec, c) for c in cands)
    return ThreeFactorReport(spec, cands, inter, pairs, span, samples)


def sb_family(n: int) -> tuple[FibreSpec, dict[str, SubdirectElement]]:
    """``SB_n``: kernel of the total exponent sum on ``n`` rank-2 free groups."""
    if n < 2:
        raise ValueError("n must be >= 2")
    factors = tuple(Alphabet(2, (f"a{i}", f"b{i}")) for i in range(1, n + 1))
    Q = AbelianGroup(1)
    spec = FibreSpec(factors, Q, tuple(((1,), (1,)) for _ in factors), kernel_mode=True, name=f"SB{n}")
    gens: dict[str, SubdirectElement] = {}

    def tup(entries: dict[int, Word]) -> SubdirectElement:
        return SubdirectElement(entries.get(k, A.identity()) for k, A in enumerate(factors))

    for i, A in enumerate(factors):
        a, b = A.gens
        gens[f"a{i + 1}B{i + 1}"] = tup({i: a * b.inverse()})
    for i, j in itertools.combinations(range(n), 2):
        gens[f"a{i + 1}A{j + 1}"] = tup({i: factors[i].gen(1), j: factors[j].gen(1).inverse()})
        gens[f"b{i + 1}B{j + 1}"] = tup({i: factors[i].gen(2), j: factors[j].gen(2).inverse()})
    return spec, gens


def sb_restriction_check(n: int, samples: int = 500, seed: int = 0) -> bool:
    """``SB_{n-1}`` is ``SB_n`` intersected with the first ``n-1`` factors, on samples."""
    if n < 3:
        raise ValueError("n must be >= 3")
    big, _ = sb_family(n)
    small, _ = sb_family(n - 1)
    rng = random.Random(seed)
    for k in range(samples):
        words = [random_word(A, rng.randint(0, 6), rng) for A in small.factors]
        if k % 2:
            # force a balanced tuple half the time
            s = sum(sum(exponent_vector(w)) for w in words)
            A = small.factors[0]
            words[0] = words[0] * (A.gen(1) ** (-s))
        t = SubdirectElement(words + [big.factors[-1].identity()])
        if member(big, t) != member(small, t[:-1]):
            return False
    return True


# ---------------------------------------------------------------------------
# fixtures

def _free_nilpotent_relators(A: Alphabet, letters: Sequence[int], c: int) -> tuple[Word, ...]:
    return tuple(basic_commutators([A.gen(i) for i in letters], c + 1))


def example_fixtures(nilpotent_class: int = 2) -> dict[str, FibreSpec]:
    """The five worked examples; a non-finitely-presented quotient is replaced by the
    free nilpotent quotient of class ``nilpotent_class`` plus a flag."""
    Z, Z2 = AbelianGroup(1), AbelianGroup(2)
    C = Alphabet(2, ("c1", "c2"))
    Dd = Alphabet(2, ("d1", "d2"))
    A2 = Alphabet(2, ("a1", "a2"))
    B2 = Alphabet(2, ("b1", "b2"))
    A3 = Alphabet(3, ("a1", "a2", "a3"))
    B3 = Alphabet(3, ("b1", "b2", "b3"))
    N = MagnusAlgebra(2, nilpotent_class)
    q = Alphabet(2)
    c1, c2 = q.gens
    out = {}
    out["example1"] = FibreSpec(
        (C, Dd), Z, (((1,), (0,)), ((1,), (0,))), untwisted=True, name="example1"
    )
    out["example2"] = FibreSpec(
        (A2, B2),
        Z2,
        (((1, 0), (0, 1)), ((1, 0), (0, 1))),
        factors_free=(True, False),
        factor_relators=((), _free_nilpotent_relators(B2, (1, 2), 2)),
        name="example2",
        metadata={"h1": {"rank": 3, "torsion": []}},
    )
    out["example3"] = FibreSpec(
        (A2, B2), N, ((c1, c2), (c1, c2)), untwisted=True, quotient_finitely_presented=False, name="example3"
    )
    e = q.identity()
    rel3 = _free_nilpotent_relators(A3, (1, 2), nilpotent_class)
    out["example4"] = FibreSpec(
        (A3, B3),
        N,
        ((c1, c2, e), (c1, c2, e)),
        untwisted=True,
        quotient_finitely_presented=False,
        factors_free=(False, False),
        factor_relators=(rel3, _free_nilpotent_relators(B3, (1, 2), nilpotent_class)),
        name="example4",
    )
    out["example5"] = FibreSpec(
        (A3, B2),
        N,
        ((c1, c2, e), (c1, c2)),
        quotient_finitely_presented=False,
        factors_free=(False, True),
        factor_relators=(rel3, ()),
        name="example5",
    )
    return out


# ---------------------------------------------------------------------------
# index measurement

def coset_index(
    gens: Sequence[SubdirectElement],
    in_subgroup: Callable[[SubdirectElement], bool],
    limit: int = 1000,
) -> int | None:
    """Number of right cosets ``H g`` of ``H`` in ``<gens>``, by closure under right multiplication.

    Two representatives ``g, h`` lie in the same coset iff ``g h^-1`` is in ``H``.
    Returns ``None`` if more than ``limit`` cosets appear.
    """
    if not gens:
        return 1
    ident = SubdirectElement(w.alphabet.identity() for w in gens[0])
    reps = [ident]
    steps = list(gens) + [g.inverse() for g in gens]
    i = 0
    while i < len(reps):
        for s in steps:
            cand = reps[i] * s
            if not any(in_subgroup(cand * r.inverse()) for r in reps):
                reps.append(cand)
                if len(reps) > limit:
                    return None
        i += 1
    return len(reps)

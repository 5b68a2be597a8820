"""Finite presentations, finite groups by multiplication table, Reidemeister-Schreier."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .intlin import AbelianGroup, AbelianHom, IntMatrix, cokernel, invariant_factors
from .stallings import CosetTable, schreier_transversal
from .words import Alphabet, FreeHom, Word, apply_hom, exponent_vector, parse_word

__all__ = [
    "FinPresentation",
    "FiniteGroup",
    "abelianize",
    "abelian_invariants",
    "eval_finite",
    "reidemeister_schreier",
    "direct_product_presentation",
    "catalogue",
]


@dataclass(frozen=True)
class FinPresentation:
    alphabet: Alphabet
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relators", tuple(self.relators))
        for r in self.relators:
            if r.alphabet.rank != self.alphabet.rank:
                raise ValueError("relator over a different alphabet")
            if not r:
                raise ValueError("relators must be nonempty")

    def relation_matrix(self) -> IntMatrix:
        return IntMatrix([exponent_vector(r) for r in self.relators], self.alphabet.rank)

    def to_text(self) -> str:
        names = [self.alphabet.letter_name(i) for i in self.alphabet.letters]
        return "\n".join([" ".join(names)] + [str(r) for r in self.relators]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FinPresentation":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise ValueError("empty presentation")
        names = tuple(lines[0].split())
        A = Alphabet(len(names), names)
        rels = [parse_word(ln, A) for ln in lines[1:]]
        return cls(A, tuple(r for r in rels if r))


class FiniteGroup:
    """A finite group given by its multiplication table on elements ``0..order-1``.

    ``labels`` optionally name the elements (tuples for abelian groups,
    permutations for permutation groups).
    """

    def __init__(self, table: Sequence[Sequence[int]], labels=None, name: str = "", verify: bool = True):
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        n = len(self.table)
        if n == 0:
            raise ValueError("empty group")
        if verify:
            full = set(range(n))
            for row in self.table:
                if len(row) != n or set(row) != full:
                    raise ValueError("multiplication table is not a Latin square")
            for col in zip(*self.table):
                if set(col) != full:
                    raise ValueError("multiplication table is not a Latin square")
        ids = [e for e in range(n) if self.table[e] == tuple(range(n))]
        if len(ids) != 1:
            raise ValueError("no two-sided identity")
        self.e = ids[0]
        if verify:
            t = self.table
            for a in range(n):
                for b in range(n):
                    ab = t[a][b]
                    for c in range(n):
                        if t[ab][c] != t[a][t[b][c]]:
                            raise ValueError("multiplication table is not associative")
        self.inv = tuple(self.table[a].index(self.e) for a in range(n))
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.name = name or f"G{n}"

    # -- constructors -------------------------------------------------------

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([[0]], [()], "1", verify=False)

    @classmethod
    def abelian(cls, orders: Sequence[int], name: str = "") -> "FiniteGroup":
        """``Z/n1 x Z/n2 x ...`` with elements labelled by residue tuples."""
        elems = list(itertools.product(*(range(n) for n in orders)))
        index = {v: i for i, v in enumerate(elems)}
        table = [
            [index[tuple((x + y) % n for x, y, n in zip(a, b, orders))] for b in elems]
            for a in elems
        ]
        name = name or "x".join(f"Z{n}" for n in orders) or "1"
        return cls(table, elems, name, verify=False)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls.abelian([n])

    @classmethod
    def from_permutations(cls, gens: Sequence[Sequence[int]], name: str = "") -> "FiniteGroup":
        """Closure of permutations of ``0..d-1``; ``a*b`` applies ``a`` first."""
        gens = [tuple(g) for g in gens]
        d = len(gens[0]) if gens else 0
        ident = tuple(range(d))
        elems = [ident]
        seen = {ident}
        i = 0
        while i < len(elems):
            for g in gens:
                p = tuple(g[x] for x in elems[i])
                if p not in seen:
                    seen.add(p)
                    elems.append(p)
            i += 1
        index = {p: k for k, p in enumerate(elems)}
        table = [[index[tuple(b[x] for x in a)] for b in elems] for a in elems]
        return cls(table, elems, name or f"Perm{len(elems)}", verify=False)

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        if n < 2:
            return cls.trivial()
        swap = (1, 0) + tuple(range(2, n))
        cycle = tuple(range(1, n)) + (0,)
        return cls.from_permutations([swap, cycle], f"S{n}")

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        """Symmetries of the ``n``-gon, order ``2n``."""
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        return cls.from_permutations([rot, ref], f"D{n}")

    @classmethod
    def direct_product(cls, G: "FiniteGroup", H: "FiniteGroup") -> "FiniteGroup":
        pairs = [(a, b) for a in range(G.order) for b in range(H.order)]
        index = {p: i for i, p in enumerate(pairs)}
        table = [
            [index[(G.table[a][c], H.table[b][d])] for c, d in pairs] for a, b in pairs
        ]
        labels = [(G.labels[a], H.labels[b]) for a, b in pairs]
        return cls(table, labels, f"{G.name}x{H.name}", verify=False)

    # -- queries --------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.table)

    def element(self, label) -> int:
        return self._index[label]

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def closure(self, elems: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``elems``."""
        gens = set(elems)
        out = {self.e}
        frontier = [self.e]
        while frontier:
            a = frontier.pop()
            for g in gens:
                b = self.table[a][g]
                if b not in out:
                    out.add(b)
                    frontier.append(b)
        return frozenset(out)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv[a], -k
        acc = self.e
        for _ in range(k):
            acc = self.table[acc][a]
        return acc

    # group-target protocol
    def identity(self) -> int:
        return self.e

    def multiply(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def check(self, a) -> int:
        if isinstance(a, (list, tuple)):
            return self.element(tuple(a))
        if not 0 <= int(a) < self.order:
            raise ValueError(f"element {a} outside group of order {self.order}")
        return int(a)

    def to_json(self) -> dict:
        return {"finite": [list(row) for row in self.table]}

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def _abelian_chains(n: int, smallest: int = 2) -> list[list[int]]:
    """Invariant-factor lists ``d1 | d2 | ... | dk`` with product ``n``."""
    if n == 1:
        return [[]]
    out = []
    for d in range(smallest, n + 1):
        if n % d == 0:
            for rest in _abelian_chains(n // d, d):
                if not rest or rest[0] % d == 0:
                    out.append([d] + rest)
    return out


def catalogue(max_order: int = 16) -> list[FiniteGroup]:
    """Abelian groups of order <= 16 and symmetric/dihedral groups of order <= 12, by order."""
    groups = []
    for n in range(2, min(max_order, 16) + 1):
        for chain in _abelian_chains(n):
            groups.append(FiniteGroup.abelian(chain))
        if n == 6 and n <= max_order:
            groups.append(FiniteGroup.symmetric(3))
        if n in (8, 10, 12) and n <= max_order:
            groups.append(FiniteGroup.dihedral(n // 2))
    return groups


def eval_finite(phi: FreeHom, w: Word) -> int:
    """Image of ``w`` in a finite target, by table lookup."""
    return apply_hom(phi, w)


def abelian_invariants(P: FinPresentation) -> AbelianGroup:
    """Abelianization of ``P`` without the projection (cheaper on large presentations)."""
    M = P.relation_matrix()
    factors = invariant_factors(M)
    return AbelianGroup.from_orders(factors + [0] * (M.cols - len(factors)))


def abelianize(P: FinPresentation) -> tuple[AbelianGroup, AbelianHom]:
    """Abelianization of ``P`` and the projection from ``Z^rank``."""
    return cokernel(P.relation_matrix())


def direct_product_presentation(*factors: FinPresentation) -> FinPresentation:
    """Disjoint union of generators and relators plus all cross-factor commutators."""
    names, offsets, total = [], [], 0
    for P in factors:
        offsets.append(total)
        total += P.alphabet.rank
        names += [P.alphabet.letter_name(i) for i in P.alphabet.letters]
    if len(set(names)) != len(names):
        names = [f"x{i}" for i in range(1, total + 1)]
    A = Alphabet(total, tuple(names))

    def shift(w: Word, k: int) -> Word:
        return Word(A, [x + k if x > 0 else x - k for x in w.letters])

    rels = [shift(r, off) for P, off in zip(factors, offsets) for r in P.relators]
    for i, j in itertools.combinations(range(len(factors)), 2):
        for x in factors[i].alphabet.letters:
            for y in factors[j].alphabet.letters:
                a, b = x + offsets[i], y + offsets[j]
                rels.append(Word(A, [-a, -b, a, b]))
    return FinPresentation(A, tuple(rels))


def reidemeister_schreier(
    D: FinPresentation,
    table: CosetTable,
    transversal: tuple[list[Word], set[tuple[int, int]]] | None = None,
) -> FinPresentation:
    """Presentation of the finite-index subgroup with coset table ``table``.

    Generators are the Schreier generators ``t_c x t_{c.x}^-1`` off the
    spanning tree; relators are the rewrites of ``t_c r t_c^-1`` for every
    coset ``c`` and relator ``r``.  No Tietze reduction beyond dropping tree
    generators and empty rewrites.
    """
    if table.rank != D.alphabet.rank:
        raise ValueError("coset table and presentation use different alphabets")
    A = D.alphabet
    _, tree = transversal if transversal is not None else schreier_transversal(table, A)
    gen_index: dict[tuple[int, int], int] = {}
    for c in range(table.index):
        for x in A.letters:
            if (c, x) not in tree:
                gen_index[(c, x)] = len(gen_index) + 1
    B = Alphabet(len(gen_index))

    def rewrite(c: int, w: Word) -> Word:
        out = []
        for x in w.letters:
            if x > 0:
                g = gen_index.get((c, x))
                if g:
                    out.append(g)
                c = table.act(c, x)
            else:
                c = table.act(c, x)
                g = gen_index.get((c, -x))
                if g:
                    out.append(-g)
        if c != start:
            raise ValueError("relator does not act trivially on the cosets")
        return Word(B, out)

    rels = []
    for start in range(table.index):
        for r in D.relators:
            w = rewrite(start, r)
            if w:
                rels.append(w)
    return FinPresentation(B, tuple(rels))

"""Stallings subgroup graphs for finitely generated subgroups of free groups.

A :class:`SubgroupGraph` is folded, trimmed to its core around the basepoint
and numbered canonically (breadth-first from the basepoint, letters in the
order ``1, -1, 2, -2, ...``), so two graphs describe the same subgroup
exactly when they compare equal.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .words import Alphabet, FreeHom, Word

__all__ = [
    "SubgroupGraph",
    "CosetTable",
    "NotSurjectiveError",
    "fold_from_generators",
    "member",
    "index_and_cosets",
    "free_basis",
    "is_normal",
    "kernel_graph",
    "preimage_graph",
    "schreier_transversal",
]


class NotSurjectiveError(ValueError):
    """A homomorphism expected to be onto misses part of its target."""


@dataclass(frozen=True)
class CosetTable:
    """Right action of the letters on the cosets ``0..index-1`` (coset 0 is the subgroup).

    ``action[c][x - 1]`` is the coset ``c . x`` for a positive letter ``x``.
    """

    rank: int
    action: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "action", tuple(tuple(row) for row in self.action))
        n = len(self.action)
        inv = [[0] * self.rank for _ in range(n)]
        for x in range(self.rank):
            seen = set()
            for c, row in enumerate(self.action):
                if len(row) != self.rank:
                    raise ValueError("coset table row has the wrong width")
                d = row[x]
                if not 0 <= d < n or d in seen:
                    raise ValueError(f"letter {x + 1} does not act as a permutation")
                seen.add(d)
                inv[d][x] = c
        object.__setattr__(self, "_inv", tuple(tuple(r) for r in inv))

    @property
    def index(self) -> int:
        return len(self.action)

    def act(self, c: int, x: int) -> int:
        return self.action[c][x - 1] if x > 0 else self._inv[c][-x - 1]

    def act_word(self, c: int, w: Word) -> int:
        for x in w.letters:
            c = self.act(c, x)
        return c


def schreier_transversal(
    table: CosetTable, alphabet: Alphabet, order: str = "bfs"
) -> tuple[list[Word], set[tuple[int, int]]]:
    """Coset representatives along a spanning tree, and the tree edges.

    Tree edges are recorded as ``(c, x)`` with ``x > 0`` meaning the edge
    ``c --x--> c.x``.  ``order`` is ``"bfs"`` or ``"dfs"``; the two give
    different trees, which is useful for checking tree independence.
    """
    reps: list[Word | None] = [None] * table.index
    reps[0] = alphabet.identity()
    tree: set[tuple[int, int]] = set()
    labels = [s * x for x in alphabet.letters for s in (1, -1)]
    frontier = deque([0])
    while frontier:
        c = frontier.popleft() if order == "bfs" else frontier.pop()
        for x in labels:
            d = table.act(c, x)
            if reps[d] is None:
                reps[d] = reps[c] * alphabet.gen(abs(x)) ** (1 if x > 0 else -1)
                tree.add((c, x) if x > 0 else (d, -x))
                frontier.append(d)
    if any(r is None for r in reps):
        raise ValueError("coset table is not transitive")
    return reps, tree  # type: ignore[return-value]


class SubgroupGraph:
    """Folded core graph of a subgroup; vertex 0 is the basepoint.

    ``edges[v]`` maps signed letters to target vertices; ``x`` and ``-x`` are
    both stored so paths can be traced in either direction.
    """

    __slots__ = ("alphabet", "edges")

    def __init__(self, alphabet: Alphabet, edges: Sequence[dict[int, int]]):
        self.alphabet = alphabet
        self.edges = tuple(dict(e) for e in edges)

    @classmethod
    def _canonical(cls, alphabet: Alphabet, out: dict[int, dict[int, int]], base) -> "SubgroupGraph":
        labels = [s * x for x in alphabet.letters for s in (1, -1)]
        number = {base: 0}
        queue = deque([base])
        while queue:
            v = queue.popleft()
            for x in labels:
                w = out[v].get(x)
                if w is not None and w not in number:
                    number[w] = len(number)
                    queue.append(w)
        edges = [dict() for _ in number]
        for v, i in number.items():
            edges[i] = {x: number[w] for x, w in out[v].items()}
        return cls(alphabet, edges)

    @classmethod
    def from_coset_table(cls, table: CosetTable, alphabet: Alphabet) -> "SubgroupGraph":
        out = {
            c: {s * x: table.act(c, s * x) for x in alphabet.letters for s in (1, -1)}
            for c in range(table.index)
        }
        return cls._canonical(alphabet, out, 0)

    @property
    def num_vertices(self) -> int:
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return sum(1 for e in self.edges for x in e if x > 0)

    @property
    def rank(self) -> int:
        """Rank of the subgroup, ``E - V + 1``."""
        return self.num_edges - self.num_vertices + 1

    def is_complete(self) -> bool:
        return all(len(e) == 2 * self.alphabet.rank for e in self.edges)

    def trace(self, w: Word, start: int = 0) -> int | None:
        v = start
        for x in w.letters:
            v = self.edges[v].get(x)
            if v is None:
                return None
        return v

    def __contains__(self, w: Word) -> bool:
        return member(self, w)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupGraph)
            and self.alphabet.rank == other.alphabet.rank
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.alphabet.rank, tuple(tuple(sorted(e.items())) for e in self.edges)))

    def __repr__(self) -> str:
        return f"SubgroupGraph(vertices={self.num_vertices}, edges={self.num_edges})"

    def to_json(self) -> dict:
        return {
            "rank": self.alphabet.rank,
            "vertices": self.num_vertices,
            "edges": [
                [v, self.alphabet.letter_name(x), w]
                for v, e in enumerate(self.edges)
                for x, w in sorted(e.items())
                if x > 0
            ],
        }


class _Folder:
    """Union-find folding of a labelled graph into a deterministic one."""

    def __init__(self):
        self.parent: list[int] = []
        self.out: list[dict[int, int]] = []

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def add_edge(self, u: int, x: int, v: int):
        u, v = self.find(u), self.find(v)
        if x in self.out[u]:
            self.merge(self.out[u][x], v)
        elif -x in self.out[v]:
            self.merge(self.out[v][-x], u)
        else:
            self.out[u][x] = v
            self.out[v][-x] = u

    def merge(self, a: int, b: int):
        stack = [(a, b)]
        while stack:
            a, b = map(self.find, stack.pop())
            if a == b:
                continue
            if a > b:
                a, b = b, a  # lower id survives, keeps numbering deterministic
            self.parent[b] = a
            absorbed, self.out[b] = self.out[b], {}
            for x, w in absorbed.items():
                if x in self.out[a]:
                    stack.append((self.out[a][x], w))
                else:
                    self.out[a][x] = w

    def core(self, base: int) -> dict[int, dict[int, int]]:
        base = self.find(base)
        out = {
            v: {x: self.find(w) for x, w in self.out[v].items()}
            for v in range(len(self.parent))
            if self.find(v) == v
        }
        leaves = [v for v, e in out.items() if v != base and len(e) <= 1]
        while leaves:
            v = leaves.pop()
            if v not in out:
                continue
            for x, w in out.pop(v).items():
                if w in out and w != v:
                    out[w].pop(-x, None)
                    if w != base and len(out[w]) <= 1:
                        leaves.append(w)
        return out


def fold_from_generators(gens: Iterable[Word], alphabet: Alphabet | None = None) -> SubgroupGraph:
    """Folded core graph of the subgroup generated by ``gens``."""
    gens = list(gens)
    if alphabet is None:
        if not gens:
            raise ValueError("alphabet required for an empty generating set")
        alphabet = gens[0].alphabet
    f = _Folder()
    base = f.new_vertex()
    for w in gens:
        if w.alphabet.rank != alphabet.rank:
            raise ValueError("generators over different alphabets")
        if not w:
            continue
        prev = base
        for i, x in enumerate(w.letters):
            nxt = base if i == len(w) - 1 else f.new_vertex()
            f.add_edge(prev, x, nxt)
            prev = nxt
    return SubgroupGraph._canonical(alphabet, f.core(base), f.find(base))


def member(g: SubgroupGraph, w: Word) -> bool:
    """Whether ``w`` labels a loop at the basepoint."""
    if w.alphabet.rank != g.alphabet.rank:
        raise ValueError("word and subgroup graph use different alphabets")
    return g.trace(w) == 0


def index_and_cosets(g: SubgroupGraph) -> CosetTable | None:
    """The coset table when the subgroup has finite index, else ``None`` (infinite index)."""
    if not g.is_complete():
        return None
    return CosetTable(g.alphabet.rank, [[e[x] for x in g.alphabet.letters] for e in g.edges])


def free_basis(g: SubgroupGraph) -> list[Word]:
    """Free basis read off the edges outside a breadth-first spanning tree."""
    A = g.alphabet
    paths: dict[int, Word] = {0: A.identity()}
    tree: set[tuple[int, int]] = set()
    queue = deque([0])
    labels = [s * x for x in A.letters for s in (1, -1)]
    while queue:
        v = queue.popleft()
        for x in labels:
            w = g.edges[v].get(x)
            if w is not None and w not in paths:
                paths[w] = paths[v] * A.word((x,))
                tree.add((v, x) if x > 0 else (w, -x))
                queue.append(w)
    basis = []
    for v, e in enumerate(g.edges):
        for x, w in sorted(e.items()):
            if x > 0 and (v, x) not in tree:
                basis.append(paths[v] * A.gen(x) * paths[w].inverse())
    return basis


def is_normal(g: SubgroupGraph) -> bool:
    """Normality test.

    Finitely generated normal subgroups of a free group are trivial or of
    finite index, so an incomplete graph with edges is never normal.
    """
    if g.num_edges == 0:
        return True
    if not g.is_complete():
        return False
    A = g.alphabet
    for b in free_basis(g):
        for x in A.gens:
            if not member(g, b.conjugate(x)) or not member(g, b.conjugate(x.inverse())):
                return False
    return True


def preimage_graph(phi: FreeHom, subgroup: Iterable[int] = ()) -> SubgroupGraph:
    """Graph of ``phi^-1(A)`` for a subgroup ``A`` of a finite target (default: trivial).

    Vertices are the right cosets ``A q``; ``phi`` must be onto.
    """
    Q = phi.target
    A = phi.source
    sub = set(subgroup) | {Q.identity()}
    closed = Q.closure(sub)
    coset_of: dict[int, int] = {}
    reps: list[int] = []

    def coset(q: int) -> int:
        if q not in coset_of:
            k = len(reps)
            reps.append(q)
            for a in closed:
                coset_of[Q.multiply(a, q)] = k
        return coset_of[q]

    coset(Q.identity())
    out: dict[int, dict[int, int]] = {}
    queue = deque([0])
    seen = {0}
    while queue:
        c = queue.popleft()
        out.setdefault(c, {})
        for x in A.letters:
            d = coset(Q.multiply(reps[c], phi.image_of_letter(x)))
            out[c][x] = d
            out.setdefault(d, {})[-x] = c
            if d not in seen:
                seen.add(d)
                queue.append(d)
    reached = {Q.multiply(a, reps[c]) for c in seen for a in closed}
    if len(reached) != Q.order:
        raise NotSurjectiveError(
            f"homomorphism reaches {len(reached)} of {Q.order} elements"
        )
    return SubgroupGraph._canonical(A, out, 0)


def kernel_graph(phi: FreeHom) -> SubgroupGraph:
    """Graph of ``ker phi`` for ``phi`` onto a finite group; vertices are the group elements."""
    return preimage_graph(phi, ())


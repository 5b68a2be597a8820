"""Magnus embedding into truncated power series and lower central series tests.

A free group embeds in the units of ``Z<<X_1, ..., X_r>>`` via
``x -> 1 + X``.  By the classical dimension-subgroup theorem for free groups,
``w`` lies in the c-th term of the lower central series exactly when its
image is ``1`` modulo terms of degree ``>= c``.  Everything here relies on
that fact; it is not re-verified beyond the filtration property tests.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .words import FreeHom, Word, apply_hom, commutator

__all__ = [
    "MagnusSeries",
    "MagnusAlgebra",
    "magnus_expand",
    "in_gamma",
    "nilpotent_equal",
    "basic_commutators",
    "left_normed",
    "ThmBReport",
    "thmB_containment_check",
    "MAX_CUTOFF",
    "MAX_RANK",
]

MAX_CUTOFF = 6
MAX_RANK = 4


def _check_limits(rank: int, cutoff: int, limit: bool):
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if limit and (cutoff > MAX_CUTOFF or rank > MAX_RANK):
        raise ValueError(
            f"cutoff {cutoff} / rank {rank} exceeds the default limits "
            f"({MAX_CUTOFF}, {MAX_RANK}); pass limit=False to override"
        )


class MagnusSeries:
    """Truncated noncommutative series; monomials are tuples of letter indices.

    Zero coefficients are never stored, so equality is dict equality.
    """

    __slots__ = ("rank", "cutoff", "coeffs")

    def __init__(self, rank: int, cutoff: int, coeffs: dict[tuple[int, ...], int] | None = None):
        self.rank = rank
        self.cutoff = cutoff
        self.coeffs = {m: c for m, c in (coeffs or {}).items() if c and len(m) <= cutoff}

    @classmethod
    def one(cls, rank: int, cutoff: int) -> "MagnusSeries":
        return cls(rank, cutoff, {(): 1})

    def _same(self, other: "MagnusSeries"):
        if (self.rank, self.cutoff) != (other.rank, other.cutoff):
            raise ValueError("series with different rank or cutoff")

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        self._same(other)
        c = self.cutoff
        out: dict[tuple[int, ...], int] = {}
        for m1, a in self.coeffs.items():
            room = c - len(m1)
            for m2, b in other.coeffs.items():
                if len(m2) <= room:
                    m = m1 + m2
                    out[m] = out.get(m, 0) + a * b
        return MagnusSeries(self.rank, c, out)

    def __add__(self, other: "MagnusSeries") -> "MagnusSeries":
        self._same(other)
        out = dict(self.coeffs)
        for m, b in other.coeffs.items():
            out[m] = out.get(m, 0) + b
        return MagnusSeries(self.rank, self.cutoff, out)

    def __neg__(self) -> "MagnusSeries":
        return MagnusSeries(self.rank, self.cutoff, {m: -a for m, a in self.coeffs.items()})

    def __sub__(self, other: "MagnusSeries") -> "MagnusSeries":
        return self + (-other)

    def _times_letter(self, x: int) -> "MagnusSeries":
        """Right multiplication by the image of the signed letter ``x``."""
        i, c = abs(x), self.cutoff
        out = dict(self.coeffs)
        if x > 0:
            for m, a in self.coeffs.items():
                if len(m) < c:
                    key = m + (i,)
                    out[key] = out.get(key, 0) + a
        else:
            # (1 + X)^-1 = sum_k (-X)^k
            for m, a in self.coeffs.items():
                sign = -1
                for k in range(1, c - len(m) + 1):
                    key = m + (i,) * k
                    out[key] = out.get(key, 0) + sign * a
                    sign = -sign
        return MagnusSeries(self.rank, c, out)

    def degree_part(self, d: int) -> dict[tuple[int, ...], int]:
        return {m: a for m, a in self.coeffs.items() if len(m) == d}

    def lowest_degree(self) -> int | None:
        """Smallest positive degree with a nonzero coefficient (``None`` if the series is 1)."""
        degs = [len(m) for m in self.coeffs if m]
        return min(degs) if degs else None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MagnusSeries)
            and (self.rank, self.cutoff) == (other.rank, other.cutoff)
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.rank, self.cutoff, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"MagnusSeries({self})"

    def __str__(self) -> str:
        letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
        terms = []
        for m in sorted(self.coeffs, key=lambda m: (len(m), m)):
            a = self.coeffs[m]
            mono = "".join(letters[i - 1] if self.rank <= 26 else f"X{i}" for i in m)
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


@dataclass(frozen=True)
class MagnusAlgebra:
    """Group-target wrapper: the free nilpotent quotient ``F_rank / gamma_{cutoff+1}``."""

    rank: int
    cutoff: int
    limit: bool = field(default=True, compare=False)

    def __post_init__(self):
        _check_limits(self.rank, self.cutoff, self.limit)

    def identity(self) -> MagnusSeries:
        return MagnusSeries.one(self.rank, self.cutoff)

    def multiply(self, a: MagnusSeries, b: MagnusSeries) -> MagnusSeries:
        return a * b

    def inverse(self, a: MagnusSeries) -> MagnusSeries:
        # a = 1 + N with N nilpotent below the cutoff: a^-1 = sum (-N)^k
        neg = self.identity() - a
        out = power = self.identity()
        for _ in range(self.cutoff):
            power = power * neg
            out = out + power
        return out

    def check(self, a) -> MagnusSeries:
        if isinstance(a, Word):
            return magnus_expand(a, self.cutoff, limit=self.limit)
        if not isinstance(a, MagnusSeries) or (a.rank, a.cutoff) != (self.rank, self.cutoff):
            raise TypeError("expected a series of matching rank and cutoff")
        if a.coeffs.get((), 0) != 1:
            raise ValueError("group elements have constant term 1")
        return a

    def to_json(self) -> dict:
        return {"nilpotent": {"rank": self.rank, "class": self.cutoff}}


def magnus_expand(w: Word, cutoff: int, limit: bool = True) -> MagnusSeries:
    """Image of ``w`` truncated above degree ``cutoff``."""
    rank = w.alphabet.rank
    _check_limits(rank, cutoff, limit)
    s = MagnusSeries.one(rank, cutoff)
    for x in w.letters:
        s = s._times_letter(x)
    return s


def in_gamma(w: Word, c: int, limit: bool = True) -> bool:
    """Whether ``w`` lies in ``gamma_c`` of the free group (``gamma_1`` is everything)."""
    if c <= 1:
        return True
    low = magnus_expand(w, c - 1, limit=limit).lowest_degree()
    return low is None


def nilpotent_equal(u: Word, v: Word, c: int, limit: bool = True) -> bool:
    """Equality in ``F / gamma_{c+1}``."""
    if u.alphabet.rank != v.alphabet.rank:
        raise ValueError("words over different alphabets")
    return magnus_expand(u, c, limit=limit) == magnus_expand(v, c, limit=limit)


# ---------------------------------------------------------------------------
# commutators

def _bracket_word(tree, gens: Sequence[Word]) -> Word:
    if isinstance(tree, int):
        return gens[tree]
    return commutator(_bracket_word(tree[0], gens), _bracket_word(tree[1], gens))


def basic_commutators(gens: Sequence[Word], weight: int, limit: int | None = None) -> list[Word]:
    """Hall basic commutators of exactly ``weight`` in ``gens``, in the standard order.

    ``[u, v]`` is basic when ``u, v`` are basic, ``u > v``, and, if ``u = [s, t]``,
    also ``t <= v``.  Generation stops after ``limit`` results.
    """
    if weight < 1:
        raise ValueError("weight must be >= 1")
    # each entry: (tree, weight); list index is the ordering
    basic: list[tuple[object, int]] = [(i, 1) for i in range(len(gens))]
    pos = {i: i for i in range(len(gens))}
    for w in range(2, weight + 1):
        new = []
        for iu, (u, wu) in enumerate(basic):
            for iv, (v, wv) in enumerate(basic):
                if wu + wv != w or iu <= iv:
                    continue
                if not isinstance(u, int) and pos[u[1]] > iv:
                    continue
                new.append(((u, v), w))
        for t, wt in new:
            pos[t] = len(basic)
            basic.append((t, wt))
    out = [_bracket_word(t, gens) for t, wt in basic if wt == weight]
    return out[:limit] if limit is not None else out


def left_normed(elems: Sequence[Word]) -> Word:
    """``[[...[g1, g2], g3], ..., gk]``."""
    acc = elems[0]
    for g in elems[1:]:
        acc = commutator(acc, g)
    return acc


@dataclass
class ThmBReport:
    weight: int
    checked: int
    failures: list[Word]
    basis_size: int
    kernel_equals_K: bool | None = None

    @property
    def passed(self) -> bool:
        return not self.failures and self.kernel_equals_K is not False

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "checked": self.checked,
            "failures": [str(w) for w in self.failures],
            "basis_size": self.basis_size,
            "kernel_equals_K": self.kernel_equals_K,
            "passed": self.passed,
        }


def thmB_containment_check(
    K,
    quotient_map: FreeHom,
    n: int,
    samples: int = 100,
    seed: int = 0,
) -> ThmBReport:
    """Check that weight ``n-1`` commutators of ``K`` die under ``quotient_map``.

    ``K`` is a finite-index :class:`~subdirect.stallings.SubgroupGraph`, and
    the kernel ``L`` of ``quotient_map`` is expected inside ``K`` with
    ``gamma_{n-1}(K) <= L``.  Basic commutators in a free basis of ``K``
    come first; random left-normed commutators of short products of basis
    elements top the count up to ``samples``.  For ``n = 2`` the statement
    is ``K = L``; when the quotient is a finite table that is also checked
    by comparing graphs.
    """
    from .presentations import FiniteGroup
    from .stallings import free_basis, kernel_graph

    if n < 2:
        raise ValueError("n must be >= 2")
    weight = n - 1
    basis = free_basis(K)
    tgt = quotient_map.target
    ident = tgt.identity()
    words = basic_commutators(basis, weight, limit=samples) if basis else []
    rng = random.Random(seed)
    if basis:
        while len(words) < samples:
            elems = []
            for _ in range(weight):
                k = rng.randint(1, 3)
                g = K.alphabet.identity()
                for _ in range(k):
                    g = g * rng.choice(basis) ** rng.choice((1, -1))
                elems.append(g)
            words.append(left_normed(elems))
    failures = [w for w in words if apply_hom(quotient_map, w) != ident]
    equal = None
    if n == 2 and isinstance(tgt, FiniteGroup):
        equal = kernel_graph(quotient_map) == K
    return ThmBReport(weight, len(words), failures, len(basis), equal)

"""Baumslag-Solitar groups ``BS(m, n) = <b, t | t^-1 b^m t = b^n>``.

Words are kept as ``b^k0 t^e1 b^k1 ... t^er b^kr`` with ``e_i = +-1``.
Britton reduction removes pinches ``t^-1 b^(jm) t -> b^(jn)`` and
``t b^(jn) t^-1 -> b^(jm)``; a pinch-free word is trivial iff it is empty.
Pinch-free forms are not unique, so :func:`britton_reduce` finishes by
pushing ``b``-powers rightwards across each ``t`` to reach the canonical
normal form (coset representatives ``0 <= k < |m|`` before ``t`` and
``0 <= k < |n|`` before ``t^-1``).

The kernel ``L`` of the ``t``-exponent map is the union of the windows
``K_{lo,hi} = <b_lo, ..., b_hi>`` with ``b_i = t^-i b t^i`` and relations
``b_i^n = b_{i+1}^m``.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .intlin import AbelianGroup, cokernel
from .presentations import FinPresentation, abelianize
from .words import Alphabet

__all__ = [
    "BSGroup",
    "BSWord",
    "parse_bs",
    "britton_reduce",
    "q_exponent",
    "k_presentation",
    "window_coordinates",
    "h1_transition",
    "h1_L_element_check",
    "BSFibre",
    "bs_fibre",
]


@dataclass(frozen=True)
class BSGroup:
    m: int
    n: int

    def __post_init__(self):
        if self.m == 0 or self.n == 0:
            raise ValueError("m and n must be nonzero")

    @property
    def regime(self) -> str:
        if abs(self.m) == 1 or abs(self.n) == 1:
            return "ascending"
        if abs(self.m) == abs(self.n):
            return "unimodular"
        return "non_ascending"

    def presentation(self) -> FinPresentation:
        A = Alphabet(2, ("b", "t"))
        b, t = A.gens
        return FinPresentation(A, (t.inverse() * b ** self.m * t * b ** (-self.n),))

    def h1(self) -> AbelianGroup:
        return abelianize(self.presentation())[0]


_TOKEN = re.compile(r"([tTbB])(-?\d*)|(\S)")


def parse_bs(text: str) -> list[tuple[str, int]]:
    """Raw syllables from ASCII: ``t``/``T`` are ``t^+-1``, ``b3`` is ``b^3``, ``B2`` is ``b^-2``."""
    out: list[tuple[str, int]] = []
    for mt in _TOKEN.finditer(text):
        if mt.group(3) is not None:
            if mt.group(3) in "1ε":
                continue
            raise ValueError(f"unexpected character {mt.group(3)!r} in {text!r}")
        letter, digits = mt.group(1), mt.group(2)
        k = int(digits) if digits else 1
        sign = 1 if letter.islower() else -1
        if letter in "tT":
            out += [("t", sign)] * abs(k) if k >= 0 else [("t", -sign)] * abs(k)
        else:
            out.append(("b", sign * k))
    return out


class BSWord:
    """``b^ks[0] t^ts[0] b^ks[1] ... t^ts[-1] b^ks[-1]``; ``len(ks) == len(ts) + 1``."""

    __slots__ = ("group", "ks", "ts")

    def __init__(self, group: BSGroup, ks: Sequence[int], ts: Sequence[int]):
        if len(ks) != len(ts) + 1 or any(e not in (1, -1) for e in ts):
            raise ValueError("malformed syllable data")
        self.group = group
        self.ks = tuple(ks)
        self.ts = tuple(ts)

    @classmethod
    def from_raw(cls, group: BSGroup, raw: Iterable[tuple[str, int]] | str) -> "BSWord":
        """Merge adjacent powers of ``b`` and cancel ``t t^-1`` pairs; no pinching."""
        if isinstance(raw, str):
            raw = parse_bs(raw)
        ks, ts = [0], []
        for kind, e in raw:
            if kind == "b":
                ks[-1] += e
            elif ts and ts[-1] == -e and ks[-1] == 0:
                ts.pop()
                ks.pop()
            else:
                ts.append(e)
                ks.append(0)
        return cls(group, ks, ts)

    def raw(self) -> list[tuple[str, int]]:
        out = []
        for k, e in zip(self.ks, self.ts):
            if k:
                out.append(("b", k))
            out.append(("t", e))
        if self.ks[-1]:
            out.append(("b", self.ks[-1]))
        return out

    def __mul__(self, other: "BSWord") -> "BSWord":
        return britton_reduce(self.raw() + other.raw(), self.group)

    def inverse(self) -> "BSWord":
        return BSWord(self.group, [-k for k in reversed(self.ks)], [-e for e in reversed(self.ts)])

    def is_identity(self) -> bool:
        return not self.ts and self.ks[0] == 0

    def pinch_sites(self) -> list[int]:
        """Indices ``i`` where ``t^ts[i-1] b^ks[i] t^ts[i]`` is a pinch."""
        m, n = self.group.m, self.group.n
        out = []
        for i in range(1, len(self.ts)):
            e1, e2, k = self.ts[i - 1], self.ts[i], self.ks[i]
            if e1 == -1 and e2 == 1 and k % m == 0:
                out.append(i)
            elif e1 == 1 and e2 == -1 and k % n == 0:
                out.append(i)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, BSWord) and (self.group, self.ks, self.ts) == (other.group, other.ks, other.ts)

    def __hash__(self):
        return hash((self.group, self.ks, self.ts))

    def __str__(self) -> str:
        parts = []
        for kind, e in self.raw():
            if kind == "t":
                parts.append("t" if e > 0 else "T")
            else:
                letter = "b" if e > 0 else "B"
                parts.append(letter if abs(e) == 1 else f"{letter}{abs(e)}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"BSWord({str(self) or 'ε'})"


def _pinch(ks: list[int], ts: list[int], i: int, m: int, n: int):
    """Apply the pinch around ``ks[i]`` in place, merging neighbours."""
    k = ks[i]
    new = k * n // m if ts[i - 1] == -1 else k * m // n
    merged = ks[i - 1] + new + ks[i + 1]
    ks[i - 1 : i + 2] = [merged]
    del ts[i - 1 : i + 1]


def _canonical(group: BSGroup, ks: list[int], ts: list[int]) -> BSWord:
    m, n = group.m, group.n
    ks = list(ks)
    for i, e in enumerate(ts):
        # b^(j m) t = t b^(j n)  and  b^(j n) t^-1 = t^-1 b^(j m)
        mod, other = (m, n) if e == 1 else (n, m)
        q, r = divmod(ks[i], abs(mod))
        j = q if mod > 0 else -q
        ks[i] = r
        ks[i + 1] += j * other
    return BSWord(group, ks, ts)


def britton_reduce(
    w: BSWord | Iterable[tuple[str, int]] | str,
    group: BSGroup | None = None,
    strategy: str = "stack",
    rng: random.Random | None = None,
) -> BSWord:
    """Pinch-free canonical form of ``w``; empty exactly when ``w = 1``.

    ``strategy="stack"`` pinches greedily while scanning left to right;
    ``strategy="random"`` repeatedly pinches at a randomly chosen site (used
    to check that the result does not depend on the order).
    """
    if isinstance(w, BSWord):
        group = w.group
        raw = w.raw()
    else:
        if group is None:
            raise ValueError("group required for raw input")
        raw = parse_bs(w) if isinstance(w, str) else list(w)
    m, n = group.m, group.n
    if strategy == "stack":
        ks, ts = [0], []
        for kind, e in raw:
            if kind == "b":
                ks[-1] += e
                continue
            if ts and ts[-1] == -e:
                k = ks[-1]
                if (e == 1 and k % m == 0) or (e == -1 and k % n == 0):
                    new = k * n // m if e == 1 else k * m // n
                    ks.pop()
                    ts.pop()
                    ks[-1] += new
                    continue
            ts.append(e)
            ks.append(0)
    elif strategy == "random":
        rng = rng or random.Random()
        start = BSWord.from_raw(group, raw)
        ks, ts = list(start.ks), list(start.ts)
        while True:
            sites = BSWord(group, ks, ts).pinch_sites()
            if not sites:
                break
            _pinch(ks, ts, rng.choice(sites), m, n)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return _canonical(group, ks, ts)


def q_exponent(w: BSWord | Iterable[tuple[str, int]] | str) -> int:
    """Exponent sum of ``t`` (the map ``t -> 1``, ``b -> 0``)."""
    if isinstance(w, BSWord):
        return sum(w.ts)
    raw = parse_bs(w) if isinstance(w, str) else w
    return sum(e for kind, e in raw if kind == "t")


# ---------------------------------------------------------------------------
# windows of the kernel

def _window_names(lo: int, hi: int) -> tuple[str, ...]:
    # b_i for i >= 0 is "b<i>"; b_-i is "c<i>"
    return tuple(f"b{i}" if i >= 0 else f"c{-i}" for i in range(lo, hi + 1))


def k_presentation(lo: int, hi: int, group: BSGroup) -> FinPresentation:
    """``K_{lo,hi} = <b_lo, ..., b_hi | b_i^n b_{i+1}^-m>``.

    Generators are named ``b0, b1, ...`` and ``c1, c2, ...`` for ``b_-1, b_-2, ...``.
    """
    if lo > hi:
        raise ValueError("need lo <= hi")
    A = Alphabet(hi - lo + 1, _window_names(lo, hi))
    rels = []
    for j in range(1, hi - lo + 1):
        rels.append(A.gen(j) ** group.n * A.gen(j + 1) ** (-group.m))
    return FinPresentation(A, tuple(rels))


def window_coordinates(lo: int, hi: int, group: BSGroup) -> tuple[AbelianGroup, list[int]]:
    """``H_1(K_{lo,hi})`` and the image of each ``b_i`` in it, from the cokernel projection.

    When the group is infinite cyclic the generator is oriented so that ``b_lo`` is positive.
    """
    P = k_presentation(lo, hi, group)
    H, proj = cokernel(P.relation_matrix())
    coords = [proj([int(j == i) for j in range(hi - lo + 1)]) for i in range(hi - lo + 1)]
    if H.rank == 1 and not H.torsion:
        vals = [c[0] for c in coords]
        if vals[0] < 0:
            vals = [-v for v in vals]
        return H, vals
    return H, [list(c) for c in coords]


def _ratio(small: Sequence[int], big: Sequence[int], offset: int) -> int:
    """The integer ``r`` with ``big[i + offset] == r * small[i]`` for all ``i``."""
    r = Fraction(big[offset], small[0])
    for i, s in enumerate(small):
        if Fraction(big[i + offset], s) != r:
            raise ArithmeticError("window map is not multiplication by a constant")
    if r.denominator != 1:
        raise ArithmeticError("non-integral window map")
    return int(r)


def h1_transition(lo: int, hi: int, group: BSGroup) -> dict:
    """Window maps on ``H_1 = Z`` (signs fixed by orienting ``b_lo`` positive).

    * ``inclusion_multiplier``: ``K_{lo,hi} -> K_{lo-1,hi+1}``;
    * ``alpha``: inclusion ``K_{lo,hi} -> K_{lo,hi+1}``;
    * ``beta``: the shift ``b_i -> b_{i+1}`` into the same window ``K_{lo,hi+1}``;
    * ``ratio = beta / alpha`` is the action of ``t`` on the limit.
    """
    H, c = window_coordinates(lo, hi, group)
    Hb, cb = window_coordinates(lo - 1, hi + 1, group)
    He, ce = window_coordinates(lo, hi + 1, group)
    for G in (H, Hb, He):
        if G != AbelianGroup(1):
            raise ArithmeticError(f"window homology is {G}, not Z")
    inc = _ratio(c, cb, 1)
    alpha = _ratio(c, ce, 0)
    beta = _ratio(c, ce, 1)
    return {
        "window": [lo, hi],
        "h1": H.to_json(),
        "coordinates": c,
        "inclusion_multiplier": inc,
        "alpha": alpha,
        "beta": beta,
        "ratio": Fraction(beta, alpha),
    }


def h1_L_element_check(word: Sequence[tuple[int, int]], lo: int, hi: int, group: BSGroup) -> int:
    """Coordinate in ``H_1(K_{lo,hi}) = Z`` of ``prod b_i^e`` given as ``[(i, e), ...]``."""
    H, c = window_coordinates(lo, hi, group)
    if H != AbelianGroup(1):
        raise ArithmeticError(f"window homology is {H}, not Z")
    total = 0
    for i, e in word:
        if not lo <= i <= hi:
            raise IndexError(f"b_{i} is outside the window [{lo}, {hi}]")
        total += e * c[i - lo]
    return total


# ---------------------------------------------------------------------------
# fibre product of two copies

@dataclass(frozen=True)
class BSFibre:
    """Untwisted fibre product of two copies of ``BS(m, n)`` over the ``t``-exponent map."""

    group: BSGroup

    def generators(self) -> list[tuple[BSWord, BSWord]]:
        g = self.group
        b = britton_reduce("b", g)
        t = britton_reduce("t", g)
        one = britton_reduce("", g)
        return [(b, one), (one, b), (t, t)]

    def member(self, w1, w2) -> bool:
        return q_exponent(w1) == q_exponent(w2)

    def report(self) -> dict:
        return {
            "group": [self.group.m, self.group.n],
            "regime": self.group.regime,
            "generators": [[str(u) or "1", str(v) or "1"] for u, v in self.generators()],
            "membership": "equal t-exponent sums",
            "h2_quotient": AbelianGroup().to_json(),
            "not_machine_checked": [
                "G is not finitely presented",
                "H_2(G, Z) = 0",
            ],
        }


def bs_fibre(group: BSGroup | None = None) -> BSFibre:
    return BSFibre(group or BSGroup(2, 3))

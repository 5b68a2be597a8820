"""Independent brute-force oracles used by the tests.

Nothing here calls into the library's algorithms: words are raw tuples of
signed ints, integer matrices are lists, groups are permutation tuples.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import deque
from fractions import Fraction


# ---------------------------------------------------------------------------
# free groups, raw

def free_reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inv(w):
    return tuple(-x for x in reversed(w))


def mul(*ws):
    return free_reduce([x for w in ws for x in w])


def ball(rank, radius):
    """All reduced words of length <= radius."""
    out = [()]
    layer = [()]
    labels = [s * x for x in range(1, rank + 1) for s in (1, -1)]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for x in labels:
                if not w or w[-1] != -x:
                    nxt.append(w + (x,))
        out += nxt
        layer = nxt
    return out


def random_reduced(rank, length, rng):
    w = []
    while len(w) < length:
        x = rng.choice([s * i for i in range(1, rank + 1) for s in (1, -1)])
        if not w or w[-1] != -x:
            w.append(x)
    return tuple(w)


def conjugators(x, y, radius):
    """All ``g`` with ``|g| <= radius`` and ``g x g^-1 == y``."""
    rank = max([abs(v) for v in x + y] + [1])
    return [g for g in ball(rank, radius) if mul(g, x, inv(g)) == y]


# ---------------------------------------------------------------------------
# integer matrices

def det(M):
    n = len(M)
    if n == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        p = sign
        for i in range(n):
            p *= M[i][perm[i]]
        total += p
    return total


def determinantal_invariants(M):
    """Invariant factors from gcds of k x k minors (nonzero ones, units kept)."""
    m = len(M)
    n = len(M[0]) if m else 0
    ds = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = math.gcd(g, det([[M[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        ds.append(g)
    return [ds[i] // ds[i - 1] for i in range(1, len(ds))]


# hand-derived Schur multipliers: H_2(Z/m x Z/n) = Z/gcd(m, n), H_2(Z/n) = 0,
# H_2(S_3) = 0, H_2(D_4) = Z/2; recorded as torsion lists
HOPF_H2 = {
    "Z2": [], "Z3": [], "Z4": [], "Z5": [], "Z6": [],
    "Z2xZ2": [2], "Z3xZ3": [3], "Z2xZ4": [2], "Z4xZ4": [4],
    "S3": [], "D4": [2], "Z2xZ2xZ2": [2, 2, 2],
}


# ---------------------------------------------------------------------------
# permutation actions (Schreier enumeration)

def random_action(rank, n, rng):
    """Random permutations of ``range(n)``, one per letter, restricted to the orbit of 0."""
    perms = [list(range(n)) for _ in range(rank)]
    for p in perms:
        rng.shuffle(p)
    orbit, queue = {0}, deque([0])
    inverses = [[0] * n for _ in perms]
    for k, p in enumerate(perms):
        for i, j in enumerate(p):
            inverses[k][j] = i
    while queue:
        v = queue.popleft()
        for p in perms + inverses:
            if p[v] not in orbit:
                orbit.add(p[v])
                queue.append(p[v])
    pts = sorted(orbit)
    idx = {v: i for i, v in enumerate(pts)}
    return [[idx[p[v]] for v in pts] for p in perms]


def act(perms, point, w):
    inverses = []
    for p in perms:
        q = [0] * len(p)
        for i, j in enumerate(p):
            q[j] = i
        inverses.append(q)
    for x in w:
        point = perms[x - 1][point] if x > 0 else inverses[-x - 1][point]
    return point


def schreier_generators(perms):
    """Generators of the stabilizer of 0, from a BFS transversal."""
    n, rank = len(perms[0]), len(perms)
    rep = {0: ()}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for s in range(1, rank + 1):
            for x in (s, -s):
                u = act(perms, v, (x,))
                if u not in rep:
                    rep[u] = rep[v] + (x,)
                    queue.append(u)
    assert len(rep) == n
    gens = []
    for v in range(n):
        for s in range(1, rank + 1):
            g = mul(rep[v], (s,), inv(rep[act(perms, v, (s,))]))
            if g and g not in gens and inv(g) not in gens:
                gens.append(g)
    return gens


# ---------------------------------------------------------------------------
# finite separation for products of free groups

def separating_cyclic(h, gens, ranks, max_k=5):
    """A map to ``Z/k`` killing every generator but not ``h``; components are raw words."""
    N = sum(ranks)
    offs = [sum(ranks[:i]) for i in range(len(ranks))]

    def ev(e, imgs, k):
        t = 0
        for comp, off in zip(e, offs):
            for x in comp:
                t += imgs[off + abs(x) - 1] * (1 if x > 0 else -1)
        return t % k

    for k in range(2, max_k + 1):
        for imgs in itertools.product(range(k), repeat=N):
            if ev(h, imgs, k) and all(ev(g, imgs, k) == 0 for g in gens):
                return k, imgs
    return None


def product_ball(gens, radius):
    """Products of at most ``radius`` generators or inverses (componentwise raw words)."""
    ident = tuple(() for _ in gens[0])
    steps = [tuple(g) for g in gens] + [tuple(inv(c) for c in g) for g in gens]
    seen = {ident}
    layer = [ident]
    for _ in range(radius):
        nxt = []
        for e in layer:
            for st in steps:
                f = tuple(mul(a, b) for a, b in zip(e, st))
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        layer = nxt
    return seen


def product_ball_find(h, half_ball):
    """Meet in the middle: ``h = u v`` with ``u, v`` in the ball, so depth is twice its radius."""
    h = tuple(tuple(c) for c in h)
    return any(tuple(mul(inv(a), b) for a, b in zip(u, h)) in half_ball for u in half_ball)


# ---------------------------------------------------------------------------
# Baumslag-Solitar: affine image and bounded rewriting

def bs_affine(word, m, n):
    """Image in ``x -> a x + c`` with ``b: x -> x + 1`` and ``t: x -> (m/n) x``.

    Nonidentity image certifies a nontrivial element.
    """
    lam = Fraction(m, n)
    a, c = Fraction(1), Fraction(0)  # current map x -> a x + c, composed left to right as matrices
    for ch in word:
        if ch == "b":
            c += a
        elif ch == "B":
            c -= a
        elif ch == "t":
            a *= lam
        elif ch == "T":
            a /= lam
    return a, c


def _free_reduce_str(w):
    out = []
    for ch in w:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def _inv_str(w):
    return "".join(ch.swapcase() for ch in reversed(w))


def bs_relator(m, n):
    bm = ("b" if m > 0 else "B") * abs(m)
    bn = ("B" if n > 0 else "b") * abs(n)
    return "T" + bm + "t" + bn


def rewrite_to_identity(word, m, n, max_len=14, max_states=20000):
    """Bounded breadth-first relator rewriting; ``True`` if the empty word is reached."""
    r = bs_relator(m, n)
    rels = set()
    for s in (r, _inv_str(r)):
        for i in range(len(s)):
            rels.add(s[i:] + s[:i])
    subs = []
    for R in rels:
        for k in range(1, len(R)):
            u, v = R[:k], R[k:]
            subs.append((u, _inv_str(v)))
    start = _free_reduce_str(word)
    seen = {start}
    queue = deque([start])
    while queue and len(seen) < max_states:
        w = queue.popleft()
        if not w:
            return True
        for u, rep in subs:
            i = w.find(u)
            while i != -1:
                nw = _free_reduce_str(w[:i] + rep + w[i + len(u):])
                if len(nw) <= max_len and nw not in seen:
                    if not nw:
                        return True
                    seen.add(nw)
                    queue.append(nw)
                i = w.find(u, i + 1)
    return False


def random_bs_trivial(m, n, rng, max_len=10, tries=200):
    """A word of length <= max_len built from conjugated relators; ``None`` if none fits."""
    r = bs_relator(m, n)
    for _ in range(tries):
        pieces = []
        for _ in range(rng.randint(1, 2)):
            R = r if rng.random() < 0.5 else _inv_str(r)
            i = rng.randrange(len(R))
            R = R[i:] + R[:i]
            g = "".join(rng.choice("bBtT") for _ in range(rng.randint(0, 2)))
            pieces.append(g + R + _inv_str(g))
        w = _free_reduce_str("".join(pieces))
        if len(w) <= max_len:
            return w
    return None


def random_bs_word(rng, length):
    return "".join(rng.choice("bBtT") for _ in range(length))


def expand_bs(text):
    """``"b3T"`` -> ``"bbbT"``."""
    return "".join(ch * int(k or 1) for ch, k in re.findall(r"([bBtT])(\d*)", text))

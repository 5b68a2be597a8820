"""Exact integer linear algebra and finitely generated abelian groups.

Matrices follow the relation-matrix convention used throughout the package:
rows are relations (or vectors), columns are generators, and vectors act on
the left (``x @ M``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "AbelianGroup",
    "AbelianHom",
    "egcd",
    "smith_normal_form",
    "invariant_factors",
    "matrix_rank",
    "hermite_normal_form",
    "lattice_solve",
    "left_kernel",
    "cokernel",
    "hom_kernel",
    "coset_intersects",
]


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


class IntMatrix:
    """A dense integer matrix with explicit shape (so 0-row matrices keep their width)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Sequence[int]], cols: int | None = None):
        self.data = [[int(v) for v in row] for row in data]
        self.rows = len(self.data)
        if cols is None:
            if not self.data:
                raise ValueError("cols is required for a matrix with no rows")
            cols = len(self.data[0])
        self.cols = cols
        if any(len(row) != cols for row in self.data):
            raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, entries: Sequence[int], rows: int | None = None, cols: int | None = None):
        rows = len(entries) if rows is None else rows
        cols = len(entries) if cols is None else cols
        M = cls.zeros(rows, cols)
        for i, d in enumerate(entries):
            M.data[i][i] = d
        return M

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols_b = list(zip(*other.data)) if other.rows else [()] * other.cols
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in cols_b] for row in self.data],
            other.cols,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)], self.rows
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.data == other.data

    def __repr__(self) -> str:
        return f"IntMatrix({self.data!r}, cols={self.cols})"

    def tolist(self) -> list[list[int]]:
        return [row[:] for row in self.data]

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.data for v in row)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.rows
        if n != self.cols:
            raise ValueError("determinant of a non-square matrix")
        A = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if A[k][k] == 0:
                for i in range(k + 1, n):
                    if A[i][k]:
                        A[k], A[i] = A[i], A[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            prev = A[k][k]
        return sign * A[n - 1][n - 1] if n else 1

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(str(v) for v in row) for row in self.data]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IntMatrix":
        tokens = text.split()
        if len(tokens) < 2:
            raise ValueError("matrix text needs a 'rows cols' header")
        rows, cols = int(tokens[0]), int(tokens[1])
        values = [int(t) for t in tokens[2:]]
        if len(values) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(values)}")
        return cls([values[i * cols : (i + 1) * cols] for i in range(rows)], cols)


# ---------------------------------------------------------------------------
# Smith normal form

def _smith(A: list[list[int]], m: int, n: int, U=None, V=None) -> list[int]:
    """Diagonalize ``A`` in place; optionally accumulate row ops in ``U`` and column ops in ``V``."""

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        rd, rs = A[dst], A[src]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if U is not None:
            ud, us = U[dst], U[src]
            for k in range(len(us)):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                # move the smallest remainder in row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        t += 1
    return [A[i][i] for i in range(min(m, n))]


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular ``U, V`` and diagonal ``D`` with ``U @ M @ V == D``.

    The diagonal of ``D`` is non-negative and each entry divides the next
    (zeros last).
    """
    m, n = M.shape
    A = M.tolist()
    U = IntMatrix.identity(m).data
    V = IntMatrix.identity(n).data
    _smith(A, m, n, U, V)
    return IntMatrix(U, m), IntMatrix(A, n), IntMatrix(V, n)


# ---------------------------------------------------------------------------
# sparse row echelon over Z (lattice bases)

def _comb(p: dict, a: int, r: dict, b: int) -> dict:
    out = {}
    for k in p.keys() | r.keys():
        v = a * p.get(k, 0) + b * r.get(k, 0)
        if v:
            out[k] = v
    return out


def _insert(pivots: dict[int, dict], r: dict) -> dict | None:
    """Reduce row ``r`` against the echelon ``pivots``; return the leftover when it becomes a new pivot."""
    while r:
        c = min(r)
        p = pivots.get(c)
        if p is None:
            if r[c] < 0:
                r = {k: -v for k, v in r.items()}
            pivots[c] = r
            return r
        a, b = p[c], r[c]
        if b % a == 0:
            r = _comb(r, 1, p, -(b // a))
        else:
            g, x, y = egcd(a, b)
            new_p = _comb(p, x, r, y)
            r = _comb(p, -(b // g), r, a // g)
            pivots[c] = new_p
    return None


def _echelon(rows: Iterable[dict]) -> dict[int, dict]:
    pivots: dict[int, dict] = {}
    for r in rows:
        _insert(pivots, {k: v for k, v in r.items() if v})
    return pivots


def _sparse(row: Sequence[int], offset: int = 0) -> dict:
    return {j + offset: v for j, v in enumerate(row) if v}


def matrix_rank(M: IntMatrix) -> int:
    return len(_echelon(_sparse(r) for r in M.data))


def invariant_factors(M: IntMatrix) -> list[int]:
    """Nonzero Smith diagonal entries of ``M`` (units included), in divisibility order.

    Works through a sparse lattice echelon first, so tall sparse matrices
    (bar-complex boundaries) never become dense ``rows x rows`` transforms.
    """
    piv = _echelon(_sparse(r) for r in M.data)
    cols = sorted({k for r in piv.values() for k in r})
    index = {c: j for j, c in enumerate(cols)}
    A = [[0] * len(cols) for _ in piv]
    for i, r in enumerate(piv.values()):
        for k, v in r.items():
            A[i][index[k]] = v
    diag = _smith(A, len(A), len(cols))
    return [d for d in diag if d]


def hermite_normal_form(M: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form of the row lattice (zero rows dropped)."""
    piv = _echelon(_sparse(r) for r in M.data)
    order = sorted(piv)
    rows = [piv[c] for c in order]
    for i, c in enumerate(order):
        pc = rows[i][c]
        for h in range(i):
            v = rows[h].get(c, 0)
            q = v // pc
            if q:
                rows[h] = _comb(rows[h], 1, rows[i], -q)
    return IntMatrix([[r.get(j, 0) for j in range(M.cols)] for r in rows], M.cols)


def lattice_solve(rows: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """Integer coefficients ``c`` with ``sum(c[i] * rows[i]) == target``, or ``None``."""
    n, k = len(target), len(rows)
    piv = _echelon({**_sparse(r), n + i: 1} for i, r in enumerate(rows))
    t = _sparse(target)
    while True:
        lead = [c for c in t if c < n]
        if not lead:
            break
        c = min(lead)
        p = piv.get(c)
        if p is None or t[c] % p[c]:
            return None
        t = _comb(t, 1, p, -(t[c] // p[c]))
    return [-t.get(n + i, 0) for i in range(k)]


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A basis of ``{c : sum(c[i] * rows[i]) == 0}``."""
    k = len(rows)
    piv = _echelon({**_sparse(r), ncols + i: 1} for i, r in enumerate(rows))
    basis = [r for c, r in sorted(piv.items()) if c >= ncols]
    return [[r.get(ncols + i, 0) for i in range(k)] for r in basis]


# ---------------------------------------------------------------------------
# abelian groups

@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ...`` and each ``di >= 2``.

    Elements are integer tuples: ``rank`` free coordinates followed by one
    coordinate per torsion factor, reduced mod that factor.
    """

    rank: int = 0
    torsion: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.rank < 0:
            raise ValueError("negative rank")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion factors must be >= 2")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "AbelianGroup":
        """Canonical form of a direct sum of cyclic groups (order 0 means Z)."""
        orders = list(orders)
        return cokernel(IntMatrix.diag(orders))[0] if orders else cls()

    @classmethod
    def cyclic(cls, n: int) -> "AbelianGroup":
        return cls.from_orders([n])

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def order(self) -> int | None:
        """Group order, or ``None`` when infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def element(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(vec)}")
        r = self.rank
        return tuple(vec[:r]) + tuple(v % d for v, d in zip(vec[r:], self.torsion))

    def basis_vector(self, i: int) -> tuple[int, ...]:
        return self.element([int(j == i) for j in range(self.ngens)])

    def relation_rows(self) -> list[list[int]]:
        n, r = self.ngens, self.rank
        return [[d if j == r + k else 0 for j in range(n)] for k, d in enumerate(self.torsion)]

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        """Direct sum, in canonical form."""
        return AbelianGroup.from_orders(
            [0] * (self.rank + other.rank) + list(self.torsion) + list(other.torsion)
        )

    # group-target protocol
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def multiply(self, a, b) -> tuple[int, ...]:
        return self.element([x + y for x, y in zip(a, b)])

    def inverse(self, a) -> tuple[int, ...]:
        return self.element([-x for x in a])

    def scale(self, a, k: int) -> tuple[int, ...]:
        return self.element([k * x for x in a])

    def check(self, a) -> tuple[int, ...]:
        if isinstance(a, int) and self.ngens == 1:
            a = (a,)
        return self.element(tuple(a))

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data) -> "AbelianGroup":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_orders([0] * int(data["rank"]) + [int(d) for d in data.get("torsion", [])])

    def __str__(self) -> str:
        parts = ([f"Z^{self.rank}" if self.rank > 1 else "Z"] if self.rank else [])
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"


class AbelianHom:
    """A homomorphism between :class:`AbelianGroup` values, one image per source generator."""

    def __init__(self, source: AbelianGroup, target: AbelianGroup, images: Sequence[Sequence[int]]):
        if len(images) != source.ngens:
            raise ValueError("one image per source generator required")
        self.source = source
        self.target = target
        self.images = [target.element(img) for img in images]
        for d, img in zip(source.torsion, self.images[source.rank :]):
            if any(target.scale(img, d)):
                raise ValueError(f"image of an order-{d} generator does not have order dividing {d}")

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        acc = self.target.identity()
        for c, img in zip(self.source.element(vec), self.images):
            if c:
                acc = self.target.multiply(acc, self.target.scale(img, c))
        return acc

    @property
    def matrix(self) -> IntMatrix:
        return IntMatrix([list(img) for img in self.images], self.target.ngens)

    def is_surjective(self) -> bool:
        n = self.target.ngens
        rows = [list(img) for img in self.images] + self.target.relation_rows()
        H = hermite_normal_form(IntMatrix(rows, n))
        # full image iff the row lattice (with relations) is all of Z^n
        return H.rows == n and all(H[i, i] == 1 for i in range(n))


def cokernel(M: IntMatrix) -> tuple[AbelianGroup, AbelianHom]:
    """The group ``Z^cols / rowspace(M)`` and the projection from ``Z^cols`` onto it."""
    U, D, V = smith_normal_form(M)
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    diag += [0] * (M.cols - len(diag))
    free = [i for i, d in enumerate(diag) if d == 0]
    tors = [i for i, d in enumerate(diag) if d > 1]
    group = AbelianGroup(len(free), tuple(diag[i] for i in tors))
    keep = free + tors
    images = [[V[j, i] for i in keep] for j in range(M.cols)]
    return group, AbelianHom(AbelianGroup(M.cols), group, images)


def hom_kernel(phi: AbelianHom) -> tuple[AbelianGroup, list[list[int]]]:
    """Kernel of ``phi`` from a free source, with a Hermite-reduced basis."""
    if not phi.source.is_free:
        raise ValueError("hom_kernel requires a free abelian source")
    n, tgt = phi.source.rank, phi.target
    rows = [list(img) for img in phi.images] + tgt.relation_rows()
    ker = left_kernel(rows, tgt.ngens)
    projected = [v[:n] for v in ker]
    basis = hermite_normal_form(IntMatrix(projected, n)).tolist() if projected else []
    return AbelianGroup(len(basis)), basis


def coset_intersects(
    q: Sequence[int],
    S: Sequence[Sequence[int]],
    T: Sequence[Sequence[int]],
    ambient: AbelianGroup,
) -> tuple[list[int], list[int]] | None:
    """Decide whether ``q + <S>`` meets ``<T>`` in ``ambient``.

    Returns coefficient lists ``(x, y)`` with ``q + sum(x*S) == sum(y*T)``,
    or ``None`` when the coset and the subgroup are disjoint.
    """
    q = ambient.element(q)
    rows = [list(ambient.element(t)) for t in T]
    rows += [[-v for v in ambient.element(s)] for s in S]
    rows += ambient.relation_rows()
    coeffs = lattice_solve(rows, q)
    if coeffs is None:
        return None
    y = coeffs[: len(T)]
    x = coeffs[len(T) : len(T) + len(S)]
    return x, y

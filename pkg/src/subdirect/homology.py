"""Low-dimensional homology: bar complex of a finite group, and H_1 of fibre products.

The H_1 formula for a subdirect product ``G`` of free groups ``F1 x F2``
with ``Q = F1/L1`` reads

    H_1(G) = H_1(F2) + H_2(Q) + ker(H_1(F1) -> H_1(Q)).

:func:`predicted_h1` evaluates the right-hand side; :func:`h1_oracle`
computes the left-hand side directly by Reidemeister-Schreier.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

from .fibre import FibreSpec
from .intlin import AbelianGroup, AbelianHom, IntMatrix, cokernel, hom_kernel, invariant_factors, matrix_rank
from .presentations import (
    FinPresentation,
    FiniteGroup,
    abelian_invariants,
    direct_product_presentation,
    reidemeister_schreier,
)
from .stallings import CosetTable
from .words import Alphabet

__all__ = [
    "H2_BOUND",
    "bar_boundaries",
    "h2_finite",
    "h1_finite",
    "schur_multiplier_abelian",
    "theorem_a_parts",
    "predicted_h1",
    "h1_oracle",
    "Thm31Report",
    "thm31_criterion",
    "example2_h1",
]

H2_BOUND = 16


def _d2(Q: FiniteGroup) -> IntMatrix:
    n, t = Q.order, Q.table
    rows = []
    for g in range(n):
        for h in range(n):
            row = [0] * n
            row[h] += 1
            row[t[g][h]] -= 1
            row[g] += 1
            rows.append(row)
    return IntMatrix(rows, n)


def _d3(Q: FiniteGroup) -> IntMatrix:
    n, t = Q.order, Q.table
    rows = []
    for g in range(n):
        for h in range(n):
            gh = t[g][h]
            for k in range(n):
                row = [0] * (n * n)
                row[h * n + k] += 1
                row[gh * n + k] -= 1
                row[g * n + t[h][k]] += 1
                row[g * n + h] -= 1
                rows.append(row)
    return IntMatrix(rows, n * n)


def bar_boundaries(Q: FiniteGroup) -> tuple[IntMatrix, IntMatrix]:
    """Boundary matrices ``(D2, D3)`` of the inhomogeneous bar complex, trivial coefficients.

    Row vectors: ``D2`` maps ``Z[Q^2] -> Z[Q]`` and ``D3`` maps ``Z[Q^3] -> Z[Q^2]``,
    so ``D3 @ D2 == 0``.  Cells ``(g, h)`` are numbered ``g * n + h``.
    """
    return _d2(Q), _d3(Q)


@functools.lru_cache(maxsize=None)
def _h2_cached(Q: FiniteGroup) -> AbelianGroup:
    D2, D3 = bar_boundaries(Q)
    n = Q.order
    rank = n * n - matrix_rank(D2) - matrix_rank(D3)
    torsion = [d for d in invariant_factors(D3) if d > 1]
    return AbelianGroup.from_orders([0] * rank + torsion)


def h2_finite(Q: FiniteGroup, bound: int = H2_BOUND) -> AbelianGroup:
    """Integral ``H_2(Q)`` (the Schur multiplier) from the full bar complex."""
    if Q.order > bound:
        raise ValueError(f"|Q| = {Q.order} exceeds the bar-complex bound {bound}")
    return _h2_cached(Q)


def h1_finite(Q: FiniteGroup) -> tuple[AbelianGroup, AbelianHom]:
    """``H_1(Q)`` as the cokernel of ``D2``, with the projection ``Z[Q] -> H_1(Q)``."""
    return cokernel(_d2(Q))


def schur_multiplier_abelian(A: AbelianGroup) -> AbelianGroup:
    """``H_2`` of a finitely generated abelian group, as its exterior square."""
    r, ds = A.rank, list(A.torsion)
    orders = [0] * math.comb(r, 2)
    orders += [d for d in ds for _ in range(r)]
    orders += [math.gcd(a, b) for a, b in itertools.combinations(ds, 2)]
    return AbelianGroup.from_orders([o for o in orders if o != 1])


# ---------------------------------------------------------------------------
# the H_1 formula

def _as_finite(Q) -> tuple[FiniteGroup, callable]:
    """A table for a finite quotient and a converter from the quotient's element format."""
    if isinstance(Q, FiniteGroup):
        return Q, lambda q: q
    if isinstance(Q, AbelianGroup) and Q.order is not None:
        T = FiniteGroup.abelian(Q.torsion)
        return T, lambda q: T.element(tuple(q))
    raise ValueError("a finite quotient is required")


def _check_two_free(spec: FibreSpec):
    if spec.kernel_mode or spec.arity != 2 or not all(spec.factors_free):
        raise ValueError("needs a two-factor fibre product of free groups")


def theorem_a_parts(spec: FibreSpec) -> dict:
    """The three summands of the formula and a basis of ``C``."""
    _check_two_free(spec)
    T, conv = _as_finite(spec.quotient)
    p1 = spec.maps[0]
    r1, r2 = spec.factors[0].rank, spec.factors[1].rank
    H1Q, proj = h1_finite(T)
    induced = AbelianHom(
        AbelianGroup(r1), H1Q, [proj([int(j == conv(img)) for j in range(T.order)]) for img in p1.images]
    )
    C, basis = hom_kernel(induced)
    return {"h1_f2": AbelianGroup(r2), "h2_q": h2_finite(T), "c": C, "c_basis": basis, "h1_q": H1Q}


def predicted_h1(spec: FibreSpec) -> AbelianGroup:
    """Right-hand side of the H_1 formula; refuses infinite quotients."""
    parts = theorem_a_parts(spec)
    return parts["h1_f2"] + parts["h2_q"] + parts["c"]


def h1_oracle(spec: FibreSpec) -> AbelianGroup:
    """``H_1(G)`` by Reidemeister-Schreier on ``F1 x F2`` at the kernel of ``(u, v) -> p1(u) p2(v)^-1``.

    That map is a homomorphism only for abelian ``Q``; other quotients are refused.
    """
    _check_two_free(spec)
    T, conv = _as_finite(spec.quotient)
    if not T.is_abelian():
        raise ValueError("the direct oracle needs an abelian quotient")
    A1, A2 = spec.factors
    P = direct_product_presentation(FinPresentation(Alphabet(A1.rank)), FinPresentation(Alphabet(A2.rank)))
    # coset 0 must be the identity
    order = [T.e] + [q for q in range(T.order) if q != T.e]
    pos = {q: i for i, q in enumerate(order)}
    steps = [conv(img) for img in spec.maps[0].images]
    steps += [T.inverse(conv(img)) for img in spec.maps[1].images]
    action = [[pos[T.multiply(q, s)] for s in steps] for q in order]
    sub = reidemeister_schreier(P, CosetTable(len(steps), action))
    return abelian_invariants(sub)


# ---------------------------------------------------------------------------
# finite generation criterion

@dataclass
class Thm31Report:
    name: str
    h2_quotient: AbelianGroup | None
    h2_finitely_generated: bool | None
    h1_finitely_generated: bool | None
    h1_known: AbelianGroup | None = None

    @property
    def consistent(self) -> bool | None:
        if self.h1_known is None or self.h1_finitely_generated is None:
            return None
        # every AbelianGroup value is finitely generated
        return self.h1_finitely_generated

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "h2_quotient": self.h2_quotient.to_json() if self.h2_quotient is not None else None,
            "h2_finitely_generated": self.h2_finitely_generated,
            "h1_finitely_generated": self.h1_finitely_generated,
            "h1_known": self.h1_known.to_json() if self.h1_known is not None else None,
            "consistent": self.consistent,
        }


def thm31_criterion(spec: FibreSpec | None = None, *, h2_quotient: AbelianGroup | None = None, name: str = "") -> Thm31Report:
    """``H_1(G)`` is finitely generated iff ``H_2(Q)`` is.

    ``H_2(Q)`` is computed for finite and finitely generated abelian
    quotients; otherwise it must be supplied (or found in the spec's
    metadata under ``"h2_quotient"``).  A known ``H_1(G)`` in metadata
    (``"h1"``) is checked against the prediction.
    """
    known = None
    if spec is not None:
        name = name or spec.name
        Q = spec.quotient
        if h2_quotient is None:
            if isinstance(Q, FiniteGroup):
                h2_quotient = h2_finite(Q)
            elif isinstance(Q, AbelianGroup):
                h2_quotient = schur_multiplier_abelian(Q)
            elif "h2_quotient" in spec.metadata:
                h2_quotient = AbelianGroup.from_json(spec.metadata["h2_quotient"])
        if "h1" in spec.metadata:
            known = AbelianGroup.from_json(spec.metadata["h1"])
    fg = None if h2_quotient is None else True
    return Thm31Report(name, h2_quotient, fg, fg, known)


def example2_h1() -> AbelianGroup:
    """Abelianization of ``<x | > x F_2``, the group the second worked example is isomorphic to."""
    P = direct_product_presentation(FinPresentation(Alphabet(1, ("x",))), FinPresentation(Alphabet(2)))
    return abelian_invariants(P)

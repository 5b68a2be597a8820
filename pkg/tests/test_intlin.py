import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import determinantal_invariants
from subdirect.intlin import (
    AbelianGroup,
    AbelianHom,
    IntMatrix,
    cokernel,
    coset_intersects,
    egcd,
    hermite_normal_form,
    hom_kernel,
    invariant_factors,
    lattice_solve,
    left_kernel,
    matrix_rank,
    smith_normal_form,
)

entries = st.integers(-6, 6)


@st.composite
def matrices(draw, max_rows=4, max_cols=4):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return [[draw(entries) for _ in range(n)] for _ in range(m)]


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_egcd(a, b):
    g, x, y = egcd(a, b)
    assert g >= 0 and a * x + b * y == g
    if g:
        assert a % g == 0 and b % g == 0


@settings(max_examples=150)
@given(matrices())
def test_smith_form(rows):
    M = IntMatrix(rows)
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = [D[i, i] for i in range(min(D.shape))]
    assert all(D[i, j] == 0 for i in range(D.rows) for j in range(D.cols) if i != j)
    nz = [d for d in diag if d]
    assert diag[: len(nz)] == nz and all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == determinantal_invariants(rows)
    assert invariant_factors(M) == nz
    assert matrix_rank(M) == len(nz)


def test_diag_2_3():
    M = IntMatrix([[2, 0], [0, 3]])
    assert invariant_factors(M) == [1, 6]
    G, _ = cokernel(M)
    assert G == AbelianGroup(0, (6,))
    assert G.to_json() == {"rank": 0, "torsion": [6]}


def test_text_roundtrip():
    M = IntMatrix([[1, -2, 3], [0, 4, 5]])
    assert IntMatrix.from_text(M.to_text()) == M
    with pytest.raises(ValueError):
        IntMatrix.from_text("2 2\n1 2 3")


@settings(max_examples=100)
@given(matrices())
def test_hnf_same_lattice(rows):
    H = hermite_normal_form(IntMatrix(rows))
    for r in rows:
        assert lattice_solve(H.tolist(), r) is not None
    for r in H.tolist():
        assert lattice_solve(rows, r) is not None


@settings(max_examples=100)
@given(matrices(), st.lists(entries, min_size=4, max_size=4))
def test_lattice_solve(rows, coeffs):
    n = len(rows[0])
    target = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(n)]
    sol = lattice_solve(rows, target)
    assert sol is not None
    assert [sum(c * r[j] for c, r in zip(sol, rows)) for j in range(n)] == target


def test_lattice_solve_none():
    assert lattice_solve([[2, 0], [0, 3]], [1, 0]) is None


@settings(max_examples=100)
@given(matrices())
def test_left_kernel(rows):
    n = len(rows[0])
    K = left_kernel(rows, n)
    for v in K:
        assert [sum(c * r[j] for c, r in zip(v, rows)) for j in range(n)] == [0] * n
    assert len(K) == len(rows) - matrix_rank(IntMatrix(rows))


@given(st.lists(st.integers(0, 12), max_size=4))
def test_from_orders_canonical(orders):
    G = AbelianGroup.from_orders(orders)
    assert G.rank == orders.count(0)
    finite = 1
    for d in orders:
        if d:
            finite *= d
    prod = 1
    for d in G.torsion:
        prod *= d
    assert prod == finite
    assert AbelianGroup.from_json(G.to_json()) == G


def test_direct_sum():
    assert AbelianGroup.from_orders([2]) + AbelianGroup.from_orders([3]) == AbelianGroup(0, (6,))
    assert str(AbelianGroup(2, (2,))) == "Z^2 + Z/2"


def test_hom_kernel_index():
    # Z^2 -> Z/2, (x, y) -> x + y: kernel of index 2
    phi = AbelianHom(AbelianGroup(2), AbelianGroup(0, (2,)), [(1,), (1,)])
    K, basis = hom_kernel(phi)
    assert K == AbelianGroup(2)
    assert abs(IntMatrix(basis).det()) == 2
    assert phi.is_surjective()


def test_coset_intersects():
    Q = AbelianGroup(1, (4,))
    q = (3, 1)
    S = [(1, 0)]
    T = [(0, 1)]
    x, y = coset_intersects(q, S, T, Q)
    lhs = Q.element([q[i] + sum(c * s[i] for c, s in zip(x, S)) for i in range(2)])
    rhs = Q.element([sum(c * t[i] for c, t in zip(y, T)) for i in range(2)])
    assert lhs == rhs
    assert coset_intersects((0, 1), [], [(0, 2)], Q) is None

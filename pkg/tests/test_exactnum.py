import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from multiloop.exactnum import (
    ExactMatrix,
    SparseEchelon,
    cyclotomic_polynomial,
    euler_phi,
    kernel,
    make_cyclotomic,
    parse_scalar,
    rank,
    rank_nullspace,
    rref,
    solve_linear,
)

ORDERS = [1, 2, 3, 4, 5, 6, 8, 12]


def test_i_squared():
    F = make_cyclotomic(4)
    assert F.zeta() ** 2 == F(-1)


def test_cube_root_reduction():
    F = make_cyclotomic(3)
    assert (F.zeta() ** 2).coeffs == (Fraction(-1), Fraction(-1))


def test_trivial_field():
    F = make_cyclotomic(1)
    assert F.degree == 1
    assert F.zeta() == F(1)
    assert make_cyclotomic(2).degree == 1
    assert make_cyclotomic(2).zeta() == -1


def test_zero_order_rejected():
    with pytest.raises(ValueError):
        make_cyclotomic(0)


@pytest.mark.parametrize("m", range(1, 25))
def test_degree_is_totient(m):
    assert len(cyclotomic_polynomial(m)) - 1 == euler_phi(m)
    assert make_cyclotomic(m).degree == euler_phi(m)


def test_known_polynomials():
    # coefficients in increasing degree
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)


@pytest.mark.parametrize("m", range(1, 13))
def test_primitivity(m):
    F = make_cyclotomic(m)
    z = F.zeta()
    assert z ** m == F.one
    for k in range(1, m):
        assert z ** k != F.one


def test_roots_of_unity_numerically():
    F = make_cyclotomic(12)
    for k in range(12):
        assert abs(complex(F.root_of_unity(k)) - np.exp(2j * np.pi * k / 12)) < 1e-12
    assert F.root_of_unity(1, 3) == F.zeta() ** 4
    with pytest.raises(ValueError):
        F.root_of_unity(1, 5)


def scalars(m):
    F = make_cyclotomic(m)
    small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    return st.lists(small, min_size=F.degree, max_size=F.degree).map(lambda c: F.from_poly(c))


@st.composite
def scalar_triples(draw):
    m = draw(st.sampled_from(ORDERS))
    s = scalars(m)
    return draw(s), draw(s), draw(s)


@given(scalar_triples())
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + a.field.zero == a
    assert a * a.field.one == a
    assert a - a == a.field.zero


@given(scalar_triples())
def test_inverse(t):
    a, _, _ = t
    if a:
        assert a * a.inverse() == a.field.one
        assert (a / a) == a.field.one


@given(scalar_triples())
def test_complex_embedding_is_a_homomorphism(t):
    a, b, _ = t
    assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9
    assert abs(complex(a + b) - complex(a) - complex(b)) < 1e-9


@given(scalar_triples())
def test_format_parse_roundtrip(t):
    for a in t:
        assert parse_scalar(str(a), a.field) == a


def test_format_example():
    F = make_cyclotomic(5)
    z = F.zeta()
    s = Fraction(3, 2) * z ** 2 - z + 5
    assert str(s) == "3/2*z^2 - 1*z + 5"
    assert F.parse("3/2*z^2 - 1*z + 5") == s


def test_embed_into_larger_field():
    F3, F6 = make_cyclotomic(3), make_cyclotomic(6)
    w = F3.zeta()
    assert w.embed(F6) == F6.zeta() ** 2
    assert (w * w).embed(F6) == w.embed(F6) ** 2


def Q(rows):
    F = make_cyclotomic(1)
    return ExactMatrix.from_rows([[F(x) for x in r] for r in rows])


def test_rank_nullspace_examples():
    r, null = rank_nullspace(Q([[0, 0], [0, 0]]))
    assert r == 0 and len(null) == 2
    r, null = rank_nullspace(Q([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert r == 3 and null == []
    r, null = rank_nullspace(Q([[1, 1], [1, 1]]))
    assert r == 1 and null == [[-1, 1]]


def test_solve_examples():
    F = make_cyclotomic(1)
    sol = solve_linear(Q([[1, 0], [0, 1]]), [F(3), F(-2)])
    assert list(sol.particular) == [3, -2]
    assert solve_linear(Q([[0, 0], [0, 0]]), [F(1), F(0)]) is None
    assert solve_linear(Q([[2]]), [F(1)]).particular == [Fraction(1, 2)]


def _random_int_matrix(rng, nr, nc, lo=-3, hi=3, rank_cap=None):
    if rank_cap is None:
        return [[rng.randint(lo, hi) for _ in range(nc)] for _ in range(nr)]
    A = np.array([[rng.randint(lo, hi) for _ in range(rank_cap)] for _ in range(nr)])
    B = np.array([[rng.randint(lo, hi) for _ in range(nc)] for _ in range(rank_cap)])
    return (A @ B).tolist()


def test_rank_against_float_oracle():
    rng = random.Random(1)
    for _ in range(60):
        nr, nc = rng.randint(1, 7), rng.randint(1, 7)
        rows = _random_int_matrix(rng, nr, nc, rank_cap=rng.randint(1, 4))
        r, null = rank_nullspace(Q(rows))
        assert r == np.linalg.matrix_rank(np.array(rows, dtype=float))
        assert r + len(null) == nc
        for v in null:
            assert all(x == 0 for x in Q(rows) @ v)


def test_rank_invariant_under_row_permutation():
    rng = random.Random(2)
    for _ in range(40):
        rows = _random_int_matrix(rng, 6, 5, rank_cap=3)
        perm = rows[:]
        rng.shuffle(perm)
        assert rank(Q(rows)) == rank(Q(perm))
        # the reduced echelon form is canonical, so it ignores row order too
        assert rref(Q(rows))[0] == rref(Q(perm))[0]


def test_solve_residuals_random_consistent():
    rng = random.Random(3)
    F = make_cyclotomic(3)
    z = F.zeta()
    for _ in range(100):
        nr, nc = rng.randint(1, 8), rng.randint(1, 8)
        A = ExactMatrix.from_rows([[F(rng.randint(-2, 2)) + rng.randint(-1, 1) * z for _ in range(nc)]
                                   for _ in range(nr)])
        x0 = [F(rng.randint(-3, 3)) for _ in range(nc)]
        b = A @ x0
        sol = solve_linear(A, b)
        assert sol is not None
        assert A @ sol.particular == b
        for v in sol.nullspace:
            assert all(not t for t in A @ v)


def test_kernel_free_columns_read_coordinates():
    A = Q([[1, 2, 0, 1], [0, 0, 1, 3]])
    basis, free = kernel(A)
    assert free == [1, 3]
    for i, v in enumerate(basis):
        assert [v[f] for f in free] == [1 if j == i else 0 for j in range(len(free))]


def test_sparse_echelon_matches_dense():
    rng = random.Random(4)
    F = make_cyclotomic(1)
    for _ in range(30):
        nc = rng.randint(2, 9)
        rows = _random_int_matrix(rng, rng.randint(1, 10), nc, rank_cap=rng.randint(1, 5))
        ech = SparseEchelon(nc, F.zero)
        for r in rows:
            ech.add({k: F(x) for k, x in enumerate(r) if x})
        dense_rows, dense_piv = rref(Q(rows))
        sparse_rows, sparse_piv = ech.rref()
        assert ech.rank == len(dense_piv)
        assert sparse_piv == dense_piv
        assert [[r.get(k, 0) for k in range(nc)] for r in sparse_rows] == [list(r) for r in dense_rows[:len(dense_piv)]]
        assert ech.nullspace() == rank_nullspace(Q(rows))[1]

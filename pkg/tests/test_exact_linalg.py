from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectra_def.errors import DimensionMismatch, NoSolution, NotContained, UnsupportedScalar
from spectra_def.exact_linalg import (
    I,
    ONE,
    ZERO,
    Matrix,
    Quotient,
    Scalar,
    Subspace,
    hermitian,
    image,
    kernel,
    member,
    preimage,
    quotient_dim,
    rank,
    reduce,
    solve_min_norm,
    subspace_calculus,
)

small = st.integers(min_value=-3, max_value=3)
gauss = st.builds(lambda a, b: Scalar(a, b), small, small)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(gauss, min_size=c, max_size=c), min_size=r, max_size=r).map(
                lambda rows: Matrix(rows, r, c)
            )
        )
    )


def subspaces(dim):
    return st.lists(st.lists(gauss, min_size=dim, max_size=dim), max_size=dim).map(
        lambda vs: Subspace.span(vs, dim)
    )


# scalars


def test_scalar_arithmetic():
    a = Scalar(Fraction(1, 2), 3)
    assert a * a.inverse() == ONE
    assert I * I == -ONE
    assert (a - a).is_zero()
    assert a.conj() == Scalar(Fraction(1, 2), -3)
    assert a.abs2() == Scalar(Fraction(1, 4) + 9)
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@pytest.mark.parametrize(
    "text, value",
    [
        ("3", Scalar(3)),
        ("-1/2", Scalar(Fraction(-1, 2))),
        ("i", I),
        ("-2i", Scalar(0, -2)),
        ("1/2+3/4i", Scalar(Fraction(1, 2), Fraction(3, 4))),
        ("1-i", Scalar(1, -1)),
    ],
)
def test_scalar_parse(text, value):
    assert Scalar.parse(text) == value


def test_scalar_rejects_irrational():
    with pytest.raises(UnsupportedScalar):
        Scalar.parse("sqrt(2)")
    with pytest.raises(UnsupportedScalar):
        Scalar.from_json(0.5)


@given(gauss, gauss)
def test_scalar_json_round_trip(a, b):
    s = a / Scalar(3) + b * I
    assert Scalar.from_json(s.to_json()) == s
    assert Scalar.parse(str(s)) == s


# reduce / kernel / solve


def test_reduce_identity():
    r, _, piv = reduce(Matrix.identity(3))
    assert (r, tuple(piv)) == (3, (0, 1, 2))


def test_reduce_zero():
    assert reduce(Matrix.zeros(2, 4))[0] == 0


def test_reduce_gaussian_dependent_rows():
    assert rank(Matrix([[1, I], [I, -1]])) == 1


def test_kernel_examples():
    assert kernel(Matrix.identity(3)).dim == 0
    assert kernel(Matrix.zeros(2, 4)) == Subspace.full(4)
    assert kernel(Matrix([[1, -1]])) == Subspace.span([(ONE, ONE)], 2)


def test_solve_min_norm_examples():
    b = (Scalar(2), I, Scalar(-1))
    assert solve_min_norm(Matrix.identity(3), b) == b
    assert solve_min_norm(Matrix.zeros(2, 2), (ZERO, ZERO)) == (ZERO, ZERO)
    with pytest.raises(NoSolution):
        solve_min_norm(Matrix.zeros(2, 2), (ONE, ZERO))
    assert solve_min_norm(Matrix([[1, 1]]), (Scalar(2),)) == (ONE, ONE)


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_min_norm(Matrix.identity(2), (ONE,))


@settings(max_examples=60)
@given(matrices(), st.data())
def test_min_norm_solution_is_exact_and_orthogonal_to_kernel(m, data):
    x0 = data.draw(st.lists(gauss, min_size=m.cols, max_size=m.cols))
    b = m.apply(x0)
    x = solve_min_norm(m, b)
    assert m.apply(x) == b
    for v in kernel(m).vectors():
        assert hermitian(v, x) == ZERO


@settings(max_examples=60)
@given(matrices())
def test_reduce_idempotent(m):
    _, rref, _ = reduce(m)
    assert reduce(rref)[1] == rref


@settings(max_examples=60)
@given(matrices(), st.randoms(use_true_random=False))
def test_row_order_independence(m, rnd):
    rows = list(m.data)
    rnd.shuffle(rows)
    shuffled = Matrix(rows, m.rows, m.cols)
    assert reduce(shuffled)[1] == reduce(m)[1]
    assert Subspace.span(rows, m.cols) == Subspace.span(m.data, m.cols)


@settings(max_examples=60)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.cols
    assert image(m).dim == rank(m)


# subspaces


@settings(max_examples=80)
@given(subspaces(4), subspaces(4))
def test_grassmann_identity(u, v):
    assert (u + v).dim + u.intersect(v).dim == u.dim + v.dim
    assert subspace_calculus("intersect", u, u) == u
    assert subspace_calculus("sum", u, v) == v + u


@settings(max_examples=40)
@given(matrices(3, 3), subspaces(3))
def test_preimage_definition(a, u):
    if a.rows != u.ambient_dim:
        return
    pre = preimage(a, u)
    for v in pre.vectors():
        assert u.contains_vector(a.apply(v))
    assert pre.contains(kernel(a))


def test_preimage_of_zero_under_zero_map():
    assert preimage(Matrix.zeros(2, 3), Subspace.zero(2)) == Subspace.full(3)


def test_quotient_dim_and_member():
    e1 = (ONE, ZERO, ZERO)
    u = Subspace.span([e1], 3)
    assert quotient_dim(u, Subspace.full(3)) == 2
    assert member(e1, u)
    assert not member((ZERO, ONE, ZERO), u)
    with pytest.raises(NotContained):
        quotient_dim(Subspace.full(3), u)
    with pytest.raises(DimensionMismatch):
        u.intersect(Subspace.full(2))


def test_orthogonal_complement():
    u = Subspace.span([(ONE, I)], 2)
    w = u.orthogonal_complement()
    assert w.dim == 1
    assert hermitian(u.vectors()[0], w.vectors()[0]) == ZERO


def test_quotient_coords():
    cycles = Subspace.full(3)
    bounds = Subspace.span([(ONE, ONE, ZERO)], 3)
    q = Quotient(cycles, bounds)
    assert q.dim == 2
    x = (Scalar(2), Scalar(2), ZERO)
    assert q.is_trivial(x)
    assert all(c == ZERO for c in q.coords(x))
    assert any(q.coords((ONE, ZERO, ZERO)))
    with pytest.raises(NotContained):
        Quotient(bounds, cycles)

from __future__ import annotations

import itertools
from fractions import Fraction as F

from hypothesis import given, strategies as st

from orbitlab.lattice import (
    hnf_with_transform,
    integer_kernel,
    inverse,
    matmul,
    matvec,
    nullspace,
    rank,
    reduce_mod_hnf,
    smith_normal_form,
    solve_integer,
    solve_rational,
)

small = st.integers(-6, 6)


def matrices(rows=(1, 4), cols=(1, 4)):
    return st.integers(*rows).flatmap(
        lambda r: st.integers(*cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def det(M):
    n = len(M)
    if n == 0:
        return 1
    return sum((-1) ** j * M[0][j] * det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n))


@given(matrices())
def test_hnf_shape_and_transform(M):
    H, U = hnf_with_transform(M, len(M[0]))
    assert matmul(U, M) == H
    assert abs(det(U)) == 1
    last = -1
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            continue
        j = nz[0]
        assert j > last and row[j] > 0
        last = j
        for other in H[: H.index(row)]:
            assert 0 <= other[j] < row[j]


@given(matrices())
def test_snf_divisibility(M):
    D, U, W = smith_normal_form(M, len(M[0]))
    assert matmul(matmul(U, M), W) == D
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert i == j or x == 0


@given(matrices(cols=(2, 4)))
def test_integer_kernel_matches_enumeration(A):
    n = len(A[0])
    K = integer_kernel(A, n)
    for v in K:
        assert matvec(A, v) == [0] * len(A)
    assert len(K) == n - rank(A, n)
    # every small kernel vector is an integer combination of the basis
    for v in itertools.product(range(-2, 3), repeat=n):
        if any(v) and matvec(A, list(v)) == [0] * len(A):
            assert solve_integer([list(c) for c in zip(*K)], list(v), len(K)) is not None


@given(matrices(), st.data())
def test_solve_integer_finds_planted_solution(A, data):
    n = len(A[0])
    x = data.draw(st.lists(small, min_size=n, max_size=n))
    b = matvec(A, x)
    sol = solve_integer(A, b, n)
    assert sol is not None and matvec(A, sol) == b


def test_solve_integer_detects_parity():
    assert solve_integer([[2]], [1], 1) is None
    assert solve_integer([[2, 4]], [6], 2) is not None


def test_reduce_mod_hnf_canonical():
    H = [[1, -1]]  # relation of <2, 4> in HNF-ish form reversed
    H = [[2, -1]]
    a = reduce_mod_hnf([3, 0], H)
    b = reduce_mod_hnf([1, 1], H)
    assert a == b


def test_rational_routines():
    M = [[F(1), F(2)], [F(3), F(4)]]
    Minv = inverse(M)
    assert matmul(M, Minv) == [[1, 0], [0, 1]]
    assert rank([[1, 2], [2, 4]], 2) == 1
    (v,) = nullspace([[1, 2], [2, 4]], 2)
    assert v[0] + 2 * v[1] == 0
    assert solve_rational([[1, 1], [1, 1]], [1, 2], 2) is None

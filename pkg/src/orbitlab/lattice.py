"""Exact linear algebra over Z and Q on plain nested lists.

Matrices are lists of rows.  Integer routines never leave ``int``; rational
routines work on :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

Matrix = list  # list[list[int | Fraction]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# -- Hermite normal form ------------------------------------------------------


def hnf_with_transform(M: Sequence[Sequence[int]], ncols: Optional[int] = None):
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``.  ``H`` is in
    row echelon form, every pivot is positive and entries above a pivot lie in
    ``[0, pivot)``.  Zero rows are kept at the bottom so ``H`` has the shape of
    ``M``.
    """
    H = [list(map(int, row)) for row in M]
    m = len(H)
    n = len(H[0]) if H else (ncols or 0)
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # fold every row below r into row r with gcd steps
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [s * x + t * y for x, y in zip(Hr, Hi)]
            H[i] = [-bg * x + ag * y for x, y in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [s * x + t * y for x, y in zip(Ur, Ui)]
            U[i] = [-bg * x + ag * y for x, y in zip(Ur, Ui)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Matrix:
    """Nonzero rows of the row HNF: a canonical basis of the row lattice."""
    H, _ = hnf_with_transform(M, ncols)
    return [row for row in H if any(row)]


def pivots(H: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for row in H:
        for j, x in enumerate(row):
            if x:
                out.append(j)
                break
    return out


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """HNF basis (as rows) of ``{x in Z^ncols : A x = 0}``."""
    if not A:
        return identity(ncols)
    H, U = hnf_with_transform(transpose(A), len(A))
    basis = [U[i] for i, row in enumerate(H) if not any(row)]
    return hnf(basis, ncols) if basis else []


def reduce_mod_hnf(x: Sequence[int], H: Sequence[Sequence[int]], centered: bool = False) -> list[int]:
    """Canonical coset representative of ``x`` modulo the row lattice of ``H``.

    Each pivot coordinate is brought into ``[0, pivot)``, or ``(-pivot/2,
    pivot/2]`` when ``centered``.
    """
    x = list(x)
    for row, c in zip(H, pivots(H)):
        piv = row[c]
        q = x[c] // piv
        if centered and 2 * (x[c] - q * piv) > piv:
            q += 1
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    return x


# -- Smith normal form --------------------------------------------------------


def smith_normal_form(M: Sequence[Sequence[int]], ncols: Optional[int] = None):
    """Return ``(D, U, W)`` with ``U @ M @ W == D`` and ``U``, ``W`` unimodular.

    ``D`` is diagonal with nonnegative entries ``d_1 | d_2 | ...``.
    """
    D = [list(map(int, row)) for row in M]
    m = len(D)
    n = len(D[0]) if D else (ncols or 0)
    U, W = identity(m), identity(n)

    def swap_rows(i, j):
        for X in (D, U):
            X[i], X[j] = X[j], X[i]

    def swap_cols(i, j):
        for X in (D, W):
            for row in X:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        for X in (D, U):
            X[dst] = [a + q * b for a, b in zip(X[dst], X[src])]

    def add_col(dst, src, q):
        for X in (D, W):
            for row in X:
                row[dst] += q * row[src]

    for k in range(min(m, n)):
        # each pass either finishes the pivot or strictly shrinks the
        # smallest nonzero entry of the trailing block
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(k, m) for j in range(k, n) if D[i][j]]
            if not nz:
                break
            _, i0, j0 = min(nz)
            if i0 != k:
                swap_rows(k, i0)
            if j0 != k:
                swap_cols(k, j0)
            piv = D[k][k]
            for i in range(k + 1, m):
                if D[i][k]:
                    add_row(i, k, -(D[i][k] // piv))
            for j in range(k + 1, n):
                if D[k][j]:
                    add_col(j, k, -(D[k][j] // piv))
            if any(D[i][k] for i in range(k + 1, m)) or any(D[k][j] for j in range(k + 1, n)):
                continue
            bad = next(
                (i for i in range(k + 1, m) for j in range(k + 1, n) if D[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(k, bad, 1)
        if not any(D[i][j] for i in range(k, m) for j in range(k, n)):
            break
        if D[k][k] < 0:
            D[k] = [-x for x in D[k]]
            U[k] = [-x for x in U[k]]
    return D, U, W


def diagonal(D: Sequence[Sequence[int]]) -> list[int]:
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i] == 0:
            break
        out.append(D[i][i])
    return out


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int], ncols: Optional[int] = None):
    """Some ``x in Z^n`` with ``A x = b``, or ``None`` when none exists."""
    n = len(A[0]) if A else (ncols or 0)
    if not A:
        return [0] * n
    D, U, W = smith_normal_form(A, n)
    c = matvec(U, b)
    d = diagonal(D)
    y = [0] * n
    for i, ci in enumerate(c):
        if i < len(d):
            if ci % d[i]:
                return None
            y[i] = ci // d[i]
        elif ci:
            return None
    return matvec(W, y)


# -- rational linear algebra --------------------------------------------------


def rref(M: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form over Q. Returns ``(R, pivot_columns)``."""
    R = [[Fraction(x) for x in row] for row in M]
    m = len(R)
    n = len(R[0]) if R else (ncols or 0)
    piv = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        piv.append(c)
        r += 1
    return R, piv


def rank(M: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    return len(rref(M, ncols)[1])


def nullspace(M: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    """Basis of the right kernel over Q, one vector per free column."""
    n = len(M[0]) if M else (ncols or 0)
    R, piv = rref(M, n)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, c in zip(R, piv):
            v[c] = -row[f]
        basis.append(v)
    return basis


def solve_rational(A: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None):
    """Particular solution of ``A x = b`` over Q (free variables zero), or None."""
    n = len(A[0]) if A else (ncols or 0)
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(R, piv):
        x[c] = row[n]
    return x


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]

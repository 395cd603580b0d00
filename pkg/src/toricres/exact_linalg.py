"""Exact integer and rational linear algebra.

Matrices are plain lists of rows.  Integer matrices hold Python ``int``;
rational work uses ``fractions.Fraction``.  Nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Sequence

from .errors import InputError

IntVector = tuple[int, ...]
IntMatrix = list[list[int]]


def as_int_matrix(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Copy ``M`` into a list-of-lists of ints, checking shape and entry types."""
    rows = [list(r) for r in M]
    if not rows or not rows[0]:
        raise InputError("empty-matrix", "matrix needs at least one row and column")
    width = len(rows[0])
    for r in rows:
        if len(r) != width:
            raise InputError("ragged-matrix", "rows have different lengths")
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                raise InputError("non-integer-entry", f"entry {x!r} is not an integer")
    return rows


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vecmat(v: Sequence, M: Sequence[Sequence]) -> list:
    """Row vector times matrix."""
    return [sum(v[i] * M[i][j] for i in range(len(M))) for j in range(len(M[0]))]


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries."""
    g = vector_gcd(v)
    if g == 0:
        raise InputError("zero-vector", "the zero vector has no primitive form")
    return tuple(x // g for x in v)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------- determinants

def det(M: Sequence[Sequence]) -> int | Fraction:
    """Exact determinant; fraction-free Bareiss when every entry is an int."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise InputError("not-square", "determinant needs a square matrix")
    if all(isinstance(x, int) for r in M for x in r):
        return _bareiss_det([list(r) for r in M])
    A = [[Fraction(x) for x in r] for r in M]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        piv = A[c][c]
        result *= piv
        for i in range(c + 1, n):
            f = A[i][c] / piv
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return sign * result


def _bareiss_det(A: IntMatrix) -> int:
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rank(M: Sequence[Sequence]) -> int:
    """Rank over Q."""
    if all(isinstance(x, int) for r in M for x in r):
        return _int_rank([list(r) for r in M])
    A = [[Fraction(x) for x in r] for r in M]
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, rows):
            f = A[i][c] / A[r][c]
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r


def _int_rank(A: IntMatrix) -> int:
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        a = A[r][c]
        for i in range(r + 1, rows):
            b = A[i][c]
            if b:
                row = [a * x - b * y for x, y in zip(A[i], A[r])]
                g = vector_gcd(row)
                A[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == rows:
            break
    return r


def rational_inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over Q by Gauss-Jordan elimination."""
    n = len(M)
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(M)]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            raise InputError("singular-matrix", "matrix is not invertible")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [r[n:] for r in A]


def adjugate(M: Sequence[Sequence[int]]) -> tuple[int, IntMatrix]:
    """(det M, adj M) with M·adj = det·I, all integers; M must be invertible."""
    n = len(M)
    d = det(M)
    if d == 0:
        raise InputError("singular-matrix", "matrix is not invertible")
    if n == 1:
        return d, [[1]]
    if n <= 8:
        adj = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
                adj[i][j] = (-1) ** (i + j) * _bareiss_det(minor)
        return d, adj
    inv = rational_inverse(M)
    return d, [[int(x * d) for x in r] for r in inv]


def unimodular_inverse(M: Sequence[Sequence[int]]) -> IntMatrix:
    inv = rational_inverse(M)
    if any(x.denominator != 1 for r in inv for x in r):
        raise InputError("not-unimodular", "matrix has no integer inverse")
    return [[int(x) for x in r] for r in inv]


# ---------------------------------------------------------------- normal forms

def hermite_with_transform(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form H together with unimodular U, U·M = H.

    Pivots are positive, entries above a pivot lie in [0, pivot) and zero
    rows sit at the bottom, so H keeps the shape of M.
    """
    A = as_int_matrix(M)
    m, n = len(A), len(A[0])
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = A[i][c]
            if b == 0:
                continue
            a = A[r][c]
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            A[r], A[i] = ([s * x + t * y for x, y in zip(A[r], A[i])],
                          [-bg * x + ag * y for x, y in zip(A[r], A[i])])
            U[r], U[i] = ([s * x + t * y for x, y in zip(U[r], U[i])],
                          [-bg * x + ag * y for x, y in zip(U[r], U[i])])
        piv = A[r][c]
        if piv == 0:
            continue
        if piv < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
            piv = -piv
        for i in range(r):
            q = A[i][c] // piv
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def hermite_normal_form(M: Sequence[Sequence[int]]) -> IntMatrix:
    return hermite_with_transform(M)[0]


def lattice_basis(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Nonzero rows of the HNF: the canonical basis of the row lattice."""
    return [r for r in hermite_normal_form(M) if any(r)]


@dataclass(frozen=True)
class SmithForm:
    """``left · M · right == diagonal`` with ``left``, ``right`` unimodular."""

    diagonal: tuple[tuple[int, ...], ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def invariants(self) -> tuple[int, ...]:
        k = min(len(self.diagonal), len(self.diagonal[0]))
        return tuple(self.diagonal[i][i] for i in range(k) if self.diagonal[i][i])


def smith_normal_form(M: Sequence[Sequence[int]]) -> SmithForm:
    A = as_int_matrix(M)
    m, n = len(A), len(A[0])
    L = identity(m)
    R = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        L[dst] = [x + q * y for x, y in zip(L[dst], L[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in R:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                q = A[i][t] // piv
                if q:
                    add_row(i, t, -q)
                clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    add_col(j, t, -q)
                clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m)
                        for j in range(t + 1, n) if A[i][j] % piv), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]
    return SmithForm(tuple(map(tuple, A)), tuple(map(tuple, L)), tuple(map(tuple, R)))


def normal_forms(M: Sequence[Sequence[int]]) -> tuple[IntMatrix, SmithForm]:
    """Hermite and Smith forms of a nonzero integer matrix."""
    A = as_int_matrix(M)
    if not any(x for r in A for x in r):
        raise InputError("zero-matrix", "normal forms of the zero matrix are not defined")
    return hermite_normal_form(A), smith_normal_form(A)


# ---------------------------------------------------------------- lattices

def saturate_lattice(M: Sequence[Sequence[int]]) -> IntMatrix:
    """HNF basis of {x in Z^N : k·x lies in the row lattice for some k > 0}."""
    A = as_int_matrix(M)
    if not any(x for r in A for x in r):
        raise InputError("zero-matrix", "cannot saturate the zero lattice")
    snf = smith_normal_form(A)
    r = len(snf.invariants)
    rinv = unimodular_inverse(snf.right)
    return lattice_basis(rinv[:r])


def is_saturated(M: Sequence[Sequence[int]]) -> bool:
    """Z^N / lattice is torsion-free, i.e. every Smith invariant is 1."""
    return all(d == 1 for d in smith_normal_form(M).invariants)


def left_kernel(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Integer basis of {x : x·M = 0}; empty list when the rows are independent."""
    H, U = hermite_with_transform(M)
    return [U[i] for i, row in enumerate(H) if not any(row)]


def right_kernel(M: Sequence[Sequence[int]]) -> IntMatrix:
    """Integer basis of {y : M·y = 0}."""
    return left_kernel(transpose(as_int_matrix(M)))


def in_lattice(v: Sequence[int], M: Sequence[Sequence[int]]) -> bool:
    """Membership of an integer vector in the row lattice of M."""
    basis = lattice_basis(M) if any(x for r in M for x in r) else []
    w = list(v)
    for row in basis:
        c = next(j for j, x in enumerate(row) if x)
        if w[c] % row[c]:
            return False
        q = w[c] // row[c]
        w = [x - q * y for x, y in zip(w, row)]
    return not any(w)


# ---------------------------------------------------------------- minors

def minors_gcd(M: Sequence[Sequence[int]], k: int) -> int:
    """gcd of all k×k minors, read off the Smith invariants d_1···d_k."""
    A = as_int_matrix(M)
    if not 1 <= k <= min(len(A), len(A[0])):
        raise InputError("minor-size-out-of-range", f"k={k} for a {len(A)}x{len(A[0])} matrix")
    if comb(len(A), k) * comb(len(A[0]), k) <= 16:
        g = 0
        for rows in combinations(range(len(A)), k):
            for cols in combinations(range(len(A[0])), k):
                g = gcd(g, _bareiss_det([[A[i][j] for j in cols] for i in rows]))
        return g
    inv = smith_normal_form(A).invariants
    if len(inv) < k:
        return 0
    out = 1
    for d in inv[:k]:
        out *= d
    return out


def compound_matrix(M: Sequence[Sequence[int]], k: int) -> IntMatrix:
    """k-th compound: k×k minors indexed by lexicographically ordered subsets."""
    A = as_int_matrix(M)
    n = len(A)
    if any(len(r) != n for r in A):
        raise InputError("not-square", "compound matrix needs a square matrix")
    if not 1 <= k <= n:
        raise InputError("minor-size-out-of-range", f"k={k} for N={n}")
    subsets = list(combinations(range(n), k))
    return [[det([[A[i][j] for j in cols] for i in rows]) for cols in subsets]
            for rows in subsets]

"""Exact linear algebra over Q and Q(sqrt d).

Matrices are plain nested sequences whose entries are ``int``, ``Fraction`` or
:class:`~quadlat.qfield.QElem`. Entries are lifted to a common exact type
before any arithmetic; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DimensionError, NotPositiveDefiniteError, NotSymmetricError
from .qfield import QElem


def _field_d(M):
    for row in M:
        for v in row:
            if isinstance(v, QElem):
                return v.d
    return None


def lift_matrix(M):
    """Copy M into a list of lists with entries Fraction, or QElem if any entry is irrational."""
    d = _field_d(M)
    if d is None:
        return [[Fraction(v) for v in row] for row in M]
    return [[v if isinstance(v, QElem) else QElem.from_rational(v, d) for v in row] for row in M]


def embedding_signs(v):
    """Signs of v under the two real embeddings (equal for rationals)."""
    if isinstance(v, QElem):
        return v.signs()
    s = (v > 0) - (v < 0)
    return s, s


def _check_square(M):
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionError("matrix is not square")
    return n


def is_symmetric(M):
    n = _check_square(M)
    return all(M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n))


def det_exact(M):
    """Determinant by Gaussian elimination over the field of the entries."""
    n = _check_square(M)
    if n == 0:
        return Fraction(1)
    A = lift_matrix(M)
    det = A[0][0] * 0 + 1
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return det * 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        pv = A[col][col]
        det = det * pv
        for r in range(col + 1, n):
            if A[r][col]:
                f = A[r][col] / pv
                row_r, row_c = A[r], A[col]
                for c in range(col + 1, n):
                    row_r[c] = row_r[c] - f * row_c[c]
    return det


def rank_exact(M):
    """Rank of a (possibly rectangular) matrix over Q or Q(sqrt d)."""
    A = lift_matrix(M)
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if A[r][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pv = A[rank][col]
        for r in range(rows):
            if r != rank and A[r][col]:
                f = A[r][col] / pv
                for c in range(col, cols):
                    A[r][c] = A[r][c] - f * A[rank][c]
        rank += 1
        if rank == rows:
            break
    return rank


def _require_symmetric(M):
    if not is_symmetric(M):
        raise NotSymmetricError("matrix is not symmetric")


def ldl_pivots(M):
    """Pivots of symmetric elimination without row exchange; None once a pivot vanishes."""
    A = lift_matrix(M)
    n = len(A)
    pivots = []
    for i in range(n):
        pv = A[i][i]
        if not pv:
            return pivots, False
        pivots.append(pv)
        for r in range(i + 1, n):
            if A[r][i]:
                f = A[r][i] / pv
                for c in range(i + 1, n):
                    A[r][c] = A[r][c] - f * A[i][c]
    return pivots, True


def is_pd_exact(M):
    """Sylvester's criterion under both embeddings (total positivity of leading minors)."""
    _require_symmetric(M)
    pivots, complete = ldl_pivots(M)
    if not complete:
        return False
    return all(embedding_signs(p) == (1, 1) for p in pivots)


def _psd_by_elimination(M, emb):
    A = lift_matrix(M)
    active = list(range(len(A)))
    while active:
        chosen = None
        for i in active:
            s = embedding_signs(A[i][i])[emb]
            if s < 0:
                return False
            if s > 0 and chosen is None:
                chosen = i
        if chosen is None:
            return all(not A[i][j] for i in active for j in active)
        active.remove(chosen)
        pv = A[chosen][chosen]
        for r in active:
            if A[r][chosen]:
                f = A[r][chosen] / pv
                for c in active:
                    A[r][c] = A[r][c] - f * A[chosen][c]
    return True


_PSD_MINOR_LIMIT = 8


def is_psd_exact(M):
    """Positive semi-definite under both embeddings.

    Up to 8x8 every principal minor is checked; larger matrices use
    diagonal-pivoted symmetric elimination per embedding.
    """
    _require_symmetric(M)
    n = len(M)
    if n > _PSD_MINOR_LIMIT:
        return _psd_by_elimination(M, 0) and _psd_by_elimination(M, 1)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            minor = det_exact([[M[i][j] for j in idx] for i in idx])
            if min(embedding_signs(minor)) < 0:
                return False
    return True


@dataclass(frozen=True)
class RatCholesky:
    """M = U^T diag(pivots) U with U unit upper triangular."""

    pivots: tuple
    U: tuple

    def reconstruct(self):
        n = len(self.pivots)
        U, p = self.U, self.pivots
        return [
            [sum(U[k][i] * p[k] * U[k][j] for k in range(min(i, j) + 1)) for j in range(n)]
            for i in range(n)
        ]


def rational_cholesky(M):
    _require_symmetric(M)
    A = [[Fraction(v) for v in row] for row in M]
    n = len(A)
    U = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    p = []
    for i in range(n):
        pi = A[i][i] - sum(p[k] * U[k][i] * U[k][i] for k in range(i))
        if pi <= 0:
            raise NotPositiveDefiniteError(f"pivot {i} is {pi}")
        p.append(pi)
        for j in range(i + 1, n):
            U[i][j] = (A[i][j] - sum(p[k] * U[k][i] * U[k][j] for k in range(i))) / pi
    return RatCholesky(tuple(p), tuple(tuple(r) for r in U))

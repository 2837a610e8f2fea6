"""Free quadratic O_F-lattices given by a Gram matrix."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import (
    ClassicalityError,
    DimensionError,
    NotIntegralError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)
from .exact import is_pd_exact, is_symmetric
from .qfield import FieldCtx, OInt, QElem


@dataclass(frozen=True)
class LatticeDesc:
    """Free O_F-lattice O_F^n with Gram matrix ``gram`` (entries are QElem)."""

    field: FieldCtx
    gram: tuple
    classic: bool = True

    @property
    def rank(self):
        return len(self.gram)

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.gram)
        return f"LatticeDesc(d={self.field.d}, classic={self.classic}, gram=[{rows}])"


def _check_entries(F, gram, classic):
    n = len(gram)
    for i in range(n):
        for j in range(n):
            v = gram[i][j]
            if classic or i == j:
                ok = F.is_integral(v)
            else:
                ok = F.is_integral(2 * v)
            if not ok:
                kind = "classic" if classic else "non-classic"
                raise ClassicalityError(f"entry ({i}, {j}) = {v} not allowed in a {kind} lattice")


def make_lattice(field, gram, classic=True):
    """Validate and build a lattice.

    Entries may be ints, Fractions, OInts or QElems. Classic lattices need
    every entry in O_F; non-classic ones allow off-diagonal entries in
    (1/2)O_F with the diagonal in O_F.
    """
    n = len(gram)
    if n < 1 or any(len(row) != n for row in gram):
        raise DimensionError("gram must be a non-empty square matrix")
    G = tuple(tuple(field.lift(v) for v in row) for row in gram)
    if not is_symmetric(G):
        raise NotSymmetricError("gram matrix is not symmetric")
    _check_entries(field, G, classic)
    if not is_pd_exact(G):
        raise NotPositiveDefiniteError("gram matrix is not positive definite in both embeddings")
    return LatticeDesc(field, G, bool(classic))


def diagonal_lattice(field, diag, classic=True):
    n = len(diag)
    return make_lattice(field, [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], classic)


def identity_lattice(field, n):
    return diagonal_lattice(field, [1] * n)


def _check_vec(L, x):
    if len(x) != L.rank:
        raise DimensionError(f"vector of length {len(x)} in a lattice of rank {L.rank}")


def as_vector(L, x):
    """Normalise coordinates (ints or OInts) to a tuple of OInts."""
    F = L.field
    return tuple(c if isinstance(c, OInt) else F(c) for c in x)


def bilinear(L, x, y):
    """B(x, y) = x^T G y as a QElem."""
    _check_vec(L, x)
    _check_vec(L, y)
    F = L.field
    xs = [F.lift(c) for c in x]
    ys = [F.lift(c) for c in y]
    total = F.qelem(0)
    for i, xi in enumerate(xs):
        if not xi:
            continue
        row = L.gram[i]
        acc = F.qelem(0)
        for j, yj in enumerate(ys):
            if yj:
                acc = acc + row[j] * yj
        total = total + xi * acc
    return total


def quad_value(L, x):
    """Q(x) = B(x, x); always lies in O_F, returned as an OInt."""
    return L.field.to_oint(bilinear(L, x, x))


def gram_of_vectors(L, vs):
    m = len(vs)
    G = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            G[i][j] = G[j][i] = bilinear(L, vs[i], vs[j])
    return G


def coords(x):
    """Integer coordinate vector (u_1, w_1, ..., u_n, w_n) of x with x_i = u_i + w_i*omega."""
    out = []
    for c in x:
        out.extend((c.a, c.b) if isinstance(c, OInt) else (c, 0))
    return out


def from_coords(F, y):
    return tuple(OInt(y[2 * i], y[2 * i + 1], F) for i in range(len(y) // 2))


def trace_form(L, weight=None):
    """Rational Gram matrix of y -> tr(weight * Q(x)) on Z^{2n}.

    ``weight`` defaults to 1; any totally positive element of F keeps the form
    positive definite. Coordinates are interleaved as in :func:`coords`.
    """
    F = L.field
    lam = F.qelem(1) if weight is None else F.lift(weight)
    basis = (F.qelem(1), F.omega)
    prods = [[lam * basis[a] * basis[b] for b in range(2)] for a in range(2)]
    n = L.rank
    T = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            g = L.gram[i][j]
            for a in range(2):
                for b in range(2):
                    T[2 * i + a][2 * j + b] = (g * prods[a][b]).trace()
    return T


class SpanCheck(NamedTuple):
    integral: bool
    pair: Optional[tuple] = None
    value: Optional[QElem] = None

    def __bool__(self):
        return self.integral


def integral_span_check(L, vs):
    """Check that B(v_i, v_j) is a rational integer for every pair.

    Each Q(v) must be a rational integer. Returns a truthy :class:`SpanCheck`
    or one carrying the first offending index pair and its value.
    """
    for i, v in enumerate(vs):
        q = quad_value(L, v)
        if not q.is_rational():
            raise NotIntegralError(f"Q(v_{i}) = {q} is not a rational integer")
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            b = bilinear(L, vs[i], vs[j])
            if b.q != 0 or b.den != 1:
                return SpanCheck(False, (i, j), b)
    return SpanCheck(True)

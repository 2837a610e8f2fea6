"""Representation of totally positive integers by O_F-lattices.

Every ``x in O_F^n`` is encoded by integer coordinates ``y in Z^{2n}``. If
``Q(x) = t`` then ``tr(Q(x)/t) = 2``, so all solutions lie on the boundary of
the ellipsoid of the positive definite rational form ``y -> tr(Q(x)/t)``.
Integer points of that ellipsoid are enumerated with nested intervals taken
from an exact rational Cholesky factorisation; interval endpoints are floors
of ``rational + sqrt(rational)`` computed by integer square roots.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import isqrt

import numpy as np

from .errors import NotTotallyPositiveError
from .exact import rational_cholesky
from .lattice import as_vector, from_coords, quad_value, trace_form
from .qfield import OInt


def floor_add_sqrt(r, s):
    """floor(r + sqrt(s)) for rationals r and s >= 0."""
    r, s = Fraction(r), Fraction(s)
    rn, rd = r.numerator, r.denominator
    sn, sd = s.numerator, s.denominator
    return (rn * sd + isqrt(rd * rd * sn * sd)) // (rd * sd)


def _interval(center, radius_sq):
    """Integers v with (v + center)^2 <= radius_sq."""
    lo = -floor_add_sqrt(center, radius_sq)
    hi = floor_add_sqrt(-center, radius_sq)
    return lo, hi


def short_vectors(T, bound, *, exact=False, first_range=None):
    """Yield ``(y, bound - T(y))`` for all integer y with y^T T y <= bound.

    Vectors come out in lexicographic order of y. With ``exact=True`` only
    points with y^T T y == bound are produced. ``first_range`` clamps y[0]
    to an inclusive range (used to split the search tree between workers).
    """
    m = len(T)
    bound = Fraction(bound)
    if bound < 0:
        return
    if m == 0:
        if not exact or bound == 0:
            yield (), bound
        return
    # reverse the variables so that y[0] is the outermost level
    Tr = [[T[m - 1 - i][m - 1 - j] for j in range(m)] for i in range(m)]
    chol = rational_cholesky(Tr)
    p, U = chol.pivots, chol.U
    yp = [0] * m

    def level(i, budget):
        c = sum((U[i][j] * yp[j] for j in range(i + 1, m) if yp[j]), Fraction(0))
        lo, hi = _interval(c, budget / p[i])
        if i == m - 1 and first_range is not None:
            lo, hi = max(lo, first_range[0]), min(hi, first_range[1])
        for v in range(lo, hi + 1):
            rest = budget - p[i] * (v + c) ** 2
            yp[i] = v
            if i == 0:
                if not exact or rest == 0:
                    yield tuple(reversed(yp)), rest
            else:
                yield from level(i - 1, rest)
        yp[i] = 0

    yield from level(m - 1, bound)


def outer_range(T, bound):
    """Inclusive range of the outermost coordinate y[0] over the ellipsoid."""
    m = len(T)
    Tr = [[T[m - 1 - i][m - 1 - j] for j in range(m)] for i in range(m)]
    p = rational_cholesky(Tr).pivots
    return _interval(Fraction(0), Fraction(bound) / p[m - 1])


def _target(L, t):
    F = L.field
    if not isinstance(t, OInt):
        t = F.to_oint(F.lift(t))
    if t and not t.is_totally_positive():
        raise NotTotallyPositiveError(f"target {t} is not totally positive")
    return t


def _candidates(L, t):
    # tr(Q(x)/t) == 2 for every solution
    T = trace_form(L, t.to_qelem().inverse())
    F = L.field
    for y, _ in short_vectors(T, 2, exact=True):
        x = from_coords(F, y)
        if quad_value(L, x) == t:
            yield x


def represents(L, t):
    """A vector x with Q(x) = t (lexicographically first in coordinates), or None."""
    t = _target(L, t)
    if not t:
        return tuple(L.field(0) for _ in range(L.rank))
    return next(_candidates(L, t), None)


def enumerate_representations(L, t, cap):
    """Up to ``cap`` representations of t in lexicographic coordinate order."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    t = _target(L, t)
    if not t:
        return [tuple(L.field(0) for _ in range(L.rank))]
    out = []
    for x in _candidates(L, t):
        out.append(x)
        if len(out) >= cap:
            break
    return out


def _values_in_range(L, tr_max, lo, hi):
    T = trace_form(L)
    F = L.field
    found = set()
    for y, _ in short_vectors(T, tr_max, first_range=(lo, hi)):
        if any(y):
            found.add(quad_value(L, from_coords(F, y)))
    return found


def represented_values(L, tr_max, workers=1):
    """Set of all nonzero Q(x) with tr(Q(x)) <= tr_max (as OInts)."""
    if tr_max < 1:
        return set()
    lo, hi = outer_range(trace_form(L), tr_max)
    workers = max(1, min(workers, hi - lo + 1))
    if workers == 1:
        return _values_in_range(L, tr_max, lo, hi)
    edges = np.linspace(lo, hi + 1, workers + 1).round().astype(int).tolist()
    chunks = [(a, b - 1) for a, b in zip(edges, edges[1:]) if b > a]
    found = set()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_values_in_range, L, tr_max, a, b) for a, b in chunks]
        for fut in futures:
            found |= fut.result()
    return found


def default_workers():
    env = os.environ.get("QUADLAT_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def naive_represents(L, t, box):
    """Brute-force oracle: scan every x with all coordinates |u_i|, |w_i| <= box.

    Returns the lexicographically first witness in the box or None.
    Independent of the ellipsoid enumeration; meant for tests.
    """
    F = L.field
    if not isinstance(t, OInt):
        t = F.to_oint(F.lift(t))
    if not t:
        return tuple(F(0) for _ in range(L.rank))
    if not t.is_totally_positive():
        return None
    n = L.rank
    e, c = F._e, F._c
    g = [[tuple(int(2 * v) for v in F.omega_coords(L.gram[i][j])) for j in range(n)] for i in range(n)]
    side = np.arange(-box, box + 1, dtype=np.int64)
    rest = np.stack(np.meshgrid(*([side] * (2 * n - 1)), indexing="ij"), -1).reshape(-1, 2 * n - 1)
    for first in side:
        y = np.concatenate([np.full((len(rest), 1), first, dtype=np.int64), rest], axis=1)
        u, w = y[:, 0::2], y[:, 1::2]
        A = np.zeros(len(y), dtype=np.int64)
        B = np.zeros(len(y), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                g0, g1 = g[i][j]
                if not (g0 or g1):
                    continue
                P = u[:, i] * u[:, j] + c * w[:, i] * w[:, j]
                R = u[:, i] * w[:, j] + w[:, i] * u[:, j] + e * w[:, i] * w[:, j]
                mult = 1 if i == j else 2
                A += mult * (P * g0 + c * R * g1)
                B += mult * (P * g1 + R * g0 + e * R * g1)
        hit = np.nonzero((A == 2 * t.a) & (B == 2 * t.b))[0]
        if len(hit):
            return from_coords(F, [int(v) for v in y[hit[0]]])
    return None


def verify_witness(L, x, t):
    return quad_value(L, as_vector(L, x)) == t

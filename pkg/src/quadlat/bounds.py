"""Determinant perturbation bounds, trace lower bounds and the discriminant thresholds.

For a k x k matrix A and a (k+s) x (k+s) matrix B with all |entries| <= N,

    det(blockdiag(A, 0) * x + B) = sum_l d_l x^l,   d_k = det(A) * det(B_4),

and each |d_l| (l < k) is bounded by the number of contributing permutation
terms times N^(k+s). Everything here is evaluated exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from .errors import BoundDomainError
from .exact import det_exact, embedding_signs
from .qfield import FieldCtx


def _real_sign(v):
    return embedding_signs(v)[0]


def _abs_le(v, N):
    return _real_sign(v - N) <= 0 and _real_sign(v + N) >= 0


def lemma22_coefficient(k, s, l, N):
    """C(k, l) * k! (k+s-l)! / (k-l)! * N^(k+s): bound on |d_l|."""
    if not (0 <= l <= k) or s < 0 or k < 1:
        raise BoundDomainError(f"need 0 <= l <= k, k >= 1, s >= 0; got k={k}, s={s}, l={l}")
    if N < 1:
        raise BoundDomainError("N must be at least 1")
    return comb(k, l) * (factorial(k) * factorial(k + s - l) // factorial(k - l)) * N ** (k + s)


def lemma22_outer_coefficient(k, s, N):
    if N <= 1:
        raise BoundDomainError("N must exceed 1")
    return factorial(k) * factorial(k + s) * N ** (k + s)


@dataclass(frozen=True)
class BoundChain:
    k: int
    s: int
    N: object
    x: object
    det_value: object
    leading: object  # det(A) * det(B_4) * x^k
    outer_lower: object
    inner_lower: object
    inner_upper: object
    outer_upper: object

    def violations(self):
        bad = []
        if not _real_sign(self.inner_lower - self.outer_lower) > 0:
            bad.append("outer_lower < inner_lower")
        if not _real_sign(self.det_value - self.inner_lower) >= 0:
            bad.append("inner_lower <= det")
        if not _real_sign(self.inner_upper - self.det_value) >= 0:
            bad.append("det <= inner_upper")
        if not _real_sign(self.outer_upper - self.inner_upper) > 0:
            bad.append("inner_upper < outer_upper")
        return bad

    @property
    def holds(self):
        return not self.violations()


def block_matrix(A, B, x):
    k, n = len(A), len(B)
    return [[(A[i][j] * x if i < k and j < k else 0) + B[i][j] for j in range(n)] for i in range(n)]


def lemma22_chain(A, B, x, N):
    """Evaluate det(blockdiag(A, 0) x + B) and the four bounds around it.

    ``x`` may be a positive rational or a QElem (e.g. sqrt(Delta)); sign
    comparisons use the identity embedding.
    """
    k, n = len(A), len(B)
    s = n - k
    if k < 1 or s < 0:
        raise BoundDomainError("A must be k x k with 1 <= k <= size of B")
    if N <= 1:
        raise BoundDomainError("N must exceed 1")
    if _real_sign(x) <= 0:
        raise BoundDomainError("x must be positive")
    for name, M in (("A", A), ("B", B)):
        for row in M:
            for v in row:
                if not _abs_le(v, N):
                    raise BoundDomainError(f"entry {v} of {name} exceeds N = {N}")
    det_value = det_exact(block_matrix(A, B, x))
    det_b4 = det_exact([row[k:] for row in B[k:]]) if s else 1
    leading = det_exact(A) * det_b4 * x**k
    inner = sum((lemma22_coefficient(k, s, l, N) * x**l for l in range(k)), 0 * x)
    outer = lemma22_outer_coefficient(k, s, N) * sum((x**l for l in range(k)), 0 * x)
    return BoundChain(
        k=k,
        s=s,
        N=N,
        x=x,
        det_value=det_value,
        leading=leading,
        outer_lower=leading - outer,
        inner_lower=leading - inner,
        inner_upper=leading + inner,
        outer_upper=leading + outer,
    )


@dataclass
class FuzzReport:
    iters: int
    seed: int
    passed: int = 0
    violations: list = field(default_factory=list)
    transcript: list = field(default_factory=list)


def random_chain_instance(rng, max_k=4, max_s=4, x_max=10**16):
    k = rng.randint(1, max_k)
    s = rng.randint(0, max_s)
    N = rng.randint(2, 15)
    A = [[rng.randint(-N, N) for _ in range(k)] for _ in range(k)]
    B = [[rng.randint(-N, N) for _ in range(k + s)] for _ in range(k + s)]
    den = rng.randint(1, 10**6)
    num = rng.randint(1, x_max * den)
    return A, B, Fraction(num, den), N


def fuzz_lemma22(iters, seed):
    """Seeded property run of :func:`lemma22_chain`; deterministic transcript."""
    rng = random.Random(seed)
    report = FuzzReport(iters, seed)
    for it in range(iters):
        A, B, x, N = random_chain_instance(rng)
        chain = lemma22_chain(A, B, x, N)
        bad = chain.violations()
        report.transcript.append(
            f"{it} k={chain.k} s={chain.s} N={N} x={x} det={chain.det_value} {'ok' if not bad else 'FAIL'}"
        )
        if bad:
            report.violations.append({"iter": it, "A": A, "B": B, "x": str(x), "N": N, "failed": bad})
        else:
            report.passed += 1
    return report


@dataclass
class TraceBoundReport:
    d: int
    delta: int
    box: int
    checked: int = 0
    violations: list = field(default_factory=list)
    min_trace_totally_positive: object = None
    min_trace_square: object = None


def trace_bound_check(F: FieldCtx, box):
    """Scan a + b*omega, |a|, |b| <= box, b != 0 for the two trace lower bounds.

    Checks tr(alpha)^2 >= Delta for totally positive alpha and
    2 tr(beta^2) >= Delta for all beta, with integer comparisons only.
    """
    delta = F.delta
    e, c = F._e, F._c
    rep = TraceBoundReport(F.d, delta, box)
    min_tp = min_sq = None
    for b in range(-box, box + 1):
        if b == 0:
            continue
        for a in range(-box, box + 1):
            rep.checked += 1
            x = F(a, b)
            tr = 2 * a + e * b
            if x.is_totally_positive():
                if tr <= 0 or tr * tr < delta:
                    rep.violations.append(("trace", a, b, tr))
                if min_tp is None or tr < min_tp:
                    min_tp = tr
            # x^2 = a^2 + c b^2 + (2ab + e b^2) omega
            sq_tr = 2 * (a * a + c * b * b) + e * (2 * a * b + e * b * b)
            if 2 * sq_tr < delta:
                rep.violations.append(("square", a, b, sq_tr))
            if min_sq is None or sq_tr < min_sq:
                min_sq = sq_tr
    rep.min_trace_totally_positive = min_tp
    rep.min_trace_square = min_sq
    return rep


@dataclass(frozen=True)
class ThresholdReport:
    N: int
    coefficients: tuple  # c_0 .. c_3
    threshold: int
    minimal_threshold: int
    certified: bool


def quartic(coeffs, x):
    c0, c1, c2, c3 = coeffs
    return x**4 - c3 * x**3 - c2 * x**2 - c1 * x - c0


def threshold_polynomial(N):
    """Quartic x^4 - sum c_l x^l from the k = s = 4 bound and its positivity threshold.

    ``certified`` is the exact check that the quartic is positive for every
    x >= c_3 + 5: there x^4 >= (c_3 + 5) x^3, and 5x^3 - c_2x^2 - c_1x - c_0
    is positive at c_3 + 5 and stays so because dividing by x^3 gives an
    increasing function.
    """
    if N <= 1:
        raise BoundDomainError("N must exceed 1")
    coeffs = tuple(lemma22_coefficient(4, 4, l, N) for l in range(4))
    c0, c1, c2, c3 = coeffs
    X0 = c3 + 5
    certified = quartic(coeffs, X0) > 0 and 5 * X0**3 - c2 * X0**2 - c1 * X0 - c0 > 0
    # single positive root (one sign change); smallest integer where quartic > 0
    lo, hi = 1, X0
    while lo < hi:
        mid = (lo + hi) // 2
        if quartic(coeffs, mid) > 0:
            hi = mid
        else:
            lo = mid + 1
    return ThresholdReport(N, coeffs, X0, lo, certified)

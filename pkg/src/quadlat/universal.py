"""Universality checks: finite criteria over Z, truncated checks over O_F, escalation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Optional

from .errors import EscalationError, IntegralityFailure, MissingNormError
from .exact import det_exact, rational_cholesky
from .lattice import diagonal_lattice, gram_of_vectors, integral_span_check
from .qfield import OInt, enumerate_totally_positive
from .represent import represented_values, represents, short_vectors


@dataclass(frozen=True)
class CriterionSet:
    label: str
    targets: tuple


CLASSIC15 = CriterionSet("classic15", tuple(range(1, 16)))
NONCLASSIC290 = CriterionSet("nonclassic290", tuple(range(1, 291)))
CRITERIA = {c.label: c for c in (CLASSIC15, NONCLASSIC290)}


def z_values(G, bound):
    """All values 0 < x^T G x <= bound of a positive definite rational form."""
    G = [[Fraction(v) for v in row] for row in G]
    rational_cholesky(G)  # raises on indefinite input
    bound = Fraction(bound)
    return {bound - rest for y, rest in short_vectors(G, bound) if any(y)}


def z_first_failure(G, crit=CLASSIC15):
    """Least target of ``crit`` not represented by the Z-lattice with Gram G, or None."""
    values = z_values(G, max(crit.targets))
    return next((n for n in crit.targets if n not in values), None)


def z_universal(G, crit=CLASSIC15):
    return z_first_failure(G, crit) is None


@dataclass(frozen=True)
class UniversalityReport:
    tr_max: int
    passed: bool
    checked: int
    failure: Optional[OInt] = None


def universal_up_to(L, tr_max, workers=1):
    """Check that L represents every totally positive integer of trace <= tr_max.

    Reports the least (by trace, then omega-coordinate) unrepresented element.
    """
    targets = enumerate_totally_positive(L.field, tr_max)
    if not targets:
        return UniversalityReport(tr_max, True, 0)
    values = represented_values(L, tr_max, workers)
    for i, t in enumerate(targets):
        if t not in values:
            return UniversalityReport(tr_max, False, i + 1, t)
    return UniversalityReport(tr_max, True, len(targets))


@dataclass(frozen=True)
class EscalationResult:
    vectors: dict  # n -> vector with Q(v_n) = n
    indices: tuple  # four norms whose vectors are independent
    gram: tuple  # 4x4 integer Gram of the chosen vectors
    full_gram: tuple  # 15x15 integer Gram of v_1..v_15

    @property
    def quadruple(self):
        return [self.vectors[n] for n in self.indices]


def _int_gram(G):
    return tuple(tuple(int(v.to_fraction()) for v in row) for row in G)


def _minor(G, idx):
    return [[G[i][j] for j in idx] for i in idx]


def independent_quadruple(G, labels):
    """Four labels whose principal minor of the PSD integer matrix G has det > 0.

    Greedy rank extension first, exhaustive 4-subsets as fallback.
    """
    chosen = []
    for i in range(len(G)):
        trial = chosen + [i]
        if det_exact(_minor(G, trial)) > 0:
            chosen = trial
            if len(chosen) == 4:
                return tuple(labels[i] for i in chosen)
    for idx in combinations(range(len(G)), 4):
        if det_exact(_minor(G, idx)) > 0:
            return tuple(labels[i] for i in idx)
    return None


def escalate_independent_quadruple(L, crit=CLASSIC15):
    """Pick v_n with Q(v_n) = n for every target n and extract four independent vectors.

    For Delta_d > 4 * 15^2 the Gram of the v_n is automatically integral; for
    smaller discriminants integrality is checked and a failure raised.
    """
    F = L.field
    vectors = {}
    for n in crit.targets:
        v = represents(L, F(n))
        if v is None:
            raise MissingNormError(n)
        vectors[n] = v
    vs = [vectors[n] for n in crit.targets]
    span = integral_span_check(L, vs)
    if not span:
        i, j = span.pair
        raise IntegralityFailure((crit.targets[i], crit.targets[j]), span.value)
    full = _int_gram(gram_of_vectors(L, vs))
    idx = independent_quadruple(full, list(crit.targets))
    if idx is None:
        raise EscalationError(
            "no four linearly independent vectors among the v_n", "independence", len(full)
        )
    pos = [crit.targets.index(n) for n in idx]
    return EscalationResult(vectors, idx, tuple(map(tuple, _minor(full, pos))), full)


def search_candidates(F, rank, coeff_bound, tr_max):
    """Diagonal classic lattices <a_1, ..., a_rank> passing universal_up_to(., tr_max).

    a_i ranges over totally positive integers of trace <= coeff_bound; each
    multiset of coefficients is tried once (non-decreasing in enumeration order).
    """
    if rank > 4 or coeff_bound > 10:
        raise ValueError("search is limited to rank <= 4 and coeff_bound <= 10")
    coeffs = enumerate_totally_positive(F, coeff_bound)
    found = []
    for diag in combinations_with_replacement(coeffs, rank):
        L = diagonal_lattice(F, list(diag))
        if universal_up_to(L, tr_max).passed:
            found.append(L)
    return found

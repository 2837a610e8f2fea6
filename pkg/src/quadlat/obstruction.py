"""Rank obstruction pipeline: from a universal lattice to eight independent vectors.

Stages, in order:

1. escalation -- vectors of norms 1..15 and four of them with integral,
   positive definite Gram ``B``;
2. k-vectors -- v_k with Q(v_k) = m_k + k*omega for k = 1..15;
3. decomposition -- their Gram written as sqrt(Delta)*a + eps;
4. quadruple -- four k's whose integer block ``A`` of ``a`` is positive definite;
5. cross terms -- ``C = (B(v_i, w_j))`` must be rational integers in [-4, 3];
6. certificate -- exact determinant of the assembled 8x8 Gram.

Below the discriminant threshold the pipeline still runs; its outputs are
labelled rather than asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .bounds import lemma22_chain, threshold_polynomial
from .errors import BlockError, EscalationError, HypothesisViolation
from .exact import det_exact, embedding_signs, is_pd_exact, is_symmetric
from .lattice import gram_of_vectors
from .qfield import FieldCtx, QElem, omega_floor
from .represent import represents
from .universal import CLASSIC15, escalate_independent_quadruple, z_values

C_RANGE = (-4, 3)
ENTRY_BOUND = 15
KS = tuple(range(1, 16))
# Delta_d > (4 * 4! * 4! * 15^4)^2 for the k-vector lemma
KVECTOR_DELTA_ROOT = 4 * 24 * 24 * 15**4


def theorem_threshold(crit=CLASSIC15):
    return threshold_polynomial(max(crit.targets)).threshold


def above_threshold(F, crit=CLASSIC15):
    """Delta_d > threshold^2, i.e. sqrt(Delta_d) > threshold."""
    return F.delta > theorem_threshold(crit) ** 2


def kvector_hypothesis(F):
    return F.delta > KVECTOR_DELTA_ROOT**2


def kvector_target(k, F):
    return F(omega_floor(k, F), k)


@dataclass
class KVectors:
    vectors: dict  # k -> vector
    missing: list

    @property
    def complete(self):
        return not self.missing


def extract_kvectors(L, ks=KS):
    """For each k find v_k with Q(v_k) = m_k + k*omega; unrepresented k are listed."""
    F = L.field
    vectors, missing = {}, []
    for k in ks:
        v = represents(L, kvector_target(k, F))
        if v is None:
            missing.append(k)
        else:
            vectors[k] = v
    return KVectors(vectors, missing)


@dataclass(frozen=True)
class GramDecomposition:
    """G = sqrt(Delta) * a + eps, with eps_ij the conjugate of G_ij."""

    a: tuple
    eps: tuple
    field: FieldCtx

    def reconstruct(self):
        s = self.field.sqrt_delta
        return [[s * aij + e for aij, e in zip(ar, er)] for ar, er in zip(self.a, self.eps)]

    def eps_violations(self):
        """Positions whose remainder does not satisfy |eps| < 1."""
        return [
            (i, j)
            for i, row in enumerate(self.eps)
            for j, e in enumerate(row)
            if not (-1 < e < 1)
        ]

    def canonical_violations(self, labels=KS):
        """Deviations from the canonical k-vector pattern: a_kk = k, a_ij^2 <= i*j, |eps| < 1."""
        out = []
        for i, ki in enumerate(labels):
            if self.a[i][i] != ki:
                out.append(("diagonal", ki, ki, self.a[i][i]))
            for j, kj in enumerate(labels):
                if self.a[i][j] ** 2 > ki * kj:
                    out.append(("a_bound", ki, kj, self.a[i][j]))
        out.extend(("eps_bound", labels[i], labels[j], self.eps[i][j]) for i, j in self.eps_violations())
        return out


def decompose_gram(G, F):
    """Split each entry g = u + w*omega as w*sqrt(Delta) + conj(g).

    This uses sqrt(Delta_d) = omega - conj(omega) in both congruence branches,
    so a_ij is the omega-coordinate of G_ij (half-integral for non-classic
    entries) and eps_ij is exact.
    """
    a, eps = [], []
    for row in G:
        ar, er = [], []
        for g in row:
            g = F.lift(g)
            w = F.omega_coords(g)[1]
            ar.append(int(w) if w.denominator == 1 else w)
            er.append(g.conj())
        a.append(tuple(ar))
        eps.append(tuple(er))
    return GramDecomposition(tuple(a), tuple(eps), F)


def _minor(M, idx):
    return [[M[i][j] for j in idx] for i in idx]


def _det_positive(M):
    return det_exact(M) > 0


def select_quadruple(dec, labels=KS):
    """Four labels whose integer block of ``a`` has det >= 1.

    Follows the construction 1, 2, then 3 or 6 by a_12 in {+-1} or {0}, then
    a norm h <= 15 missed by the resulting ternary form; otherwise searches all
    4-subsets. Small principal blocks of ``a`` must be positive semi-definite.
    """
    a = dec.a
    n = len(a)
    for size in range(1, min(4, n) + 1):
        for idx in combinations(range(n), size):
            if det_exact(_minor(a, idx)) < 0:
                raise HypothesisViolation(
                    f"principal block of a at {[labels[i] for i in idx]} has negative determinant",
                    "quadruple",
                    [labels[i] for i in idx],
                )
    pos = {k: i for i, k in enumerate(labels)}
    fast = _fast_quadruple(a, pos)
    if fast is not None:
        return fast
    for idx in combinations(range(n), 4):
        if _det_positive(_minor(a, idx)):
            return tuple(labels[i] for i in idx)
    raise HypothesisViolation("no 4x4 positive definite block of a", "quadruple")


def _fast_quadruple(a, pos):
    if not all(k in pos for k in (1, 2, 3, 6)):
        return None
    a12 = a[pos[1]][pos[2]]
    if a12 in (1, -1):
        third = 3
    elif a12 == 0:
        third = 6
    else:
        return None
    first3 = [1, 2, third]
    idx3 = [pos[k] for k in first3]
    tern = _minor(a, idx3)
    if not (is_symmetric(tern) and is_pd_exact(tern)):
        return None
    values = z_values(tern, 15)
    for h in range(1, 16):
        if h in values or h not in pos or h in first3:
            continue
        quad = first3 + [h]
        if _det_positive(_minor(a, [pos[k] for k in quad])):
            return tuple(quad)
    return None


@dataclass
class CijReport:
    C: list  # 4x4 QElem values B(v_i, w_j)
    integral: bool
    in_range: bool
    above_threshold: bool
    observed: tuple  # (min, max) of integral entries, first embedding
    diagnostics: list = field(default_factory=list)

    @property
    def ok(self):
        return self.integral and self.in_range

    def int_matrix(self):
        return [[int(v.to_fraction()) for v in row] for row in self.C]


def cij_scan(L, quad_vectors, int_vectors, crit=CLASSIC15):
    """Cross Gram entries between the two quadruples.

    Above the threshold every entry must be a rational integer in [-4, 3]
    (otherwise :class:`HypothesisViolation`); below it, observations are
    reported. A non-integral entry has nonzero omega-coordinate, so its first
    embedding is at least sqrt(Delta)/2 - 1 in absolute value; the exact sign
    of Q(v_i)Q(w_j) - c_ij^2 is recorded for each such entry.
    """
    F = L.field
    above = above_threshold(F, crit)
    C = [[None] * len(int_vectors) for _ in quad_vectors]
    integral = in_range = True
    lo = hi = None
    diagnostics = []
    for i, v in enumerate(quad_vectors):
        for j, w in enumerate(int_vectors):
            G = gram_of_vectors(L, [v, w])
            c = G[0][1]
            C[i][j] = c
            if c.q == 0 and c.den == 1:
                lo = c.p if lo is None else min(lo, c.p)
                hi = c.p if hi is None else max(hi, c.p)
                if not (C_RANGE[0] <= c.p <= C_RANGE[1]):
                    in_range = False
                    diagnostics.append({"entry": [i, j], "issue": "out of range", "value": c.p})
            else:
                integral = False
                margin = G[0][0] * G[1][1] - c * c
                diagnostics.append(
                    {
                        "entry": [i, j],
                        "issue": "not a rational integer",
                        "cauchy_schwarz_signs": list(margin.signs()),
                        "large_real_part": abs(c) >= F.sqrt_delta / 2 - 1,
                    }
                )
    report = CijReport(C, integral, in_range, above, (lo, hi), diagnostics)
    if above and not report.ok:
        raise HypothesisViolation("cross terms violate c_ij in Z cap [-4, 3]", "cij", diagnostics)
    return report


def _within(v, bound):
    return -bound <= v <= bound


@dataclass(frozen=True)
class EightBlock:
    """Blocks of sqrt(Delta) * [[A, 0], [0, 0]] + [[D, C], [C^T, B]]."""

    A: tuple
    B: tuple
    C: tuple
    D: tuple
    field: Optional[FieldCtx] = None

    def __post_init__(self):
        for name in ("A", "B", "C", "D"):
            M = getattr(self, name)
            if len(M) != 4 or any(len(r) != 4 for r in M):
                raise BlockError(f"{name} must be 4x4")
            object.__setattr__(self, name, tuple(tuple(r) for r in M))
        for name in ("A", "B"):
            M = getattr(self, name)
            if not all(isinstance(v, int) for r in M for v in r):
                raise BlockError(f"{name} must be an integer matrix")
            if not all(_within(v, ENTRY_BOUND) for r in M for v in r):
                raise BlockError(f"{name} has an entry outside [-15, 15]")
            if not is_symmetric(M) or not is_pd_exact(M):
                raise BlockError(f"{name} must be symmetric positive definite")
        for r in self.C:
            for v in r:
                if not isinstance(v, int):
                    raise BlockError(f"C entry {v} is not a rational integer")
                if not C_RANGE[0] <= v <= C_RANGE[1]:
                    raise BlockError(f"C entry {v} outside [-4, 3]")
        if not is_symmetric(self.D):
            raise BlockError("D must be symmetric")
        for r in self.D:
            for v in r:
                if isinstance(v, QElem) and (self.field is None or v.d != self.field.d) and v.q:
                    raise BlockError("irrational D entry needs a matching field")
                if not _within(v, ENTRY_BOUND):
                    raise BlockError(f"D entry {v} outside [-15, 15]")

    def lower(self):
        """The matrix [[D, C], [C^T, B]]."""
        rows = [list(self.D[i]) + list(self.C[i]) for i in range(4)]
        rows += [[self.C[j][i] for j in range(4)] + list(self.B[i]) for i in range(4)]
        return rows


def default_scale(blk):
    if blk.field is None:
        raise BlockError("block has no field; pass x explicitly")
    return blk.field.sqrt_delta


def assemble(blk, x=None):
    x = default_scale(blk) if x is None else x
    low = blk.lower()
    return [[(blk.A[i][j] * x if i < 4 and j < 4 else 0) + low[i][j] for j in range(8)] for i in range(8)]


@dataclass(frozen=True)
class RankCertificate:
    determinant: object
    verdict: str  # "independent" | "inconclusive"
    totally_positive: bool
    chain: object
    lower_bound_positive: bool
    diagnostics: tuple = ()


def assemble_and_certify(blk, x=None):
    """Exact determinant of the assembled Gram together with the k = s = 4 bound chain."""
    x = default_scale(blk) if x is None else x
    det = det_exact(assemble(blk, x))
    chain = lemma22_chain([list(r) for r in blk.A], blk.lower(), x, ENTRY_BOUND)
    s1, s2 = embedding_signs(det)
    diagnostics = tuple(chain.violations())
    return RankCertificate(
        determinant=det,
        verdict="independent" if s1 > 0 else "inconclusive",
        totally_positive=(s1, s2) == (1, 1),
        chain=chain,
        lower_bound_positive=embedding_signs(chain.inner_lower)[0] > 0,
        diagnostics=diagnostics,
    )


@dataclass
class Stage:
    name: str
    ok: bool
    data: dict = field(default_factory=dict)


@dataclass
class CertificateReport:
    field: FieldCtx
    stages: list
    verdict: str  # "certificate" | "hypothesis-failure" | "inconclusive"
    below_threshold: bool
    failed_stage: Optional[str] = None
    datum: object = None
    block: Optional[EightBlock] = None
    certificate: Optional[RankCertificate] = None
    vectors: list = field(default_factory=list)

    @property
    def label(self):
        if self.below_threshold:
            return "below-threshold: certificate not implied by the rank-7 obstruction"
        return "above-threshold"


def certify_no_rank7(L, crit=CLASSIC15):
    """Run every stage on L and report a certificate of rank >= 8 or the failing stage."""
    F = L.field
    below = not above_threshold(F, crit)
    stages = []

    def fail(name, datum, **data):
        stages.append(Stage(name, False, dict(data, datum=datum)))
        return CertificateReport(F, stages, "hypothesis-failure", below, name, datum)

    try:
        esc = escalate_independent_quadruple(L, crit)
    except EscalationError as e:
        return fail("escalation", e.datum, reason=str(e), step=e.stage)
    stages.append(Stage("escalation", True, {"indices": list(esc.indices), "gram": esc.gram}))

    kv = extract_kvectors(L)
    if not kv.complete:
        return fail("kvectors", kv.missing, reason=f"targets m_k + k*omega unrepresented for k in {kv.missing}")
    stages.append(Stage("kvectors", True, {"count": len(kv.vectors)}))

    kvecs = [kv.vectors[k] for k in KS]
    G = gram_of_vectors(L, kvecs)
    dec = decompose_gram(G, F)
    roundtrip = dec.reconstruct() == G
    canon = dec.canonical_violations()
    if not roundtrip:
        return fail("decomposition", None, reason="reconstruction mismatch")
    if canon and kvector_hypothesis(F):
        return fail("decomposition", canon, reason="canonical bounds violated above the k-vector hypothesis")
    stages.append(Stage("decomposition", True, {"roundtrip": roundtrip, "canonical_violations": canon}))

    try:
        quad = select_quadruple(dec)
    except HypothesisViolation as e:
        return fail("quadruple", e.datum, reason=str(e))
    stages.append(Stage("quadruple", True, {"indices": list(quad)}))

    quad_vecs = [kv.vectors[k] for k in quad]
    int_vecs = esc.quadruple
    try:
        cij = cij_scan(L, quad_vecs, int_vecs, crit)
    except HypothesisViolation as e:
        return fail("cij", e.datum, reason=str(e))
    if not cij.ok:
        return fail("cij", cij.diagnostics, reason="cross terms outside Z cap [-4, 3]", observed=cij.observed)
    stages.append(Stage("cij", True, {"observed": cij.observed}))

    pos = [k - 1 for k in quad]
    A = [[dec.a[i][j] for j in pos] for i in pos]
    D = [[dec.eps[i][j] for j in pos] for i in pos]
    try:
        blk = EightBlock(A, [list(r) for r in esc.gram], cij.int_matrix(), D, F)
    except BlockError as e:
        return fail("assembly", None, reason=str(e))
    eight = quad_vecs + int_vecs
    if assemble(blk) != gram_of_vectors(L, eight):
        return fail("assembly", None, reason="assembled matrix differs from the Gram of the eight vectors")
    cert = assemble_and_certify(blk)
    stages.append(Stage("certificate", cert.verdict == "independent", {"verdict": cert.verdict}))
    verdict = "certificate" if cert.verdict == "independent" else "inconclusive"
    return CertificateReport(
        F, stages, verdict, below, None if verdict == "certificate" else "certificate",
        None, blk, cert, eight,
    )


def verify_block_determinant(blk, determinant):
    """Recompute the determinant from stored blocks and compare."""
    return det_exact(assemble(blk)) == determinant

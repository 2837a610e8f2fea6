import random
from math import comb

import pytest

from oracles import sum_of_three_squares
from quadlat.errors import EscalationError, MissingNormError, NotPositiveDefiniteError
from quadlat.exact import det_exact, is_psd_exact
from quadlat.lattice import diagonal_lattice, identity_lattice, quad_value
from quadlat.qfield import enumerate_totally_positive, make_field
from quadlat.universal import (
    CLASSIC15,
    CRITERIA,
    NONCLASSIC290,
    escalate_independent_quadruple,
    independent_quadruple,
    search_candidates,
    universal_up_to,
    z_first_failure,
    z_universal,
    z_values,
)

F5 = make_field(5)


def eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def diag(*vals):
    n = len(vals)
    return [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]


def test_criterion_sets():
    assert CLASSIC15.targets == tuple(range(1, 16))
    assert NONCLASSIC290.targets == tuple(range(1, 291))
    assert set(CRITERIA) == {"classic15", "nonclassic290"}


def test_z_universal_examples():
    assert z_universal(eye(4))
    assert not z_universal(eye(3))
    assert z_first_failure(eye(3)) == 7
    assert z_first_failure(eye(1)) == 2


def test_three_squares_against_search():
    vals = z_values(eye(3), 60)
    for n in range(1, 61):
        assert (n in vals) == sum_of_three_squares(n)


def test_z_universal_known_forms():
    # Ramanujan's diagonal quaternaries <1,1,1,k> are universal for k <= 7
    for k in range(1, 8):
        assert z_universal(diag(1, 1, 1, k))
    assert not z_universal(diag(1, 1, 1, 8))
    assert z_first_failure(diag(1, 1, 1, 8)) == 7
    # represents every positive integer except 15
    assert z_first_failure(diag(1, 2, 5, 5)) == 15
    vals = z_values(diag(1, 2, 5, 5), 200)
    assert 15 not in vals and set(range(16, 201)) <= vals
    assert z_universal(eye(4), NONCLASSIC290)
    assert z_first_failure(diag(1, 2, 5, 10), NONCLASSIC290) is None
    with pytest.raises(NotPositiveDefiniteError):
        z_values([[1, 2], [2, 1]], 5)


def test_z_universal_monotone_under_orthogonal_sum():
    rng = random.Random(4)
    for _ in range(30):
        vals = [rng.randint(1, 8) for _ in range(rng.randint(1, 4))]
        extra = rng.randint(1, 15)
        if z_universal(diag(*vals)):
            assert z_universal(diag(*vals, extra))
        f = z_first_failure(diag(*vals))
        g = z_first_failure(diag(*vals, extra))
        assert g is None or (f is not None and g >= f)


def test_universal_up_to_examples():
    rep = universal_up_to(identity_lattice(F5, 1), 4)
    assert not rep.passed and rep.failure == F5(2)
    rep = universal_up_to(identity_lattice(F5, 3), 0)
    assert rep.passed and rep.checked == 0
    rep = universal_up_to(identity_lattice(F5, 3), 12)
    assert rep.passed and rep.checked == len(enumerate_totally_positive(F5, 12))


def test_universal_up_to_monotone():
    F = make_field(2)
    for L in (identity_lattice(F, 2), identity_lattice(F, 3), diagonal_lattice(F, [1, 1, F(2, 1)])):
        verdicts = [universal_up_to(L, t).passed for t in range(0, 13)]
        # a pass at t1 implies a pass at every t0 <= t1
        first_fail = next((i for i, v in enumerate(verdicts) if not v), len(verdicts))
        assert all(verdicts[:first_fail]) and not any(verdicts[first_fail:])


def test_universal_up_to_failure_is_least():
    F = make_field(2)
    L = identity_lattice(F, 3)
    rep = universal_up_to(L, 12)
    assert not rep.passed
    order = enumerate_totally_positive(F, 12)
    assert order[rep.checked - 1] == rep.failure
    from quadlat.represent import represents

    for t in order[: rep.checked - 1]:
        assert represents(L, t) is not None
    assert represents(L, rep.failure) is None


def test_escalation_large_d():
    F = make_field(1000003)
    res = escalate_independent_quadruple(identity_lattice(F, 8))
    assert len(res.indices) == 4
    assert det_exact(res.gram) > 0
    assert is_psd_exact(res.full_gram)
    for n, v in res.vectors.items():
        assert quad_value(identity_lattice(F, 8), v) == n
    assert len(res.quadruple) == 4


def test_escalation_small_d_fails():
    with pytest.raises(EscalationError):
        escalate_independent_quadruple(identity_lattice(F5, 3))
    with pytest.raises(MissingNormError) as info:
        escalate_independent_quadruple(identity_lattice(make_field(1000003), 1))
    assert info.value.datum == 2


def test_independent_quadruple_fallback():
    # the first four rows span only rank 2, so the greedy pass must skip ahead
    G = [
        [1, 1, 1, 1, 0, 0],
        [1, 1, 1, 1, 0, 0],
        [1, 1, 2, 2, 0, 0],
        [1, 1, 2, 2, 0, 0],
        [0, 0, 0, 0, 3, 0],
        [0, 0, 0, 0, 0, 4],
    ]
    idx = independent_quadruple(G, list("abcdef"))
    assert idx == ("a", "c", "e", "f")
    assert independent_quadruple([[1, 1], [1, 1]], ["x", "y"]) is None


def test_search_candidates_examples():
    found = search_candidates(F5, 3, 2, 10)
    assert any(L.gram == identity_lattice(F5, 3).gram for L in found)
    assert search_candidates(make_field(7), 1, 6, 6) == []
    coeffs = enumerate_totally_positive(F5, 4)
    vacuous = search_candidates(F5, 2, 4, 0)
    assert len(vacuous) == comb(len(coeffs) + 1, 2)
    with pytest.raises(ValueError):
        search_candidates(F5, 5, 2, 4)

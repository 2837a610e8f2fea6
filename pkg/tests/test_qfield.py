from fractions import Fraction
from math import isqrt

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadlat.errors import InvalidFieldError
from quadlat.qfield import (
    OInt,
    QElem,
    conj,
    enumerate_totally_positive,
    floor_sqrt_mul,
    is_squarefree,
    is_totally_positive,
    make_field,
    norm,
    omega_floor,
    sign_p_q_sqrt,
    trace,
)

FIELDS = [2, 3, 5, 6, 7, 13, 17, 1000003]

mpmath.mp.dps = 60


def embeddings(d, a, b):
    """High-precision real embeddings of a + b*omega, computed independently."""
    r = mpmath.sqrt(d)
    if d % 4 == 1:
        w, wb = (1 + r) / 2, (1 - r) / 2
    else:
        w, wb = r, -r
    return a + b * w, a + b * wb


def test_make_field_examples():
    F = make_field(5)
    assert F.delta == 5 and F.branch == "1"
    assert F.omega == QElem(1, 1, 2, d=5)
    F = make_field(2)
    assert F.delta == 8 and F.branch == "2,3"
    assert F.omega == QElem(0, 1, d=2)
    with pytest.raises(InvalidFieldError):
        make_field(12)


@pytest.mark.parametrize("d", [0, 1, -3, 4, 9, 12, 18, 50])
def test_make_field_rejects(d):
    with pytest.raises(InvalidFieldError):
        make_field(d)


def test_squarefree_large():
    assert is_squarefree(3401222400000107)
    assert not is_squarefree(1000003**2 * 2)
    assert is_squarefree(2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23 * 29 * 31 * 37)


def test_conj_trace_norm_examples():
    F5, F2 = make_field(5), make_field(2)
    assert trace(F5(1, 1)) == 3
    x = F2(3, 1)
    assert conj(x) == F2(3, -1)
    assert trace(x) == 6 and norm(x) == 7
    assert norm(F5(0, 1)) == -1


def test_totally_positive_examples():
    F = make_field(5)
    assert is_totally_positive(F(1))
    assert not is_totally_positive(F(0, 1))
    assert is_totally_positive(F(2, 3))
    assert not is_totally_positive(F(0))


def test_omega_floor_examples():
    assert omega_floor(3, make_field(5)) == 2
    assert omega_floor(1, make_field(2)) == 2
    assert omega_floor(1, make_field(5)) == 1


@pytest.mark.parametrize("d", FIELDS)
def test_omega_floor_range(d):
    F = make_field(d)
    for k in range(1, 1001):
        m = omega_floor(k, F)
        t = F(m, k)
        c = t.conj()
        assert c.to_qelem().sign() >= 0 and (c - 1).to_qelem().sign() < 0
        assert t.is_totally_positive()


@pytest.mark.parametrize("d", [2, 5, 13, 3401222400000107])
def test_omega_floor_against_mpmath(d):
    F = make_field(d)
    for k in (1, 2, 3, 7, 15, 999):
        _, kwb = embeddings(d, 0, k)
        assert omega_floor(k, F) == -int(mpmath.floor(kwb))


def test_enumerate_totally_positive_examples():
    assert enumerate_totally_positive(make_field(5), 2) == [make_field(5)(1)]
    assert enumerate_totally_positive(make_field(2), 2) == [make_field(2)(1)]
    for d in FIELDS:
        assert enumerate_totally_positive(make_field(d), 0) == []


@pytest.mark.parametrize("d", [2, 3, 5, 6, 7, 13])
@pytest.mark.parametrize("tr_max", [1, 4, 9])
def test_enumerate_totally_positive_naive(d, tr_max):
    F = make_field(d)
    box = tr_max * (1 + isqrt(d) + 1)
    naive = set()
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            x = F(a, b)
            if x.is_totally_positive() and x.trace() <= tr_max:
                naive.add(x)
    got = enumerate_totally_positive(F, tr_max)
    assert set(got) == naive and len(got) == len(naive)
    assert [x.trace() for x in got] == sorted(x.trace() for x in got)


@given(
    st.integers(-10**30, 10**30),
    st.integers(-10**30, 10**30),
    st.sampled_from(FIELDS),
)
def test_sign_matches_high_precision(p, q, d):
    v = mpmath.mpf(p) + mpmath.mpf(q) * mpmath.sqrt(d)
    s = sign_p_q_sqrt(p, q, d)
    if abs(v) > mpmath.mpf(10) ** -20:
        assert s == (1 if v > 0 else -1)
    if p == 0 and q == 0:
        assert s == 0


@given(st.integers(-10**40, 10**40), st.sampled_from(FIELDS))
def test_floor_sqrt_mul(q, d):
    f = floor_sqrt_mul(q, d)
    assert sign_p_q_sqrt(-f, q, d) >= 0
    assert sign_p_q_sqrt(-(f + 1), q, d) < 0


ints = st.integers(-10**6, 10**6)


@given(ints, ints, st.sampled_from(FIELDS))
def test_conj_involution_and_invariants(a, b, d):
    F = make_field(d)
    x = F(a, b)
    assert conj(conj(x)) == x
    assert trace(conj(x)) == trace(x)
    assert norm(conj(x)) == norm(x)
    assert x * conj(x) == F(norm(x))
    assert x + conj(x) == F(trace(x))


@given(ints, ints, ints, ints, st.sampled_from(FIELDS))
def test_oint_matches_qelem(a, b, c, e, d):
    F = make_field(d)
    x, y = F(a, b), F(c, e)
    assert (x * y).to_qelem() == x.to_qelem() * y.to_qelem()
    assert (x + y).to_qelem() == x.to_qelem() + y.to_qelem()
    assert norm(x * y) == norm(x) * norm(y)


@given(ints, ints, st.sampled_from(FIELDS))
def test_totally_positive_against_embeddings(a, b, d):
    e1, e2 = embeddings(d, a, b)
    if min(abs(e1), abs(e2)) > mpmath.mpf(10) ** -30:
        assert is_totally_positive(make_field(d)(a, b)) == (e1 > 0 and e2 > 0)


@given(
    st.fractions(max_denominator=50).filter(lambda f: abs(f) < 10**6),
    st.fractions(max_denominator=50).filter(lambda f: abs(f) < 10**6),
    st.sampled_from(FIELDS),
)
@settings(max_examples=200)
def test_qelem_field_axioms(r, s, d):
    x = QElem(r.numerator * s.denominator, s.numerator * r.denominator, r.denominator * s.denominator, d=d)
    if x:
        assert x * x.inverse() == 1
        assert (x / x) == 1
    assert x - x == 0
    assert x.trace() == 2 * r
    assert x.norm() == r * r - s * s * d
    assert x.floor() <= x < x.floor() + 1


def test_omega_coords_and_integrality():
    F = make_field(5)
    half = F.qelem(1, 1, 2)
    assert F.omega_coords(half) == (Fraction(0), Fraction(1))
    assert F.is_integral(half)
    assert not F.is_integral(half / 2)
    assert F.sqrt_delta == F.omega - F.omega_conj
    F2 = make_field(2)
    assert F2.sqrt_delta == 2 * F2.omega
    assert F2.sqrt_delta * F2.sqrt_delta == 8


def test_oint_rational_embedding():
    F = make_field(13)
    assert OInt(4, 0, F) == 4
    assert F(4).is_rational() and not F(4, 1).is_rational()

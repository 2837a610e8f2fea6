import random
from fractions import Fraction
from math import factorial

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quadlat.bounds import (
    block_matrix,
    fuzz_lemma22,
    lemma22_chain,
    lemma22_coefficient,
    lemma22_outer_coefficient,
    quartic,
    random_chain_instance,
    threshold_polynomial,
    trace_bound_check,
)
from quadlat.errors import BoundDomainError
from quadlat.qfield import make_field

X = sympy.Symbol("x")


def sympy_coefficients(A, B):
    k = len(A)
    M = sympy.Matrix(block_matrix(A, B, X))
    poly = sympy.Poly(M.det(), X)
    return [poly.coeff_monomial(X**l) for l in range(k + 1)]


def test_coefficient_examples():
    assert lemma22_coefficient(4, 4, 3, 1) == 11520
    assert lemma22_coefficient(4, 4, 3, 7) == 11520 * 7**8
    assert lemma22_coefficient(4, 4, 0, 1) == 40320 == factorial(8)
    assert lemma22_coefficient(1, 1, 1, 2) == 4


def test_coefficient_domain():
    with pytest.raises(BoundDomainError):
        lemma22_coefficient(2, 1, 3, 2)
    with pytest.raises(BoundDomainError):
        lemma22_coefficient(0, 1, 0, 2)
    with pytest.raises(BoundDomainError):
        lemma22_coefficient(2, 1, 0, 0)
    with pytest.raises(BoundDomainError):
        lemma22_outer_coefficient(2, 1, 1)


@pytest.mark.parametrize("k", range(1, 5))
@pytest.mark.parametrize("s", range(0, 5))
def test_coefficient_below_outer(k, s):
    N = 3
    outer = lemma22_outer_coefficient(k, s, N)
    for l in range(k):
        c = lemma22_coefficient(k, s, l, N)
        if (k, l) == (1, 0) or (k, s, l) == (2, 0, 1):
            assert c == outer
        else:
            assert c < outer


def test_coefficient_equals_outer_cases():
    for s in range(5):
        assert lemma22_coefficient(1, s, 0, 2) == lemma22_outer_coefficient(1, s, 2)
    assert lemma22_coefficient(2, 0, 1, 2) == lemma22_outer_coefficient(2, 0, 2)


def test_coefficients_bound_sympy_expansion():
    rng = random.Random(8)
    for _ in range(60):
        k, s, N = rng.randint(1, 3), rng.randint(0, 3), rng.randint(2, 5)
        A = [[rng.randint(-N, N) for _ in range(k)] for _ in range(k)]
        B = [[rng.randint(-N, N) for _ in range(k + s)] for _ in range(k + s)]
        coeffs = sympy_coefficients(A, B)
        detA = sympy.Matrix(A).det()
        detB4 = sympy.Matrix([r[k:] for r in B[k:]]).det() if s else 1
        assert coeffs[k] == detA * detB4
        for l in range(k):
            assert abs(coeffs[l]) <= lemma22_coefficient(k, s, l, N)


def test_chain_identity_block():
    for k in range(2, 5):
        A = [[int(i == j) for j in range(k)] for i in range(k)]
        B = [[0] * k for _ in range(k)]
        chain = lemma22_chain(A, B, Fraction(7), 2)
        assert chain.det_value == 7**k == chain.leading
        assert chain.holds


def test_chain_hand_example():
    chain = lemma22_chain([[2]], [[0, 1], [1, 1]], Fraction(10), 2)
    assert chain.det_value == 19
    assert chain.inner_lower <= chain.det_value <= chain.inner_upper
    # with k = 1 the two coefficient families coincide, so the strict outer
    # comparisons degenerate to equalities
    assert chain.outer_lower == chain.inner_lower
    assert chain.violations() == ["outer_lower < inner_lower", "inner_upper < outer_upper"]


def test_chain_random_four_four():
    rng = random.Random(44)
    N = 15
    A = [[rng.randint(-N, N) for _ in range(4)] for _ in range(4)]
    B = [[rng.randint(-N, N) for _ in range(8)] for _ in range(8)]
    chain = lemma22_chain(A, B, Fraction(10**6), N)
    assert chain.holds
    assert chain.det_value == sympy.Matrix(block_matrix(A, B, 10**6)).det()


def test_chain_symbolic_x():
    F = make_field(13)
    x = F.sqrt_delta
    assert x * x == 13
    A = [[1, 2], [2, 5]]
    B = [[1, 0, 1], [0, 2, 0], [1, 0, 3]]
    chain = lemma22_chain(A, B, x, 5)
    assert chain.holds
    v = chain.det_value
    as_sympy = sympy.Rational(v.p, v.den) + sympy.Rational(v.q, v.den) * sympy.sqrt(13)
    assert sympy.expand(sympy.Matrix(block_matrix(A, B, sympy.sqrt(13))).det() - as_sympy) == 0


def test_chain_domain_errors():
    with pytest.raises(BoundDomainError):
        lemma22_chain([[3]], [[1]], Fraction(1), 2)
    with pytest.raises(BoundDomainError):
        lemma22_chain([[1]], [[1]], Fraction(0), 2)
    with pytest.raises(BoundDomainError):
        lemma22_chain([[1]], [[1]], Fraction(1), 1)
    with pytest.raises(BoundDomainError):
        lemma22_chain([[1, 0], [0, 1]], [[1]], Fraction(1), 2)


@given(st.integers(0, 2**32))
@settings(max_examples=150, deadline=None)
def test_inner_chain_always_holds(seed):
    A, B, x, N = random_chain_instance(random.Random(seed))
    chain = lemma22_chain(A, B, x, N)
    assert chain.inner_lower <= chain.det_value <= chain.inner_upper
    assert chain.holds == (chain.k >= 2)


def test_fuzz_deterministic():
    a, b = fuzz_lemma22(40, 7), fuzz_lemma22(40, 7)
    assert a.transcript == b.transcript and a.violations == b.violations
    assert fuzz_lemma22(40, 8).transcript != a.transcript
    empty = fuzz_lemma22(0, 1)
    assert empty.passed == 0 and not empty.violations


def test_fuzz_violations_are_degenerate_cases():
    rep = fuzz_lemma22(300, 0)
    for v in rep.violations:
        k = len(v["A"])
        assert k == 1
        assert "inner_lower <= det" not in v["failed"] and "det <= inner_upper" not in v["failed"]


def test_trace_bound_examples():
    rep = trace_bound_check(make_field(2), 50)
    assert not rep.violations and rep.min_trace_totally_positive == 4
    rep = trace_bound_check(make_field(5), 50)
    assert not rep.violations and rep.min_trace_square == 3
    rep = trace_bound_check(make_field(7), 0)
    assert rep.checked == 0 and not rep.violations


@pytest.mark.parametrize("d", [3, 13, 17])
def test_trace_bound_minima_independent(d):
    F = make_field(d)
    box = 12
    rep = trace_bound_check(F, box)
    tp, sq = [], []
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            if b == 0:
                continue
            q = F.qelem(a) + F.omega * b
            sq.append((q * q).trace())
            if q.is_totally_positive():
                tp.append(q.trace())
    assert rep.min_trace_square == min(sq)
    assert rep.min_trace_totally_positive == min(tp)
    assert rep.checked == (2 * box + 1) * 2 * box


def test_threshold_values():
    rep = threshold_polynomial(15)
    assert rep.threshold == 29524500000005
    assert rep.coefficients[3] == 29524500000000 == 11520 * 15**8
    assert rep.coefficients == (103335750000000, 206671500000000, 132860250000000, 29524500000000)
    rep = threshold_polynomial(290)
    assert rep.threshold == 576283867731072000000005
    assert rep.coefficients[3] == 11520 * 290**8
    with pytest.raises(BoundDomainError):
        threshold_polynomial(1)


@pytest.mark.parametrize("N", [2, 3, 15, 290])
def test_threshold_properties(N):
    rep = threshold_polynomial(N)
    c = rep.coefficients
    assert rep.threshold == c[3] + 5
    assert quartic(c, c[3]) < 0
    assert quartic(c, rep.threshold) > 0
    assert rep.certified
    assert rep.minimal_threshold <= rep.threshold
    assert quartic(c, rep.minimal_threshold) > 0 >= quartic(c, rep.minimal_threshold - 1)
    roots = [r for r in sympy.Poly(X**4 - sum(ci * X**i for i, ci in enumerate(c)), X).real_roots() if r > 0]
    assert len(roots) == 1
    assert rep.minimal_threshold == sympy.floor(roots[0]) + 1

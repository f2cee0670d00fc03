import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qplane.algebra import (DirectionForm, ExpVec, Inner, LieElement, Witt, bracket, degree,
                            grading_check, is_central_monomial, keys_in_box, lie_from_json, make_key,
                            pairing, parse_element, render_element, verify_jacobi, x, xd)
from qplane.errors import NonHomogeneousError, OrderMismatchError, ParseError
from qplane.scalars import Cyclotomic, zeta_pow


# -- independent oracle: basis elements as operators on Laurent monomials of C_q ----------

def _op(N, key):
    """Linear operator on monomials x^j, as j -> list of (coefficient, target)."""
    if isinstance(key, Inner):
        m = key.m
        # commutator with x^m using x^a x^b = q^(a2 b1) x^(a+b)
        return lambda j: [(zeta_pow(N, m[1] * j[0]) - zeta_pow(N, j[1] * m[0]), ExpVec(*m) + j)]
    n, s = key.n, key.s
    return lambda j: [(Cyclotomic.from_rational(N, j[s - 1]), ExpVec(*n) + j)]


def _apply(N, elem: LieElement, vec: dict) -> dict:
    out: dict = {}
    for key, c in elem.terms.items():
        f = _op(N, key)
        for j, cj in vec.items():
            for coef, t in f(j):
                out[t] = out.get(t, Cyclotomic.zero(N)) + c * coef * cj
    return {k: v for k, v in out.items() if v}


def _commutator(N, u, v, vec):
    a = _apply(N, u, _apply(N, v, vec))
    b = _apply(N, v, _apply(N, u, vec))
    keys = set(a) | set(b)
    zero = Cyclotomic.zero(N)
    return {k: a.get(k, zero) - b.get(k, zero) for k in keys if a.get(k, zero) != b.get(k, zero)}


@pytest.mark.parametrize("N", [2, 3])
def test_bracket_matches_operator_commutator(N):
    keys = keys_in_box(N, 1 if N == 3 else 2)
    probes = [ExpVec(a, b) for a in (-1, 0, 2) for b in (-1, 1, 3)]
    for a, b in itertools.product(keys, repeat=2):
        u, v = LieElement.basis(N, a), LieElement.basis(N, b)
        w = bracket(u, v)
        for j in probes:
            assert _commutator(N, u, v, {j: Cyclotomic.one(N)}) == _apply(N, w, {j: Cyclotomic.one(N)})


# -- spec examples --------------------------------------------------------------------------

def test_pairing_examples():
    assert pairing(DirectionForm.of(2, 1, 0), (3, 7)) == 3
    assert pairing(DirectionForm.of(2, 1, 1), (0, 0)) == 0
    assert pairing(DirectionForm.of(2, 2, -1), (1, 1)) == 1
    assert pairing(DirectionForm.orthogonal(2, (3, 5)), (3, 5)) == 0


def test_bracket_examples():
    assert bracket(x(2, 1, 0), x(2, 0, 1)) == x(2, 1, 1, 2)
    assert bracket(xd(2, 2, 0, 1), x(2, 1, 0)) == x(2, 3, 0)
    u = x(2, 1, 0) + xd(2, 0, 2, 2) * 3
    assert bracket(u, u).is_zero()


@pytest.mark.parametrize("N,m,expected", [(2, (2, 4), True), (2, (1, 2), False), (3, (3, -6), True),
                                          (4, (0, 0), True), (4, (2, 0), False)])
def test_is_central_examples(N, m, expected):
    assert is_central_monomial(N, m) is expected


def test_make_key_validation():
    with pytest.raises(ValueError):
        make_key(2, (2, 0))
    with pytest.raises(ValueError):
        make_key(2, (1, 0), 1)
    assert make_key(2, (2, 0), 1) == Witt(ExpVec(2, 0), 1)


@pytest.mark.parametrize("N,K", [(2, 2), (3, 1), (4, 1), (6, 1)])
def test_jacobi(N, K):
    rep = verify_jacobi(N, K)
    assert rep.ok, rep.violations[:3]
    assert rep.triples_checked == len(keys_in_box(N, K)) ** 3


def test_key_count_in_box():
    # N=2, K=2: 25 exponents, 9 even ones carry two Witt keys, 16 odd ones one Inner key
    assert len(keys_in_box(2, 2)) == 16 + 2 * 9


def test_grading_examples():
    assert grading_check(x(2, 1, 0), x(2, 0, 1))
    assert grading_check(x(2, 1, 0), x(2, 1, 0))
    assert grading_check(xd(2, 2, 0, 1), xd(2, 0, 2, 2))
    assert degree(bracket(xd(2, 2, 0, 2), xd(2, 0, 2, 2))) == (2, 2)
    with pytest.raises(NonHomogeneousError):
        grading_check(x(2, 1, 0) + x(2, 0, 1), x(2, 1, 1))


@pytest.mark.parametrize("N", [2, 3, 4, 6])
def test_center_characterization(N):
    for m in itertools.product(range(-N, N + 1), repeat=2):
        if is_central_monomial(N, m):
            continue
        u = x(N, *m)
        commutes = bracket(u, x(N, 1, 0)).is_zero() and bracket(u, x(N, 0, 1)).is_zero()
        assert not commutes


@pytest.mark.parametrize("N", [2, 3])
def test_degree_derivations(N):
    for m in itertools.product(range(-3, 4), repeat=2):
        if is_central_monomial(N, m):
            continue
        for s in (1, 2):
            assert bracket(xd(N, 0, 0, s), x(N, *m)) == x(N, *m) * m[s - 1]


@pytest.mark.parametrize("N", [2, 3, 4])
def test_inner_coefficient_vanishes_on_central_sums(N):
    for m in itertools.product(range(-N, N + 1), repeat=2):
        if is_central_monomial(N, m):
            continue
        n = ExpVec(-m[0] + N, -m[1] - N)
        assert zeta_pow(N, m[1] * n[0]) == zeta_pow(N, m[0] * n[1])
        assert bracket(x(N, *m), x(N, *n)).is_zero()


def test_order_mismatch():
    with pytest.raises(OrderMismatchError):
        bracket(x(2, 1, 0), x(3, 1, 0))


def test_parse_and_render():
    assert render_element(parse_element("x[1,0]", 2)) == "x[1,0]"
    e = parse_element("(1/2)*x[1,1] - x[2,0]d1 + 3*x[0,2]d2", 2)
    assert e == LieElement(2, {Inner(ExpVec(1, 1)): Fraction(1, 2), Witt(ExpVec(2, 0), 1): -1,
                               Witt(ExpVec(0, 2), 2): 3})
    assert parse_element(render_element(e), 2) == e
    assert parse_element("d1", 2) == xd(2, 0, 0, 1)
    assert render_element(bracket(x(2, 1, 0), x(2, 0, 1))) == "2*x[1,1]"


@pytest.mark.parametrize("text", ["x[1,", "x[2,0]", "x[1,0]d3", "2**x[1,0]", ""])
def test_parse_errors(text):
    with pytest.raises((ParseError, ValueError)):
        parse_element(text, 2)


@st.composite
def elements(draw, N=2):
    keys = keys_in_box(N, 2)
    chosen = draw(st.lists(st.sampled_from(keys), min_size=1, max_size=3, unique=True))
    coeffs = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4),
                           min_size=len(chosen), max_size=len(chosen)))
    return LieElement(N, dict(zip(chosen, coeffs)))


@settings(max_examples=60, deadline=None)
@given(elements(), elements())
def test_antisymmetry(u, v):
    assert bracket(u, v) == -bracket(v, u)


@settings(max_examples=40, deadline=None)
@given(elements())
def test_text_and_json_round_trip(u):
    assert parse_element(render_element(u), 2) == u
    assert lie_from_json(u.to_json(), 2) == u

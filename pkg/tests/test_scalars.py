from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from qplane.errors import CyclotomicZeroDivisionError, OrderMismatchError, ParseError
from qplane.scalars import (Cyclotomic, MultiPoly, cyc_arith, cyclotomic_polynomial, determinant,
                            euler_phi, parse_cyclotomic, poly_expand_equal, render, zeta_pow)

ORDERS = [2, 3, 4, 6]
z = sp.Symbol("z")


def sympy_reduce(expr, N):
    """Oracle: reduce a polynomial in z modulo the N-th cyclotomic polynomial with sympy."""
    r = sp.Poly(sp.rem(sp.expand(expr), sp.cyclotomic_poly(N, z), z), z)
    coeffs = list(reversed(r.all_coeffs()))
    coeffs += [0] * (euler_phi(N) - len(coeffs))
    return Cyclotomic(N, [Fraction(int(sp.Rational(c).p), int(sp.Rational(c).q)) for c in coeffs])


def as_sympy(x: Cyclotomic):
    return sum(sp.Rational(c.numerator, c.denominator) * z ** j for j, c in enumerate(x.coeffs))


fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def cyclotomics(draw, order=None):
    N = order or draw(st.sampled_from(ORDERS))
    return Cyclotomic(N, draw(st.lists(fractions, min_size=euler_phi(N), max_size=euler_phi(N))))


@st.composite
def triples(draw):
    N = draw(st.sampled_from(ORDERS))
    return tuple(draw(cyclotomics(N)) for _ in range(3))


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_polynomial_matches_sympy(n):
    expected = sp.Poly(sp.cyclotomic_poly(n, z), z).all_coeffs()[::-1]
    assert cyclotomic_polynomial(n) == tuple(int(c) for c in expected)


@pytest.mark.parametrize("N,k,expected", [(2, 1, -1), (2, 4, 1), (4, 2, -1), (5, 0, 1)])
def test_zeta_pow_examples(N, k, expected):
    assert zeta_pow(N, k) == expected


@pytest.mark.parametrize("N", ORDERS + [5, 8, 12])
def test_zeta_pow_against_division_oracle(N):
    for k in range(-N, 2 * N + 1):
        assert zeta_pow(N, k) == sympy_reduce(z ** (k % N), N)


@pytest.mark.parametrize("N", ORDERS)
def test_primitivity(N):
    assert zeta_pow(N, 1) ** N == 1
    assert all(zeta_pow(N, 1) ** k != 1 for k in range(1, N))


def test_cyc_arith_examples():
    one_plus = Cyclotomic(4, [1, 1])
    one_minus = Cyclotomic(4, [1, -1])
    assert cyc_arith(one_plus, one_minus, "mul") == 2
    x = Cyclotomic(6, [Fraction(2, 3), -5])
    assert cyc_arith(x, Cyclotomic.one(6), "mul") == x
    assert cyc_arith(Cyclotomic(2, [-1]), Cyclotomic(2, [-1]), "mul") == 1
    assert cyc_arith(one_plus, one_minus, "div") * one_minus == one_plus


def test_division_by_zero_and_order_mismatch():
    with pytest.raises(CyclotomicZeroDivisionError):
        Cyclotomic.one(3) / Cyclotomic.zero(3)
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.zero(4).inverse()
    with pytest.raises(OrderMismatchError):
        Cyclotomic.one(3) + Cyclotomic.one(4)


@settings(max_examples=60, deadline=None)
@given(triples())
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if a:
        assert a * a.inverse() == 1


@settings(max_examples=60, deadline=None)
@given(triples())
def test_multiplication_matches_sympy_oracle(t):
    a, b, _ = t
    N = a.order
    assert a * b == sympy_reduce(as_sympy(a) * as_sympy(b), N)


@settings(max_examples=80, deadline=None)
@given(cyclotomics())
def test_render_parse_round_trip(x):
    assert parse_cyclotomic(render(x), x.order) == x


@settings(max_examples=40, deadline=None)
@given(cyclotomics())
def test_json_round_trip(x):
    assert Cyclotomic.from_json(x.to_json()) == x


def test_json_shape():
    assert Cyclotomic(3, [Fraction(1, 2), -2]).to_json() == {"order": 3, "coeffs": ["1/2", "-2"]}


def test_parse_syntax():
    assert parse_cyclotomic("z+1", 4) == Cyclotomic(4, [1, 1])
    assert parse_cyclotomic("(1/2)*z^2", 4) == Fraction(-1, 2)
    assert parse_cyclotomic("z^-1", 4) == -zeta_pow(4, 1)
    assert parse_cyclotomic("-3/4", 2) == Fraction(-3, 4)


@pytest.mark.parametrize("text,pos", [("1 +", 3), ("(z", 2), ("1/0", 2), ("z$", 1)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_cyclotomic(text, 3)
    assert info.value.position == pos


def test_poly_expand_equal_examples():
    x, y = MultiPoly.gens("x y")
    assert poly_expand_equal((x + y) ** 2, x ** 2 + 2 * x * y + y ** 2)
    assert not poly_expand_equal(x, y)


@st.composite
def sympy_polys(draw):
    names = ["a", "b", "c"]
    terms = draw(st.lists(st.tuples(st.integers(-3, 3), st.tuples(*[st.integers(0, 2)] * 3)),
                          min_size=1, max_size=4))
    return terms


def _to_multipoly(terms):
    vs = MultiPoly.gens("a b c")
    out = MultiPoly.const(0)
    for c, (i, j, k) in terms:
        out = out + vs[0] ** i * vs[1] ** j * vs[2] ** k * c
    return out


def _to_sympy(terms):
    a, b, c = sp.symbols("a b c")
    return sum(k * a ** i * b ** j * c ** l for k, (i, j, l) in terms)


@settings(max_examples=40, deadline=None)
@given(sympy_polys(), sympy_polys())
def test_multipoly_product_matches_sympy(p, q):
    prod = _to_multipoly(p) * _to_multipoly(q)
    expected = sp.Poly(sp.expand(_to_sympy(p) * _to_sympy(q)), *sp.symbols("a b c"))
    got = {}
    for e, c in prod.terms.items():
        named = dict(zip(prod.variables, e))
        got[tuple(named.get(v, 0) for v in "abc")] = c.to_fraction()
    assert got == {m: Fraction(int(c)) for m, c in expected.terms() if c}


def test_determinant_matches_sympy():
    a, b, c = MultiPoly.gens("a b c")
    M = [[a, b, 1], [c, a, b], [1, c, a]]
    sa, sb, sc = sp.symbols("a b c")
    expected = sp.expand(sp.Matrix([[sa, sb, 1], [sc, sa, sb], [1, sc, sa]]).det())
    d = determinant(M)
    for vals in [(1, 2, 3), (-2, 5, Fraction(1, 3)), (0, 0, 7)]:
        env = dict(zip("abc", vals))
        assert d.evaluate(env) == Fraction(str(expected.subs({sa: vals[0], sb: vals[1], sc: vals[2]})))


def test_multipoly_substitute_and_coefficients():
    x, y = MultiPoly.gens("x y")
    p = x ** 2 * y + 3 * x + 5
    parts = p.coefficients_in("x")
    assert parts[2] == y and parts[1] == 3 and parts[0] == 5
    assert p.substitute({"x": y + 1}) == (y + 1) ** 2 * y + 3 * y + 8
    assert p.evaluate({"x": 2, "y": -1}) == 7

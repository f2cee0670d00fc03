from fractions import Fraction

import pytest
import sympy as sp

from qplane.algebra import ExpVec
from qplane.errors import DegenerateSampleError
from qplane.scalars import MultiPoly
from qplane.solver.identities import (Case3Sample, b_conditions, b_dichotomy_solutions, case3_symbolic,
                                      case3_values, det_expanded, det_factored, mixed_b_matrix,
                                      sample_case3, solve_small_system, verify_case3_consequences,
                                      verify_det_identity)

A, J, K, B1, B2 = sp.symbols("A J K B1 B2")


def test_det_identity():
    assert verify_det_identity()


def test_det_against_sympy():
    M = sp.Matrix(mixed_b_matrix(A, J, K, B1, B2))
    assert sp.expand(M.det() - det_factored(A, J, K, B1, B2)) == 0
    ours = det_expanded()
    env = {"A": 3, "J": -2, "K": 5, "B1": Fraction(1, 2), "B2": 7}
    assert ours.evaluate(env) == Fraction(str(M.det().subs({A: 3, J: -2, K: 5, B1: sp.Rational(1, 2), B2: 7})))


def test_det_spot_check():
    env = {"A": 1, "J": 2, "K": 3, "B1": 0, "B2": 1}
    gens = {n: MultiPoly.var(n) for n in env}
    factored = det_factored(*(gens[n] for n in ("A", "J", "K", "B1", "B2")))
    assert det_expanded().evaluate(env) == factored.evaluate(env)


def test_det_vanishes_on_equal_b():
    assert det_expanded().substitute({"B2": MultiPoly.var("B1")}).is_zero()


def test_b_conditions():
    p1, p2 = b_conditions()
    b1, b2 = MultiPoly.gens("B1 B2")
    assert p1 == b1 * b2
    assert p2 == b1 + b2 - 1 - b1 * b2


def test_b_dichotomy():
    assert set(b_dichotomy_solutions()) == {(0, 1), (1, 0)}
    x, y = MultiPoly.gens("x y")
    assert set(solve_small_system([x * y, x + y - 1], ["x", "y"])) == {(0, 1), (1, 0)}


def test_mixed_b_residue_is_identically_zero():
    residue, claimed = case3_symbolic()
    assert residue.is_zero()
    assert not claimed.is_zero()


def test_mixed_b_residue_against_sympy():
    a1, a2, n1, n2, k1, k2 = sp.symbols("a1 a2 n1 n2 k1 k2")
    P = lambda n1, n2: (a2 + 1 + n2 + k2) * (a1 + n1) - (a2 + n2) * (a1 + k1 + n1)  # noqa: E731
    res = (a2 + 1 + n2) * P(n1, n2) - (a2 + n2) * P(n1 - k1, n2 - k2) - (k2 + 1) * (a1 + n1)
    assert sp.expand(res) == 0


def test_mixed_b_sampled_residues_vanish():
    for s in sample_case3(20, seed=1):
        v = case3_values(s)
        assert v.residue == 0
        assert v.claimed != 0


def test_degenerate_samples_rejected():
    # <d1, k> = <d2, k>: m = (1,0), d1 = -d_2, d2 = d_1, k = (2,-2)
    s = Case3Sample(2, ExpVec(1, 0), (Fraction(1, 3), Fraction(1, 2)), ExpVec(0, 0),
                    ExpVec(0, 2), ExpVec(2, 2), ExpVec(2, -2))
    with pytest.raises(DegenerateSampleError):
        case3_values(s)
    # <d1, alpha + i + n~> = 0
    s = Case3Sample(2, ExpVec(1, 0), (0, 0), ExpVec(0, 0), ExpVec(2, 0), ExpVec(2, 2), ExpVec(2, 0))
    with pytest.raises(DegenerateSampleError):
        case3_values(s)
    with pytest.raises(DegenerateSampleError):
        case3_values(Case3Sample(2, ExpVec(2, 0), (1, 1), ExpVec(0, 0), ExpVec(0, 0), ExpVec(0, 0), ExpVec(2, 0)))


def test_case3_report_shape():
    rep = verify_case3_consequences(sample_case3(5, seed=2))
    assert rep.dichotomy_ok
    assert rep.residue_identically_zero
    data = rep.to_json()
    assert len(data["samples"]) == 5
    assert sample_case3(5, seed=2) == sample_case3(5, seed=2)

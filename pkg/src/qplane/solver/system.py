"""The quadratic system satisfied by residue tables of intermediate-series modules.

Applying [x^m, x^n] = (q^(m2 n1) - q^(m1 n2)) x^(m+n) to v_i gives, for all
residues m, n, i::

    c[m, n+i] c[n, i] - c[n, m+i] c[m, i] = (q^(m2 n1) - q^(m1 n2)) c[m+n, i]

with c[0, i] = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import ExpVec, residues
from ..scalars import Cyclotomic, MultiPoly, render, zeta_pow
from ..tables import CTable, Unknown, format_unknown, unknowns


def var_name(u: Unknown) -> str:
    (m1, m2), (i1, i2) = u
    return f"c[{m1},{m2}|{i1},{i2}]"


def bracket_coefficient(N: int, m, n) -> Cyclotomic:
    return zeta_pow(N, m[1] * n[0]) - zeta_pow(N, m[0] * n[1])


@dataclass
class Equation:
    m: ExpVec
    n: ExpVec
    i: ExpVec
    coeff: Cyclotomic
    poly: MultiPoly

    def label(self) -> str:
        return f"m={self.m} n={self.n} i={self.i}"


@dataclass
class EquationSystem:
    N: int
    unknowns: list[Unknown]
    equations: list[Equation]
    raw_count: int
    trivial_pruned: int = 0
    duplicate_pruned: int = 0
    names: dict = field(default_factory=dict)

    def residual(self, eq: Equation, table: CTable) -> Cyclotomic:
        values = {var_name(u): table(*u) for u in self.unknowns}
        return eq.poly.evaluate(values)

    def violations(self, table: CTable) -> list[dict]:
        values = {var_name(u): table(*u) for u in self.unknowns}
        out = []
        for eq in self.equations:
            r = eq.poly.evaluate(values)
            if r:
                out.append({"equation": eq.label(), "residual": render(r)})
        return out

    def satisfied_by(self, table: CTable) -> bool:
        return not self.violations(table)

    def to_json(self) -> dict:
        return {"N": self.N, "unknowns": [format_unknown(u) for u in self.unknowns],
                "raw_equations": self.raw_count, "trivial_pruned": self.trivial_pruned,
                "duplicate_pruned": self.duplicate_pruned,
                "equations": [{"m": list(e.m), "n": list(e.n), "i": list(e.i),
                               "poly": str(e.poly)} for e in self.equations]}


def _normalized(p: MultiPoly) -> MultiPoly:
    """p scaled so that its graded-lex leading coefficient is 1."""
    lead = p.sorted_terms()[0][1]
    return p * lead.inverse()


def _key(p: MultiPoly) -> frozenset:
    vs = p.variables
    return frozenset((tuple((v, k) for v, k in zip(vs, e) if k), c) for e, c in p.terms.items())


def build_system(N: int) -> EquationSystem:
    if N < 2:
        raise ValueError("N must be at least 2")
    us = unknowns(N)
    names = {u: var_name(u) for u in us}
    order = tuple(names[u] for u in us)
    gens = {u: MultiPoly(order, {tuple(int(v == names[u]) for v in order): 1}, N) for u in us}
    zero = MultiPoly(order, {}, N)

    def c(m, i):
        m = ExpVec(*m).residue(N)
        if m == (0, 0):
            return zero
        return gens[(m, ExpVec(*i).residue(N))]

    nonzero = residues(N)[1:]
    eqs: list[Equation] = []
    seen: set = set()
    raw = trivial = dup = 0
    for m in nonzero:
        for n in nonzero:
            for i in residues(N):
                raw += 1
                kappa = bracket_coefficient(N, m, n)
                poly = c(m, n + i) * c(n, i) - c(n, m + i) * c(m, i) - c(m + n, i) * kappa
                if poly.is_zero():
                    trivial += 1
                    continue
                key = _key(_normalized(poly))
                if key in seen:
                    dup += 1
                    continue
                seen.add(key)
                eqs.append(Equation(m, n, i, kappa, poly))
    return EquationSystem(N, us, eqs, raw, trivial, dup, names)

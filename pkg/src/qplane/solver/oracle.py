"""Independent brute-force enumerator of solution orbits at N = 2.

Shares nothing with the branch-and-propagate solver beyond the CTable output
type: the equations are rebuilt here with sympy, every one of the 2^12 zero
patterns is tried, one spanning forest of the support graph is fixed to 1 and
the remaining system is handed to ``sympy.solve``.  Gauge-fixed solutions of
a fixed support are pairwise inequivalent, so each one is its own orbit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
import sympy as sp

from ..errors import UnsupportedScaleError
from ..tables import CTable

_RES = [(0, 0), (0, 1), (1, 0), (1, 1)]


def _add(a, b):
    return ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)


@dataclass
class OracleResult:
    tables: list = field(default_factory=list)
    parametric: list = field(default_factory=list)
    patterns_tried: int = 0

    @property
    def count(self) -> int:
        return len(self.tables) + len(self.parametric)


def oracle_orbits(N: int = 2) -> OracleResult:
    if N != 2:
        raise UnsupportedScaleError("the oracle enumerates N = 2 only")
    nonzero = _RES[1:]
    us = [(m, i) for m in nonzero for i in _RES]
    sym = {u: sp.Symbol(f"c{u[0][0]}{u[0][1]}_{u[1][0]}{u[1][1]}") for u in us}

    def c(m, i):
        return 0 if m == (0, 0) else sym[(m, i)]

    eqs = []
    for m in nonzero:
        for n in nonzero:
            for i in _RES:
                k = (-1) ** (m[1] * n[0]) - (-1) ** (m[0] * n[1])
                e = sp.expand(c(m, _add(n, i)) * c(n, i) - c(n, _add(m, i)) * c(m, i) - k * c(_add(m, n), i))
                if e != 0:
                    eqs.append(e)

    result = OracleResult()
    for bits in itertools.product((0, 1), repeat=len(us)):
        result.patterns_tried += 1
        sup = [u for u, b in zip(us, bits) if b]
        zero = {sym[u]: 0 for u, b in zip(us, bits) if not b}
        reduced = [e for e in (sp.expand(e.subs(zero)) for e in eqs) if e != 0]
        # a lone monomial in nonzero unknowns can never vanish
        if any(len(sp.Add.make_args(e)) == 1 for e in reduced):
            continue
        forest = nx.Graph()
        forest.add_nodes_from(_RES)
        fix = {}
        for (m, i) in sup:
            j = _add(m, i)
            if not nx.has_path(forest, i, j):
                forest.add_edge(i, j)
                fix[sym[(m, i)]] = 1
        reduced = [e for e in (sp.expand(e.subs(fix)) for e in reduced) if e != 0]
        if any(e.is_number for e in reduced):
            continue
        free = [sym[u] for u in sup if sym[u] not in fix]
        if not free:
            result.tables.append(_table(sup, sym, fix, {}))
            continue
        for s in sp.solve(reduced, free, dict=True):
            values = {v: s.get(v, v) for v in free}
            if any(sp.simplify(val) == 0 for val in values.values()):
                continue
            if any(val.free_symbols for val in values.values()):
                result.parametric.append({str(k): str(v) for k, v in values.items()})
                continue
            result.tables.append(_table(sup, sym, fix, values))
    return result


def _table(sup, sym, fix, values) -> CTable:
    entries = {}
    for u in sup:
        v = fix.get(sym[u], values.get(sym[u]))
        v = sp.nsimplify(v)
        if not v.is_rational:
            raise ValueError(f"non-rational oracle value {v}")
        entries[u] = Fraction(int(v.p), int(v.q))
    return CTable(2, entries)

"""Exact zero-pattern branch-and-propagate solver for the residue-table system.

The search runs in two layers.  The outer layer branches every unknown into
``= 0`` / ``!= 0`` in lexicographic order, pruning with a support rule: an
equation cannot have exactly one surviving monomial.  At each complete zero
pattern the inner layer gauge-fixes a spanning forest of the support graph to
1 and eliminates the remaining nonzero unknowns one linear pivot at a time.
Because every remaining unknown is nonzero, a pivot x*M + R = 0 with M a
monomial can be substituted as x = -R/M and denominators cleared without
changing the solution set.  Non-monomial pivots split into the cases M = 0
and M != 0; a final univariate remainder is solved by its rational roots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import ExpVec, residues
from ..errors import UnsupportedScaleError
from ..scalars import Cyclotomic, MultiPoly, _poly_divmod, _trim, render
from ..tables import CTable, Unknown, closed_form_table, format_unknown, unknowns
from .gauge import gauge_canonicalize
from .system import EquationSystem, var_name


@dataclass
class SolutionOrbit:
    representative: CTable | None
    zero_pattern: tuple
    canonical: bool = True
    label: str = "other"
    free_parameters: list = field(default_factory=list)
    parametric: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def support(self) -> list[Unknown]:
        us = unknowns(self.representative.order if self.representative else 2)
        return [u for u, b in zip(us, self.zero_pattern) if b]

    def to_json(self) -> dict:
        return {"label": self.label,
                "zero_pattern": list(self.zero_pattern),
                "representative": None if self.representative is None else self.representative.to_json(),
                "free_parameters": list(self.free_parameters),
                "parametric": dict(self.parametric),
                "canonical": self.canonical,
                **self.details}


@dataclass
class SolveResult:
    N: int
    orbits: list
    complete: bool
    verified: bool
    oracle_checked: bool = False
    unresolved: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def unverified(self) -> bool:
        return not self.complete

    def to_json(self) -> dict:
        return {"N": self.N, "orbits": [o.to_json() for o in self.orbits],
                "oracle_checked": self.oracle_checked, "verified": self.verified,
                "complete": self.complete, "unverified": self.unverified,
                "unresolved": self.unresolved, "stats": self.stats}


# ---------------------------------------------------------------------------
# polynomial helpers
# ---------------------------------------------------------------------------

def _simplify(p: MultiPoly) -> MultiPoly:
    """Divide out the monomial content (all variables are nonzero) and make the lead coefficient 1."""
    if p.is_zero():
        return p
    exps = list(p.terms)
    content = tuple(min(e[j] for e in exps) for j in range(len(p.variables)))
    if any(content):
        p = MultiPoly(p.variables, {tuple(a - b for a, b in zip(e, content)): c
                                    for e, c in p.terms.items()}, p.order)
    lead = p.sorted_terms()[0][1]
    if lead != 1:
        p = p * lead.inverse()
    return p


def _substitute_fraction(p: MultiPoly, x: str, num: MultiPoly, den: MultiPoly) -> MultiPoly:
    """den^d * p(x = num/den), d = deg_x p."""
    parts = p.coefficients_in(x)
    if set(parts) <= {0}:
        return p
    d = max(parts)
    out = MultiPoly.const(0, p.order)
    for j, pj in parts.items():
        out = out + pj.substitute({x: 0}) * num ** j * den ** (d - j)
    return out


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """Rational roots of a nonzero univariate polynomial (constant term first)."""
    coeffs = _trim(list(coeffs))
    if len(coeffs) <= 1:
        return []
    roots = []
    if coeffs[0] == 0:
        roots.append(Fraction(0))
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n):
        return [d for d in range(1, n + 1) if n % d == 0]

    for p in divisors(a0):
        for q in divisors(an):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if r not in roots and sum(c * r ** k for k, c in enumerate(coeffs)) == 0:
                    roots.append(r)
    return sorted(roots)


def _univariate(p: MultiPoly, x: str) -> list[Cyclotomic]:
    parts = p.coefficients_in(x)
    d = max(parts)
    zero = Cyclotomic.zero(p.order)
    return [parts[j].constant_value() if j in parts else zero for j in range(d + 1)]


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return a


# ---------------------------------------------------------------------------
# inner layer: elimination at a fixed zero pattern
# ---------------------------------------------------------------------------

@dataclass
class _Branch:
    polys: list
    free: list
    subs: list
    conds: list


def _find_pivot(polys: list[MultiPoly], monomial_only: bool):
    ranked = sorted(polys, key=lambda p: (len(p.used_variables()), len(p.terms), str(p)))
    for p in ranked:
        for x in sorted(p.used_variables()):
            if p.degree(x) != 1:
                continue
            parts = p.coefficients_in(x)
            lead = parts[1].substitute({x: 0}) if x in parts[1].variables else parts[1]
            if monomial_only and not lead.is_monomial():
                continue
            rest = parts.get(0, MultiPoly.const(0, p.order))
            return p, x, lead, rest
    return None


def _eliminate(polys: list[MultiPoly], free: list[str], subs: list, conds: list,
               out: list, unresolved: list, depth: int = 0):
    cleaned = []
    seen = set()
    for p in polys:
        if p.is_zero():
            continue
        p = _simplify(p)
        if p.is_constant() or p.is_monomial():
            return  # nonzero constant, or a monomial in nonzero unknowns
        key = str(p)
        if key not in seen:
            seen.add(key)
            cleaned.append(p)
    for c in conds:
        if c.is_zero():
            return
    if not cleaned:
        out.append(_Branch([], free, subs, conds))
        return
    pivot = _find_pivot(cleaned, monomial_only=True)
    if pivot is not None:
        p, x, lead, rest = pivot
        num = -rest
        new = [_substitute_fraction(q, x, num, lead) for q in cleaned if q is not p]
        new_conds = [_substitute_fraction(c, x, num, lead) for c in conds] + [num]
        _eliminate(new, [v for v in free if v != x], subs + [(x, num, lead)], new_conds,
                   out, unresolved, depth + 1)
        return
    pivot = _find_pivot(cleaned, monomial_only=False)
    if pivot is not None:
        p, x, lead, rest = pivot
        others = [q for q in cleaned if q is not p]
        # case lead = 0 (then rest = 0 as well)
        _eliminate(others + [lead, rest], free, subs, conds, out, unresolved, depth + 1)
        # case lead != 0
        num = -rest
        new = [_substitute_fraction(q, x, num, lead) for q in others]
        new_conds = [_substitute_fraction(c, x, num, lead) for c in conds] + [num, lead]
        _eliminate(new, [v for v in free if v != x], subs + [(x, num, lead)], new_conds,
                   out, unresolved, depth + 1)
        return
    used = set()
    for p in cleaned:
        used.update(p.used_variables())
    if len(used) == 1:
        (x,) = used
        coeff_lists = []
        for p in cleaned:
            cs = _univariate(p, x)
            if not all(c.is_rational() for c in cs):
                unresolved.append([str(q) for q in cleaned])
                return
            coeff_lists.append([c.to_fraction() for c in cs])
        g = coeff_lists[0]
        for cs in coeff_lists[1:]:
            g = _poly_gcd(g, cs)
        for r in _rational_roots(g):
            if r == 0:
                continue
            val = MultiPoly.const(r, cleaned[0].order)
            _eliminate([p.substitute({x: r}) for p in cleaned], [v for v in free if v != x],
                       subs + [(x, val, MultiPoly.const(1, cleaned[0].order))],
                       [c.substitute({x: r}) for c in conds], out, unresolved, depth + 1)
        if len(g) - 1 > len([r for r in _rational_roots(g)]):
            # irrational roots cannot be represented over Q(z_2)
            rest = list(g)
            for r in _rational_roots(g):
                rest, _ = _poly_divmod(rest, [-r, 1])
            if len(_trim(rest)) > 1:
                unresolved.append([f"irreducible factor over Q in {x}: {rest}"])
        return
    unresolved.append([str(q) for q in cleaned])


def _back_substitute(N: int, branch: _Branch, fixed: dict) -> dict | None:
    values = dict(fixed)
    for x, num, den in reversed(branch.subs):
        d = den.evaluate(values)
        if not d:
            return None
        v = num.evaluate(values) / d
        if not v:
            return None
        values[x] = v
    for c in branch.conds:
        if not c.evaluate(values):
            return None
    return values


# ---------------------------------------------------------------------------
# outer layer: zero-pattern branching
# ---------------------------------------------------------------------------

def _monomials(system: EquationSystem) -> list[list[tuple[str, ...]]]:
    out = []
    for eq in system.equations:
        p = eq.poly
        out.append([tuple(v for v, k in zip(p.variables, e) if k) for e in p.terms])
    return out


def _propagate(state: dict, monos: list) -> dict | None:
    state = dict(state)
    changed = True
    while changed:
        changed = False
        for eq in monos:
            alive = 0
            open_ = []
            for mono in eq:
                vals = [state.get(v) for v in mono]
                if 0 in vals:
                    continue
                if all(v == 1 for v in vals):
                    alive += 1
                else:
                    open_.append(mono)
            if alive == 1 and not open_:
                return None
            if alive == 0 and len(open_) == 1:
                undecided = [v for v in open_[0] if state.get(v) is None]
                if len(undecided) == 1:
                    state[undecided[0]] = 0
                    changed = True
    return state


def zero_patterns(system: EquationSystem) -> tuple[list[tuple[int, ...]], int]:
    """Zero patterns surviving support propagation, and the number of branch nodes visited."""
    names = [var_name(u) for u in system.unknowns]
    monos = _monomials(system)
    leaves: list[tuple[int, ...]] = []
    nodes = 0

    def dfs(state):
        nonlocal nodes
        nodes += 1
        state = _propagate(state, monos)
        if state is None:
            return
        for v in names:
            if v not in state:
                dfs({**state, v: 0})
                dfs({**state, v: 1})
                return
        leaves.append(tuple(state[v] for v in names))

    dfs({})
    return leaves, nodes


def spanning_fix(N: int, support: list[Unknown]) -> list[Unknown]:
    """Support unknowns forming a spanning forest, chosen greedily in lexicographic order."""
    parent = {r: r for r in residues(N)}

    def find(r):
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        return r

    tree = []
    for (m, i) in sorted(support):
        a, b = find(i), find((m + i).residue(N))
        if a != b:
            parent[a] = b
            tree.append((m, i))
    return tree


def solve_pattern(system: EquationSystem, pattern: tuple[int, ...]):
    """All gauge-fixed solutions with the given zero pattern.

    Returns (tables, parametric_branches, unresolved)."""
    N = system.N
    us = system.unknowns
    support = [u for u, b in zip(us, pattern) if b]
    zero_subs = {var_name(u): 0 for u, b in zip(us, pattern) if not b}
    tree = spanning_fix(N, support)
    fixed = {var_name(u): Cyclotomic.one(N) for u in tree}
    polys = [eq.poly.substitute({**zero_subs, **fixed}) for eq in system.equations]
    free = [var_name(u) for u in support if u not in tree]
    branches: list[_Branch] = []
    unresolved: list = []
    _eliminate(polys, free, [], [], branches, unresolved)
    tables, parametric = [], []
    for br in branches:
        if br.free:
            parametric.append(br)
            continue
        values = _back_substitute(N, br, fixed)
        if values is None:
            continue
        entries = {u: values[var_name(u)] for u in support}
        if any(not v for v in entries.values()):
            continue
        tables.append(CTable(N, entries))
    return tables, parametric, unresolved


def _parametric_orbit(N: int, pattern, br: _Branch, tree) -> SolutionOrbit:
    exprs = {}
    for x, num, den in br.subs:
        exprs[x] = f"({num}) / ({den})"
    for u in tree:
        exprs[var_name(u)] = "1"
    return SolutionOrbit(None, tuple(pattern), canonical=False, label="other",
                         free_parameters=list(br.free), parametric=exprs)


def solve(system: EquationSystem) -> SolveResult:
    """Enumerate all gauge orbits of solutions (complete at N = 2)."""
    N = system.N
    if N != 2:
        return solve_partial(system)
    leaves, nodes = zero_patterns(system)
    canon: dict[CTable, SolutionOrbit] = {}
    orbits: list[SolutionOrbit] = []
    unresolved: list = []
    for pattern in leaves:
        tables, parametric, unres = solve_pattern(system, pattern)
        for u in unres:
            unresolved.append({"zero_pattern": list(pattern), "residual": u})
        for table in tables:
            rep, _ = gauge_canonicalize(table)
            if rep not in canon:
                orbit = SolutionOrbit(rep, rep.zero_pattern())
                canon[rep] = orbit
                orbits.append(orbit)
        for br in parametric:
            support = [u for u, b in zip(system.unknowns, pattern) if b]
            orbits.append(_parametric_orbit(N, pattern, br, spanning_fix(N, support)))
    orbits.sort(key=_orbit_sort_key)
    verified = all(o.representative is not None and system.satisfied_by(o.representative)
                   for o in orbits)
    stats = {"branch_nodes": nodes, "patterns_solved": len(leaves),
             "equations": len(system.equations), "raw_equations": system.raw_count}
    return SolveResult(N, orbits, complete=not unresolved, verified=verified and not unresolved,
                       unresolved=unresolved, stats=stats)


def _orbit_sort_key(o: SolutionOrbit):
    return (sum(o.zero_pattern), tuple(-b for b in o.zero_pattern),
            "" if o.representative is None else str(o.representative.to_json()))


def solve_partial(system: EquationSystem) -> SolveResult:
    """Beyond N = 2 only the known closed-form tables are checked; completeness is not claimed."""
    N = system.N
    orbits = []
    for table in (CTable(N), closed_form_table(N, 0), closed_form_table(N, 1)):
        if system.satisfied_by(table):
            rep, _ = gauge_canonicalize(table)
            orbits.append(SolutionOrbit(rep, rep.zero_pattern()))
    return SolveResult(N, orbits, complete=False,
                       verified=all(system.satisfied_by(o.representative) for o in orbits),
                       stats={"equations": len(system.equations), "raw_equations": system.raw_count})


def require_supported(N: int):
    if N != 2:
        raise UnsupportedScaleError(f"complete solving is only supported for N = 2, got N = {N}")

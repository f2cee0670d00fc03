"""Intermediate-series weight modules over Der C_q, restricted to finite windows.

Two kinds of module data are supported:

* ``ClosedForm`` -- the family A_{a,alpha,b} with basis v_k, k in Z^2::

      x^m v_k        = (q^(m2*k1) - a*q^(m1*k2)) v_(m+k)
      (x^n d) v_k    = <d, alpha + k + b*n> v_(n+k)

* ``Generic`` -- residue-indexed coefficient tables c[m, i] and per-residue
  values b[i], with explicit punctures (indices k where alpha + k = 0).

All checks are exact.  A window is a finite box of lattice indices; results
that leave it are reported instead of truncated.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping, Union

import networkx as nx

from .algebra import (BasisKey, DirectionForm, ExpVec, Inner, LieElement, Witt, bracket_keys,
                      is_central_monomial, key_sort, keys_in_box, pairing, residues)
from .errors import ConventionViolation, PunctureError, WindowEscapeError
from .scalars import Cyclotomic, as_cyclotomic, parse_cyclotomic, rational_grid, render, zeta_pow
from .tables import CTable, closed_form_table, format_residue, iter_residue_map


# ---------------------------------------------------------------------------
# data model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Window:
    base: ExpVec
    radius: int

    def __post_init__(self):
        object.__setattr__(self, "base", ExpVec(*self.base))
        if self.radius < 1:
            raise ValueError("window radius must be positive")

    def __contains__(self, k) -> bool:
        return (abs(k[0] - self.base[0]) <= self.radius
                and abs(k[1] - self.base[1]) <= self.radius)

    def indices(self) -> list[ExpVec]:
        r, (b1, b2) = self.radius, self.base
        return [ExpVec(b1 + i, b2 + j) for i in range(-r, r + 1) for j in range(-r, r + 1)]

    def shrink(self, by: int) -> "Window | None":
        return Window(self.base, self.radius - by) if self.radius > by else None


def _pair(N: int, alpha) -> tuple[Cyclotomic, Cyclotomic]:
    a1, a2 = alpha
    return as_cyclotomic(a1, N), as_cyclotomic(a2, N)


@dataclass(frozen=True)
class ClosedForm:
    N: int
    a: int
    alpha: tuple
    b: object

    def __post_init__(self):
        if self.a not in (0, 1):
            raise ValueError("closed-form parameter a must be 0 or 1")
        object.__setattr__(self, "alpha", _pair(self.N, self.alpha))
        object.__setattr__(self, "b", as_cyclotomic(self.b, self.N))


@dataclass(frozen=True)
class Generic:
    N: int
    alpha: tuple
    b_map: Mapping
    c_table: CTable
    punctures: frozenset = frozenset()

    def __post_init__(self):
        N = self.N
        object.__setattr__(self, "alpha", _pair(N, self.alpha))
        bm = {ExpVec(*r).residue(N): as_cyclotomic(v, N) for r, v in self.b_map.items()}
        missing = [r for r in residues(N) if r not in bm]
        if missing:
            raise ValueError(f"b_map misses residues {missing}")
        object.__setattr__(self, "b_map", bm)
        object.__setattr__(self, "punctures", frozenset(ExpVec(*p) for p in self.punctures))
        if self.c_table.order != N:
            raise ValueError("c_table order does not match N")


ModuleSpec = Union[ClosedForm, Generic]


def integral_puncture(N: int, alpha) -> ExpVec | None:
    """The index k with alpha + k = 0, when alpha is an integer vector."""
    a1, a2 = alpha
    if a1.is_rational() and a2.is_rational():
        f1, f2 = a1.to_fraction(), a2.to_fraction()
        if f1.denominator == 1 and f2.denominator == 1:
            return ExpVec(-int(f1), -int(f2))
    return None


def generic_from_closed(spec: ClosedForm) -> Generic:
    """Read off residue tables of A_{a,alpha,b}; the vanishing weight becomes a puncture."""
    p = integral_puncture(spec.N, spec.alpha)
    return Generic(spec.N, spec.alpha, {r: spec.b for r in residues(spec.N)},
                   closed_form_table(spec.N, spec.a), frozenset([p]) if p is not None else frozenset())


def generic_from_table(table: CTable, alpha, b) -> Generic:
    N = table.order
    alpha = _pair(N, alpha)
    p = integral_puncture(N, alpha)
    return Generic(N, alpha, {r: b for r in residues(N)}, table,
                   frozenset([p]) if p is not None else frozenset())


@dataclass(frozen=True)
class ModuleVector:
    terms: Mapping

    def __post_init__(self):
        object.__setattr__(self, "terms", {ExpVec(*k): c for k, c in self.terms.items() if c})

    @classmethod
    def basis(cls, N: int, k, coeff=1) -> "ModuleVector":
        return cls({ExpVec(*k): as_cyclotomic(coeff, N)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return ModuleVector(out)

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + ModuleVector({k: -c for k, c in other.terms.items()})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({render(c)})*v[{k[0]},{k[1]}]" for k, c in sorted(self.terms.items()))


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------

def inner_coefficient(spec: ModuleSpec, m, k) -> Cyclotomic:
    """Coefficient of v_(m+k) in x^m v_k."""
    N = spec.N
    if isinstance(spec, ClosedForm):
        c = zeta_pow(N, m[1] * k[0])
        return c - zeta_pow(N, m[0] * k[1]) if spec.a else c
    return spec.c_table(m, k)


def witt_coefficient(spec: ModuleSpec, n, s: int, k) -> Cyclotomic:
    """Coefficient of v_(n+k) in (x^n d_s) v_k."""
    b = spec.b if isinstance(spec, ClosedForm) else spec.b_map[ExpVec(k[0] % spec.N, k[1] % spec.N)]
    return spec.alpha[s - 1] + k[s - 1] + b * n[s - 1]


def key_coefficient(spec: ModuleSpec, key: BasisKey, k) -> Cyclotomic:
    if isinstance(key, Inner):
        return inner_coefficient(spec, key.m, k)
    return witt_coefficient(spec, key.n, key.s, k)


class _Action:
    """Memoized basis action for one spec."""

    def __init__(self, spec: ModuleSpec):
        self.spec = spec
        self.memo: dict = {}

    def __call__(self, key: BasisKey, k: ExpVec) -> Cyclotomic:
        t = (key, k)
        c = self.memo.get(t)
        if c is None:
            c = self.memo[t] = key_coefficient(self.spec, key, k)
        return c


def act(spec: ModuleSpec, g: LieElement, v: ModuleVector, window: Window) -> ModuleVector:
    if g.order != spec.N:
        raise ValueError("element and module use different N")
    punctures = spec.punctures if isinstance(spec, Generic) else frozenset()
    out: dict[ExpVec, Cyclotomic] = {}
    for k, ck in v.terms.items():
        if k not in window:
            raise ValueError(f"input index {k} lies outside the window")
        if k in punctures:
            raise PunctureError(k)
        for key, cg in g.terms.items():
            target = k + key.exponent
            if target in punctures:
                raise PunctureError(target)
            c = key_coefficient(spec, key, k)
            if not c:
                continue
            if target not in window:
                raise WindowEscapeError(target)
            t = c * cg * ck
            out[target] = out[target] + t if target in out else t
    return ModuleVector(out)


# ---------------------------------------------------------------------------
# representation axiom
# ---------------------------------------------------------------------------

@dataclass
class ModuleReport:
    checks: int = 0
    skipped_punctures: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"checks": self.checks, "skipped_punctures": self.skipped_punctures,
                "violations": self.violations}


def generator_keys(N: int) -> list[BasisKey]:
    return keys_in_box(N, N)


def verify_module_axiom(spec: ModuleSpec, window: Window, support: Iterable | None = None) -> ModuleReport:
    """Check act([g,h], v) = g(h v) - h(g v) for generator pairs and interior vectors.

    ``support`` optionally restricts the vectors (and all intermediate images)
    to a set of residue classes.
    """
    N = spec.N
    if window.radius < 2 * N:
        raise ValueError(f"window radius must be at least {2 * N} for N={N}")
    punctures = spec.punctures if isinstance(spec, Generic) else frozenset()
    allowed = None if support is None else {ExpVec(*r).residue(N) for r in support}
    coef = _Action(spec)
    report = ModuleReport()
    keys = generator_keys(N)
    indices = window.indices()
    zero = Cyclotomic.zero(N)
    for g, h in combinations(keys, 2):
        eg, eh = g.exponent, h.exponent
        br = bracket_keys(N, g, h)
        for k in indices:
            kg, kh, kgh = k + eg, k + eh, k + eg + eh
            if kg not in window or kh not in window or kgh not in window:
                continue
            if punctures and (k in punctures or kg in punctures or kh in punctures
                              or kgh in punctures):
                report.skipped_punctures += 1
                continue
            if allowed is not None and any(p.residue(N) not in allowed for p in (k, kg, kh, kgh)):
                continue
            lhs = zero
            for key, c in br:
                lhs = lhs + c * coef(key, k)
            rhs = coef(h, k) * coef(g, kh) - coef(g, k) * coef(h, kg)
            report.checks += 1
            if lhs != rhs:
                report.violations.append({"pair": [str(g), str(h)], "index": list(k),
                                          "lhs": render(lhs), "rhs": render(rhs)})
    return report


# ---------------------------------------------------------------------------
# compatibility relation between inner and Witt actions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sample27:
    """One instance (d, k, m, n, i) of the inner/Witt compatibility relation."""
    d: DirectionForm
    k: ExpVec
    m: ExpVec
    n: ExpVec
    i: ExpVec = ExpVec(0, 0)


def compatibility_sides(spec: Generic, s: Sample27) -> tuple[Cyclotomic, Cyclotomic]:
    """Both sides of <d,m> c[k+m,i+n] = <d, w+m+b[i+m]k> c[m,i+n] - c[m,i+k+n] <d, w+b[i]k>,
    where w = alpha + i + n.  Raises on vanishing weights."""
    N = spec.N
    k, m, n, i = (ExpVec(*v) for v in (s.k, s.m, s.n, s.i))
    if not is_central_monomial(N, k) or not is_central_monomial(N, n):
        raise ValueError("k and n must lie in N*Z^2")
    if is_central_monomial(N, m):
        raise ValueError("m must lie outside N*Z^2")
    alpha = spec.alpha
    for shift in (i + n, i + m + n, i + k + n, i + k + m + n):
        w = (alpha[0] + shift[0], alpha[1] + shift[1])
        if not w[0] and not w[1]:
            raise ConventionViolation(shift, f"weight alpha + {shift} vanishes")
    c = spec.c_table
    b_i = spec.b_map[i.residue(N)]
    b_im = spec.b_map[(i + m).residue(N)]
    w = (alpha[0] + i[0] + n[0], alpha[1] + i[1] + n[1])
    lhs = pairing(s.d, m) * c(k + m, i + n)
    first = pairing(s.d, (w[0] + m[0] + b_im * k[0], w[1] + m[1] + b_im * k[1]))
    second = pairing(s.d, (w[0] + b_i * k[0], w[1] + b_i * k[1]))
    rhs = first * c(m, i + n) - c(m, i + k + n) * second
    return lhs, rhs


@dataclass
class CompatReport:
    samples: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"samples": self.samples, "violations": self.failures}


def check_2_7(spec: Generic, samples: Iterable[Sample27]) -> CompatReport:
    report = CompatReport()
    for s in samples:
        lhs, rhs = compatibility_sides(spec, s)
        report.samples += 1
        if lhs != rhs:
            report.failures.append({"d": [render(s.d[0]), render(s.d[1])], "k": list(s.k),
                                    "m": list(s.m), "n": list(s.n), "i": list(s.i),
                                    "lhs": render(lhs), "rhs": render(rhs)})
    return report


def sample_compatibility(spec: Generic, count: int, seed: int = 0, bound: int = 3) -> list[Sample27]:
    """Seeded samples respecting the nonvanishing convention.

    Every other sample uses d = m2*d_1 - m1*d_2 (orthogonal to m)."""
    N = spec.N
    rng = random.Random(seed)
    grid = rational_grid(3)
    out: list[Sample27] = []
    while len(out) < count:
        m = ExpVec(rng.randint(-bound, bound), rng.randint(-bound, bound))
        if is_central_monomial(N, m):
            continue
        k = ExpVec(N * rng.randint(-bound, bound), N * rng.randint(-bound, bound))
        n = ExpVec(N * rng.randint(-bound, bound), N * rng.randint(-bound, bound))
        i = rng.choice(residues(N))
        if len(out) % 2:
            d = DirectionForm.orthogonal(N, m)
        else:
            d = DirectionForm.of(N, rng.choice(grid), rng.choice(grid))
        s = Sample27(d, k, m, n, i)
        try:
            compatibility_sides(spec, s)
        except ConventionViolation:
            continue
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# structure: residue classes, b-grouping, reachability, the A' / A'' split
# ---------------------------------------------------------------------------

def residue_split(window: Window, N: int) -> dict[ExpVec, list[ExpVec]]:
    out: dict[ExpVec, list[ExpVec]] = {r: [] for r in residues(N)}
    for k in window.indices():
        out[k.residue(N)].append(k)
    return out


@dataclass
class GroupReport:
    groups: list
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"groups": [[format_residue(r) for r in g] for g in self.groups],
                "violations": self.violations}


def group_by_b(spec: Generic) -> GroupReport:
    """Group residue classes by b-value; nonzero c[m,i] must stay within a group."""
    N = spec.N
    by_value: dict[Cyclotomic, list[ExpVec]] = {}
    for r in residues(N):
        by_value.setdefault(spec.b_map[r], []).append(r)
    groups = sorted(by_value.values())
    violations = []
    for (m, i), c in spec.c_table.sorted_items():
        j = (m + i).residue(N)
        if spec.b_map[i] != spec.b_map[j]:
            violations.append({"m": list(m), "i": list(i), "c": render(c),
                               "b_i": render(spec.b_map[i]), "b_i+m": render(spec.b_map[j])})
    return GroupReport(groups, violations)


@dataclass
class ReachabilityReport:
    graph: nx.DiGraph
    components: list
    sinks: list
    interior_components: list

    @property
    def strongly_connected(self) -> bool:
        return len(self.components) == 1

    def to_json(self) -> dict:
        fmt = lambda comps: [[list(k) for k in c] for c in comps]
        return {"nodes": self.graph.number_of_nodes(), "edges": self.graph.number_of_edges(),
                "components": fmt(self.components), "sinks": fmt(self.sinks),
                "interior_components": fmt(self.interior_components)}


def _sorted_components(comps) -> list[list[ExpVec]]:
    return sorted((sorted(c) for c in comps), key=lambda c: (c[0], len(c)))


def reachability(spec: ModuleSpec, window: Window, support: Iterable | None = None) -> ReachabilityReport:
    """Edge k -> k' whenever some basis element maps v_k to a nonzero multiple of v_k'."""
    N = spec.N
    punctures = spec.punctures if isinstance(spec, Generic) else frozenset()
    allowed = None if support is None else {ExpVec(*r).residue(N) for r in support}
    nodes = [k for k in window.indices() if k not in punctures
             and (allowed is None or k.residue(N) in allowed)]
    G = nx.DiGraph()
    G.add_nodes_from(nodes)
    for k in nodes:
        for t in nodes:
            if t == k:
                continue
            d = t - k
            if is_central_monomial(N, d):
                hit = any(witt_coefficient(spec, d, s, k) for s in (1, 2))
            else:
                hit = bool(inner_coefficient(spec, d, k))
            if hit:
                G.add_edge(k, t)
    comps = _sorted_components(nx.strongly_connected_components(G))
    cond = nx.condensation(G, comps)
    sinks = _sorted_components(comps[c] for c in cond.nodes if cond.out_degree(c) == 0)
    inner = window.shrink(1)
    interior = []
    if inner is not None:
        H = G.subgraph([k for k in nodes if k in inner])
        interior = _sorted_components(nx.strongly_connected_components(H))
    return ReachabilityReport(G, comps, sinks, interior)


@dataclass
class SplitReport:
    prime_support: list
    double_prime_support: list
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"A_prime": [list(k) for k in self.prime_support],
                "A_double_prime": [list(k) for k in self.double_prime_support],
                "checks": self.checks, "violations": self.violations}


def split_A1(alpha, b, N: int, window: Window) -> SplitReport:
    """A_{1,alpha,b} = span{v_k: k not in NZ^2} + span{v_k: k in NZ^2}, both invariant."""
    spec = ClosedForm(N, 1, alpha, b)
    idx = window.indices()
    report = SplitReport([k for k in idx if not is_central_monomial(N, k)],
                         [k for k in idx if is_central_monomial(N, k)])
    for k in idx:
        for t in idx:
            d = t - k
            if is_central_monomial(N, d):
                # Witt keys preserve the residue class, hence both supports
                report.checks += 1
                if is_central_monomial(N, k) != is_central_monomial(N, t):
                    report.violations.append({"from": list(k), "to": list(t), "key": "witt"})
                continue
            c = inner_coefficient(spec, d, k)
            report.checks += 1
            if c and (is_central_monomial(N, k) or is_central_monomial(N, t)):
                report.violations.append({"from": list(k), "to": list(t),
                                          "key": str(Inner(d)), "coeff": render(c)})
    return report


# ---------------------------------------------------------------------------
# the vanishing weight of an integral alpha
# ---------------------------------------------------------------------------

@dataclass
class PunctureExtension:
    index: ExpVec
    route: str
    source: ExpVec
    coefficient: Cyclotomic
    generic_agrees: bool
    axiom_report: ModuleReport
    split_report: SplitReport | None = None

    @property
    def materialized(self) -> bool:
        return bool(self.coefficient)

    @property
    def exact(self) -> bool:
        """The materialized vector is v_(-alpha) itself, not a rescaling."""
        return self.coefficient == 1

    @property
    def ok(self) -> bool:
        return (self.materialized and self.generic_agrees and self.axiom_report.ok
                and (self.split_report is None or self.split_report.ok))

    def to_json(self) -> dict:
        return {"index": list(self.index), "route": self.route, "source": list(self.source),
                "coefficient": render(self.coefficient), "exact": self.exact,
                "generic_agrees": self.generic_agrees, "axioms": self.axiom_report.to_json(),
                "split": None if self.split_report is None else self.split_report.to_json()}


def puncture_routes(N: int, p: ExpVec) -> list[tuple[BasisKey, ExpVec]]:
    """Candidate (key, source) pairs that land on p; x^(1,0) first."""
    e1, e2 = ExpVec(1, 0), ExpVec(0, 1)
    routes: list[tuple[BasisKey, ExpVec]] = [(Inner(e1), p - e1), (Inner(e2), p - e2)]
    for n, s in ((ExpVec(N, 0), 1), (ExpVec(0, N), 2), (ExpVec(-N, 0), 1), (ExpVec(0, -N), 2)):
        routes.append((Witt(n, s), p - n))
    return routes


def define_puncture_vector(spec: ClosedForm, window_radius: int | None = None) -> PunctureExtension:
    """Materialize v_(-alpha) as the image of a neighbouring vector and recheck the module.

    The first route tried is v_(-alpha) = x^(1,0) v_(-alpha-(1,0)); when that
    coefficient vanishes (the index lies in the A'' part for a = 1) the Witt
    routes are tried in turn.
    """
    N = spec.N
    p = integral_puncture(N, spec.alpha)
    if p is None:
        raise ValueError("alpha must have integer entries")
    radius = window_radius or 2 * N
    window = Window(p, radius)
    route, source, coeff = None, None, Cyclotomic.zero(N)
    for key, src in puncture_routes(N, p):
        c = key_coefficient(spec, key, src)
        if c:
            route, source, coeff = key, src, c
            break
    if route is None:
        route, source = puncture_routes(N, p)[0]
    # away from the puncture the residue tables reproduce the closed form
    gen = generic_from_closed(spec)
    agrees = True
    for k in window.indices():
        if k == p:
            continue
        for key in generator_keys(N):
            t = k + key.exponent
            if t == p or t not in window:
                continue
            if key_coefficient(gen, key, k) != key_coefficient(spec, key, k):
                agrees = False
    axioms = verify_module_axiom(spec, window)
    split = split_A1(spec.alpha, spec.b, N, window) if spec.a == 1 else None
    return PunctureExtension(p, str(route), source, coeff, agrees, axioms, split)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def spec_to_json(spec: ModuleSpec) -> dict:
    alpha = [render(spec.alpha[0]), render(spec.alpha[1])]
    if isinstance(spec, ClosedForm):
        return {"kind": "closed", "a": spec.a, "alpha": alpha, "b": render(spec.b)}
    return {"kind": "generic", "alpha": alpha,
            "b_map": {format_residue(r): render(v) for r, v in sorted(spec.b_map.items())},
            "c_table": spec.c_table.to_json(),
            "punctures": [list(p) for p in sorted(spec.punctures)]}


def spec_from_json(data: Mapping, N: int) -> ModuleSpec:
    kind = data.get("kind")
    alpha = [parse_cyclotomic(str(a), N) for a in data["alpha"]]
    if len(alpha) != 2:
        raise ValueError("alpha must have two components")
    if kind == "closed":
        return ClosedForm(N, int(data["a"]), tuple(alpha), parse_cyclotomic(str(data["b"]), N))
    if kind == "generic":
        b_map = dict(iter_residue_map(data["b_map"], N))
        table = CTable.from_json(data.get("c_table", {}), N)
        punct = frozenset(ExpVec(int(p[0]), int(p[1])) for p in data.get("punctures", []))
        return Generic(N, tuple(alpha), b_map, table, punct)
    raise ValueError(f"unknown module kind {kind!r}")

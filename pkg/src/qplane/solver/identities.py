"""Symbolic and sampled checks of the determinant identity and the mixed-b chain.

Notation: for a nonzero residue direction m, d1 = m2*d_1 - m1*d_2 pairs to zero
with m and d2 pairs to one with m.  Primes and double primes below are the
pairings with d1 and d2.  With A = <d1, alpha + i + n~>, J = <d1, j>,
K = <d1, k>, B1 = b_i, B2 = b_(i+m), the relation

    d(k, n) = (a + n + B2 k) c[n] - (a + n + B1 k) c[n + k]

evaluated at (k, n~), (j, n~), (j - k, k + n~) is a 3 x 3 linear system in
c[n~], c[n~ + k], c[n~ + j].
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import DirectionForm, ExpVec, is_central_monomial, pairing, residues
from ..errors import DegenerateSampleError
from ..scalars import Cyclotomic, MultiPoly, as_cyclotomic, determinant, rational_grid, render
from .search import _poly_gcd, _rational_roots, _univariate

_A, _J, _K, _B1, _B2 = MultiPoly.gens("A J K B1 B2")


def mixed_b_matrix(A, J, K, B1, B2) -> list[list]:
    """Coefficient matrix of d(K, n~) = d(J, n~) = d(J - K, K + n~) = 0."""
    zero = A * 0
    return [[A + B2 * K, -A - B1 * K, zero],
            [A + B2 * J, zero, -A - B1 * J],
            [zero, A + K + B2 * (J - K), -A - K - B1 * (J - K)]]


def det_factored(A, J, K, B1, B2):
    return (J - K) * K * (B2 - B1) * (A * (B1 + B2 - 1) + J * B1 * B2)


def det_expanded() -> MultiPoly:
    return determinant(mixed_b_matrix(_A, _J, _K, _B1, _B2))


def verify_det_identity() -> bool:
    """The expanded determinant equals the factored product exactly."""
    return (det_expanded() - det_factored(_A, _J, _K, _B1, _B2)).is_zero()


def b_conditions() -> tuple[MultiPoly, MultiPoly]:
    """Conditions on (B1, B2) when B1 != B2 and J, K range over infinitely many values.

    The first comes from the original system, the second from the shifted one
    (n~, j, k) -> (n~ + j, -j, k - j), i.e. A -> A + J, J -> -J, K -> K - J.
    Both are read off as J-coefficients of the last factor, after checking
    that the shifted determinant factors the same way."""
    shifted = {"A": _A + _J, "J": -_J, "K": _K - _J}
    det2 = determinant(mixed_b_matrix(_A + _J, -_J, _K - _J, _B1, _B2))
    if not (det2 - det_factored(_A, _J, _K, _B1, _B2).substitute(shifted)).is_zero():
        raise AssertionError("shifted determinant does not factor")
    last1 = _A * (_B1 + _B2 - 1) + _J * _B1 * _B2
    last2 = last1.substitute(shifted)
    return last1.coefficients_in("J")[1], last2.coefficients_in("J")[1]


def solve_small_system(polys: list[MultiPoly], variables: list[str]) -> list[tuple]:
    """Finite solution set of a small rational system, by monomial case splits and univariate roots."""
    polys = [p for p in polys if not p.is_zero()]
    if any(p.is_constant() for p in polys):
        return []
    used = set()
    for p in polys:
        used.update(p.used_variables())
    if not polys:
        return [()] if not variables else _free(variables)
    for p in polys:
        if p.is_monomial():
            out = set()
            for v in p.used_variables():
                out.update(_branch(polys, variables, v, Fraction(0)))
            return sorted(out)
    for v in variables:
        uni = [p for p in polys if set(p.used_variables()) == {v}]
        if uni:
            g = [c.to_fraction() for c in _univariate(uni[0], v)]
            for p in uni[1:]:
                g = _poly_gcd(g, [c.to_fraction() for c in _univariate(p, v)])
            out = set()
            for r in _rational_roots(g):
                out.update(_branch(polys, variables, v, r))
            return sorted(out)
    for p in polys:
        for v in p.used_variables():
            parts = p.coefficients_in(v)
            if p.degree(v) == 1 and parts[1].is_constant():
                rest = parts.get(0, MultiPoly.const(0))
                expr = -rest * parts[1].constant_value().inverse()
                sub = [q.substitute({v: expr}) for q in polys if q is not p]
                others = [w for w in variables if w != v]
                out = set()
                for sol in solve_small_system(sub, others):
                    vals = dict(zip(others, sol))
                    vals[v] = expr.evaluate(vals).to_fraction()
                    out.add(tuple(vals[w] for w in variables))
                return sorted(out)
    raise ValueError("system is not reducible by the available case splits")


def _branch(polys, variables, v, value):
    others = [w for w in variables if w != v]
    sub = [p.substitute({v: value}) for p in polys]
    for sol in solve_small_system(sub, others):
        vals = dict(zip(others, sol))
        vals[v] = value
        yield tuple(vals[w] for w in variables)


def _free(variables):
    raise ValueError(f"positive-dimensional solution set in {variables}")


def b_dichotomy_solutions() -> list[tuple[Fraction, Fraction]]:
    p1, p2 = b_conditions()
    return solve_small_system([p1, p2], ["B1", "B2"])


# ---------------------------------------------------------------------------
# the mixed-b chain at b_i = 0, b_(i+m) = 1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Case3Sample:
    N: int
    m: ExpVec
    alpha: tuple
    i: ExpVec
    n_tilde: ExpVec
    n: ExpVec
    k: ExpVec
    c: object = 1


def directions(N: int, m) -> tuple[DirectionForm, DirectionForm]:
    """(d1, d2) with <d1, m> = 0 and <d2, m> = 1."""
    d1 = DirectionForm.orthogonal(N, m)
    if m[0]:
        d2 = DirectionForm.of(N, Fraction(1, m[0]), 0)
    else:
        d2 = DirectionForm.of(N, 0, Fraction(1, m[1]))
    return d1, d2


@dataclass
class Case3Values:
    residue: Cyclotomic
    claimed: Cyclotomic
    c_value: Cyclotomic


def case3_values(s: Case3Sample) -> Case3Values:
    """Substitute the closed forms for c[m, i+k] and c[k+m, i+n] into the d2-relation.

    Returns the residue (right side minus left side) and the multiple of
    c[m, i+n~] it is asserted to equal."""
    N = s.N
    if is_central_monomial(N, s.m):
        raise DegenerateSampleError("m must lie outside N*Z^2")
    for v in (s.n_tilde, s.n, s.k):
        if not is_central_monomial(N, v):
            raise DegenerateSampleError("n~, n and k must lie in N*Z^2")
    d1, d2 = directions(N, s.m)
    base = (as_cyclotomic(s.alpha[0], N) + s.i[0], as_cyclotomic(s.alpha[1], N) + s.i[1])
    a1, a2 = pairing(d1, base), pairing(d2, base)
    p1 = lambda v: pairing(d1, v)  # noqa: E731
    p2 = lambda v: pairing(d2, v)  # noqa: E731
    C = as_cyclotomic(s.c, N)
    denom = a1 + p1(s.n_tilde)
    if not denom:
        raise DegenerateSampleError("<d1, alpha + i + n~> vanishes")
    if p1(s.k) == p2(s.k):
        raise DegenerateSampleError("<d1, k> equals <d2, k>")
    if not C:
        raise DegenerateSampleError("c[m, i+n~] must be nonzero")
    scale = C / denom

    def c_m(v):  # c[m, i+v]
        return (a1 + p1(v)) * scale

    def c_km(k, n):  # c[k+m, i+n]
        return ((a2 + 1 + p2(n) + p2(k)) * (a1 + p1(n)) - (a2 + p2(n)) * (a1 + p1(k) + p1(n))) * scale

    k, n = s.k, s.n
    rhs = (a2 + 1 + p2(n)) * c_km(k, n) - (a2 + p2(n)) * c_km(k, n - k)
    lhs = (p2(k) + 1) * c_m(n)
    claimed = (p1(k) - p2(k)) * (a1 + p1(n)) * scale
    return Case3Values(rhs - lhs, claimed, C)


def case3_symbolic() -> tuple[MultiPoly, MultiPoly]:
    """Residue and asserted multiple with all pairings as indeterminates, C/(a'+n~') factored out."""
    a1, a2, n1, n2, k1, k2 = MultiPoly.gens("a1 a2 n1 n2 k1 k2")

    def c_km(k1, k2, n1, n2):
        return (a2 + 1 + n2 + k2) * (a1 + n1) - (a2 + n2) * (a1 + k1 + n1)

    residue = (a2 + 1 + n2) * c_km(k1, k2, n1, n2) - (a2 + n2) * c_km(k1, k2, n1 - k1, n2 - k2) \
        - (k2 + 1) * (a1 + n1)
    claimed = (k1 - k2) * (a1 + n1)
    return residue, claimed


def sample_case3(count: int, seed: int = 0, N: int = 2, bound: int = 3) -> list[Case3Sample]:
    """Seeded generic samples over a rational grid, rejecting the degenerate loci."""
    rng = random.Random(seed)
    grid = rational_grid(3)
    out: list[Case3Sample] = []
    while len(out) < count:
        m = ExpVec(rng.randint(-bound, bound), rng.randint(-bound, bound))
        if is_central_monomial(N, m):
            continue
        vecs = [ExpVec(N * rng.randint(-bound, bound), N * rng.randint(-bound, bound)) for _ in range(3)]
        s = Case3Sample(N, m, (rng.choice(grid), rng.choice(grid)), rng.choice(residues(N)),
                        *vecs, c=rng.choice([g for g in grid if g]))
        try:
            v = case3_values(s)
        except DegenerateSampleError:
            continue
        if not v.claimed:
            continue  # <d1, alpha + i + n> = 0 makes the asserted multiple vanish
        out.append(s)
    return out


@dataclass
class Case3Report:
    dichotomy: list
    dichotomy_ok: bool
    samples: list = field(default_factory=list)
    matches: int = 0
    forced: int = 0
    residue_identically_zero: bool = False

    @property
    def ok(self) -> bool:
        n = len(self.samples)
        return self.dichotomy_ok and self.matches == n and self.forced == n

    def to_json(self) -> dict:
        return {"dichotomy": [[str(x) for x in sol] for sol in self.dichotomy],
                "dichotomy_ok": self.dichotomy_ok, "samples": self.samples,
                "matches": self.matches, "forced_vanishing": self.forced,
                "residue_identically_zero": self.residue_identically_zero, "ok": self.ok}


def verify_case3_consequences(samples: list[Case3Sample]) -> Case3Report:
    """(a) the b-dichotomy; (b) residue == asserted nonzero multiple of c[m, i+n~] on each sample."""
    sols = b_dichotomy_solutions()
    report = Case3Report(sols, set(sols) == {(0, 1), (1, 0)})
    residue, _ = case3_symbolic()
    report.residue_identically_zero = residue.is_zero()
    for s in samples:
        v = case3_values(s)
        match = v.residue == v.claimed
        forced = bool(v.residue)  # residue = r * c with r != 0 forces c = 0
        report.matches += match
        report.forced += forced
        report.samples.append({"m": list(s.m), "alpha": [render(as_cyclotomic(a, s.N)) for a in s.alpha],
                               "i": list(s.i), "n_tilde": list(s.n_tilde), "n": list(s.n),
                               "k": list(s.k), "residue": render(v.residue),
                               "claimed": render(v.claimed), "match": match, "forced": forced})
    return report

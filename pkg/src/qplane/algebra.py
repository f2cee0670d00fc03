"""The derivation algebra of the quantum torus at a primitive N-th root of unity.

Basis: inner monomials ``x^m`` with m not in N*Z^2, and Witt terms ``x^n d_s``
with n in N*Z^2, s in {1, 2}.  Brackets::

    [x^m, x^n]          = (q^(m2*n1) - q^(m1*n2)) x^(m+n)
    [x^k d, x^m]        = <d, m> x^(k+m)
    [x^k d_s, x^j d_t]  = j_s x^(k+j) d_t - k_t x^(k+j) d_s
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Union

from .errors import NonHomogeneousError, OrderMismatchError, ParseError
from .scalars import Cyclotomic, as_cyclotomic, parse_cyclotomic, render, zeta_pow


class ExpVec(NamedTuple):
    m1: int
    m2: int

    def __add__(self, other):  # type: ignore[override]
        return ExpVec(self[0] + other[0], self[1] + other[1])

    def __sub__(self, other):
        return ExpVec(self[0] - other[0], self[1] - other[1])

    def __neg__(self):
        return ExpVec(-self[0], -self[1])

    def __mul__(self, k: int):  # type: ignore[override]
        return ExpVec(self[0] * k, self[1] * k)

    __rmul__ = __mul__

    def residue(self, N: int) -> "ExpVec":
        return ExpVec(self[0] % N, self[1] % N)

    def __str__(self) -> str:
        return f"({self[0]},{self[1]})"


def residues(N: int) -> list[ExpVec]:
    """All residue classes of Z^2 / N Z^2 in lexicographic order."""
    return [ExpVec(a, b) for a in range(N) for b in range(N)]


class DirectionForm(NamedTuple):
    """d = a1*d_1 + a2*d_2 in the Cartan subalgebra H."""
    a1: object
    a2: object

    @classmethod
    def of(cls, N: int, a1, a2) -> "DirectionForm":
        return cls(as_cyclotomic(a1, N), as_cyclotomic(a2, N))

    @classmethod
    def orthogonal(cls, N: int, m) -> "DirectionForm":
        """m2*d_1 - m1*d_2, which pairs to zero with m."""
        return cls.of(N, m[1], -m[0])


def pairing(d: DirectionForm, lam) -> object:
    """<d, lam> = a1*lam1 + a2*lam2."""
    return d[0] * lam[0] + d[1] * lam[1]


class Inner(NamedTuple):
    m: ExpVec

    @property
    def exponent(self) -> ExpVec:
        return self.m

    def __str__(self) -> str:
        return f"x[{self.m[0]},{self.m[1]}]"


class Witt(NamedTuple):
    n: ExpVec
    s: int

    @property
    def exponent(self) -> ExpVec:
        return self.n

    def __str__(self) -> str:
        return f"x[{self.n[0]},{self.n[1]}]d{self.s}"


BasisKey = Union[Inner, Witt]


def key_sort(key: BasisKey) -> tuple:
    if isinstance(key, Inner):
        return (key.m[0], key.m[1], 0)
    return (key.n[0], key.n[1], key.s)


def is_central_monomial(N: int, m) -> bool:
    """True iff x^m is central in the quantum torus, i.e. m lies in N*Z^2."""
    return m[0] % N == 0 and m[1] % N == 0


def make_key(N: int, m, s: int | None = None) -> BasisKey:
    m = ExpVec(*m)
    if s is None:
        if is_central_monomial(N, m):
            raise ValueError(f"x^{m} is central for N={N}; not an inner basis element")
        return Inner(m)
    if s not in (1, 2):
        raise ValueError("Witt index s must be 1 or 2")
    if not is_central_monomial(N, m):
        raise ValueError(f"Witt term needs exponent in {N}Z^2, got {m}")
    return Witt(m, s)


def keys_in_box(N: int, K: int) -> list[BasisKey]:
    """All basis keys whose exponent satisfies |m_i| <= K."""
    out: list[BasisKey] = []
    for m1, m2 in product(range(-K, K + 1), repeat=2):
        m = ExpVec(m1, m2)
        if is_central_monomial(N, m):
            out.extend((Witt(m, 1), Witt(m, 2)))
        else:
            out.append(Inner(m))
    return out


@lru_cache(maxsize=1 << 16)
def bracket_keys(N: int, a: BasisKey, b: BasisKey) -> tuple[tuple[BasisKey, Cyclotomic], ...]:
    """Bracket of two basis elements as a tuple of (key, nonzero coefficient)."""
    if isinstance(a, Inner) and isinstance(b, Inner):
        m, n = a.m, b.m
        coeff = zeta_pow(N, m[1] * n[0]) - zeta_pow(N, m[0] * n[1])
        total = m + n
        if is_central_monomial(N, total):
            # n = -m mod N forces q^(m2 n1) = q^(m1 n2)
            assert coeff.is_zero(), (m, n)
            return ()
        return ((Inner(total), coeff),) if coeff else ()
    if isinstance(a, Witt) and isinstance(b, Inner):
        c = b.m[a.s - 1]
        return ((Inner(a.n + b.m), Cyclotomic.from_rational(N, c)),) if c else ()
    if isinstance(a, Inner) and isinstance(b, Witt):
        return tuple((k, -c) for k, c in bracket_keys(N, b, a))
    k, s = a.n, a.s
    j, t = b.n, b.s
    total = k + j
    out: dict[BasisKey, int] = {}
    if j[s - 1]:
        out[Witt(total, t)] = out.get(Witt(total, t), 0) + j[s - 1]
    if k[t - 1]:
        out[Witt(total, s)] = out.get(Witt(total, s), 0) - k[t - 1]
    return tuple((key, Cyclotomic.from_rational(N, c)) for key, c in sorted(out.items(), key=lambda kv: key_sort(kv[0])) if c)


@dataclass(frozen=True)
class LieElement:
    """Finite linear combination of basis keys of Der C_q."""
    order: int
    terms: Mapping[BasisKey, Cyclotomic] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in self.terms.items():
            c = as_cyclotomic(c, self.order)
            if c:
                clean[key] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def basis(cls, N: int, key: BasisKey, coeff=1) -> "LieElement":
        return cls(N, {key: as_cyclotomic(coeff, N)})

    def _check(self, other: "LieElement"):
        if other.order != self.order:
            raise OrderMismatchError(f"elements of Der C_q for N={self.order} and N={other.order}")

    def __add__(self, other: "LieElement") -> "LieElement":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return LieElement(self.order, out)

    def __neg__(self) -> "LieElement":
        return LieElement(self.order, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __mul__(self, scalar) -> "LieElement":
        s = as_cyclotomic(scalar, self.order)
        return LieElement(self.order, {k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.order, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[BasisKey, Cyclotomic]]:
        return sorted(self.terms.items(), key=lambda kv: key_sort(kv[0]))

    def __str__(self) -> str:
        return render_element(self)

    def to_json(self) -> list[dict]:
        return [{"key": str(k), "coeff": render(c)} for k, c in self.sorted_terms()]


def bracket(u: LieElement, v: LieElement) -> LieElement:
    u._check(v)
    N = u.order
    out: dict[BasisKey, Cyclotomic] = {}
    for a, ca in u.terms.items():
        for b, cb in v.terms.items():
            cab = ca * cb
            for key, c in bracket_keys(N, a, b):
                t = cab * c
                out[key] = out[key] + t if key in out else t
    return LieElement(N, out)


def degree(u: LieElement) -> ExpVec:
    """Common exponent of a homogeneous element."""
    exps = {k.exponent for k in u.terms}
    if len(exps) != 1:
        raise NonHomogeneousError(f"element {u} is not homogeneous")
    return ExpVec(*exps.pop())


def grading_check(u: LieElement, v: LieElement) -> bool:
    """True iff every term of [u, v] sits in degree deg(u) + deg(v)."""
    target = degree(u) + degree(v)
    return all(k.exponent == target for k in bracket(u, v).terms)


@dataclass
class JacobiReport:
    N: int
    K: int
    triples_checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"N": self.N, "K": self.K, "triples_checked": self.triples_checked,
                "violations": self.violations}


def _bracket_into(N: int, out: dict, terms, key: BasisKey, sign: int):
    for a, ca in terms:
        for k, c in bracket_keys(N, a, key):
            t = ca * c * sign
            out[k] = out[k] + t if k in out else t


def verify_jacobi(N: int, K: int) -> JacobiReport:
    """[[u,v],w] + [[v,w],u] + [[w,u],v] = 0 for all ordered key triples in the box."""
    if K < 1:
        raise ValueError("box radius must be >= 1")
    keys = keys_in_box(N, K)
    report = JacobiReport(N, K)
    for u, v, w in product(keys, repeat=3):
        out: dict = {}
        _bracket_into(N, out, bracket_keys(N, u, v), w, 1)
        _bracket_into(N, out, bracket_keys(N, v, w), u, 1)
        _bracket_into(N, out, bracket_keys(N, w, u), v, 1)
        report.triples_checked += 1
        residual = {k: c for k, c in out.items() if c}
        if residual:
            report.violations.append({
                "triple": [str(u), str(v), str(w)],
                "residual": render_element(LieElement(N, residual)),
            })
    return report


# ---------------------------------------------------------------------------
# text syntax:  x[1,0], x[2,0]d1, d2, (1/2)*x[1,1], sums with + / -
# ---------------------------------------------------------------------------

_BASIS_RE = re.compile(
    r"\s*(?:x\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\](?:\s*d\s*([12]))?|d\s*([12]))\s*$")


def _coeff_prefix(c: Cyclotomic) -> tuple[bool, str]:
    if c.is_rational():
        f = c.coeffs[0]
        neg = f < 0
        f = -f if neg else f
        if f == 1:
            return neg, ""
        s = str(f.numerator) if f.denominator == 1 else f"({f.numerator}/{f.denominator})"
        return neg, s + "*"
    return False, f"({render(c)})*"


def render_element(u: LieElement) -> str:
    if u.is_zero():
        return "0"
    pieces = []
    for k, c in u.sorted_terms():
        neg, prefix = _coeff_prefix(c)
        pieces.append((neg, prefix + str(k)))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _split_terms(text: str) -> list[tuple[int, int, str]]:
    """Split at top-level + and - signs; returns (sign, start, chunk)."""
    out = []
    depth = 0
    sign, start = 1, 0
    i = 0
    chunk_start = 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced bracket", text, i)
        elif ch in "+-" and depth == 0:
            # a minus right after '[' or ',' is part of an index and sits at depth 1
            chunk = text[chunk_start:i]
            if chunk.strip():
                out.append((sign, start, chunk))
                sign = 1
            sign = -sign if ch == "-" else sign
            chunk_start = i + 1
            start = i + 1
        i += 1
    if depth != 0:
        raise ParseError("unbalanced bracket", text, len(text))
    chunk = text[chunk_start:]
    if not chunk.strip():
        raise ParseError("expected a term", text, len(text))
    out.append((sign, start, chunk))
    return out


def parse_element(text: str, N: int) -> LieElement:
    """Parse the CLI element syntax into a LieElement of Der C_q."""
    if not text.strip():
        raise ParseError("empty element", text, 0)
    total = LieElement(N)
    if text.strip() == "0":
        return total
    for sign, start, chunk in _split_terms(text):
        coeff = Cyclotomic.from_rational(N, sign)
        body = chunk
        star = _top_level_star(chunk)
        if star is not None:
            try:
                coeff = coeff * parse_cyclotomic(chunk[:star], N)
            except ParseError as exc:
                raise ParseError("bad scalar", text, start + exc.position) from None
            body = chunk[star + 1:]
        m = _BASIS_RE.match(body)
        if not m:
            raise ParseError("expected x[m1,m2], x[n1,n2]d<s> or d<s>", text,
                             start + len(chunk) - len(chunk.lstrip()))
        if m.group(4):
            key: BasisKey = Witt(ExpVec(0, 0), int(m.group(4)))
        else:
            exp = (int(m.group(1)), int(m.group(2)))
            s = int(m.group(3)) if m.group(3) else None
            try:
                key = make_key(N, exp, s)
            except ValueError as exc:
                raise ParseError(str(exc), text, start) from None
        total = total + LieElement(N, {key: coeff})
    return total


def _top_level_star(chunk: str) -> int | None:
    depth = 0
    last = None
    for i, ch in enumerate(chunk):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "*" and depth == 0:
            last = i
    return last


def x(N: int, m1: int, m2: int, coeff=1) -> LieElement:
    return LieElement.basis(N, make_key(N, (m1, m2)), coeff)


def xd(N: int, n1: int, n2: int, s: int, coeff=1) -> LieElement:
    return LieElement.basis(N, make_key(N, (n1, n2), s), coeff)


def lie_from_json(data: Iterable[Mapping], N: int) -> LieElement:
    total = LieElement(N)
    for rec in data:
        total = total + parse_element(rec["key"], N) * parse_cyclotomic(str(rec["coeff"]), N)
    return total

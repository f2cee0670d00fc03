"""Exact arithmetic in the cyclotomic field Q(z), z a primitive N-th root of unity.

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) with
``fractions.Fraction`` coefficients, reduced modulo the N-th cyclotomic
polynomial.  ``MultiPoly`` is a small sparse multivariate polynomial type over
these fields, used for exact symbolic identity checks and by the solver.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence, Union

from .errors import CyclotomicZeroDivisionError, OrderMismatchError, ParseError

Scalar = Union[int, Fraction, "Cyclotomic"]


# ---------------------------------------------------------------------------
# integer / rational polynomial helpers (coefficient lists, low degree first)
# ---------------------------------------------------------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] -= c * y
        a.pop()
        _trim(a)
    return q, a


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant term first."""
    if n < 1:
        raise ValueError("cyclotomic polynomial needs n >= 1")
    p: list = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = _poly_divmod(p, cyclotomic_polynomial(d))
            assert not r
    return tuple(int(c) for c in p)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


def _reduce(p: list, phi: tuple[int, ...]) -> list:
    d = len(phi) - 1
    for i in range(len(p) - 1, d - 1, -1):
        c = p[i]
        if c:
            base = i - d
            for j in range(d):
                if phi[j]:
                    p[base + j] -= c * phi[j]
            p[i] = 0
    p = p[:d]
    p.extend([0] * (d - len(p)))
    return p


# ---------------------------------------------------------------------------
# Cyclotomic field elements
# ---------------------------------------------------------------------------

class Cyclotomic:
    """An element of Q(z), z = exp(2 pi i / N), in reduced power-basis form."""

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs: Iterable = ()):
        phi = cyclotomic_polynomial(order)
        p = [Fraction(c) for c in coeffs]
        if len(p) != len(phi) - 1:
            p = _reduce(p, phi)
        self.order = order
        self.coeffs: tuple[Fraction, ...] = tuple(Fraction(c) for c in p)
        self._hash = None

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_rational(cls, order: int, value) -> "Cyclotomic":
        d = euler_phi(order)
        return cls._raw(order, (Fraction(value),) + (Fraction(0),) * (d - 1))

    @classmethod
    def zero(cls, order: int) -> "Cyclotomic":
        return cls.from_rational(order, 0)

    @classmethod
    def one(cls, order: int) -> "Cyclotomic":
        return cls.from_rational(order, 1)

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                raise OrderMismatchError(
                    f"cannot combine elements of Q(z_{self.order}) and Q(z_{other.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.from_rational(self.order, other)
        return NotImplemented

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, Cyclotomic):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                self._hash = hash((self.order, self.coeffs))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic._raw(self.order, tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic._raw(self.order, tuple(x - y for x, y in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic._raw(self.order, tuple(x * other for x in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if len(self.coeffs) == 1:
            return Cyclotomic._raw(self.order, (self.coeffs[0] * o.coeffs[0],))
        p = _reduce(_poly_mul(self.coeffs, o.coeffs), cyclotomic_polynomial(self.order))
        return Cyclotomic._raw(self.order, tuple(Fraction(c) for c in p))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise CyclotomicZeroDivisionError("division by zero in cyclotomic field")
        if self.is_rational():
            return Cyclotomic.from_rational(self.order, 1 / self.coeffs[0])
        # extended Euclid: find u with u * self = 1 mod Phi_N
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        r0, r1 = phi, _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            qs = _poly_mul(q, s1)
            n = max(len(s0), len(qs))
            s0, s1 = s1, _trim([(s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)
                                for i in range(n)])
        c = r1[0]
        return Cyclotomic(self.order, [x / c for x in s1])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- rendering --------------------------------------------------------
    def __repr__(self) -> str:
        return f"Cyclotomic({self.order}, {render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [_frac_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Cyclotomic":
        return cls(int(data["order"]), [Fraction(c) for c in data["coeffs"]])


@lru_cache(maxsize=4096)
def zeta_pow(N: int, k: int) -> Cyclotomic:
    """q^k for q the canonical primitive N-th root of unity."""
    if N < 2:
        raise ValueError("zeta_pow needs N >= 2")
    e = k % N
    return Cyclotomic(N, [0] * e + [1])


def cyc_arith(a: Cyclotomic, b: Cyclotomic, op: str) -> Cyclotomic:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def as_cyclotomic(value: Scalar, order: int) -> Cyclotomic:
    if isinstance(value, Cyclotomic):
        if value.order != order:
            raise OrderMismatchError(f"expected order {order}, got {value.order}")
        return value
    if isinstance(value, str):
        return parse_cyclotomic(value, order)
    return Cyclotomic.from_rational(order, value)


# ---------------------------------------------------------------------------
# text rendering and parsing
# ---------------------------------------------------------------------------

def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(x: Cyclotomic) -> str:
    parts: list[tuple[bool, str]] = []
    for j, c in enumerate(x.coeffs):
        if not c:
            continue
        neg = c < 0
        a = -c if neg else c
        if j == 0:
            body = _frac_str(a)
        else:
            zj = "z" if j == 1 else f"z^{j}"
            body = zj if a == 1 else f"{_frac_str(a)}*{zj}"
        parts.append((neg, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|(z)|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\)))")


class _Parser:
    """Recursive-descent parser for sums/products of rationals and powers of z."""

    def __init__(self, text: str, order: int):
        self.text = text
        self.order = order
        self.pos = 0

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.pos)

    def peek(self) -> str | None:
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            if self.text[self.pos:].strip():
                self.error("unexpected character")
            return None
        return m.group(m.lastindex)

    def take(self) -> str:
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            self.error("unexpected character")
        self.pos = m.end()
        return m.group(m.lastindex)

    def parse(self) -> Cyclotomic:
        if not self.text.strip():
            self.error("empty scalar")
        value = self.expr()
        if self.peek() is not None:
            self.error("trailing input")
        return value

    def expr(self) -> Cyclotomic:
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Cyclotomic:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        value = self.factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            start = len(self.text) - len(self.text[self.pos:].lstrip())
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    self.pos = start
                    self.error("division by zero")
                value = value / rhs
        return value * sign

    def factor(self) -> Cyclotomic:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok == "(":
            self.take()
            value = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
        elif tok == "z":
            self.take()
            value = zeta_pow(self.order, 1) if self.order >= 2 else Cyclotomic.one(self.order)
        elif tok.isdigit():
            self.take()
            value = Cyclotomic.from_rational(self.order, int(tok))
        else:
            self.error(f"unexpected token {tok!r}")
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            tok = self.peek()
            if tok is None or not tok.isdigit():
                self.error("expected integer exponent")
            k = int(self.take())
            value = value ** (-k if neg else k)
        return value


def parse_cyclotomic(text: str, order: int) -> Cyclotomic:
    """Parse strings such as ``"1/3"``, ``"z+1"`` or ``"1 - 2/5*z^2"``."""
    return _Parser(text, order).parse()


# ---------------------------------------------------------------------------
# sparse multivariate polynomials
# ---------------------------------------------------------------------------

class MultiPoly:
    """Sparse polynomial in named indeterminates with cyclotomic coefficients."""

    __slots__ = ("order", "variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Scalar] | None = None,
                 order: int = 2):
        self.order = order
        self.variables: tuple[str, ...] = tuple(variables)
        clean = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(self.variables):
                raise ValueError("exponent tuple does not match variables")
            c = as_cyclotomic(c, order)
            if c:
                exps = tuple(exps)
                clean[exps] = clean[exps] + c if exps in clean else c
                if not clean[exps]:
                    del clean[exps]
        self.terms: dict[tuple, Cyclotomic] = clean

    # constructors
    @classmethod
    def var(cls, name: str, order: int = 2) -> "MultiPoly":
        return cls((name,), {(1,): 1}, order)

    @classmethod
    def const(cls, value: Scalar, order: int = 2) -> "MultiPoly":
        return cls((), {(): value}, order)

    @classmethod
    def gens(cls, names: str | Sequence[str], order: int = 2) -> tuple["MultiPoly", ...]:
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        return tuple(cls.var(n, order) for n in names)

    # alignment
    def _aligned(self, variables: tuple[str, ...]) -> dict[tuple, Cyclotomic]:
        if variables == self.variables:
            return self.terms
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for exps, c in self.terms.items():
            e = [0] * len(variables)
            for i, k in zip(idx, exps):
                e[i] = k
            out[tuple(e)] = c
        return out

    def _union(self, other: "MultiPoly") -> tuple[str, ...]:
        if other.order != self.order:
            raise OrderMismatchError("polynomials over different cyclotomic fields")
        if other.variables == self.variables:
            return self.variables
        return self.variables + tuple(v for v in other.variables if v not in self.variables)

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(other, self.order)

    def _make(self, variables, terms) -> "MultiPoly":
        p = object.__new__(MultiPoly)
        p.order = self.order
        p.variables = variables
        p.terms = terms
        return p

    # arithmetic
    def __add__(self, other):
        other = self._lift(other)
        vs = self._union(other)
        out = dict(self._aligned(vs))
        for e, c in other._aligned(vs).items():
            s = out[e] + c if e in out else c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return self._make(vs, out)

    __radd__ = __add__

    def __neg__(self):
        return self._make(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        vs = self._union(other)
        a, b = self._aligned(vs), other._aligned(vs)
        out: dict[tuple, Cyclotomic] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out[e] + c1 * c2 if e in out else c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return self._make(vs, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.const(1, self.order)
        for _ in range(k):
            result = result * self
        return result

    # predicates / comparison
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction, Cyclotomic)):
                other = MultiPoly.const(other, self.order)
            else:
                return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def used_variables(self) -> tuple[str, ...]:
        used = set()
        for e in self.terms:
            used.update(v for v, k in zip(self.variables, e) if k)
        return tuple(v for v in self.variables if v in used)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Cyclotomic:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()), Cyclotomic.zero(self.order))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self, var: str) -> int:
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficients_in(self, var: str) -> dict[int, "MultiPoly"]:
        """Split as sum_j p_j * var^j; the p_j do not involve var."""
        if var not in self.variables:
            return {0: self} if self.terms else {}
        i = self.variables.index(var)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            out.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {j: self._make(self.variables, t) for j, t in out.items()}

    def substitute(self, values: Mapping[str, object]) -> "MultiPoly":
        """Replace variables by scalars or polynomials."""
        result = MultiPoly.const(0, self.order)
        keep = [v for v in self.variables if v not in values]
        keep_idx = [self.variables.index(v) for v in keep]
        powers: dict[tuple[str, int], MultiPoly] = {}

        def power(name, k):
            if (name, k) not in powers:
                base = values[name]
                if not isinstance(base, MultiPoly):
                    base = MultiPoly.const(base, self.order)
                powers[(name, k)] = base ** k
            return powers[(name, k)]

        for e, c in self.terms.items():
            term = MultiPoly(tuple(keep), {tuple(e[i] for i in keep_idx): c}, self.order)
            for name, k in zip(self.variables, e):
                if k and name in values:
                    term = term * power(name, k)
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, Scalar]) -> Cyclotomic:
        total = Cyclotomic.zero(self.order)
        vals = [as_cyclotomic(values[v], self.order) if v in values else None
                for v in self.variables]
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    if v is None:
                        raise KeyError("missing value for a variable of the polynomial")
                    t = t * v ** k
            total = total + t
        return total

    def sorted_terms(self) -> list[tuple[tuple, Cyclotomic]]:
        """Terms in graded lexicographic order (highest first)."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            cs = render(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_expand_equal(p: MultiPoly, q: MultiPoly) -> bool:
    """True iff p - q reduces to the zero polynomial."""
    return (p - q).is_zero()


def determinant(matrix: Sequence[Sequence]):
    """Exact determinant by cofactor expansion (entries support + - *)."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    if n == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = None
    for j in range(n):
        entry = matrix[0][j]
        if isinstance(entry, MultiPoly) and entry.is_zero():
            continue
        if not isinstance(entry, MultiPoly) and entry == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        t = entry * determinant(minor)
        if j % 2:
            t = -t
        total = t if total is None else total + t
    return total if total is not None else 0


def rational_grid(limit: int) -> list[Fraction]:
    """Rationals p/q with |p| <= limit, 1 <= q <= limit, deduplicated and sorted."""
    return sorted({Fraction(p, q) for p, q in product(range(-limit, limit + 1), range(1, limit + 1))})

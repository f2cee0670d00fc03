"""Residue-indexed coefficient tables c[m, i] for the inner action x^m v_i = c[m, i] v_(m+i)."""
from __future__ import annotations

import re
from typing import Callable, Iterable, Mapping

from .algebra import ExpVec, residues
from .scalars import Cyclotomic, as_cyclotomic, parse_cyclotomic, render, zeta_pow

Unknown = tuple[ExpVec, ExpVec]

_KEY_RE = re.compile(r"^\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*,\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")
_RES_RE = re.compile(r"^\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*$")


def unknowns(N: int) -> list[Unknown]:
    """The pairs (m, i), m a nonzero residue, in lexicographic order."""
    return [(m, i) for m in residues(N)[1:] for i in residues(N)]


def format_unknown(u: Unknown) -> str:
    (m1, m2), (i1, i2) = u
    return f"({m1},{m2}),({i1},{i2})"


def parse_unknown(text: str) -> Unknown:
    m = _KEY_RE.match(text)
    if not m:
        raise ValueError(f"bad table key {text!r}; expected '(m1,m2),(i1,i2)'")
    a, b, c, d = (int(g) for g in m.groups())
    return ExpVec(a, b), ExpVec(c, d)


def format_residue(r) -> str:
    return f"({r[0]},{r[1]})"


def parse_residue(text: str) -> ExpVec:
    m = _RES_RE.match(text)
    if not m:
        raise ValueError(f"bad residue key {text!r}; expected '(i1,i2)'")
    return ExpVec(int(m.group(1)), int(m.group(2)))


class CTable:
    """Coefficients c[m, i] on (Z^2/NZ^2) x (Z^2/NZ^2) with c[0, i] = 0.

    Missing entries are zero.  Lookups reduce both arguments modulo N.
    """

    __slots__ = ("order", "entries")

    def __init__(self, order: int, entries: Mapping | None = None):
        self.order = order
        clean: dict[Unknown, Cyclotomic] = {}
        for (m, i), c in (entries or {}).items():
            m = ExpVec(*m).residue(order)
            i = ExpVec(*i).residue(order)
            c = as_cyclotomic(c, order)
            if m == (0, 0):
                if c:
                    raise ValueError("c[0, i] must vanish")
                continue
            if c:
                clean[(m, i)] = c
        self.entries = clean

    @classmethod
    def from_function(cls, N: int, f: Callable[[ExpVec, ExpVec], object]) -> "CTable":
        return cls(N, {u: f(*u) for u in unknowns(N)})

    def __call__(self, m, i) -> Cyclotomic:
        N = self.order
        key = (ExpVec(m[0] % N, m[1] % N), ExpVec(i[0] % N, i[1] % N))
        c = self.entries.get(key)
        return c if c is not None else Cyclotomic.zero(N)

    def support(self) -> frozenset[Unknown]:
        return frozenset(self.entries)

    def zero_pattern(self) -> tuple[int, ...]:
        """1 for nonzero unknowns, in the order of ``unknowns(N)``."""
        return tuple(int(u in self.entries) for u in unknowns(self.order))

    def is_trivial(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, CTable):
            return NotImplemented
        return self.order == other.order and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.order, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{format_unknown(u)}: {render(c)}" for u, c in self.sorted_items())
        return f"CTable(N={self.order}, {{{body}}})"

    def sorted_items(self) -> list[tuple[Unknown, Cyclotomic]]:
        return sorted(self.entries.items())

    def map_values(self, f) -> "CTable":
        return CTable(self.order, {u: f(u, c) for u, c in self.entries.items()})

    def to_json(self) -> dict[str, str]:
        return {format_unknown(u): render(c) for u, c in self.sorted_items()}

    @classmethod
    def from_json(cls, data: Mapping[str, object], N: int) -> "CTable":
        return cls(N, {parse_unknown(k): parse_cyclotomic(str(v), N) for k, v in data.items()})


def closed_form_table(N: int, a: int) -> CTable:
    """c[m, k] = q^(m2*k1) - a*q^(m1*k2), the inner coefficients of A_{a,alpha,b}."""
    return CTable.from_function(
        N, lambda m, k: zeta_pow(N, m[1] * k[0]) - a * zeta_pow(N, m[0] * k[1]))


def iter_residue_map(data: Mapping[str, object], N: int) -> Iterable[tuple[ExpVec, Cyclotomic]]:
    for k, v in data.items():
        yield parse_residue(k).residue(N), parse_cyclotomic(str(v), N)

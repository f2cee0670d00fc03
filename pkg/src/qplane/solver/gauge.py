"""Rescaling of weight vectors, constant on residue classes, and canonical orbit representatives.

A gauge t (one nonzero scalar per residue class) acts by
c[m, i] -> (t[i] / t[m+i]) c[m, i].
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from ..algebra import ExpVec, residues
from ..scalars import Cyclotomic, as_cyclotomic, render
from ..tables import CTable, format_residue


@dataclass(frozen=True)
class GaugeTransform:
    N: int
    t: Mapping

    def __post_init__(self):
        clean = {}
        for r in residues(self.N):
            v = as_cyclotomic(self.t.get(r, 1), self.N)
            if not v:
                raise ValueError(f"gauge value at {r} must be nonzero")
            clean[r] = v
        object.__setattr__(self, "t", clean)

    @classmethod
    def identity(cls, N: int) -> "GaugeTransform":
        return cls(N, {})

    def __call__(self, r) -> Cyclotomic:
        return self.t[ExpVec(r[0] % self.N, r[1] % self.N)]

    def is_identity(self) -> bool:
        return all(v == 1 for v in self.t.values())

    def to_json(self) -> dict:
        return {format_residue(r): render(v) for r, v in sorted(self.t.items())}


def gauge_apply(t: GaugeTransform, c: CTable) -> CTable:
    N = c.order
    return c.map_values(lambda u, v: t(u[1]) / t((u[0] + u[1]).residue(N)) * v)


def _tree_edges(c: CTable):
    """Deterministic BFS spanning forest of the support graph.

    Yields (parent, child, unknown, forward) where forward means the unknown
    is c[child - parent, parent]."""
    N = c.order
    res = residues(N)
    nonzero = res[1:]
    seen: set = set()
    for root in res:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        yield None, root, None, None
        while queue:
            p = queue.popleft()
            for m in nonzero:
                ch = (p + m).residue(N)
                if ch in seen:
                    continue
                fwd = (m, p)
                back = ((-m).residue(N), ch)
                if c(*fwd):
                    edge = (fwd, True)
                elif c(*back):
                    edge = (back, False)
                else:
                    continue
                seen.add(ch)
                queue.append(ch)
                yield p, ch, edge[0], edge[1]


def gauge_canonicalize(c: CTable) -> tuple[CTable, GaugeTransform]:
    """Gauge-fix the tree edges of the support graph to 1."""
    N = c.order
    t: dict[ExpVec, Cyclotomic] = {}
    for parent, child, u, forward in _tree_edges(c):
        if parent is None:
            t[child] = Cyclotomic.one(N)
        elif forward:
            # t[p]/t[ch] * c = 1
            t[child] = t[parent] * c(*u)
        else:
            # t[ch]/t[p] * c = 1
            t[child] = t[parent] / c(*u)
    g = GaugeTransform(N, t)
    return gauge_apply(g, c), g


def find_gauge(c1: CTable, c2: CTable) -> GaugeTransform | None:
    """A gauge t with gauge_apply(t, c1) == c2, found by propagation over the support graph."""
    if c1.order != c2.order or c1.support() != c2.support():
        return None
    N = c1.order
    t: dict[ExpVec, Cyclotomic] = {}
    for parent, child, u, _ in _tree_edges(c1):
        if parent is None:
            t[child] = Cyclotomic.one(N)
            continue
        m, i = u
        j = (m + i).residue(N)
        ratio = c2(*u) / c1(*u)  # = t[i] / t[j]
        if i == parent:
            t[j] = t[i] / ratio
        else:
            t[i] = t[j] * ratio
    g = GaugeTransform(N, t)
    return g if gauge_apply(g, c1) == c2 else None


def gauge_equivalent(c1: CTable, c2: CTable) -> bool:
    if c1.order != c2.order:
        return False
    return gauge_canonicalize(c1)[0] == gauge_canonicalize(c2)[0]

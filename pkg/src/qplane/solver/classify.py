"""Labelling solution orbits by comparison of canonical forms with the closed-form tables."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import networkx as nx

from ..algebra import ExpVec, residues
from ..tables import CTable, closed_form_table, format_residue
from .gauge import gauge_canonicalize
from .search import SolutionOrbit

LABELS = ("trivial", "family-2.22", "family-2.24", "other")


def swap_table(c: CTable) -> CTable:
    """Image under the coordinate swap s: c'[m, i] = -c[s m, s i].

    The sign compensates for the bracket coefficient changing sign under s."""
    N = c.order
    return CTable(N, {(ExpVec(m[1], m[0]), ExpVec(i[1], i[0])): -v for (m, i), v in c.entries.items()})


def translate_table(c: CTable, j) -> CTable:
    """c'[m, i] = c[m, i + j]: relabelling the residue classes by a shift."""
    N = c.order
    j = ExpVec(*j)
    return CTable(N, {(m, (i - j).residue(N)): v for (m, i), v in c.entries.items()})


def references(N: int) -> list[tuple[str, CTable]]:
    return [("trivial", CTable(N)),
            ("family-2.22", closed_form_table(N, 0)),
            ("family-2.24", closed_form_table(N, 1))]


def _images(N: int):
    for swap in (False, True):
        for j in residues(N):
            yield j, swap


def _image(c: CTable, j, swap: bool) -> CTable:
    c = translate_table(c, j)
    return swap_table(c) if swap else c


def support_components(c: CTable) -> list[list[ExpVec]]:
    """Connected components of the support graph on all residue classes."""
    N = c.order
    g = nx.Graph()
    g.add_nodes_from(residues(N))
    for (m, i) in c.support():
        g.add_edge(i, (m + i).residue(N))
    return sorted(sorted(comp) for comp in nx.connected_components(g))


def label_of(c: CTable) -> tuple[str, dict]:
    """Label and the symmetry image that matched, as functions of the gauge orbit of c."""
    N = c.order
    canon, _ = gauge_canonicalize(c)
    for name, ref in references(N):
        for j, swap in _images(N):
            if gauge_canonicalize(_image(ref, j, swap))[0] == canon:
                return name, {"translate": format_residue(j), "swap": swap}
    return "other", {}


@dataclass
class ClassificationReport:
    N: int
    orbits: list
    folded: list = field(default_factory=list)
    oracle_checked: bool = False

    def labels(self) -> list[str]:
        return [o.label for o in self.orbits]

    def count(self, label: str) -> int:
        return sum(o.label == label for o in self.orbits)

    def to_json(self) -> dict:
        return {"N": self.N, "orbits": [o.to_json() for o in self.orbits],
                "folded": self.folded, "oracle_checked": self.oracle_checked,
                "counts": {lab: self.count(lab) for lab in LABELS}}


def classify(orbits: list[SolutionOrbit], fold_symmetric: bool = False,
             oracle_checked: bool = False) -> ClassificationReport:
    """Label each orbit; optionally merge an orbit with its coordinate-swap image."""
    out: list[SolutionOrbit] = []
    N = 2
    for o in orbits:
        if o.representative is None:
            out.append(replace(o, label="other", details={**o.details, "decomposable": None}))
            continue
        rep = o.representative
        N = rep.order
        label, via = label_of(rep)
        comps = support_components(rep)
        details = {"via": via, "components": [[format_residue(r) for r in comp] for comp in comps],
                   "decomposable": len(comps) > 1}
        canon, _ = gauge_canonicalize(rep)
        out.append(replace(o, representative=canon, label=label, canonical=True, details=details))
    folded = []
    if fold_symmetric:
        kept: list[SolutionOrbit] = []
        for o in out:
            if o.representative is not None:
                mirror = gauge_canonicalize(swap_table(o.representative))[0]
                partner = next((k for k in kept if k.representative == mirror), None)
                if partner is not None and partner.representative != o.representative:
                    folded.append({"orbit": o.representative.to_json(),
                                   "swap_of": partner.representative.to_json()})
                    continue
            kept.append(o)
        out = kept
    return ClassificationReport(N, out, folded, oracle_checked)

"""Four-copy gluing of a trapezohedron into a cone structure on T^2 x I.

Faces are two-coloured so that faces of one colour only meet along the cone
edges L_i.  Copies are labelled by pairs ``(a, b)``: black faces are glued
across ``b`` (T_a0 to T_a1), white faces across ``a`` (T_0b to T_1b).  Every
identification matches vertices with the same label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import HoledInput
from .geometry import Trapezohedron
from .region import AngleQuad

COPIES: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
BLACK, WHITE = 1, 0
TWO_PI = 2.0 * math.pi


def copy_name(copy: tuple[int, int]) -> str:
    return f"T{copy[0]}{copy[1]}"


@dataclass(frozen=True)
class Pairing:
    first: tuple[tuple[int, int], str]
    second: tuple[tuple[int, int], str]
    color: int


@dataclass(frozen=True)
class EdgeClass:
    members: tuple[tuple[tuple[int, int], str], ...]
    kind: str
    index: int
    total: float
    degenerate: bool

    @property
    def label(self) -> str:
        if self.kind == "cone":
            return f"cone locus {self.index}"
        return "cusp-incident" if self.kind == "cusp" else "regular"


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def groups(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return [sorted(g) for g in out.values()]


@dataclass(frozen=True)
class GluingComplex:
    trap: Trapezohedron
    pairings: tuple[Pairing, ...]
    edge_classes: tuple[EdgeClass, ...]
    vertex_classes: tuple[tuple[tuple[tuple[int, int], str], ...], ...]

    @property
    def copies(self) -> tuple[tuple[int, int], ...]:
        return COPIES

    def partner(self, copy: tuple[int, int], face: str) -> tuple[tuple[int, int], str]:
        for p in self.pairings:
            if p.first == (copy, face):
                return p.second
            if p.second == (copy, face):
                return p.first
        raise KeyError((copy, face))

    def cusps(self) -> list[frozenset[str]]:
        """Ideal vertex classes, with the two ends of a collapsed cone edge
        counted as one point."""
        trap = self.trap
        uf = _UnionFind()
        for cls in self.vertex_classes:
            names = {v for _, v in cls}
            if not all(trap.vertices[v].ideal for v in names):
                continue
            root = min(names)
            for v in names:
                uf.union(root, v)
        for e in trap.edges:
            if e.degenerate:
                uf.union(*e.ends)
        return [frozenset(g) for g in uf.groups()]

    def to_dict(self) -> dict:
        return {
            "copies": [copy_name(c) for c in COPIES],
            "pairings": [
                {
                    "color": "black" if p.color == BLACK else "white",
                    "first": [copy_name(p.first[0]), p.first[1]],
                    "second": [copy_name(p.second[0]), p.second[1]],
                }
                for p in self.pairings
            ],
            "edge_classes": [
                {
                    "label": ec.label,
                    "kind": ec.kind,
                    "index": ec.index,
                    "members": [[copy_name(c), e] for c, e in ec.members],
                    "total_angle": ec.total,
                    "degenerate": ec.degenerate,
                }
                for ec in self.edge_classes
            ],
        }


def build_complex(trap: Trapezohedron) -> GluingComplex:
    """Pair the faces of four copies of ``trap`` and compute edge orbits."""
    if trap.is_holed:
        raise HoledInput(f"holed edges {sorted(trap.holed_edges)}; gluing needs a plain trapezohedron")
    pairings = []
    for f in trap.faces:
        for j in (0, 1):
            if f.color == BLACK:
                a, b = (j, 0), (j, 1)
            else:
                a, b = (0, j), (1, j)
            pairings.append(Pairing((a, f.name), (b, f.name), f.color))

    edges_of_face = {f.name: [e for e in trap.edges if f.name in e.faces] for f in trap.faces}
    e_uf, v_uf = _UnionFind(), _UnionFind()
    for copy in COPIES:
        for e in trap.edges:
            e_uf.find((copy, e.name))
        for v in trap.vertices:
            v_uf.find((copy, v))
    for p in pairings:
        (ca, face), (cb, _) = p.first, p.second
        for e in edges_of_face[face]:
            e_uf.union((ca, e.name), (cb, e.name))
        for v in trap.face(face).vertices:
            v_uf.union((ca, v), (cb, v))

    by_name = {e.name: e for e in trap.edges}
    classes = []
    for members in e_uf.groups():
        names = {name for _, name in members}
        assert len(names) == 1, "identity gluing never mixes edge labels"
        e = by_name[names.pop()]
        classes.append(EdgeClass(
            tuple(members), e.kind, e.index,
            total=sum(by_name[n].measured for _, n in members),
            degenerate=e.degenerate,
        ))
    classes.sort(key=lambda ec: ({"cone": 0, "cusp": 1, "regular": 2}[ec.kind], ec.index, ec.members))
    return GluingComplex(trap, tuple(pairings), tuple(classes),
                         tuple(tuple(g) for g in v_uf.groups()))


@dataclass(frozen=True)
class ClassCheck:
    edge_class: EdgeClass
    expected: float
    passed: bool


@dataclass(frozen=True)
class ConeReport:
    angles: AngleQuad
    checks: tuple[ClassCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "alpha": list(self.angles.alpha),
            "cone_angles": list(self.angles.theta),
            "ok": self.ok,
            "classes": [
                {
                    "label": c.edge_class.label,
                    "size": len(c.edge_class.members),
                    "total_angle": c.edge_class.total,
                    "expected": c.expected,
                    "degenerate": c.edge_class.degenerate,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }


def verify_cone_structure(gc: GluingComplex, a: AngleQuad, tol: float = 1e-8) -> ConeReport:
    """Compare each edge class's total angle with the cone condition.

    Cone classes of L_i must total ``2 alpha_i``; every other class must
    close up to ``2 pi``.
    """
    checks = []
    for ec in gc.edge_classes:
        expected = 2.0 * a.alpha[ec.index - 1] if ec.kind == "cone" else TWO_PI
        checks.append(ClassCheck(ec, expected, abs(ec.total - expected) <= tol))
    return ConeReport(a, tuple(checks))

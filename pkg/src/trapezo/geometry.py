"""Explicit trapezohedra in the upper half-space model.

The two ideal vertices away from the cone edges sit at the origin O of the
boundary plane and at infinity.  Looking down from infinity, the polyhedron
projects onto a rectangle P1P2P3P4 containing O; the four faces through O are
carried by hemispheres over circles C_i through O, the four faces through
infinity by vertical planes over the rectangle sides.

Points in the boundary plane are numpy arrays of shape (2,); a point of
hyperbolic space is ``(x, y, h)`` with height ``h > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DegenerateCircle, NegativeHeight, NotRealizable
from .region import CosQuad, ShapeParams, angles_of_shape

RIGHT = math.pi / 2
IDEAL_REL = 1e-10
HOLE_REL = 1e-12

ORIGIN = np.zeros(2)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


def _nxt(i: int) -> int:
    return i % 4 + 1


def _prv(i: int) -> int:
    return (i - 2) % 4 + 1


# --------------------------------------------------------------------------
# planar primitives


def rot90(v, k: int = 1) -> np.ndarray:
    """Rotate planar vector(s) counter-clockwise by ``k`` quarter turns."""
    v = np.asarray(v, dtype=float)
    for _ in range(k % 4):
        v = np.stack([-v[..., 1], v[..., 0]], axis=-1)
    return v


def circle_intersections(c1, r1: float, c2, r2: float) -> list[np.ndarray]:
    """Intersection points of two circles (0, 1 or 2 of them)."""
    c1 = np.asarray(c1, dtype=float)
    c2 = np.asarray(c2, dtype=float)
    tiny = np.finfo(float).tiny
    if not (r1 > tiny and r2 > tiny):
        raise DegenerateCircle(f"radii {r1}, {r2} underflow")
    delta = c2 - c1
    d = math.hypot(*delta)
    if d == 0.0 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    h2 = (r1 - a) * (r1 + a)
    base = c1 + (a / d) * delta
    if h2 <= 0.0:
        return [base]
    off = (math.sqrt(h2) / d) * np.array([-delta[1], delta[0]])
    return [base + off, base - off]


def line_intersection(a1, a2, b1, b2) -> np.ndarray | None:
    """Intersection of the infinite lines a1a2 and b1b2; None if parallel."""
    a1, a2, b1, b2 = (np.asarray(x, dtype=float) for x in (a1, a2, b1, b2))
    da = a2 - a1
    db = b2 - b1
    den = da[0] * db[1] - da[1] * db[0]
    if den == 0.0:
        return None
    w = b1 - a1
    s = (w[0] * db[1] - w[1] * db[0]) / den
    return a1 + s * da


def segment_parameter(x, a, b) -> float:
    """Affine coordinate of ``x`` along ``a -> b`` (0 at a, 1 at b)."""
    x, a, b = (np.asarray(v, dtype=float) for v in (x, a, b))
    d = b - a
    return float(np.dot(x - a, d) / np.dot(d, d))


# --------------------------------------------------------------------------
# projection


@dataclass(frozen=True)
class Projection:
    """Planar picture of a trapezohedron, seen from infinity.

    Row ``i - 1`` of each array belongs to index ``i``.
    """

    p: np.ndarray
    P: np.ndarray
    R: np.ndarray
    radii: np.ndarray
    S: np.ndarray
    Q: np.ndarray
    t: float

    def positions(self) -> np.ndarray:
        """Affine position of each Q_i along P_i -> P_{i+1}."""
        return np.array([
            segment_parameter(self.Q[i], self.P[i], self.P[(i + 1) % 4]) for i in range(4)
        ])

    def holed(self) -> tuple[bool, ...]:
        """Edges Q_iP_{i+1} whose foot Q_i is not in the half-open side
        [P_i, P_{i+1})."""
        lam = self.positions()
        return tuple(bool(v >= 1.0 - HOLE_REL or v < -HOLE_REL) for v in lam)


def closed_form_points(p1: float, p2: float, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Second intersection S and foot Q for the first corner, written out
    in terms of the two half-extents and the slope."""
    den = p1 * p1 + p2 * p2
    S = np.array([2 * p1 * p2 * (p2 - t * p1) / den, 2 * p1 * p2 * (t * p2 + p1) / den])
    Q = np.array([(p2 - t * p1) / (t * p2 + p1) * p2, p2])
    return S, Q


def build_projection(shape: ShapeParams, scale: float = 1.0) -> Projection:
    """Rectangle, circle centres and the points S_i, Q_i for ``shape``.

    The first half-extent is ``scale``; the rest follow from the ratios.
    ``Q_i`` is always the intersection of the full lines ``O S_i`` and
    ``P_i P_{i+1}``, whether or not it lands on the rectangle side.
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    q, t = shape.q, shape.t
    p = np.empty(4)
    p[0] = scale
    for i in range(3):
        p[i + 1] = q[i] * p[i]
    p1, p2, p3, p4 = p
    P = np.array([(p1, p2), (-p3, p2), (-p3, -p4), (p1, -p4)])
    R = np.array([(p1, t * p1), (-t * p2, p2), (-p3, -t * p3), (t * p4, -p4)])
    radii = p * math.sqrt(1.0 + t * t)
    if np.any(radii <= np.finfo(float).tiny) or not np.all(np.isfinite(radii)):
        raise DegenerateCircle(f"circle radii {radii.tolist()} are not usable")

    S = np.empty((4, 2))
    Q = np.empty((4, 2))
    for i in range(4):
        j = (i + 1) % 4
        pts = circle_intersections(R[i], radii[i], R[j], radii[j])
        if not pts:
            raise DegenerateCircle(f"circles C{i + 1} and C{j + 1} do not meet")
        S[i] = max(pts, key=lambda x: float(np.hypot(*x)))
        foot = line_intersection(ORIGIN, S[i], P[i], P[j])
        if foot is None:
            raise DegenerateCircle(f"line OS{i + 1} is parallel to side P{i + 1}P{j + 1}")
        Q[i] = foot
    return Projection(*(_frozen(a) for a in (p, P, R, radii, S, Q)), t=float(t))


# --------------------------------------------------------------------------
# faces, carriers, dihedral angles


@dataclass(frozen=True)
class Hemisphere:
    center: tuple[float, float]
    radius: float


@dataclass(frozen=True)
class VerticalPlane:
    """Vertical plane over the line through ``a`` and ``b``."""

    a: tuple[float, float]
    b: tuple[float, float]

    def inward_normal(self) -> np.ndarray:
        """Unit horizontal normal pointing to the side containing O."""
        a = np.asarray(self.a)
        d = np.asarray(self.b) - a
        n = np.array([-d[1], d[0]]) / math.hypot(*d)
        return n if np.dot(ORIGIN - a, n) > 0 else -n

    def signed_distance(self, x) -> float:
        """Distance from ``x`` to the line, positive on the O side."""
        return float(np.dot(np.asarray(x) - np.asarray(self.a), self.inward_normal()))


Carrier = Hemisphere | VerticalPlane


def dihedral(f: Carrier, g: Carrier) -> float:
    """Interior dihedral angle between two face carriers.

    The polyhedron lies above every hemisphere and on the O side of every
    vertical plane, so the angle is pi minus the angle between the inward
    normals along the common edge.
    """
    if isinstance(f, VerticalPlane) and isinstance(g, Hemisphere):
        f, g = g, f
    if isinstance(f, Hemisphere) and isinstance(g, Hemisphere):
        d2 = float(np.sum((np.asarray(f.center) - np.asarray(g.center)) ** 2))
        cos = (d2 - f.radius ** 2 - g.radius ** 2) / (2.0 * f.radius * g.radius)
        return math.acos(min(1.0, max(-1.0, cos)))
    if isinstance(f, Hemisphere):
        r = f.radius
        sd = g.signed_distance(f.center)
        return math.atan2(math.sqrt(max(0.0, (r - sd) * (r + sd))), sd)
    cos = -float(np.dot(f.inward_normal(), g.inward_normal()))
    return math.acos(min(1.0, max(-1.0, cos)))


@dataclass(frozen=True)
class Vertex:
    name: str
    xy: tuple[float, float] | None  # None only for the vertex at infinity
    height: float
    ideal: bool

    @property
    def point(self) -> tuple[float, float, float] | None:
        if self.xy is None:
            return None
        return (self.xy[0], self.xy[1], self.height)


@dataclass(frozen=True)
class Face:
    name: str
    vertices: tuple[str, ...]
    carrier: Carrier
    color: int
    holed: bool = False


@dataclass(frozen=True)
class Edge:
    name: str
    kind: str  # "cone", "cusp" or "regular"
    index: int
    ends: tuple[str, str]
    faces: tuple[str, str]
    expected: float
    measured: float
    holed: bool = False
    degenerate: bool = False


@dataclass(frozen=True)
class Trapezohedron:
    projection: Projection
    cosines: tuple[float, float, float, float]
    vertices: Mapping[str, Vertex]
    faces: tuple[Face, ...]
    edges: tuple[Edge, ...]
    _face_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_face_index", {f.name: f for f in self.faces})

    def face(self, name: str) -> Face:
        return self._face_index[name]

    def edge(self, name: str) -> Edge:
        for e in self.edges:
            if e.name == name:
                return e
        raise KeyError(name)

    @property
    def apex_origin(self) -> Vertex:
        return self.vertices["O"]

    @property
    def apex_infinity(self) -> Vertex:
        return self.vertices["inf"]

    @property
    def Pv(self) -> tuple[Vertex, ...]:
        return tuple(self.vertices[f"P{i}"] for i in range(1, 5))

    @property
    def Qv(self) -> tuple[Vertex, ...]:
        return tuple(self.vertices[f"Q{i}"] for i in range(1, 5))

    @property
    def holed_edges(self) -> frozenset[int]:
        return frozenset(e.index for e in self.edges if e.holed)

    @property
    def is_holed(self) -> bool:
        return any(e.holed for e in self.edges)

    def ideal_vertices(self) -> list[str]:
        """Distinct ideal points; P_i and Q_i coincide when alpha_i = 0."""
        seen = []
        for v in self.vertices.values():
            if v.ideal and not (v.name.startswith("Q") and self.cosines[int(v.name[1]) - 1] == 1.0):
                seen.append(v.name)
        return seen

    def dihedral_errors(self) -> dict[str, float]:
        """|measured - expected| on every edge that is neither holed nor
        collapsed to a point."""
        return {
            e.name: abs(e.measured - e.expected)
            for e in self.edges
            if not e.holed and not e.degenerate
        }

    def to_dict(self) -> dict:
        proj = self.projection
        return {
            "cosines": list(self.cosines),
            "t": proj.t,
            "p": proj.p.tolist(),
            "vertices": [
                {
                    "name": v.name,
                    "point": None if v.xy is None else [v.xy[0], v.xy[1], v.height],
                    "at_infinity": v.xy is None,
                    "ideal": v.ideal,
                }
                for v in self.vertices.values()
            ],
            "faces": [
                {
                    "name": f.name,
                    "vertices": list(f.vertices),
                    "carrier": (
                        {"type": "hemisphere", "center": list(f.carrier.center), "radius": f.carrier.radius}
                        if isinstance(f.carrier, Hemisphere)
                        else {"type": "vertical_plane", "through": [list(f.carrier.a), list(f.carrier.b)]}
                    ),
                    "color": "black" if f.color else "white",
                    "holed": f.holed,
                }
                for f in self.faces
            ],
            "edges": [
                {
                    "name": e.name,
                    "kind": e.kind,
                    "index": e.index,
                    "ends": list(e.ends),
                    "faces": list(e.faces),
                    "expected": e.expected,
                    "measured": e.measured,
                    "holed": e.holed,
                    "degenerate": e.degenerate,
                }
                for e in self.edges
            ],
            "projection": {
                "P": proj.P.tolist(),
                "R": proj.R.tolist(),
                "radii": proj.radii.tolist(),
                "S": proj.S.tolist(),
                "Q": proj.Q.tolist(),
            },
        }


def hemisphere_height(x, center, radius: float) -> float:
    """Height of the hemisphere over ``x``; raises if ``x`` is outside it."""
    d = math.hypot(*(np.asarray(x, dtype=float) - np.asarray(center, dtype=float)))
    h2 = (radius - d) * (radius + d)
    if h2 < -1e-9 * radius * radius:
        raise NegativeHeight(f"point {np.asarray(x).tolist()} lies outside circle of radius {radius}")
    return math.sqrt(max(0.0, h2))


def _face_plan():
    """Combinatorics shared by every trapezohedron: (faces, edges) with
    vertex/face names only."""
    faces = []
    for i in range(1, 5):
        faces.append((f"F{i}", ("O", f"Q{_prv(i)}", f"P{i}", f"Q{i}"), i % 2))
    for i in range(1, 5):
        faces.append((f"V{i}", ("inf", f"P{i}", f"Q{i}", f"P{_nxt(i)}"), i % 2))
    edges = []
    for i in range(1, 5):
        n = _nxt(i)
        edges.append((f"L{i}", "cone", i, (f"P{i}", f"Q{i}"), (f"F{i}", f"V{i}")))
        edges.append((f"OQ{i}", "cusp", i, ("O", f"Q{i}"), (f"F{i}", f"F{n}")))
        edges.append((f"infP{i}", "cusp", i, ("inf", f"P{i}"), (f"V{_prv(i)}", f"V{i}")))
        edges.append((f"Q{i}P{n}", "regular", i, (f"Q{i}", f"P{n}"), (f"V{i}", f"F{n}")))
    return faces, edges


FACE_PLAN, EDGE_PLAN = _face_plan()


def measure_dihedrals(trap: Trapezohedron) -> np.ndarray:
    """Dihedral angle of every edge (in ``trap.edges`` order), computed from
    the face carriers alone."""
    return np.array([dihedral(trap.face(a).carrier, trap.face(b).carrier)
                     for a, b in (e.faces for e in trap.edges)])


def lift(proj: Projection, c: CosQuad) -> Trapezohedron:
    """Place the vertices in hyperbolic space and assemble the polyhedron.

    ``P~_i`` and ``Q~_i`` sit on the hemisphere over ``C_i`` above ``P_i`` and
    ``Q_i``.  When ``c_i = 1`` the edge L_i has shrunk to an ideal point and
    both ends are put at ``P_i`` on the boundary plane.  Edges ``Q_iP_{i+1}``
    whose foot ``Q_i`` falls outside the side are marked holed together with
    their two faces.
    """
    cos = tuple(float(x) for x in c)
    verts: dict[str, Vertex] = {
        "O": Vertex("O", (0.0, 0.0), 0.0, True),
        "inf": Vertex("inf", None, math.inf, True),
    }
    for i in range(4):
        name = i + 1
        R, r = proj.R[i], float(proj.radii[i])
        Pxy = tuple(float(v) for v in proj.P[i])
        if cos[i] == 1.0:
            verts[f"P{name}"] = Vertex(f"P{name}", Pxy, 0.0, True)
            verts[f"Q{name}"] = Vertex(f"Q{name}", Pxy, 0.0, True)
            continue
        hp = hemisphere_height(Pxy, R, r)
        Qxy = tuple(float(v) for v in proj.Q[i])
        hq = hemisphere_height(Qxy, R, r)
        verts[f"P{name}"] = Vertex(f"P{name}", Pxy, hp, hp < IDEAL_REL * r)
        verts[f"Q{name}"] = Vertex(f"Q{name}", Qxy, hq, hq < IDEAL_REL * r)

    holed = proj.holed()
    holed_faces = set()
    for i in range(1, 5):
        if holed[i - 1]:
            holed_faces |= {f"V{i}", f"F{_nxt(i)}"}

    faces = []
    for name, vs, color in FACE_PLAN:
        i = int(name[1])
        if name.startswith("F"):
            carrier = Hemisphere(tuple(proj.R[i - 1].tolist()), float(proj.radii[i - 1]))
        else:
            carrier = VerticalPlane(tuple(proj.P[i - 1].tolist()), tuple(proj.P[i % 4].tolist()))
        faces.append(Face(name, vs, carrier, color, name in holed_faces))
    faces = tuple(faces)

    by_name = {f.name: f for f in faces}
    edges = []
    for name, kind, i, ends, fs in EDGE_PLAN:
        expected = math.acos(cos[i - 1]) if kind == "cone" else RIGHT
        measured = dihedral(by_name[fs[0]].carrier, by_name[fs[1]].carrier)
        edges.append(Edge(
            name, kind, i, ends, fs, expected, measured,
            holed=kind == "regular" and holed[i - 1],
            degenerate=kind == "cone" and cos[i - 1] == 1.0,
        ))
    return Trapezohedron(proj, cos, verts, faces, tuple(edges))


def build(shape: ShapeParams, scale: float = 1.0) -> Trapezohedron:
    """Projection plus lift for a shape in the realizable region."""
    trap = lift(build_projection(shape, scale), angles_of_shape(shape))
    if trap.is_holed:
        raise NotRealizable(
            f"edges {sorted(trap.holed_edges)} have non-positive length; use build_holed"
        )
    return trap


def build_holed(shape: ShapeParams, scale: float = 1.0) -> Trapezohedron:
    """Trapezohedron for any shape; sides that would need a negative-length
    edge get a hole.

    The construction is the same as :func:`build`: the feet ``Q_i`` are
    line intersections regardless of where they land.  Holed edges are
    excluded from :meth:`Trapezohedron.dihedral_errors`.
    """
    return lift(build_projection(shape, scale), angles_of_shape(shape))

"""Realizability region of trapezohedron dihedral angles.

Angles ``alpha`` at the four edges L1..L4 live in [0, pi)^4.  Everything here
works in cosine coordinates ``c = cos(alpha)`` where the region is cut out by
four quartic polynomials ``phi_i``.  A second, independent route goes through
the similarity-invariant shape parameters ``(q, t)``: solve for them, then test
the slope inequality for each edge.

Edge indices are 1-based and cyclic (edge 4 sits between L4 and L1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidStart, NoConvergence

DEFAULT_TOL = 1e-13
DEFAULT_BAND = 1e-9

#: Largest angle for which the whole cube [0, a)^4 is realizable.
CUBE_ANGLE = math.acos(1.0 - math.sqrt(2.0))
#: Root of c^2 - c - 1 in (-1, 0); (g, g, g, 1) lies on two boundary strata.
DOUBLE_POINT_COS = (1.0 - math.sqrt(5.0)) / 2.0


def _quad(values: Iterable[float], name: str) -> tuple[float, float, float, float]:
    out = tuple(float(v) for v in values)
    if len(out) != 4:
        raise ValueError(f"{name} needs exactly 4 values, got {len(out)}")
    if not all(math.isfinite(v) for v in out):
        raise ValueError(f"{name} must be finite: {out}")
    return out  # type: ignore[return-value]


def rotate(values: Sequence, k: int) -> tuple:
    """Cyclic shift so that ``rotate(v, k)[j] == v[(j + k) % 4]``."""
    k %= 4
    return tuple(values[k:]) + tuple(values[:k])


@dataclass(frozen=True)
class AngleQuad:
    """Dihedral angles at L1..L4, in radians.  Cone angles are twice these."""

    alpha: tuple[float, float, float, float]

    def __post_init__(self):
        a = _quad(self.alpha, "alpha")
        if not all(0.0 <= v < math.pi for v in a):
            raise ValueError(f"angles must lie in [0, pi): {a}")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def from_degrees(cls, values: Iterable[float]) -> "AngleQuad":
        return cls(tuple(math.radians(v) for v in values))

    @property
    def theta(self) -> tuple[float, ...]:
        return tuple(2.0 * a for a in self.alpha)


@dataclass(frozen=True)
class CosQuad:
    c: tuple[float, float, float, float]

    def __post_init__(self):
        c = _quad(self.c, "c")
        if not all(-1.0 < v <= 1.0 for v in c):
            raise ValueError(f"cosines must lie in (-1, 1]: {c}")
        object.__setattr__(self, "c", c)

    def __iter__(self):
        return iter(self.c)

    def __getitem__(self, i):
        return self.c[i]


@dataclass(frozen=True)
class ShapeParams:
    """Side ratios ``q_i = p_{i+1}/p_i`` of the projected rectangle and the
    slope ``t`` of the line from O to the first circle centre."""

    q: tuple[float, float, float, float]
    t: float

    def __post_init__(self):
        q = _quad(self.q, "q")
        t = float(self.t)
        if not all(v > 0 for v in q):
            raise ValueError(f"ratios q must be positive: {q}")
        if not math.isfinite(t) or t < 0:
            raise ValueError(f"slope t must be >= 0, got {t}")
        prod = q[0] * q[1] * q[2] * q[3]
        if abs(prod - 1.0) > 1e-12:
            raise ValueError(f"ratios must multiply to 1 (got {prod!r})")
        for v in q:
            if t < 0.5 * (v - 1.0 / v) - 1e-9 * (1.0 + t):
                raise ValueError(f"t={t} violates t >= (q - 1/q)/2 for q={v}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t", t)


class Kind(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class Classification:
    """Position of a cosine quadruple relative to the realizable region.

    ``edges`` holds the 1-based edges that sit on the boundary band
    (``BOUNDARY``) or strictly violate their inequality (``EXTERIOR``).
    """

    kind: Kind
    edges: frozenset[int] = frozenset()
    phi: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", frozenset(self.edges))
        if (self.kind is Kind.INTERIOR) != (not self.edges):
            raise ValueError("interior points carry no edges and vice versa")

    @property
    def is_interior(self) -> bool:
        return self.kind is Kind.INTERIOR


@dataclass(frozen=True)
class PathCrossing:
    s_star: float
    edges: frozenset[int]
    post_state: frozenset[int]
    kind: Kind
    alpha: AngleQuad


# --------------------------------------------------------------------------
# cosine coordinates and the phi polynomials


_ABOVE_MINUS_ONE = math.nextafter(-1.0, 0.0)


def cos_quad(a: AngleQuad) -> CosQuad:
    # angles within an ulp of pi round to cos = -1; keep them in (-1, 1]
    return CosQuad(tuple(max(math.cos(x), _ABOVE_MINUS_ONE) for x in a.alpha))


def angles_of(c: CosQuad) -> AngleQuad:
    return AngleQuad(tuple(math.acos(x) for x in c.c))


def phi_all(c) -> np.ndarray:
    """All four phi polynomials at once; ``c`` has shape (..., 4)."""
    c = np.asarray(c, dtype=float)
    a = c
    b = np.roll(c, -1, axis=-1)
    x = np.roll(c, -2, axis=-1)
    y = np.roll(c, -3, axis=-1)
    ab = a * b
    s = a + b
    return ab * (ab + 1.0) * x * y - ab * s * (x + y) + s * s - ab - 1.0


def phi(i: int, c) -> float:
    """Value of the i-th (1-based, cyclic) boundary polynomial at ``c``."""
    a, b, x, y = rotate(tuple(c), i - 1)
    ab = a * b
    s = a + b
    return ab * (ab + 1.0) * x * y - ab * s * (x + y) + s * s - ab - 1.0


_OK, _BOUNDARY, _EXTERIOR = 0, 1, 2


def edge_states(c, eps_b: float = DEFAULT_BAND) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge state codes (0 ok, 1 boundary, 2 exterior) and phi values.

    Vectorised over leading axes of ``c``.
    """
    c = np.asarray(c, dtype=float)
    ph = phi_all(c)
    c1 = np.roll(c, -1, axis=-1)
    c2 = np.roll(c, -2, axis=-1)
    c3 = np.roll(c, -3, axis=-1)
    ordered = (c <= c2) & (c1 <= c3)
    band = np.abs(ph) <= eps_b
    # outside the ordered wedge the band is meaningless; fall back to the sign
    ok = (c + c1 > 0) | (ph < -eps_b) | (band & ~ordered & (ph < 0))
    boundary = ~ok & band & ordered
    states = np.where(ok, _OK, np.where(boundary, _BOUNDARY, _EXTERIOR))
    return states, ph


def kinds_of_states(states: np.ndarray) -> np.ndarray:
    """Collapse per-edge states (..., 4) to kind codes (0/1/2)."""
    return np.max(states, axis=-1)


_KIND_OF_CODE = {_OK: Kind.INTERIOR, _BOUNDARY: Kind.BOUNDARY, _EXTERIOR: Kind.EXTERIOR}


def _classification(states: np.ndarray, ph: np.ndarray) -> Classification:
    code = int(states.max())
    kind = _KIND_OF_CODE[code]
    edges = frozenset(i + 1 for i in range(4) if states[i] == code and code != _OK)
    return Classification(kind, edges, tuple(float(v) for v in ph))


def classify(c: CosQuad, eps_b: float = DEFAULT_BAND) -> Classification:
    """Classify ``c`` as interior, on a boundary stratum, or exterior.

    An edge ``i`` is fine when ``c_i + c_{i+1} > 0`` or ``phi_i < -eps_b``.
    Within ``|phi_i| <= eps_b`` it is reported as a boundary edge if the
    ordering ``c_i <= c_{i+2}, c_{i+1} <= c_{i+3}`` holds, otherwise the sign
    of ``phi_i`` decides.  Exterior edges take precedence over boundary ones.
    """
    if eps_b <= 0:
        raise ValueError("eps_b must be positive")
    states, ph = edge_states(np.asarray(c.c), eps_b)
    return _classification(states, ph)


def in_universal_cube(a: AngleQuad) -> bool:
    return all(x < CUBE_ANGLE for x in a.alpha)


# --------------------------------------------------------------------------
# shape parameters


def _lower_slopes(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Roots ``r_i`` of ``g_i(t) = t + c_i sqrt(1 + t^2)`` (0 where c_i >= 0)
    and their maximum ``t_lo`` per row."""
    neg = c < 0
    one_m_c2 = (1.0 - c) * (1.0 + c)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(neg, -c / np.sqrt(one_m_c2), 0.0)
    return r, r.max(axis=-1)


def _factors(c, r, t_lo, u):
    """``g_i`` and ``d/dt log g_i`` at ``t = t_lo + u``.

    For negative ``c_i`` the factor is written as
    ``(1 - c_i^2)(t - r_i)(t + r_i) / (t - c_i sqrt(1 + t^2))`` with
    ``t - r_i = (t_lo - r_i) + u``: every term is non-negative, so tiny factors
    near ``t_lo`` keep full relative precision.
    """
    t = (t_lo + u)[:, None]
    s = np.sqrt(1.0 + t * t)
    neg = c < 0
    one_m_c2 = (1.0 - c) * (1.0 + c)
    gap = (t_lo[:, None] - r) + u[:, None]
    g = np.where(neg, one_m_c2 * gap * (t + r) / (t - c * s), t + c * s)
    dg = 1.0 + c * t / s
    with np.errstate(divide="ignore", invalid="ignore"):
        dlog = dg / g
    return g, dlog


def solve_shapes(c, tol: float = DEFAULT_TOL, max_iter: int = 200):
    """Vectorised shape solver.

    Parameters
    ----------
    c : array_like, shape (N, 4)
        Cosines in (-1, 1].
    tol : float
        Accepted bound on ``|prod(q) - 1|``.  Iteration continues down to
        ``min(tol, DEFAULT_TOL)`` regardless.

    Returns
    -------
    q : ndarray, shape (N, 4)
    t : ndarray, shape (N,)
    residual : ndarray, shape (N,)
        ``|g(t) - 1|`` evaluated from the returned ratios.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = np.atleast_2d(np.asarray(c, dtype=float))
    if np.any(c <= -1.0) or np.any(c > 1.0):
        raise ValueError("cosines must lie in (-1, 1]")
    n = c.shape[0]
    r, t_lo = _lower_slopes(c)

    # bracket [0, hi] in u = t - t_lo; log g is -inf or <= 0 at u = 0
    t_hi = np.maximum(t_lo, 1.0)
    for _ in range(128):
        g, _unused = _factors(c, r, t_lo, t_hi - t_lo)
        short = ~(np.prod(g, axis=1) >= 1.0)
        if not short.any():
            break
        t_hi = np.where(short, 2.0 * t_hi, t_hi)
    else:
        raise NoConvergence("could not bracket g(t) = 1")
    lo = np.zeros(n)
    hi = t_hi - t_lo

    # always polish to working precision; tol only decides acceptance
    target = min(tol, DEFAULT_TOL)
    u = hi.copy()
    done = np.all(c == 1.0, axis=1)
    u[done] = 0.0
    for _ in range(max_iter):
        act = ~done
        if not act.any():
            break
        g, dlog = _factors(c[act], r[act], t_lo[act], u[act])
        prod = np.prod(g, axis=1)
        fin = np.abs(prod - 1.0) <= target
        with np.errstate(divide="ignore"):
            h = np.log(prod)
        below = h < 0
        lo_a = np.where(below, u[act], lo[act])
        hi_a = np.where(below, hi[act], u[act])
        step = u[act] - h / dlog.sum(axis=1)
        bad = ~((step > lo_a) & (step < hi_a))
        nxt = np.where(bad, 0.5 * (lo_a + hi_a), step)
        stuck = nxt == u[act]
        lo[act], hi[act] = lo_a, hi_a
        u[act] = np.where(fin | stuck, u[act], nxt)
        done[np.flatnonzero(act)[fin | stuck]] = True

    g, _unused = _factors(c, r, t_lo, u)
    residual = np.abs(np.prod(g, axis=1) - 1.0)
    if np.any(residual > tol) or np.any(g <= 0):
        worst = int(np.argmax(residual))
        raise NoConvergence(
            f"residual {residual[worst]:.3e} > tol {tol:.1e} at c={c[worst].tolist()}"
        )
    return g, t_lo + u, residual


def solve_shape(c: CosQuad, tol: float = DEFAULT_TOL) -> ShapeParams:
    """Unique ``(q, t)`` whose dihedral angles have cosines ``c``.

    ``t`` is the root of ``prod_i (t + c_i sqrt(1 + t^2)) = 1`` on the branch
    where every factor is positive, and ``q_i`` are those factors.
    """
    q, t, _ = solve_shapes(np.asarray(c.c)[None, :], tol)
    return ShapeParams(tuple(q[0]), float(t[0]))


def shape_residual(p: ShapeParams) -> float:
    return abs(math.prod(p.q) - 1.0)


def angles_of_shapes(q, t) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    t = np.asarray(t, dtype=float)[..., None]
    return (q - t) / np.sqrt(1.0 + t * t)


def angles_of_shape(p: ShapeParams) -> CosQuad:
    """Cosines of the dihedral angles at L1..L4 for shape ``p``."""
    s = math.sqrt(1.0 + p.t * p.t)
    return CosQuad(tuple(min(1.0, (q - p.t) / s) for q in p.q))


def slope_margins_array(q, t) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    t = np.asarray(t, dtype=float)[..., None]
    qn = np.roll(q, -1, axis=-1)
    return q + qn - (1.0 - q * qn) * t


def slope_margins(p: ShapeParams) -> tuple[float, ...]:
    """``q_i + q_{i+1} - (1 - q_i q_{i+1}) t`` per edge; positive means the
    edge between L_i and L_{i+1} has positive length."""
    return tuple(float(v) for v in slope_margins_array(p.q, p.t))


def realizable_edges(p: ShapeParams) -> tuple[bool, bool, bool, bool]:
    return tuple(m > 0 for m in slope_margins(p))  # type: ignore[return-value]


# --------------------------------------------------------------------------
# paths


def _interior_along(a0: np.ndarray, a1: np.ndarray, s: np.ndarray, eps_b: float):
    alphas = (1.0 - s)[:, None] * a0 + s[:, None] * a1
    states, _ = edge_states(np.cos(alphas), eps_b)
    return kinds_of_states(states) == _OK


def trace_path(
    a_start: AngleQuad,
    a_end: AngleQuad,
    tol: float = 1e-9,
    eps_b: float = DEFAULT_BAND,
    max_samples: int = 2**20,
) -> PathCrossing | None:
    """Walk the straight segment from ``a_start`` to ``a_end`` in angle space
    and report where it first leaves the realizable region.

    The segment is scanned on a uniform grid of step ``max(tol,
    1/max_samples)``; the first bracket that changes kind is refined by
    bisection until it is shorter than ``tol``.  Returns ``None`` when every
    sample, including ``s = 1``, is interior.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not classify(cos_quad(a_start), eps_b).is_interior:
        raise InvalidStart(f"start {a_start.alpha} is not in the realizable region")
    a0 = np.asarray(a_start.alpha)
    a1 = np.asarray(a_end.alpha)
    n = int(min(math.ceil(1.0 / tol), max_samples))
    s = np.linspace(0.0, 1.0, n + 1)
    inside = _interior_along(a0, a1, s, eps_b)
    if inside.all():
        return None
    k = int(np.argmin(inside))
    lo, hi = float(s[k - 1]), float(s[k])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _interior_along(a0, a1, np.array([mid]), eps_b)[0]:
            lo = mid
        else:
            hi = mid

    def at(x: float) -> AngleQuad:
        return AngleQuad(tuple(np.clip((1.0 - x) * a0 + x * a1, 0.0, math.nextafter(math.pi, 0))))

    hit = classify(cos_quad(at(hi)), eps_b)
    past = classify(cos_quad(at(min(1.0, hi + max(8 * tol, 1e-7)))), eps_b)
    post = past.edges if past.kind is Kind.EXTERIOR else frozenset()
    return PathCrossing(hi, hit.edges, post, hit.kind, at(hi))


def ordered_rotation(c: Sequence[float]) -> int:
    """Smallest k with ``c'_1 <= c'_3`` and ``c'_2 <= c'_4`` for
    ``c' = rotate(c, k)``; one always exists."""
    for k in range(4):
        a, b, x, y = rotate(tuple(c), k)
        if a <= x and b <= y:
            return k
    raise AssertionError("unreachable: some rotation is always ordered")


def connecting_path(c: CosQuad, n: int = 1000) -> np.ndarray:
    """Witness path from ``c`` to ``(1, 1, 1, 1)`` inside the region.

    After rotating so that ``c1 <= c3`` and ``c2 <= c4``, the first leg moves
    ``(c3, c4)`` straight to ``(c1, c2)``; the second leg slides the
    alternating point ``(c1, c2, c1, c2)`` to all ones.  Returns ``n`` points
    in the original index order.
    """
    if n < 2:
        raise ValueError("need at least two points")
    k = ordered_rotation(c.c)
    a, b, x, y = rotate(c.c, k)
    n1 = n // 2
    s1 = np.linspace(0.0, 1.0, n1)[:, None]
    leg1 = np.hstack([
        np.full((n1, 1), a), np.full((n1, 1), b),
        x + s1 * (a - x), y + s1 * (b - y),
    ])
    s2 = np.linspace(0.0, 1.0, n - n1)[:, None]
    u = a + s2 * (1.0 - a)
    v = b + s2 * (1.0 - b)
    leg2 = np.hstack([u, v, u, v])
    path = np.vstack([leg1, leg2])
    # undo the rotation: rotated column j holds original index (j + k) % 4
    out = np.empty_like(path)
    for j in range(4):
        out[:, (j + k) % 4] = path[:, j]
    return out


def slice_grid(
    fixed: dict[int, float],
    n: int,
    eps_b: float = DEFAULT_BAND,
) -> tuple[tuple[int, int], np.ndarray, np.ndarray, np.ndarray]:
    """Classify a 2-D slice of cosine space.

    ``fixed`` maps two 1-based coordinates to values; the other two are
    sampled at the ``n`` cell centres of (-1, 1).  Returns the free axes,
    the two axis grids, and the per-cell state codes, shape (n, n, 4),
    indexed ``[i_first_free, i_second_free]``.
    """
    if len(fixed) != 2 or not set(fixed) <= {1, 2, 3, 4}:
        raise ValueError("exactly two fixed coordinates in 1..4 are required")
    if n < 1:
        raise ValueError("grid resolution must be >= 1")
    for v in fixed.values():
        if not -1.0 < v <= 1.0:
            raise ValueError(f"fixed cosine {v} outside (-1, 1]")
    free = tuple(sorted({1, 2, 3, 4} - set(fixed)))
    axis = -1.0 + (np.arange(n) + 0.5) * (2.0 / n)
    X, Y = np.meshgrid(axis, axis, indexing="ij")
    c = np.empty((n, n, 4))
    c[..., free[0] - 1] = X
    c[..., free[1] - 1] = Y
    for i, v in fixed.items():
        c[..., i - 1] = v
    states, _ = edge_states(c, eps_b)
    return free, axis, axis.copy(), states  # type: ignore[return-value]

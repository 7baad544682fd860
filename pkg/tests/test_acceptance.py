"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a single ``[PASS]``/``[FAIL]`` line that is printed in the
"acceptance criteria" section of the pytest summary.
"""

import math
import time

import numpy as np
import pytest

from trapezo.geometry import build, build_holed, build_projection, measure_dihedrals
from trapezo.gluing import build_complex, verify_cone_structure
from trapezo.region import (
    AngleQuad,
    CosQuad,
    Kind,
    ShapeParams,
    angles_of,
    angles_of_shapes,
    classify,
    connecting_path,
    cos_quad,
    edge_states,
    kinds_of_states,
    rotate,
    slope_margins_array,
    solve_shape,
    solve_shapes,
    trace_path,
)

from oracles import distances_to_zero_loci

pytestmark = pytest.mark.acceptance

N_SOLVER = 100_000
N_DUAL = 100_000


def interior_batch(rng, n, low=-0.999):
    out = []
    while len(out) < n:
        c = rng.uniform(low, 1, (4 * n, 4))
        states, _ = edge_states(c)
        out.extend(c[kinds_of_states(states) == 0])
    return np.array(out[:n])


def test_criterion_01_round_trip(rng, criterion):
    c = 1.0 - rng.uniform(0.0, 1.999, (N_SOLVER, 4))  # (-0.999, 1]
    t0 = time.perf_counter()
    q, t, _ = solve_shapes(c)
    back = angles_of_shapes(q, t)
    elapsed = time.perf_counter() - t0
    err = float(np.abs(back - c).max())
    prod = float(np.abs(np.prod(q, axis=1) - 1.0).max())
    ok = err <= 1e-10 and prod <= 1e-12 and elapsed <= 10.0
    criterion(1, ok, f"round trip over {N_SOLVER} samples: max |dc| = {err:.2e} (<= 1e-10), "
                     f"max |prod q - 1| = {prod:.2e} (<= 1e-12), {elapsed:.2f} s (<= 10 s)")


def test_criterion_02_dual_oracle(rng, criterion):
    kept = []
    while sum(len(k) for k in kept) < N_DUAL:
        c = rng.uniform(-0.999, 1, (N_DUAL, 4))
        far = distances_to_zero_loci(c).min(axis=1) > 1e-6
        kept.append(c[far])
    c = np.vstack(kept)[:N_DUAL]
    states, _ = edge_states(c)
    phi_bad = states > 0
    q, t, _ = solve_shapes(c)
    slope_bad = ~(slope_margins_array(q, t) > 0)
    rows = np.all(phi_bad == slope_bad, axis=1)
    boundary = int(np.count_nonzero(states == 1))
    agree = int(np.count_nonzero(rows))
    n_ext = int(np.count_nonzero(phi_bad.any(axis=1)))
    criterion(2, agree == N_DUAL and boundary == 0,
              f"phi test vs slope test on {N_DUAL} samples ({n_ext} exterior): "
              f"{agree}/{N_DUAL} agree on kind and edge set")


def test_criterion_03_cube_constant(criterion):
    top = 3.0
    hit = trace_path(AngleQuad((0, 0, 0, 0)), AngleQuad((top, top, 0, 0)), tol=1e-9)
    target = math.acos(1 - math.sqrt(2))
    s = top * hit.s_star if hit else float("nan")
    ok = hit is not None and abs(s - target) <= 1e-6 and hit.edges == {1}
    criterion(3, ok, f"boundary along (s, s, 0, 0) at s = {s:.9f}, "
                     f"arccos(1 - sqrt 2) = {target:.9f}, |diff| = {abs(s - target):.1e} (<= 1e-6)")


def test_criterion_04_double_point(criterion):
    root = (1 - math.sqrt(5)) / 2
    assert abs(root * root - root - 1) < 1e-15
    cl = classify(CosQuad((root, root, root, 1.0)), 1e-9)
    ok = cl.kind is Kind.BOUNDARY and cl.edges == {1, 2}
    criterion(4, ok, f"classify(g, g, g, 1) = {cl.kind.value} {sorted(cl.edges)} "
                     f"(want boundary [1, 2]), phi = {[f'{v:.1e}' for v in cl.phi]}")


def test_criterion_05_geometric_fidelity(rng, criterion):
    worst = 0.0
    for c in interior_batch(rng, 1000):
        trap = build(solve_shape(CosQuad(c)))
        worst = max(worst, max(trap.dihedral_errors().values()))
        measured = measure_dihedrals(trap)
        expected = np.array([e.expected for e in trap.edges])
        live = np.array([not e.degenerate for e in trap.edges])
        worst = max(worst, float(np.abs(measured - expected)[live].max()))
    sq = ShapeParams((1, 1, 1, 1), 1.0)
    pr = build_projection(sq)
    trap = build(sq)
    exact = max(
        float(np.abs(pr.S[0] - [0, 2]).max()),
        float(np.abs(pr.Q[0] - [0, 1]).max()),
        float(np.abs(np.array(trap.vertices["Q1"].point) - [0, 1, 1]).max()),
    )
    ok = worst <= 1e-8 and exact <= 1e-12
    criterion(5, ok, f"1000 interior samples: max dihedral error {worst:.1e} (<= 1e-8); "
                     f"unit square t = 1: max error in S1, Q1, Q~1 {exact:.1e} (<= 1e-12)")


def test_criterion_06_octahedron(criterion):
    trap = build(solve_shape(cos_quad(AngleQuad((0, 0, 0, 0)))))
    ideal = trap.ideal_vertices()
    errs = trap.dihedral_errors()
    worst = max(errs.values())
    ok = len(ideal) == 6 and len(errs) == 12 and worst <= 1e-10
    criterion(6, ok, f"alpha = 0: {len(ideal)} ideal vertices (want 6), {len(errs)} edges "
                     f"of positive length, max |angle - pi/2| = {worst:.1e} (<= 1e-10)")


def test_criterion_07_gluing(rng, criterion):
    worst = 0.0
    all_ok = True
    for c in interior_batch(rng, 100):
        cq = CosQuad(c)
        a = angles_of(cq)
        report = verify_cone_structure(build_complex(build(solve_shape(cq))), a)
        all_ok &= report.ok
        worst = max(worst, max(abs(ch.edge_class.total - ch.expected) for ch in report.checks))
    criterion(7, all_ok and worst <= 1e-8,
              f"100 glued complexes: max |class total - (2 alpha_i or 2 pi)| = {worst:.1e} (<= 1e-8)")


def test_criterion_08_holed(criterion):
    one = build_holed(solve_shape(CosQuad((-0.5, -0.5, 1, 1))))
    one_faces = {f.name for f in one.faces if f.holed}
    g = (1 - math.sqrt(5)) / 2 - 1e-3
    two = build_holed(solve_shape(CosQuad((g, g, g, 1))))
    ok = one.holed_edges == {1} and one_faces == {"V1", "F2"} and two.holed_edges == {1, 2}
    criterion(8, ok, f"(-0.5, -0.5, 1, 1): holed edges {sorted(one.holed_edges)}, faces "
                     f"{sorted(one_faces)}; near double point: holed edges {sorted(two.holed_edges)}")


def _boundary_points(rng, n):
    """Points on the boundary strata, built by solving phi_i = 0 for the
    coordinate c_{i+3}, in which phi_i is affine."""
    pts = []
    while len(pts) < n:
        a, b, x = rng.uniform(-0.999, 1, 3)
        if a + b > 0:
            continue
        slope = a * b * (a * b + 1) * x - a * b * (a + b)
        const = -a * b * (a + b) * x + (a + b) ** 2 - a * b - 1
        if slope == 0:
            continue
        y = -const / slope
        if not (-1 < y <= 1 and a <= x and b <= y):
            continue
        k = int(rng.integers(4))
        pts.append(rotate((a, b, x, y), -k % 4))
    return pts


def test_criterion_09_alternating(rng, criterion):
    pairs = rng.uniform(-0.999, 1, (10_000, 2))
    quads = np.hstack([pairs, pairs])
    states, _ = edge_states(quads)
    n_int = int(np.count_nonzero(kinds_of_states(states) == 0))

    opposite = 0
    seen = 0
    for c in _boundary_points(rng, 5000):
        cl = classify(CosQuad(c))
        if cl.kind is Kind.BOUNDARY:
            seen += 1
            opposite += cl.edges in ({1, 3}, {2, 4})
    for _ in range(200):
        end = AngleQuad(tuple(rng.uniform(0, 3.1, 4)))
        if classify(cos_quad(end)).is_interior:
            continue
        top = min(max(end.alpha) + 0.01, 0.5 * (max(end.alpha) + math.pi))
        hit = trace_path(AngleQuad((top,) * 4), end, tol=1e-5)
        seen += 1
        opposite += hit.edges in ({1, 3}, {2, 4})
    ok = n_int == 10_000 and opposite == 0 and seen > 1000
    criterion(9, ok, f"{n_int}/10000 alternating quads interior; {opposite} of {seen} "
                     f"boundary points report an opposite edge pair")


def test_criterion_10_connectivity(rng, criterion):
    worst = 0
    for c in interior_batch(rng, 100):
        path = connecting_path(CosQuad(c), 1000)
        states, _ = edge_states(path)
        worst = max(worst, int(np.count_nonzero(kinds_of_states(states))))
        assert np.allclose(path[0], c) and np.allclose(path[-1], 1.0)
    criterion(10, worst == 0, f"100 two-leg paths x 1000 points: {worst} non-interior samples")

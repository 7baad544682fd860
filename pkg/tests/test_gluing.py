import math
from collections import Counter

import pytest

from trapezo.errors import HoledInput
from trapezo.geometry import build, build_holed
from trapezo.gluing import BLACK, COPIES, WHITE, build_complex, verify_cone_structure
from trapezo.region import AngleQuad, CosQuad, angles_of, classify, cos_quad, solve_shape


def complex_for(alpha):
    a = AngleQuad(alpha)
    return build_complex(build(solve_shape(cos_quad(a)))), a


def random_interior(rng):
    while True:
        c = CosQuad(rng.uniform(-0.99, 1, 4))
        if classify(c).is_interior:
            return c


def test_class_sizes_and_count(rng):
    gc = build_complex(build(solve_shape(random_interior(rng))))
    sizes = Counter((ec.kind, len(ec.members)) for ec in gc.edge_classes)
    assert sizes == {("cone", 2): 8, ("cusp", 4): 8, ("regular", 4): 4}
    members = [m for ec in gc.edge_classes for m in ec.members]
    assert len(members) == 64 == len(set(members))


def test_each_cone_index_has_two_classes(rng):
    gc = build_complex(build(solve_shape(random_interior(rng))))
    idx = Counter(ec.index for ec in gc.edge_classes if ec.kind == "cone")
    assert idx == {1: 2, 2: 2, 3: 2, 4: 2}
    assert {ec.label for ec in gc.edge_classes if ec.index == 3 and ec.kind == "cone"} == {"cone locus 3"}


def test_pairing_is_fixed_point_free_involution(rng):
    gc = build_complex(build(solve_shape(random_interior(rng))))
    assert len(gc.pairings) == 16
    assert Counter(p.color for p in gc.pairings) == {BLACK: 8, WHITE: 8}
    all_faces = [(copy, f.name) for copy in COPIES for f in gc.trap.faces]
    assert len(all_faces) == 32
    seen = Counter()
    for p in gc.pairings:
        seen[p.first] += 1
        seen[p.second] += 1
    assert set(seen) == set(all_faces) and set(seen.values()) == {1}
    for cf in all_faces:
        other = gc.partner(*cf)
        assert other != cf
        assert gc.partner(*other) == cf


def test_pairings_respect_colours(rng):
    gc = build_complex(build(solve_shape(random_interior(rng))))
    for p in gc.pairings:
        (ca, fa), (cb, fb) = p.first, p.second
        assert fa == fb
        assert gc.trap.face(fa).color == p.color
        if p.color == BLACK:
            assert ca[0] == cb[0] and ca[1] != cb[1]
        else:
            assert ca[1] == cb[1] and ca[0] != cb[0]


def test_same_colour_adjacency_only_on_cone_edges(rng):
    trap = build(solve_shape(random_interior(rng)))
    for e in trap.edges:
        a, b = (trap.face(n).color for n in e.faces)
        assert (a == b) == (e.kind == "cone")


def test_holed_input_rejected():
    trap = build_holed(solve_shape(CosQuad((-0.5, -0.5, 1, 1))))
    with pytest.raises(HoledInput):
        build_complex(trap)


def test_right_angles_everywhere():
    gc, a = complex_for((math.pi / 2,) * 4)
    report = verify_cone_structure(gc, a)
    assert report.ok
    for chk in report.checks:
        want = math.pi if chk.edge_class.kind == "cone" else 2 * math.pi
        assert chk.expected == pytest.approx(want)
        assert chk.edge_class.total == pytest.approx(want, abs=1e-8)


def test_cusped_case():
    gc, a = complex_for((0, 0, 0, 0))
    report = verify_cone_structure(gc, a)
    assert report.ok
    for chk in report.checks:
        if not chk.edge_class.degenerate:
            assert chk.edge_class.total == pytest.approx(2 * math.pi, abs=1e-10)
    assert len(gc.cusps()) == 6


def test_cusps_with_positive_angles(rng):
    gc = build_complex(build(solve_shape(random_interior(rng))))
    assert len(gc.cusps()) == 2


def test_random_interior_verifies(rng):
    for _ in range(25):
        c = random_interior(rng)
        gc = build_complex(build(solve_shape(c)))
        assert verify_cone_structure(gc, angles_of(c)).ok


def test_wrong_angles_fail():
    gc, a = complex_for((1.0, 1.2, 0.4, 0.9))
    off = AngleQuad((1.1, 1.2, 0.4, 0.9))
    report = verify_cone_structure(gc, off)
    assert not report.ok
    failed = {c.edge_class.index for c in report.checks if not c.passed}
    assert failed == {1}


def test_to_dict():
    gc, a = complex_for((1.0, 1.2, 0.4, 0.9))
    d = gc.to_dict()
    assert d["copies"] == ["T00", "T01", "T10", "T11"]
    assert len(d["pairings"]) == 16 and len(d["edge_classes"]) == 20
    r = verify_cone_structure(gc, a).to_dict()
    assert r["ok"] and len(r["classes"]) == 20

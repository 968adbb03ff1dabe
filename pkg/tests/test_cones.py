import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropconf.cones import Cone, Position, intersect, linear_image, preimage, product_cone
from tropconf.fans import fourier_motzkin_feasible
from tropconf.linalg import LatticeBasis, mat_mul

vec = lambda k: st.lists(st.integers(-3, 3), min_size=k, max_size=k)


def in_generated_cone(rays, lin, p):
    """Oracle: p = R lam + L mu with lam >= 0, by homogenised Fourier-Motzkin."""
    k = len(p)
    gens = list(rays) + list(lin) + [tuple(-x for x in l) for l in lin]
    m = len(gens)
    # variables (lam_1..lam_m, t); rows are covectors on that space
    weak, strict = [], []
    for j in range(k):
        row = [g[j] for g in gens] + [-p[j]]
        weak += [row, [-x for x in row]]
    for i in range(m):
        weak.append([1 if t == i else 0 for t in range(m + 1)])
    strict.append([0] * m + [1])
    return fourier_motzkin_feasible(strict, weak, m + 1)


def test_two_dimensional_examples():
    c = Cone.from_inequalities([(0, 1), (1, -1)], [], 2)
    assert c.rays == ((1, 0), (1, 1))
    assert Cone.from_inequalities([], [], 3).lineality == LatticeBasis.full(3)
    assert Cone.from_inequalities([(1,), (-1,)], [], 1).is_zero


def test_intersection_examples():
    quadrant = Cone.from_generators([(1, 0), (0, 1)])
    wedge = Cone.from_inequalities([(1, 1), (-1, 1)], [], 2)  # y >= |x|
    assert intersect(quadrant, wedge) == Cone.from_generators([(0, 1), (1, 1)])
    assert intersect(quadrant, quadrant) == quadrant
    assert intersect(Cone.from_generators([(1,)]), Cone.from_generators([(-1,)])).is_zero


def test_image_examples():
    # {0 <= x <= a1} in coordinates (a1, x) projects onto a1 >= 0
    c = Cone.from_inequalities([(0, 1), (1, -1)], [], 2)
    assert linear_image([[1, 0]], c) == Cone.from_generators([(1,)])
    assert linear_image([[1, 0], [0, 1]], c) == c
    assert linear_image([[1, 0]], Cone.whole_space(2)) == Cone.whole_space(1)


def test_faces_examples():
    quadrant = Cone.from_generators([(1, 0), (0, 1)])
    assert len(quadrant.faces()) == 4
    assert Cone.zero(2).faces() == [Cone.zero(2)]
    half = Cone.from_inequalities([(1, 0)], [], 2)
    faces = half.faces()
    assert len(faces) == 2 and Cone.from_generators([], [(0, 1)], 2) in faces


def test_contains_and_interior_point():
    quadrant = Cone.from_generators([(1, 0), (0, 1)])
    assert quadrant.contains((1, 1)) is Position.RELATIVE_INTERIOR
    assert quadrant.contains((1, 0)) is Position.BOUNDARY
    assert quadrant.contains((-1, 0)) is Position.OUTSIDE
    assert Cone.from_generators([(1, 0), (1, 1)]).relative_interior_point() == (2, 1)
    assert Cone.zero(3).relative_interior_point() == (0, 0, 0)
    assert Cone.from_generators([(2, 3)]).relative_interior_point() == (2, 3)


def test_rank_mismatch_rejected():
    with pytest.raises(ValueError):
        intersect(Cone.zero(2), Cone.zero(3))
    with pytest.raises(ValueError):
        Cone.zero(2).contains((1, 2, 3))


@given(st.lists(vec(3), min_size=0, max_size=5), st.lists(vec(3), max_size=1))
def test_dual_description_round_trip(normals, eqs):
    c = Cone.from_inequalities(normals, eqs, 3)
    again = Cone.from_generators(c.rays, c.lineality.basis_rows, 3)
    assert again == c
    assert Cone.from_inequalities(c.facet_normals, c.equations, 3) == c
    for p in itertools.product(range(-2, 3), repeat=3):
        by_h = all(sum(a * b for a, b in zip(h, p)) >= 0 for h in normals) and all(
            sum(a * b for a, b in zip(e, p)) == 0 for e in eqs
        )
        assert (c.contains(p) is not Position.OUTSIDE) == by_h


@given(st.lists(vec(3), min_size=1, max_size=4))
def test_generator_membership_matches_oracle(rays):
    c = Cone.from_generators(rays, [], 3)
    for p in [(1, 0, 0), (0, 1, -1), (1, 1, 1), (-2, 1, 0), tuple(map(sum, zip(*rays)))]:
        assert (c.contains(p) is not Position.OUTSIDE) == in_generated_cone(rays, [], p)


@given(st.lists(vec(3), min_size=1, max_size=4), st.lists(vec(3), min_size=1, max_size=4))
def test_intersection_is_contained_in_both(a, b):
    ca, cb = Cone.from_generators(a, [], 3), Cone.from_generators(b, [], 3)
    m = intersect(ca, cb)
    assert ca.contains_cone(m) and cb.contains_cone(m)
    for r in list(ca.rays) + list(cb.rays):
        if ca.contains(r) is not Position.OUTSIDE and cb.contains(r) is not Position.OUTSIDE:
            assert m.contains(r) is not Position.OUTSIDE


@given(st.lists(vec(3), min_size=1, max_size=4), st.lists(vec(3), min_size=2, max_size=2), st.lists(vec(2), min_size=2, max_size=2))
def test_linear_image_composes(rays, f, g):
    c = Cone.from_generators(rays, [], 3)
    assert linear_image(g, linear_image(f, c)) == linear_image(mat_mul(g, f), c)


@given(st.lists(vec(2), min_size=1, max_size=3))
def test_preimage_of_image_contains(rays):
    f = [[1, 0, 1], [0, 1, 1]]
    c = Cone.from_generators(rays, [], 2)
    pre = preimage(f, c, 3)
    assert linear_image(f, pre).contains_cone(c) or c.is_zero


@given(st.lists(vec(3), min_size=1, max_size=4))
def test_faces_are_faces(rays):
    c = Cone.from_generators(rays, [], 3)
    for f in c.faces():
        assert c.is_face(f)
        p = f.relative_interior_point()
        assert c.smallest_face_containing(p) == f


def test_product_cone():
    a = Cone.from_generators([(1,)])
    b = Cone.whole_space(1)
    p = product_cone(a, b)
    assert p.rays == ((1, 0),) and p.lineality == LatticeBasis(2, ((0, 1),))

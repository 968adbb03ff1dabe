import itertools
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from tropconf.linalg import (
    LatticeBasis,
    hnf,
    hnf_basis,
    identity,
    image_lattice,
    lattice_index,
    lattice_intersect,
    mat_mul,
    saturate,
    snf_invariants,
    solve_rational,
    span_lattice,
)

small = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=max_rows)
    )


# -- independent oracles ------------------------------------------------------


def box_members(rows, k, bound):
    """Integer vectors in [-bound, bound]^k that are integer combinations of rows (coefficients in a box)."""
    out = set()
    coef_range = range(-bound, bound + 1)
    for coefs in itertools.product(coef_range, repeat=len(rows)):
        v = tuple(sum(c * r[j] for c, r in zip(coefs, rows)) for j in range(k))
        if all(abs(x) <= bound for x in v):
            out.add(v)
    return out


def brute_det_gcd(m, t):
    """gcd of all t x t minors (product of the first t invariant factors)."""
    from math import gcd

    def det(a):
        if len(a) == 1:
            return a[0][0]
        return sum((-1) ** j * a[0][j] * det([r[:j] + r[j + 1:] for r in a[1:]]) for j in range(len(a)))

    g = 0
    for rs in itertools.combinations(range(len(m)), t):
        for cs in itertools.combinations(range(len(m[0])), t):
            g = gcd(g, det([[m[r][c] for c in cs] for r in rs]))
    return g


# -- examples ----------------------------------------------------------------


def test_hnf_examples():
    assert hnf([[2, 4], [6, 8]])[0] == ((2, 0), (0, 4))
    assert hnf(identity(3))[0] == identity(3)
    assert hnf([[0, 0]])[0] == ((0, 0),)


def test_snf_examples():
    assert snf_invariants([[2, 0], [0, 4]]) == [2, 4]
    assert snf_invariants(identity(4)) == [1, 1, 1, 1]
    assert snf_invariants([[2]]) == [2]


def test_lattice_intersection_examples():
    z1 = lambda g: LatticeBasis.from_generators([[g]], 1)
    assert lattice_intersect(z1(2), z1(3)) == z1(6)
    lat = LatticeBasis.from_generators([[1, 2], [0, 3]], 2)
    assert lattice_intersect(lat, lat) == lat
    a = LatticeBasis.from_generators([[1, 1]], 2)
    b = LatticeBasis.from_generators([[1, -1]], 2)
    assert lattice_intersect(a, b).basis_rows == ()


def test_image_lattice_examples():
    assert image_lattice([[1, 0]], LatticeBasis.full(2)) == LatticeBasis.full(1)
    assert image_lattice([[2]], LatticeBasis.full(1)) == LatticeBasis(1, ((2,),))
    assert image_lattice([[1, 1]], LatticeBasis.from_generators([[2, 0], [0, 2]], 2)) == LatticeBasis(1, ((2,),))


def test_saturation_examples():
    assert saturate(LatticeBasis(1, ((2,),))) == LatticeBasis.full(1)
    assert saturate(LatticeBasis.from_generators([[2, 2]], 2)) == LatticeBasis(2, ((1, 1),))
    full = LatticeBasis.full(3)
    assert saturate(full) == full


def test_solve_examples():
    assert solve_rational(identity(2), (3, 4)) == (3, 4)
    assert solve_rational([[2]], [3]) == (Fraction(3, 2),)
    assert solve_rational([[1, 0], [1, 0]], [0, 1]) is None


def test_index_counts_cosets():
    lat = LatticeBasis.from_generators([[2, 0], [0, 2]], 2)
    assert lattice_index(lat, LatticeBasis.full(2)) == 4
    lat = LatticeBasis.from_generators([[1, 1], [0, 3]], 2)
    # coset oracle: residues of the box [0,6)^2 modulo the lattice
    reps = set()
    members = box_members(lat.basis_rows, 2, 12)
    for v in itertools.product(range(6), repeat=2):
        if not any(tuple(a - b for a, b in zip(v, r)) in members for r in reps):
            reps.add(v)
    assert lattice_index(lat, LatticeBasis.full(2)) == len(reps) == 3


# -- properties --------------------------------------------------------------


@given(matrices())
def test_hnf_shape_and_unimodular(m):
    h, u = hnf(m)
    assert mat_mul(u, m) == h
    assert abs(brute_det_gcd(u, len(u))) == 1
    last = -1
    for r in h:
        if not any(r):
            continue
        piv = next(j for j, x in enumerate(r) if x)
        assert piv > last and r[piv] > 0
        for above in h[: h.index(r)]:
            assert 0 <= above[piv] < r[piv]
        last = piv


@given(matrices(3, 3))
def test_snf_matches_minor_gcds(m):
    inv = snf_invariants(m)
    prod = 1
    for t, d in enumerate(inv, start=1):
        prod *= d
        assert brute_det_gcd(m, t) == prod
    for a, b in zip(inv, inv[1:]):
        assert b % a == 0


@given(matrices(2, 2), matrices(2, 2))
def test_intersection_agrees_with_box_membership(a, b):
    k = max(len(a[0]), len(b[0]))
    a = [r + [0] * (k - len(r)) for r in a]
    b = [r + [0] * (k - len(r)) for r in b]
    la, lb = LatticeBasis.from_generators(a, k), LatticeBasis.from_generators(b, k)
    meet = lattice_intersect(la, lb)
    for v in itertools.product(range(-4, 5), repeat=k):
        assert (v in meet) == (v in la and v in lb)


@given(matrices(3, 3))
def test_hnf_basis_is_canonical(m):
    k = len(m[0])
    lat = LatticeBasis.from_generators(m, k)
    shuffled = list(reversed(m)) + [[x * 2 for x in m[0]]]
    assert LatticeBasis.from_generators(shuffled, k) == lat
    assert hnf_basis(lat.basis_rows, k) == lat.basis_rows


@given(matrices(3, 3))
def test_span_lattice_is_saturation(m):
    k = len(m[0])
    assert span_lattice(m, k) == saturate(LatticeBasis.from_generators(m, k))

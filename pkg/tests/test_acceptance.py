"""Acceptance criteria: exact reproductions with wall-clock budgets.

Each test records one PASS/FAIL line; they are printed in the terminal summary
(see conftest.py) and when this file is run as a script.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from tropconf.chow import certify_configuration, configuration_fan
from tropconf.cones import Cone, Position
from tropconf.expansions import fiber_complex, locate, marking_identities, stratum_report
from tropconf.fans import (
    Arrangement,
    common_refinement,
    fan_from_arrangement,
    fans_equal,
    sign_vector_chambers,
)
from tropconf.linalg import LatticeBasis, lattice_intersect
from tropconf.reference import (
    bipermutahedral_fan,
    bisequence_cone,
    permutahedral_fan,
    preorder_cone,
    product_fan,
)
from tropconf.fans import interleave_permutation, permute_fan
from tropconf.scaffolds import lambda0, lambda_biperm, lambda_square, sqrt_stack_scaffold
from tropconf.stacky import isotropy
from tropconf.verify import _formulas, corpus

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, seconds: float, limit: float, note: str = ""):
    within = seconds < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"{status} criterion {number}: {title} ({seconds:.1f} s, limit {limit:.0f} s)"
    if not within:
        line += " over time budget"
    if note:
        line += f" [{note}]"
    RESULTS.append(line)
    print(line)
    return ok and within


class Checks:
    def __init__(self):
        self.failed: list[str] = []

    def __call__(self, label: str, cond: bool):
        if not cond:
            self.failed.append(label)

    @property
    def ok(self):
        return not self.failed


# ---------------------------------------------------------------------------


def test_criterion_1_permutahedral():
    chk = Checks()
    t = time.perf_counter()
    for n in (1, 2, 3, 4):
        cf = configuration_fan(lambda0(n), certify=False)
        chk(f"n={n} quotient", fans_equal(cf.pi_fan.fan, permutahedral_fan(n)))
        chk(f"n={n} indices", all(cf.pi_fan.index(c) == 1 for c in cf.pi_fan.fan.maximal_cones))
        chk(f"n={n} refined", fans_equal(cf.refined_scaffold.fan, permutahedral_fan(n + 1)))
    dt = time.perf_counter() - t
    assert record(1, "minimal scaffold quotient is the permutahedral fan, n=1..4", chk.ok, dt, 30), chk.failed


def test_criterion_2_square():
    chk = Checks()
    t = time.perf_counter()
    for n in (1, 2):
        cf = configuration_fan(lambda_square(n), certify=False)
        sigma = permutahedral_fan(n)
        shuffled = permute_fan(product_fan(sigma, sigma), interleave_permutation(2, n))
        chk(f"n={n}", fans_equal(cf.pi_fan.fan, shuffled))
        chk(f"n={n} indices", not cf.pi_fan.sublattices)
    dt = time.perf_counter() - t
    assert record(2, "square scaffold quotient is the product of permutahedral fans, n=1,2", chk.ok, dt, 120), chk.failed


def test_criterion_3_bipermutahedral():
    chk = Checks()
    t = time.perf_counter()
    for n in (1, 2):
        cf = configuration_fan(lambda_biperm(n), certify=False)
        chk(f"n={n}", fans_equal(cf.pi_fan.fan, bipermutahedral_fan(n)))
        chk(f"n={n} indices", not cf.pi_fan.sublattices)
    dt = time.perf_counter() - t
    assert record(3, "bipermutahedral scaffold quotient is the bipermutahedral fan, n=1,2", chk.ok, dt, 900), chk.failed


def test_criterion_4_sqrt_stack():
    chk = Checks()
    t = time.perf_counter()
    cf = configuration_fan(sqrt_stack_scaffold())
    fan = cf.pi_fan.fan
    chk("three cones", len(fan.all_cones) == 3 and fans_equal(fan, permutahedral_fan(1)))
    for ray in fan.maximal_cones:
        chk("L = 2Z", cf.pi_fan.lattice(ray) == LatticeBasis(1, ((2,),)))
        chk("isotropy [2]", isotropy(cf.pi_fan, ray) == [2])
        rep = stratum_report(cf, ray)
        chk("v1 map is doubling", rep.position_maps[rep.markings[1]].on_lattice == ((2,),))
    dt = time.perf_counter() - t
    assert record(4, "square-root stack quotient with index-2 rays", chk.ok, dt, 1), chk.failed


def test_criterion_5_chain():
    chk = Checks()
    t = time.perf_counter()
    cf = configuration_fan(lambda0(3), certify=False)
    rho, rep = locate(cf, (1, 1, 2))
    chk("preorder cone", rho == preorder_cone([[0], [1, 2], [3]], 3))
    f = _formulas(rep, {(1, 1, 1): "e1", (0, 0, 1): "e2"})
    chk("weights", [f[i][0] for i in (0, 1, 3)] == ["0", "e1", "e1 + e2"])
    chk("three components", len(rep.fiber.vertices) == 3)
    dt = time.perf_counter() - t
    assert record(5, "chain stratum at (1,1,2) with weights 0, e1, e1+e2", chk.ok, dt, 1), chk.failed


def test_criterion_6_planar_strata():
    chk = Checks()
    t = time.perf_counter()
    sq = configuration_fan(lambda_square(2), certify=False)
    quilt = Cone.from_inequalities([(-1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 1, 0, -1)], [], 4)
    rep = stratum_report(sq, quilt)
    f = _formulas(rep, {(-1, 0, 0, 0): "e1", (0, 0, 1, 0): "e2", (0, 1, 0, 1): "f1", (0, 1, 0, 0): "f2"})
    chk("square rubber rank 4", rep.rubber.rank == 4)
    chk("square stratum dim 0", rep.rubber.stratum_dim == 0)
    chk("square phi_v1", f[1] == ["-e1", "f1 + f2"])
    chk("square phi_v2", f[2] == ["e2", "f1"])

    bp = configuration_fan(lambda_biperm(2), certify=False)
    tau, rep = locate(bp, (-1, 2, 1, 1))
    chk("bisequence cone", tau == bisequence_cone("2|0|12|1", 2))
    chk("cone equation a0 + b0 = a1 + b2", [tuple(e) for e in tau.equations] in ([(1, 0, 0, 1)], [(-1, 0, 0, -1)]))
    chk("biperm rubber rank 3", rep.rubber.rank == 3)
    chk("biperm stratum dim 1", rep.rubber.stratum_dim == 1)
    f = _formulas(rep, {(-1, 1, 0, 1): "e1", (0, 0, 1, 0): "e2", (0, 1, 0, 0): "f2"})
    chk("biperm phi_v1", f[1] == ["-e1", "e1 + f2"])
    chk("biperm phi_v2", f[2] == ["e2", "e1"])
    sizes = sorted(len(c) for c in rep.component_fans.values())
    chk("11 components, exactly 2 hexagonal", sizes == [4] * 9 + [6] * 2)
    cells = len(rep.fiber.polyhedra_of_dim(2))
    dt = time.perf_counter() - t
    note = f"11 two-dimensional components, 2 hexagonal; the fibre complex itself has {cells} two-cells"
    assert record(6, "quilt and bipermutahedral strata", chk.ok, dt, 10, note), chk.failed


def test_criterion_7_certificates():
    chk = Checks()
    t = time.perf_counter()
    for s in corpus():
        label = f"{s.kind} n={s.n}"
        cf = configuration_fan(s, certify=False)
        rep = certify_configuration(cf)
        chk(f"{label} projection", rep.info["projection"])
        for i in range(s.n + 1):
            chk(f"{label} section {i}", rep.info[f"section_{i}"])
        chk(f"{label} terminality", rep.info["terminality"])
        chk(f"{label} all certificates", rep.ok)
        for rho in cf.pi_fan.fan.all_cones:
            anchor, gluing = marking_identities(cf, rho)
            chk(f"{label} anchor on {rho}", anchor)
            chk(f"{label} gluing on {rho}", gluing)
    dt = time.perf_counter() - t
    assert record(7, "certificate suite over the scaffold corpus", chk.ok, dt, 300), chk.failed


# ---------------------------------------------------------------------------
# Criterion 8: seeded randomized property suite, 1000 cases


def _rand_vec(rng, k, lo=-3, hi=3):
    return tuple(rng.randint(lo, hi) for _ in range(k))


def _case_dual_description(rng) -> bool:
    k = rng.choice((2, 3, 4))
    normals = [_rand_vec(rng, k) for _ in range(rng.randint(0, 5))]
    c = Cone.from_inequalities(normals, [], k)
    if Cone.from_generators(c.rays, c.lineality.basis_rows, k) != c:
        return False
    for _ in range(5):
        p = _rand_vec(rng, k, -2, 2)
        by_h = all(sum(a * b for a, b in zip(h, p)) >= 0 for h in normals)
        if (c.contains(p) is not Position.OUTSIDE) != by_h:
            return False
    return True


def _case_common_refinement(rng) -> bool:
    k = rng.choice((2, 3, 4))

    def arr():
        hs = [_rand_vec(rng, k, -2, 2) for _ in range(rng.randint(1, 3))]
        return [h for h in hs if any(h)]

    a, b = arr(), arr()
    fa = fan_from_arrangement(Arrangement.of(a, k))
    fb = fan_from_arrangement(Arrangement.of(b, k))
    both = Arrangement.of(a + b, k)
    ref = common_refinement([fa, fb])
    return len(ref) == len(sign_vector_chambers(both.hyperplane_normals, k)) and fans_equal(
        ref, fan_from_arrangement(both)
    )


def _case_lattice_intersection(rng) -> bool:
    k = 2
    la = LatticeBasis.from_generators([_rand_vec(rng, k, -4, 4) for _ in range(rng.randint(1, 2))], k)
    lb = LatticeBasis.from_generators([_rand_vec(rng, k, -4, 4) for _ in range(rng.randint(1, 2))], k)
    meet = lattice_intersect(la, lb)

    def box(lat, bound=6):
        rows = lat.basis_rows
        out = set()
        for coefs in itertools.product(range(-12, 13), repeat=len(rows)):
            v = tuple(sum(c * r[j] for c, r in zip(coefs, rows)) for j in range(k))
            if all(abs(x) <= bound for x in v):
                out.add(v)
        return out

    ba, bb, bm = box(la), box(lb), box(meet)
    return bm == ba & bb


_POSET_CFS = []


def _case_fiber_poset(rng) -> bool:
    if not _POSET_CFS:
        for s in (lambda0(3), lambda_square(2), sqrt_stack_scaffold(), lambda_biperm(1)):
            cf = configuration_fan(s, certify=False)
            _POSET_CFS.extend((cf, rho) for rho in cf.pi_fan.fan.maximal_cones)
    cf, rho = rng.choice(_POSET_CFS)

    def sample():
        w = [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in rho.rays]
        return tuple(sum(c * r[j] for c, r in zip(w, rho.rays)) for j in range(rho.ambient_rank))

    return fiber_complex(cf, rho, sample()).poset_signature() == fiber_complex(cf, rho, sample()).poset_signature()


def test_criterion_8_property_suite():
    rng = random.Random(20240611)
    kinds = [
        ("dual description", _case_dual_description),
        ("common refinement", _case_common_refinement),
        ("lattice intersection", _case_lattice_intersection),
        ("fibre poset", _case_fiber_poset),
    ]
    t = time.perf_counter()
    failures = []
    for i in range(1000):
        name, case = kinds[i % 4]
        if not case(rng):
            failures.append(f"case {i} ({name})")
    dt = time.perf_counter() - t
    assert record(8, "randomized property suite, 1000 seeded cases", not failures, dt, 120), failures[:10]


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))

"""Named, self-contained reproduction checks for the CLI ``verify`` command."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .chow import certify_configuration, configuration_fan
from .cones import Cone
from .expansions import _linear_form, locate, marking_identities, stratum_report
from .fans import fans_equal
from .linalg import LatticeBasis
from .reference import bipermutahedral_fan, bisequence_cone, permutahedral_fan, preorder_cone, square_fan
from .scaffolds import lambda0, lambda_biperm, lambda_square, sqrt_stack_scaffold
from .stacky import isotropy


@dataclass
class VerifyResult:
    name: str
    ok: bool
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "details": self.details, "seconds": round(self.seconds, 3)}


def _check(details: list[str], label: str, cond: bool) -> bool:
    details.append(f"{'ok  ' if cond else 'FAIL'} {label}")
    return cond


def verify_permutahedron(max_n: int = 4) -> list[str]:
    out = []
    for n in range(1, max_n + 1):
        cf = configuration_fan(lambda0(n), certify=False)
        _check(out, f"n={n}: quotient equals the permutahedral fan", fans_equal(cf.pi_fan.fan, permutahedral_fan(n)))
        _check(out, f"n={n}: all stacky indices are 1", not cf.pi_fan.sublattices)
        _check(out, f"n={n}: refined scaffold equals the permutahedral fan on n+1 points",
               fans_equal(cf.refined_scaffold.fan, permutahedral_fan(n + 1)))
    return out


def verify_square(max_n: int = 2) -> list[str]:
    out = []
    for n in range(1, max_n + 1):
        cf = configuration_fan(lambda_square(n), certify=False)
        _check(out, f"n={n}: quotient equals the square of the permutahedral fan", fans_equal(cf.pi_fan.fan, square_fan(n)))
        _check(out, f"n={n}: all stacky indices are 1", not cf.pi_fan.sublattices)
    return out


def verify_bipermutahedron(max_n: int = 2) -> list[str]:
    out = []
    for n in range(1, max_n + 1):
        cf = configuration_fan(lambda_biperm(n), certify=False)
        _check(out, f"n={n}: quotient equals the bipermutahedral fan", fans_equal(cf.pi_fan.fan, bipermutahedral_fan(n)))
        _check(out, f"n={n}: all stacky indices are 1", not cf.pi_fan.sublattices)
    return out


def verify_sqrt_stack(max_n: int = 0) -> list[str]:
    out = []
    cf = configuration_fan(sqrt_stack_scaffold())
    fan = cf.pi_fan.fan
    rays = [c for c in fan.all_cones if c.dim == 1]
    _check(out, "quotient has 3 cones (two rays and the origin)", len(fan.all_cones) == 3 and len(rays) == 2)
    for r in rays:
        _check(out, f"ray {list(r.rays[0])}: sublattice is 2Z", cf.pi_fan.lattice(r) == LatticeBasis(1, ((2,),)))
        _check(out, f"ray {list(r.rays[0])}: isotropy [2]", isotropy(cf.pi_fan, r) == [2])
        rep = stratum_report(cf, r)
        v1 = rep.markings[1]
        _check(out, f"ray {list(r.rays[0])}: marking 1 position map on L is multiplication by 2",
               rep.position_maps[v1].on_lattice == ((2,),))
    return out


def verify_chain_stratum(max_n: int = 0) -> list[str]:
    out = []
    cf = configuration_fan(lambda0(3), certify=False)
    rho, rep = locate(cf, (1, 1, 2))
    _check(out, "located cone is the preorder {0} < {1,2} < {3}", rho == preorder_cone([[0], [1, 2], [3]], 3))
    f = _formulas(rep, {(1, 1, 1): "e1", (0, 0, 1): "e2"})
    weights = [f[i][0] for i in (0, 1, 3)]
    _check(out, f"weights on the three components are {weights}", weights == ["0", "e1", "e1 + e2"])
    _check(out, "three components", len(rep.fiber.vertices) == 3)
    return out


def _formulas(rep, names: dict) -> dict:
    """Marking position maps as linear forms in named ray coordinates (terms sorted by name)."""
    order = [names[tuple(r)] for r in rep.rho.rays]
    idx = sorted(range(len(order)), key=lambda j: order[j])
    out = {}
    for i, v in rep.markings.items():
        rows = rep.position_maps[v].on_rays
        out[i] = [_linear_form([row[j] for j in idx], [order[j] for j in idx]) for row in rows]
    return out


def verify_quilt_stratum(max_n: int = 0) -> list[str]:
    out = []
    cf = configuration_fan(lambda_square(2), certify=False)
    rho = Cone.from_inequalities([(-1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 1, 0, -1)], [], 4)
    rep = stratum_report(cf, rho)
    names = {(-1, 0, 0, 0): "e1", (0, 0, 1, 0): "e2", (0, 1, 0, 1): "f1", (0, 1, 0, 0): "f2"}
    f = _formulas(rep, names)
    _check(out, "rubber rank 4", rep.rubber.rank == 4)
    _check(out, "stratum dimension 0", rep.rubber.stratum_dim == 0)
    _check(out, f"phi_v1 = {f[1]}", f[1] == ["-e1", "f1 + f2"])
    _check(out, f"phi_v2 = {f[2]}", f[2] == ["e2", "f1"])
    _check(out, "every component is P1 x P1", all(len(cf_) == 4 for cf_ in rep.component_fans.values()))
    return out


def verify_biperm_stratum(max_n: int = 0) -> list[str]:
    out = []
    cf = configuration_fan(lambda_biperm(2), certify=False)
    tau, rep = locate(cf, (-1, 2, 1, 1))
    _check(out, "located cone has bisequence 2|0|12|1", tau == bisequence_cone("2|0|12|1", 2))
    _check(out, "cone equation a0 + b0 = a1 + b2", list(tau.equations) in ([(1, 0, 0, 1)], [(-1, 0, 0, -1)]))
    names = {(-1, 1, 0, 1): "e1", (0, 0, 1, 0): "e2", (0, 1, 0, 0): "f2"}
    f = _formulas(rep, names)
    _check(out, "rubber rank 3", rep.rubber.rank == 3)
    _check(out, "stratum dimension 1", rep.rubber.stratum_dim == 1)
    _check(out, f"phi_v1 = {f[1]}", f[1] == ["-e1", "e1 + f2"])
    _check(out, f"phi_v2 = {f[2]}", f[2] == ["e2", "e1"])
    sizes = sorted(len(c) for c in rep.component_fans.values())
    _check(out, f"11 components, 2 hexagonal and 9 quadrilateral (component fan sizes {sizes})",
           sizes == [4] * 9 + [6] * 2)
    return out


def corpus():
    """The scaffolds on which the certificate suite runs."""
    return [lambda0(n) for n in (1, 2, 3, 4)] + [lambda_square(1), lambda_square(2)] + \
        [lambda_biperm(1), lambda_biperm(2), sqrt_stack_scaffold()]


def certificate_suite(s) -> list[str]:
    out = []
    cf = configuration_fan(s, certify=False)
    rep = certify_configuration(cf)
    label = f"{s.kind} n={s.n}"
    _check(out, f"{label}: projection weakly semistable", rep.info.get("projection", False))
    for i in range(s.n + 1):
        _check(out, f"{label}: section {i} weakly semistable", rep.info.get(f"section_{i}", False))
    _check(out, f"{label}: terminality", rep.info.get("terminality", False))
    if rep.violations:
        out += [f"FAIL {v}" for v in rep.violations[:5]]
    anchor = gluing = True
    for rho in cf.pi_fan.fan.all_cones:
        a, g = marking_identities(cf, rho)
        anchor &= a
        gluing &= g
    _check(out, f"{label}: anchor position map vanishes on every cone", anchor)
    _check(out, f"{label}: stacked position maps equal the lattice inclusion on every cone", gluing)
    alt = configuration_fan(s, lattice_reading="containing", certify=False)
    _check(out, f"{label}: both lattice readings agree", alt.pi_fan.sublattices == cf.pi_fan.sublattices)
    return out


def verify_certificates(max_n: int = 2) -> list[str]:
    out = []
    for s in corpus():
        if s.n <= max(max_n, 1) or s.kind == "lambda0":
            out += certificate_suite(s)
    return out


TARGETS: dict[str, Callable[[int], list[str]]] = {
    "permutahedron": verify_permutahedron,
    "square": verify_square,
    "bipermutahedron": verify_bipermutahedron,
    "sqrt-stack": verify_sqrt_stack,
    "chain-stratum": verify_chain_stratum,
    "quilt-stratum": verify_quilt_stratum,
    "biperm-stratum": verify_biperm_stratum,
    "certificates": verify_certificates,
}

DEFAULT_MAX_N = {"permutahedron": 4, "square": 2, "bipermutahedron": 2, "certificates": 2}


def run_target(name: str, max_n: Optional[int] = None) -> VerifyResult:
    if name not in TARGETS:
        raise KeyError(f"unknown verify target {name!r}")
    t = time.perf_counter()
    try:
        details = TARGETS[name](max_n if max_n is not None else DEFAULT_MAX_N.get(name, 0))
        ok = all(not d.startswith("FAIL") for d in details)
    except Exception as e:  # a crash is a failed verification, reported as such
        details, ok = [f"FAIL {type(e).__name__}: {e}"], False
    return VerifyResult(name, ok, details, time.perf_counter() - t)


def _run_packed(args):
    return run_target(*args)


def run_verify(names: list[str], max_n: Optional[int] = None, threads: int = 1) -> list[VerifyResult]:
    if names == ["all"] or not names:
        names = list(TARGETS)
    for nm in names:
        if nm not in TARGETS:
            raise KeyError(f"unknown verify target {nm!r}")
    jobs = [(nm, max_n) for nm in names]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_run_packed, jobs))
    return [run_target(*j) for j in jobs]

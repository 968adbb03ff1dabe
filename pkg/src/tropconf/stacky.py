"""Stacky fans, fan maps, weak semistability and isotropy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .cones import Cone, Position, linear_image
from .fans import Fan
from .linalg import (
    IntMatrix,
    LatticeBasis,
    as_matrix,
    coordinates_in,
    image_lattice,
    lattice_index,
    lattice_intersect,
    mat_vec,
    primitive,
    rank,
    snf_invariants,
)


class StackyFan:
    """A fan with a finite-index sublattice on each cone.

    Lattices are stored on maximal cones (plus any explicitly supplied faces);
    the lattice of any other face is the restriction of a maximal one.
    """

    def __init__(self, fan: Fan, sublattices: Optional[Mapping[Cone, LatticeBasis]] = None):
        self.fan = fan
        self.sublattices: dict[Cone, LatticeBasis] = dict(sublattices or {})
        self._derived: dict[Cone, LatticeBasis] = {}
        self._owner: Optional[dict[Cone, Cone]] = None

    @property
    def ambient_rank(self) -> int:
        return self.fan.ambient_rank

    def _owner_of(self, c: Cone) -> Cone:
        if self._owner is None:
            owner = {}
            for m in self.fan.maximal_cones:
                for f in m.faces():
                    owner.setdefault(f, m)
            self._owner = owner
        try:
            return self._owner[c]
        except KeyError:
            raise KeyError(f"{c} is not a cone of the fan") from None

    def lattice(self, c: Cone) -> LatticeBasis:
        """L_c."""
        if c in self.sublattices:
            return self.sublattices[c]
        got = self._derived.get(c)
        if got is not None:
            return got
        m = self._owner_of(c)
        if c.is_zero and not c.lineality.rank:
            out = LatticeBasis.zero(self.ambient_rank)
        elif m in self.sublattices:
            out = lattice_intersect(self.sublattices[m], c.span_lattice())
        else:
            out = c.span_lattice()
        self._derived[c] = out
        return out

    def index(self, c: Cone) -> int:
        return lattice_index(self.lattice(c), c.span_lattice())

    def __repr__(self) -> str:
        nontrivial = sum(1 for c in self.fan.maximal_cones if self.index(c) != 1)
        return f"StackyFan({self.fan!r}, nontrivial_maximal={nontrivial})"


def trivial_stacky(f: Fan) -> StackyFan:
    return StackyFan(f, {})


def isotropy(s: StackyFan, sigma: Cone) -> list[int]:
    """Invariant factors of N_sigma / L_sigma, with the 1s dropped."""
    if sigma not in s.fan:
        raise KeyError(f"{sigma} is not a cone of the fan")
    lat = s.lattice(sigma)
    n = sigma.span_lattice()
    if lat.rank == 0:
        return []
    coords = coordinates_in(n, lat.basis_rows)
    return [d for d in snf_invariants([[int(x) for x in row] for row in coords]) if d != 1]


@dataclass
class Report:
    ok: bool
    violations: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def check_stacky(s: StackyFan) -> Report:
    bad = []
    for c, lat in sorted(s.sublattices.items()):
        n = c.span_lattice()
        if lat.rank != n.rank or not lat.is_sublattice_of(n):
            bad.append(f"lattice on {c} is not of finite index in N_sigma")
    explicit = set(s.sublattices)
    for m in s.fan.maximal_cones:
        lm = s.lattice(m)
        for f in m.faces():
            if m not in explicit and f not in explicit and s._owner_of(f) not in explicit:
                continue
            expected = lattice_intersect(lm, f.span_lattice()) if lm.rank else lm
            if f.is_zero and not f.lineality.rank:
                expected = LatticeBasis.zero(s.ambient_rank)
            if s.lattice(f) != expected:
                bad.append(f"face {f} of {m}: L_tau differs from L_sigma restricted to span(tau)")
    return Report(not bad, bad)


@dataclass
class FanMap:
    matrix: IntMatrix
    source: StackyFan
    target: StackyFan

    def __post_init__(self):
        self.matrix = as_matrix(self.matrix)
        if len(self.matrix) != self.target.ambient_rank:
            raise ValueError("matrix rows do not match the target rank")
        if any(len(r) != self.source.ambient_rank for r in self.matrix):
            raise ValueError("matrix columns do not match the source rank")

    def apply(self, v: Sequence) -> tuple:
        return mat_vec(self.matrix, v)


def image_equals(f: IntMatrix, c: Cone, target: Cone) -> bool:
    """Whether f(c) == target, without a double description when target is pointed."""
    rays = [mat_vec(f, r) for r in c.rays]
    lin = [mat_vec(f, l) for l in c.lineality.basis_rows]
    if not target.is_pointed:
        return linear_image(f, c) == target
    if any(any(v) for v in lin):
        return False
    eqs, fac = target.equations, target.facet_normals
    for v in rays:
        if any(sum(a * b for a, b in zip(e, v)) for e in eqs):
            return False
        if any(sum(a * b for a, b in zip(h, v)) < 0 for h in fac):
            return False
    have = {primitive(v) for v in rays if any(v)}
    return all(r in have for r in target.rays)


def _target_cone(m: FanMap, c: Cone, hint: Optional[Cone]) -> Optional[Cone]:
    p = m.apply(c.relative_interior_point())
    fan = m.target.fan
    if hint is not None and hint.contains(p) is not Position.OUTSIDE:
        return fan.intern(hint.smallest_face_containing(p))
    try:
        return fan.intern(fan.locate(p))
    except ValueError:
        return None


def check_weakly_semistable(m: FanMap, max_violations: int = 20) -> Report:
    """Every source cone maps onto a target cone with matching sublattice."""
    bad: list[str] = []
    surjective = rank(m.matrix) == m.target.ambient_rank
    seen: set[Cone] = set()
    for top in m.source.fan.maximal_cones:
        top_target = _target_cone(m, top, None)
        for c in top.faces():
            if c in seen:
                continue
            c = m.source.fan.intern(c)
            seen.add(c)
            t = _target_cone(m, c, top_target)
            if t is None or not image_equals(m.matrix, c, t):
                img = linear_image(m.matrix, c)
                bad.append(f"image of {c} is {img}, not a cone of the target")
            elif image_lattice(m.matrix, m.source.lattice(c)) != m.target.lattice(t):
                bad.append(f"lattice of {c} does not map onto the lattice of {t}")
            if len(bad) >= max_violations:
                return Report(False, bad, {"surjective": surjective, "checked": len(seen)})
    return Report(not bad, bad, {"surjective": surjective, "checked": len(seen)})

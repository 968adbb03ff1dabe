"""Universal weak semistable reduction of a scaffold over V[n].

The configuration fan is obtained by overlaying the images of all cones of the
scaffold, grouping cells by the set of images that contain them, and taking
each group's intersection of images as a maximal cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cones import Cone, Position, linear_image, pullback_covector
from .fans import Fan, check_complete, check_fan, cut, intersect_full, split
from .linalg import (
    IntMatrix,
    LatticeBasis,
    dot,
    image_lattice,
    lattice_intersect,
    mat_vec,
    primitive,
)
from .scaffolds import Scaffold, validate_scaffold
from .stacky import FanMap, Report, StackyFan, check_stacky, check_weakly_semistable, image_equals

LATTICE_READINGS = ("equal", "containing")


@dataclass
class ConfigurationFan:
    scaffold: Scaffold
    pi_fan: StackyFan
    refined_scaffold: Scaffold
    refined_stacky: StackyFan
    projection: FanMap
    sections: list[FanMap]
    images: tuple[Cone, ...]
    over: dict[Cone, Cone] = field(default_factory=dict)
    lattice_reading: str = "equal"

    @property
    def n(self) -> int:
        return self.scaffold.n

    @property
    def d(self) -> int:
        return self.scaffold.d

    @property
    def pi(self) -> IntMatrix:
        return self.scaffold.projection()

    def maximal_over(self, rho: Cone) -> list[Cone]:
        """Maximal cones of the refined scaffold lying over the maximal cone rho."""
        return [s for s, r in self.over.items() if r == rho]

    def cones_over(self, rho: Cone) -> list[Cone]:
        """All cones of the refined scaffold whose image is exactly rho."""
        if rho not in self.pi_fan.fan:
            raise KeyError(f"{rho} is not a cone of the configuration fan")
        pi = self.pi
        out = set()
        for top in self.pi_fan.fan.maximal_cones:
            if not top.is_face(rho):
                continue
            for s in self.maximal_over(top):
                mask = sum(1 << i for i, r in enumerate(s.rays) if rho.contains(mat_vec(pi, r)) is not Position.OUTSIDE)
                face = s.face_from_mask(mask)
                for t in face.faces():
                    if t.dim >= rho.dim and image_equals(pi, t, rho):
                        out.add(t)
        return sorted(out)

    def locate(self, p: Sequence) -> Cone:
        return self.pi_fan.fan.locate(p)


def full_images(s: Scaffold) -> list[Cone]:
    """Distinct full-dimensional images pi(sigma) over all cones sigma."""
    pi = s.projection()
    base = s.base_rank
    out = set()
    for c in s.fan.all_cones:
        if c.dim < base:
            continue
        img = linear_image(pi, c)
        if img.dim == base:
            out.add(img)
    return sorted(out)


def _overlay(images: Sequence[Cone], k: int) -> list[Cone]:
    """Cells on which the set of containing images is constant."""
    cells = [Cone.whole_space(k)]
    for img in images:
        nxt = []
        for c in cells:
            inside: Optional[Cone] = c
            for h in img.facet_normals:
                lin_hit = any(dot(h, l) for l in inside.lineality.basis_rows)
                if not lin_hit:
                    vals = [dot(h, r) for r in inside.rays]
                    if all(v >= 0 for v in vals):
                        continue
                    if all(v <= 0 for v in vals):
                        nxt.append(inside)
                        inside = None
                        break
                pos, neg = split(inside, h)
                nxt.append(neg)
                inside = pos
            if inside is not None:
                nxt.append(inside)
        cells = nxt
    return cells


def containing_set(images: Sequence[Cone], p: Sequence) -> frozenset[int]:
    return frozenset(i for i, img in enumerate(images) if img.contains(p) is not Position.OUTSIDE)


def _meet_of(images: Sequence[Cone], idx: frozenset[int], k: int) -> Cone:
    cone: Optional[Cone] = Cone.whole_space(k)
    for i in sorted(idx):
        cone = intersect_full(cone, images[i])
        if cone is None:
            raise RuntimeError("containing images have a lower-dimensional intersection")
    return cone


def quotient_fan(s: Scaffold, images: Optional[Sequence[Cone]] = None) -> Fan:
    """The maximal cones gamma = meet of the images containing a generic point."""
    if images is None:
        images = full_images(s)
    k = s.base_rank
    groups = {}
    for c in _overlay(images, k):
        key = containing_set(images, c.relative_interior_point())
        groups.setdefault(key, c)
    return Fan([_meet_of(images, key, k) for key in groups], k)


def _lift(lat: LatticeBasis, n: int, d: int) -> LatticeBasis:
    """pi^{-1}(lat) in Z^{(n+1)d}."""
    k = (n + 1) * d
    gens = [tuple(r) + (0,) * d for r in lat.basis_rows]
    for t in range(d):
        v = [0] * k
        v[n * d + t] = 1
        gens.append(tuple(v))
    return LatticeBasis.from_generators(gens, k)


def _refine(s: Scaffold, pi_fan: Fan) -> dict[Cone, Cone]:
    """Maximal cones of the common refinement of s and pi^{-1}(Pi), each mapped to its image."""
    pi = s.projection()
    over: dict[Cone, Cone] = {}
    pulled = {rho: [pullback_covector(h, pi) for h in rho.facet_normals] for rho in pi_fan.maximal_cones}
    for sigma in s.fan.maximal_cones:
        img = linear_image(pi, sigma)
        for rho in pi_fan.maximal_cones:
            if not img.contains_cone(rho):
                continue
            piece: Optional[Cone] = sigma
            for h in pulled[rho]:
                piece = cut(piece, h)
                if piece is None:
                    break
            if piece is not None:
                over[piece] = rho
    return over


def _minimal_faces_onto(pi: IntMatrix, sigma: Cone, rho: Cone) -> list[Cone]:
    """Inclusion-minimal faces of sigma whose image is exactly rho.

    Assumes pi(sigma) is contained in rho and both are pointed, so a face maps onto
    rho iff its projected rays include every ray of rho.
    """
    targets = {r: i for i, r in enumerate(rho.rays)}
    need = (1 << len(rho.rays)) - 1
    hits = []
    for r in sigma.rays:
        v = mat_vec(pi, r)
        hits.append(1 << targets[primitive(v)] if any(v) and primitive(v) in targets else 0)
    covering = []
    for m in sigma.face_masks():
        got = 0
        for i, h in enumerate(hits):
            if m >> i & 1:
                got |= h
        if got == need:
            covering.append(m)
    minimal = [m for m in covering if not any(o != m and o & m == o for o in covering)]
    return [sigma.face_from_mask(m) for m in minimal]


def _lattice_over_maximal(cf: "ConfigurationFan", rho: Cone, base: int) -> LatticeBasis:
    pi = cf.pi
    tops = cf.maximal_over(rho)
    if not rho.is_pointed or any(not s.is_pointed for s in tops):
        return _lattice_equal(pi, cf.cones_over(rho), base)
    faces = {f for s in tops for f in _minimal_faces_onto(pi, s, rho)}
    return _lattice_equal(pi, sorted(faces), base)


def _lattice_equal(pi: IntMatrix, cones: Sequence[Cone], base: int) -> LatticeBasis:
    lat = LatticeBasis.full(base)
    for c in cones:
        lat = lattice_intersect(lat, image_lattice(pi, c.span_lattice()))
    return lat


def configuration_fan(
    s: Scaffold,
    lattice_reading: str = "equal",
    certify: bool = True,
    validate_input: bool = False,
) -> ConfigurationFan:
    if lattice_reading not in LATTICE_READINGS:
        raise ValueError(f"lattice_reading must be one of {LATTICE_READINGS}")
    if s.n < 1:
        raise ValueError("the configuration space needs n >= 1")
    if validate_input:
        rep = validate_scaffold(s)
        if not rep.ok:
            raise ValueError("; ".join(rep.messages))
    pi = s.projection()
    base = s.base_rank
    images = tuple(full_images(s))
    fan = quotient_fan(s, images)
    over = _refine(s, fan)
    refined = Scaffold(s.n, s.d, Fan(over, s.rank), s.kind + "'", dict(s.params))

    sub: dict[Cone, LatticeBasis] = {}
    cf = ConfigurationFan(s, StackyFan(fan), refined, StackyFan(refined.fan), None, [], images, over, lattice_reading)
    for rho in fan.maximal_cones:
        if lattice_reading == "equal":
            lat = _lattice_over_maximal(cf, rho, base)
        else:
            contributing = [c for c in s.fan.all_cones if c.dim >= base and linear_image(pi, c).contains_cone(rho)]
            lat = _lattice_equal(pi, contributing, base)
        if lat != LatticeBasis.full(base):
            sub[rho] = lat
    pi_stacky = StackyFan(fan, sub)
    lifted = {}
    for sigma, rho in over.items():
        if rho in sub:
            lifted[sigma] = _lift(sub[rho], s.n, s.d)
    refined_stacky = StackyFan(refined.fan, lifted)
    cf.pi_fan = pi_stacky
    cf.refined_stacky = refined_stacky
    cf.projection = FanMap(pi, refined_stacky, pi_stacky)
    cf.sections = [FanMap(s.section(i).matrix, pi_stacky, refined_stacky) for i in range(s.n + 1)]
    if certify:
        rep = certify_configuration(cf)
        if not rep.ok:
            raise RuntimeError("certificate failure: " + "; ".join(rep.violations[:5]))
    return cf


def refined_scaffold_of(cf: ConfigurationFan) -> Scaffold:
    return cf.refined_scaffold


# ---------------------------------------------------------------------------
# Certificates


def check_terminality(cf: ConfigurationFan, fan: Optional[Fan] = None) -> Report:
    """Certificate that ``fan`` (default: cf's quotient) is the coarsest overlay of the images.

    (a) every full-dimensional image is a union of maximal cones,
    (b) every maximal cone is the meet of the images containing it,
    (c) adjacent maximal cones have different containing sets.
    """
    fan = fan if fan is not None else cf.pi_fan.fan
    images = cf.images
    k = fan.ambient_rank
    bad = []
    keys = {}
    for rho in fan.maximal_cones:
        p = rho.relative_interior_point()
        for i, img in enumerate(images):
            if img.contains_cone(rho):
                continue
            if img.contains(p) is not Position.OUTSIDE or intersect_full(rho, img) is not None:
                bad.append(f"image {i} cuts through the maximal cone {rho}")
                break
        key = containing_set(images, p)
        keys[rho] = key
        try:
            meet = _meet_of(images, key, k)
        except RuntimeError:
            meet = None
        if meet != rho:
            bad.append(f"{rho} is not the meet of its containing images")
    owners: dict[Cone, list[Cone]] = {}
    for rho in fan.maximal_cones:
        for f in rho.facets():
            owners.setdefault(f, []).append(rho)
    for f, pair in owners.items():
        if len(pair) == 2 and keys[pair[0]] == keys[pair[1]]:
            bad.append(f"adjacent cones {pair[0]} and {pair[1]} have equal containing sets")
    return Report(not bad, bad)


def certify_configuration(cf: ConfigurationFan, fan_axioms: bool = False) -> Report:
    """Completeness, stacky consistency, weak semistability of pi and of every section, terminality."""
    bad = []
    info = {}
    if fan_axioms:
        rep = check_fan(cf.pi_fan.fan)
        if not rep.ok:
            bad.append(f"configuration fan axioms: {rep.message}")
    if not check_complete(cf.pi_fan.fan):
        bad.append("configuration fan is not complete")
    for name, st in (("configuration", cf.pi_fan), ("refined", cf.refined_stacky)):
        rep = check_stacky(st)
        bad += [f"{name}: {v}" for v in rep.violations]
    rep = check_weakly_semistable(cf.projection)
    info["projection"] = rep.ok
    bad += [f"projection: {v}" for v in rep.violations]
    for i, m in enumerate(cf.sections):
        rep = check_weakly_semistable(m)
        info[f"section_{i}"] = rep.ok
        bad += [f"section {i}: {v}" for v in rep.violations]
    rep = check_terminality(cf)
    info["terminality"] = rep.ok
    bad += [f"terminality: {v}" for v in rep.violations]
    return Report(not bad, bad, info)

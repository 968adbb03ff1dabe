"""Strata of a configuration fan: fibre complexes, marking vertices,
position maps, component fans and rubber data."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .chow import ConfigurationFan
from .cones import Cone, Position, linear_image
from .fans import Fan
from .linalg import (
    IntMatrix,
    LatticeBasis,
    snf_invariants,
    solve_rational,
    transpose,
)
from .stacky import isotropy


@dataclass
class FiberComplex:
    rho: Cone
    base_point: tuple
    cones: list[Cone]
    vertices: list[Cone]
    n: int
    d: int
    # (i, j) with cones[i] a proper face of cones[j]
    face_pairs: list[tuple[int, int]] = field(default_factory=list)

    def dim_of(self, lam: Cone) -> int:
        return lam.dim - self.rho.dim

    def polyhedra_of_dim(self, k: int) -> list[Cone]:
        return [c for c in self.cones if self.dim_of(c) == k]

    def vertex_position(self, v: Cone, p: Optional[Sequence] = None) -> tuple:
        return position_at(v, self.n, self.d, self.base_point if p is None else p)

    def vertices_of(self, lam: Cone) -> list[Cone]:
        return [v for v in self.vertices if lam.is_face(v)]

    def recession_rays(self, lam: Cone) -> list[tuple]:
        """Rays of the recession cone of the slice (x block of lam meet ker pi)."""
        base = self.n * self.d
        ker = [tuple(1 if j == i else 0 for j in range(len(lam.rays[0]) if lam.rays else 0)) for i in range(base)]
        rec = Cone.from_inequalities(lam.facet_normals, list(lam.equations) + ker, lam.ambient_rank)
        return [r[base:] for r in rec.rays] + [l[base:] for l in rec.lineality.basis_rows]

    def poset_signature(self) -> tuple:
        """Sample-independent summary: for each polyhedron, (dim, #vertices, #faces below)."""
        below = {j: 0 for j in range(len(self.cones))}
        for i, j in self.face_pairs:
            below[j] += 1
        sig = [(self.dim_of(c), len(self.vertices_of(c)), below[j]) for j, c in enumerate(self.cones)]
        return tuple(sorted(sig))


def _preimage_point(lam: Cone, n: int, d: int, p: Sequence) -> tuple:
    """The unique point of span(lam) over p (lam must map isomorphically onto its image)."""
    base = n * d
    gens = list(lam.rays) + list(lam.lineality.basis_rows)
    if not gens:
        return tuple(Fraction(0) for _ in range(base + d))
    cols = transpose([g[:base] for g in gens])
    coef = solve_rational(cols, p)
    if coef is None:
        raise ValueError("point is not in the image of the cone")
    return tuple(sum(c * g[j] for c, g in zip(coef, gens)) for j in range(base + d))


def position_at(v: Cone, n: int, d: int, p: Sequence) -> tuple:
    return _preimage_point(v, n, d, p)[n * d:]


def fiber_complex(cf: ConfigurationFan, rho: Cone, base_point: Optional[Sequence] = None) -> FiberComplex:
    fan = cf.pi_fan.fan
    if rho not in fan:
        raise KeyError(f"{rho} is not a cone of the configuration fan")
    rho = fan.intern(rho)
    p = tuple(rho.relative_interior_point()) if base_point is None else tuple(base_point)
    if rho.contains(p) is not Position.RELATIVE_INTERIOR:
        raise ValueError("base point is not in the relative interior of rho")
    cones = cf.cones_over(rho)
    cones.sort(key=lambda c: (c.dim, c.sort_key()))
    verts = [c for c in cones if c.dim == rho.dim]
    pairs = []
    for j, big in enumerate(cones):
        for i, small in enumerate(cones):
            if small.dim < big.dim and big.is_face(small):
                pairs.append((i, j))
    return FiberComplex(rho, p, cones, verts, cf.n, cf.d, pairs)


def marking_vertices(cf: ConfigurationFan, fc: FiberComplex) -> dict[int, Cone]:
    """For each marking i, the vertex cone p_i(rho)."""
    out = {}
    for i in range(cf.n + 1):
        img = linear_image(cf.scaffold.section(i).matrix, fc.rho)
        if img not in fc.vertices:
            raise RuntimeError(f"section {i} does not land on a vertex cone")
        out[i] = fc.vertices[fc.vertices.index(img)]
    return out


@dataclass
class PositionMap:
    vertex: Cone
    # rows: x coordinates; columns: images of the rays of rho (then its lineality basis)
    on_rays: list[list[Fraction]]
    # rows: x coordinates; columns: images of the HNF basis of L_rho
    on_lattice: IntMatrix

    def describe(self, names: Sequence[str]) -> list[str]:
        """Each coordinate as a linear form in the ray coordinates, e.g. '-e1 + f2'."""
        return [_linear_form(row, names) for row in self.on_rays]


def _linear_form(row: Sequence, names: Sequence[str]) -> str:
    terms = []
    for c, name in zip(row, names):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        sign = "-" if c < 0 else "+"
        terms.append((sign, f"{mag}{name}"))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        out += f" {sign} {t}"
    return out


def _phi(v: Cone, n: int, d: int, w: Sequence) -> tuple:
    return position_at(v, n, d, w)


def position_maps(cf: ConfigurationFan, fc: FiberComplex) -> dict[Cone, PositionMap]:
    rho = fc.rho
    cols = list(rho.rays) + list(rho.lineality.basis_rows)
    lat = cf.pi_fan.lattice(rho)
    out = {}
    for v in fc.vertices:
        ray_imgs = [_phi(v, fc.n, fc.d, r) for r in cols]
        lat_imgs = [_phi(v, fc.n, fc.d, b) for b in lat.basis_rows]
        if any(x.denominator != 1 for col in lat_imgs for x in col):
            raise RuntimeError("position map is not integral on the stacky lattice")
        on_rays = [[col[t] for col in ray_imgs] for t in range(fc.d)]
        on_lat = tuple(tuple(int(col[t]) for col in lat_imgs) for t in range(fc.d))
        out[v] = PositionMap(v, on_rays, on_lat)
    return out


def component_fan(fc: FiberComplex, v: Cone) -> Fan:
    """Tangent cones at the vertex v of all polyhedra containing it."""
    if v not in fc.vertices:
        raise KeyError("not a vertex of the fibre complex")
    base, d = fc.n * fc.d, fc.d
    k = base + d
    drop = tuple(tuple(1 if j == base + t else 0 for j in range(k)) for t in range(d))
    ker = [tuple(1 if j == i else 0 for j in range(k)) for i in range(base)]
    span_v = list(v.rays) + list(v.lineality.basis_rows)
    tops = set()
    for lam in fc.cones:
        if lam.dim - fc.rho.dim != d or not lam.is_face(v):
            continue
        tangent = Cone.from_generators(lam.rays, list(lam.lineality.basis_rows) + span_v, k)
        local = Cone.from_inequalities(tangent.facet_normals, list(tangent.equations) + ker, k)
        tops.add(linear_image(drop, local))
    return Fan(tops, d)


@dataclass
class RubberData:
    rho: Cone
    lattice: LatticeBasis
    weights: dict[Cone, IntMatrix]
    stratum_dim: int
    stabilizer: list[int]

    @property
    def rank(self) -> int:
        return self.lattice.rank


def rubber_data(cf: ConfigurationFan, rho: Cone, fc: Optional[FiberComplex] = None) -> RubberData:
    fc = fc or fiber_complex(cf, rho)
    maps = position_maps(cf, fc)
    lat = cf.pi_fan.lattice(fc.rho)
    weights = {v: m.on_lattice for v, m in maps.items()}
    marks = marking_vertices(cf, fc)
    stacked = [row for i in range(1, cf.n + 1) for row in weights[marks[i]]]
    stab = [x for x in snf_invariants(stacked) if x != 1] if lat.rank else []
    return RubberData(fc.rho, lat, weights, cf.n * cf.d - fc.rho.dim, stab)


@dataclass
class StratumReport:
    rho: Cone
    cone_id: int
    base_point: tuple
    fiber: FiberComplex
    markings: dict[int, Cone]
    position_maps: dict[Cone, PositionMap]
    rubber: RubberData
    component_fans: dict[Cone, Fan]
    isotropy: list[int]

    @property
    def vertex_ids(self) -> dict[Cone, int]:
        return {v: i for i, v in enumerate(self.fiber.vertices)}

    def ray_names(self) -> list[str]:
        return [f"r{j + 1}" for j in range(len(self.rho.rays) + self.rho.lineality.rank)]

    def summary(self) -> dict:
        ids = self.vertex_ids
        fc = self.fiber
        counts = {}
        for c in fc.cones:
            counts[fc.dim_of(c)] = counts.get(fc.dim_of(c), 0) + 1
        return {
            "cone_id": self.cone_id,
            "dim": self.rho.dim,
            "rays": [list(r) for r in self.rho.rays],
            "lineality": [list(r) for r in self.rho.lineality.basis_rows],
            "base_point": [str(x) for x in self.base_point],
            "polyhedra_by_dim": {str(k): v for k, v in sorted(counts.items())},
            "vertices": [
                {
                    "id": ids[v],
                    "position": [str(x) for x in fc.vertex_position(v)],
                    "markings": sorted(i for i, w in self.markings.items() if w == v),
                    "position_map_on_rays": [[str(x) for x in row] for row in self.position_maps[v].on_rays],
                    "position_map_on_lattice": [[str(x) for x in row] for row in self.position_maps[v].on_lattice],
                    "position_map_formula": self.position_maps[v].describe(self.ray_names()),
                    "component_fan_maximal_cones": len(self.component_fans[v]),
                }
                for v in fc.vertices
            ],
            "rubber": {
                "lattice_hnf": [[str(x) for x in row] for row in self.rubber.lattice.basis_rows],
                "rank": self.rubber.rank,
                "stratum_dim": self.rubber.stratum_dim,
                "generic_stabilizer": self.rubber.stabilizer,
            },
            "isotropy": self.isotropy,
        }

    def text(self) -> str:
        s = self.summary()
        lines = [
            f"cone {s['cone_id']}  dim {s['dim']}  rays {s['rays']}",
            f"base point ({', '.join(s['base_point'])})",
            f"polyhedra by dim {s['polyhedra_by_dim']}",
            f"rubber rank {s['rubber']['rank']}  stratum dim {s['rubber']['stratum_dim']}  "
            f"isotropy {s['isotropy'] or 'trivial'}",
        ]
        names = self.ray_names()
        lines.append("ray names " + ", ".join(f"{nm}={list(r)}" for nm, r in zip(names, s["rays"])))
        for v in s["vertices"]:
            marks = ",".join(map(str, v["markings"])) or "-"
            lines.append(
                f"  v{v['id']:<3} at ({', '.join(v['position'])})  markings {marks:<6} "
                f"phi = ({', '.join(v['position_map_formula'])})  component cones {v['component_fan_maximal_cones']}"
            )
        return "\n".join(lines)


def stratum_report(cf: ConfigurationFan, rho: Cone, base_point: Optional[Sequence] = None) -> StratumReport:
    fan = cf.pi_fan.fan
    rho = fan.intern(rho)
    fc = fiber_complex(cf, rho, base_point)
    maps = position_maps(cf, fc)
    marks = marking_vertices(cf, fc)
    rub = rubber_data(cf, rho, fc)
    comps = {v: component_fan(fc, v) for v in fc.vertices}
    return StratumReport(rho, fan.index(rho), fc.base_point, fc, marks, maps, rub, comps, isotropy(cf.pi_fan, rho))


def locate(cf: ConfigurationFan, p: Sequence) -> tuple[Cone, StratumReport]:
    if len(p) != cf.n * cf.d:
        raise ValueError(f"point must have {cf.n * cf.d} coordinates")
    p = tuple(Fraction(x) for x in p)
    rho = cf.pi_fan.fan.intern(cf.pi_fan.fan.locate(p))
    return rho, stratum_report(cf, rho, p)


def gluing_identity(cf: ConfigurationFan, rep: StratumReport) -> bool:
    """Stacked marking position maps on L_rho equal the inclusion L_rho into N[n]."""
    lat = rep.rubber.lattice
    stacked = [row for i in range(1, cf.n + 1) for row in rep.position_maps[rep.markings[i]].on_lattice]
    inclusion = transpose(lat.basis_rows, lat.rank) if lat.rank else tuple(() for _ in range(cf.n * cf.d))
    return tuple(tuple(r) for r in stacked) == tuple(tuple(r) for r in inclusion)


def marking_identities(cf: ConfigurationFan, rho: Cone) -> tuple[bool, bool]:
    """(anchor map is zero, stacked marking maps equal the inclusion of L_rho), without component fans."""
    fc = fiber_complex(cf, rho)
    maps = position_maps(cf, fc)
    marks = marking_vertices(cf, fc)
    anchor = all(x == 0 for row in maps[marks[0]].on_rays for x in row)
    lat = cf.pi_fan.lattice(fc.rho)
    stacked = tuple(tuple(r) for i in range(1, cf.n + 1) for r in maps[marks[i]].on_lattice)
    inclusion = transpose(lat.basis_rows, lat.rank) if lat.rank else tuple(() for _ in range(cf.n * cf.d))
    return anchor, stacked == tuple(tuple(r) for r in inclusion)


def anchor_is_zero(rep: StratumReport) -> bool:
    m = rep.position_maps[rep.markings[0]]
    return all(x == 0 for row in m.on_rays for x in row)


# ---------------------------------------------------------------------------
# SVG rendering of planar fibre complexes


def render_svg(rep: StratumReport, size: int = 480) -> str:
    fc = rep.fiber
    if fc.d != 2:
        raise ValueError("only d = 2 fibre complexes can be drawn")
    pos = {v: tuple(float(x) for x in fc.vertex_position(v)) for v in fc.vertices}
    xs = [p[0] for p in pos.values()] or [0.0]
    ys = [p[1] for p in pos.values()] or [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
    scale = size * 0.35 / span
    reach = span * 0.9

    def pt(x, y):
        return size / 2 + (x - cx) * scale, size / 2 - (y - cy) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>']
    for lam in fc.polyhedra_of_dim(1):
        vs = fc.vertices_of(lam)
        if len(vs) == 2:
            (x1, y1), (x2, y2) = pt(*pos[vs[0]]), pt(*pos[vs[1]])
        else:
            rec = fc.recession_rays(lam)
            if not vs or not rec:
                continue
            x0, y0 = pos[vs[0]]
            r = rec[0]
            norm = max(abs(r[0]), abs(r[1]))
            (x1, y1), (x2, y2) = pt(x0, y0), pt(x0 + r[0] * reach / norm, y0 + r[1] * reach / norm)
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="black" stroke-width="1.5"/>')
    ids = rep.vertex_ids
    for v, (x, y) in pos.items():
        px, py = pt(x, y)
        marks = ",".join(str(i) for i, w in rep.markings.items() if w == v)
        out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="{"crimson" if marks else "black"}"/>')
        label = f"v{ids[v]}" + (f" [{marks}]" if marks else "")
        out.append(f'<text x="{px + 6:.2f}" y="{py - 6:.2f}" font-size="11" font-family="monospace">{label}</text>')
    out.append("</svg>")
    return "\n".join(out)

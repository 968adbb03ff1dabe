"""Tropical scaffolds on V[n] x V and their standard constructions.

Coordinates are (a_1 block, ..., a_n block, x block), each block of width d.
The anchor a_0 is identically zero and is not stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .cones import Cone, intersect
from .fans import (
    Arrangement,
    Fan,
    chambers,
    check_complete,
    check_fan,
    common_refinement,
    fan_from_arrangement,
    permute_fan,
    preimage_fan,
    product_fan,
)
from .linalg import IntMatrix, IntVec, dot


@dataclass
class Scaffold:
    n: int
    d: int
    fan: Fan
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0 or self.d < 1:
            raise ValueError("need n >= 0 and d >= 1")
        if self.fan.ambient_rank != self.rank:
            raise ValueError(f"fan has rank {self.fan.ambient_rank}, expected {self.rank}")

    @property
    def rank(self) -> int:
        return (self.n + 1) * self.d

    @property
    def base_rank(self) -> int:
        return self.n * self.d

    def projection(self) -> IntMatrix:
        return projection_matrix(self.n, self.d)

    def section(self, i: int) -> "SectionMap":
        return SectionMap.of(i, self.n, self.d)

    def section_equations(self, i: int) -> list[IntVec]:
        return section_equations(i, self.n, self.d)

    def __repr__(self) -> str:
        return f"Scaffold(kind={self.kind!r}, n={self.n}, d={self.d}, maximal={len(self.fan)})"


def projection_matrix(n: int, d: int) -> IntMatrix:
    """pi: drop the x block."""
    k = (n + 1) * d
    return tuple(tuple(1 if j == i else 0 for j in range(k)) for i in range(n * d))


def section_equations(i: int, n: int, d: int) -> list[IntVec]:
    """Equations x_t - (a_i)_t = 0 cutting out the section image H_i."""
    k = (n + 1) * d
    out = []
    for t in range(d):
        v = [0] * k
        v[n * d + t] = 1
        if i > 0:
            v[(i - 1) * d + t] -= 1
        out.append(tuple(v))
    return out


@dataclass(frozen=True)
class SectionMap:
    index: int
    matrix: IntMatrix

    @classmethod
    def of(cls, i: int, n: int, d: int) -> "SectionMap":
        if not 0 <= i <= n:
            raise ValueError("section index out of range")
        base = n * d
        rows = [tuple(1 if j == r else 0 for j in range(base)) for r in range(base)]
        for t in range(d):
            rows.append(tuple(1 if i > 0 and j == (i - 1) * d + t else 0 for j in range(base)))
        return cls(i, tuple(rows))


# ---------------------------------------------------------------------------
# Validation


@dataclass
class ScaffoldReport:
    ok: bool
    messages: list[str] = field(default_factory=list)
    section_cones: dict[int, list[Cone]] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def _meet_face(c: Cone, eqs: Sequence[IntVec]) -> Optional[Cone]:
    """c meet {eqs = 0} if it is a face of c, else None."""
    face = c
    pending = list(eqs)
    while pending:
        progressed = False
        rest = []
        for e in pending:
            vals = [dot(e, r) for r in face.rays]
            lin_hit = any(dot(e, l) for l in face.lineality.basis_rows)
            if not lin_hit and not any(vals):
                progressed = True
                continue
            if not lin_hit and (all(v >= 0 for v in vals) or all(v <= 0 for v in vals)):
                face = face.face_from_mask(sum(1 << i for i, v in enumerate(vals) if v == 0))
                progressed = True
                continue
            rest.append(e)
        pending = rest
        if not progressed:
            break
    if not pending:
        return face
    meet = intersect(face, Cone.from_inequalities([], list(eqs), c.ambient_rank))
    return meet if face.is_face(meet) else None


def section_cover(s: Scaffold, i: int) -> Optional[list[Cone]]:
    """Cones of dimension n*d covering H_i, or None if H_i is not a union of cones."""
    eqs = s.section_equations(i)
    out = set()
    for m in s.fan.maximal_cones:
        f = _meet_face(m, eqs)
        if f is None:
            return None
        if f.dim == s.base_rank:
            out.add(f)
    return sorted(out)


def validate_scaffold(s: Scaffold, fan_axioms: bool = True) -> ScaffoldReport:
    msgs = []
    if fan_axioms:
        rep = check_fan(s.fan)
        if not rep.ok:
            msgs.append(f"fan axioms: {rep.message}: {rep.violation}")
    if not check_complete(s.fan):
        msgs.append("fan is not complete")
    covers = {}
    for i in range(s.n + 1):
        cov = section_cover(s, i)
        if cov is None:
            msgs.append(f"H_{i} is not a union of cones")
        else:
            covers[i] = cov
    return ScaffoldReport(not msgs, msgs, covers)


# ---------------------------------------------------------------------------
# Constructors


def _diff(k: int, plus: Optional[int], minus: Optional[int]) -> IntVec:
    v = [0] * k
    if plus is not None:
        v[plus] += 1
    if minus is not None:
        v[minus] -= 1
    return tuple(v)


def lambda0_hyperplanes(n: int) -> list[IntVec]:
    k = n + 1
    return [_diff(k, n, None if i == 0 else i - 1) for i in range(n + 1)]


def lambda0(n: int) -> Scaffold:
    """The minimal d=1 scaffold: the arrangement {x = a_i}."""
    fan = fan_from_arrangement(Arrangement.of(lambda0_hyperplanes(n), n + 1))
    return Scaffold(n, 1, fan, "lambda0", {"n": n})


def square_hyperplanes(n: int) -> list[IntVec]:
    k = 2 * n + 2
    xs, ys = 2 * n, 2 * n + 1
    out = []
    for i in range(n + 1):
        out.append(_diff(k, xs, None if i == 0 else 2 * (i - 1)))
    for i in range(n + 1):
        out.append(_diff(k, ys, None if i == 0 else 2 * (i - 1) + 1))
    return out


def lambda_square(n: int) -> Scaffold:
    """The d=2 arrangement {x = a_i} and {y = b_i}."""
    fan = fan_from_arrangement(Arrangement.of(square_hyperplanes(n), 2 * n + 2))
    return Scaffold(n, 2, fan, "square", {"n": n})


def _apex_sum(k: int, i: int) -> list[int]:
    v = [0] * k
    if i > 0:
        v[2 * (i - 1)] = 1
        v[2 * (i - 1) + 1] = 1
    return v


def apex_region(n: int, i: int) -> Cone:
    """{a_i + b_i <= a_j + b_j for all j}."""
    k = 2 * n + 2
    si = _apex_sum(k, i)
    normals = []
    for j in range(n + 1):
        if j != i:
            sj = _apex_sum(k, j)
            normals.append(tuple(x - y for x, y in zip(sj, si)))
    return Cone.from_inequalities(normals, [], k)


def antidiagonal(n: int, i: int) -> IntVec:
    """Normal of D_i: x + y = a_i + b_i."""
    k = 2 * n + 2
    v = [-x for x in _apex_sum(k, i)]
    v[2 * n] += 1
    v[2 * n + 1] += 1
    return tuple(v)


def _wall_cells(cells: Sequence[Cone], e: IntVec) -> set[Cone]:
    """Top-dimensional faces cut from cells by the supporting hyperplane e = 0 (e >= 0 on all cells)."""
    faces = set()
    for c in cells:
        mask = sum(1 << t for t, r in enumerate(c.rays) if dot(e, r) == 0)
        faces.add(c.face_from_mask(mask))
    if not faces:
        return faces
    top = max(f.dim for f in faces)
    return {f for f in faces if f.dim == top}


def lambda_biperm(n: int, check_gluing: bool = True) -> Scaffold:
    """Square scaffold sliced by the antidiagonal through the minimizing point, region by region."""
    k = 2 * n + 2
    hyper = square_hyperplanes(n)
    pieces: list[list[Cone]] = []
    for i in range(n + 1):
        region = apex_region(n, i)
        pieces.append(chambers(region, hyper + [antidiagonal(n, i)]))
    cones = {c for p in pieces for c in p}
    if check_gluing:
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                wall = tuple(x - y for x, y in zip(_apex_sum(k, j), _apex_sum(k, i)))
                if _wall_cells(pieces[i], wall) != _wall_cells(pieces[j], tuple(-x for x in wall)):
                    raise ValueError(f"apex regions {i} and {j} induce different subdivisions of their common face")
    fan = Fan(cones, k)
    return Scaffold(n, 2, fan, "biperm", {"n": n})


def product_scaffold(s1: Scaffold, s2: Scaffold) -> Scaffold:
    """External product, reshuffled to the block layout with d = d1 + d2."""
    if s1.n != s2.n:
        raise ValueError("product of scaffolds needs equal n")
    n, d1, d2 = s1.n, s1.d, s2.d
    off = (n + 1) * d1
    perm = []
    for b in range(n + 1):
        perm += [b * d1 + t for t in range(d1)]
        perm += [off + b * d2 + t for t in range(d2)]
    fan = permute_fan(product_fan(s1.fan, s2.fan), perm)
    return Scaffold(n, d1 + d2, fan, "product", {"n": n, "factors": [s1.kind, s2.kind]})


def scaffold_from_fan(sigma: Fan, n: int) -> Scaffold:
    """Sigma^{n+1} pulled back along (a, x) -> (x - p_0, x - p_1, ..., x - p_n)."""
    if not check_complete(sigma):
        raise ValueError("the input fan must be complete")
    d = sigma.ambient_rank
    k = (n + 1) * d
    power = sigma
    for _ in range(n):
        power = product_fan(power, sigma)
    rows = []
    for i in range(n + 1):
        for t in range(d):
            v = [0] * k
            v[n * d + t] = 1
            if i > 0:
                v[(i - 1) * d + t] = -1
            rows.append(tuple(v))
    fan = preimage_fan(rows, power)
    return Scaffold(n, d, fan, "from-fan", {"n": n})


def refine_scaffold(s: Scaffold, extra: Fan) -> Scaffold:
    fan = common_refinement([s.fan, extra])
    out = Scaffold(s.n, s.d, fan, s.kind + "+refined", dict(s.params))
    rep = validate_scaffold(out, fan_axioms=False)
    if not rep.ok:
        raise ValueError("; ".join(rep.messages))
    return out


def sqrt_stack_scaffold() -> Scaffold:
    """lambda0(1) refined by the ray x = a_1 / 2."""
    extra = fan_from_arrangement(Arrangement.of([(-1, 2)], 2))
    s = refine_scaffold(lambda0(1), extra)
    s.kind = "sqrt-stack"
    s.params = {"n": 1}
    return s


def quadrant_fan() -> Fan:
    """The fan of P^1 x P^1."""
    return fan_from_arrangement(Arrangement.of([(1, 0), (0, 1)], 2))


def line_fan() -> Fan:
    """The fan of P^1."""
    return fan_from_arrangement(Arrangement.of([(1,)], 1))


def build(kind: str, n: int, fan: Optional[Fan] = None) -> Scaffold:
    if kind == "lambda0":
        return lambda0(n)
    if kind == "square":
        return lambda_square(n)
    if kind == "biperm":
        return lambda_biperm(n)
    if kind == "sqrt-stack":
        return sqrt_stack_scaffold()
    if kind == "from-fan":
        if fan is None:
            raise ValueError("from-fan needs an input fan")
        return scaffold_from_fan(fan, n)
    if kind == "product":
        return product_scaffold(lambda0(n), lambda0(n))
    raise ValueError(f"unknown scaffold kind {kind!r}")

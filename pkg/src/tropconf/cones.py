"""Rational polyhedral cones with exact dual descriptions.

A :class:`Cone` is stored canonically as (lineality lattice, extreme rays).
Rays are reduced modulo the lineality space (zero in the RREF pivot columns
of the lineality) and made primitive, then sorted, so two cones are equal
exactly when their canonical forms are literally equal. The H-description
(equations and facet normals) is computed on demand by running the
double-description method on the dual cone.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .linalg import (
    IntMatrix,
    IntVec,
    LatticeBasis,
    dot,
    integerize,
    mat_vec,
    nullspace,
    primitive,
    rank,
    rref,
    span_lattice,
)

SignVector = tuple[int, ...]


class Position(enum.Enum):
    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    RELATIVE_INTERIOR = "relative_interior"


def double_description(
    equations: Sequence[Sequence[int]],
    inequalities: Sequence[Sequence[int]],
    k: int,
) -> tuple[list[IntVec], list[IntVec]]:
    """Lineality basis and extreme rays of {x : E x = 0, A x >= 0}.

    Rays are extreme modulo the returned lineality but not yet canonical.
    """
    lin = [tuple(v) for v in nullspace(equations, k)] if equations else [
        tuple(1 if i == j else 0 for j in range(k)) for i in range(k)
    ]
    rays: list[IntVec] = []
    masks: list[int] = []
    seen = set()
    ineqs = []
    for a in inequalities:
        a = primitive(tuple(a))
        if any(a) and a not in seen:
            seen.add(a)
            ineqs.append(a)
    for idx, a in enumerate(ineqs):
        bit = 1 << idx
        lv = [dot(a, l) for l in lin]
        j = None
        for i, x in enumerate(lv):
            if x and (j is None or abs(x) < abs(lv[j])):
                j = i
        if j is not None:
            l0 = lin[j]
            s = lv[j]
            if s < 0:
                l0 = tuple(-x for x in l0)
                s = -s
            new_lin = []
            for i, l in enumerate(lin):
                if i == j:
                    continue
                c = lv[i]
                new_lin.append(primitive(tuple(s * x - c * y for x, y in zip(l, l0))) if c else l)
            new_rays = []
            for r, m in zip(rays, masks):
                c = dot(a, r)
                new_rays.append(primitive(tuple(s * x - c * y for x, y in zip(r, l0))) if c else r)
            masks = [m | bit for m in masks]
            new_rays.append(l0)
            masks.append(bit - 1)
            lin, rays = new_lin, new_rays
            continue
        vals = [dot(a, r) for r in rays]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            masks = [m | bit if v == 0 else m for m, v in zip(masks, vals)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        out_r: list[IntVec] = []
        out_m: list[int] = []
        for i, v in enumerate(vals):
            if v > 0:
                out_r.append(rays[i])
                out_m.append(masks[i])
            elif v == 0:
                out_r.append(rays[i])
                out_m.append(masks[i] | bit)
        nr = len(rays)
        for p in pos:
            mp = masks[p]
            vp = vals[p]
            rp = rays[p]
            for q in neg:
                z = mp & masks[q]
                adjacent = True
                for t in range(nr):
                    if t != p and t != q and (masks[t] & z) == z:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vq = vals[q]
                rq = rays[q]
                out_r.append(primitive(tuple(vp * y - vq * x for x, y in zip(rp, rq))))
                out_m.append(z | bit)
        rays, masks = out_r, out_m
    return lin, rays


class _Reducer:
    """Reduction of vectors modulo a subspace using its RREF pivots."""

    __slots__ = ("rows", "pivots")

    def __init__(self, basis: Sequence[Sequence[int]], k: int):
        if basis:
            self.rows, self.pivots = rref(basis, k)
        else:
            self.rows, self.pivots = [], []

    def __call__(self, v: Sequence[int]) -> IntVec:
        if not self.pivots:
            return primitive(tuple(v))
        w = [Fraction(x) for x in v]
        for row, pc in zip(self.rows, self.pivots):
            c = w[pc]
            if c:
                w = [x - c * y for x, y in zip(w, row)]
        return integerize(w)


class Cone:
    """A rational polyhedral cone in Z^ambient_rank (possibly with lineality)."""

    __slots__ = (
        "ambient_rank",
        "rays",
        "lineality",
        "_equations",
        "_facets",
        "_dim",
        "_incidence",
        "_hash",
        "_span",
    )

    def __init__(self, ambient_rank: int, rays: Sequence[IntVec], lineality: LatticeBasis):
        self.ambient_rank = ambient_rank
        self.rays = tuple(rays)
        self.lineality = lineality
        self._equations: Optional[LatticeBasis] = None
        self._facets: Optional[tuple[IntVec, ...]] = None
        self._dim: Optional[int] = None
        self._incidence: Optional[tuple[int, ...]] = None
        self._span: Optional[LatticeBasis] = None
        self._hash = hash((ambient_rank, self.rays, lineality.basis_rows))

    # -- construction -------------------------------------------------------

    @classmethod
    def _canonical(cls, k: int, lin: Iterable[Sequence[int]], rays: Iterable[Sequence[int]]) -> "Cone":
        lat = span_lattice(lin, k)
        red = _Reducer(lat.basis_rows, k)
        out = set()
        for r in rays:
            w = red(r)
            if any(w):
                out.add(w)
        return cls(k, sorted(out), lat)

    @classmethod
    def from_inequalities(
        cls,
        normals: Iterable[Sequence[int]],
        equations: Iterable[Sequence[int]] = (),
        rank: Optional[int] = None,
    ) -> "Cone":
        """The cone {x : equations . x = 0, normals . x >= 0}."""
        normals = [tuple(int(x) for x in v) for v in normals]
        equations = [tuple(int(x) for x in v) for v in equations]
        if rank is None:
            rank = len((normals + equations)[0])
        lin, rays = double_description(equations, normals, rank)
        return cls._canonical(rank, lin, rays)

    @classmethod
    def from_generators(
        cls,
        rays: Iterable[Sequence[int]],
        lineality: Iterable[Sequence[int]] = (),
        rank: Optional[int] = None,
    ) -> "Cone":
        """The cone generated by ``rays`` plus the span of ``lineality``."""
        rays = [tuple(int(x) for x in v) for v in rays if any(v)]
        lineality = [tuple(int(x) for x in v) for v in lineality if any(v)]
        if rank is None:
            rank = len((rays + lineality)[0])
        # The dual cone's lineality is exactly the equation space of the primal.
        eq_lin, facets = double_description(lineality, rays, rank)
        return cls.from_inequalities(facets, eq_lin, rank)

    @classmethod
    def zero(cls, k: int) -> "Cone":
        return cls(k, (), LatticeBasis.zero(k))

    @classmethod
    def whole_space(cls, k: int) -> "Cone":
        return cls(k, (), LatticeBasis.full(k))

    # -- derived data -------------------------------------------------------

    def _compute_hrep(self) -> None:
        k = self.ambient_rank
        eq_lin, facets = double_description(self.lineality.basis_rows, self.rays, k)
        eqs = span_lattice(eq_lin, k)
        red = _Reducer(eqs.basis_rows, k)
        self._equations = eqs
        self._facets = tuple(sorted({red(f) for f in facets}))

    @property
    def equations(self) -> IntMatrix:
        """Canonical basis of the integer covectors vanishing on the span."""
        if self._equations is None:
            self._compute_hrep()
        return self._equations.basis_rows

    @property
    def facet_normals(self) -> tuple[IntVec, ...]:
        if self._facets is None:
            self._compute_hrep()
        return self._facets

    @property
    def dim(self) -> int:
        if self._dim is None:
            self._dim = self.lineality.rank + rank(self.rays)
        return self._dim

    @property
    def is_pointed(self) -> bool:
        return self.lineality.rank == 0

    @property
    def is_zero(self) -> bool:
        return not self.rays and self.lineality.rank == 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    def span_lattice(self) -> LatticeBasis:
        """N_sigma: the saturated lattice of the linear span."""
        if self._span is None:
            k = self.ambient_rank
            if self._dim == k or (self._equations is not None and not self._equations.basis_rows):
                self._span = LatticeBasis.full(k)
            else:
                self._span = span_lattice(list(self.rays) + list(self.lineality.basis_rows), k)
        return self._span

    @property
    def incidence(self) -> tuple[int, ...]:
        """For each facet normal, the bitmask of rays on which it vanishes."""
        if self._incidence is None:
            inc = []
            for f in self.facet_normals:
                m = 0
                for i, r in enumerate(self.rays):
                    if dot(f, r) == 0:
                        m |= 1 << i
                inc.append(m)
            self._incidence = tuple(inc)
        return self._incidence

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.ambient_rank == other.ambient_rank
            and self.rays == other.rays
            and self.lineality.basis_rows == other.lineality.basis_rows
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Cone") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.dim, self.lineality.basis_rows, self.rays)

    def __repr__(self) -> str:
        lin = f", lineality={list(map(list, self.lineality.basis_rows))}" if self.lineality.rank else ""
        return f"Cone(rays={list(map(list, self.rays))}{lin})"

    # -- queries ------------------------------------------------------------

    def contains(self, p: Sequence) -> Position:
        if len(p) != self.ambient_rank:
            raise ValueError("point dimension does not match the ambient rank")
        for e in self.equations:
            if dot(e, p) != 0:
                return Position.OUTSIDE
        strict = True
        for f in self.facet_normals:
            v = dot(f, p)
            if v < 0:
                return Position.OUTSIDE
            if v == 0:
                strict = False
        return Position.RELATIVE_INTERIOR if strict else Position.BOUNDARY

    def __contains__(self, p: Sequence) -> bool:
        return self.contains(p) is not Position.OUTSIDE

    def contains_cone(self, other: "Cone") -> bool:
        """True iff ``other`` is a subset of this cone."""
        eqs = self.equations
        facets = self.facet_normals
        for l in other.lineality.basis_rows:
            if any(dot(e, l) for e in eqs) or any(dot(f, l) for f in facets):
                return False
        for r in other.rays:
            if any(dot(e, r) for e in eqs) or any(dot(f, r) < 0 for f in facets):
                return False
        return True

    def relative_interior_point(self) -> IntVec:
        k = self.ambient_rank
        p = [0] * k
        for r in self.rays:
            p = [x + y for x, y in zip(p, r)]
        return tuple(p)

    def face_from_mask(self, mask: int) -> "Cone":
        rays = [r for i, r in enumerate(self.rays) if mask >> i & 1]
        return Cone(self.ambient_rank, rays, self.lineality)

    def face_masks(self) -> list[int]:
        """Ray bitmasks of all faces (the cone itself first)."""
        full = (1 << len(self.rays)) - 1
        seen = {full}
        stack = [full]
        inc = self.incidence
        while stack:
            m = stack.pop()
            for t in inc:
                g = m & t
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
        return sorted(seen, key=lambda m: (-bin(m).count("1"), m))

    def faces(self) -> list["Cone"]:
        """All faces, including the cone itself and its minimal face."""
        return [self.face_from_mask(m) for m in self.face_masks()]

    def facets(self) -> list["Cone"]:
        """Codimension-one faces."""
        out = {}
        for t in self.incidence:
            f = self.face_from_mask(t)
            out[f] = None
        return [f for f in out if f.dim == self.dim - 1]

    def is_face(self, other: "Cone") -> bool:
        """True iff ``other`` is a face of this cone."""
        if other.lineality.basis_rows != self.lineality.basis_rows:
            return False
        index = {r: i for i, r in enumerate(self.rays)}
        mask = 0
        for r in other.rays:
            i = index.get(r)
            if i is None:
                return False
            mask |= 1 << i
        closure = (1 << len(self.rays)) - 1
        for t in self.incidence:
            if t & mask == mask:
                closure &= t
        return closure == mask

    def smallest_face_containing(self, p: Sequence) -> "Cone":
        """The face whose relative interior contains ``p`` (p must lie in the cone)."""
        mask = (1 << len(self.rays)) - 1
        for f, t in zip(self.facet_normals, self.incidence):
            if dot(f, p) == 0:
                mask &= t
        return self.face_from_mask(mask)


# ---------------------------------------------------------------------------
# Module-level operations


def cone_from_inequalities(normals, equations, rank: int) -> Cone:
    return Cone.from_inequalities(normals, equations, rank)


def intersect(a: Cone, b: Cone) -> Cone:
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("ambient ranks differ")
    return Cone.from_inequalities(
        list(a.facet_normals) + list(b.facet_normals),
        list(a.equations) + list(b.equations),
        a.ambient_rank,
    )


def linear_image(f: Sequence[Sequence[int]], c: Cone) -> Cone:
    """f(c) for an integer matrix f acting on column vectors."""
    target = len(f)
    if f and len(f[0]) != c.ambient_rank:
        raise ValueError("matrix does not act on the cone's lattice")
    rays = [mat_vec(f, r) for r in c.rays]
    lin = [mat_vec(f, l) for l in c.lineality.basis_rows]
    if not any(any(v) for v in rays + lin):
        return Cone.zero(target)
    return Cone.from_generators(rays, lin, target)


def pullback_covector(h: Sequence[int], f: Sequence[Sequence[int]]) -> IntVec:
    """The covector h o f."""
    ncols = len(f[0]) if f else 0
    return tuple(sum(h[i] * f[i][j] for i in range(len(f))) for j in range(ncols))


def preimage(f: Sequence[Sequence[int]], c: Cone, source_rank: int) -> Cone:
    """f^{-1}(c)."""
    normals = [pullback_covector(h, f) for h in c.facet_normals]
    eqs = [pullback_covector(e, f) for e in c.equations]
    return Cone.from_inequalities(normals, eqs, source_rank)


def faces(c: Cone) -> list[Cone]:
    return c.faces()


def contains(c: Cone, p: Sequence) -> Position:
    return c.contains(p)


def relative_interior_point(c: Cone) -> IntVec:
    return c.relative_interior_point()


def product_cone(a: Cone, b: Cone) -> Cone:
    """External product a x b in Z^(ka + kb)."""
    ka, kb = a.ambient_rank, b.ambient_rank
    za, zb = (0,) * ka, (0,) * kb
    rays = [tuple(r) + zb for r in a.rays] + [za + tuple(r) for r in b.rays]
    lin = [tuple(l) + zb for l in a.lineality.basis_rows] + [za + tuple(l) for l in b.lineality.basis_rows]
    return Cone._canonical(ka + kb, lin, rays)


def permute_cone(c: Cone, perm: Sequence[int]) -> Cone:
    """Reorder coordinates: new coordinate i is old coordinate perm[i]."""
    rays = [tuple(r[j] for j in perm) for r in c.rays]
    lin = [tuple(l[j] for j in perm) for l in c.lineality.basis_rows]
    return Cone._canonical(c.ambient_rank, lin, rays)


def sign_vector(normals: Sequence[Sequence[int]], p: Sequence) -> SignVector:
    out = []
    for h in normals:
        v = dot(h, p)
        out.append((v > 0) - (v < 0))
    return tuple(out)

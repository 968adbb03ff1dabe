"""Fans: face-closed cone collections, arrangement fans, refinement, equality."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .cones import Cone, Position, SignVector, intersect, permute_cone, preimage, product_cone, sign_vector
from .linalg import IntVec, LatticeBasis, dot, normalize_sign, primitive, rank


# ---------------------------------------------------------------------------
# Half-space cuts on full-dimensional pointed cells


def _ray_zero_sets(cell: Cone) -> list[int]:
    inc = cell.incidence
    zs = [0] * len(cell.rays)
    for j, m in enumerate(inc):
        bit = 1 << j
        i = 0
        while m:
            if m & 1:
                zs[i] |= bit
            m >>= 1
            i += 1
    return zs


def _assemble(k: int, rays: list[IntVec], candidates: Sequence[IntVec]) -> Cone:
    """Full-dimensional pointed cone from its rays and a superset of its facet normals."""
    tight = []
    for f in candidates:
        m = 0
        for i, r in enumerate(rays):
            if dot(f, r) == 0:
                m |= 1 << i
        tight.append(m)
    facets = set()
    for f, m in zip(candidates, tight):
        if any(m != o and m & o == m for o in tight):
            continue
        facets.add(f)
    cone = Cone(k, sorted(rays), LatticeBasis.zero(k))
    cone._facets = tuple(sorted(facets))
    cone._equations = LatticeBasis.zero(k)
    cone._dim = k
    return cone


def split(cell: Cone, h: Sequence[int]) -> Optional[tuple[Cone, Cone]]:
    """Split a full-dimensional cell by the hyperplane h = 0.

    Returns (cell with h >= 0, cell with h <= 0), or None when the hyperplane
    misses the interior.
    """
    k = cell.ambient_rank
    h = tuple(h)
    neg_h = tuple(-x for x in h)
    if not cell.is_pointed:
        if any(dot(h, l) for l in cell.lineality.basis_rows):
            pass
        else:
            vals = [dot(h, r) for r in cell.rays]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                return None
        fac, eqs = list(cell.facet_normals), list(cell.equations)
        return (
            Cone.from_inequalities(fac + [h], eqs, k),
            Cone.from_inequalities(fac + [neg_h], eqs, k),
        )
    vals = [dot(h, r) for r in cell.rays]
    if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
        return None
    rays = cell.rays
    zs = _ray_zero_sets(cell)
    pos = [i for i, v in enumerate(vals) if v > 0]
    neg = [i for i, v in enumerate(vals) if v < 0]
    zero = [rays[i] for i, v in enumerate(vals) if v == 0]
    new = []
    n = len(rays)
    for p in pos:
        for q in neg:
            z = zs[p] & zs[q]
            if any(t != p and t != q and zs[t] & z == z for t in range(n)):
                continue
            vp, vq = vals[p], vals[q]
            new.append(primitive(tuple(vp * y - vq * x for x, y in zip(rays[p], rays[q]))))
    facets = list(cell.facet_normals)
    plus = _assemble(k, [rays[i] for i in pos] + zero + new, facets + [h])
    minus = _assemble(k, [rays[i] for i in neg] + zero + new, facets + [neg_h])
    return plus, minus


def cut(cell: Cone, h: Sequence[int]) -> Optional[Cone]:
    """cell with h >= 0 if that is still full-dimensional, else None."""
    vals = None
    if cell.is_pointed:
        vals = [dot(h, r) for r in cell.rays]
        if all(v >= 0 for v in vals):
            return cell
        if all(v <= 0 for v in vals):
            return None
    else:
        if not any(dot(h, l) for l in cell.lineality.basis_rows):
            vals = [dot(h, r) for r in cell.rays]
            if all(v >= 0 for v in vals):
                return cell
            if all(v <= 0 for v in vals):
                return None
    parts = split(cell, h)
    return parts[0] if parts else None


def chambers(region: Cone, normals: Iterable[Sequence[int]]) -> list[Cone]:
    """Full-dimensional cells of an arrangement restricted to a full-dimensional region."""
    if not region.is_full_dimensional:
        raise ValueError("region must be full-dimensional")
    cells = [region]
    for h in normals:
        out = []
        for c in cells:
            parts = split(c, h)
            if parts is None:
                out.append(c)
            else:
                out.extend(parts)
        cells = out
    return cells


def intersect_full(a: Cone, b: Cone) -> Optional[Cone]:
    """a meet b if it is full-dimensional, else None (both inputs full-dimensional)."""
    for h in b.facet_normals:
        if a is None:
            return None
        a = cut(a, h)
    return a


def separated(a: Cone, b: Cone) -> bool:
    """Cheap certificate that the interiors of a and b are disjoint."""
    for h in a.facet_normals:
        if all(dot(h, r) <= 0 for r in b.rays) and not any(dot(h, l) for l in b.lineality.basis_rows):
            return True
    for h in b.facet_normals:
        if all(dot(h, r) <= 0 for r in a.rays) and not any(dot(h, l) for l in a.lineality.basis_rows):
            return True
    return False


# ---------------------------------------------------------------------------
# Fans


class Fan:
    """A fan stored by its maximal cones; faces are derived lazily."""

    def __init__(self, maximal_cones: Iterable[Cone], ambient_rank: int):
        cones = sorted(set(maximal_cones))
        for c in cones:
            if c.ambient_rank != ambient_rank:
                raise ValueError("cone in the wrong ambient rank")
        self.ambient_rank = ambient_rank
        self.maximal_cones: tuple[Cone, ...] = tuple(cones)
        self._all: Optional[tuple[Cone, ...]] = None
        self._index: Optional[dict[Cone, int]] = None
        self._complete: Optional[bool] = None

    @classmethod
    def from_cones(cls, cones: Iterable[Cone], ambient_rank: int) -> "Fan":
        """Keep only the cones that are not faces of other listed cones."""
        cones = sorted(set(cones), key=lambda c: -c.dim)
        kept: list[Cone] = []
        for c in cones:
            if not any(c.dim < m.dim and m.contains_cone(c) for m in kept):
                kept.append(c)
        return cls(kept, ambient_rank)

    @property
    def all_cones(self) -> tuple[Cone, ...]:
        if self._all is None:
            seen = set()
            for c in self.maximal_cones:
                seen.update(c.faces())
            self._all = tuple(sorted(seen))
        return self._all

    def index(self, cone: Cone) -> int:
        if self._index is None:
            self._index = {c: i for i, c in enumerate(self.all_cones)}
        return self._index[cone]

    def intern(self, cone: Cone) -> Cone:
        """The fan's own instance of an equal cone (keeps cached data shared)."""
        if self._index is None:
            self._index = {c: i for i, c in enumerate(self.all_cones)}
        i = self._index.get(cone)
        return cone if i is None else self.all_cones[i]

    def __contains__(self, cone: Cone) -> bool:
        if self._index is None:
            self._index = {c: i for i, c in enumerate(self.all_cones)}
        return cone in self._index

    @property
    def complete(self) -> bool:
        if self._complete is None:
            self._complete = check_complete(self)
        return self._complete

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fan):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.maximal_cones == other.maximal_cones

    def __hash__(self) -> int:
        return hash((self.ambient_rank, self.maximal_cones))

    def __len__(self) -> int:
        return len(self.maximal_cones)

    def __repr__(self) -> str:
        return f"Fan(rank={self.ambient_rank}, maximal={len(self.maximal_cones)})"

    def f_vector(self) -> list[int]:
        counts = [0] * (self.ambient_rank + 1)
        for c in self.all_cones:
            counts[c.dim] += 1
        return counts

    def locate(self, p: Sequence) -> Cone:
        """The cone whose relative interior contains p."""
        for c in self.maximal_cones:
            if c.contains(p) is not Position.OUTSIDE:
                return c.smallest_face_containing(p)
        raise ValueError("point is not in the support of the fan")


@dataclass(frozen=True)
class Arrangement:
    ambient_rank: int
    hyperplane_normals: tuple[IntVec, ...]

    def __post_init__(self):
        seen = []
        for h in self.hyperplane_normals:
            if len(h) != self.ambient_rank or not any(h):
                raise ValueError(f"bad hyperplane normal {h}")
            key = normalize_sign(h)
            if key in seen:
                raise ValueError(f"parallel hyperplanes {h}")
            seen.append(key)

    @classmethod
    def of(cls, normals: Iterable[Sequence[int]], ambient_rank: int) -> "Arrangement":
        """Build an arrangement, dropping zero and parallel duplicates."""
        out = {}
        for h in normals:
            if any(h):
                out.setdefault(normalize_sign(h), None)
        return cls(ambient_rank, tuple(out))


def fan_from_arrangement(arr: Arrangement) -> Fan:
    k = arr.ambient_rank
    cells = chambers(Cone.whole_space(k), arr.hyperplane_normals)
    fan = Fan(cells, k)
    fan._complete = True
    return fan


def chamber_sign_vectors(fan: Fan, arr: Arrangement) -> dict[Cone, SignVector]:
    """Sign vector of each cone of an arrangement fan."""
    return {c: sign_vector(arr.hyperplane_normals, c.relative_interior_point()) for c in fan.all_cones}


# ---------------------------------------------------------------------------
# Exact Fourier-Motzkin feasibility (independent oracle for chamber counts)


def fourier_motzkin_feasible(
    strict: Sequence[Sequence[int]],
    weak: Sequence[Sequence[int]] = (),
    k: Optional[int] = None,
) -> bool:
    """Whether {x : s.x > 0 for s in strict, w.x >= 0 for w in weak} is nonempty."""
    rows = [(list(map(Fraction, s)), True) for s in strict] + [(list(map(Fraction, w)), False) for w in weak]
    if k is None:
        k = len(rows[0][0]) if rows else 0
    for j in range(k):
        pos, neg, rest = [], [], []
        for r, st in rows:
            (pos if r[j] > 0 else neg if r[j] < 0 else rest).append((r, st))
        for (p, sp), (q, sq) in itertools.product(pos, neg):
            a, b = p[j], -q[j]
            rest.append(([b * x + a * y for x, y in zip(p, q)], sp or sq))
        rows = []
        seen = set()
        for r, st in rest:
            key = (tuple(r), st)
            if key not in seen:
                seen.add(key)
                rows.append((r, st))
    return not any(st for r, st in rows)


def sign_vector_chambers(normals: Sequence[Sequence[int]], k: int) -> list[SignVector]:
    """All feasible full-dimensional sign vectors, by brute force over {+,-}^m."""
    out = []
    for signs in itertools.product((1, -1), repeat=len(normals)):
        rows = [tuple(s * x for x in h) for s, h in zip(signs, normals)]
        if fourier_motzkin_feasible(rows, (), k):
            out.append(signs)
    return out


# ---------------------------------------------------------------------------
# Validation


@dataclass
class FanReport:
    ok: bool
    message: str = ""
    violation: Optional[tuple[Cone, Cone]] = None

    def __bool__(self) -> bool:
        return self.ok


def _reduce_pair(fa: Cone, fb: Cone, ineqs_a, ineqs_b) -> Optional[tuple[Cone, Cone]]:
    """One separation step: shrink (fa, fb) to faces containing fa meet fb."""
    for h in ineqs_a:
        va = [dot(h, r) for r in fa.rays]
        if not any(va):
            continue
        if all(dot(h, r) <= 0 for r in fb.rays) and not any(dot(h, l) for l in fb.lineality.basis_rows):
            ma = sum(1 << i for i, v in enumerate(va) if v == 0)
            mb = sum(1 << i for i, r in enumerate(fb.rays) if dot(h, r) == 0)
            return fa.face_from_mask(ma), fb.face_from_mask(mb)
    for h in ineqs_b:
        vb = [dot(h, r) for r in fb.rays]
        if not any(vb):
            continue
        if all(dot(h, r) <= 0 for r in fa.rays) and not any(dot(h, l) for l in fa.lineality.basis_rows):
            mb = sum(1 << i for i, v in enumerate(vb) if v == 0)
            ma = sum(1 << i for i, r in enumerate(fa.rays) if dot(h, r) == 0)
            return fa.face_from_mask(ma), fb.face_from_mask(mb)
    return None


def meet_is_common_face(a: Cone, b: Cone) -> bool:
    """True iff a meet b is a face of both a and b."""
    if a.lineality.basis_rows != b.lineality.basis_rows:
        i = intersect(a, b)
        return a.is_face(i) and b.is_face(i)
    ineqs_a = list(a.facet_normals) + [e for e in a.equations] + [tuple(-x for x in e) for e in a.equations]
    ineqs_b = list(b.facet_normals) + [e for e in b.equations] + [tuple(-x for x in e) for e in b.equations]
    fa, fb = a, b
    while fa != fb:
        step = _reduce_pair(fa, fb, ineqs_a, ineqs_b)
        if step is None:
            i = intersect(fa, fb)
            return fa.is_face(i) and fb.is_face(i)
        fa, fb = step
    return True


def check_fan(f: Fan) -> FanReport:
    cones = f.maximal_cones
    for c in cones:
        if c.ambient_rank != f.ambient_rank:
            return FanReport(False, "cone with the wrong ambient rank", (c, c))
    for i, a in enumerate(cones):
        for b in cones[i + 1:]:
            if a.contains_cone(b) or b.contains_cone(a):
                return FanReport(False, "a maximal cone contains another", (a, b))
            if not meet_is_common_face(a, b):
                return FanReport(False, "intersection is not a common face", (a, b))
    return FanReport(True)


def check_complete(f: Fan, samples: int = 100, seed: int = 0) -> bool:
    """Structural completeness certificate plus a seeded random-point spot check."""
    k = f.ambient_rank
    if not f.maximal_cones:
        return False
    if any(not c.is_full_dimensional for c in f.maximal_cones):
        return False
    ridge_owner: dict[Cone, list[int]] = {}
    for i, c in enumerate(f.maximal_cones):
        for r in c.facets():
            ridge_owner.setdefault(r, []).append(i)
    parent = list(range(len(f.maximal_cones)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for owners in ridge_owner.values():
        if len(owners) != 2:
            return False
        a, b = find(owners[0]), find(owners[1])
        parent[a] = b
    if len({find(i) for i in range(len(parent))}) != 1:
        return False
    rng = random.Random(seed)
    for _ in range(samples):
        p = [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(k)]
        if not any(c.contains(p) is not Position.OUTSIDE for c in f.maximal_cones):
            return False
    return True


# ---------------------------------------------------------------------------
# Constructions


def common_refinement(
    fans: Sequence[Fan],
    keep: Optional[Callable[[Cone, Cone], bool]] = None,
) -> Fan:
    """Minimal common refinement of complete fans (all maximal cones full-dimensional).

    ``keep`` optionally prunes pairs known a priori to have disjoint interiors.
    """
    if not fans:
        raise ValueError("need at least one fan")
    k = fans[0].ambient_rank
    if any(f.ambient_rank != k for f in fans):
        raise ValueError("ambient ranks differ")
    current = list(fans[0].maximal_cones)
    for other in fans[1:]:
        out = set()
        for a in current:
            for b in other.maximal_cones:
                if keep is not None and not keep(a, b):
                    continue
                if separated(a, b):
                    continue
                if a.is_pointed or not b.is_pointed:
                    c = intersect_full(a, b)
                else:
                    c = intersect_full(b, a)
                if c is not None:
                    out.add(c)
        current = list(out)
    return Fan(current, k)


def preimage_fan(f: Sequence[Sequence[int]], g: Fan) -> Fan:
    """The fan {f^{-1}(sigma)} for a surjective integer matrix f."""
    if len(f) != g.ambient_rank:
        raise ValueError("matrix target does not match the fan's lattice")
    source = len(f[0]) if f else 0
    if rank(f) != g.ambient_rank:
        raise ValueError("preimage fan requires a surjective map")
    fan = Fan([preimage(f, c, source) for c in g.maximal_cones], source)
    return fan


def fans_equal(a: Fan, b: Fan) -> bool:
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("fans live in different ambient ranks")
    return a.maximal_cones == b.maximal_cones


def _support_covers(fine_cones: Sequence[Cone], target: Cone) -> bool:
    """Whether cones (all inside ``target``, same dimension) cover it."""
    d = target.dim
    pieces = [c for c in fine_cones if c.dim == d]
    if not pieces:
        return False
    owners: dict[Cone, int] = {}
    for c in pieces:
        for r in c.facets():
            owners[r] = owners.get(r, 0) + 1
    boundary = set(target.facets())
    for r, cnt in owners.items():
        on_boundary = any(b.contains_cone(r) for b in boundary)
        if on_boundary and cnt != 1:
            return False
        if not on_boundary and cnt != 2:
            return False
    p = target.relative_interior_point()
    return any(c.contains(p) is not Position.OUTSIDE for c in pieces)


def is_refinement(fine: Fan, coarse: Fan) -> bool:
    if fine.ambient_rank != coarse.ambient_rank:
        raise ValueError("fans live in different ambient ranks")
    for c in fine.maximal_cones:
        if not any(m.contains_cone(c) for m in coarse.maximal_cones):
            return False
    if fine.complete and coarse.complete:
        return True
    for m in coarse.maximal_cones:
        inside = [c for c in fine.maximal_cones if m.contains_cone(c)]
        if not _support_covers(inside, m):
            return False
    return True


def product_fan(a: Fan, b: Fan) -> Fan:
    """External product in the block layout (a coordinates, then b coordinates)."""
    k = a.ambient_rank + b.ambient_rank
    fan = Fan([product_cone(x, y) for x in a.maximal_cones for y in b.maximal_cones], k)
    return fan


def permute_fan(f: Fan, perm: Sequence[int]) -> Fan:
    """Reorder coordinates: new coordinate i is old coordinate perm[i]."""
    if sorted(perm) != list(range(f.ambient_rank)):
        raise ValueError("not a permutation of the coordinates")
    return Fan([permute_cone(c, perm) for c in f.maximal_cones], f.ambient_rank)


def interleave_permutation(blocks: int, width: int) -> list[int]:
    """Permutation taking block layout (x_1..x_w)(y_1..y_w).. to interleaved (x_1 y_1 ..)."""
    return [b * width + i for i in range(width) for b in range(blocks)]

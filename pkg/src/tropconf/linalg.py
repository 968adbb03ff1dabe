"""Exact integer and rational linear algebra over lattices.

Matrices are plain tuples of integer tuples (row-major). Nothing in here
touches floating point; rationals are :class:`fractions.Fraction` in lowest
terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Optional, Sequence

IntVec = tuple[int, ...]
IntMatrix = tuple[IntVec, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(k: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, c) for c in cols) for row in a)


def transpose(m: Sequence[Sequence[int]], ncols: Optional[int] = None) -> IntMatrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def content(v: Iterable[int]) -> int:
    return reduce(gcd, v, 0)


def primitive(v: Sequence[int]) -> IntVec:
    """Divide by the gcd of the entries; the zero vector is returned as is."""
    g = content(v)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def normalize_sign(v: Sequence[int]) -> IntVec:
    """Primitive vector with first nonzero entry positive."""
    v = primitive(v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def integerize(v: Sequence[Fraction]) -> IntVec:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    den = 1
    for x in v:
        d = x.denominator if isinstance(x, Fraction) else 1
        den = den * d // gcd(den, d)
    return primitive(tuple(int(x * den) for x in v))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


# ---------------------------------------------------------------------------
# Normal forms


def hnf(m: Sequence[Sequence[int]], ncols: Optional[int] = None) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``. Pivots are
    positive and move strictly right going down; entries above a pivot lie in
    ``[0, pivot)``; zero rows are at the bottom.
    """
    rows = [list(map(int, r)) for r in m]
    nr = len(rows)
    nc = len(rows[0]) if rows else (ncols or 0)
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    r = 0
    for c in range(nc):
        if r == nr:
            break
        # Euclid down the column until only row r is nonzero.
        for i in range(r + 1, nr):
            b = rows[i][c]
            if b == 0:
                continue
            a = rows[r][c]
            g, s, t = xgcd(a, b)
            x, y = a // g, b // g
            ra, rb, ua, ub = rows[r], rows[i], u[r], u[i]
            rows[r] = [s * p + t * q for p, q in zip(ra, rb)]
            rows[i] = [x * q - y * p for p, q in zip(ra, rb)]
            u[r] = [s * p + t * q for p, q in zip(ua, ub)]
            u[i] = [x * q - y * p for p, q in zip(ua, ub)]
        piv = rows[r][c]
        if piv == 0:
            continue
        if piv < 0:
            rows[r] = [-p for p in rows[r]]
            u[r] = [-p for p in u[r]]
            piv = -piv
        for i in range(r):
            q = rows[i][c] // piv
            if q:
                rows[i] = [p - q * s for p, s in zip(rows[i], rows[r])]
                u[i] = [p - q * s for p, s in zip(u[i], u[r])]
        r += 1
    return as_matrix(rows), as_matrix(u)


def hnf_basis(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Nonzero rows of the HNF: a canonical basis of the lattice spanned by ``rows``."""
    if not rows:
        return ()
    h, _ = hnf(rows, ncols)
    return tuple(r for r in h if any(r))


def snf_invariants(m: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors d_1 | d_2 | ... (nonzero ones only) of an integer matrix."""
    a = [list(map(int, r)) for r in m]
    if not a or not a[0]:
        return []
    nr, nc = len(a), len(a[0])
    out = []
    t = 0
    while t < min(nr, nc):
        # pick the smallest nonzero entry in the remaining block as pivot
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            done = True
            for i in range(t + 1, nr):
                q = a[i][t] // piv
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, nc):
                q = a[t][j] // piv
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if not done:
                # move the smallest remainder into the pivot slot and retry
                best = None
                for i in range(t, nr):
                    if a[i][t] and (best is None or abs(a[i][t]) < abs(best[1])):
                        best = (("r", i), a[i][t])
                for j in range(t, nc):
                    if a[t][j] and (best is None or abs(a[t][j]) < abs(best[1])):
                        best = (("c", j), a[t][j])
                kind, idx = best[0]
                if kind == "r":
                    a[t], a[idx] = a[idx], a[t]
                else:
                    for row in a:
                        row[t], row[idx] = row[idx], row[t]
                continue
            # divisibility: the pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        out.append(abs(a[t][t]))
        t += 1
    return out


# ---------------------------------------------------------------------------
# Rational elimination


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        if pv != 1:
            a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    nc = len(a[0])
    rk = 0
    for c in range(nc):
        p = next((i for i in range(rk, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[rk], a[p] = a[p], a[rk]
        pr = a[rk]
        pv = pr[c]
        for i in range(rk + 1, len(a)):
            f = a[i][c]
            if f:
                a[i] = [pv * x - f * y for x, y in zip(a[i], pr)]
        rk += 1
        if rk == len(a):
            break
    return rk


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[IntVec]:
    """Primitive integer vectors spanning {x : rows @ x = 0} over Q."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, piv):
            v[pc] = -row[f]
        basis.append(integerize(v))
    return basis


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """HNF basis of the lattice {x in Z^ncols : rows @ x = 0}."""
    if not rows:
        return identity(ncols)
    t = transpose(rows)
    h, u = hnf(t, len(rows))
    ker = [u[i] for i in range(len(h)) if not any(h[i])]
    return hnf_basis(ker, ncols)


def solve_rational(m: Sequence[Sequence[int]], v: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Some rational x with m @ x = v, or None when the system is inconsistent."""
    nc = len(m[0]) if m else 0
    aug = [list(row) + [Fraction(b)] for row, b in zip(m, v)]
    red, piv = rref(aug, nc + 1)
    if nc in piv:
        return None
    x = [Fraction(0)] * nc
    for row, pc in zip(red, piv):
        x[pc] = row[nc]
    return tuple(x)


# ---------------------------------------------------------------------------
# Lattices


@dataclass(frozen=True)
class LatticeBasis:
    """A sublattice of Z^ambient_rank stored by its canonical HNF basis."""

    ambient_rank: int
    basis_rows: IntMatrix

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], ambient_rank: int) -> "LatticeBasis":
        return cls(ambient_rank, hnf_basis([tuple(g) for g in gens], ambient_rank))

    @classmethod
    def full(cls, k: int) -> "LatticeBasis":
        return cls(k, identity(k))

    @classmethod
    def zero(cls, k: int) -> "LatticeBasis":
        return cls(k, ())

    @property
    def rank(self) -> int:
        return len(self.basis_rows)

    def __contains__(self, v: Sequence[int]) -> bool:
        if not self.basis_rows:
            return not any(v)
        sol = solve_rational(transpose(self.basis_rows), v)
        return sol is not None and all(x.denominator == 1 for x in sol)

    def is_sublattice_of(self, other: "LatticeBasis") -> bool:
        return all(r in other for r in self.basis_rows)


def lattice_intersect(a: LatticeBasis, b: LatticeBasis) -> LatticeBasis:
    """Intersection of two sublattices via the kernel of the stacked basis map."""
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("ambient ranks differ")
    k = a.ambient_rank
    if not a.basis_rows or not b.basis_rows:
        return LatticeBasis.zero(k)
    stacked = list(a.basis_rows) + [tuple(-x for x in r) for r in b.basis_rows]
    # w @ stacked == 0  <=>  stacked^T @ w == 0
    ker = integer_kernel(transpose(stacked), len(stacked))
    ra = len(a.basis_rows)
    gens = [
        tuple(sum(w[i] * a.basis_rows[i][j] for i in range(ra)) for j in range(k))
        for w in ker
    ]
    return LatticeBasis.from_generators(gens, k)


def image_lattice(f: Sequence[Sequence[int]], lat: LatticeBasis) -> LatticeBasis:
    """f(L) for a matrix f (target x source) acting on column vectors."""
    target = len(f)
    gens = [mat_vec(f, r) for r in lat.basis_rows]
    return LatticeBasis.from_generators(gens, target)


def saturate(lat: LatticeBasis) -> LatticeBasis:
    """(L tensor Q) intersected with Z^ambient."""
    k = lat.ambient_rank
    if not lat.basis_rows:
        return lat
    perp = nullspace(lat.basis_rows, k)
    return LatticeBasis(k, integer_kernel(perp, k))


def span_lattice(vectors: Iterable[Sequence[int]], k: int) -> LatticeBasis:
    """The saturated lattice span(vectors) intersected with Z^k."""
    vecs = [tuple(v) for v in vectors if any(v)]
    if not vecs:
        return LatticeBasis.zero(k)
    return LatticeBasis(k, integer_kernel(nullspace(vecs, k), k))


def lattice_index(sub: LatticeBasis, sup: LatticeBasis) -> int:
    """[sup : sub] for sublattices of equal rank."""
    if sub.rank != sup.rank:
        raise ValueError("index is only finite for equal ranks")
    if sub.rank == 0:
        return 1
    coords = coordinates_in(sup, sub.basis_rows)
    d = 1
    for x in snf_invariants(coords):
        d *= x
    return d


def coordinates_in(lat: LatticeBasis, vectors: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Rows of coordinates of each vector in the basis of ``lat``."""
    cols = transpose(lat.basis_rows)
    out = []
    for v in vectors:
        sol = solve_rational(cols, v)
        if sol is None:
            raise ValueError(f"{v} is not in the span of the lattice")
        out.append(list(sol))
    return out

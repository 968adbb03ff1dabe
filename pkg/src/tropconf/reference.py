"""Comparison fans built from their combinatorial descriptions.

All fans live on V[n] with the anchor coordinates a_0 (and b_0) set to zero.
Bipermutahedral coordinates are interleaved: (a_1, b_1, ..., a_n, b_n).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Sequence

from .cones import Cone
from .fans import Fan, chambers, interleave_permutation, permute_fan
from .fans import product_fan as _product_fan
from .linalg import IntVec

OrderedPartition = tuple[frozenset, ...]


def _coord(n: int, i: int) -> list[int]:
    """Covector of a_i on R^n (zero for the anchor)."""
    v = [0] * n
    if i > 0:
        v[i - 1] = 1
    return v


def _sub(u: Sequence[int], v: Sequence[int]) -> IntVec:
    return tuple(x - y for x, y in zip(u, v))


def ordered_partitions(items: Sequence[int]) -> Iterator[OrderedPartition]:
    items = list(items)
    if not items:
        yield ()
        return
    for r in range(1, len(items) + 1):
        for first in itertools.combinations(items, r):
            rest = [x for x in items if x not in first]
            for tail in ordered_partitions(rest):
                yield (frozenset(first),) + tail


def preorder_cone(blocks: Sequence[Sequence[int]], n: int) -> Cone:
    """{a_j = a_k within a block, a_j <= a_k when j's block precedes k's}."""
    eqs, ineqs = [], []
    blocks = [sorted(b) for b in blocks]
    if sorted(x for b in blocks for x in b) != list(range(n + 1)):
        raise ValueError("blocks must partition {0, ..., n}")
    for b in blocks:
        for j in b[1:]:
            eqs.append(_sub(_coord(n, j), _coord(n, b[0])))
    for b, c in zip(blocks, blocks[1:]):
        ineqs.append(_sub(_coord(n, c[0]), _coord(n, b[0])))
    return Cone.from_inequalities(ineqs, eqs, n)


def preorder_of(p: Sequence, n: int) -> list[list[int]]:
    """Blocks of {0..n} sorted by the value of a_i (a_0 = 0), ascending."""
    vals = [Fraction(0)] + [Fraction(x) for x in p]
    out: dict = {}
    for i, v in enumerate(vals):
        out.setdefault(v, []).append(i)
    return [out[v] for v in sorted(out)]


def permutahedral_fan(n: int) -> Fan:
    """One maximal cone per linear order of {0, ..., n}."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return Fan([Cone.zero(0)], 0)
    cones = [preorder_cone([[i] for i in perm], n) for perm in itertools.permutations(range(n + 1))]
    return Fan(cones, n)


def product_fan(a: Fan, b: Fan) -> Fan:
    return _product_fan(a, b)


def square_fan(n: int) -> Fan:
    """Sigma_n x Sigma_n in interleaved coordinates."""
    sq = _product_fan(permutahedral_fan(n), permutahedral_fan(n))
    return permute_fan(sq, interleave_permutation(2, n))


# ---------------------------------------------------------------------------
# Bipermutahedral fan


def _ab(n: int, i: int) -> tuple[list[int], list[int]]:
    a, b = [0] * (2 * n), [0] * (2 * n)
    if i > 0:
        a[2 * (i - 1)] = 1
        b[2 * (i - 1) + 1] = 1
    return a, b


def apex_cone(n: int, i: int) -> Cone:
    """C_i = {a_i + b_i <= a_j + b_j for all j} in R^{2n}."""
    ai, bi = _ab(n, i)
    normals = []
    for j in range(n + 1):
        if j != i:
            aj, bj = _ab(n, j)
            normals.append(tuple(x + y - z - w for x, y, z, w in zip(aj, bj, ai, bi)))
    return Cone.from_inequalities(normals, [], 2 * n)


def comparison_normals(n: int, i: int) -> list[IntVec]:
    """a_j vs a_k, b_j vs b_k, and a_i + b_i vs a_j + b_k."""
    out = set()
    for j, k in itertools.combinations(range(n + 1), 2):
        aj, bj = _ab(n, j)
        ak, bk = _ab(n, k)
        out.add(_sub(aj, ak))
        out.add(_sub(bj, bk))
    ai, bi = _ab(n, i)
    for j in range(n + 1):
        for k in range(n + 1):
            aj, _ = _ab(n, j)
            _, bk = _ab(n, k)
            v = tuple(x + y - z - w for x, y, z, w in zip(aj, bk, ai, bi))
            if any(v):
                out.add(v)
    norm = set()
    for v in out:
        first = next(x for x in v if x)
        norm.add(v if first > 0 else tuple(-x for x in v))
    return sorted(norm)


def bipermutahedral_fan(n: int) -> Fan:
    if n < 1:
        raise ValueError("n must be at least 1")
    cones = set()
    for i in range(n + 1):
        cones.update(chambers(apex_cone(n, i), comparison_normals(n, i)))
    return Fan(cones, 2 * n)


# ---------------------------------------------------------------------------
# Bisequences


def _label(j: int) -> str:
    return str(j)


def bisequence_of(p: Sequence) -> str:
    """Bar-notation label of the bipermutahedral cone containing p in its relative interior."""
    if len(p) % 2:
        raise ValueError("point must have even length 2n")
    n = len(p) // 2
    a = [Fraction(0)] + [Fraction(p[2 * t]) for t in range(n)]
    b = [Fraction(0)] + [Fraction(p[2 * t + 1]) for t in range(n)]
    m = min(x + y for x, y in zip(a, b))
    entries: dict = {}
    for j in range(n + 1):
        entries.setdefault(a[j], set()).add(j)
        entries.setdefault(m - b[j], set()).add(j)
    sep = "" if n < 10 else ","
    parts = []
    for v in sorted(entries, reverse=True):
        parts.append(sep.join(_label(j) for j in sorted(entries[v])))
    return "|".join(parts)


def parse_bisequence(text: str, n: int) -> list[list[int]]:
    parts = text.split("|")
    out = []
    for part in parts:
        labels = [int(x) for x in (part.split(",") if "," in part else list(part))]
        out.append(labels)
    seen = sorted(x for part in out for x in part)
    if set(seen) != set(range(n + 1)):
        raise ValueError(f"bisequence {text!r} does not use every label 0..{n}")
    for j in range(n + 1):
        if seen.count(j) > 2:
            raise ValueError(f"label {j} occurs more than twice")
    return out


def bisequence_cone(text: str, n: int) -> Cone:
    """The cone of points whose bisequence is ``text`` (closure of that stratum)."""
    parts = parse_bisequence(text, n)
    count = {j: sum(part.count(j) for part in parts) for j in range(n + 1)}
    apexes = [j for j in range(n + 1) if count[j] == 1]
    if not apexes:
        raise ValueError("a bisequence needs at least one apex label")
    i0 = apexes[0]
    ai, bi = _ab(n, i0)
    m = [x + y for x, y in zip(ai, bi)]
    seen: set = set()
    part_vals = []
    for part in parts:
        vals = []
        for j in part:
            aj, bj = _ab(n, j)
            if count[j] == 1:
                vals.append(tuple(aj))
            elif j not in seen:
                vals.append(tuple(aj))
            else:
                vals.append(_sub(m, bj))
            seen.add(j)
        part_vals.append(vals)
    eqs, ineqs = [], []
    for j in apexes:
        aj, bj = _ab(n, j)
        eqs.append(_sub([x + y for x, y in zip(aj, bj)], m))
    for vals in part_vals:
        for v in vals[1:]:
            eqs.append(_sub(v, vals[0]))
    for hi, lo in zip(part_vals, part_vals[1:]):
        ineqs.append(_sub(hi[0], lo[0]))
    return Cone.from_inequalities(ineqs, eqs, 2 * n)

"""JSON persistence. Every number is written as a decimal string."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .chow import ConfigurationFan, full_images
from .cones import Cone, Position
from .fans import Fan
from .linalg import LatticeBasis
from .scaffolds import Scaffold
from .stacky import FanMap, StackyFan


class FormatError(ValueError):
    """Malformed input file; the message names the location."""


def _num(x) -> str:
    return str(x)


def _int(x, where: str) -> int:
    if isinstance(x, bool):
        raise FormatError(f"{where}: expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise FormatError(f"{where}: expected an integer (or decimal string), got {x!r}")


def _rational(x, where: str) -> Fraction:
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise FormatError(f"{where}: expected a rational number, got {x!r}")


def _matrix(rows, where: str) -> list[tuple[int, ...]]:
    if not isinstance(rows, list):
        raise FormatError(f"{where}: expected a list of rows")
    out = []
    for i, r in enumerate(rows):
        if not isinstance(r, list):
            raise FormatError(f"{where}[{i}]: expected a list")
        out.append(tuple(_int(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)))
    return out


def _key(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object")
    if key not in obj:
        raise FormatError(f"{where}: missing key {key!r}")
    return obj[key]


# ---------------------------------------------------------------------------
# Encoding


def cone_to_json(c: Cone, lattice: Optional[LatticeBasis] = None) -> dict:
    out = {
        "rays": [[_num(x) for x in r] for r in c.rays],
        "lineality": [[_num(x) for x in r] for r in c.lineality.basis_rows],
    }
    if lattice is not None:
        out["sublattice_hnf"] = [[_num(x) for x in r] for r in lattice.basis_rows]
    return out


def fan_to_json(f: Fan, lattices: Optional[dict] = None) -> dict:
    lattices = lattices or {}
    return {
        "ambient_rank": f.ambient_rank,
        "maximal_cones": [cone_to_json(c, lattices.get(c)) for c in f.maximal_cones],
        "complete": f.complete,
    }


def stacky_to_json(s: StackyFan) -> dict:
    out = fan_to_json(s.fan, {c: l for c, l in s.sublattices.items() if c in set(s.fan.maximal_cones)})
    out["type"] = "stacky_fan"
    return out


def scaffold_to_json(s: Scaffold, lattices: Optional[dict] = None) -> dict:
    out = fan_to_json(s.fan, lattices)
    out.update({"type": "scaffold", "n": s.n, "d": s.d, "kind": s.kind, "params": s.params})
    return out


def configuration_to_json(cf: ConfigurationFan) -> dict:
    return {
        "type": "configuration_fan",
        "n": cf.n,
        "d": cf.d,
        "lattice_reading": cf.lattice_reading,
        "pi_fan": stacky_to_json(cf.pi_fan),
        "refined_scaffold": scaffold_to_json(cf.refined_scaffold, cf.refined_stacky.sublattices),
        "scaffold": scaffold_to_json(cf.scaffold),
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def to_json(obj: Union[Fan, StackyFan, Scaffold, ConfigurationFan]) -> dict:
    if isinstance(obj, ConfigurationFan):
        return configuration_to_json(obj)
    if isinstance(obj, Scaffold):
        return scaffold_to_json(obj)
    if isinstance(obj, StackyFan):
        return stacky_to_json(obj)
    if isinstance(obj, Fan):
        return fan_to_json(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def save(obj, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(to_json(obj)))


# ---------------------------------------------------------------------------
# Decoding


def cone_from_json(obj: Any, k: int, where: str) -> tuple[Cone, Optional[LatticeBasis]]:
    rays = _matrix(_key(obj, "rays", where), f"{where}.rays")
    lin = _matrix(obj.get("lineality", []), f"{where}.lineality")
    for i, r in enumerate(rays + lin):
        if len(r) != k:
            raise FormatError(f"{where}: vector {i} has length {len(r)}, expected {k}")
    cone = Cone._canonical(k, lin, rays)
    lat = None
    if "sublattice_hnf" in obj:
        lat = LatticeBasis.from_generators(_matrix(obj["sublattice_hnf"], f"{where}.sublattice_hnf"), k)
    return cone, lat


def fan_from_json(obj: Any, where: str = "$") -> tuple[Fan, dict]:
    k = _int(_key(obj, "ambient_rank", where), f"{where}.ambient_rank")
    cones_raw = _key(obj, "maximal_cones", where)
    if not isinstance(cones_raw, list):
        raise FormatError(f"{where}.maximal_cones: expected a list")
    cones, lats = [], {}
    for i, c in enumerate(cones_raw):
        cone, lat = cone_from_json(c, k, f"{where}.maximal_cones[{i}]")
        cones.append(cone)
        if lat is not None:
            lats[cone] = lat
    fan = Fan(cones, k)
    if "complete" in obj:
        if not isinstance(obj["complete"], bool):
            raise FormatError(f"{where}.complete: expected a boolean")
        fan._complete = obj["complete"]
    return fan, lats


def scaffold_from_json(obj: Any, where: str = "$") -> tuple[Scaffold, dict]:
    fan, lats = fan_from_json(obj, where)
    n = _int(_key(obj, "n", where), f"{where}.n")
    d = _int(_key(obj, "d", where), f"{where}.d")
    try:
        s = Scaffold(n, d, fan, str(obj.get("kind", "custom")), dict(obj.get("params", {})))
    except ValueError as e:
        raise FormatError(f"{where}: {e}") from None
    return s, lats


def configuration_from_json(obj: Any, where: str = "$") -> ConfigurationFan:
    pi_fan, pi_lats = fan_from_json(_key(obj, "pi_fan", where), f"{where}.pi_fan")
    refined, ref_lats = scaffold_from_json(_key(obj, "refined_scaffold", where), f"{where}.refined_scaffold")
    original, _ = scaffold_from_json(_key(obj, "scaffold", where), f"{where}.scaffold")
    return assemble_configuration(original, pi_fan, pi_lats, refined, ref_lats, str(obj.get("lattice_reading", "equal")))


def assemble_configuration(original, pi_fan, pi_lats, refined, ref_lats, reading="equal") -> ConfigurationFan:
    pi = original.projection()
    over = {}
    for sigma in refined.fan.maximal_cones:
        p = tuple(sum(a * b for a, b in zip(row, sigma.relative_interior_point())) for row in pi)
        rho = next(r for r in pi_fan.maximal_cones if r.contains(p) is Position.RELATIVE_INTERIOR)
        over[sigma] = rho
    pi_stacky = StackyFan(pi_fan, pi_lats)
    ref_stacky = StackyFan(refined.fan, ref_lats)
    return ConfigurationFan(
        original,
        pi_stacky,
        refined,
        ref_stacky,
        FanMap(pi, ref_stacky, pi_stacky),
        [FanMap(original.section(i).matrix, pi_stacky, ref_stacky) for i in range(original.n + 1)],
        tuple(full_images(original)),
        over,
        reading,
    )


def parse(text: str, source: str = "<input>"):
    """Decode any of the file formats; returns Fan, StackyFan, Scaffold or ConfigurationFan."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{source}: line {e.lineno} column {e.colno}: {e.msg}") from None
    kind = obj.get("type") if isinstance(obj, dict) else None
    if kind == "configuration_fan":
        return configuration_from_json(obj)
    if kind == "scaffold" or (isinstance(obj, dict) and "n" in obj and "d" in obj):
        s, _ = scaffold_from_json(obj)
        return s
    fan, lats = fan_from_json(obj)
    if kind == "stacky_fan" or lats:
        return StackyFan(fan, lats)
    return fan


def load(path: Union[str, Path]):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise FormatError(f"{path}: {e.strerror}") from None
    return parse(text, str(path))


def fan_of(obj) -> Fan:
    """The fan carried by any decoded object (the quotient for configuration files)."""
    if isinstance(obj, ConfigurationFan):
        return obj.pi_fan.fan
    if isinstance(obj, Scaffold):
        return obj.fan
    if isinstance(obj, StackyFan):
        return obj.fan
    return obj

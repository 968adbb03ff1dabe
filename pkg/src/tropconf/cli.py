"""Command-line front end.

Exit codes: 0 success, 1 a verification or certificate failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import serialize
from .chow import LATTICE_READINGS, ConfigurationFan, certify_configuration, configuration_fan, refined_scaffold_of
from .cones import Cone
from .expansions import locate, render_svg, stratum_report
from .fans import Fan, check_complete
from .reference import bipermutahedral_fan, bisequence_of, permutahedral_fan, square_fan
from .scaffolds import Scaffold, build
from .serialize import FormatError
from .verify import TARGETS, run_verify

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# Parsing helpers


def parse_point(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(t.strip()) for t in text.split(",") if t.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot read point {text!r}; expected comma-separated rationals") from None


def variable_names(n: int, d: int) -> list[str]:
    """Base coordinates in storage order: a1..an for d=1, a1,b1,...,an,bn for d=2."""
    if d == 1:
        return [f"a{i}" for i in range(1, n + 1)]
    if d == 2:
        return [f"{c}{i}" for i in range(1, n + 1) for c in "ab"]
    return [f"x{i}_{t}" for i in range(1, n + 1) for t in range(1, d + 1)]


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z]\w*)?\s*")


def _linear(expr: str, names: dict[str, int], k: int) -> list[Fraction]:
    out = [Fraction(0)] * k
    pos = 0
    expr = expr.strip()
    if not expr:
        raise InputError("empty side in a relation")
    while pos < len(expr):
        m = _TERM.match(expr, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise InputError(f"cannot parse {expr[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        var = m.group(3)
        if var is not None:
            if var in ("a0", "b0"):
                pass  # the anchor is pinned at the origin
            elif var not in names:
                raise InputError(f"unknown variable {var!r}; expected one of {', '.join(names)}")
            else:
                out[names[var]] += sign * coef
        elif coef:
            raise InputError("constant terms are not allowed in cone inequalities")
        pos = m.end()
    return out


def _integral(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return tuple(int(x * den) for x in v)


def parse_cone(text: str, n: int, d: int) -> Cone:
    """Cone from relations like ``a1 >= 0, a2 = a1 + b1``; a0 and b0 are zero."""
    vars_ = variable_names(n, d)
    names = {v: i for i, v in enumerate(vars_)}
    k = len(vars_)
    ineqs, eqs = [], []
    for rel in (r for r in re.split(r"[;,]", text) if r.strip()):
        m = re.fullmatch(r"(.*?)(>=|<=|==|=)(.*)", rel.strip())
        if not m:
            raise InputError(f"relation {rel.strip()!r} has no >=, <= or =")
        lhs, op, rhs = m.groups()
        v = [x - y for x, y in zip(_linear(lhs, names, k), _linear(rhs, names, k))]
        if not any(v):
            continue
        if op == "<=":
            v = [-x for x in v]
        (eqs if op in ("=", "==") else ineqs).append(_integral(v))
    return Cone.from_inequalities(ineqs, eqs, k)


def _load(path: str):
    try:
        return serialize.load(path)
    except FormatError as e:
        raise InputError(str(e)) from None


def _load_configuration(path: str) -> ConfigurationFan:
    obj = _load(path)
    if isinstance(obj, Scaffold):
        return configuration_fan(obj, certify=False)
    if not isinstance(obj, ConfigurationFan):
        raise InputError(f"{path}: expected a configuration fan or a scaffold file")
    return obj


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit(args, payload: dict, text: str) -> None:
    if args.output == "json":
        sys.stdout.write(serialize.dumps(payload))
    else:
        print(text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_scaffold(args) -> int:
    fan = None
    if args.fan:
        obj = _load(args.fan)
        fan = serialize.fan_of(obj)
    if args.kind == "from-fan" and fan is None:
        raise InputError("--kind from-fan needs --fan")
    try:
        s = build(args.kind, args.n, fan)
    except ValueError as e:
        raise InputError(str(e)) from None
    _write(serialize.dumps(serialize.to_json(s)), args.o)
    return EXIT_OK


def cmd_quotient(args) -> int:
    obj = _load(args.i)
    if not isinstance(obj, Scaffold):
        raise InputError(f"{args.i}: expected a scaffold file")
    if obj.n < 1:
        raise InputError("the quotient needs n >= 1")
    cf = configuration_fan(obj, args.lattice_reading, certify=False)
    code = EXIT_OK
    if args.certify:
        rep = certify_configuration(cf)
        for k, v in sorted(rep.info.items()):
            print(f"{'ok  ' if v else 'FAIL'} {k}", file=sys.stderr)
        for v in rep.violations[:20]:
            print(f"FAIL {v}", file=sys.stderr)
        if not rep.ok:
            code = EXIT_FAIL
    _write(serialize.dumps(serialize.to_json(cf)), args.o)
    if args.emit_refined:
        Path(args.emit_refined).write_text(
            serialize.dumps(serialize.scaffold_to_json(refined_scaffold_of(cf), cf.refined_stacky.sublattices))
        )
    return code


def cmd_reference(args) -> int:
    try:
        f = {"perm": permutahedral_fan, "perm2": square_fan, "biperm": bipermutahedral_fan}[args.kind](args.n)
    except ValueError as e:
        raise InputError(str(e)) from None
    f._complete = True
    _write(serialize.dumps(serialize.to_json(f)), args.o)
    return EXIT_OK


def _report_out(args, rep) -> int:
    if args.svg:
        if rep.fiber.d != 2:
            raise InputError("--svg renders d=2 fiber complexes only")
        Path(args.svg).write_text(render_svg(rep))
    _emit(args, rep.summary(), rep.text())
    return EXIT_OK


def cmd_stratum(args) -> int:
    cf = _load_configuration(args.i)
    fan = cf.pi_fan.fan
    text = args.cone.strip()
    if re.fullmatch(r"\d+", text):
        idx = int(text)
        if idx >= len(fan.all_cones):
            raise InputError(f"cone id {idx} out of range (the fan has {len(fan.all_cones)} cones)")
        rho = fan.all_cones[idx]
    else:
        rho = parse_cone(text, cf.n, cf.d)
        if rho not in fan:
            raise InputError(f"{text!r} is not a cone of the configuration fan")
    return _report_out(args, stratum_report(cf, rho))


def cmd_locate(args) -> int:
    cf = _load_configuration(args.i)
    p = parse_point(args.point)
    if len(p) != cf.n * cf.d:
        raise InputError(f"point has {len(p)} coordinates, expected {cf.n * cf.d}")
    _, rep = locate(cf, p)
    return _report_out(args, rep)


def cmd_bisequence(args) -> int:
    p = parse_point(args.point)
    if len(p) != 2 * args.n:
        raise InputError(f"point has {len(p)} coordinates, expected {2 * args.n}")
    label = bisequence_of(p)
    _emit(args, {"bisequence": label, "point": [str(x) for x in p]}, label)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = args.targets or ["all"]
    unknown = [t for t in names if t != "all" and t not in TARGETS]
    if unknown:
        raise InputError(f"unknown target(s) {', '.join(unknown)}; choose from {', '.join(TARGETS)} or all")
    results = run_verify(names, args.max_n, args.threads)
    ok = all(r.ok for r in results)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.name} ({r.seconds:.1f} s)")
        lines += [f"    {d}" for d in r.details if args.verbose or d.startswith("FAIL")]
    _emit(args, {"ok": ok, "targets": [r.to_dict() for r in results]}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def fan_stats(f: Fan, seed: int = 0) -> dict:
    complete = check_complete(f, seed=seed)
    return {
        "rank": f.ambient_rank,
        "maximal": len(f.maximal_cones),
        "total": len(f.all_cones),
        "complete": complete,
        "f_vector": f.f_vector(),
    }


def cmd_stats(args) -> int:
    f = serialize.fan_of(_load(args.file))
    st = fan_stats(f, args.seed)
    text = (
        f"rank {st['rank']}, maximal {st['maximal']}, total {st['total']}, "
        f"{'complete' if st['complete'] else 'not complete'}\n"
        f"f-vector {st['f_vector']}"
    )
    _emit(args, st, text)
    return EXIT_OK


def fan_diff(a: Fan, b: Fan) -> dict:
    """Maximal cones present in exactly one fan, and how the differing cones relate."""
    if a.ambient_rank != b.ambient_rank:
        raise InputError(f"ranks differ: {a.ambient_rank} vs {b.ambient_rank}")
    sa, sb = set(a.maximal_cones), set(b.maximal_cones)
    only_a = [c for c in a.maximal_cones if c not in sb]
    only_b = [c for c in b.maximal_cones if c not in sa]
    split = [c for c in only_a if sum(1 for e in only_b if c.contains_cone(e)) >= 2]
    merged = [c for c in only_b if sum(1 for e in only_a if c.contains_cone(e)) >= 2]
    return {"only_a": only_a, "only_b": only_b, "split": split, "merged": merged}


def cmd_diff(args) -> int:
    a = serialize.fan_of(_load(args.a))
    b = serialize.fan_of(_load(args.b))
    d = fan_diff(a, b)
    payload = {k: [serialize.cone_to_json(c) for c in v] for k, v in d.items()}
    lines = []
    for c in d["only_a"]:
        lines.append(f"< {list(map(list, c.rays))}")
    for c in d["only_b"]:
        lines.append(f"> {list(map(list, c.rays))}")
    if d["split"]:
        lines.append(f"{len(d['split'])} cones split")
    if d["merged"]:
        lines.append(f"{len(d['merged'])} cones merged")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropconf", description="Tropical configuration fans from scaffolds.")
    p.add_argument("--threads", type=int, default=1, help="worker processes for verify")
    p.add_argument("--output", choices=("json", "text"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for sampling-based completeness checks")
    sub = p.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("scaffold", help="build a scaffold fan")
    scs = sc.add_subparsers(dest="action", required=True)
    b = scs.add_parser("build")
    b.add_argument("--kind", required=True, choices=("lambda0", "square", "biperm", "sqrt-stack", "from-fan", "product"))
    b.add_argument("--n", type=int, default=1)
    b.add_argument("--fan", help="fan JSON for --kind from-fan")
    b.add_argument("-o", help="output file (default stdout)")
    b.set_defaults(func=cmd_scaffold)

    q = sub.add_parser("quotient", help="configuration fan of a scaffold")
    q.add_argument("-i", required=True)
    q.add_argument("-o")
    q.add_argument("--emit-refined")
    q.add_argument("--certify", action="store_true")
    q.add_argument("--lattice-reading", choices=LATTICE_READINGS, default="equal")
    q.set_defaults(func=cmd_quotient)

    r = sub.add_parser("reference", help="comparison fans")
    r.add_argument("--kind", required=True, choices=("perm", "perm2", "biperm"))
    r.add_argument("--n", type=int, required=True)
    r.add_argument("-o")
    r.set_defaults(func=cmd_reference)

    for name, fn in (("stratum", cmd_stratum), ("locate", cmd_locate)):
        s = sub.add_parser(name, help="stratum report")
        s.add_argument("-i", required=True, help="configuration fan (or scaffold) JSON")
        if name == "stratum":
            s.add_argument("--cone", required=True, help="cone id or relations like 'a1 >= 0, a2 = a1'")
        else:
            s.add_argument("--point", required=True, help='comma-separated coordinates, e.g. "1,1,2"')
        s.add_argument("--svg")
        s.set_defaults(func=fn)

    bs = sub.add_parser("bisequence", help="bisequence label of a planar configuration")
    bs.add_argument("--n", type=int, required=True)
    bs.add_argument("--point", required=True)
    bs.set_defaults(func=cmd_bisequence)

    v = sub.add_parser("verify", help="rerun the reproduction checks")
    v.add_argument("targets", nargs="*", help=f"any of {', '.join(TARGETS)}, or all")
    v.add_argument("--max-n", type=int)
    v.add_argument("-v", "--verbose", action="store_true")
    v.set_defaults(func=cmd_verify)

    st = sub.add_parser("stats", help="fan summary")
    st.add_argument("file")
    st.set_defaults(func=cmd_stats)

    df = sub.add_parser("diff", help="maximal cones present in exactly one of two fans")
    df.add_argument("a")
    df.add_argument("b")
    df.set_defaults(func=cmd_diff)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (FormatError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

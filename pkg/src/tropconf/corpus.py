"""Golden fixture corpus: names, builders and the on-disk location."""

from __future__ import annotations

from pathlib import Path
from typing import Callable

from . import serialize
from .chow import configuration_fan
from .cones import Cone
from .expansions import locate, stratum_report
from .scaffolds import lambda0, lambda_biperm, lambda_square, sqrt_stack_scaffold

FIXTURE_DIR = Path(__file__).parent / "fixtures"

QUILT_CONE = [(-1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (0, 1, 0, -1)]


def _quotient(scaffold_fn, n=None) -> Callable[[], dict]:
    def make():
        s = scaffold_fn(n) if n is not None else scaffold_fn()
        return serialize.to_json(configuration_fan(s, certify=False).pi_fan)
    return make


def _chain() -> dict:
    return locate(configuration_fan(lambda0(3), certify=False), (1, 1, 2))[1].summary()


def _quilt() -> dict:
    cf = configuration_fan(lambda_square(2), certify=False)
    return stratum_report(cf, Cone.from_inequalities(QUILT_CONE, [], 4)).summary()


def _biperm() -> dict:
    return locate(configuration_fan(lambda_biperm(2), certify=False), (-1, 2, 1, 1))[1].summary()


def _sqrt_stack() -> dict:
    return serialize.to_json(configuration_fan(sqrt_stack_scaffold(), certify=False))


BUILDERS: dict[str, Callable[[], dict]] = {
    **{f"permutahedral_{n}": _quotient(lambda0, n) for n in (1, 2, 3, 4)},
    **{f"bipermutahedral_{n}": _quotient(lambda_biperm, n) for n in (1, 2)},
    "sqrt_stack_configuration": _sqrt_stack,
    "chain_stratum": _chain,
    "quilt_stratum": _quilt,
    "biperm_stratum": _biperm,
}


def path(name: str) -> Path:
    return FIXTURE_DIR / f"{name}.json"


def regenerate(names=None) -> list[Path]:
    out = []
    for name in names or BUILDERS:
        p = path(name)
        p.write_text(serialize.dumps(BUILDERS[name]()))
        out.append(p)
    return out

import pytest

from tropconf.fans import Arrangement, check_complete, fan_from_arrangement, fans_equal, is_refinement, sign_vector_chambers
from tropconf.scaffolds import (
    Scaffold,
    build,
    lambda0,
    lambda0_hyperplanes,
    lambda_biperm,
    lambda_square,
    line_fan,
    product_scaffold,
    quadrant_fan,
    refine_scaffold,
    scaffold_from_fan,
    sqrt_stack_scaffold,
    validate_scaffold,
)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_lambda0_chamber_count_and_validity(n):
    s = lambda0(n)
    assert len(s.fan) == len(sign_vector_chambers(lambda0_hyperplanes(n), n + 1))
    assert validate_scaffold(s).ok


def test_lambda0_small_cases():
    assert len(lambda0(0).fan) == 2
    assert len(lambda0(1).fan) == 4


def test_section_not_a_union_of_cones():
    bad = Scaffold(1, 1, fan_from_arrangement(Arrangement(2, ((0, 1),))))
    rep = validate_scaffold(bad)
    assert not rep.ok and any("H_1" in m for m in rep.messages)


def test_square_is_a_product():
    assert len(lambda_square(1).fan) == 16
    assert len(lambda_square(0).fan) == 4
    for n in (0, 1, 2):
        assert fans_equal(product_scaffold(lambda0(n), lambda0(n)).fan, lambda_square(n).fan)


@pytest.mark.parametrize("n", [1, 2])
def test_biperm_refines_square(n):
    b, s = lambda_biperm(n), lambda_square(n)
    assert len(b.fan) > len(s.fan)
    assert is_refinement(b.fan, s.fan)
    assert validate_scaffold(b, fan_axioms=(n == 1)).ok


def test_from_fan_reproduces_minimal_scaffolds():
    assert fans_equal(scaffold_from_fan(line_fan(), 1).fan, lambda0(1).fan)
    assert fans_equal(scaffold_from_fan(quadrant_fan(), 2).fan, lambda_square(2).fan)
    assert fans_equal(scaffold_from_fan(quadrant_fan(), 0).fan, quadrant_fan())


def test_refinement_constructors():
    s = lambda0(2)
    assert fans_equal(refine_scaffold(s, s.fan).fan, s.fan)
    sq = sqrt_stack_scaffold()
    assert len(sq.fan) == 6 and is_refinement(sq.fan, lambda0(1).fan)
    assert validate_scaffold(sq).ok


def test_product_rejects_mismatched_n():
    with pytest.raises(ValueError):
        product_scaffold(lambda0(1), lambda0(2))
    with pytest.raises(ValueError):
        Scaffold(1, 0, lambda0(1).fan)


def test_build_dispatch():
    assert build("lambda0", 2).kind == "lambda0"
    assert build("product", 1).d == 2
    with pytest.raises(ValueError):
        build("from-fan", 1)
    with pytest.raises(ValueError):
        build("nonsense", 1)


def test_projection_and_sections():
    s = lambda_square(1)
    assert s.projection() == ((1, 0, 0, 0), (0, 1, 0, 0))
    assert s.section(1).matrix == ((1, 0), (0, 1), (1, 0), (0, 1))
    assert s.section(0).matrix == ((1, 0), (0, 1), (0, 0), (0, 0))
    assert check_complete(s.fan)

import json

import pytest

from tropconf import corpus
from tropconf.cli import main, parse_cone
from tropconf.cones import Cone
from tropconf.reference import preorder_cone


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_stats_of_sigma2(tmp_path, capsys):
    f = tmp_path / "s2.json"
    assert run(capsys, "reference", "--kind", "perm", "--n", "2", "-o", str(f))[0] == 0
    code, out, _ = run(capsys, "stats", str(f))
    assert code == 0
    assert out.splitlines()[0] == "rank 2, maximal 6, total 13, complete"
    code, out, _ = run(capsys, "--output", "json", "stats", str(f))
    assert json.loads(out)["f_vector"] == [1, 6, 6]


def test_diff(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "reference", "--kind", "perm2", "--n", "1", "-o", str(a))
    run(capsys, "reference", "--kind", "biperm", "--n", "1", "-o", str(b))
    code, out, _ = run(capsys, "diff", str(a), str(a))
    assert code == 0 and out.strip() == ""
    code, out, _ = run(capsys, "diff", str(a), str(b))
    assert code == 0 and "2 cones split" in out
    code, out, _ = run(capsys, "--output", "json", "diff", str(a), str(b))
    d = json.loads(out)
    assert len(d["split"]) == 2 and len(d["only_a"]) == 2 and len(d["only_b"]) == 4


def test_scaffold_quotient_and_strata(tmp_path, capsys):
    s, q, r = tmp_path / "s.json", tmp_path / "q.json", tmp_path / "r.json"
    assert run(capsys, "scaffold", "build", "--kind", "lambda0", "--n", "3", "-o", str(s))[0] == 0
    code, _, err = run(capsys, "quotient", "-i", str(s), "-o", str(q), "--certify", "--emit-refined", str(r))
    assert code == 0 and "FAIL" not in err and "ok   terminality" in err
    assert json.loads(r.read_text())["type"] == "scaffold"
    code, out, _ = run(capsys, "--output", "json", "locate", "-i", str(q), "--point", "1,1,2")
    rep = json.loads(out)
    assert code == 0 and rep["rays"] == [[0, 0, 1], [1, 1, 1]] and rep["rubber"]["rank"] == 2
    code, out2, _ = run(capsys, "--output", "json", "stratum", "-i", str(q), "--cone", "a1 >= 0, a2 = a1, a3 >= a2")
    assert code == 0 and json.loads(out2)["cone_id"] == rep["cone_id"]
    code, out3, _ = run(capsys, "--output", "json", "stratum", "-i", str(q), "--cone", str(rep["cone_id"]))
    assert json.loads(out3) == json.loads(out2)


def test_svg_output(tmp_path, capsys):
    s, svg = tmp_path / "s.json", tmp_path / "f.svg"
    run(capsys, "scaffold", "build", "--kind", "square", "--n", "1", "-o", str(s))
    code, out, _ = run(capsys, "locate", "-i", str(s), "--point=-1,2", "--svg", str(svg))
    assert code == 0 and svg.read_text().startswith("<svg")
    assert "rubber rank" in out


def test_bisequence(capsys):
    code, out, _ = run(capsys, "bisequence", "--n", "2", "--point=-1,2,1,1")
    assert code == 0 and out.strip() == "2|0|12|1"


def test_verify_targets(capsys):
    code, out, _ = run(capsys, "verify", "sqrt-stack", "chain-stratum")
    assert code == 0
    assert out.splitlines()[0].startswith("PASS sqrt-stack")
    code, out, _ = run(capsys, "--output", "json", "verify", "permutahedron", "--max-n", "2")
    assert code == 0 and json.loads(out)["ok"]


def test_verify_order_independent(capsys):
    _, a, _ = run(capsys, "--output", "json", "verify", "chain-stratum", "sqrt-stack")
    _, b, _ = run(capsys, "--output", "json", "verify", "sqrt-stack", "chain-stratum")
    da = {t["name"]: t["details"] for t in json.loads(a)["targets"]}
    db = {t["name"]: t["details"] for t in json.loads(b)["targets"]}
    assert da == db


def test_verify_parallel_pool_keeps_order(capsys):
    code, out, _ = run(capsys, "--threads", "2", "--output", "json", "verify", "sqrt-stack", "chain-stratum")
    assert code == 0 and [t["name"] for t in json.loads(out)["targets"]] == ["sqrt-stack", "chain-stratum"]


@pytest.mark.parametrize(
    "argv",
    [
        ["stats", "/nonexistent/fan.json"],
        ["verify", "no-such-target"],
        ["bisequence", "--n", "2", "--point", "1,2"],
        ["reference", "--kind", "biperm", "--n", "0"],
        ["scaffold", "build", "--kind", "from-fan", "--n", "1"],
        ["nonsense"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_malformed_json_reports_location(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"ambient_rank": 2,\n "maximal_cones": [}')
    code, _, err = run(capsys, "stats", str(f))
    assert code == 2 and "line 2" in err


def test_cone_not_in_fan(capsys):
    path = str(corpus.path("sqrt_stack_configuration"))
    code, _, err = run(capsys, "stratum", "-i", path, "--cone", "a1 >= 0, a1 <= 0, a1 = 0, a1 >= a1")
    assert code == 0
    code, _, err = run(capsys, "stratum", "-i", path, "--cone", "99")
    assert code == 2 and "out of range" in err


def test_parse_cone():
    assert parse_cone("a1 <= a2, a2 <= a3", 3, 1) == Cone.from_inequalities([(-1, 1, 0), (0, -1, 1)], [], 3)
    assert parse_cone("a1 >= 0, a2 = a1, a3 >= a2", 3, 1) == preorder_cone([[0], [1, 2], [3]], 3)
    tau = parse_cone("a1 + b2 = 0, b1 >= a1 + b2, a2 >= b1, 2*a1 <= a2 - a2", 2, 2)
    assert tau.ambient_rank == 4
    with pytest.raises(Exception):
        parse_cone("a1 >= 1", 1, 1)
    with pytest.raises(Exception):
        parse_cone("c7 >= 0", 1, 1)

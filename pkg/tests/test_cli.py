import json

import pytest

from tvx.algebra import parse_laurent
from tvx.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_commutator_table(capsys):
    code, out, _ = run(capsys, "commutator", "--l1", "1", "--l2", "1", "--order", "6")
    assert code == 0
    rows = [r.split() for r in out.splitlines()[3:]]
    assert rows == [["(1,1)", "1", "0", "1", "1"]]


def test_commutator_classical(capsys):
    code, out, _ = run(capsys, "commutator", "--order", "6", "--classical")
    assert code == 0 and "1 + t^2*x*y" in out


def test_order_zero_is_usage_error(capsys):
    assert run(capsys, "commutator", "--order", "0")[0] == 2


def test_json_embeds_seed(capsys):
    code, out, _ = run(capsys, "commutator", "--l1", "2", "--l2", "1", "--format", "json", "--seed", "0x10")
    obj = json.loads(out)
    assert code == 0 and obj["config"]["seed"] == 16 and obj["ok"]


def test_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("TVX_SEED", "99")
    _, out, _ = run(capsys, "scatter", "--order", "1", "--format", "json")
    assert json.loads(out)["config"]["seed"] == 99


def test_table_values_reparse(capsys):
    _, out, _ = run(capsys, "commutator", "--l1", "2", "--l2", "2", "--order", "4", "--format", "json")
    for row in json.loads(out)["rows"]:
        p = parse_laurent(row["P(k gamma)"])
        assert str(p) == row["P(k gamma)"]


def test_byte_identical(capsys):
    a = run(capsys, "scatter", "--l1", "2", "--l2", "1", "--order", "2", "--format", "json")[1]
    b = run(capsys, "scatter", "--l1", "2", "--l2", "1", "--order", "2", "--format", "json")[1]
    assert a == b


def test_tropical_and_gw(capsys):
    code, out, _ = run(capsys, "tropical-count", "--w", "2;1", "--format", "csv")
    assert code == 0 and out.splitlines()[1] == '"((2), (1))",v + v^-1,2,1'
    code, out, _ = run(capsys, "refined-gw", "--p1", "2", "--p2", "1", "--format", "csv")
    assert code == 0 and out.splitlines()[1] == "2,1,0,0"


def test_quiver(capsys):
    code, out, _ = run(capsys, "quiver-poincare", "--l1", "2", "--l2", "1", "--dim", "1,1,1", "--format", "csv")
    assert code == 0 and out.splitlines()[1] == "\"K(2,1)\",\"1,1,1\",1,1"
    assert run(capsys, "quiver-poincare", "--l1", "2", "--l2", "1", "--dim", "1,1")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "consistency", "--max-lines", "2", "--order", "2", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["passed"] == obj["total"] > 0


def test_verify_unknown(capsys):
    assert run(capsys, "verify", "--suite", "nope")[0] == 2


def test_svg_only_where_meaningful(capsys):
    assert run(capsys, "commutator", "--format", "svg")[0] == 2


def test_export(tmp_path, capsys):
    path = tmp_path / "c.svg"
    assert run(capsys, "export", "curve", "--w", "2;1", "--out", str(path))[0] == 0
    assert "[2]_q" in path.read_text()
    assert run(capsys, "export", "diagram", "--out", str(tmp_path / "nope" / "d.svg"))[0] == 2


@pytest.mark.parametrize("argv", [[], ["bogus"], ["refined-gw", "--p1", "x", "--p2", "1"]])
def test_usage(capsys, argv):
    assert run(capsys, *argv)[0] == 2

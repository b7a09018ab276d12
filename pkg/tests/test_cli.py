import io
import shlex
import subprocess
import sys

import pytest

from chordwords.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue().strip(), err.getvalue().strip()


def records(text):
    return [dict(tok.split("=", 1) for tok in shlex.split(line)) for line in text.splitlines()]


def test_reduce_lines():
    code, out, _ = call("reduce", "e0 E0 e0", "--format", "lines")
    assert (code, out) == (0, "verdict=reduced_word word=e0")


def test_reduce_infinite_per_level():
    code, out, _ = call("reduce", "e0 omega(k -> e{k+1}) inv(omega(k -> e{k+1})) E0", "--depth", "3", "--format", "lines")
    assert code == 0 and [r["word"] for r in records(out)] == ["eps"] * 4


def test_eq_exit_codes():
    code, out, _ = call("eq", "eps", "eps")
    assert code == 0 and out.startswith("EqualUpTo")
    code, out, _ = call("eq", "e0", "eps", "--format", "lines")
    assert code == 0 and records(out)[0]["verdict"] == "DistinctAt"
    code, out, _ = call("eq", "omega(k -> e{k} E{k})", "eps", "--depth", "5", "--format", "lines")
    assert code == 2 and records(out)[0]["verdict"] == "EqualUpTo"


def test_permanent():
    _, out, _ = call("permanent", "e0 E0 e0", "--format", "lines")
    assert records(out)[0] == {"verdict": "not_reduced", "positions": "-", "count": "0"}
    code, out, _ = call("permanent", "omega(k -> e{k+1} E{k+1})", "--depth", "4", "--format", "lines")
    assert code == 2 and records(out)[0]["verdict"] == "NonPermanentWitness"
    code, out, _ = call("permanent", "e0 E0 e1", "--format", "lines")
    assert records(out)[0]["positions"] == "2"


def test_classify():
    code, out, _ = call("classify", "--graph", "family ladder", "--depth", "10", "--format", "lines")
    assert code == 0 and records(out)[0]["verdict"] == "FInfinity"
    _, out, _ = call("classify", "--graph", "family K4", "--depth", "10", "--format", "lines")
    assert records(out)[0]["rank"] == "3"


def test_graph_commands(tmp_path):
    spec = tmp_path / "tri.graph"
    spec.write_text("family finite\nedge 0 a b\nedge 1 b c\nedge 2 c a\nbase a\n")
    code, out, _ = call("chords", "--graph", str(spec), "--format", "lines")
    recs = records(out)
    assert code == 0 and recs[0]["count"] == "1" and recs[1]["chord"] == "e0"
    code, out, _ = call("ends", "--graph", "family double_ladder", "--depth", "10", "--format", "lines")
    assert code == 2 and records(out)[0]["count"] == "2"
    code, out, _ = call("ends", "--graph", str(spec), "--depth", "4", "--format", "lines")
    assert code == 0 and records(out)[0]["count"] == "0"
    code, out, _ = call("tree", "--graph", "family ladder", "--depth", "6")
    assert code == 2 and out.startswith("TreeUpTo")


def test_realizable_and_homotopic():
    code, out, _ = call("realizable", "@monotone", "--graph", "family double_ladder", "--depth", "10", "--radius", "2", "--format", "lines")
    rec = records(out)[0]
    assert code == 0 and rec["verdict"] == "NonConvergentWitness" and int(rec["count"]) >= 8
    code, out, _ = call("realizable", "@ladder_loop", "--graph", "family ladder", "--depth", "10", "--format", "lines")
    assert code == 2 and records(out)[0]["count"] == "0"
    code, out, _ = call("homotopic", "@t2_loop", "--graph", "family t2", "--depth", "6")
    assert code == 2 and out.startswith("EqualUpTo")
    code, out, _ = call("homotopic", "e0", "eps", "--graph", "family ladder", "--format", "lines")
    assert code == 0 and records(out)[0]["verdict"] == "DistinctAt"


@pytest.mark.parametrize("argv", [
    ("reduce", "e0 ("),
    ("reduce", "omega(k -> e{k+1} e0)", "--depth", "3"),
    ("eq", "e0"),
    ("classify", "--graph", "family banana"),
    ("realizable", "e0", "--graph", "family ladder", "--radius", "5", "--depth", "5"),
    ("reduce", "e0", "--depth", "-1"),
    ("frobnicate",),
])
def test_errors_exit_1(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err


def test_demo_and_module_entry():
    code, out, _ = call("demo", "--format", "lines")
    assert code == 0 and "verdict=FInfinity" in out and "verdict=Wild" in out
    proc = subprocess.run([sys.executable, "-m", "chordwords", "reduce", "e0 E0 e0", "--format", "lines"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "verdict=reduced_word word=e0"

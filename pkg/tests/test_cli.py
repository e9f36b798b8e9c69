import json
import subprocess
import sys

import pytest

from cobcalc.cli import main
from cobcalc.exactalg import poly_from_json
from cobcalc.fgl import multiplicative
from cobcalc.lazard import build
from cobcalc.series import TruncatedSeries


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def all_strings(obj):
    if isinstance(obj, dict):
        return all(all_strings(v) for v in obj.values())
    if isinstance(obj, list):
        return all(all_strings(v) for v in obj)
    return isinstance(obj, (str, bool)) or obj is None


def test_chi_example(capsys):
    code, out, _ = run(capsys, "fgl", "chi", "--law", "multiplicative", "--order", "5")
    assert code == 0
    assert "-u - beta*u^2 - beta^2*u^3 - beta^3*u^4 - beta^4*u^5" in out


def test_ranks_example(capsys):
    code, data = run_json(capsys, "lazard", "ranks", "--max-degree", "3")
    assert code == 0
    assert [r["quotient_rank"] for r in data["degrees"]] == ["1", "2", "3"]
    assert all_strings(data)


def test_hypersurface_example(capsys):
    code, data = run_json(capsys, "model", "hypersurface", "--n", "2", "--d", "2", "--law", "additive")
    assert code == 0
    assert data == {"h1": "2"}


def test_series_output_round_trips(capsys):
    code, data = run_json(capsys, "fgl", "show", "--law", "multiplicative", "--order", "6")
    assert code == 0 and all_strings(data)
    law = multiplicative(6)
    assert TruncatedSeries.from_json(data["series"], law.ring) == law.series
    code, data = run_json(capsys, "fgl", "log", "--law", "multiplicative", "--order", "6", "--ring", "Q")
    assert code == 0
    assert TruncatedSeries.from_json(data["series"]) == multiplicative(6, "QQ").log


def test_law_from_input_file(tmp_path, capsys):
    path = tmp_path / "law.json"
    path.write_text(json.dumps(multiplicative(6).series.to_json()))
    code, out, _ = run(capsys, "fgl", "validate", "--input", str(path))
    assert code == 0 and out.strip().endswith("valid")
    bad = TruncatedSeries(multiplicative(4).ring, ("u", "v"), 4, {(1, 0): 1, (0, 1): 1, (1, 2): 1})
    path.write_text(json.dumps(bad.to_json()))
    code, out, _ = run(capsys, "fgl", "validate", "--input", str(path))
    assert code == 1 and "NOT" in out


def test_normalform_round_trips(capsys):
    code, data = run_json(capsys, "lazard", "normalform", "--poly", "2*a22 - 3*a13 - 2*a11*a12", "--max-degree", "3")
    assert code == 0 and data["normal_form"] == "0"
    code, data = run_json(capsys, "lazard", "normalform", "--poly", "a22", "--max-degree", "3")
    L = build(3)
    assert poly_from_json(data["poly"]) == L.normal_form(L.polys.parse("a22"))


def test_classify(capsys):
    code, data = run_json(capsys, "lazard", "classify", "--law", "multiplicative", "--max-degree", "3")
    assert code == 0
    assert data["images"] == {"a11": "-beta", "a12": "0", "a13": "0", "a22": "0"}


def test_model_commands(capsys):
    code, data = run_json(capsys, "model", "c1", "--n", "2", "--bundle", "O(2)", "--law", "multiplicative")
    assert code == 0 and data == {"h1": "2", "h2": "-beta"}
    code, data = run_json(capsys, "model", "specialize", "--n", "2", "--d", "2")
    assert code == 0 and data == {"h1": "2", "h2": "-beta"}
    code, out, _ = run(capsys, "model", "genus", "--n", "4", "--law", "multiplicative", "--ring", "Q", "--beta", "1")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "model", "intersect", "--space", "P1xP1", "--a", '{"h1|h0": 1}', "--b", '{"h0|h1": 1}')
    assert code == 0 and "[h1|h1]" in out
    code, out, _ = run(capsys, "model", "pbundle", "--space", "P1", "--bundles", "O(0),O(1)")
    assert code == 0 and "xi1|h1" in out
    code, _, _ = run(capsys, "model", "euler", "--n", "2", "--bundles", "O(1),O(1)")
    assert code == 0


def test_snc_commands(tmp_path, capsys):
    code, data = run_json(capsys, "snc", "decompose", "--mults", "1,1", "--order", "5")
    assert data["parts"] == {"1": "1", "2": "1", "1,2": "-beta"}
    div = {"ambient": {"type": "Pn", "n": 1}, "components": [{"mult": 2}]}
    path = tmp_path / "div.json"
    path.write_text(json.dumps(div))
    code, data = run_json(capsys, "snc", "class", "--input", str(path), "--push")
    assert code == 0 and data["pushforward"] == {"h1": "2"}


@pytest.mark.parametrize("argv", [
    ["snc", "class", "--input", "{not json"],
    ["snc", "class", "--input", "/nonexistent/divisor.json"],
    ["model", "genus", "--n", "2"],
    ["model", "chern", "--n", "2", "--bundles", "O(1)", "--i", "3"],
    ["model", "c1", "--n", "2", "--bundle", "L"],
    ["lazard", "normalform", "--poly", "a11^9", "--max-degree", "3"],
])
def test_domain_errors_exit_one(capsys, argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 1
    err = json.loads(out)["error"]
    assert err["type"] and err["message"]


@pytest.mark.parametrize("argv", [
    ["fgl", "frobnicate"],
    ["model", "hypersurface", "--n", "two"],
    ["fgl", "chi", "--law", "additive", "--format", "xml"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    assert main(argv) == 2


def test_output_is_deterministic(capsys):
    argv = ["model", "hypersurface", "--n", "3", "--d", "3", "--law", "universal", "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    proc = subprocess.run([sys.executable, "-m", "cobcalc", *argv], capture_output=True, text=True, check=True)
    assert proc.stdout == first


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "cobcalc" in capsys.readouterr().out

from __future__ import annotations

import io
import json

import pytest

from ybinv.cli import (
    EXIT_MARKOV,
    EXIT_OK,
    EXIT_PARAMS,
    EXIT_PARSE,
    EXIT_SIZE,
    ParameterSpec,
    build_parameters,
    parse_alpha,
    parse_parameter_file,
    run,
)
from ybinv.errors import ParameterError, ParseError
from ybinv.trace import TraceParams


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_text_output():
    code, out, _ = call("--d", "2", "--braid", "s1 s1")
    assert code == EXIT_OK
    assert out.splitlines() == ["invariant = (1)*u + (-1)*u^-1 + (1)*z^-1", "half_power = 1"]


def test_json_output():
    code, out, _ = call("--d", "2", "--braid", "s1", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data == {"braid": "s1", "n": 2, "d": 2, "invariant": "(1)", "half_power": 0}


def test_batch_file(tmp_path):
    f = tmp_path / "words.txt"
    f.write_text("# framed loops\nr t1^1\n\ns1 s1   # trailing comment\n")
    code, out, _ = call("--d", "2", "--file", str(f))
    assert code == EXIT_OK
    blocks = out.split("\n\n")
    assert len(blocks) == 2 and blocks[1].startswith("braid = s1 s1")
    code, out, _ = call("--d", "2", "--file", str(f), "--format", "json")
    assert [r["braid"] for r in json.loads(out)] == ["r t1^1", "s1 s1"]


def test_params_file(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("d 3  # modulus\nsubset 0,2\nalpha 0=2\nalpha 2=1/2+w\n")
    spec = parse_parameter_file(f.read_text())
    assert spec.d == 3 and spec.subset == [0, 2] and spec.alpha == {0: "2", 2: "1/2+w"}
    code, out, _ = call("--params", str(f), "--braid", "r s1 r")
    assert code == EXIT_OK and "invariant = " in out
    code_override, out_override, _ = call("--params", str(f), "--alpha", "0=2;2=1/2+w", "--braid", "r s1 r")
    assert (code_override, out_override) == (code, out)


def test_build_parameters():
    sol = build_parameters(ParameterSpec(d=4))
    assert sol.subset == (0,)
    raw = build_parameters(ParameterSpec(d=2, x={0: "1", 1: "0"}, y={0: "1", 1: "1"}))
    assert isinstance(raw, TraceParams)
    with pytest.raises(ParseError):
        build_parameters(ParameterSpec(d=2, subset=[0], x={0: "1", 1: "0"}, y={0: "1", 1: "1"}))
    with pytest.raises(ParseError):
        build_parameters(ParameterSpec(d=2, x={0: "1"}, y={0: "1"}))
    with pytest.raises(ParameterError):
        build_parameters(ParameterSpec(d=2, subset=[0], alpha={1: "3"}))
    with pytest.raises(ParseError):
        parse_alpha("0:1")
    with pytest.raises(ParseError):
        parse_parameter_file("q 1")


@pytest.mark.parametrize(
    "argv",
    [
        ("--d", "2", "--braid", "s1 q7"),
        ("--braid", "s1"),
        ("--d", "2"),
        ("--d", "2", "--alpha", "0", "--braid", "s1"),
    ],
)
def test_parse_errors(argv):
    code, _, err = call(*argv)
    assert code == EXIT_PARSE and "parse error" in err


@pytest.mark.parametrize(
    "argv", [("--d", "two", "--braid", "s1"), ("--d", "2", "--braid", "s1", "--file", "x")]
)
def test_usage_errors_exit_as_parse_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        call(*argv)
    assert info.value.code == EXIT_PARSE


def test_parameter_errors(tmp_path):
    code, _, err = call("--d", "2", "--subset", "", "--braid", "s1")
    assert code == EXIT_PARAMS and "invalid parameters" in err
    f = tmp_path / "raw.txt"
    f.write_text("d 2\nx 0=1\nx 1=3\ny 0=2\ny 1=5\n")
    code, _, _ = call("--params", str(f), "--braid", "s1")
    assert code == EXIT_PARAMS
    code, out, _ = call("--params", str(f), "--braid", "s1", "--unsafe")
    assert code == EXIT_OK and "half_power = 0" in out


def test_size_guard():
    code, out, err = call("--d", "2", "--braid", "s5")
    assert code == EXIT_SIZE and out == "" and "size guard" in err


def test_batch_keeps_first_failure(tmp_path):
    f = tmp_path / "mixed.txt"
    f.write_text("s1\ns9\nbogus\n")
    code, out, err = call("--d", "2", "--file", str(f))
    assert code == EXIT_SIZE
    assert out.startswith("braid = s1") and "parse error" in err


def test_markov_check_passes():
    code, out, _ = call("--d", "2", "--subset", "0,1", "--braid", "r s1 t2^1", "--check-markov", "5", "--seed", "3")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "markov_check = ok (5 moves)"
    code, out, _ = call("--d", "2", "--braid", "r", "--check-markov", "2", "--format", "json")
    assert json.loads(out)["markov_check"] == {"trials": 2, "failures": []}


def test_markov_check_detects_non_invariant_parameters(tmp_path):
    f = tmp_path / "raw.txt"
    f.write_text("d 2\nx 0=1\nx 1=3\ny 0=2\ny 1=5\n")
    code, out, _ = call("--params", str(f), "--unsafe", "--braid", "r t1^1", "--check-markov", "12", "--seed", "1")
    assert code == EXIT_MARKOV
    assert "failed" in out

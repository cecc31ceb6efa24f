import json
import os
import subprocess
import sys

import pytest

from conftest import FIXTURES
from strassmann.cli import dumps, emit_ideal, main, parse_ideal
from strassmann.rseries import parse_series

F2 = "108 + 3*t2 + 65*t1 + 45*t1^2 + 35*t1*t2 + 120*t2^2 + O(5^3)"

BOUND_FIXTURE = {
    "p": 5,
    "vars": ["t1", "t2"],
    "generators": [
        {"terms": [{"exps": [0, 1], "coeff": 1}, {"exps": [0, 0], "coeff": 1}], "precision": 3},
        {"terms": [{"exps": [2, 0], "coeff": 1}, {"exps": [1, 0], "coeff": -1}], "precision": 3},
    ],
}

AMBIGUOUS = {"p": 5, "vars": ["x", "y"], "generators": [{"text": "x + O(5^4)"}, {"text": "x + O(5^4)"}]}


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


class TestSerialization:
    def test_roundtrip_is_byte_identical(self):
        data = {"p": 5, "vars": ["t1", "t2"], "generators": [{"text": F2}]}
        once = dumps(emit_ideal(parse_ideal(data)))
        twice = dumps(emit_ideal(parse_ideal(json.loads(once))))
        assert once == twice
        assert parse_ideal(json.loads(once)).gens[0] == parse_series(F2, ("t1", "t2"))

    def test_negative_coefficients(self):
        data = {"p": 5, "vars": ["x"], "generators": [{"terms": [{"exps": [1], "coeff": -3}], "precision": 2}]}
        assert parse_ideal(data).gens[0].coeffs == {(1,): 22}

    def test_precision_zero_rejected(self, capsys):
        data = json.dumps({"p": 5, "vars": ["x"], "generators": [{"terms": [], "precision": 0}]})
        code, _, err = run_cli(["bound", data], capsys)
        assert code == 1 and "generators/0/precision" in err

    def test_schema_errors_name_the_field(self, capsys):
        bad = json.dumps({"p": 5, "vars": ["x"], "generators": [{"terms": [{"exps": [1], "coeff": "3"}],
                                                                  "precision": 2}]})
        code, _, err = run_cli(["bound", bad], capsys)
        assert code == 1 and "generators/0/terms/0/coeff" in err
        code, _, err = run_cli(["bound", '{"p": 5,\n "vars": [}'], capsys)
        assert code == 1 and "line 2" in err

    def test_wrong_exponent_length(self, capsys):
        bad = json.dumps({"p": 5, "vars": ["x", "y"],
                          "generators": [{"terms": [{"exps": [1], "coeff": 1}], "precision": 2}]})
        code, _, err = run_cli(["bound", bad], capsys)
        assert code == 1 and "exps" in err

    def test_prime_mismatch(self, capsys):
        code, _, err = run_cli(["bound", json.dumps(BOUND_FIXTURE), "--prime", "7"], capsys)
        assert code == 1 and "--prime" in err


class TestCommands:
    def test_bound(self, capsys):
        code, out, _ = run_cli(["bound", json.dumps(BOUND_FIXTURE)], capsys)
        rep = json.loads(out)
        assert code == 0
        assert rep["bound"]["bound"] == 2
        assert [p["point"] for p in rep["bound"]["points"]] == [[0, 4], [1, 4]]

    def test_algorithm2_fail(self, capsys):
        code, out, _ = run_cli(["groebner", "--algorithm2", "--target-precision", "1", json.dumps(AMBIGUOUS)], capsys)
        assert code == 2 and json.loads(out)["status"] == "FAIL"

    def test_algorithm2_single_generator(self, capsys):
        data = {"p": 5, "vars": ["x"], "generators": [{"text": "5*x + 25 + O(5^4)"}]}
        code, out, _ = run_cli(["groebner", "--algorithm2", "--target-precision", "2", json.dumps(data)], capsys)
        rep = json.loads(out)
        assert code == 0
        assert [g["text"] for g in rep["basis"]["generators"]] == ["5 + x + O(5^2)"]

    def test_target_above_input(self, capsys):
        code, _, err = run_cli(["groebner", "--target-precision", "5", json.dumps(AMBIGUOUS)], capsys)
        assert code == 1

    def test_plain_groebner(self, capsys):
        data = {"p": 5, "vars": ["x", "y"], "generators": [{"text": "x + O(5^3)"}, {"text": "y + 5*y^2 + O(5^3)"}]}
        code, out, _ = run_cli(["groebner", json.dumps(data)], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["reduced"]
        assert [g["text"] for g in rep["basis"]["generators"]] == ["x + O(5^3)", "y + O(5^3)"]

    def test_saturate_exit_codes(self, capsys):
        data = {"p": 5, "vars": ["x", "y"], "generators": [{"text": "x^2 + 5*y + O(5^4)"}, {"text": "x*y + O(5^4)"}]}
        code, out, _ = run_cli(["saturate", "--exact", json.dumps(data)], capsys)
        assert code == 0 and json.loads(out)["chain"]["certificate"]["kind"] == "syzygy-lifting"
        code, out, _ = run_cli(["saturate", json.dumps(data)], capsys)
        assert code == 2 and json.loads(out)["chain"]["status"] == "stable-uncertified"

    def test_strassmann1(self, capsys):
        data = {"p": 5, "vars": ["x"], "generators": [{"text": "x^2 - 5 + O(5^4)"}]}
        code, out, _ = run_cli(["strassmann1", json.dumps(data)], capsys)
        assert code == 0 and json.loads(out)["results"][0]["bound"] == 2

    def test_thue_and_output_file(self, tmp_path, capsys):
        out = tmp_path / "rep.json"
        code, _, _ = run_cli(["thue", os.path.join(FIXTURES, "thue_quintic.json"), "-o", str(out)], capsys)
        rep = json.loads(out.read_text())
        assert code == 0
        assert rep["verdict"] == "solved" and rep["bound"] == 4

    def test_pin_file_overrides(self, tmp_path, capsys):
        inst = json.loads(open(os.path.join(FIXTURES, "thue_quintic.json")).read())
        pin = tmp_path / "pin.json"
        pin.write_text(json.dumps(inst.pop("pinned")))
        code, out, _ = run_cli(["thue", json.dumps(inst), "--pin", str(pin)], capsys)
        rep = json.loads(out)
        assert code == 0
        assert rep["config"]["pinned"]["u"]["0,4"][0] == -17490060

    def test_bad_pin(self, capsys):
        inst = json.loads(open(os.path.join(FIXTURES, "thue_quintic.json")).read())
        inst["pinned"]["u"] = {"0,4": [1, 0, 0, 0, 0]}
        code, _, err = run_cli(["thue", json.dumps(inst)], capsys)
        assert code == 1 and "pinned u" in err

    def test_missing_file(self, capsys):
        code, _, err = run_cli(["bound", "/nonexistent/ideal.json"], capsys)
        assert code == 1 and "cannot read" in err


def test_reports_are_deterministic(tmp_path):
    env = dict(os.environ)
    outs = []
    for threads in ("1", "3"):
        env["STRASSMANN_THREADS"] = threads
        path = tmp_path / f"r{threads}.json"
        subprocess.run([sys.executable, "-m", "strassmann.cli", "bound", json.dumps(BOUND_FIXTURE), "-o", str(path)],
                       check=True, env=env)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("order", ["grevlex", "lex"])
def test_order_flag(order, capsys):
    code, out, _ = run_cli(["bound", json.dumps(BOUND_FIXTURE), "--order", order], capsys)
    assert code == 0 and json.loads(out)["config"]["order"] == order

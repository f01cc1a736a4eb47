"""Command-line interface: output bytes, exit codes, formats, input
conventions, and seeded generators."""

import io
import json
import subprocess
import sys

import pytest

from kscolor import cli
from kscolor.errors import ResourceLimitError

TRUE_RAY_ARG = "[1/3,1/2,1/2,1/2,1/2,1/2]"


def run_main(argv, stdin=None):
    """Invoke cli.main in-process; returns (exit_code, stdout, stderr)."""
    old_in = sys.stdin
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        with pytest.MonkeyPatch.context() as mp:
            mp.setattr(sys, "stdout", out)
            mp.setattr(sys, "stderr", err)
            code = cli.main(argv)
    finally:
        sys.stdin = old_in
    return code, out.getvalue(), err.getvalue()


class TestClassify:
    def test_true_ray_exact_bytes(self):
        code, out, err = run_main(["classify-ray", TRUE_RAY_ARG])
        assert code == 0
        assert out == '{"value":"TRUE"}\n'
        assert err == ""

    def test_axis_ray_is_undetermined(self):
        # a lone ray is never FALSE: falseness needs a witness frame
        code, out, _ = run_main(["classify-ray", "[1,0,0,0,0,0]"])
        assert code == 0
        assert json.loads(out) == {"value": "UNDETERMINED"}

    def test_entry_point_bytes(self):
        proc = subprocess.run(
            ["kscolor", "classify-ray", TRUE_RAY_ARG],
            capture_output=True,
            timeout=60,
        )
        assert proc.returncode == 0
        assert proc.stdout == b'{"value":"TRUE"}\n'

    def test_classify_matrix(self):
        rows = (
            "[[1,0,0,0,0,0],"
            "[0,1,0,0,0,0],"
            "[0,0,0,0,0,0]]"
        )
        # projection matrices enter as exact complex rows; diag(1,1,0)
        code, out, _ = run_main(
            [
                "classify-matrix",
                '[[{"re":"1"},{"re":"0"},{"re":"0"}],'
                '[{"re":"0"},{"re":"1"},{"re":"0"}],'
                '[{"re":"0"},{"re":"0"},{"re":"0"}]]',
            ]
        )
        assert code == 0
        assert json.loads(out)["value"] in {"FALSE", "UNDETERMINED"}

    def test_classify_povm_identity_has_no_witness(self):
        identity = '[["1","0","0"],["0","1","0"],["0","0","1"]]'
        code, out, _ = run_main(["classify-povm", identity])
        assert code == 0
        doc = json.loads(out)
        assert doc["value"] == "UNDETERMINED-NO-WITNESS"
        assert doc["witness"] is None

    def test_classify_povm_false_with_witness(self):
        mat = '[["0","0","0"],["0","1","0"],["0","0","1"]]'
        code, out, _ = run_main(["classify-povm", mat])
        assert code == 0
        doc = json.loads(out)
        assert doc["value"] == "FALSE"
        assert doc["witness"]["kind"] == "povm"


class TestExitCodes:
    def test_invalid_input_is_2(self):
        code, out, err = run_main(["classify-ray", "[1/3]"])
        assert code == 2
        assert out == ""
        doc = json.loads(err)
        assert doc["type"] == "InvalidInputError"
        assert doc["error"]

    def test_degenerate_input_is_3(self):
        identity_targets = "[[[1,0,0],[0,1,0],[0,0,1]]]"
        code, _, err = run_main(["make-suitable-povm", identity_targets])
        assert code == 3
        assert json.loads(err)["type"] == "DegenerateInputError"

    def test_degenerate_resolved_by_allow_split(self):
        identity_targets = "[[[1,0,0],[0,1,0],[0,0,1]]]"
        code, out, _ = run_main(
            ["make-suitable-povm", identity_targets, "--allow-split"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["sum"] == 1
        assert len(doc["elements"]) == 2

    def test_resource_limit_is_4(self, monkeypatch):
        def exhausted(args):
            raise ResourceLimitError("ran out of rounds")

        monkeypatch.setattr(cli, "_cmd_approx_true", exhausted)
        code, _, err = run_main(["approx-true", "[1,0,0,0,0,0]"])
        assert code == 4
        assert json.loads(err)["type"] == "ResourceLimitError"

    def test_bad_flag_value(self):
        with pytest.raises(SystemExit):
            run_main(["approx-true", "[1,0,0,0,0,0]", "--epsilon", "fast"])


class TestFormats:
    def test_text_format(self):
        code, out, _ = run_main(["classify-ray", TRUE_RAY_ARG, "--format", "text"])
        assert code == 0
        assert out == "value = TRUE\n"

    def test_env_default(self, monkeypatch):
        monkeypatch.setenv("KSCOLOR_FORMAT", "text")
        code, out, _ = run_main(["classify-ray", TRUE_RAY_ARG])
        assert code == 0
        assert out == "value = TRUE\n"

    def test_flag_overrides_env(self, monkeypatch):
        monkeypatch.setenv("KSCOLOR_FORMAT", "text")
        code, out, _ = run_main(["classify-ray", TRUE_RAY_ARG, "--format", "json"])
        assert code == 0
        assert out == '{"value":"TRUE"}\n'

    def test_unknown_env_value_falls_back_to_json(self, monkeypatch):
        monkeypatch.setenv("KSCOLOR_FORMAT", "yaml")
        code, out, _ = run_main(["classify-ray", TRUE_RAY_ARG])
        assert code == 0
        assert out == '{"value":"TRUE"}\n'

    def test_text_error_format(self):
        code, _, err = run_main(["classify-ray", "[1/3]", "--format", "text"])
        assert code == 2
        assert err.startswith("error (InvalidInputError):")


class TestInputConventions:
    def test_at_file(self, tmp_path):
        path = tmp_path / "ray.txt"
        path.write_text(TRUE_RAY_ARG)
        code, out, _ = run_main(["classify-ray", f"@{path}"])
        assert code == 0
        assert out == '{"value":"TRUE"}\n'

    def test_stdin_dash(self):
        code, out, _ = run_main(["classify-ray", "-"], stdin=TRUE_RAY_ARG)
        assert code == 0
        assert out == '{"value":"TRUE"}\n'

    def test_missing_at_file(self):
        code, _, err = run_main(["classify-ray", "@/no/such/file"])
        assert code == 2
        assert json.loads(err)["type"] == "InvalidInputError"

    def test_lenient_bare_tokens(self):
        # bare fractions and sqrt2 tokens without quotes
        code, out, _ = run_main(
            ["classify-povm", "[[1/2s2,0,0],[0,0,0],[0,0,0]]"]
        )
        assert code == 0
        assert json.loads(out)["value"] == "TRUE"

    def test_strict_json_also_accepted(self):
        code, out, _ = run_main(
            ["classify-ray", '["1/3","1/2","1/2","1/2","1/2","1/2"]']
        )
        assert code == 0
        assert json.loads(out) == {"value": "TRUE"}


class TestRoundTrips:
    def test_suitable_frame_verifies(self, tmp_path):
        code, out, _ = run_main(
            [
                "suitable-frame",
                "[[1,0,0,0,0,0],[0,0,1,0,0,0],[0,0,0,0,1,0]]",
                "--epsilon",
                "1/100",
            ]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["sum"] == 1
        assert doc["values"].count("TRUE") == 1
        path = tmp_path / "frame.json"
        path.write_text(json.dumps(doc["frame"]))
        code, out, _ = run_main(["verify-decomposition", str(path)])
        assert code == 0
        assert json.loads(out) == {"sum": 1}

    def test_povm_verifies(self, tmp_path):
        code, out, _ = run_main(
            ["make-suitable-povm", "[[[0.5,0,0],[0,0.5,0],[0,0,0.5]],"
             "[[0.5,0,0],[0,0.5,0],[0,0,0.5]]]", "--epsilon", "1/100"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["sum"] == 1
        povm_doc = {k: doc[k] for k in ("kind", "dimension", "elements")}
        path = tmp_path / "povm.json"
        path.write_text(json.dumps(povm_doc))
        code, out, _ = run_main(["verify-decomposition", str(path)])
        assert code == 0
        assert json.loads(out) == {"sum": 1}

    def test_ks_solve_builtin(self):
        code, out, _ = run_main(["ks-solve", "peres33"])
        assert code == 0
        assert json.loads(out) == {"result": "UNSAT"}

    def test_ks_solve_sat_reports_assignment(self, tmp_path):
        path = tmp_path / "basis.rays"
        text = subprocess.run(
            [
                "python3",
                "-c",
                "from kscolor.kscheck import dump_rayset, RaySet;"
                "from kscolor.fields import QuadComplex, QuadRational;"
                "from fractions import Fraction;"
                "rs = RaySet(3, [[QuadComplex(QuadRational(Fraction(int(c))))"
                " for c in row] for row in ['100','010','001']]);"
                "print(dump_rayset(rs), end='')",
            ],
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert text.returncode == 0, text.stderr
        path.write_text(text.stdout)
        code, out, _ = run_main(["ks-solve", str(path)])
        assert code == 0
        doc = json.loads(out)
        assert doc["result"] == "SAT"
        assert sorted(doc["assignment"].values()) == [0, 0, 1]

    def test_ks_perturb_small(self):
        code, out, _ = run_main(
            ["ks-perturb", "peres33", "--epsilon", "1/10000"]
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["all_suitable"] is True
        assert doc["all_shared_diverge"] is True
        assert len(doc["contexts"]) == 16
        assert all(c["sum"] == 1 for c in doc["contexts"])


class TestGenerators:
    def test_gen_ray_deterministic(self):
        _, out1, _ = run_main(["gen-ray", "--seed", "7"])
        _, out2, _ = run_main(["gen-ray", "--seed", "7"])
        _, out3, _ = run_main(["gen-ray", "--seed", "8"])
        assert out1 == out2
        assert out1 != out3

    def test_gen_ray_dimension(self):
        _, out, _ = run_main(["gen-ray", "--seed", "1", "--dimension", "5"])
        doc = json.loads(out)
        assert len(doc["target"]) == 10

    def test_gen_frame_feeds_suitable_frame(self):
        _, gen, _ = run_main(["gen-frame", "--seed", "3"])
        code, out, _ = run_main(
            ["suitable-frame", "-", "--epsilon", "1/100"], stdin=gen
        )
        assert code == 0
        assert json.loads(out)["sum"] == 1

    def test_gen_ray_feeds_approx_true(self):
        _, gen, _ = run_main(["gen-ray", "--seed", "3"])
        code, out, _ = run_main(
            ["approx-true", "-", "--epsilon", "1/100"], stdin=gen
        )
        assert code == 0
        assert json.loads(out)["value"] == "TRUE"

    def test_gen_ray_feeds_false_ray(self):
        _, gen, _ = run_main(["gen-ray", "--seed", "4"])
        code, out, _ = run_main(
            ["false-ray", "-", "--epsilon", "1/100"], stdin=gen
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["value"] == "FALSE"
        assert doc["witness_values"].count("TRUE") == 1

    def test_gen_povm_feeds_make_suitable(self):
        _, gen, _ = run_main(
            ["gen-povm", "--seed", "11", "--elements", "2"]
        )
        code, out, _ = run_main(
            ["make-suitable-povm", "-", "--epsilon", "1/100"], stdin=gen
        )
        assert code == 0
        assert json.loads(out)["sum"] == 1

    def test_seed_does_not_affect_deterministic_commands(self):
        _, a, _ = run_main(["classify-ray", TRUE_RAY_ARG, "--seed", "1"])
        _, b, _ = run_main(["classify-ray", TRUE_RAY_ARG, "--seed", "99"])
        assert a == b


class TestByteStability:
    def test_repeated_runs_identical(self):
        outs = set()
        for _ in range(3):
            code, out, _ = run_main(
                ["suitable-frame", "[[1,0,0,0,0,0],[0,0,1,0,0,0],[0,0,0,0,1,0]]"]
            )
            assert code == 0
            outs.add(out)
        assert len(outs) == 1

    def test_keys_sorted_and_compact(self):
        _, out, _ = run_main(["ks-solve", "peres33"])
        assert out == json.dumps(
            json.loads(out), sort_keys=True, separators=(",", ":")
        ) + "\n"

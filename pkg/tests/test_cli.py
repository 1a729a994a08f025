"""Front end: verbs, exit codes, canonical output, and the verify pass."""

import io
import json
from fractions import Fraction

import pytest

from aoulab.cli import main
from aoulab.linalg import Matrix
from aoulab.maps import UnitalMap
from aoulab.serialize import dumps
from aoulab.spaces import lin_space, linf
from aoulab.tensors import TensorElement


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


@pytest.fixture()
def files(tmp_path):
    paths = {}

    def write(name, obj):
        p = tmp_path / name
        p.write_text(dumps(obj) if not isinstance(obj, str) else obj)
        paths[name] = str(p)
        return str(p)

    write("linf2.json", linf(2))
    write("linf3.json", linf(3))
    write("lin2.json", lin_space(2))
    write(
        "avg.json",
        UnitalMap(linf(2), linf(1), Matrix.from_rows([(Fraction(1, 2), Fraction(1, 2))])),
    )
    write(
        "skew.json",
        UnitalMap(
            linf(2),
            linf(2),
            Matrix.from_rows([(Fraction(3, 2), Fraction(-1, 2)), (Fraction(-1, 2), Fraction(3, 2))]),
        ),
    )
    write("elem.json", TensorElement(linf(2), linf(2), Matrix.from_rows([(1, -2), (0, 3)])))
    paths["dir"] = str(tmp_path)
    return paths


class TestExitCodes:
    def test_computed_is_zero_even_for_negative_verdicts(self, files):
        code, out = run(["nuclear", files["lin2.json"]])
        assert code == 0 and out.strip() == "false"

    def test_unknown_verb_is_usage(self):
        assert main(["frobnicate"]) == 1

    def test_missing_required_flag_is_usage(self, files):
        assert main(["norm", files["linf2.json"]]) == 1

    def test_missing_file_is_input_error(self):
        assert main(["validate", "no-such-file.json"]) == 2

    def test_bad_vector_is_input_error(self, files):
        assert main(["norm", files["linf2.json"], "--vector", "[1,-1"]) == 2

    def test_wrong_object_type_is_input_error(self, files):
        assert main(["check-map", files["linf2.json"]]) == 2

    def test_version_mismatch_is_input_error(self, files, tmp_path):
        bad = tmp_path / "bad.json"
        text = (tmp_path / "linf2.json").read_text().replace('"version": 1', '"version": 9')
        bad.write_text(text)
        assert main(["validate", str(bad)]) == 2


class TestScalarVerbs:
    def test_norm_prints_the_value(self, files):
        code, out = run(["norm", files["linf2.json"], "--vector", "[1,-1]"])
        assert code == 0 and out == "1\n"

    def test_norm_accepts_rational_strings(self, files):
        code, out = run(["norm", files["lin2.json"], "--vector", '["1/2", 0, "1/2"]'])
        assert code == 0 and out == "1\n"

    def test_tensor_norm(self, files):
        code, out = run(["tensor-norm", files["elem.json"]])
        assert code == 0 and out == "3\n"


class TestReports:
    def test_validate_json(self, files):
        code, out = run(["validate", files["linf2.json"], "--format", "json"])
        d = json.loads(out)
        assert code == 0
        assert d["verb"] == "validate" and d["version"] == 1
        assert d["order_unit"] and d["archimedean"] and d["pointed"]

    def test_json_output_is_deterministic(self, files):
        a = run(["states", files["lin2.json"], "--format", "json"])
        b = run(["states", files["lin2.json"], "--format", "json"])
        assert a == b

    def test_nuclear_pair_shape(self, files):
        code, out = run(
            ["nuclear-pair", files["lin2.json"], files["lin2.json"], "--format", "json"]
        )
        d = json.loads(out)
        assert code == 0
        assert d["nuclear"] is False
        assert d["witness"]["coeffs"] == [
            ["2", "0", "0"],
            ["0", "-1", "-1"],
            ["0", "-1", "1"],
        ]
        assert d["pi_certificate"]["verdict"] == "non_member"

    def test_check_map_flags(self, files):
        code, out = run(["check-map", files["avg.json"], "--format", "json"])
        d = json.loads(out)
        assert code == 0
        assert d["unital"] and d["positive"]
        assert not d["order_embedding"] and not d["isometry"]

    def test_quotient_and_factorize(self, files):
        code, out = run(
            ["quotient", files["linf3.json"], "--kernel", "[[0,1,-1]]", "--format", "json"]
        )
        assert code == 0 and json.loads(out)["space"]["dim"] == 2
        code, out = run(["factorize", files["lin2.json"], "--format", "json"])
        d = json.loads(out)
        assert code == 0
        assert d["defect"] == "1/2" and d["success"] is False
        assert d["schedule"] == [[3, "1"], [4, "1/2"]]

    def test_extend_infeasible_exits_two(self, files):
        # asks for a functional of norm three on a norm-one element
        code = main(
            [
                "extend",
                files["lin2.json"],
                files["linf2.json"],
                "--basis",
                "[[1,0,0],[0,1,0]]",
                "--values",
                "[[1,1],[3,3]]",
            ]
        )
        assert code == 2


class TestRoundtrip:
    def test_canonicalizes_rationals(self, tmp_path):
        p = tmp_path / "odd.json"
        p.write_text(
            json.dumps(
                {
                    "version": 1,
                    "type": "space",
                    "label": "x",
                    "dim": 1,
                    "unit": ["2/4"],
                    "cone": {"rep": "generators", "rows": [["6/4"]]},
                }
            )
        )
        code, out = run(["roundtrip", str(p)])
        assert code == 0
        d = json.loads(out)
        assert d["unit"] == ["1/2"] and d["cone"]["rows"] == [["3/2"]]

    def test_idempotent_and_preserves_strict_flags(self, tmp_path):
        p = tmp_path / "strict.json"
        p.write_text(
            json.dumps(
                {
                    "version": 1,
                    "type": "space",
                    "label": "s",
                    "dim": 2,
                    "unit": ["1", "1"],
                    "cone": {
                        "rep": "inequalities",
                        "rows": [["1", "0"], ["0", "1"]],
                        "strict": [True, False],
                    },
                }
            )
        )
        code, once = run(["roundtrip", str(p)])
        assert code == 0
        assert json.loads(once)["cone"]["strict"] == [True, False]
        q = tmp_path / "canon.json"
        q.write_text(once)
        code, twice = run(["roundtrip", str(q)])
        assert code == 0 and once == twice


class TestVerify:
    @pytest.mark.parametrize(
        "argv",
        [
            ["validate", "{linf2}"],
            ["norm", "{linf2}", "--vector", "[1,-1]"],
            ["states", "{lin2}"],
            ["archimedeanize", "{linf2}"],
            ["quotient", "{linf3}", "--kernel", "[[0,1,-1]]"],
            ["check-map", "{avg}"],
            ["pert", "{skew}"],
            ["perturb", "{skew}"],
            ["auerbach", "{lin2}"],
            ["tensor-member", "{elem}", "--kind", "pi"],
            ["tensor-norm", "{elem}"],
            ["nuclear", "{lin2}"],
            ["nuclear-pair", "{lin2}", "{lin2}"],
            ["factorize", "{lin2}"],
        ],
    )
    def test_fresh_reports_verify(self, files, tmp_path, argv):
        sub = {
            "{linf2}": files["linf2.json"],
            "{linf3}": files["linf3.json"],
            "{lin2}": files["lin2.json"],
            "{avg}": files["avg.json"],
            "{skew}": files["skew.json"],
            "{elem}": files["elem.json"],
        }
        argv = [sub.get(a, a) for a in argv] + ["--format", "json"]
        code, out = run(argv)
        assert code == 0
        report = tmp_path / "report.json"
        report.write_text(out)
        code, out = run(["verify", str(report)])
        assert code == 0 and out.strip() == "true"

    def test_tampered_report_fails(self, files, tmp_path):
        code, out = run(["norm", files["linf2.json"], "--vector", "[1,-1]", "--format", "json"])
        d = json.loads(out)
        d["norm"] = "2"
        report = tmp_path / "tampered.json"
        report.write_text(json.dumps(d))
        code, out = run(["verify", str(report)])
        assert code == 3 and out.strip() == "false"

    def test_non_report_rejected(self, files):
        assert main(["verify", files["linf2.json"]]) == 2


class TestExamples:
    def test_reference_examples_all_match(self):
        code, out = run(["examples", "paper", "--format", "json"])
        d = json.loads(out)
        assert code == 0
        assert d["all_match"] is True
        assert d["matrix_examples"]["bell"] == {
            "psd": "member",
            "pi": "non_member",
            "epsilon": "member",
        }
        assert d["matrix_examples"]["swap"]["psd"] == "non_member"
        assert d["lin_space_2_square_nuclear"] is False
        assert d["non_nuclearity_witness"]["coeffs"][0] == ["2", "0", "0"]

    def test_examples_verify_roundtrip(self, tmp_path):
        code, out = run(["examples", "paper", "--format", "json"])
        report = tmp_path / "examples.json"
        report.write_text(out)
        code, out = run(["verify", str(report)])
        assert code == 0 and out.strip() == "true"

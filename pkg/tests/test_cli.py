import io
import json
import sys
from contextlib import redirect_stdout

import pytest

from convexcells.cli import main


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    out = buf.getvalue()
    return code, (json.loads(out) if out.strip() else None)


POINTED_BOX = {
    "ambient_dim": 2,
    "pieces": [
        [{"coeffs": ["-1", "0"], "rel": "<", "rhs": "1"},
         {"coeffs": ["1", "0"], "rel": "<", "rhs": "1"},
         {"coeffs": ["0", "-1"], "rel": "<", "rhs": "0"},
         {"coeffs": ["0", "1"], "rel": "<", "rhs": "1"}],
        [{"coeffs": ["1", "0"], "rel": "=", "rhs": "0"},
         {"coeffs": ["0", "1"], "rel": "=", "rhs": "0"}],
    ],
}

UNIT = {
    "ambient_dim": 1,
    "pieces": [[{"coeffs": ["-1"], "rel": "<=", "rhs": "0"},
                {"coeffs": ["1"], "rel": "<=", "rhs": "1"}]],
}

GAP = {
    "ambient_dim": 1,
    "pieces": [[{"coeffs": ["1"], "rel": "<=", "rhs": "0"}],
               [{"coeffs": ["-1"], "rel": "<=", "rhs": "-1"}]],
}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, data in [("box", POINTED_BOX), ("unit", UNIT), ("gap", GAP)]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


class TestClassify:
    def test_pointed_box(self, files):
        code, rep = run_cli("classify", files["box"])
        assert code == 0
        assert rep["result"]["class"] == 4
        assert rep["result"]["predicates"]["dent"] is True
        assert rep["result"]["dent"]["point"][1] == "0"

    def test_half_open_interval(self, files):
        p = files["dir"] / "halfopen.json"
        p.write_text(json.dumps({
            "ambient_dim": 1,
            "pieces": [[{"coeffs": ["-1"], "rel": "<=", "rhs": "0"},
                        {"coeffs": ["1"], "rel": "<", "rhs": "1"}]]}))
        code, rep = run_cli("classify", str(p))
        assert code == 0 and rep["result"]["class"] == 3

    def test_edge_ray_strip(self, files):
        p = files["dir"] / "edge_ray.json"
        p.write_text(json.dumps({
            "ambient_dim": 2,
            "pieces": [[{"coeffs": ["0", "-1"], "rel": "<", "rhs": "0"},
                        {"coeffs": ["0", "1"], "rel": "<", "rhs": "1"}],
                       [{"coeffs": ["0", "1"], "rel": "=", "rhs": "0"},
                        {"coeffs": ["-1", "0"], "rel": "<", "rhs": "0"}]]}))
        code, rep = run_cli("classify", str(p), "--check-witness")
        assert code == 0 and rep["result"]["class"] == 6
        assert rep["result"]["ray"]["base"] == ["0", "0"]
        assert rep["result"]["ray"]["direction"] == ["1", "0"]
        assert rep["result"]["witness_checks"]["ray"] is True

    def test_zero_dimension_rejected(self, files):
        p = files["dir"] / "zero.json"
        p.write_text(json.dumps({"ambient_dim": 0, "pieces": [[]]}))
        code, rep = run_cli("classify", str(p))
        assert code == 4

    def test_empty_set_classifies_affine(self, files):
        p = files["dir"] / "empty.json"
        p.write_text(json.dumps({
            "ambient_dim": 2,
            "pieces": [[{"coeffs": ["1", "0"], "rel": "<", "rhs": "0"},
                        {"coeffs": ["-1", "0"], "rel": "<", "rhs": "0"}]]}))
        code, rep = run_cli("classify", str(p))
        assert code == 0 and rep["result"]["class"] == 1
        assert rep["result"]["predicates"]["closed"] is True
        assert rep["result"]["predicates"]["dent"] is None
        code, rep = run_cli("sample", str(p), "--density", "2")
        assert code == 3

    def test_check_witness(self, files):
        code, rep = run_cli("classify", files["box"], "--check-witness")
        assert code == 0
        assert all(rep["result"]["witness_checks"].values())

    def test_not_convex_exit_2(self, files):
        code, rep = run_cli("classify", files["gap"])
        assert code == 2
        assert rep["status"] == "NOT_CONVEX"
        w = rep["witness"]
        assert set(w) == {"x", "y", "midpoint"}

    def test_parse_error_exit_4(self, files):
        bad = files["dir"] / "bad.json"
        bad.write_text('{"ambient_dim": 1, "pieces": [[{"coeffs": ["0.5"], '
                       '"rel": "<=", "rhs": "1"}]]}')
        code, rep = run_cli("classify", str(bad))
        assert code == 4 and rep["error"]["kind"] == "parse"

    def test_resource_cap_exit_5(self, files):
        rows = [{"coeffs": ["1"], "rel": "<=", "rhs": str(k)} for k in range(30)]
        big = files["dir"] / "big.json"
        big.write_text(json.dumps({"ambient_dim": 1, "pieces": [rows]}))
        code, rep = run_cli("classify", str(big))
        assert code == 5 and rep["error"]["kind"] == "resource"

    def test_determinism(self, files):
        runs = [run_cli("classify", files["box"])[1] for _ in range(2)]
        assert json.dumps(runs[0], sort_keys=False) == \
            json.dumps(runs[1], sort_keys=False)

    def test_byte_identical_across_processes(self, files):
        import subprocess
        import sys
        cmd = [sys.executable, "-m", "convexcells.cli", "classify",
               files["box"], "--check-witness"]
        outs = [subprocess.run(cmd, capture_output=True, text=True).stdout
                for _ in range(2)]
        assert outs[0] == outs[1] and outs[0].strip()


class TestApply:
    def test_square_roundtrip(self, files):
        out_x = str(files["dir"] / "sx.json")
        out_y = str(files["dir"] / "sy.json")
        out_sq = str(files["dir"] / "sq.json")
        code, _ = run_cli("apply", "preimage", files["unit"],
                          "--matrix", "1,0", "--out", out_x)
        assert code == 0
        code, _ = run_cli("apply", "preimage", files["unit"],
                          "--matrix", "0,1", "--out", out_y)
        assert code == 0
        code, rep = run_cli("apply", "intersect", out_x, out_y, "--out", out_sq)
        assert code == 0
        assert rep["result"]["output_class"] == 2
        assert rep["result"]["monotonicity_ok"] is True
        # written file re-parses to a set containing the centre, not (2,2)
        code, rep = run_cli("member", out_sq, "--point", "1/2,1/2")
        assert rep["result"]["member"] is True
        code, rep = run_cli("member", out_sq, "--point", "2,2")
        assert rep["result"]["member"] is False

    def test_output_files_reparse_to_equal_sets(self, files):
        direct = files["dir"] / "square_direct.json"
        direct.write_text(json.dumps({
            "ambient_dim": 2,
            "pieces": [[{"coeffs": ["-1", "0"], "rel": "<=", "rhs": "0"},
                        {"coeffs": ["1", "0"], "rel": "<=", "rhs": "1"},
                        {"coeffs": ["0", "-1"], "rel": "<=", "rhs": "0"},
                        {"coeffs": ["0", "1"], "rel": "<=", "rhs": "1"}]]}))
        out_x = str(files["dir"] / "rx.json")
        out_y = str(files["dir"] / "ry.json")
        out_sq = str(files["dir"] / "rsq.json")
        run_cli("apply", "preimage", files["unit"], "--matrix", "1,0",
                "--out", out_x)
        run_cli("apply", "preimage", files["unit"], "--matrix", "0,1",
                "--out", out_y)
        run_cli("apply", "intersect", out_x, out_y, "--out", out_sq)
        code, rep = run_cli("equal", out_sq, str(direct))
        assert code == 0 and rep["result"]["equal"] is True

    def test_closure_of_pointed_box(self, files):
        out = str(files["dir"] / "cl.json")
        code, rep = run_cli("apply", "closure", files["box"], "--out", out)
        assert code == 0
        assert rep["result"]["input_classes"] == [4]
        assert rep["result"]["output_class"] == 2

    def test_image_of_pointed_box(self, files):
        code, rep = run_cli("apply", "image", files["box"], "--matrix", "1,0")
        assert code == 0
        assert rep["result"]["output_class"] == 3

    def test_dlimit(self, files):
        code, rep = run_cli("apply", "dlimit", files["box"],
                            "--direction", "0,1")
        assert code == 0
        assert rep["result"]["monotonicity_ok"] is True


class TestVerify:
    def test_open_interval_construction(self, files):
        code, rep = run_cli("verify-construction", "open-interval", files["box"])
        assert code == 0 and rep["result"]["verified"] is True
        assert rep["result"]["pipeline"]["kind"] == "intersect"

    def test_from_ray(self, files):
        code, rep = run_cli("verify-construction", "from-ray", files["unit"])
        assert code == 0 and rep["result"]["verified"] is True

    def test_strip_pointwise_via_cli(self, files):
        strip = files["dir"] / "strip.json"
        strip.write_text(json.dumps({
            "ambient_dim": 2,
            "pieces": [[{"coeffs": ["0", "-1"], "rel": "<", "rhs": "0"},
                        {"coeffs": ["0", "1"], "rel": "<", "rhs": "1"}],
                       [{"coeffs": ["1", "0"], "rel": "=", "rhs": "0"},
                        {"coeffs": ["0", "1"], "rel": "=", "rhs": "0"}]]}))
        code, rep = run_cli("verify-construction", "pointed-stripe-pointwise",
                            str(strip), "--density", "2", "--truncation", "8")
        assert code == 0
        assert rep["result"]["all_agree"] is True
        assert rep["result"]["disagreements"] == []

    def test_precondition_exit_3(self, files):
        code, rep = run_cli("verify-construction", "pointed-rectangle",
                            files["unit"])
        assert code == 3
        assert rep["error"]["kind"] == "precondition"


class TestOtherVerbs:
    def test_equal(self, files):
        code, rep = run_cli("equal", files["unit"], files["unit"])
        assert code == 0 and rep["result"]["equal"] is True
        code, rep = run_cli("equal", files["unit"], files["box"])
        assert code == 4  # dimension mismatch surfaces as a parse-level error

    def test_sample(self, files):
        code, rep = run_cli("sample", files["unit"], "--density", "2")
        assert code == 0
        assert ["1/2"] in rep["result"]["points"]

    def test_polycheck(self, files):
        code, rep = run_cli("polycheck", files["unit"], "--lambdas", "2,-1")
        assert code == 0
        assert rep["result"]["preserved"] is False
        assert rep["result"]["combination"] in (["-1"], ["2"])
        code, rep = run_cli("polycheck", files["unit"], "--lambdas", "1/2,1/2")
        assert rep["result"]["preserved"] is True

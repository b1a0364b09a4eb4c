from __future__ import annotations

import csv
import io
import json

from mvsfnc.cli import main, run
from mvsfnc.report import TABLE_LIST_LIMIT, emit_report, mismatch_flags, report_rows


def run_json(*argv):
    code, text, _ = run(list(argv))
    return code, json.loads(text) if code != 2 else text


def test_field_info():
    code, rep = run_json("field", "info", "--field", "2^3")
    assert code == 0
    assert rep["q"] == 8 and rep["modulus"] == "x^3+x+1"


def test_poly_valueset():
    code, rep = run_json("poly", "valueset", "--field", "2^2", "x^2+x")
    assert code == 0 and rep["values"] == ["0", "1"]


def test_poly_mvsp_and_certify():
    code, rep = run_json("poly", "mvsp", "--field", "3", "x^2+x")
    assert code == 0 and rep["is_mvsp"] is True
    code, rep = run_json("mvsp", "certify", "--field", "2^3", "x^2+x")
    assert code == 0 and rep["certificate"]["omegas"] == ["1", "1", "1"]


def test_curve_fnc_and_classify():
    code, rep = run_json("curve", "fnc", "--field", "2^2", "y^3 = x^2+x+1")
    assert code == 0
    assert rep["tests"]["bivariate"] is True and rep["tests"]["superelliptic"] is True
    code, rep = run_json("curve", "classify", "--field", "2^2", "y^3 = g^2*x^2+g*x+1")
    assert code == 0 and rep["family"] == "B-ii"


def test_usage_errors_exit_2(capsys):
    assert main(["curve", "classify", "--field", "2^2", "y^3 = x^2+x"]) == 2
    assert main(["poly", "valueset", "--field", "6", "x"]) == 2
    assert main(["poly", "valueset", "--field", "5", "x^2+*x"]) == 2
    assert main(["verify", "theorem-a", "--workers", "0"]) == 2
    assert main(["nonsense"]) == 2
    assert "error" in capsys.readouterr().err


def test_verify_success_and_mismatch_exit_codes():
    code, rows = run_json("verify", "theorem-a", "--max-q", "16")
    assert code == 0 and all(r["match"] for r in rows)
    code, rows = run_json("verify", "theorem-b", "--qs", "4", "--types", "ii,iii")
    assert code == 0
    # type-iii reducible hits at q = 9 are not all Fermat products
    code, rows = run_json("verify", "theorem-b", "--qs", "9", "--types", "iii")
    assert code == 1 and rows[0]["match"] and not rows[0]["reducible_match"]


def test_out_file(tmp_path):
    path = tmp_path / "report.json"
    assert main(["verify", "type-i", "--qs", "4", "--out", str(path)]) == 0
    rows = json.loads(path.read_text())
    assert rows[0]["q"] == 4 and rows[0]["match"]


def test_worker_count_does_not_change_output():
    one = run(["verify", "theorem-a", "--max-q", "27", "--workers", "1"])[1]
    two = run(["verify", "theorem-a", "--max-q", "27", "--workers", "2"])[1]
    assert one == two


def test_empty_verification_report():
    assert emit_report({"match": True, "extras": [], "missing": []}) == '{"match": true, "extras": [], "missing": []}\n'


def test_table_truncates_long_lists():
    text = emit_report({"q": 64, "values": list(range(40))}, "table")
    assert "... (40 total)" in text
    shown = text.split("values", 1)[1]
    assert shown.count(",") == TABLE_LIST_LIMIT


def test_csv_roundtrip():
    code, text, _ = run(["verify", "theorem-b", "--qs", "4,8", "--format", "csv"])
    assert code == 0
    parsed = list(csv.DictReader(io.StringIO(text)))
    _, js, _ = run(["verify", "theorem-b", "--qs", "4,8"])
    rows = report_rows(json.loads(js))
    assert len(parsed) == len(rows)
    for got, want in zip(parsed, rows):
        for k, v in want.items():
            expect = ("true" if v else "false") if isinstance(v, bool) else ("" if v is None else str(v))
            assert got[k] == expect


def test_csv_escapes_commas():
    text = emit_report({"rows": [{"curve": "y^3 = x^2+x+1", "note": "a, b"}]}, "csv")
    assert list(csv.DictReader(io.StringIO(text))) == [{"curve": "y^3 = x^2+x+1", "note": "a, b"}]


def test_mismatch_flags_search_nested_reports():
    assert mismatch_flags([{"match": True, "inner": {"reducible_match": False}}]) == ["reducible_match"]
    assert mismatch_flags({"match": True}) == []

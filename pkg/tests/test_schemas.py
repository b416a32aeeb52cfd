"""Every schema is valid Draft 7 and every CLI document validates against its
schema (reduced workloads; shapes are what is under test here)."""

import json

import jsonschema
import pytest
from mpmath import mp

import p2airy.cli as cli
from p2airy.cli import main
from p2airy.verify import CheckResult

from helpers import SCHEMA_DIR, load_schema

ALL_SCHEMAS = ("eval", "coeffs", "scan", "limits", "geometry", "verify",
               "report", "error")


def _jout(capsys, argv, expect=0):
    code = main(argv)
    cap = capsys.readouterr()
    assert code == expect, cap.err
    return json.loads(cap.out if expect == 0 else cap.err)


@pytest.mark.parametrize("name", ALL_SCHEMAS)
def test_schema_files_are_valid_draft7(name):
    schema = load_schema(name)
    jsonschema.Draft7Validator.check_schema(schema)
    assert schema["$schema"].endswith("draft-07/schema#")


def test_schema_dir_is_complete():
    assert sorted(p.stem for p in SCHEMA_DIR.glob("*.json")) == sorted(ALL_SCHEMAS)


def test_eval_documents_validate(capsys):
    schema = load_schema("eval")
    doc = _jout(capsys, ["eval", "--n", "1", "--z", "0.3", "--digits", "16"])
    jsonschema.validate(doc, schema)
    doc = _jout(capsys, ["eval", "--n", "2", "--z", "0.2-0.4i", "--lambda", "i",
                         "--route", "tau", "--digits", "16"])
    jsonschema.validate(doc, schema)


def test_coeffs_document_validates(capsys):
    doc = _jout(capsys, ["coeffs", "--n", "1", "--t", "0.5", "--digits", "16"])
    jsonschema.validate(doc, load_schema("coeffs"))


def test_scan_document_validates(capsys):
    doc = _jout(capsys, ["scan", "--n", "1", "--box", "2.5:3.5:2,-0.5:0.5:2",
                         "--digits", "16"])
    jsonschema.validate(doc, load_schema("scan"))


def test_limits_document_validates(capsys):
    doc = _jout(capsys, ["limits", "--n", "12", "--t", "1", "--which", "q",
                         "--digits", "20"])
    jsonschema.validate(doc, load_schema("limits"))


def test_geometry_document_validates(capsys):
    doc = _jout(capsys, ["geometry", "--digits", "16", "--resolution", "800"])
    jsonschema.validate(doc, load_schema("geometry"))


def test_verify_document_validates(capsys):
    doc = _jout(capsys, ["verify", "--suite", "negative-control", "--digits", "30"])
    jsonschema.validate(doc, load_schema("verify"))


def test_report_document_validates(capsys, monkeypatch):
    ok = CheckResult(suite="strings", name="x", passed=True,
                     residual=mp.mpf("1e-30"), tolerance=mp.mpf("1e-20"), detail="d")
    monkeypatch.setattr(cli, "run_suites", lambda names, ctx: [ok])
    doc = _jout(capsys, ["report", "--digits", "16"])
    jsonschema.validate(doc, load_schema("report"))
    assert doc["ok"] is True


def test_error_documents_validate(capsys):
    schema = load_schema("error")
    # usage error
    doc = _jout(capsys, ["eval", "--n", "0", "--z", "0", "--digits", "16"], expect=1)
    jsonschema.validate(doc, schema)
    # singularity carries a location
    doc = _jout(capsys, ["eval", "--n", "1", "--z", "2.94583074104",
                         "--digits", "16"], expect=2)
    jsonschema.validate(doc, schema)
    assert "location" in doc["error"]

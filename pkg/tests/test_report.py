import json
import os

import numpy as np
import pytest

from src.data.models import SL2Matrix
from src.utils.report import EmptyReportError, ReportWriteError, convert_to_serializable, emit_report, render_report

RECORDS = [
    {"N": 11, "fraction": 0.1234567890123456, "barycenter_distance": 1e-17, "n_outliers": 2},
    {"N": 13, "fraction": 1.0, "barycenter_distance": 2.5, "n_outliers": 0},
]


def test_convert_to_serializable():
    assert convert_to_serializable(1 + 2j) == [1.0, 2.0]
    assert convert_to_serializable(np.float64(1 / 3)) == pytest.approx(0.333333333333)
    assert convert_to_serializable(np.int64(5)) == 5
    assert convert_to_serializable(np.bool_(True)) is True
    assert convert_to_serializable(frozenset({3, 1})) == [1, 3]
    assert convert_to_serializable(SL2Matrix.S()) == {"m11": 0, "m12": 1, "m21": -1, "m22": 0}
    assert convert_to_serializable(np.array([1.5, 2.5])) == [1.5, 2.5]


def test_json_lines():
    content = render_report(RECORDS, "json")
    lines = content.splitlines()
    assert len(lines) == 2 and content.endswith("\n")
    assert json.loads(lines[0])["fraction"] == 0.123456789012


def test_csv_columns_and_float_format():
    content = render_report(RECORDS, "csv", ["N", "fraction", "barycenter_distance", "n_outliers"])
    lines = content.split("\n")
    assert lines[0] == "N,fraction,barycenter_distance,n_outliers"
    assert lines[1] == "11,0.123456789012,1e-17,2"
    assert lines[2] == "13,1,2.5,0"


def test_empty_report_is_refused():
    with pytest.raises(EmptyReportError):
        render_report([], "json")


def test_unknown_format():
    with pytest.raises(ValueError, match="format"):
        render_report(RECORDS, "xml")


def test_emit_report_replaces_file(tmp_path):
    path = tmp_path / "report.csv"
    path.write_text("stale")
    emit_report(RECORDS, "csv", str(path), ["N", "fraction"])
    assert path.read_text().startswith("N,fraction\n")
    assert os.listdir(tmp_path) == ["report.csv"]


def test_emit_report_to_missing_directory(tmp_path):
    with pytest.raises(ReportWriteError):
        emit_report(RECORDS, "json", str(tmp_path / "missing" / "report.json"))

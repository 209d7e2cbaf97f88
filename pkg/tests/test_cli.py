import json

import pytest

from src.main import build_parser, main, parse_config
from src.utils.experiments import EXPERIMENT_CONFIG, EXPERIMENT_ORDER, get_check


def test_every_check_is_registered():
    assert [name for _, name in EXPERIMENT_ORDER] == ["torus-check", "weil-check", "catmap", "convex", "verlinde", "spin", "asymptotics"]
    for name in EXPERIMENT_CONFIG:
        assert callable(get_check(name))
    with pytest.raises(ValueError):
        get_check("nope")


def test_subcommand_defaults():
    parser = build_parser()
    assert parse_config(parser, ["weil-check"]).n_max == 64
    assert parse_config(parser, ["torus-check"]).n_min == 3
    config = parse_config(parser, ["catmap", "--matrix", "3,2,1,1", "--n-values", "11,13"])
    assert config.matrix.entries() == (3, 2, 1, 1)
    assert config.n_values == (11, 13)


@pytest.mark.parametrize(
    "argv",
    [
        ["spin", "--p", "10"],
        ["catmap", "--matrix", "1,1,1,1"],
        ["catmap", "--n-values", "11,x"],
        ["catmap", "--n-values", "4099"],
        ["torus-check", "--format", "xml"],
        ["torus-check", "--n-m", "3"],
        ["asymptotics", "--r-values", ","],
        ["asymptotics", "--r-values", "200,100"],
        ["asymptotics", "--genus", "0"],
        ["spin", "--r", "1"],
        ["spin", "--p", "4"],
        ["spin", "--genus", "0", "--r", "3"],
        ["verlinde", "--p", "2"],
        ["verlinde", "--genus", "-1"],
    ],
)
def test_usage_errors_exit_with_two(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_verlinde_prints_the_dimension(capsys):
    assert main(["verlinde", "--genus", "2", "--p", "12"]) == 0
    assert capsys.readouterr().out.strip() == "35"


def test_spin_table_report(tmp_path):
    path = tmp_path / "spin.csv"
    assert main(["spin", "--genus", "2", "--r", "3", "--format", "csv", "--output", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "genus,r,N,character_class,multiplicity,dimension"
    assert lines[1:] == ["2,3,12,chi=0,1,5", "2,3,12,chi!=0,15,2"]


def test_catmap_json_report(tmp_path):
    path = tmp_path / "catmap.json"
    assert main(["catmap", "--n-values", "11,13", "--family-size", "9", "--output", str(path)]) == 0
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert [record["N"] for record in records] == [11, 13]
    assert all(record["barycenter_defect"] < 1e-10 for record in records)


def test_small_sweeps_pass():
    assert main(["torus-check", "--n-min", "3", "--n-max", "6"]) == 0
    assert main(["weil-check", "--n-min", "2", "--n-max", "6"]) == 0


def test_unwritable_output_fails(tmp_path):
    assert main(["verlinde", "--p", "8", "--output", str(tmp_path / "missing" / "out.json")]) == 1


def test_spin_json_table(tmp_path):
    path = tmp_path / "spin.json"
    assert main(["spin", "--genus", "2", "--r", "2", "--output", str(path)]) == 0
    record = json.loads(path.read_text())
    assert record["total"] == 10 and record["partition_ok"]
    assert record["entries"] == [{"character_class": "arf=0", "multiplicity": 10, "dimension": 1}, {"character_class": "arf=1", "multiplicity": 6, "dimension": 0}]


def test_reports_do_not_depend_on_thread_count(tmp_path, monkeypatch):
    contents = []
    for threads in ("1", "3"):
        monkeypatch.setenv("ERGOLAB_THREADS", threads)
        path = tmp_path / f"convex-{threads}.csv"
        main(["convex", "--trials", "20", "--format", "csv", "--output", str(path)])
        contents.append(path.read_bytes())
    assert contents[0] == contents[1]

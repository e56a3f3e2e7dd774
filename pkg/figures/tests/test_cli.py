import json
import shutil
import subprocess
import sys

import pytest

from schwinger_figures import FROZEN_COLUMNS
from schwinger_figures.cli import main

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def write_spec(tmp_path, name="fig.json", **fields):
    path = tmp_path / name
    path.write_text(json.dumps(fields))
    return path


def test_single_spec(evolve_csv, tmp_path, capsys):
    spec = write_spec(
        tmp_path, kind="timeseries", input=str(evolve_csv), output="ts.png"
    )
    assert main(["--spec", str(spec)]) == 0
    out = capsys.readouterr().out
    assert "wrote" in out and "ts.png" in out
    assert (tmp_path / "ts.png").read_bytes().startswith(PNG_MAGIC)


def test_multiple_specs_one_call(evolve_csv, mass_sweep_csv, tmp_path):
    specs = [
        write_spec(tmp_path, "a.json", kind="comparison", input=str(evolve_csv), output="a.png"),
        write_spec(tmp_path, "b.json", kind="heatmap", input=str(mass_sweep_csv), output="b.png"),
    ]
    assert main(["--spec", str(specs[0]), "--spec", str(specs[1])]) == 0
    assert (tmp_path / "a.png").exists() and (tmp_path / "b.png").exists()


def test_relative_paths_resolve_against_spec_dir(evolve_csv, tmp_path):
    nest = tmp_path / "nest"
    nest.mkdir()
    shutil.copy(evolve_csv, nest / "run.csv")
    spec = write_spec(nest, kind="timeseries", input="run.csv", output="out/run.png")
    assert main(["--spec", str(spec)]) == 0
    assert (nest / "out" / "run.png").exists()


def test_schema_mismatch_exits_one_and_names_columns(tmp_path, capsys):
    cols = [c for c in FROZEN_COLUMNS if c not in ("negativity", "retention")]
    bad = tmp_path / "bad.csv"
    bad.write_text(",".join(cols) + "\n0,0,0,1,0,0\n")
    spec = write_spec(tmp_path, kind="timeseries", input=str(bad), output="bad.png")
    assert main(["--spec", str(spec)]) == 1
    err = capsys.readouterr().err
    assert "missing required columns: negativity, retention" in err
    assert not (tmp_path / "bad.png").exists()


def test_missing_csv_exits_one(tmp_path, capsys):
    spec = write_spec(tmp_path, kind="timeseries", input="nowhere.csv", output="x.png")
    assert main(["--spec", str(spec)]) == 1
    assert "nowhere.csv" in capsys.readouterr().err


def test_figure_data_conflict_exits_one(evolve_csv, tmp_path, capsys):
    spec = write_spec(tmp_path, kind="heatmap", input=str(evolve_csv), output="h.png")
    assert main(["--spec", str(spec)]) == 1
    assert "sweep" in capsys.readouterr().err


@pytest.mark.parametrize(
    "fields, message",
    [
        ({"kind": "scatter", "input": "a.csv", "output": "a.png"}, "unknown figure kind"),
        ({"kind": "timeseries", "input": "a.csv"}, "missing required key"),
        ({"kind": "timeseries", "input": "a.csv", "output": "a.png", "florp": 1}, "unknown spec keys"),
    ],
)
def test_invalid_specs_exit_two(tmp_path, capsys, fields, message):
    spec = write_spec(tmp_path, **fields)
    assert main(["--spec", str(spec)]) == 2
    assert message in capsys.readouterr().err


def test_malformed_json_exits_two(tmp_path, capsys):
    spec = tmp_path / "broken.json"
    spec.write_text("{not json")
    assert main(["--spec", str(spec)]) == 2
    assert "broken.json" in capsys.readouterr().err


def test_missing_spec_file_exits_two(tmp_path):
    assert main(["--spec", str(tmp_path / "absent.json")]) == 2


def test_bad_spec_stops_before_any_rendering(evolve_csv, tmp_path):
    good = write_spec(tmp_path, "good.json", kind="timeseries", input=str(evolve_csv), output="g.png")
    bad = write_spec(tmp_path, "bad.json", kind="scatter", input=str(evolve_csv), output="b.png")
    assert main(["--spec", str(good), "--spec", str(bad)]) == 2
    # specs validate up front, so the good figure is not written either
    assert not (tmp_path / "g.png").exists()


def test_module_entry_point(evolve_csv, tmp_path):
    spec = write_spec(tmp_path, kind="timeseries", input=str(evolve_csv), output="m.png")
    proc = subprocess.run(
        [sys.executable, "-m", "schwinger_figures", "--spec", str(spec)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "m.png").exists()


def test_usage_error_without_spec(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2

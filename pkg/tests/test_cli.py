import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cvqaoa.cli import main
from cvqaoa.io import (
    ConfigError,
    ResultTable,
    RunConfig,
    format_number,
    load_config,
    read_table,
    render_table,
    write_table,
)


def test_optimum_prints_values(capsys, tmp_path):
    out = tmp_path / "opt.csv"
    code = main(["optimum", "--squeeze-db", "5.3", "--antisqueeze-db", "9.0", "--a", "0", "-o", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "(0.490624, 0.981247, δ=0.037154)" in text
    row = read_table(out).rows[0]
    assert row[:3] == pytest.approx([0.490652, 0.981305, 0.037153], abs=1e-4)


def test_unknown_subcommand_and_flag(capsys):
    assert main(["nonsense"]) == 2
    assert main(["landscape", "--nope", "1"]) == 2
    assert "usage" in capsys.readouterr().err


def test_invalid_value_is_config_error(capsys):
    assert main(["histogram", "--eta", "-1"]) == 2
    assert "eta" in capsys.readouterr().err


def test_landscape_twice_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["landscape", "--grid", "21", "--samples", "1000", "--a", "1", "--seed", "7",
                     "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    table = read_table(a)
    assert len(table.rows) == 441
    assert table.config["seed"] == 7


def test_optimize_row_count(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["optimize", "--a", "2.745", "--steps", "100", "--samples", "1000", "--seed", "1",
                 "-o", str(out)]) == 0
    table = read_table(out)
    assert len(table.rows) == 100
    best = [r[table.columns.index("best_log_mean_cost")] for r in table.rows]
    assert all(b2 <= b1 for b1, b2 in zip(best, best[1:]))


def test_seed_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("CVQAOA_SEED", "42")
    out = tmp_path / "h.csv"
    assert main(["histogram", "--samples", "1000", "-o", str(out)]) == 0
    assert read_table(out).config["seed"] == 42
    assert main(["histogram", "--samples", "1000", "--seed", "3", "-o", str(out)]) == 0
    assert read_table(out).config["seed"] == 3


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text("samples_per_step = 1000\nsteps = 4\n")
    out = tmp_path / "o.csv"
    assert main(["optimize", "--config", str(cfg), "--samples", "500", "-o", str(out)]) == 0
    table = read_table(out)
    assert table.config["samples"] == 500
    assert len(table.rows) == 4


def test_load_config_errors_name_key(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text("eta = -1\n")
    with pytest.raises(ConfigError, match="eta"):
        load_config(p)
    p.write_text("colour = 3\n")
    with pytest.raises(ConfigError, match="colour"):
        load_config(p)
    p.write_text('steps = "many"\n')
    with pytest.raises(ConfigError, match="steps"):
        load_config(p)


def test_backend_defaults_to_optical(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text("a = 1.0\n")
    assert load_config(p).backend == "optical"


def test_empty_table_has_header_only(tmp_path):
    path = tmp_path / "e.csv"
    write_table(ResultTable(["x", "y"], [], "optimum", {"seed": 1}), path)
    text = path.read_text()
    assert text.splitlines()[-1] == "x,y"
    assert "# seed = 1" in text
    assert read_table(path).rows == []


def test_write_table_reports_path(tmp_path):
    with pytest.raises(RuntimeError, match="missing"):
        write_table(ResultTable(["x"], [[1.0]]), tmp_path / "missing" / "t.csv")


def test_lf_line_endings(tmp_path):
    path = tmp_path / "t.csv"
    write_table(ResultTable(["x"], [[0.5]], "optimum"), path)
    assert b"\r" not in path.read_bytes()


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(value):
    assert float(format_number(value)) == value


def test_result_table_round_trip(tmp_path):
    values = [[0.5, 1 / 3, -2.5e-300], [7, np.float64(np.pi), 1e17]]
    path = tmp_path / "r.csv"
    write_table(ResultTable(["a", "b", "c"], values, "optimum", {"seed": 5, "backend": "ideal"},
                            {"note": 1.25}), path)
    t = read_table(path)
    assert t.rows == [[0.5, 1 / 3, -2.5e-300], [7, np.pi, 1e17]]
    assert t.config == {"seed": 5, "backend": "ideal"}
    assert t.summary == {"note": 1.25}


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        ResultTable(["a", "b"], [[1.0]])


def test_result_file_is_loadable_config(tmp_path):
    out = tmp_path / "h.csv"
    assert main(["histogram", "--samples", "2000", "--a", "1.5", "-o", str(out)]) == 0
    cfg = load_config(out)
    assert cfg.a == 1.5 and cfg.samples == 2000


def test_rerun_reproduces(tmp_path):
    first, second = tmp_path / "1.csv", tmp_path / "2.csv"
    assert main(["ingest", "--windows", "300", "--seed", "9", "-o", str(first)]) == 0
    assert main(["rerun", str(first), "-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_ingest_from_file(tmp_path):
    series = tmp_path / "trace.txt"
    np.savetxt(series, np.random.default_rng(1).normal(size=1000))
    out = tmp_path / "q.csv"
    assert main(["ingest", "--input", str(series), "--dt", "1e-9", "-o", str(out)]) == 0
    assert len(read_table(out).rows) == 10


def test_stdout_output(capsys):
    assert main(["estimate-range"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("## cvqaoa result table")
    assert "0.10000000000000001,10,0.10000000000000001,10" in captured.out


def test_runtime_error_exit_code(tmp_path, capsys):
    assert main(["ingest", "--input", str(tmp_path / "absent.txt")]) == 1
    assert "error" in capsys.readouterr().err


def test_render_is_deterministic():
    t = ResultTable(["x"], [[1.0]], "optimum", {"b": 1, "a": 2})
    assert render_table(t) == render_table(ResultTable(["x"], [[1.0]], "optimum", {"a": 2, "b": 1}))


def test_runconfig_rejects_bad_backend():
    with pytest.raises(ConfigError, match="backend"):
        RunConfig(backend="quantum")

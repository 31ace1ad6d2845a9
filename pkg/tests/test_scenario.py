"""Config parsing, sweep running, CSV/plot emission and the CLI."""

import math
import os

import pytest

from fdnoma.cli import main
from fdnoma.montecarlo import McSettings
from fdnoma.outage import Node, Scheme
from fdnoma.scenario import (
    CSV_HEADER,
    ConfigError,
    SweepSpec,
    emit_csv,
    emit_plot_data,
    load_config,
    run_sweep,
)

REFERENCE = os.path.join(os.path.dirname(__file__), "..", "configs", "reference.ini")

MINIMAL = """
[geometry]
d_12 = 2.0
d_13 = 3.0
"""


def write(tmp_path, text, name="scenario.ini"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# config loading
# ---------------------------------------------------------------------------

def test_reference_config_loads():
    cfg, spec = load_config(REFERENCE)
    assert cfg.fading.link_1g.k_factor == 10.0
    assert cfg.fading.link_g2.m == 3.0
    assert cfg.noise_power == -131.0
    assert cfg.k_tr == 25
    assert spec.power_grid() == [float(p) for p in range(0, 65, 5)]
    assert spec.schemes == (Scheme.FD_NOMA, Scheme.HD_NOMA, Scheme.HD_OMA)
    assert spec.nodes == (Node.GS, Node.UAV2, Node.UAV3)


def test_minimal_config_gets_defaults(tmp_path):
    cfg, spec = load_config(write(tmp_path, MINIMAL))
    assert cfg.geometry.d_12 == 2.0 and cfg.geometry.d_13 == 3.0
    assert cfg.geometry.d_1g == 3.0
    assert cfg.r_oma == 0.2 and cfg.a_gs2 == 0.5 and cfg.beta == 0.1
    assert cfg.epsilon == 0.1 and cfg.phase_noise_power == -140.0
    assert cfg.fading.link_12.m == 3.0 and cfg.fading.link_13.m == 10.0
    assert not spec.with_mc
    assert spec.mc.num_samples == 1_000_000


def test_missing_mandatory_distance(tmp_path):
    path = write(tmp_path, "[geometry]\nd_12 = 2.0\n")
    with pytest.raises(ConfigError, match="d_13"):
        load_config(path)


def test_unknown_key_rejected(tmp_path):
    path = write(tmp_path, MINIMAL + "\n[system]\nbogus_knob = 1\n")
    with pytest.raises(ConfigError, match="bogus_knob"):
        load_config(path)


def test_unknown_section_rejected(tmp_path):
    path = write(tmp_path, MINIMAL + "\n[turbo]\nx = 1\n")
    with pytest.raises(ConfigError, match="turbo"):
        load_config(path)


def test_invariant_violation_named(tmp_path):
    path = write(tmp_path, MINIMAL + "\n[system]\na_gs2 = 1.5\n")
    with pytest.raises(ConfigError, match="a_gs2"):
        load_config(path)


def test_parse_error_carries_line_number(tmp_path):
    path = write(tmp_path, "[geometry]\nd_12 = 2.0\nthis line has no delimiter\n")
    with pytest.raises(ConfigError, match="line"):
        load_config(path)


def test_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        load_config("/nonexistent/scenario.ini")


def test_bad_number_and_bool(tmp_path):
    with pytest.raises(ConfigError, match="pt_db"):
        load_config(write(tmp_path, MINIMAL + "\n[system]\npt_db = fast\n"))
    with pytest.raises(ConfigError, match="with_mc"):
        load_config(write(tmp_path, MINIMAL + "\n[sweep]\nwith_mc = maybe\n", "b.ini"))


def test_unknown_scheme_rejected(tmp_path):
    path = write(tmp_path, MINIMAL + "\n[sweep]\nschemes = fd_noma,td_noma\n")
    with pytest.raises(ConfigError, match="td_noma"):
        load_config(path)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def single_point_spec(with_mc=False, samples=2000, seed=1234):
    return SweepSpec(
        pt_start_db=10.0,
        pt_stop_db=10.0,
        pt_step_db=5.0,
        schemes=tuple(Scheme),
        nodes=tuple(Node),
        with_mc=with_mc,
        mc=McSettings(num_samples=samples, seed=seed),
    )


def test_single_point_sweep_has_nine_sorted_rows():
    cfg, _ = load_config(REFERENCE)
    table = run_sweep(cfg, single_point_spec())
    assert len(table.rows) == 9
    keys = [(r.scheme.value, r.node.value, r.pt_db) for r in table.rows]
    assert keys == sorted(keys)
    assert all(r.outage_mc is None and r.mc_se is None for r in table.rows)


def test_sweep_mc_columns_present_iff_requested():
    cfg, _ = load_config(REFERENCE)
    table = run_sweep(cfg, single_point_spec(with_mc=True))
    assert all(r.outage_mc is not None and r.mc_se is not None for r in table.rows)


def test_sweep_deterministic():
    cfg, _ = load_config(REFERENCE)
    spec = single_point_spec(with_mc=True)
    t1 = run_sweep(cfg, spec)
    t2 = run_sweep(cfg, spec)
    assert t1 == t2


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(10.0, 0.0, 5.0, tuple(Scheme), tuple(Node), False, McSettings(seed=1))
    with pytest.raises(ValueError):
        SweepSpec(0.0, 10.0, 0.0, tuple(Scheme), tuple(Node), False, McSettings(seed=1))
    with pytest.raises(ValueError):
        SweepSpec(0.0, 10.0, 5.0, (), tuple(Node), False, McSettings(seed=1))


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def test_emit_csv_empty_table(tmp_path):
    from fdnoma.scenario import SweepTable

    out = tmp_path / "empty.csv"
    emit_csv(SweepTable(()), str(out))
    assert out.read_text(encoding="utf-8") == CSV_HEADER + "\n"


def test_emit_csv_round_trip(tmp_path):
    cfg, _ = load_config(REFERENCE)
    table = run_sweep(cfg, single_point_spec(with_mc=True))
    out = tmp_path / "table.csv"
    emit_csv(table, str(out))
    text = out.read_text(encoding="utf-8")
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 10
    assert "\r" not in text
    for row, line in zip(table.rows, lines[1:]):
        scheme, node, pt, cf, conv, mc, se = line.split(",")
        assert scheme == row.scheme.value and node == row.node.value
        assert math.isclose(float(pt), row.pt_db, rel_tol=1e-9)
        assert math.isclose(float(cf), row.outage_cf, rel_tol=1e-9, abs_tol=1e-300)
        assert conv == ("true" if row.converged else "false")
        assert math.isclose(float(mc), row.outage_mc, rel_tol=1e-9, abs_tol=1e-300)
        assert math.isclose(float(se), row.mc_se, rel_tol=1e-9, abs_tol=1e-300)


def test_emit_plot_data_blocks(tmp_path):
    cfg, _ = load_config(REFERENCE)
    spec = SweepSpec(
        pt_start_db=0.0,
        pt_stop_db=10.0,
        pt_step_db=5.0,
        schemes=(Scheme.FD_NOMA,),
        nodes=tuple(Node),
        with_mc=False,
        mc=McSettings(seed=1),
    )
    table = run_sweep(cfg, spec)
    out = tmp_path / "plot.dat"
    emit_plot_data(table, str(out))
    text = out.read_text(encoding="utf-8")
    blocks = text.strip().split("\n\n")
    assert len(blocks) == 3
    assert blocks[0].startswith("# fd_noma gs")
    assert len(blocks[0].strip().split("\n")) == 4  # header + 3 power points
    # byte-identical on re-emission
    out2 = tmp_path / "plot2.dat"
    emit_plot_data(table, str(out2))
    assert out.read_bytes() == out2.read_bytes()


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def test_cli_point(capsys):
    code = main(
        ["point", "--config", REFERENCE, "--scheme", "fd_noma", "--node", "uav3", "--pt", "20"]
    )
    out = capsys.readouterr().out.strip()
    assert code == 0
    scheme, node, pt, cf, conv, mc, se = out.split(",")
    assert (scheme, node, conv, mc, se) == ("fd_noma", "uav3", "true", "", "")
    assert math.isclose(float(cf), 0.006687861440918872, rel_tol=1e-8)


def test_cli_sweep_writes_outputs(tmp_path):
    out = tmp_path / "sweep.csv"
    plot = tmp_path / "sweep.dat"
    code = main(
        [
            "sweep", "--config", REFERENCE, "--out", str(out),
            "--plot-data", str(plot), "--mc", "--samples", "2000", "--seed", "7",
        ]
    )
    assert code == 0
    lines = out.read_text(encoding="utf-8").strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 9 * 13
    assert plot.exists()


def test_cli_end_to_end_determinism(tmp_path):
    args = lambda name: [
        "sweep", "--config", REFERENCE, "--out", str(tmp_path / name),
        "--mc", "--samples", "2000", "--seed", "99",
    ]
    assert main(args("a.csv")) == 0
    assert main(args("b.csv")) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_cli_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[geometry]\nd_12 = 2.0\n", encoding="utf-8")
    code = main(["sweep", "--config", str(bad), "--out", str(tmp_path / "x.csv")])
    assert code == 1
    assert "d_13" in capsys.readouterr().err


def test_cli_strict_nonconvergence_exit_code(tmp_path, capsys):
    scenario = tmp_path / "hard.ini"
    scenario.write_text(
        MINIMAL + "\n[system]\nr_oma = 2.2\n"
        "\n[sweep]\npt_start_db = 0\npt_stop_db = 0\npt_step_db = 5\n"
        "schemes = fd_noma\nnodes = uav3\n",
        encoding="utf-8",
    )
    out = tmp_path / "hard.csv"
    assert main(["sweep", "--config", str(scenario), "--out", str(out)]) == 0
    code = main(["sweep", "--config", str(scenario), "--out", str(out), "--strict"])
    assert code == 2
    assert "converge" in capsys.readouterr().err


def test_cli_point_invalid_scheme():
    with pytest.raises(SystemExit):
        main(["point", "--config", REFERENCE, "--scheme", "xx", "--node", "gs", "--pt", "0"])

import csv
import io
import math

import numpy as np
import pytest

from clausius import interferometer
from clausius.bath import CODATA
from clausius.cli import main
from clausius.config import ConfigError, RunConfig, load_config
from clausius.figures import run_figure, write_dataset
from clausius.verify import run_verify

CONFIGS = __import__("pathlib").Path(__file__).resolve().parents[1] / "configs"


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _read(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_defaults():
    cfg = load_config()
    assert cfg.omega == 1e12 and cfg.phi == 0 and cfg.delta == 6 and cfg.cutoff_ratio == 10
    assert cfg.interferometer().c2_sq == pytest.approx(0.5)
    assert cfg.resolved_temperature == pytest.approx(301.995, rel=1e-5)


def test_file_then_flags(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nc2_sq = 0.3\nphi = 0.25  # inline\nlog10_ratios = 9.52, 23\n")
    cfg = load_config(path, {"phi": "0.5"})
    assert cfg.c2_sq == 0.3 and cfg.phi == 0.5 and cfg.log10_ratios == (9.52, 23.0)


@pytest.mark.parametrize(
    "text, key",
    [
        ("bogus = 1\n", "bogus"),
        ("temperature = 300\nlog10_omega_over_t = 9.52\n", "temperature"),
        ("c2_sq = abc\n", "c2_sq"),
        ("omega = -1\n", "omega"),
        ("t_spacing = cubic\n", "t_spacing"),
        ("gamma0 = nan\n", "gamma0"),
    ],
)
def test_config_errors_name_the_key(tmp_path, text, key):
    path = tmp_path / "bad.cfg"
    path.write_text(text)
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.key == key
    code, _, err = _run("verify", "--config", str(path))
    assert code == 2 and key in err


@pytest.mark.parametrize("fig", ["fig3a", "fig4", "fig5"])
def test_thermo_figures_reject_pure_branches(fig, tmp_path):
    code, _, err = _run("figure", fig, "--c2_sq", "1.0", "--out", str(tmp_path / "x.csv"))
    assert code == 2 and "c2_sq" in err


def test_usage_errors():
    assert _run("figure", "fig9")[0] == 2
    assert _run("frobnicate")[0] == 2
    assert _run("figure", "fig2a", "--nonsense", "1")[0] == 2


def test_write_dataset_format(tmp_path):
    path = write_dataset(("a", "b", "flag"), [(1.0, 1 / 3, True), (math.inf, -2.5e-300, False)], tmp_path / "d.csv")
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.decode() == (
        "a,b,flag\n"
        "1.0000000000000000e+00,3.3333333333333331e-01,true\n"
        "inf,-2.5000000000000000e-300,false\n"
    )
    with pytest.raises(ValueError):
        write_dataset(("a",), [(1.0, 2.0)], tmp_path / "e.csv")


@pytest.mark.parametrize("fig", ["fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5"])
def test_figure_from_shipped_config_is_deterministic(fig, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _run("figure", fig, "--config", str(CONFIGS / f"{fig}.cfg"), "--out", str(a))[0] == 0
    assert _run("figure", fig, "--config", str(CONFIGS / f"{fig}.cfg"), "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    header, rows = _read(a)
    assert len(rows) > 0 and all(len(r) == len(header) for r in rows)


def test_fig2a_fringes_vanish_at_1e_7(tmp_path):
    cfg = load_config(CONFIGS / "fig2a.cfg", {"t_min": "1e-8", "t_max": "1e-7", "t_n": "2"})
    path = run_figure("fig2a", cfg, out=tmp_path / "f.csv")
    _, rows = _read(path)
    data = np.array([[float(v) for v in r] for r in rows])
    last = data[data[:, 0] == data[-1, 0]]
    p, pr = last[:, 1], last[:, 2]
    env = interferometer.envelope(cfg.omega, p)
    icfg = cfg.interferometer()
    rates = cfg.bath()
    nbar = interferometer.rates_of(rates).nbar
    residual = interferometer.fringe_coefficients(icfg, nbar, 0.0).sin_full
    pd = p * cfg.delta / math.sqrt(cfg.omega)
    assert np.max(np.abs(pr / env - 1 - residual * np.sin(pd))) < 1e-3


def test_fig3a_deep_cold_late_rows_violate(tmp_path):
    cfg = load_config(CONFIGS / "fig3a.cfg", {"log10_ratios": "23"})
    _, rows = _read(run_figure("fig3a", cfg, out=tmp_path / "f.csv"))
    late = [r for r in rows if float(r[0]) >= 1e-6]
    assert late and all(r[3] == "true" for r in late)
    assert rows[-1][0] == "inf"


def test_fig5_zero_temperature_limit(tmp_path):
    cfg = load_config(CONFIGS / "fig5.cfg")
    header, rows = _read(run_figure("fig5", cfg, out=tmp_path / "f.csv"))
    assert header == ["T", "W", "neg_log_scaled_W"]
    t0, w0, s0 = map(float, rows[0])
    assert t0 == 0.0
    assert w0 == pytest.approx(0.5 * CODATA.hbar * cfg.omega / 2, rel=1e-12)
    assert s0 == pytest.approx(-math.log(w0 * 1e31), rel=1e-15)
    ws = [float(r[1]) for r in rows]
    assert all(b <= a for a, b in zip(ws, ws[1:]))


def test_fig3b_grid_shape(tmp_path):
    _, rows = _read(run_figure("fig3b", RunConfig(grid_n=6), out=tmp_path / "f.csv"))
    assert len(rows) == 36
    c2 = sorted({float(r[1]) for r in rows})
    assert 0 < c2[0] and c2[-1] < 1


def test_threads_do_not_change_output(tmp_path):
    a = run_figure("fig4", RunConfig(t_n=20), out=tmp_path / "a.csv")
    b = run_figure("fig4", RunConfig(t_n=20, threads=4), out=tmp_path / "b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_verify_exits_zero_and_reports_info():
    code, out, _ = _run("verify")
    assert code == 0
    lines = [line.split("\t") for line in out.strip().splitlines()]
    status = {parts[0]: parts[1] for parts in lines}
    assert status["thermo.quadrature_dual_path_gap"] == "info"
    assert "fail" not in {s for name, s in status.items() if name != "summary"}


def test_verify_catches_a_sign_flip(monkeypatch):
    original = interferometer.density_matrix

    def flipped(cfg, nbar, eta):
        rho = original(cfg, nbar, eta)
        rho[0, 1] = -rho[0, 1]
        rho[1, 0] = -rho[1, 0]  # vanishes at phi = 0; verify also probes phi != 0
        return rho

    monkeypatch.setattr(interferometer, "density_matrix", flipped)
    code, checks = run_verify(RunConfig())
    assert code == 1
    assert {c.name: c.status for c in checks}["interferometer.t0_endpoint"] == "fail"


@pytest.mark.parametrize("dim", ["2", "4"])
def test_evolve_subcommand(dim, tmp_path):
    code, out, _ = _run("evolve", "--dim", dim, "--t_n", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("t,trace_drift,min_eigenvalue,p0")
    last = [float(v) for v in lines[-1].split(",")]
    assert sum(last[3 : 3 + int(dim)]) == pytest.approx(1.0, abs=1e-12)
    path = tmp_path / "evo.csv"
    assert _run("evolve", "--dim", dim, "--t_n", "5", "--out", str(path))[0] == 0
    assert path.read_text().count("\n") == 7

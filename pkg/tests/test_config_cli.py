import csv
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dissipative_spins import cli
from dissipative_spins.config import ConfigError, SweepConfig, parse_param_file, parse_sweep_config
from dissipative_spins.degeneracy import crossings_from_json
from dissipative_spins.models import DissipatorSpec, ModelSpec
from dissipative_spins.steadystate import NumericalError
from dissipative_spins.sweeps import WORKERS_ENV

SWEEP = """\
# small Ising sweep
[model]
n_sites = 3
model = ising
alpha3 = 1.0

[dissipator]
kind = local
rate = 1.0

[sweep]
start = 0.5
stop = 1.5
points = 11
gammas = 1e-2, 1e-3
delta_b = 1e-4

[output]
outputs = jx, jz, spectrum, infidelity, crossings, cnorms
"""

PARAMS = """\
[lambda]
omega1 = 0.1
omega2 = 0.1
delta_re = 20
omega_re = 2
gamma_eg = 4
gamma_er = 2
delta_gr = 1
eta1 = 0.1
nu = 1

[raman]
omega_a = 0.5
omega_b = 0.5
eta_b = 0.1
delta_e = 10

[hubbard]
t0 = 0.02
t1 = 0.01
u00 = 1.0
u11 = 1.1
u01 = 0.9
"""


def write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_parse_sweep_config():
    cfg = parse_sweep_config(SWEEP)
    assert cfg.model == ModelSpec(3, "ising", alpha3=1.0)
    assert cfg.dissipator == DissipatorSpec.local([1.0] * 3)
    assert cfg.gammas == (1e-2, 1e-3)
    assert cfg.step == pytest.approx(0.1)
    assert np.allclose(cfg.grid, np.linspace(0.5, 1.5, 11))
    assert cfg.sector is None


@pytest.mark.parametrize("old,new,line", [
    ("points = 11", "points = eleven", 14),
    ("alpha3 = 1.0", "alpha3 = 1.0\nbogus = 2", 6),
    ("[output]", "[outputs]", 18),
    ("delta_b = 1e-4", "delta_b = 0.5", 16),
    ("points = 11", "points = 1", 14),
    ("outputs = jx", "outputs = jy, jx", 19),
    ("rate = 1.0", "rates = 1, 2", 9),
])
def test_config_errors_carry_line_numbers(old, new, line):
    with pytest.raises(ConfigError) as err:
        parse_sweep_config(SWEEP.replace(old, new), "run.ini")
    assert err.value.line == line
    assert str(err.value).startswith(f"run.ini:{line}:")


def test_sector_needs_collective_periodic():
    text = SWEEP + "\n[sector]\nT = 1\nR = 1\n"
    with pytest.raises(ConfigError, match="collective"):
        parse_sweep_config(text)
    text = text.replace("kind = local", "kind = collective").replace("n_sites = 3",
                                                                      "n_sites = 4\nboundary = periodic")
    cfg = parse_sweep_config(text)
    assert cfg.sector == (1.0, 1.0)


def test_missing_required():
    with pytest.raises(ConfigError, match="points"):
        parse_sweep_config(SWEEP.replace("points = 11\n", ""))
    with pytest.raises(ConfigError, match="infidelity output needs delta_b"):
        parse_sweep_config(SWEEP.replace("delta_b = 1e-4\n", ""))
    with pytest.raises(ConfigError):
        parse_sweep_config("not an ini file")


@given(st.floats(-3, 3), st.floats(0.01, 3), st.integers(2, 5000), st.floats(0, 2))
def test_delta_b_must_be_below_step(start, width, points, frac):
    kw = dict(model=ModelSpec(2), dissipator=DissipatorSpec.uniform(1.0, 2), start=start,
              stop=start + width, points=points)
    step = width / (points - 1)
    delta = frac * step
    if 0 < delta < step:
        assert SweepConfig(delta_b=delta, **kw).step == pytest.approx(step)
    else:
        with pytest.raises(ValueError):
            SweepConfig(delta_b=delta, **kw)


def test_sweep_outputs(tmp_path, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "1")
    out = tmp_path / "out"
    assert cli.main(["sweep", str(write(tmp_path, SWEEP)), "-o", str(out)]) == 0
    rows = read_csv(out / "sweep.csv")
    assert rows[0] == ["b_x", "gamma", "jx", "jz", "kernel_dim", "residual"]
    assert len(rows) == 1 + 2 * 11
    assert [float(r[1]) for r in rows[1:12]] == [1e-2] * 11  # gamma-major
    for r in rows[1:]:
        assert abs(float(r[2])) <= 3 and abs(float(r[3])) <= 3
        assert int(r[4]) == 1 and float(r[5]) < 1e-8
    inf = read_csv(out / "infidelity.csv")
    assert inf[0] == ["b_x", "gamma", "I_deltaB"] and len(inf) == 1 + 2 * 11
    spec = read_csv(out / "spectrum.csv")
    assert spec[0] == ["b_x", "branch", "eigenvalue"] and len(spec) == 1 + 11 * 8
    reports = crossings_from_json((out / "crossings.json").read_text())
    assert all(r.c_norm is not None for r in reports if r.kind == "crossing")


def test_output_is_byte_identical_and_worker_independent(tmp_path, monkeypatch):
    cfg = write(tmp_path, SWEEP.replace("outputs = jx, jz, spectrum, infidelity, crossings, cnorms",
                                        "outputs = jx, jz, infidelity"))
    blobs = []
    for workers, name in (("1", "a"), ("1", "b"), ("2", "c")):
        monkeypatch.setenv(WORKERS_ENV, workers)
        assert cli.main(["sweep", str(cfg), "-o", str(tmp_path / name)]) == 0
        blobs.append([(tmp_path / name / f).read_bytes() for f in ("sweep.csv", "infidelity.csv")])
    assert blobs[0] == blobs[1] == blobs[2]


def test_csv_precision(tmp_path, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "1")
    cfg = parse_sweep_config(SWEEP.replace("outputs = jx, jz, spectrum, infidelity, crossings, cnorms",
                                           "outputs = jx"))
    out = tmp_path / "o"
    import dataclasses
    cli.run_sweep(dataclasses.replace(cfg, directory=out), workers=1)
    row = read_csv(out / "sweep.csv")[2]
    assert float(row[0]) == np.linspace(0.5, 1.5, 11)[1]  # 17 digits round-trip exactly


def test_spectrum_and_crossings_subcommands(tmp_path):
    cfg = write(tmp_path, SWEEP)
    assert cli.main(["spectrum", str(cfg), "-o", str(tmp_path / "s")]) == 0
    assert (tmp_path / "s" / "spectrum.csv").exists()
    assert cli.main(["crossings", str(cfg), "-o", str(tmp_path / "c")]) == 0
    json.loads((tmp_path / "c" / "crossings.json").read_text())


def test_exit_code_config_error(tmp_path, capsys):
    assert cli.main(["sweep", str(tmp_path / "missing.ini")]) == 1
    bad = write(tmp_path, SWEEP.replace("points = 11", "points = 1"))
    assert cli.main(["sweep", str(bad)]) == 1
    assert "config error" in capsys.readouterr().err


def test_exit_code_bad_worker_env(tmp_path, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "0")
    assert cli.main(["sweep", str(write(tmp_path, SWEEP)), "-o", str(tmp_path)]) == 1


def test_exit_code_numerical_failure(tmp_path, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "1")

    def broken(L, *a, **k):
        raise NumericalError("no kernel")

    monkeypatch.setattr("dissipative_spins.sweeps.steady_state", broken)
    assert cli.main(["sweep", str(write(tmp_path, SWEEP)), "-o", str(tmp_path)]) == 2


def test_params_and_check(tmp_path, capsys):
    path = write(tmp_path, PARAMS, "atoms.ini")
    out = tmp_path / "eff.json"
    assert cli.main(["params", str(path), "-o", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["alpha1"] == pytest.approx(-4 * 0.02 * 0.01 / 0.9)
    assert d["b_x"] == pytest.approx(2 * 0.5 * 0.5 * 0.1 / 10)
    assert cli.main(["check", str(path)]) == 0
    text = capsys.readouterr().out
    for name in ("cond1", "cond2", "cond3", "cond4", "saturation"):
        assert name in text


def test_param_file_variants():
    pf = parse_param_file(PARAMS.replace("eta1 = 0.1", "k1 = 0.2\nmass = 2.0"))
    assert pf.lam.eta1 == pytest.approx(0.1)
    assert pf.margin == 0.1
    pf = parse_param_file(PARAMS + "\n[validity]\nmargin = 0.05\n")
    assert pf.margin == 0.05
    with pytest.raises(ConfigError):
        parse_param_file(PARAMS.replace("nu = 1", "nu = -1"))
    with pytest.raises(ConfigError):
        parse_param_file(PARAMS.replace("[raman]", "[laser]"))
    with pytest.raises(ConfigError, match="lambda"):
        parse_param_file("[raman]\nomega_a = 1\n")

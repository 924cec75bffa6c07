import math
from dataclasses import replace

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from mibc.harness import (BERCurve, ConfigError, EfficiencyCurve, ScenarioConfig,
                          build_channel, config_from_dict, dump_config, emit_csv, load_config,
                          make_plan, read_csv, run_ber_vs_conductivity,
                          run_ber_vs_estimation_power, run_ber_vs_snr, run_point,
                          wilson_halfwidth)
from mibc.harness import cli, engine, sweeps
from mibc.harness.engine import Channel, TrialResult, _block_rng, _complex_normal, run_block

ROOT = __import__("pathlib").Path(__file__).resolve().parents[1]


def small(cfg=None, **kw):
    cfg = cfg or ScenarioConfig()
    return replace(cfg, trials=kw.pop("trials", 200), block_size=kw.pop("block_size", 64), **kw)


# configuration --------------------------------------------------------------

def test_reference_file_matches_defaults():
    assert load_config(ROOT / "configs" / "reference.yaml") == ScenarioConfig()


def test_derived_quantities():
    cfg = ScenarioConfig()
    assert cfg.noise_std == pytest.approx(1e-7)
    assert cfg.noise_variance == pytest.approx(1e-14)
    assert cfg.omega == pytest.approx(2 * math.pi * 13.56e6)
    assert len(cfg.transmit_coils()) == 4
    spec, pose = cfg.sensor_coil()
    assert pose.position == pytest.approx((0.5, 0.0, -0.3))
    assert spec.capacitance == pytest.approx(1.378e-9, rel=1e-3)


@pytest.mark.parametrize("data,match", [
    ({"bogus": 1}, "unknown"),
    ({"sensor": {"coil": {"colour": "red"}}}, "unknown"),
    ({"sweeps": {"snr_db": ["a"]}}, "numbers"),
    ({"sweeps": {"snr_db": 3}}, "list"),
    ({"trials": 1.5}, "integer"),
    ({"trials": True}, "integer"),
    ({"trials": 0}, ">= 1"),
    ({"frequency": None}, "null"),
    ({"frequency": "fast"}, "number"),
    ({"sensor": {"coil": {"capacitance": "x"}}}, "number"),
    ({"data_power": 5.0}, "exceed"),
    ({"sensor": {"depth": 0.04}}, "below"),
    ({"sensor": {"coil": {"radius": -1.0}}}, "radius"),
    ({"sensor": {"orientation": [0.0, 0.0, 0.0]}}, "orientation"),
    ({"soil": {"conductivity": -1.0}}, "conductivity"),
    ({"modulation_order": 6}, "power of two"),
    ({"rng_seed": -1}, "seed"),
    ({"reader": {"transmit_positions": [[0.0, 0.0, 0.0]]}}, "pairs"),
    ({"sensor": 3}, "mapping"),
])
def test_config_rejects(data, match):
    with pytest.raises(ConfigError, match=match):
        config_from_dict(data)


def test_config_nulls_where_allowed():
    cfg = config_from_dict({"sensor": {"coil": {"capacitance": None}},
                            "em_link": {"frequency": None}})
    assert cfg.sensor.coil.capacitance is None
    assert cfg.em_link.frequency is None


def test_yaml_exponent_floats_and_round_trip(tmp_path):
    p = tmp_path / "s.yaml"
    p.write_text("frequency: 6.78e6\nsoil:\n  conductivity: 2e-2\n")
    cfg = load_config(p)
    assert cfg.frequency == 6.78e6 and cfg.soil.conductivity == 0.02
    out = tmp_path / "back.yaml"
    dump_config(cfg, out)
    assert load_config(out) == cfg


@pytest.mark.parametrize("text,match", [("trials: [1\n", "YAML"), ("- 1\n- 2\n", "mapping")])
def test_bad_yaml(tmp_path, text, match):
    p = tmp_path / "bad.yaml"
    p.write_text(text)
    with pytest.raises(ConfigError, match=match):
        load_config(p)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="nope.yaml"):
        load_config(tmp_path / "nope.yaml")


# curves and CSV ---------------------------------------------------------------

def test_wilson_halfwidth():
    assert wilson_halfwidth(0, 100) > 0
    assert wilson_halfwidth(50, 100) == pytest.approx(0.09617, abs=1e-5)
    assert wilson_halfwidth(5, 100) < wilson_halfwidth(50, 100)


@settings(max_examples=100)
@given(st.integers(1, 10 ** 7), st.data())
def test_wilson_interval_inside_unit_range(n, data):
    k = data.draw(st.integers(0, n))
    p = k / n
    h = wilson_halfwidth(k, n)
    centre = (p + 1.96 ** 2 / (2 * n)) / (1 + 1.96 ** 2 / n)
    assert 0 <= centre - h - 1e-12 and centre + h <= 1 + 1e-12
    assert h > 0


def test_curve_invariants():
    with pytest.raises(ValueError):
        BERCurve("snr_db", "dB", [0, 1], [0.1], [1], [10], 10, 0)
    with pytest.raises(ValueError):
        BERCurve("snr_db", "dB", [0], [1.5], [15], [10], 10, 0)
    with pytest.raises(ValueError):
        TrialResult(np.zeros(1), np.zeros(1), np.zeros(1), 0, 5, 4)


def _curve(label, seed=7):
    rng = np.random.default_rng(seed)
    bits = np.full(5, 2000)
    err = rng.integers(0, 300, 5)
    skipped = np.array([False, False, True, False, False])
    ber = np.where(skipped, np.nan, err / bits)
    err[skipped] = 0
    return BERCurve("snr_db", "dB", np.linspace(-1.1, 3.3, 5) / 3, ber, err, bits, 1000,
                    2 ** 64 - 1, label, skipped)


def test_csv_round_trip_exact(tmp_path):
    curves = [_curve("depth=0.15m"), _curve("depth=0.3m", 8)]
    (path,) = emit_csv(curves, tmp_path / "o.csv")
    header, cols = read_csv(path)
    assert header == ["curve", "snr_db", "ber", "ci_halfwidth", "trials", "seed", "status"]
    np.testing.assert_array_equal(cols["snr_db"], np.concatenate([c.grid for c in curves]))
    np.testing.assert_array_equal(cols["ber"], np.concatenate([c.ber for c in curves]))
    np.testing.assert_array_equal(cols["ci_halfwidth"],
                                  np.concatenate([c.ci_halfwidth for c in curves]))
    assert cols["seed"][0] == np.uint64(2 ** 64 - 1)
    assert cols["status"][2] == "skipped" and cols["status"][0] == "ok"
    assert path.read_bytes().endswith(b"\n") and b"\r" not in path.read_bytes()


def test_csv_single_split_and_empty(tmp_path):
    (one,) = emit_csv(_curve("a"), tmp_path / "one.csv")
    assert read_csv(one)[0][0] == "snr_db"
    paths = emit_csv([_curve("x=1"), _curve("y")], tmp_path / "s.csv", long_format=False)
    assert [p.name for p in paths] == ["s_x_1.csv", "s_y.csv"]
    (empty,) = emit_csv([], tmp_path / "e.csv")
    assert empty.read_text().count("\n") == 1
    eff = EfficiencyCurve("conductivity", "S/m", [0.1], [0.5], "MI")
    with pytest.raises(ValueError):
        emit_csv([_curve("a"), eff], tmp_path / "mixed.csv")


def test_csv_io_error_names_path(tmp_path):
    bad = tmp_path / "missing" / "o.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv([_curve("a")], bad)


# engine -----------------------------------------------------------------------

@pytest.fixture(scope="module")
def channel():
    return build_channel(ScenarioConfig())


def test_noise_calibration():
    rng = _block_rng(1, (0,), 0)
    z = _complex_normal(rng, 1e-7, 1_000_000)
    assert np.var(z) == pytest.approx(1e-14, rel=0.02)
    assert np.var(z.real) == pytest.approx(0.5e-14, rel=0.02)
    assert abs(np.mean(z.real * z.imag)) < 0.02e-14


def test_channel_matches_matrix(channel):
    z = channel.z
    s = z.sensor_index
    np.testing.assert_allclose(channel.m_ts * 1j * channel.omega, z.matrix[:4, s])
    assert channel.m_sr * 1j * channel.omega == z.matrix[z.receiver_index, s]


def test_make_plan_modes(channel):
    cfg = ScenarioConfig()
    with pytest.raises(ValueError):
        make_plan(cfg, channel)
    with pytest.raises(ValueError):
        make_plan(cfg, channel, target_snr_db=10.0, data_power=1e-3)
    assert make_plan(cfg, channel, target_snr_db=10.0).target_snr == pytest.approx(10.0)


def test_target_mode_hits_target_with_clean_estimates(channel):
    cfg = ScenarioConfig()
    plan = make_plan(cfg, channel, target_snr_db=12.0, estimation_power=1e9)
    res = run_block(plan, _block_rng(3, (0,), 0), 500)
    np.testing.assert_allclose(res.achieved_snr, 10 ** 1.2, rtol=1e-3)


def test_point_independent_of_thread_count(channel):
    plan = make_plan(ScenarioConfig(), channel, target_snr_db=4.0)
    a = run_point(plan, 1000, 99, (5,), block_size=64)
    with engine.executor_for(4) as ex:
        b = run_point(plan, 1000, 99, (5,), block_size=64, executor=ex)
    assert (a.bit_errors, a.bits) == (b.bit_errors, b.bits)
    np.testing.assert_array_equal(a.m_hat_sr, b.m_hat_sr)
    c = run_point(plan, 1000, 100, (5,), block_size=64)
    assert not np.array_equal(a.m_hat_sr, c.m_hat_sr)


def test_binomial_consistency(channel):
    # errors over independent seeds scatter like Binomial(bits, p)
    plan = make_plan(ScenarioConfig(), channel, target_snr_db=4.0, estimation_power=1e9)
    runs = [run_point(plan, 2000, s, (0,), block_size=500) for s in range(40)]
    errs = np.array([r.bit_errors for r in runs])
    bits = runs[0].bits
    p = errs.sum() / (bits * len(runs))
    z = (errs - bits * p) / math.sqrt(bits * p * (1 - p))
    assert np.mean(np.abs(z) <= 4) >= 0.99
    assert np.var(errs) == pytest.approx(bits * p * (1 - p), rel=0.6)


def test_skipped_point_is_flagged(monkeypatch):
    cfg = small()
    real = build_channel(cfg)
    dead = Channel(real.z, np.zeros_like(real.m_ts), 0j, real.symbols, real.omega)
    monkeypatch.setattr(sweeps, "build_channel", lambda c: dead)
    curve = run_ber_vs_conductivity(cfg, sigma_grid=[0.01, 0.02])
    assert curve.skipped.all()
    assert np.isnan(curve.ber).all()
    assert len(curve.messages) == 2


def test_ber_snr_sweep_shape():
    curves = run_ber_vs_snr(small(), snr_grid_db=[0.0, 20.0], depths=[0.15, 0.3])
    assert [c.label for c in curves] == ["depth=0.15m", "depth=0.3m"]
    for c in curves:
        assert c.ber[0] > c.ber[1]
        assert not c.skipped.any()


def test_estimation_power_converges_to_perfect_csi():
    cfg = small(trials=4000, block_size=1000)
    ph = [1e-5, 1.0, 1e9]
    (curve,) = run_ber_vs_estimation_power(cfg, ph_grid=ph, sigma_set=[0.01],
                                           target_snr_db=10.0)
    lo, mid, perfect = curve.ber
    tol = 4 * math.sqrt(perfect * (1 - perfect) / curve.bits[2]) * 2
    assert abs(mid - perfect) <= tol
    assert lo > perfect + tol


# command line ------------------------------------------------------------------

@pytest.fixture()
def fast_config(tmp_path):
    p = tmp_path / "fast.yaml"
    p.write_text(
        "trials: 50\nblock_size: 25\n"
        "sweeps:\n  snr_db: [0, 10]\n  depths: [0.3]\n  conductivities: [0.01, 0.1]\n"
        "  estimation_powers: [1.0e-3, 1.0]\n  estimation_conductivities: [0.01]\n"
        "  efficiency_conductivities: [0.001, 0.01]\n")
    return p


@pytest.mark.parametrize("command", list(cli.COMMANDS))
def test_cli_commands(command, fast_config, tmp_path, capsys):
    out = tmp_path / f"{command}.csv"
    rc = cli.main([command, "--config", str(fast_config), "--out", str(out), "--trials", "40",
                   "--seed", "17", "--threads", "2"])
    assert rc == 0
    header, cols = read_csv(out)
    assert header[0] == "curve"
    assert len(cols["status"]) >= 2
    assert str(out) in capsys.readouterr().out
    if command != "efficiency":
        assert set(cols["trials"]) == {40} and set(cols["seed"]) == {17}


def test_cli_bad_config(tmp_path, capsys):
    p = tmp_path / "c.yaml"
    p.write_text("trails: 10\n")
    rc = cli.main(["ber-snr", "--config", str(p), "--out", str(tmp_path / "o.csv")])
    assert rc != 0
    assert "trails" in capsys.readouterr().err


def test_cli_unwritable_output(fast_config, tmp_path, capsys):
    rc = cli.main(["efficiency", "--config", str(fast_config),
                   "--out", str(tmp_path / "nodir" / "o.csv")])
    assert rc == 1
    assert "nodir" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["ber-snr", "--out", "x.csv", "--seed", "-1"],
                                  ["ber-snr", "--out", "x.csv", "--trials", "0"],
                                  ["ber-snr"], ["launch"]])
def test_cli_argument_errors(argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code != 0


def test_detuned_sensor_config():
    cfg = load_config(ROOT / "configs" / "detuned_sensor.yaml")
    assert cfg == replace(ScenarioConfig(), sensor=replace(
        ScenarioConfig().sensor, coil=replace(ScenarioConfig().sensor.coil,
                                              capacitance=81.51e-12)))
    spec, _ = cfg.sensor_coil()
    from mibc.coils import impedance
    assert abs(impedance(spec, cfg.omega).imag) > 1e3 * spec.resistance

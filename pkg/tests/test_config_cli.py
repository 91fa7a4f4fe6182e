import csv
import io
import math

import pytest

from fiberpairs import ConfigError, SweepSpec, load_run_config, sweep_grid
from fiberpairs.cli import main

HNMSF_PEAK_POWER = 0.2 / (66.7 * 0.025)  # gamma*P0*L = 0.2

CONFIG_TEMPLATE = """\
[fiber]
label = HNMSF
gamma = 66.7
raman_gain = {raman_gain}
dispersion = 8.65
length = 0.025
zero_dispersion_wavelength = 1564.1

[pump]
peak_power = {peak_power!r}
wavelength = 1552.75
repetition_rate = 1e6
pulse_duration = 50e-12

[signal]
detune = 0.3e12
bandwidth = 50e9
window = 50e-12
efficiency = 0.2
dark_prob = 1e-4

[idler]
detune = 0.3e12
bandwidth = 50e9
window = 50e-12
efficiency = 0.2
dark_prob = 1e-4

[env]
temperature = {temperature}

[sim]
n_pulses = {n_pulses}
seed = {seed}
accidental_lag = 1
"""


def write_config(tmp_path, name="run.ini", raman_gain=0.4305212326493659,
                 peak_power=HNMSF_PEAK_POWER, temperature=300.0,
                 n_pulses=200_000, seed=42):
    path = tmp_path / name
    path.write_text(CONFIG_TEMPLATE.format(
        raman_gain=raman_gain, peak_power=peak_power,
        temperature=temperature, n_pulses=n_pulses, seed=seed,
    ))
    return path


def parse_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestLoadRunConfig:
    def test_valid_config(self, tmp_path):
        cfg = load_run_config(write_config(tmp_path))
        assert cfg.fiber.label == "HNMSF"
        assert cfg.fiber.gamma == 66.7
        assert cfg.pump.peak_power == pytest.approx(HNMSF_PEAK_POWER)
        assert cfg.signal.side == "signal" and cfg.idler.side == "idler"
        assert cfg.env.temperature == 300.0
        assert cfg.sim is not None and cfg.sim.seed == 42

    def test_sim_section_optional(self, tmp_path):
        path = write_config(tmp_path)
        text = path.read_text()
        path.write_text(text[: text.index("[sim]")])
        assert load_run_config(path).sim is None

    def test_missing_section_named(self, tmp_path):
        path = write_config(tmp_path)
        path.write_text(path.read_text().replace("[env]", "[environment]"))
        with pytest.raises(ConfigError, match=r"\[env\]"):
            load_run_config(path)

    def test_missing_key_named(self, tmp_path):
        path = write_config(tmp_path)
        path.write_text(path.read_text().replace("peak_power", "power"))
        with pytest.raises(ConfigError, match="peak_power"):
            load_run_config(path)

    def test_bad_number_named(self, tmp_path):
        path = write_config(tmp_path)
        path.write_text(path.read_text().replace("gamma = 66.7", "gamma = sixtysix"))
        with pytest.raises(ConfigError, match="gamma"):
            load_run_config(path)

    def test_invariant_violation_named(self, tmp_path):
        path = write_config(tmp_path)
        path.write_text(path.read_text().replace("efficiency = 0.2", "efficiency = 1.5", 1))
        with pytest.raises(ConfigError, match="efficiency"):
            load_run_config(path)


class TestSweepSpec:
    def test_grid_shapes(self):
        lin = sweep_grid(SweepSpec("detune", 1.0, 2.0, 5))
        assert len(lin) == 5 and lin[0] == 1.0 and lin[-1] == 2.0
        log = sweep_grid(SweepSpec("pair_rate", 0.001, 0.1, 3, scale="log"))
        assert log[1] == pytest.approx(0.01, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ConfigError, match="variable"):
            SweepSpec("power", 0.0, 1.0, 5)
        with pytest.raises(ConfigError, match="start"):
            SweepSpec("detune", 2.0, 1.0, 5)
        with pytest.raises(ConfigError, match="steps"):
            SweepSpec("detune", 1.0, 2.0, 1)
        with pytest.raises(ConfigError, match="log"):
            SweepSpec("peak_power", 0.0, 1.0, 5, scale="log")


class TestModelCommand:
    def test_report_values(self, tmp_path, capsys):
        assert main(["model", "--config", str(write_config(tmp_path))]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert float(row["hsps_efficiency"]) == pytest.approx(0.6037, abs=1e-3)
        assert float(row["pair_noise_ratio"]) == pytest.approx(1.5233, abs=2e-3)
        # physical pair rate carries the phase-matching factor (< 0.1)
        pair = float(row["pair_rate"])
        assert 0.09 < pair < 0.1
        assert float(row["multiphoton_prob"]) == pytest.approx(
            0.5 * pair * pair * math.exp(-pair), rel=1e-12
        )
        assert float(row["car_prediction"]) > 1.0
        assert float(row["pump_photons"]) > 1e6

    def test_cooled_prediction(self, tmp_path, capsys):
        assert main(["model", "--config", str(write_config(tmp_path, temperature=173.0))]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert float(row["hsps_efficiency"]) == pytest.approx(0.7285, abs=2e-3)

    def test_zero_pump_undefined_fields(self, tmp_path, capsys):
        assert main(["model", "--config", str(write_config(tmp_path, peak_power=0.0))]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert float(row["pair_rate"]) == 0.0
        assert float(row["stokes_rate"]) == 0.0
        assert row["hsps_efficiency"] == ""
        assert row["pair_noise_ratio"] == ""
        assert row["car_prediction"] == ""

    def test_per_second_columns_exact(self, tmp_path, capsys):
        assert main(["model", "--config", str(write_config(tmp_path)), "--per-second"]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        for field in ("pair_rate", "stokes_rate", "antistokes_rate"):
            assert float(row[field + "_hz"]) == float(row[field]) * 1e6

    def test_bad_config_exit_code(self, tmp_path, capsys):
        path = write_config(tmp_path)
        path.write_text(path.read_text().replace("efficiency = 0.2", "efficiency = 1.5", 1))
        assert main(["model", "--config", str(path)]) == 1
        assert "efficiency" in capsys.readouterr().err

    def test_missing_file_exit_code(self, tmp_path, capsys):
        assert main(["model", "--config", str(tmp_path / "nope.ini")]) == 3


class TestSimulateCommand:
    def test_writes_counts_csv_and_tallies(self, tmp_path, capsys):
        out = tmp_path / "counts.csv"
        rc = main(["simulate", "--config", str(write_config(tmp_path)), "--out", str(out)])
        assert rc == 0
        [row] = parse_csv(out.read_text())
        assert set(row) == {"pulse_count", "n_s", "n_i", "n_co", "n_ac"}
        assert int(row["pulse_count"]) == 200_000
        assert float(row["n_co"]) >= float(row["n_ac"])
        assert "std_err" in capsys.readouterr().err

    def test_deterministic_output_bytes(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--config", str(cfg), "--out", str(out1)])
        main(["simulate", "--config", str(cfg), "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_flag_overrides(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--config", str(cfg), "--out", str(out1), "--seed", "7"])
        main(["simulate", "--config", str(cfg), "--out", str(out2)])
        assert out1.read_bytes() != out2.read_bytes()

    def test_requires_sim_section(self, tmp_path, capsys):
        path = write_config(tmp_path)
        text = path.read_text()
        path.write_text(text[: text.index("[sim]")])
        assert main(["simulate", "--config", str(path)]) == 1
        assert "[sim]" in capsys.readouterr().err

    def test_unwritable_output_exit_code(self, tmp_path, capsys):
        cfg = write_config(tmp_path)
        rc = main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "no/dir/x.csv")])
        assert rc == 3


class TestEstimateCommand:
    def test_simulate_then_estimate_recovers_rates(self, tmp_path, capsys):
        # end-to-end statistical round trip at 4 sigma
        from fiberpairs import DetectorPair, generation_rates

        cfg_path = write_config(tmp_path, n_pulses=400_000)
        counts_csv = tmp_path / "counts.csv"
        assert main(["simulate", "--config", str(cfg_path), "--out", str(counts_csv)]) == 0
        assert main(["estimate", str(counts_csv), "--config", str(cfg_path)]) == 0
        [row] = parse_csv(capsys.readouterr().out)

        cfg = load_run_config(cfg_path)
        rates = generation_rates(cfg.fiber, cfg.pump, cfg.signal, cfg.idler, cfg.env)
        [counts_row] = parse_csv(counts_csv.read_text())
        n = int(counts_row["pulse_count"])
        es, ei = cfg.signal.efficiency, cfg.idler.efficiency
        p_co, p_ac = float(counts_row["n_co"]), float(counts_row["n_ac"])
        sigma_delta = math.hypot(
            math.sqrt(p_co * (1 - p_co) / n), math.sqrt(p_ac * (1 - p_ac) / n)
        ) / (es * ei)
        assert abs(float(row["pair_rate"]) - rates.pair_rate) <= 4.5 * sigma_delta

    def test_per_second_columns(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path)
        counts_csv = tmp_path / "counts.csv"
        main(["simulate", "--config", str(cfg_path), "--out", str(counts_csv)])
        assert main(["estimate", str(counts_csv), "--config", str(cfg_path), "--per-second"]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert float(row["pair_rate_hz"]) == float(row["pair_rate"]) * 1e6

    def test_inconsistent_row_reported_others_processed(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path)
        bad_csv = tmp_path / "mixed.csv"
        bad_csv.write_text(
            "pulse_count,n_s,n_i,n_co,n_ac\n"
            "1000,0.0141,0.0121,0.0020706,0.0001706\n"
            "1000,0.0141,0.0121,0.0001,0.0002\n"  # accidentals exceed coincidences
            "1000,0.0141,0.0121,0.0020706,0.0001706\n"
        )
        assert main(["estimate", str(bad_csv), "--config", str(cfg_path)]) == 2
        captured = capsys.readouterr()
        rows = parse_csv(captured.out)
        assert len(rows) == 2
        assert {r["row"] for r in rows} == {"2", "4"}
        assert "row 3" in captured.err and "accidentals exceed" in captured.err
        assert float(rows[0]["pair_rate"]) == pytest.approx(0.05, rel=1e-9)
        assert float(rows[0]["car"]) == pytest.approx(12.137, abs=1e-3)

    def test_labeled_rows_pass_through(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path)
        labeled = tmp_path / "labeled.csv"
        labeled.write_text(
            "label,pulse_count,n_s,n_i,n_co,n_ac\n"
            "dsf_run1,1000,0.0141,0.0121,0.0020706,0.0001706\n"
        )
        assert main(["estimate", str(labeled), "--config", str(cfg_path)]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert row["label"] == "dsf_run1"

    def test_lenient_flag_clamps(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path)
        neg = tmp_path / "neg.csv"
        # signal singles too low for the coincidence-implied pair rate
        neg.write_text(
            "pulse_count,n_s,n_i,n_co,n_ac\n"
            "1000,0.009,0.0121,0.0020706,0.0001706\n"
        )
        assert main(["estimate", str(neg), "--config", str(cfg_path)]) == 2
        capsys.readouterr()
        with pytest.warns(UserWarning):
            assert main(["estimate", str(neg), "--config", str(cfg_path), "--lenient"]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert float(row["stokes_rate"]) == 0.0

    def test_empty_body_rejected(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path)
        empty = tmp_path / "empty.csv"
        empty.write_text("pulse_count,n_s,n_i,n_co,n_ac\n")
        assert main(["estimate", str(empty), "--config", str(cfg_path)]) == 1
        assert "no data rows" in capsys.readouterr().err

    def test_bad_header_rejected(self, tmp_path, capsys):
        cfg_path = write_config(tmp_path)
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b,c\n1,2,3\n")
        assert main(["estimate", str(bad), "--config", str(cfg_path)]) == 1


class TestFitCommand:
    def test_quadratic(self, tmp_path, capsys):
        series = tmp_path / "series.csv"
        rows = ["x,y"] + [f"{x},{5.315 * x + 6.485 * x * x}" for x in
                          (0.2, 0.4, 0.6, 0.8, 1.0, 1.2)]
        series.write_text("\n".join(rows) + "\n")
        assert main(["fit", str(series), "--model", "quadratic"]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert row["model"] == "quadratic"
        assert float(row["s1"]) == pytest.approx(5.315, rel=1e-9)
        assert float(row["s2"]) == pytest.approx(6.485, rel=1e-9)

    def test_sqrt_single_point(self, tmp_path, capsys):
        series = tmp_path / "series.csv"
        series.write_text("x,y\n0.04,1.0\n")
        assert main(["fit", str(series), "--model", "sqrt"]) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert float(row["coeff"]) == pytest.approx(5.0, rel=1e-12)

    def test_rank_error_exit_code(self, tmp_path, capsys):
        series = tmp_path / "series.csv"
        series.write_text("x,y\n1.0,2.0\n")
        assert main(["fit", str(series), "--model", "quadratic"]) == 1
        assert "distinct positive x" in capsys.readouterr().err


class TestSweepCommand:
    def test_steps_rows(self, tmp_path, capsys):
        args = ["sweep", "--config", str(write_config(tmp_path)),
                "--variable", "detune", "--start", "0.1e12", "--stop", "0.3e12", "--steps", "2"]
        assert main(args) == 0
        rows = parse_csv(capsys.readouterr().out)
        assert len(rows) == 2
        assert float(rows[-1]["detune"]) == pytest.approx(0.3e12)

    def test_detune_sweep_density_bound(self, tmp_path, capsys):
        args = ["sweep", "--config", str(write_config(tmp_path)),
                "--variable", "detune", "--start", "0.05e12", "--stop", "0.3e12", "--steps", "6"]
        assert main(args) == 0
        rows = parse_csv(capsys.readouterr().out)
        for row in rows:
            assert 0.0 <= float(row["xi_c"]) <= 0.04 * (1 + 1e-9)

    def test_pair_rate_sweep_matches_efficiency_anchor(self, tmp_path, capsys):
        args = ["sweep", "--config", str(write_config(tmp_path)),
                "--variable", "pair_rate", "--start", "0.001", "--stop", "0.1", "--steps", "12"]
        assert main(args) == 0
        rows = parse_csv(capsys.readouterr().out)
        efficiencies = [float(r["hsps_efficiency"]) for r in rows]
        assert efficiencies == sorted(efficiencies)
        assert efficiencies[-1] == pytest.approx(0.6037, abs=1e-3)

    def test_temperature_sweep_monotone_ratio(self, tmp_path, capsys):
        args = ["sweep", "--config", str(write_config(tmp_path)),
                "--variable", "temperature", "--start", "173", "--stop", "300", "--steps", "5"]
        assert main(args) == 0
        rows = parse_csv(capsys.readouterr().out)
        ratios = [float(r["pair_noise_ratio"]) for r in rows]
        assert ratios == sorted(ratios, reverse=True)
        assert ratios[0] == pytest.approx(2.689, abs=5e-3)

    def test_deterministic_bytes(self, tmp_path):
        cfg = write_config(tmp_path)
        out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        args = ["sweep", "--config", str(cfg), "--variable", "peak_power",
                "--start", "0.01", "--stop", "0.12", "--steps", "6"]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestCalibrateCommand:
    def test_from_efficiency(self, tmp_path, capsys):
        args = ["calibrate", "--config", str(write_config(tmp_path, raman_gain=0.0)),
                "--efficiency", "0.6037", "--pair-rate", "0.1"]
        assert main(args) == 0
        [row] = parse_csv(capsys.readouterr().out)
        assert float(row["raman_gain"]) == pytest.approx(0.43052, abs=1e-4)
        assert float(row["sqrt_law_coefficient"]) == pytest.approx(4.8172, abs=1e-3)

    def test_requires_exactly_one_observation(self, tmp_path, capsys):
        cfg = str(write_config(tmp_path))
        assert main(["calibrate", "--config", cfg]) == 1
        assert main(["calibrate", "--config", cfg, "--coefficient", "4.8",
                     "--efficiency", "0.6", "--pair-rate", "0.1"]) == 1
        assert main(["calibrate", "--config", cfg, "--efficiency", "0.6"]) == 1

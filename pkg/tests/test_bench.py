"""
Config files, the benchmark runner, the CLI and result plots.
"""

from pathlib import Path

import pandas as pd
import pytest

from src.bench import runner
from src.bench.cli import build_parser, main
from src.bench.config import BenchConfig, echo_config, load_config, parse_config
from src.bench.plots import build_figure, read_result, render_plots
from src.bench.runner import EXIT_CONFIG, EXIT_FAILURE, EXIT_OK, EXIT_THRESHOLD, RESOLVED_CONFIG, run
from src.core.exceptions import ConfigParseError, ExperimentError, FailureThresholdError, ResultFormatError, UnknownKeyError

SMALL = """
experiment = comm
rows = 3
cols = 3
rf_chains = 2
sim_layers = 2
budget = 40
restarts = 2

[comm]
trials = 2
snr_grid_db = -10, 0, 10, 20
architectures = digital, milac, hybrid
"""


@pytest.fixture(autouse=True)
def _work_in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def _config(text: str, out: Path, **updates) -> BenchConfig:
    return parse_config(text).model_copy(update={"output_dir": out, **updates})


# ═══════════════════════════════════════════════════════════════
# CONFIG FILES
# ═══════════════════════════════════════════════════════════════

class TestParseConfig:

    def test_defaults(self):
        config = parse_config("experiment = comm\n")
        assert (config.rows * config.cols, config.rf_chains, config.seed) == (81, 4, 1)
        assert config.comm.trials == 200
        assert config.sense.codebook_size == 64
        assert config.complexity.m_values == (16, 32, 64, 128, 256)
        assert config.feed_spacing == 0.5

    def test_empty_file_is_valid(self):
        assert parse_config("") == BenchConfig()

    def test_sections_and_comments(self):
        config = parse_config(SMALL + "\n[sense]\ntrue_aod_deg = -12.5  # off broadside\n")
        assert config.comm.architectures == ("digital", "milac", "hybrid")
        assert config.comm.snr_grid_db == (-10.0, 0.0, 10.0, 20.0)
        assert config.sense.true_aod_deg == -12.5
        assert config.restarts == 2

    def test_negative_trials_cite_line(self):
        with pytest.raises(ConfigParseError) as info:
            parse_config("experiment = comm\n[comm]\ntrials = -3\n")
        assert info.value.line == 3
        assert "line 3" in str(info.value)

    def test_type_mismatch_cites_line(self):
        with pytest.raises(ConfigParseError) as info:
            parse_config("# header\nrows = nine\n")
        assert info.value.line == 2

    def test_unknown_key_is_named(self):
        with pytest.raises(UnknownKeyError) as info:
            parse_config("experiment = sense\nantenas = 4\n")
        assert info.value.key == "antenas"
        assert info.value.line == 2

    def test_section_key_outside_section_is_unknown(self):
        with pytest.raises(UnknownKeyError):
            parse_config("trials = 10\n")

    def test_unknown_section(self):
        with pytest.raises(ConfigParseError):
            parse_config("[plots]\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigParseError) as info:
            parse_config("seed = 1\nseed = 2\n")
        assert info.value.line == 2

    def test_missing_equals(self):
        with pytest.raises(ConfigParseError):
            parse_config("seed 4\n")

    def test_unknown_architecture(self):
        with pytest.raises(ConfigParseError):
            parse_config("[comm]\narchitectures = digital, quantum\n")

    def test_unsorted_snr_grid(self):
        with pytest.raises(ConfigParseError):
            parse_config("[sense]\nsnr_grid_db = 10, 0\n")

    def test_target_outside_sector(self):
        with pytest.raises(ConfigParseError):
            parse_config("[sense]\ntrue_aod_deg = 70\n")

    def test_echo_round_trip(self):
        config = parse_config(SMALL + "\n[complexity]\nm_values = 4, 8\nasymmetric = false\n")
        assert parse_config(echo_config(config)) == config

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ConfigParseError):
            load_config(tmp_path / "missing.cfg")


class TestScenarios:

    def test_layout_in_wavelengths(self):
        layout = parse_config("wavelength = 0.02\nelement_spacing = 0.5\n").layout()
        assert layout.element_spacing == pytest.approx(0.01)
        assert layout.carrier.wavelength == 0.02

    def test_comm_scenario(self):
        scenario = parse_config(SMALL).comm_scenario()
        assert scenario.frontend.M == 9
        assert [spec.label for spec in scenario.specs] == ["digital", "milac", "hybrid"]
        assert scenario.trials == 2

    @pytest.mark.parametrize("channel", ["los", "rician", "near_field"])
    def test_channel_models(self, channel):
        model = parse_config(f"[comm]\nchannel = {channel}\n").channel_model()
        assert model.tag == channel

    def test_sense_scenario_converts_angles(self):
        scenario = parse_config("rows = 3\ncols = 3\n[sense]\ntrue_aod_deg = 30\n").sense_scenario()
        assert scenario.true_aod.azimuth == pytest.approx(0.5235987755982988)
        assert scenario.grid_resolution == pytest.approx(0.05 * 3.141592653589793 / 180)


# ═══════════════════════════════════════════════════════════════
# RUNNER
# ═══════════════════════════════════════════════════════════════

class TestRun:

    def test_complexity_run(self, tmp_path):
        out = tmp_path / "out"
        assert run(_config("experiment = complexity\n", out)) == EXIT_OK
        frame = pd.read_csv(out / "complexity.csv")
        full = frame[frame["arch"] == "bdris_full"]
        assert full["M"].tolist() == [16, 32, 64, 128, 256]
        assert full["count"].tolist() == [(2 * m) * (2 * m + 1) // 2 for m in full["M"]]
        assert (out / "profiles.csv").exists()
        assert parse_config((out / RESOLVED_CONFIG).read_text()) == _config("experiment = complexity\n", out)

    def test_status_lines_name_written_files(self, tmp_path, capsys):
        assert run(_config("experiment = complexity\n", tmp_path / "out")) == EXIT_OK
        printed = capsys.readouterr().out
        assert f"Wrote complexity.csv and {RESOLVED_CONFIG}" in printed
        assert "complexity results written to" in printed

    def test_reruns_are_byte_identical(self, tmp_path):
        for name in ("a", "b"):
            assert run(_config(SMALL, tmp_path / name)) == EXIT_OK
        assert (tmp_path / "a" / "comm.csv").read_bytes() == (tmp_path / "b" / "comm.csv").read_bytes()

    def test_comm_digital_equals_milac(self, tmp_path):
        assert run(_config(SMALL, tmp_path)) == EXIT_OK
        frame = pd.read_csv(tmp_path / "comm.csv")
        digital = frame[frame["arch"] == "digital"]["mean_se_bps_hz"].tolist()
        assert digital == frame[frame["arch"] == "milac"]["mean_se_bps_hz"].tolist()

    def test_unwritable_output_is_config_error(self, tmp_path):
        blocker = tmp_path / "file.txt"
        blocker.write_text("not a directory")
        assert run(_config("experiment = complexity\n", blocker)) == EXIT_CONFIG

    def test_failure_threshold_exit(self, tmp_path, monkeypatch):
        def aborted(scenario):
            raise FailureThresholdError(3, 10)

        monkeypatch.setattr(runner, "run_comm_experiment", aborted)
        assert run(_config(SMALL, tmp_path / "out")) == EXIT_THRESHOLD
        assert not (tmp_path / "out" / "comm.csv").exists()

    def test_other_errors_exit_one(self, tmp_path, monkeypatch):
        def broken(scenario):
            raise ExperimentError("injected")

        monkeypatch.setattr(runner, "run_comm_experiment", broken)
        assert run(_config(SMALL, tmp_path)) == EXIT_FAILURE


class TestCli:

    def test_parser_rejects_unknown_experiment(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["weather"])

    def test_complexity_with_plot(self, tmp_path):
        out = tmp_path / "results"
        assert main(["complexity", "--out", str(out), "--plot"]) == EXIT_OK
        assert (out / "complexity.csv").exists()
        assert (out / "complexity.svg").read_text().lstrip().startswith("<?xml")

    def test_config_file_and_seed_override(self, tmp_path):
        config_file = tmp_path / "small.cfg"
        config_file.write_text(SMALL)
        out = tmp_path / "results"
        assert main(["comm", "--config", str(config_file), "--out", str(out), "--seed", "5"]) == EXIT_OK
        resolved = parse_config((out / RESOLVED_CONFIG).read_text())
        assert resolved.seed == 5
        assert resolved.comm.trials == 2

    def test_invalid_config_file_exits_two(self, tmp_path):
        config_file = tmp_path / "bad.cfg"
        config_file.write_text("[comm]\ntrials = -3\n")
        assert main(["comm", "--config", str(config_file)]) == EXIT_CONFIG

    def test_negative_seed_exits_two(self):
        assert main(["complexity", "--seed", "-1"]) == EXIT_CONFIG


# ═══════════════════════════════════════════════════════════════
# PLOTS
# ═══════════════════════════════════════════════════════════════

class TestPlots:

    @pytest.fixture
    def complexity_csv(self, tmp_path):
        run(_config("experiment = complexity\n", tmp_path))
        return tmp_path / "complexity.csv"

    def test_complexity_plot_has_one_line_per_architecture(self, complexity_csv):
        kind, frame = read_result(complexity_csv)
        figure = build_figure(kind, frame)
        assert kind == "complexity"
        assert len(figure.axes[0].get_lines()) == frame["arch"].nunique()

    def test_sense_plot_has_rmse_and_crb_per_architecture(self, tmp_path):
        frame = pd.DataFrame({
            "arch": ["milac", "milac", "sim", "sim"],
            "snr_db": [0.0, 10.0, 0.0, 10.0],
            "rmse_deg": [2.0, 0.7, 3.0, 1.1],
            "crb_deg": [1.5, 0.5, 2.0, 0.8],
            "trials": [10, 10, 10, 10],
        })
        path = tmp_path / "sense.csv"
        frame.to_csv(path, index=False)
        kind, loaded = read_result(path)
        labels = [line.get_label() for line in build_figure(kind, loaded).axes[0].get_lines()]
        assert labels == ["milac RMSE", "milac CRB", "sim RMSE", "sim CRB"]

    def test_render_is_byte_stable(self, complexity_csv, tmp_path):
        first = render_plots([complexity_csv], tmp_path / "a")
        second = render_plots([complexity_csv], tmp_path / "b")
        assert first[0].read_bytes() == second[0].read_bytes()

    def test_missing_column_is_named(self, tmp_path):
        path = tmp_path / "complexity.csv"
        path.write_text("arch,M,N,K,L\nhybrid,16,0,4,0\n")
        with pytest.raises(ResultFormatError) as info:
            render_plots([path])
        assert info.value.column == "count"

"""
Benchmark Runner
Runs one case study from a resolved config and writes its outputs.
"""

from __future__ import annotations

from pathlib import Path

from src.bench.config import BenchConfig, echo_config
from src.bench.plots import render_plots
from src.core.exceptions import ConfigurationError, FailureThresholdError, OutputError, WaveBenchError
from src.core.logger import error_message, get_logger, run_banner, success_message, system_message, warning_message
from src.evaluation.comm import run_comm_experiment
from src.evaluation.complexity import complexity_sweep, profiles_frame
from src.evaluation.results import ExperimentResult
from src.evaluation.sensing import run_sensing_experiment

logger = get_logger(__name__)

# ═══════════════════════════════════════════════════════════════
# EXIT CODES
# ═══════════════════════════════════════════════════════════════
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_THRESHOLD = 3

RESOLVED_CONFIG = "resolved_config.cfg"


def _prepare_output(output_dir: Path) -> Path:
    """Create the output directory; raise OutputError if it is not usable."""
    output_dir = Path(output_dir)
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"Output directory {output_dir} is not writable", str(exc)) from exc
    if not output_dir.is_dir():
        raise OutputError(f"Output path {output_dir} is not a directory")
    return output_dir


def _execute(config: BenchConfig) -> ExperimentResult:
    if config.experiment == "comm":
        return run_comm_experiment(config.comm_scenario())
    if config.experiment == "sense":
        scenario = config.sense_scenario()
        specs = config.specs(scenario.frontend, config.sense.architectures)
        return run_sensing_experiment(scenario, specs)
    return complexity_sweep(
        config.complexity.architectures,
        config.complexity.m_values,
        rf_chains=config.rf_chains,
        sim_layers=config.sim_layers,
        asymmetric=config.complexity.asymmetric,
    )


def run(config: BenchConfig) -> int:
    """
    Run the configured experiment and write its CSV, config echo and plot.

    Outputs are written only after every trial has completed.

    Returns:
        0 on success, 2 for configuration/output problems, 3 when the
        failure threshold is exceeded, 1 for any other benchmark error
    """
    try:
        output_dir = _prepare_output(config.output_dir)
        run_banner(config.experiment, config.seed)
        logger.info(f"Running '{config.experiment}' (seed {config.seed}) into {output_dir}")
        result = _execute(config)

        csv_path = result.write_csv(output_dir / f"{result.name}.csv")
        if config.experiment == "complexity":
            profiles_frame().to_csv(output_dir / "profiles.csv", index=False, lineterminator="\n")
        (output_dir / RESOLVED_CONFIG).write_text(echo_config(config), encoding="utf-8")
        system_message(f"Wrote {csv_path.name} and {RESOLVED_CONFIG}")
        if result.failed_trials:
            warning_message(f"{result.failed_trials} trial(s) excluded from the averages")
        if config.plot:
            render_plots([csv_path])

    except FailureThresholdError as exc:
        error_message(str(exc))
        return EXIT_THRESHOLD
    except (ConfigurationError, OutputError) as exc:
        error_message(str(exc))
        return EXIT_CONFIG
    except OSError as exc:
        error_message(f"Cannot write results: {exc}")
        return EXIT_CONFIG
    except WaveBenchError as exc:
        logger.debug("Benchmark failed", exc_info=True)
        error_message(str(exc))
        return EXIT_FAILURE

    success_message(f"{config.experiment} results written to {output_dir}")
    return EXIT_OK

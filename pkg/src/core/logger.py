"""
WaveBench Logging
Rich console output for run status, plain-text file log for post-mortems.
"""

from __future__ import annotations

import logging
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.theme import Theme

# ═══════════════════════════════════════════════════════════════
# CONSOLE
# ═══════════════════════════════════════════════════════════════
BENCH_THEME = Theme({
    "logging.level.info": "cyan",
    "logging.level.warning": "yellow",
    "ok": "green bold",
    "fail": "red bold",
    "caution": "yellow",
    "banner": "blue bold",
    "system": "magenta",
})

console = Console(theme=BENCH_THEME)

FILE_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"

# Libraries that log per figure or per font lookup
_CHATTY = ("matplotlib", "PIL", "numexpr")


def _console_handler(level: int) -> logging.Handler:
    handler = RichHandler(
        console=console,
        level=level,
        show_path=False,
        rich_tracebacks=True,
        markup=False,
    )
    handler.setFormatter(logging.Formatter("%(message)s"))
    return handler


def _file_handler(path: Path) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path, mode="a", encoding="utf-8")
    # The file keeps DEBUG records regardless of the console level
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    return handler


def setup_logging(
    level: str = "INFO",
    log_file: Path | None = None,
    enable_file_logging: bool = True,
) -> None:
    """
    Install the console handler and, optionally, the file handler on the root logger.

    Args:
        level: Console level name; unknown names fall back to INFO
        log_file: Log file path; defaults to WAVEBENCH_LOG_FILE
        enable_file_logging: Set False to log to the console only
    """
    from .config import settings

    console_level = logging.getLevelName(level.upper())
    if not isinstance(console_level, int):
        console_level = logging.INFO

    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(_console_handler(console_level))
    if enable_file_logging:
        path = Path(log_file or settings.log_file)
        try:
            root.addHandler(_file_handler(path))
        except OSError as exc:
            console.print(f"[caution]File logging disabled: {escape(str(exc))}[/caution]")
    root.setLevel(logging.DEBUG if enable_file_logging else console_level)

    for name in _CHATTY:
        logging.getLogger(name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """Module logger; call with __name__."""
    return logging.getLogger(name)


# ═══════════════════════════════════════════════════════════════
# RUN STATUS
# ═══════════════════════════════════════════════════════════════

def run_banner(experiment: str, seed: int) -> None:
    """Horizontal rule that opens a run in the console."""
    console.rule(f"[banner]{experiment}[/banner] seed={seed}")


def system_message(message: str) -> None:
    console.print(f"[system]⚙️  {escape(message)}[/system]")


def success_message(message: str) -> None:
    console.print(f"[ok]✅ {escape(message)}[/ok]")


def error_message(message: str) -> None:
    console.print(f"[fail]❌ {escape(message)}[/fail]")


def warning_message(message: str) -> None:
    console.print(f"[caution]⚠️  {escape(message)}[/caution]")

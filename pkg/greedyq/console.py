"""Shared Rich console and logging configuration."""
import logging

from rich.console import Console
from rich.logging import RichHandler
from rich.theme import Theme

custom_theme = Theme({
    "info": "cyan",
    "warning": "yellow",
    "error": "bold red",
    "success": "bold green",
    "value": "bold magenta",
})

# stdout carries summaries, stderr carries logs and errors
console = Console(theme=custom_theme)
err_console = Console(theme=custom_theme, stderr=True)


def setup_logging(level: str | int = "WARNING") -> None:
    """Route the root logger through a RichHandler on stderr."""
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, show_path=False, rich_tracebacks=True)],
        force=True,
    )

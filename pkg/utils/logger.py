import logging
import sys

ROOT_LOGGER = "bigoh"


def get_logger(name: str) -> logging.Logger:
    root = logging.getLogger(ROOT_LOGGER)
    if not root.handlers:
        # stderr only: stdout carries command results
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(
            logging.Formatter(
                "[%(asctime)s] %(levelname)s %(name)s: %(message)s",
                datefmt="%Y-%m-%d %H:%M:%S",
            )
        )
        root.addHandler(handler)
        root.setLevel(logging.WARNING)
        root.propagate = False
    return root.getChild(name)


def set_level(level: int | str) -> None:
    """Set the level for every logger in the package namespace."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    get_logger("logger")
    logging.getLogger(ROOT_LOGGER).setLevel(level)

"""Logging utilities for the orbitree library.

The library only hands out loggers; it never installs handlers or formatters.
Applications (and the ``orbitree`` command) configure logging themselves.
"""

import logging

# Add a NullHandler to prevent "No handler found" warnings
logging.getLogger("hother.orbitree").addHandler(logging.NullHandler())


def get_logger(name: str | None = None) -> logging.Logger:
    """Get a standard library logger instance.

    Args:
        name: Logger name. If None, uses the calling module's name

    Returns:
        A standard library logger

    Example:
        ```python
        import logging
        logging.basicConfig(level=logging.INFO)

        from hother.orbitree.utils.logging import get_logger
        logger = get_logger(__name__)
        logger.info("Tree extended", extra={"depth": 3, "green": 2})
        ```
    """
    if name is None:
        import inspect

        frame = inspect.currentframe()
        name = frame.f_back.f_globals.get("__name__", "orbitree") if frame and frame.f_back else "orbitree"

    return logging.getLogger(name)

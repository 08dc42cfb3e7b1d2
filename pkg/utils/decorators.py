"""
Reusable decorators for commands and pipeline stages
"""

import logging
import time
from functools import wraps
from typing import Callable

logger = logging.getLogger("wexlattice.decorators")


def log_command_usage(func: Callable):
    """
    Decorator to log command usage

    Usage:
        @log_command_usage
        def cmd_lattice(input_path, ...):
            ...
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        shown = {k: v for k, v in kwargs.items() if v is not None}
        logger.info(f"Command '{func.__name__}' invoked with {shown}")
        return func(*args, **kwargs)

    return wrapper


def log_stage(name: str):
    """
    Decorator to log the elapsed time of a pipeline stage

    Args:
        name: Stage name shown in the log line

    Usage:
        @log_stage("enumeration")
        def enumerate_stage(...):
            ...
    """

    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed = time.perf_counter() - start
                logger.info(f"Stage '{name}' finished in {elapsed:.2f}s")

        return wrapper

    return decorator

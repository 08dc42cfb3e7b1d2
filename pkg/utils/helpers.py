import json
import logging
import shutil
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Iterable, List, Sequence, TypeVar

from utils.constants import DOT_EMPTY_LABEL, JSON_INDENT
from utils.exceptions import OutputError

logger = logging.getLogger("wexlattice.helpers")

T = TypeVar("T")
R = TypeVar("R")


def format_dimension_vector(dims: Sequence[int]) -> str:
    """
    Format a dimension vector for display

    Args:
        dims: Dimensions per vertex (e.g., (1, 1, 0))

    Returns:
        Compact string (e.g., '110'), or comma-separated if any entry exceeds 9
    """
    if any(d > 9 for d in dims):
        return ",".join(str(d) for d in dims)
    return "".join(str(d) for d in dims)


def format_support(labels: Sequence[str]) -> str:
    """
    Format the coordinate support of a node as a node label

    Args:
        labels: Coordinate labels in the support

    Returns:
        Labels joined by commas, or '0' for the zero sub-bimodule
    """
    if not labels:
        return DOT_EMPTY_LABEL
    return ", ".join(labels)


def pluralize(count: int, noun: str) -> str:
    return f"{count} {noun}{'s' if count != 1 else ''}"


def to_json(data: Any) -> str:
    """
    Serialize to deterministic JSON text

    Keys are sorted and the trailing newline is fixed, so identical inputs
    produce byte-identical files.
    """
    return json.dumps(data, indent=JSON_INDENT, sort_keys=True, ensure_ascii=False) + "\n"


def atomic_write_text(path: Path, text: str, validate_json: bool = False, backup: bool = False):
    """
    Write a file atomically through a temporary sibling

    Args:
        path: Destination
        text: File contents
        validate_json: Re-read the temporary file as JSON before replacing
        backup: Copy an existing destination to '<name>.bak' first

    Raises:
        OutputError: If the directory cannot be created or the write fails
        json.JSONDecodeError: If validate_json is set and the text is not JSON
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error(f"❌ Cannot create directory for {path}: {e}")
        raise OutputError(f"Cannot create directory for {path}: {e.strerror or e}", str(path)) from e

    if backup and path.exists():
        backup_file = path.with_suffix(path.suffix + ".bak")
        try:
            shutil.copy2(path, backup_file)
            logger.debug(f"Created backup: {backup_file}")
        except OSError as e:
            logger.warning(f"Could not create backup: {e}")

    temp_file = path.with_suffix(path.suffix + ".tmp")
    try:
        with open(temp_file, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)

        if validate_json:
            with open(temp_file, "r", encoding="utf-8") as f:
                json.load(f)

        temp_file.replace(path)
        logger.debug(f"Wrote {path} atomically")
    except PermissionError as e:
        _discard(temp_file)
        logger.error(f"❌ Permission denied writing {path}")
        raise OutputError(f"Permission denied writing {path}", str(path)) from e
    except OSError as e:
        _discard(temp_file)
        logger.error(f"❌ OS error writing {path}: {e}")
        raise OutputError(f"Cannot write {path}: {e.strerror or e}", str(path)) from e
    except Exception:
        _discard(temp_file)
        raise


def _discard(temp_file: Path):
    try:
        temp_file.unlink(missing_ok=True)
    except OSError as e:
        logger.warning(f"Could not remove {temp_file}: {e}")


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Map func over items, optionally on a thread pool

    Results come back in input order regardless of the worker count.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))

"""
Input validation and sanitization functions
"""

from typing import Any, Optional, Tuple

from sympy import isprime

from utils.constants import (
    ERROR_BAD_ORIENTATION,
    ERROR_NOT_PRIME,
    ORIENTATION_LEFT,
    ORIENTATION_RIGHT,
    SUPPORTED_PRIMES,
)


def sanitize_name(text: str) -> str:
    """
    Sanitize an object name from a category file

    Args:
        text: Raw name

    Returns:
        Name with surrounding whitespace removed and only printable
        characters kept
    """
    if not text:
        return ""
    return "".join(c for c in str(text).strip() if c.isprintable())


def validate_prime(p: Any) -> Tuple[bool, Optional[str]]:
    """
    Validate a field characteristic

    Args:
        p: Candidate prime

    Returns:
        Tuple of (is_valid, error_message)
    """
    if isinstance(p, bool) or not isinstance(p, int):
        return False, f"{ERROR_NOT_PRIME} Got {p!r}."

    if not isprime(p) or p not in SUPPORTED_PRIMES:
        return False, f"{ERROR_NOT_PRIME} Got {p}."

    return True, None


def validate_orientation(n: int, orientation: Optional[str]) -> Tuple[bool, Optional[str], Optional[str]]:
    """
    Validate and normalize a type-A orientation string

    Args:
        n: Number of vertices
        orientation: One 'R' (k -> k+1) or 'L' (k+1 -> k) per arrow;
            empty means all 'R'

    Returns:
        Tuple of (is_valid, error_message, normalized_orientation)
    """
    if n < 1:
        return False, f"Type A needs at least one vertex (got n={n}).", None

    if not orientation:
        return True, None, ORIENTATION_RIGHT * (n - 1)

    normalized = orientation.strip().upper()
    if len(normalized) != n - 1 or set(normalized) - {ORIENTATION_LEFT, ORIENTATION_RIGHT}:
        return False, f"{ERROR_BAD_ORIENTATION} Got {orientation!r} for n={n}.", None

    return True, None, normalized


def validate_matrix_shape(matrix: Any, rows: int, cols: int, where: str) -> Tuple[bool, Optional[str]]:
    """
    Validate that a nested list is a rows x cols integer matrix

    Empty matrices may be given as [] whatever their nominal shape.
    """
    if rows == 0 or cols == 0:
        if matrix is None or (isinstance(matrix, list) and all(row == [] for row in matrix)):
            return True, None

    if not isinstance(matrix, list) or len(matrix) != rows:
        return False, f"{where}: expected {rows} rows."

    for row in matrix:
        if not isinstance(row, list) or len(row) != cols:
            return False, f"{where}: expected {cols} columns in every row."
        if any(isinstance(x, bool) or not isinstance(x, int) for x in row):
            return False, f"{where}: entries must be integers."

    return True, None


def validate_category_payload(payload: Any) -> Tuple[bool, Optional[str]]:
    """
    Validate the structure of a CategoryFile JSON payload

    Only shapes and types are checked here; algebraic properties (bricks,
    pairwise non-isomorphic) are checked when the category is built.

    Args:
        payload: Parsed JSON

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not isinstance(payload, dict):
        return False, "Category file must contain a JSON object."

    for key in ("field", "quiver", "indecomposables"):
        if key not in payload:
            return False, f"Category file is missing '{key}'."

    is_valid, error = validate_prime(payload["field"])
    if not is_valid:
        return False, error

    quiver = payload["quiver"]
    if not isinstance(quiver, dict) or "vertices" not in quiver or "arrows" not in quiver:
        return False, "'quiver' must have 'vertices' and 'arrows'."

    vertices = quiver["vertices"]
    if isinstance(vertices, bool) or not isinstance(vertices, int) or vertices < 1:
        return False, "'quiver.vertices' must be a positive integer n (vertices are 1..n)."

    arrow_ids = set()
    for arrow in quiver["arrows"]:
        if not isinstance(arrow, dict) or {"id", "source", "target"} - set(arrow):
            return False, "Every arrow needs 'id', 'source' and 'target'."
        if arrow["id"] in arrow_ids:
            return False, f"Duplicate arrow id {arrow['id']!r}."
        arrow_ids.add(arrow["id"])
        for end in (arrow["source"], arrow["target"]):
            if isinstance(end, bool) or not isinstance(end, int) or not 1 <= end <= vertices:
                return False, f"Arrow {arrow['id']!r} has an endpoint outside 1..{vertices}."

    indecs = payload["indecomposables"]
    if not isinstance(indecs, list) or not indecs:
        return False, "'indecomposables' must be a non-empty list."

    names = set()
    for entry in indecs:
        if not isinstance(entry, dict) or {"name", "dim", "matrices"} - set(entry):
            return False, "Every indecomposable needs 'name', 'dim' and 'matrices'."

        name = sanitize_name(entry["name"])
        if not name:
            return False, "Indecomposable names cannot be empty."
        if name in names:
            return False, f"Duplicate indecomposable name {name!r}."
        names.add(name)

        dims = entry["dim"]
        if not isinstance(dims, list) or len(dims) != vertices:
            return False, f"{name}: 'dim' must list one dimension per vertex."
        if any(isinstance(d, bool) or not isinstance(d, int) or d < 0 for d in dims):
            return False, f"{name}: dimensions must be non-negative integers."

        matrices = entry["matrices"]
        if not isinstance(matrices, dict) or set(matrices) != arrow_ids:
            return False, f"{name}: 'matrices' must give one matrix per arrow id."

        for arrow in quiver["arrows"]:
            rows, cols = dims[arrow["target"] - 1], dims[arrow["source"] - 1]
            is_valid, error = validate_matrix_shape(matrices[arrow["id"]], rows, cols, f"{name}.{arrow['id']}")
            if not is_valid:
                return False, error

    return True, None

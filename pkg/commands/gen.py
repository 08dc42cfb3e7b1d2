import logging
from pathlib import Path
from typing import Optional

from utils.category_io import CategoryFile, save_category, type_a_category_file
from utils.decorators import log_command_usage
from utils.exceptions import ValidationError
from utils.validators import validate_prime

logger = logging.getLogger("wexlattice.commands.gen")


@log_command_usage
def cmd_gen(n: int, orientation: Optional[str], prime: int, out_path: Path) -> CategoryFile:
    """
    Write the interval category of A_n as a category file

    Args:
        n: Number of vertices
        orientation: 'R'/'L' per arrow; defaults to all 'R'
        prime: Field characteristic
        out_path: Destination file

    Raises:
        ValidationError: On a bad prime or orientation
    """
    is_valid, error = validate_prime(prime)
    if not is_valid:
        raise ValidationError(error)

    category = type_a_category_file(n, orientation, prime)
    save_category(out_path, category)
    logger.info(f"Generated A{n} ({category.metadata['orientation'] or '-'}) with {len(category.indecs)} indecomposables")
    return category

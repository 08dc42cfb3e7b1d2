"""
CategoryFile loading and saving

A category file lists a quiver, a prime and a complete set of pairwise
non-isomorphic indecomposable representations. See docs/category-schema.md.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from algebra.quiver import Arrow, Quiver, Representation, type_a_category
from utils.constants import CATEGORY_SCHEMA_VERSION
from utils.exceptions import ValidationError
from utils.helpers import atomic_write_text, to_json
from utils.validators import sanitize_name, validate_category_payload, validate_orientation

logger = logging.getLogger("wexlattice.category_io")


@dataclass
class CategoryFile:
    p: int
    quiver: Quiver
    indecs: List[Representation]
    metadata: Dict[str, Any] = field(default_factory=dict)
    payload: Optional[Dict[str, Any]] = None

    def over_field(self, p: int) -> "CategoryFile":
        """The same file read over another prime (entries reduced mod p)"""
        payload = dict(self.payload or category_to_payload(self))
        payload["field"] = p
        return category_from_payload(payload)

    def summary(self) -> Dict[str, Any]:
        return {
            "field": self.p,
            "vertices": self.quiver.n,
            "arrows": [[a.id, a.source, a.target] for a in self.quiver.arrows],
            "indecomposables": [X.name for X in self.indecs],
            "metadata": self.metadata,
        }


def category_from_payload(payload: Dict[str, Any]) -> CategoryFile:
    """
    Build a category from parsed JSON

    Raises:
        ValidationError: If the payload is malformed
    """
    is_valid, error = validate_category_payload(payload)
    if not is_valid:
        raise ValidationError(error)

    p = payload["field"]
    raw_quiver = payload["quiver"]
    quiver = Quiver(
        tuple(range(1, raw_quiver["vertices"] + 1)),
        tuple(Arrow(str(a["id"]), a["source"], a["target"]) for a in raw_quiver["arrows"]),
    )

    indecs = []
    for entry in payload["indecomposables"]:
        name = sanitize_name(entry["name"])
        mats = {str(aid): m for aid, m in entry["matrices"].items() if m}
        indecs.append(Representation(quiver, p, entry["dim"], mats, name=name))

    return CategoryFile(p, quiver, indecs, dict(payload.get("metadata") or {}), payload)


def category_to_payload(category: CategoryFile) -> Dict[str, Any]:
    quiver = category.quiver
    return {
        "schema_version": CATEGORY_SCHEMA_VERSION,
        "field": category.p,
        "quiver": {
            "vertices": quiver.n,
            "arrows": [{"id": a.id, "source": a.source, "target": a.target} for a in quiver.arrows],
        },
        "indecomposables": [
            {
                "name": X.name,
                "dim": list(X.dims),
                "matrices": {a.id: X.mats[a.id].tolist() for a in quiver.arrows},
            }
            for X in category.indecs
        ],
        "metadata": category.metadata,
    }


def load_category(path: Path) -> CategoryFile:
    """
    Read a category file

    Raises:
        ValidationError: If the file is missing, not JSON, or malformed
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except FileNotFoundError:
        raise ValidationError(f"Category file not found: {path}")
    except json.JSONDecodeError as e:
        raise ValidationError(f"Category file {path} is not valid JSON: {e}")
    except OSError as e:
        raise ValidationError(f"Could not read category file {path}: {e}")

    category = category_from_payload(payload)
    logger.info(f"Loaded {len(category.indecs)} indecomposables over F_{category.p} from {path}")
    return category


def save_category(path: Path, category: CategoryFile):
    atomic_write_text(path, to_json(category_to_payload(category)), validate_json=True)
    logger.info(f"Wrote category file {path}")


def type_a_category_file(n: int, orientation: Optional[str], p: int) -> CategoryFile:
    """
    The category of all interval modules of A_n

    Raises:
        ValidationError: On a malformed orientation
    """
    is_valid, error, normalized = validate_orientation(n, orientation)
    if not is_valid:
        raise ValidationError(error)

    indecs = type_a_category(n, normalized, p)
    metadata = {
        "generator": "type-a",
        "n": n,
        "orientation": normalized,
        "ar_sequences": n * (n - 1) // 2,
    }
    category = CategoryFile(p, indecs[0].quiver, indecs, metadata)
    category.payload = category_to_payload(category)
    return category

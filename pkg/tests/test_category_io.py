import json

import numpy as np
import pytest

from algebra.auslander import build_algebra
from tests.golden import BUNDLED
from utils.category_io import (
    category_from_payload,
    category_to_payload,
    load_category,
    save_category,
    type_a_category_file,
)
from utils.exceptions import ValidationError


@pytest.mark.parametrize("filename", sorted(BUNDLED))
def test_bundled_files_match_the_generator(categories_dir, filename):
    n, orientation = BUNDLED[filename]
    loaded = load_category(categories_dir / filename)
    generated = type_a_category_file(n, orientation, 2)

    assert loaded.payload == generated.payload
    assert [X.name for X in loaded.indecs] == [X.name for X in generated.indecs]
    assert loaded.metadata["ar_sequences"] == n * (n - 1) // 2


def test_missing_file(tmp_path):
    with pytest.raises(ValidationError, match="not found"):
        load_category(tmp_path / "nope.json")


def test_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ValidationError, match="not valid JSON"):
        load_category(path)


def test_save_and_load(tmp_path):
    category = type_a_category_file(3, "RL", 3)
    path = tmp_path / "nested" / "a3.json"
    save_category(path, category)

    loaded = load_category(path)
    assert loaded.p == 3
    assert loaded.quiver == category.quiver
    assert [X.dims for X in loaded.indecs] == [X.dims for X in category.indecs]
    assert json.loads(path.read_text(encoding="utf-8")) == category_to_payload(category)
    assert not path.with_suffix(".json.tmp").exists()


def test_over_field(a3_category):
    over3 = a3_category.over_field(3)
    assert over3.p == 3
    assert all(X.p == 3 for X in over3.indecs)
    assert a3_category.p == 2


def test_summary(a3_category):
    summary = a3_category.summary()
    assert summary["vertices"] == 3
    assert summary["arrows"] == [["a1", 1, 2], ["a2", 2, 3]]
    assert len(summary["indecomposables"]) == 6


def test_generator_rejects_bad_orientation():
    with pytest.raises(ValidationError):
        type_a_category_file(3, "RRL", 2)


def test_payload_with_duplicate_names_is_rejected():
    payload = type_a_category_file(2, "R", 2).payload
    payload = {**payload, "indecomposables": payload["indecomposables"] + [payload["indecomposables"][0]]}
    with pytest.raises(ValidationError, match="Duplicate"):
        category_from_payload(payload)


def test_non_brick_is_rejected_when_building():
    payload = type_a_category_file(2, "R", 2).payload
    extra = {"name": "S2+S2", "dim": [0, 2], "matrices": {"a1": [[], []]}}
    category = category_from_payload({**payload, "indecomposables": payload["indecomposables"] + [extra]})
    assert np.array_equal(category.indecs[-1].mats["a1"], np.zeros((2, 0)))
    with pytest.raises(ValidationError):
        build_algebra(category.indecs)


def test_isomorphic_copy_is_rejected_when_building():
    payload = type_a_category_file(2, "R", 2).payload
    copy = {**payload["indecomposables"][1], "name": "copy"}
    category = category_from_payload({**payload, "indecomposables": payload["indecomposables"] + [copy]})
    with pytest.raises(ValidationError):
        build_algebra(category.indecs)

import pytest

from config import settings
from utils.validators import (
    sanitize_name,
    validate_category_payload,
    validate_matrix_shape,
    validate_orientation,
    validate_prime,
)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_supported_primes(p):
    assert validate_prime(p) == (True, None)


@pytest.mark.parametrize("p", [0, 1, 4, 9, 11, True, "2", 2.0])
def test_rejected_primes(p):
    is_valid, error = validate_prime(p)
    assert not is_valid
    assert "characteristic" in error


def test_orientation_defaults_to_right():
    assert validate_orientation(4, "") == (True, None, "RRR")
    assert validate_orientation(1, None) == (True, None, "")


def test_orientation_is_normalized():
    assert validate_orientation(3, " rl ") == (True, None, "RL")


@pytest.mark.parametrize("n, orientation", [(3, "R"), (3, "RRR"), (3, "RX"), (0, "")])
def test_bad_orientations(n, orientation):
    is_valid, error, normalized = validate_orientation(n, orientation)
    assert not is_valid
    assert error
    assert normalized is None


def test_sanitize_name():
    assert sanitize_name("  [1,2]\n") == "[1,2]"
    assert sanitize_name("a\x00b") == "ab"
    assert sanitize_name("") == ""


def test_matrix_shapes():
    assert validate_matrix_shape([[1, 0]], 1, 2, "m")[0]
    assert validate_matrix_shape([], 0, 1, "m")[0]
    assert validate_matrix_shape([[]], 1, 0, "m")[0]
    assert not validate_matrix_shape([[1]], 1, 2, "m")[0]
    assert not validate_matrix_shape([[1], [0]], 1, 1, "m")[0]
    assert not validate_matrix_shape([[True]], 1, 1, "m")[0]


def minimal_payload():
    return {
        "field": 2,
        "quiver": {"vertices": 2, "arrows": [{"id": "a1", "source": 1, "target": 2}]},
        "indecomposables": [
            {"name": "[1,1]", "dim": [1, 0], "matrices": {"a1": []}},
            {"name": "[1,2]", "dim": [1, 1], "matrices": {"a1": [[1]]}},
            {"name": "[2,2]", "dim": [0, 1], "matrices": {"a1": [[]]}},
        ],
    }


def test_minimal_payload_is_valid():
    assert validate_category_payload(minimal_payload()) == (True, None)


def _broken(mutate):
    payload = minimal_payload()
    mutate(payload)
    return payload


@pytest.mark.parametrize(
    "payload, fragment",
    [
        ([], "JSON object"),
        (_broken(lambda d: d.pop("quiver")), "missing 'quiver'"),
        (_broken(lambda d: d.update(field=4)), "characteristic"),
        (_broken(lambda d: d["quiver"].update(vertices=0)), "positive integer"),
        (_broken(lambda d: d["quiver"]["arrows"].append({"id": "a1", "source": 1, "target": 2})), "Duplicate arrow"),
        (_broken(lambda d: d["quiver"]["arrows"][0].update(target=3)), "endpoint"),
        (_broken(lambda d: d.update(indecomposables=[])), "non-empty"),
        (_broken(lambda d: d["indecomposables"][1].update(name="[1,1]")), "Duplicate indecomposable"),
        (_broken(lambda d: d["indecomposables"][0].update(dim=[1])), "one dimension per vertex"),
        (_broken(lambda d: d["indecomposables"][0].update(matrices={})), "one matrix per arrow"),
        (_broken(lambda d: d["indecomposables"][1]["matrices"].update(a1=[[1, 1]])), "[1,2].a1"),
    ],
)
def test_malformed_payloads(payload, fragment):
    is_valid, error = validate_category_payload(payload)
    assert not is_valid
    assert fragment in error


@pytest.mark.parametrize(
    "name, value, variable",
    [
        ("DEFAULT_FIELD", 4, "WEX_FIELD"),
        ("ENUMERATION_BUDGET", 0, "WEX_BUDGET"),
        ("NODE_BUDGET", 0, "WEX_NODE_BUDGET"),
        ("WORKERS", 0, "WEX_WORKERS"),
        ("COMPOSITION_DEPTH", 3, "WEX_COMPOSITION_DEPTH"),
        ("VERIFY_SAMPLES", 0, "WEX_VERIFY_SAMPLES"),
        ("SEED", -1, "WEX_SEED"),
    ],
)
def test_validate_settings_names_the_variable(monkeypatch, name, value, variable):
    monkeypatch.setattr(settings, name, value)
    with pytest.raises(ValueError, match=variable):
        settings.validate_settings()


def test_default_settings_are_valid():
    settings.validate_settings()

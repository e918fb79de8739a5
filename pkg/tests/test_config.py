import pytest

from trispectrum.config import DEFAULT, Tolerances


def test_defaults_are_small_and_positive():
    for name, value in DEFAULT.as_dict().items():
        assert 0.0 < value < 1e-3, name


def test_override_replaces_one_field():
    tol = DEFAULT.with_overrides({"classify": 1e-8})
    assert tol.classify == 1e-8
    assert tol.sign == DEFAULT.sign
    assert DEFAULT.classify == 1e-9


@pytest.mark.parametrize("value", [0.0, -1e-9, 1e-3, 0.5])
def test_override_range_enforced(value):
    with pytest.raises(ValueError):
        DEFAULT.with_overrides({"classify": value})


def test_unknown_override_rejected():
    with pytest.raises(KeyError):
        DEFAULT.with_overrides({"nope": 1e-9})


def test_frozen():
    with pytest.raises(Exception):
        Tolerances().classify = 1.0

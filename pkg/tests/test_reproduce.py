import json

import pytest

from diffmat.reproduce import MATRIX_TARGETS, TARGETS, first_difference, reproduce, reproduce_all


@pytest.mark.parametrize("target", sorted(TARGETS))
def test_target_matches(target):
    rep = reproduce(target)
    assert rep.ok, str(rep)
    assert rep.comparisons


def test_targets_are_deterministic():
    a = [r.to_json() for r in reproduce_all(MATRIX_TARGETS)]
    b = [r.to_json() for r in reproduce_all(MATRIX_TARGETS)]
    assert json.dumps(a) == json.dumps(b)


def test_unknown_target():
    with pytest.raises(KeyError):
        reproduce("example_9_9")


def test_first_difference_points_at_the_entry():
    assert first_difference("00 01\n10 11", "00 01\n10 11") is None
    msg = first_difference("00 01\n10 11", "00 01\n10 10")
    # positions are zero based
    assert msg == "row 1, column 1: expected 11, got 10"
    assert first_difference("00 01", "00 01\n10 11") is not None

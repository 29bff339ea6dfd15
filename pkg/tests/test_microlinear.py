import json
import random

import pytest

from weilkit.errors import SquareNotCommuting, SquareNotRPushout
from weilkit.jet import ZeroLocus
from weilkit.microlinear import (
    InfSquare,
    LiftProblem,
    axis_square,
    dimension_mismatch_square,
    is_r_pushout,
    lift_against_square,
    microlinearity_battery,
    named_square,
    sample_boundary,
    second_order_square,
    square_from_json,
    tensor_cross_square,
)
from weilkit.weil import AlgebraMorphism, dual_numbers, scalar_algebra

SPHERE = ZeroLocus.parse(["x^2 + y^2 + z^2 - 1"], ["x", "y", "z"])


@pytest.mark.parametrize("n, m", [(0, 0), (1, 1), (2, 1), (3, 3)])
def test_axis_squares(n, m):
    cert = is_r_pushout(axis_square(n, m))
    assert cert.ok
    assert cert.info["dim_W4"] == 1 + n + m


def test_non_pushouts_have_witnesses():
    dim = is_r_pushout(dimension_mismatch_square())
    assert not dim.ok and dim.failure["witness"]
    cross = is_r_pushout(tensor_cross_square())
    assert not cross.ok and cross.failure["witness"] == {"x1*y1": 1}


def test_second_order_square_is_pushout():
    assert is_r_pushout(second_order_square()).ok


def test_non_commuting_square_rejected():
    W1, D = scalar_algebra(), dual_numbers()
    with pytest.raises(SquareNotCommuting):
        InfSquare(
            (D, D, D, D),
            AlgebraMorphism.identity(D),
            AlgebraMorphism.identity(D),
            AlgebraMorphism(D, D, ["2*e"]),
            AlgebraMorphism.identity(D),
        )


def test_square_json_round_trip():
    sq = axis_square(1, 1)
    again = square_from_json(json.dumps(sq.to_json()))
    assert is_r_pushout(again).ok
    assert again.to_json() == sq.to_json()


def test_named_square_unknown():
    with pytest.raises(ValueError):
        named_square("nope")


@pytest.mark.parametrize("name", ["axis:1,1", "axis:2,1", "second-order"])
def test_sampled_lifts_are_unique(name):
    sq = named_square(name)
    rng = random.Random(3)
    pair = sample_boundary(SPHERE, (1, 0, 0), sq, rng)
    assert pair is not None
    report = lift_against_square(LiftProblem(SPHERE, (1, 0, 0), sq, *pair))
    assert report.ok
    assert all(s["status"] == "unique" for s in report.stages if "status" in s)


def test_battery_on_sphere():
    result = microlinearity_battery(SPHERE, [(1, 0, 0)], samples=1, seed=1)
    assert result["status"] == "pass"
    assert "not a proof" in result["scope"]


def test_battery_refuses_non_pushout():
    with pytest.raises(SquareNotRPushout):
        microlinearity_battery(SPHERE, [(1, 0, 0)], [tensor_cross_square()])

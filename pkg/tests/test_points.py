import json

import pytest
from hypothesis import given, settings, strategies as st

from weilkit.errors import InvalidPoint
from weilkit.points import SpecPoint, kl_evaluate, point_compose, point_from_json
from weilkit.weil import AlgebraMorphism, dual_numbers, normalize, truncated

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=6)


def test_valid_point():
    p = SpecPoint(dual_numbers("x"), truncated(3), {"x": "e^2"})
    assert p.valid


def test_relation_failure_names_residue():
    p = SpecPoint(dual_numbers("x"), truncated(3), {"x": "e"})
    assert not p.valid
    assert p.certificate.failure["residue"] == "e^2"
    with pytest.raises(InvalidPoint):
        p.require_valid()


def test_non_infinitesimal_value():
    p = SpecPoint(dual_numbers("x"), truncated(3), {"x": "1 + e^2"})
    assert p.certificate.failure["reason"] == "value is not infinitesimal"


def test_universal_point():
    W = normalize("Q[x,y]/(x^2, x*y, y^3)")
    assert SpecPoint.universal(W).valid


def test_kl_evaluation_of_dual_number():
    D = dual_numbers()
    a = D.parse_element("3 + 5*e")
    p = SpecPoint(D, D, ["e"])
    assert kl_evaluate(a, p) == a


def test_kl_evaluation_square():
    W = normalize("Q[y]/(y^3)")
    p = SpecPoint(W, truncated(2), {"y": "e"})
    assert kl_evaluate(W.parse_element("y^2"), p) == truncated(2).parse_element("e^2")


def test_compose_with_morphism():
    D = dual_numbers("x")
    W = truncated(3)
    p = SpecPoint(D, W, {"x": "e^2"})
    m = AlgebraMorphism(W, W, ["2*e"])
    q = point_compose(p, m)
    assert q.valid
    assert q.assignment[0] == W.parse_element("4*e^2")


def test_json_round_trip():
    p = SpecPoint(normalize("Q[x,y]/(x^2, x*y, y^2)"), truncated(3), {"x": "e^2", "y": "-e^2"})
    data = json.loads(json.dumps(p.to_json()))
    assert point_from_json(data) == p


@settings(max_examples=30, deadline=None)
@given(a=rationals, b=rationals, c=rationals, d=rationals)
def test_evaluation_is_an_algebra_map(a, b, c, d):
    W = normalize("Q[x,y]/(x^2, x*y, y^2)")
    T = truncated(3)
    p = SpecPoint(W, T, {"x": T.parse_element("e^2") * a, "y": T.parse_element("e^3") * b})
    u = W.scalar(c) + W.gen("x") * d
    v = W.gen("y") + W.scalar(d)
    assert kl_evaluate(u * v, p) == kl_evaluate(u, p) * kl_evaluate(v, p)
    assert kl_evaluate(u + v, p) == kl_evaluate(u, p) + kl_evaluate(v, p)

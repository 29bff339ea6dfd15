from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weilkit.errors import (
    AlgebraMismatch,
    AugmentationMismatch,
    NormalFormDivergence,
    NotInvertible,
    NotWeil,
    ParseError,
    UndeclaredGenerator,
)
from weilkit.presentation import format_presentation, parse_presentation, standardize
from weilkit.weil import (
    AlgebraMorphism,
    algebra,
    dual_numbers,
    first_order_patch,
    mult_table_associative,
    normalize,
    tensor,
    tensor_with_inclusions,
    truncated,
    validate_morphism,
)

ALGEBRAS = [
    "Q[x]/(x^2)",
    "Q[x,y]/(x^2, x*y, y^3)",
    "Q[x]/(x^4)",
    "Q[x,y]/(x^2 - y^3, x*y)",
    "Q[a,b,c]/(a^2, b^2, c^2)",
]

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def elements(w):
    return st.lists(rationals, min_size=w.dimension, max_size=w.dimension).map(w.element)


class TestParsing:
    def test_round_trip(self):
        text = "Q[x, y]/(x^2, x*y, y^3)"
        p = parse_presentation(text)
        assert parse_presentation(format_presentation(p)) == p

    def test_aug_clause(self):
        p = parse_presentation("Q[x]/((x-1)^2); aug x -> 1")
        assert p.augmentation == (1,)
        assert "aug x -> 1" in format_presentation(p)

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as info:
            parse_presentation("Q[x]/(x^2")
        assert info.value.code == "SyntaxError"
        assert "position" in info.value.details

    def test_undeclared(self):
        with pytest.raises(UndeclaredGenerator):
            parse_presentation("Q[x]/(y^2)")

    def test_augmentation_mismatch(self):
        with pytest.raises(AugmentationMismatch):
            parse_presentation("Q[x]/(x^2); aug x -> 1")

    def test_standardize_shifts(self):
        p = standardize(parse_presentation("Q[x]/(x^2 - 2*x + 1); aug x -> 1"))
        assert str(p) == "Q[x]/(x^2)"


class TestNormalize:
    @pytest.mark.parametrize(
        "text, dim, basis",
        [
            ("Q[x]/(x^2)", 2, ["1", "x"]),
            ("Q[]/()", 1, ["1"]),
            ("Q[x,y]/(x^2, x*y, y^3)", 4, ["1", "x", "y", "y^2"]),
            ("Q[x]/(x^3)", 3, ["1", "x", "x^2"]),
        ],
    )
    def test_examples(self, text, dim, basis):
        w = normalize(text)
        assert w.dimension == dim
        assert w.basis_names() == basis

    @pytest.mark.parametrize("text", ["Q[x]/(x^2 - x)", "Q[x,y]/(x*y)", "Q[x]/()"])
    def test_not_weil(self, text):
        with pytest.raises(NotWeil):
            normalize(text)

    def test_degree_cap(self):
        with pytest.raises(NormalFormDivergence):
            normalize("Q[x]/(x^20)", degree_cap=6)

    def test_nilpotency(self):
        assert normalize("Q[x]/(x^4)").nilpotency_degree == 4
        assert first_order_patch(3).nilpotency_degree == 2

    @pytest.mark.parametrize("text", ALGEBRAS)
    def test_table_associative(self, text):
        assert mult_table_associative(normalize(text))


class TestArithmetic:
    def test_dual_square(self):
        D = dual_numbers()
        e = D.gen("e")
        assert (1 + e) ** 2 == 1 + 2 * e

    def test_inverse(self):
        D = dual_numbers()
        e = D.gen("e")
        inv = (2 + e) ** -1
        assert inv == Fraction(1, 2) - e / 4

    def test_not_invertible(self):
        D = dual_numbers()
        with pytest.raises(NotInvertible):
            D.gen("e") ** -1

    def test_mismatch(self):
        with pytest.raises(AlgebraMismatch):
            dual_numbers().gen("e") + truncated(3).gen("e")

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_ring_laws(self, data):
        w = normalize(data.draw(st.sampled_from(ALGEBRAS)))
        a, b, c = (data.draw(elements(w)) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert (a * b).augmentation == a.augmentation * b.augmentation

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_inverse_law(self, data):
        w = normalize(data.draw(st.sampled_from(ALGEBRAS)))
        a = data.draw(elements(w))
        if a.augmentation == 0:
            with pytest.raises(NotInvertible):
                a ** -1
        else:
            assert a * a ** -1 == w.one()


class TestTensor:
    def test_dual_tensor_basis(self):
        T = tensor(dual_numbers(), dual_numbers())
        assert T.basis_names() == ["1", "e_1", "e_2", "e_1*e_2"]

    @pytest.mark.parametrize("a, b", [(0, 1), (1, 2), (2, 4)])
    def test_dimension_multiplies(self, a, b):
        A, B = normalize(ALGEBRAS[a]), normalize(ALGEBRAS[b])
        assert tensor(A, B).dimension == A.dimension * B.dimension

    def test_inclusions_are_morphisms(self):
        T, incs = tensor_with_inclusions(truncated(2), dual_numbers("f"))
        assert all(validate_morphism(m).ok for m in incs)


class TestMorphism:
    def test_valid_and_invalid(self):
        D, W = dual_numbers(), truncated(3)
        assert validate_morphism(AlgebraMorphism(D, W, ["e^2"])).ok
        cert = validate_morphism(AlgebraMorphism(D, W, ["e"]))
        assert not cert.ok

    def test_composition(self):
        D, W = dual_numbers(), truncated(3)
        m = AlgebraMorphism(D, W, ["e^2"])
        n = AlgebraMorphism(W, W, ["2*e"])
        x = D.gen("e")
        assert m.then(n)(x) == n(m(x))

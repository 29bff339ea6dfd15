"""Augmented presentations ``Q[gens]/(relations); aug gen -> value``."""

from dataclasses import dataclass, field
from fractions import Fraction

from . import poly
from .errors import AugmentationMismatch, ParseError
from .numbers import to_fraction
from .syntax import TokenStream, parse_expr


@dataclass(frozen=True, eq=False)
class AugPresentation:
    """Generators, rational polynomial relations and an augmentation point.

    The augmentation sends each generator to a rational; every relation must
    vanish there, otherwise the augmentation is not a ring map on the quotient.
    """

    generators: tuple
    relations: tuple  # of poly dicts over ``generators``
    augmentation: tuple = field(default=None)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if len(set(gens)) != len(gens):
            raise ParseError("duplicate generator names", expected="distinct generators")
        aug = self.augmentation
        if aug is None:
            aug = (Fraction(0),) * len(gens)
        aug = tuple(to_fraction(a) for a in aug)
        if len(aug) != len(gens):
            raise ValueError("augmentation length differs from generator count")
        object.__setattr__(self, "augmentation", aug)
        rels = tuple(dict(r) for r in self.relations)
        object.__setattr__(self, "relations", rels)
        for r in rels:
            for m in r:
                if len(m) != len(gens):
                    raise ValueError("relation arity differs from generator count")
            value = poly.value_at(r, aug)
            if value:
                raise AugmentationMismatch(
                    f"relation {poly.format_poly(r, gens)} is {value} under the augmentation",
                    relation=poly.format_poly(r, gens),
                    value=value,
                )

    @property
    def nvars(self):
        return len(self.generators)

    def is_standard(self):
        return not any(self.augmentation)

    def __eq__(self, other):
        if not isinstance(other, AugPresentation):
            return NotImplemented
        return (
            self.generators == other.generators
            and self.relations == other.relations
            and self.augmentation == other.augmentation
        )

    def __hash__(self):
        return hash(str(self))

    def __str__(self):
        return format_presentation(self)

    def __repr__(self):
        return f"AugPresentation({format_presentation(self)!r})"


def parse_presentation(text):
    """Parse ``Q[g1, g2]/(p1, p2); aug g1 -> q1, ...`` (the ``aug`` clause is optional)."""
    ts = TokenStream(text)
    if not ts.at("Q"):
        ts.fail("'Q'")
    ts.next()
    ts.expect("[")
    gens = []
    if not ts.at("]"):
        gens.append(ts.expect_name())
        while ts.accept(","):
            gens.append(ts.expect_name())
    ts.expect("]")
    if len(set(gens)) != len(gens):
        raise ParseError("duplicate generator names", position=ts.peek.pos, expected="distinct generators")
    ts.expect("/")
    ts.expect("(")
    relations = []
    if not ts.at(")"):
        relations.append(poly.from_tree(parse_expr(ts), gens))
        while ts.accept(","):
            relations.append(poly.from_tree(parse_expr(ts), gens))
    ts.expect(")")
    aug = {g: Fraction(0) for g in gens}
    if ts.accept(";"):
        if not ts.at("aug"):
            ts.fail("'aug'")
        ts.next()
        if ts.peek.kind != "end":
            _aug_entry(ts, gens, aug)
            while ts.accept(","):
                _aug_entry(ts, gens, aug)
    ts.done()
    return AugPresentation(tuple(gens), tuple(relations), tuple(aug[g] for g in gens))


def _aug_entry(ts, gens, aug):
    name_tok = ts.peek
    name = ts.expect_name()
    if name not in gens:
        from .errors import UndeclaredGenerator

        raise UndeclaredGenerator(
            f"augmentation names undeclared generator {name!r}", generator=name, position=name_tok.pos
        )
    ts.expect("->")
    value = poly.from_tree(parse_expr(ts), [])
    aug[name] = value.get((), Fraction(0))


def format_presentation(p):
    gens = ", ".join(p.generators)
    rels = ", ".join(poly.format_poly(r, p.generators) for r in p.relations)
    text = f"Q[{gens}]/({rels})"
    if not p.is_standard():
        text += "; aug " + ", ".join(f"{g} -> {a}" for g, a in zip(p.generators, p.augmentation))
    return text


def standardize(p):
    """Move the augmentation point to the origin by the substitution x = y - aug(y).

    Generator names are kept; only the relations change. Standard input is
    returned as is.
    """
    if p.is_standard():
        return p
    n = p.nvars
    shifted = [poly.add(poly.var(i, n), poly.const(a, n)) for i, a in enumerate(p.augmentation)]
    relations = tuple(poly.substitute(r, shifted, n) for r in p.relations)
    return AugPresentation(p.generators, relations)

"""Points of Spec W valued in a Weil carrier, and the evaluation map.

A point of W in a carrier W' is an assignment of nilpotent elements of W' to
the generators of W that kills every relation of W.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from . import poly
from .certificates import Certificate
from .errors import AlgebraMismatch, InvalidPoint
from .numbers import fmt, to_fraction
from .weil import AlgebraMorphism, WeilElement, normalize


@dataclass(frozen=True, eq=False)
class SpecPoint:
    of: object  # WeilAlgebra being probed
    carrier: object  # WeilAlgebra supplying values
    assignment: tuple  # WeilElement of carrier per generator of ``of``

    def __init__(self, of, carrier, assignment):
        if isinstance(assignment, dict):
            assignment = [assignment[g] for g in of.generators]
        values = []
        for v in assignment:
            if isinstance(v, str):
                v = carrier.parse_element(v)
            elif isinstance(v, (list, tuple)):
                v = carrier.element(tuple(to_fraction(c) for c in v))
            elif not isinstance(v, WeilElement):
                v = carrier.scalar(Fraction(v))
            if v.algebra != carrier:
                raise AlgebraMismatch("assigned value is not in the carrier")
            values.append(v)
        if len(values) != len(of.generators):
            raise ValueError("assignment must cover every generator")
        object.__setattr__(self, "of", of)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "assignment", tuple(values))
        object.__setattr__(self, "certificate", validate_point(self))

    @property
    def valid(self):
        return self.certificate.ok

    def require_valid(self):
        if not self.valid:
            raise InvalidPoint("point is not a valid algebra map", **self.certificate.failure)

    def as_morphism(self):
        return AlgebraMorphism(self.of, self.carrier, self.assignment)

    @classmethod
    def universal(cls, w):
        """The generic point: carrier W itself, generators to themselves."""
        return cls(w, w, w.gens())

    def __eq__(self, other):
        if not isinstance(other, SpecPoint):
            return NotImplemented
        return self.of == other.of and self.carrier == other.carrier and self.assignment == other.assignment

    def __hash__(self):
        return hash((self.of, self.carrier, self.assignment))

    def to_json(self):
        return {
            "of": str(self.of.presentation),
            "carrier": str(self.carrier.presentation),
            "assignment": {g: [fmt(c) for c in v.coeffs] for g, v in zip(self.of.generators, self.assignment)},
        }


def validate_point(p):
    checks = []
    for g, v in zip(p.of.generators, p.assignment):
        checks.append({"check": "nilpotent", "generator": g, "augmentation": v.augmentation})
        if v.augmentation:
            return Certificate(
                "spec_point",
                False,
                checks,
                {"reason": "value is not infinitesimal", "generator": g, "augmentation": v.augmentation},
            )
    one = p.carrier.one()
    for r in p.of.presentation.relations:
        text = poly.format_poly(r, p.of.generators)
        residue = poly.evaluate(r, p.assignment, one)
        checks.append({"check": "relation", "relation": text, "residue": str(residue)})
        if not residue.is_zero():
            return Certificate(
                "spec_point", False, checks, {"reason": "relation not satisfied", "relation": text, "residue": str(residue)}
            )
    return Certificate("spec_point", True, checks)


def kl_evaluate(w, p, representative=None):
    """Evaluate w at the point p: substitute the assignment into a polynomial representative.

    ``representative`` may be any polynomial congruent to w; by default the
    basis expansion of w is used.
    """
    if w.algebra != p.of:
        raise AlgebraMismatch("element does not belong to the probed algebra")
    p.require_valid()
    rep = w.to_poly() if representative is None else representative
    return poly.evaluate(rep, p.assignment, p.carrier.one())


def point_compose(p, m):
    """Push p along an algebra morphism out of its carrier."""
    if m.source != p.carrier:
        raise AlgebraMismatch("morphism source is not the point's carrier")
    p.require_valid()
    return SpecPoint(p.of, m.target, [m(v) for v in p.assignment])


def point_from_json(data, degree_cap=16):
    if isinstance(data, str):
        data = json.loads(data)
    of = normalize(data["of"], degree_cap)
    carrier = normalize(data["carrier"], degree_cap)
    return SpecPoint(of, carrier, {g: v for g, v in data["assignment"].items()})

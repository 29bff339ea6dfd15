"""Associations: total, functional relations X -> finite index set, witnessing
subfinite enumerability, with composition, products and finite unions."""

from dataclasses import dataclass
from itertools import product

from .certificates import Certificate
from .errors import InvariantViolation


@dataclass(frozen=True)
class Association:
    left: tuple
    right: tuple
    relation: frozenset

    def __init__(self, left, right, relation, check=True):
        object.__setattr__(self, "left", tuple(left))
        object.__setattr__(self, "right", tuple(right))
        object.__setattr__(self, "relation", frozenset(tuple(p) for p in relation))
        if check:
            self.validate()

    @classmethod
    def from_map(cls, mapping, right):
        return cls(tuple(mapping), tuple(right), {(x, i) for x, i in mapping.items()})

    def related(self, x):
        return sorted((i for (y, i) in self.relation if y == x), key=self.right.index)

    def validate(self):
        lefts, rights = set(self.left), set(self.right)
        for x, i in self.relation:
            if x not in lefts or i not in rights:
                raise InvariantViolation(f"pair {(x, i)} lies outside X x I", clause="domain", pair=[x, i])
        for x in self.left:
            images = self.related(x)
            if not images:
                raise InvariantViolation(f"totality fails at {x!r}", clause="totality", element=x)
            if len(images) > 1:
                raise InvariantViolation(
                    f"functionality fails at {x!r}: related to {images}", clause="functionality", element=x,
                    indices=images,
                )
        return True

    def as_map(self):
        return {x: i for x, i in self.relation}


def compose(r, s):
    """(s o r)(x, i) iff r(x, y) and s(y, i) for some y."""
    if set(r.right) != set(s.left):
        raise InvariantViolation("middle sets differ", clause="domain")
    by_y = {}
    for y, i in s.relation:
        by_y.setdefault(y, []).append(i)
    pairs = {(x, i) for x, y in r.relation for i in by_y.get(y, [])}
    return Association(r.left, s.right, pairs)


def product_association(r, s):
    """(r x s)((x, y), (i, j)) iff r(x, i) and s(y, j)."""
    pairs = {((x, y), (i, j)) for x, i in r.relation for y, j in s.relation}
    return Association(tuple(product(r.left, s.left)), tuple(product(r.right, s.right)), pairs)


def disjoint_sum(assocs):
    """r((k, x), (k, j)) iff r_k(x, j), on the disjoint sum of the index sets."""
    left = tuple((k, x) for k, a in enumerate(assocs) for x in a.left)
    right = tuple((k, i) for k, a in enumerate(assocs) for i in a.right)
    pairs = {((k, x), (k, i)) for k, a in enumerate(assocs) for x, i in a.relation}
    return Association(left, right, pairs)


def union_check(assocs, universe):
    """A finite union of associated subsets of a discrete set is associated.

    The union is the image of the disjoint sum under (k, x) -> x; equality in
    ``universe`` is decidable, so each x keeps the index it has in the first
    subset containing it.
    """
    universe = tuple(universe)
    checks = []
    for k, a in enumerate(assocs):
        a.validate()
        outside = [x for x in a.left if x not in universe]
        if outside:
            raise InvariantViolation(f"subset {k} leaves the ambient set", clause="domain", element=outside[0])
    summed = disjoint_sum(assocs)
    checks.append({"check": "disjoint sum is an association", "ok": True, "size": len(summed.right)})
    union = []
    for a in assocs:
        for x in a.left:
            if x not in union:
                union.append(x)
    pairs = set()
    for x in union:
        k = next(k for k, a in enumerate(assocs) if x in a.left)
        pairs.update(((x, (k, i)) for (y, i) in assocs[k].relation if y == x))
    result = Association(tuple(union), summed.right, pairs)
    checks.append({"check": "union association re-validated", "ok": True})
    image = {x for (_, x) in summed.left}
    same = image == set(union)
    checks.append({"check": "union is the image of the disjoint sum", "ok": same})
    return result, Certificate("union", same, checks, None if same else {"reason": "image mismatch"},
                               {"union_size": len(union), "index_size": len(summed.right)})


def association_ops(op, *args):
    if op == "compose":
        return compose(*args)
    if op == "product":
        return product_association(*args)
    if op == "union_check":
        return union_check(*args)
    raise ValueError(f"unknown association op {op!r}")

"""Weil algebras: normalized finite-dimensional local quotients of Q[x1..xn].

Basis order: standard monomials sorted by total degree, then with the first
generator's exponent largest (so ``Q[x, y]/(x^2, x*y, y^3)`` has basis
``1, x, y, y^2``). The unit monomial is always first, so coefficient 0 of an
element is its augmentation.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product

from . import linalg, poly
from .certificates import Certificate
from .errors import AlgebraMismatch, NotInvertible, NotWeil, NormalFormDivergence
from .presentation import AugPresentation, parse_presentation, standardize

DEFAULT_DEGREE_CAP = 16


def _basis_key(mono):
    return (sum(mono), tuple(-e for e in mono))


@dataclass(frozen=True, eq=False)
class WeilAlgebra:
    presentation: AugPresentation
    groebner: tuple
    basis: tuple
    mult_table: tuple  # mult_table[i][j] = ((k, c), ...) sparse product of basis i and j
    nilpotency_degree: int

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def generators(self):
        return self.presentation.generators

    @cached_property
    def index(self):
        return {m: i for i, m in enumerate(self.basis)}

    @cached_property
    def _key(self):
        return (self.generators, self.basis, self.mult_table)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, WeilAlgebra):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"WeilAlgebra({str(self.presentation)!r}, dim={self.dimension})"

    def basis_names(self):
        return [poly.format_monomial(m, self.generators) for m in self.basis]

    # element constructors

    def element(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != self.dimension:
            raise ValueError(f"expected {self.dimension} coefficients, got {len(coeffs)}")
        return WeilElement(self, coeffs)

    def scalar(self, c):
        return WeilElement(self, (c,) + (c * 0,) * (self.dimension - 1))

    def one(self):
        return self.scalar(Fraction(1))

    def zero(self):
        return self.scalar(Fraction(0))

    def gen(self, name):
        i = self.generators.index(name)
        return self.from_poly(poly.var(i, len(self.generators)))

    def gens(self):
        return [self.gen(g) for g in self.generators]

    def reduce_poly(self, p):
        return poly.reduce(p, self.groebner)

    def from_poly(self, p):
        coeffs = [Fraction(0)] * self.dimension
        for m, c in self.reduce_poly(p).items():
            coeffs[self.index[m]] = c
        return WeilElement(self, tuple(coeffs))

    def parse_element(self, text):
        from .syntax import parse_expression

        return self.from_poly(poly.from_tree(parse_expression(text), self.generators))

    def monomial(self, name_or_exps):
        if isinstance(name_or_exps, str):
            name_or_exps = next(m for m in self.basis if poly.format_monomial(m, self.generators) == name_or_exps)
        coeffs = [Fraction(0)] * self.dimension
        coeffs[self.index[tuple(name_or_exps)]] = Fraction(1)
        return WeilElement(self, tuple(coeffs))

    # multiplication kernel

    def multiply(self, a, b):
        n = self.dimension
        zero = a[0] * 0
        out = [zero] * n
        table = self.mult_table
        for i, x in enumerate(a):
            if not x:
                continue
            row = table[i]
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, c in row[j]:
                    out[k] += xy * c
        return out

    # augmentation-ideal filtration

    @cached_property
    def ideal_powers(self):
        """Row-reduced bases of m, m^2, ..., down to (and excluding) the zero ideal."""
        n = self.dimension
        unit = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        current = linalg.span_basis(unit[1:], n)
        powers = []
        while current:
            powers.append(current)
            products = [self.multiply(p, g) for p in current for g in unit[1:]]
            current = linalg.span_basis(products, n)
        return powers

    @cached_property
    def filtration(self):
        """Adapted basis: vectors of weight k span a complement of m^(k+1) in m^k.

        Returns (weights, A, A_inv) where the columns of A are the adapted
        vectors in standard coordinates.
        """
        n = self.dimension
        vectors = []
        weights = []
        powers = self.ideal_powers
        for k in range(len(powers), 0, -1):
            for v in powers[k - 1]:
                if not vectors or not linalg.in_span(v, vectors, n):
                    vectors.append(v)
                    weights.append(k)
        vectors.append([Fraction(int(j == 0)) for j in range(n)])
        weights.append(0)
        order = sorted(range(n), key=lambda i: weights[i])
        vectors = [vectors[i] for i in order]
        weights = [weights[i] for i in order]
        A = linalg.transpose(vectors)
        return tuple(weights), A, linalg.inverse(A)


@dataclass(frozen=True, eq=False)
class WeilElement:
    """Coefficient vector on the basis of a WeilAlgebra (Fractions, or floats in float mode)."""

    algebra: WeilAlgebra
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.dimension:
            raise ValueError("coefficient count differs from algebra dimension")

    @property
    def augmentation(self):
        return self.coeffs[0]

    def nilpotent_part(self):
        return WeilElement(self.algebra, (self.coeffs[0] * 0,) + self.coeffs[1:])

    def _coerce(self, other):
        if isinstance(other, WeilElement):
            if other.algebra != self.algebra:
                raise AlgebraMismatch(
                    "operands belong to different algebras",
                    left=str(self.algebra.presentation),
                    right=str(other.algebra.presentation),
                )
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        return WeilElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return WeilElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return WeilElement(self.algebra, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, WeilElement):
            other = self._coerce(other)
            return WeilElement(self.algebra, tuple(self.algebra.multiply(self.coeffs, other.coeffs)))
        return WeilElement(self.algebra, tuple(a * other for a in self.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, WeilElement):
            return self * invert(self._coerce(other))
        return WeilElement(self.algebra, tuple(a / other for a in self.coeffs))

    def __rtruediv__(self, other):
        return self._coerce(other) * invert(self)

    def __pow__(self, k):
        if k < 0:
            return invert(self) ** (-k)
        out = self.algebra.one() if not isinstance(self.coeffs[0], float) else self.algebra.scalar(1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, WeilElement):
            return self.algebra == other.algebra and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, float)):
            return self == self.algebra.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra, self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def coefficient(self, monomial):
        """Coefficient of a basis monomial given as an exponent tuple or its printed name."""
        if isinstance(monomial, str):
            names = self.algebra.basis_names()
            return self.coeffs[names.index(monomial)]
        return self.coeffs[self.algebra.index[tuple(monomial)]]

    def to_float(self):
        return WeilElement(self.algebra, tuple(float(c) for c in self.coeffs))

    def to_poly(self):
        """A polynomial representative: sum of coefficient times basis monomial."""
        return {m: Fraction(c) for m, c in zip(self.algebra.basis, self.coeffs) if c}

    def __str__(self):
        if isinstance(self.coeffs[0], float):
            terms = [f"{c!r}*{n}" if n != "1" else repr(c) for c, n in zip(self.coeffs, self.algebra.basis_names()) if c]
            return " + ".join(terms) or "0.0"
        return poly.format_poly(self.to_poly(), self.algebra.generators)

    def __repr__(self):
        return f"WeilElement({self})"

    def to_json(self):
        from .numbers import fmt

        return [fmt(c) for c in self.coeffs]


def element_arithmetic(op, a, b):
    """Dispatch ``add|sub|mul|scale`` on Weil elements."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if not isinstance(b, WeilElement):
            raise AlgebraMismatch("mul expects two elements; use scale for scalars")
        return a * b
    if op == "scale":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def invert(a):
    """Inverse by the finite geometric series a^-1 = s^-1 * sum_{k<d} (-n/s)^k."""
    s = a.augmentation
    if not s:
        raise NotInvertible("element has zero augmentation and is infinitesimal", element=str(a))
    n = a.nilpotent_part()
    q = n * (-1 / s) if not isinstance(s, float) else n * (-1.0 / s)
    one = a.algebra.scalar(s * 0 + 1)
    total = one
    term = one
    for _ in range(1, a.algebra.nilpotency_degree):
        term = term * q
        total = total + term
    return total * (1 / s)


# normalization


def normalize(p, degree_cap=DEFAULT_DEGREE_CAP):
    """Normal form of a presentation; non-standard input is standardized first."""
    if isinstance(p, str):
        p = parse_presentation(p)
    p = standardize(p)
    return _normalize(str(p), degree_cap)


@lru_cache(maxsize=512)
def _normalize(text, degree_cap):
    p = parse_presentation(text)
    n = p.nvars
    gb = tuple(poly.groebner(p.relations, degree_cap))
    leads = [poly.leading(g)[0] for g in gb]
    for i, name in enumerate(p.generators):
        pure = [m for m in leads if all(e == 0 for j, e in enumerate(m) if j != i)]
        if not pure:
            raise NotWeil(
                f"generator {name!r} has no vanishing power: the quotient is infinite-dimensional",
                generator=name,
            )
    basis = _standard_monomials(leads, n, degree_cap)
    index = {m: i for i, m in enumerate(basis)}
    dim = len(basis)
    table = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            prod = poly.reduce({poly.mono_mul(basis[i], basis[j]): Fraction(1)}, gb)
            entry = tuple(sorted((index[m], c) for m, c in prod.items()))
            table[i][j] = table[j][i] = entry
    algebra = WeilAlgebra(p, gb, tuple(basis), tuple(tuple(r) for r in table), 0)
    for name in p.generators:
        x = algebra.gen(name)
        if not (x ** dim).is_zero():
            raise NotWeil(
                f"generator {name!r} is not nilpotent: {name}^{dim} = {x ** dim}",
                generator=name,
            )
    object.__setattr__(algebra, "nilpotency_degree", len(algebra.ideal_powers) + 1)
    return algebra


def _standard_monomials(leads, n, degree_cap):
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                t = tuple(e + (j == i) for j, e in enumerate(m))
                if t in seen or any(poly.divides(l, t) for l in leads):
                    continue
                if sum(t) > degree_cap * max(n, 1):
                    raise NormalFormDivergence(
                        f"standard monomials exceed degree cap {degree_cap}", cap=degree_cap
                    )
                seen.add(t)
                nxt.append(t)
        frontier = nxt
    return sorted(seen, key=_basis_key)


def algebra(text, degree_cap=DEFAULT_DEGREE_CAP):
    """Shorthand: parse and normalize."""
    return normalize(parse_presentation(text), degree_cap)


def scalar_algebra():
    return algebra("Q[]/()")


def first_order_patch(n, prefix="x"):
    """Dual algebra of D(n): Q[x1..xn]/(xi*xj)."""
    gens = [f"{prefix}{i + 1}" for i in range(n)]
    rels = [f"{a}*{b}" for i, a in enumerate(gens) for b in gens[i:]]
    return algebra(f"Q[{', '.join(gens)}]/({', '.join(rels)})")


def truncated(k, name="e"):
    """Q[e]/(e^(k+1)): Taylor towers of order k."""
    return algebra(f"Q[{name}]/({name}^{k + 1})")


def dual_numbers(name="e"):
    return truncated(1, name)


def tensor(*algebras, degree_cap=DEFAULT_DEGREE_CAP):
    """Tensor product over Q.

    Generator names are kept when they are already disjoint; on any clash
    every generator gets the suffix ``_i`` of its factor index (1-based).
    """
    return tensor_with_inclusions(*algebras, degree_cap=degree_cap)[0]


def tensor_with_inclusions(*algebras, degree_cap=DEFAULT_DEGREE_CAP):
    names = [g for w in algebras for g in w.generators]
    clash = len(set(names)) != len(names)
    gens = []
    for i, w in enumerate(algebras):
        gens.extend(f"{g}_{i + 1}" if clash else g for g in w.generators)
    n = len(gens)
    relations = []
    offset = 0
    for w in algebras:
        k = len(w.generators)
        for r in w.groebner:
            relations.append({(0,) * offset + m + (0,) * (n - offset - k): c for m, c in r.items()})
        offset += k
    result = normalize(AugPresentation(tuple(gens), tuple(relations)), degree_cap)
    inclusions = []
    offset = 0
    for w in algebras:
        k = len(w.generators)
        images = {g: result.gen(gens[offset + j]) for j, g in enumerate(w.generators)}
        inclusions.append(AlgebraMorphism(w, result, images))
        offset += k
    return result, inclusions


# morphisms


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    """Algebra map given by the images of the source generators."""

    source: WeilAlgebra
    target: WeilAlgebra
    images: tuple  # WeilElement of target per source generator

    def __init__(self, source, target, images):
        if isinstance(images, dict):
            images = [images[g] for g in source.generators]
        imgs = []
        for im in images:
            if isinstance(im, str):
                im = target.parse_element(im)
            elif not isinstance(im, WeilElement):
                im = target.scalar(Fraction(im))
            elif im.algebra != target:
                raise AlgebraMismatch("image does not live in the target algebra")
            imgs.append(im)
        if len(imgs) != len(source.generators):
            raise ValueError("one image per source generator is required")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", tuple(imgs))

    @classmethod
    def identity(cls, w):
        return cls(w, w, w.gens())

    @cached_property
    def matrix(self):
        """Columns are the images of the source basis monomials."""
        one = self.target.one()
        cols = [poly.evaluate({m: Fraction(1)}, self.images, one).coeffs for m in self.source.basis]
        return linalg.transpose(cols) if cols else []

    def __call__(self, element):
        if element.algebra != self.source:
            raise AlgebraMismatch("element is not in the morphism's source")
        zero = element.coeffs[0] * 0
        out = [zero] * self.target.dimension
        for j, x in enumerate(element.coeffs):
            if x:
                for i in range(self.target.dimension):
                    c = self.matrix[i][j]
                    if c:
                        out[i] += c * x
        return WeilElement(self.target, tuple(out))

    def then(self, other):
        """``other`` after ``self``."""
        if other.source != self.target:
            raise AlgebraMismatch("morphisms do not compose")
        return AlgebraMorphism(self.source, other.target, [other(im) for im in self.images])

    def __eq__(self, other):
        if not isinstance(other, AlgebraMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.images == other.images

    def __hash__(self):
        return hash((self.source, self.target, self.images))

    def to_json(self):
        return {
            "source": str(self.source.presentation),
            "target": str(self.target.presentation),
            "images": {g: str(im) for g, im in zip(self.source.generators, self.images)},
        }


def validate_morphism(m):
    """Check relations map to zero and augmentation is preserved."""
    checks = []
    for g, im in zip(m.source.generators, m.images):
        checks.append({"check": "augmentation", "generator": g, "value": im.augmentation})
        if im.augmentation:
            return Certificate(
                "morphism",
                False,
                checks,
                {"reason": "augmentation not preserved", "generator": g, "residue": str(im)},
            )
    one = m.target.one()
    for r in m.source.presentation.relations:
        text = poly.format_poly(r, m.source.generators)
        residue = poly.evaluate(r, m.images, one)
        checks.append({"check": "relation", "relation": text, "residue": str(residue)})
        if not residue.is_zero():
            return Certificate(
                "morphism", False, checks, {"reason": "relation not killed", "relation": text, "residue": str(residue)}
            )
    return Certificate("morphism", True, checks)


def mult_table_associative(w):
    """Exhaustive associativity and commutativity check on basis triples."""
    n = w.dimension
    unit = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i, j in product(range(n), repeat=2):
        if w.multiply(unit[i], unit[j]) != w.multiply(unit[j], unit[i]):
            return False
    for i, j, k in product(range(n), repeat=3):
        left = w.multiply(w.multiply(unit[i], unit[j]), unit[k])
        right = w.multiply(unit[i], w.multiply(unit[j], unit[k]))
        if left != right:
            return False
    return True

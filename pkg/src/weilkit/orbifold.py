"""Exact group algebra for good orbifolds: SL2(Z) acting on the upper half plane
and on lattice bases, finite action scenes with stabilizers and transporters,
cycles of roots of unity, torus quotients and their crystallographic groups.

Complex points live in Q(i) so every identity is checked exactly.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .certificates import Certificate
from .errors import (
    DegenerateBasis,
    DeterminantNotOne,
    NotAGroup,
    NotInUpperHalfPlane,
    NotSameLattice,
    OrientationMismatch,
    PointNotInCarrier,
)
from .numbers import to_fraction


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", to_fraction(self.re))
        object.__setattr__(self, "im", to_fraction(self.im))

    @classmethod
    def parse(cls, text):
        """``"a,b"`` for a + b i."""
        parts = [s for s in str(text).split(",")]
        if len(parts) == 1:
            parts.append("0")
        return cls(to_fraction(parts[0]), to_fraction(parts[1]))

    @staticmethod
    def coerce(x):
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(to_fraction(x))

    def __add__(self, other):
        o = self.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = self.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self.coerce(other)
        n = o.norm2()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        q = self * o.conjugate()
        return GaussianRational(q.re / n, q.im / n)

    def __rtruediv__(self, other):
        return self.coerce(other) / self

    def __bool__(self):
        return bool(self.re or self.im)

    def __str__(self):
        return f"{self.re} + {self.im}i" if self.im >= 0 else f"{self.re} - {-self.im}i"

    def to_json(self):
        return {"re": str(self.re), "im": str(self.im)}


I_UNIT = GaussianRational(0, 1)


@dataclass(frozen=True)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def __matmul__(self, o):
        return IntMatrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def to_json(self):
        return self.rows()


def _require_sl2(M):
    if M.det != 1:
        raise DeterminantNotOne(f"determinant is {M.det}, not 1", det=M.det, matrix=M.rows())


def _require_upper(tau):
    if tau.im <= 0:
        raise NotInUpperHalfPlane(f"Im({tau}) is not positive", tau=tau)


def mobius(M, tau):
    """(a tau + b) / (c tau + d)."""
    _require_sl2(M)
    _require_upper(tau)
    out = (tau * M.a + M.b) / (tau * M.c + M.d)
    assert out.im > 0
    return out


def fiber_action(M, tau, p):
    """M (tau, p) = (M tau, (c tau + d) p) on pairs with Z + tau Z = p^-1(lattice)."""
    _require_sl2(M)
    _require_upper(tau)
    if not p:
        raise ValueError("p must be nonzero")
    return mobius(M, tau), (tau * M.c + M.d) * p


@dataclass(frozen=True)
class LatticeBasis:
    """Ordered basis (w1, w2) of a rank-2 lattice in C; orientation is the sign of Im(w2 / w1)."""

    w1: GaussianRational
    w2: GaussianRational

    def __post_init__(self):
        object.__setattr__(self, "w1", GaussianRational.coerce(self.w1))
        object.__setattr__(self, "w2", GaussianRational.coerce(self.w2))
        if not self._cross():
            raise DegenerateBasis(f"{self.w1} and {self.w2} are linearly dependent over Q")

    def _cross(self):
        return (self.w2 * self.w1.conjugate()).im

    @property
    def orientation(self):
        return 1 if self._cross() > 0 else -1

    @classmethod
    def oriented(cls, w1, w2):
        """Same lattice, with w2 negated if needed so the orientation is +1."""
        b = cls(w1, w2)
        return b if b.orientation == 1 else cls(b.w1, -b.w2)

    @classmethod
    def standard(cls, tau):
        """Basis (1, tau) of Z + tau Z."""
        return cls(GaussianRational(1), tau)

    def scaled(self, z):
        return LatticeBasis(self.w1 * z, self.w2 * z)

    def to_json(self):
        return {"w1": self.w1.to_json(), "w2": self.w2.to_json(), "orientation": self.orientation}


def fiber_lattice(tau, p):
    """The lattice p(Z + tau Z) that a fiber point (tau, p) presents."""
    return LatticeBasis.standard(tau).scaled(p)


def fiber_lattice_check(M, tau, p):
    """p'(Z + tau'Z) = p(Z + tau Z) after acting by M: the lattice is unchanged."""
    t2, p2 = fiber_action(M, tau, p)
    return lattice_equal(fiber_lattice(tau, p), fiber_lattice(t2, p2))


def _coords(z, u, v):
    """Rational (s, t) with z = s u + t v."""
    det = u.re * v.im - u.im * v.re
    s = (z.re * v.im - z.im * v.re) / det
    t = (u.re * z.im - u.im * z.re) / det
    return s, t


def _integral(*xs):
    return all(x.denominator == 1 for x in xs)


def lattice_equal(B1, B2):
    """Each basis vector of one is an integer combination of the other's."""
    for u, (x, y) in ((B2.w1, (B1.w1, B1.w2)), (B2.w2, (B1.w1, B1.w2)), (B1.w1, (B2.w1, B2.w2)), (B1.w2, (B2.w1, B2.w2))):
        if not _integral(*_coords(u, x, y)):
            return False
    return True


def basis_change(B1, B2):
    """Integer matrix M with (w2', w1')^T = M (w2, w1)^T.

    With B1 = (1, tau) and B2 = (c tau + d, a tau + b) this is exactly the
    matrix whose Mobius transform sends tau to B2.w2 / B2.w1, so composition
    follows basis_change(B1, B3) = basis_change(B2, B3) @ basis_change(B1, B2).
    """
    if not lattice_equal(B1, B2):
        raise NotSameLattice("bases generate different lattices")
    b, a = _coords(B2.w2, B1.w1, B1.w2)
    d, c = _coords(B2.w1, B1.w1, B1.w2)
    M = IntMatrix2(int(a), int(b), int(c), int(d))
    if M.det == -1:
        raise OrientationMismatch("bases have opposite orientation (determinant -1)", matrix=M.rows())
    assert M.det == 1
    return M


# finite action scenes


def _mat_mul(A, B):
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*B)) for row in A)


def _mat_vec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def closure(generators, mul, identity, limit=10000):
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in generators:
                x = mul(h, g)
                if x not in seen:
                    seen.add(x)
                    elements.append(x)
                    nxt.append(x)
                    if len(elements) > limit:
                        raise NotAGroup("generated group exceeds the size limit", limit=limit)
        frontier = nxt
    return elements


@dataclass(frozen=True, eq=False)
class FiniteActionScene:
    """A finite group (explicit element list) acting on an exact carrier."""

    elements: tuple
    mul: object
    identity: object
    act: object
    carrier: tuple = None  # finite point list, or None for a whole coordinate space
    dim: int = None  # coordinate dimension when carrier is None
    labels: dict = None

    def label(self, g):
        if self.labels and g in self.labels:
            return self.labels[g]
        return g

    def contains(self, x):
        if self.carrier is not None:
            return x in self.carrier
        return isinstance(x, tuple) and len(x) == self.dim

    def check_group(self):
        els = set(self.elements)
        if self.identity not in els:
            raise NotAGroup("identity missing")
        for g in self.elements:
            if not any(self.mul(g, h) == self.identity for h in self.elements):
                raise NotAGroup("element without inverse", element=str(self.label(g)))
            for h in self.elements:
                if self.mul(g, h) not in els:
                    raise NotAGroup("not closed under multiplication")
        return True

    def check_action(self, samples):
        for x in samples:
            if self.act(self.identity, x) != x:
                return False
            for g in self.elements:
                for h in self.elements:
                    if self.act(g, self.act(h, x)) != self.act(self.mul(g, h), x):
                        return False
        return True


def matrix_scene(generators, carrier=None, labels=None):
    """Integer (or rational) matrices acting on column vectors."""
    gens = [tuple(tuple(to_fraction(x) for x in row) for row in g) for g in generators]
    n = len(gens[0])
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    elements = closure(gens, _mat_mul, ident)
    carrier = None if carrier is None else tuple(tuple(to_fraction(x) for x in p) for p in carrier)
    return FiniteActionScene(tuple(elements), _mat_mul, ident, _mat_vec, carrier, n, labels)


def _perm_mul(s, t):
    return tuple(s[t[i]] for i in range(len(t)))


def _perm_act(s, x):
    # (s.x)[s(i)] = x[i], a left action on tuples
    out = [None] * len(x)
    for i, v in enumerate(x):
        out[s[i]] = v
    return tuple(out)


def permutation_scene(degree, generators, alphabet=None, labels=None):
    """Permutations of positions acting on configurations (tuples over ``alphabet``)."""
    gens = [tuple(g) for g in generators]
    ident = tuple(range(degree))
    elements = closure(gens, _perm_mul, ident)
    carrier = None
    if alphabet is not None:
        carrier = tuple(product(alphabet, repeat=degree))
    return FiniteActionScene(tuple(elements), _perm_mul, ident, _perm_act, carrier, degree, labels)


def c4_rotation_scene():
    """Multiplication by i on Q(i), as the rotation matrix on (re, im)."""
    r = ((0, -1), (1, 0))
    scene = matrix_scene([r])
    labels = {g: f"i^{k}" for k, g in enumerate(_powers(scene, scene.elements[1]))}
    return FiniteActionScene(scene.elements, scene.mul, scene.identity, scene.act, None, 2, labels)


def _powers(scene, g):
    out, x = [], scene.identity
    while True:
        out.append(x)
        x = scene.mul(g, x)
        if x == scene.identity:
            return out


def configuration_scene(alphabet=("a", "b", "c")):
    """Sigma_2 permuting the two entries of pairs over ``alphabet``."""
    return permutation_scene(2, [(1, 0)], alphabet, labels={(0, 1): "id", (1, 0): "swap"})


def scene_from_json(data):
    """``{"kind": "matrix", "generators": [...], "carrier": [...]?}`` or
    ``{"kind": "permutation", "degree": n, "generators": [...], "alphabet": [...]?}``."""
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("kind", "matrix")
    if kind == "matrix":
        return matrix_scene(data["generators"], data.get("carrier"))
    if kind == "permutation":
        return permutation_scene(data["degree"], data["generators"], data.get("alphabet"))
    raise ValueError(f"unknown scene kind {kind!r}")


def _as_point(p):
    if isinstance(p, GaussianRational):
        return (p.re, p.im)
    if isinstance(p, list):
        return tuple(p)
    return p


def stabilizer_and_transporter(scene, x, y):
    """Transporter {g : g x = y} and stabilizer {g : g x = x} by exhaustive evaluation."""
    x, y = _as_point(x), _as_point(y)
    for p in (x, y):
        if not scene.contains(p):
            raise PointNotInCarrier(f"{p} is not in the carrier", point=list(p))
    stab = [g for g in scene.elements if scene.act(g, x) == x]
    trans = [g for g in scene.elements if scene.act(g, x) == y]
    subgroup = scene.identity in stab and all(
        scene.mul(g, h) in stab for g in stab for h in stab
    )
    coset = not trans or (
        len(trans) == len(stab) and set(trans) == {scene.mul(trans[0], h) for h in stab}
    )
    cert = Certificate(
        "stabilizer",
        subgroup and coset,
        [{"check": "stabilizer is a subgroup", "ok": subgroup}, {"check": "transporter is a stabilizer coset", "ok": coset}],
        None if subgroup and coset else {"reason": "subgroup or coset property failed"},
    )
    return {"stabilizer": stab, "transporter": trans, "certificate": cert}


# cycles


def cycle_check(n, C):
    """C subset of Z/n stands for {zeta^c}; a cycle must satisfy <x,y>^n = 1 (automatic
    here) and be closed under mu_n, which forces C = Z/n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    C = {int(c) % n for c in C}
    checks = [{"check": "<x,y>^n = 1", "ok": True}]
    if not C:
        return Certificate("cycle", False, checks, {"reason": "empty: a cycle of n >= 1 elements is inhabited"})
    for shift in range(n):
        for x in sorted(C):
            if (x + shift) % n not in C:
                checks.append({"check": "closed under mu_n", "ok": False})
                return Certificate(
                    "cycle", False, checks,
                    {"reason": "not closed under rotation", "shift": shift, "element": x, "image": (x + shift) % n},
                )
    checks.append({"check": "closed under mu_n", "ok": True})
    return Certificate("cycle", True, checks)


# crystallographic extensions


def _int_matrix(M):
    return tuple(tuple(int(x) for x in row) for row in M)


def check_finite_matrix_group(gamma):
    gamma = [_int_matrix(M) for M in gamma]
    n = len(gamma[0])
    ident = _identity(n)
    members = set(gamma)
    if ident not in members:
        raise NotAGroup("identity missing from the group", size=len(gamma))
    for A in gamma:
        if not any(_mat_mul(A, B) == ident for B in gamma):
            raise NotAGroup("element has no inverse in the group", element=[list(r) for r in A])
        for B in gamma:
            if _mat_mul(A, B) not in members:
                raise NotAGroup("not closed under multiplication", element=[list(r) for r in A])
    return gamma


class Crystallographic:
    """The split extension Z^n x| Gamma; elements are pairs (v, M) with (v,M)(w,N) = (v + Mw, MN)."""

    model = "split extension Z^n x| Gamma (a modeling choice; only existence of an extension is asserted)"

    def __init__(self, gamma):
        self.gamma = check_finite_matrix_group(gamma)
        self.n = len(self.gamma[0])
        self.identity_matrix = _identity(self.n)

    def element(self, v, M):
        M = _int_matrix(M)
        if M not in self.gamma:
            raise NotAGroup("matrix is not in Gamma", element=[list(r) for r in M])
        return (tuple(int(x) for x in v), M)

    def multiply(self, g, h):
        (v, M), (w, N) = g, h
        Mw = _mat_vec(M, w)
        return (tuple(a + b for a, b in zip(v, Mw)), _mat_mul(M, N))

    def invert(self, g):
        v, M = g
        Minv = next(B for B in self.gamma if _mat_mul(M, B) == self.identity_matrix)
        return (tuple(-x for x in _mat_vec(Minv, v)), Minv)

    def include(self, v):
        return (tuple(v), self.identity_matrix)

    def project(self, g):
        return g[1]

    def extension_check(self, box=1):
        """Exactness of 0 -> Z^n -> Gamma~ -> Gamma -> 0, elementwise on the box [-box, box]^n."""
        vectors = list(product(range(-box, box + 1), repeat=self.n))
        zero = (0,) * self.n
        checks = []

        def record(name, ok, witness=None):
            checks.append({"check": name, "ok": ok})
            return None if ok else {"reason": name, "witness": witness}

        failure = None
        # inclusion is an injective homomorphism
        bad = next(((v, w) for v in vectors for w in vectors
                    if self.include(tuple(a + b for a, b in zip(v, w))) != self.multiply(self.include(v), self.include(w))), None)
        failure = failure or record("inclusion is a homomorphism", bad is None, bad)
        bad = next(((v, w) for v in vectors for w in vectors if v != w and self.include(v) == self.include(w)), None)
        failure = failure or record("exact at Z^n (inclusion injective)", bad is None, bad)
        elements = [(v, M) for v in vectors for M in self.gamma]
        # image of inclusion = kernel of projection
        bad = next((g for g in elements if (self.project(g) == self.identity_matrix) != (g == self.include(g[0]))), None)
        failure = failure or record("exact at the middle (image = kernel)", bad is None, bad)
        bad = next((M for M in self.gamma if self.project((zero, M)) != M), None)
        failure = failure or record("exact at Gamma (projection surjective)", bad is None, bad)
        bad = next(((g, h) for g in elements for h in elements
                    if self.project(self.multiply(g, h)) != _mat_mul(self.project(g), self.project(h))), None)
        failure = failure or record("projection is a homomorphism", bad is None, bad)
        bad = next((g for g in elements if self.multiply(g, self.invert(g)) != self.include(zero)), None)
        failure = failure or record("inverses", bad is None, bad)
        info = {"n": self.n, "order_of_Gamma": len(self.gamma), "box": box, "model": self.model}
        return Certificate("extension", failure is None, checks, failure, info)


def torus_fixed_points(M, d):
    """Fixed points of M on the d-torsion (1/d)Z^n / Z^n of the torus R^n/Z^n."""
    if d < 1:
        raise ValueError("d must be at least 1")
    M = _int_matrix(M)
    n = len(M)
    out = []
    for k in product(range(d), repeat=n):
        image = _mat_vec(M, k)
        if all((a - b) % d == 0 for a, b in zip(image, k)):
            out.append(tuple(Fraction(x, d) for x in k))
    return out

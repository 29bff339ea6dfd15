"""Infinitesimal R-pushout squares and unique lifting against zero loci.

A square of infinitesimal varieties V1 -> V2, V1 -> V3, V2 -> V4, V3 -> V4 is
stored dually as Weil algebras W1..W4 with morphisms W2 -> W1, W3 -> W1,
W4 -> W2, W4 -> W3. It is an R-pushout when W4 -> W2 x_W1 W3 is a linear
isomorphism. Microlinearity is only ever certified relative to a finite
battery of such squares.
"""

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .certificates import Certificate
from .errors import SquareNotCommuting, SquareNotRPushout
from .jet import lift_eval, tangent_space
from .numbers import fmt, jsonable, to_fraction
from .weil import AlgebraMorphism, WeilElement, algebra, normalize, scalar_algebra, tensor


@dataclass(frozen=True, eq=False)
class InfSquare:
    corners: tuple  # (W1, W2, W3, W4)
    m21: AlgebraMorphism
    m31: AlgebraMorphism
    m42: AlgebraMorphism
    m43: AlgebraMorphism
    name: str = "square"

    def __post_init__(self):
        W1, W2, W3, W4 = self.corners
        for m, s, t, label in (
            (self.m21, W2, W1, "W2->W1"),
            (self.m31, W3, W1, "W3->W1"),
            (self.m42, W4, W2, "W4->W2"),
            (self.m43, W4, W3, "W4->W3"),
        ):
            if m.source != s or m.target != t:
                raise ValueError(f"morphism {label} has the wrong source or target")
        left = self.m42.then(self.m21)
        right = self.m43.then(self.m31)
        for g, a, b in zip(W4.generators, left.images, right.images):
            if a != b:
                raise SquareNotCommuting(
                    f"composites disagree on {g}: {a} vs {b}", generator=g, left=str(a), right=str(b)
                )

    def to_json(self):
        W1, W2, W3, W4 = self.corners
        out = {"name": self.name}
        for key, W in zip(("W1", "W2", "W3", "W4"), self.corners):
            out[key] = str(W.presentation)
        for key, m in (("W2->W1", self.m21), ("W3->W1", self.m31), ("W4->W2", self.m42), ("W4->W3", self.m43)):
            out[key] = {g: str(im) for g, im in zip(m.source.generators, m.images)}
        return out


def square_from_json(data, degree_cap=16):
    """Load ``{"W1": text, ..., "W4->W2": {gen: poly}, ...}``; ``data`` may be a dict or JSON text."""
    if isinstance(data, str):
        data = json.loads(data)
    W = [normalize(data[k], degree_cap) for k in ("W1", "W2", "W3", "W4")]
    W1, W2, W3, W4 = W

    def morph(key, s, t):
        images = data[key]
        return AlgebraMorphism(s, t, {g: str(images[g]) for g in s.generators})

    return InfSquare(
        tuple(W),
        morph("W2->W1", W2, W1),
        morph("W3->W1", W3, W1),
        morph("W4->W2", W4, W2),
        morph("W4->W3", W4, W3),
        data.get("name", "square"),
    )


def _patch(names):
    rels = [f"{a}*{b}" for i, a in enumerate(names) for b in names[i:]]
    return algebra(f"Q[{', '.join(names)}]/({', '.join(rels)})")


def axis_square(n, m):
    """Dual of * -> D(n), * -> D(m), x -> (x, 0), y -> (0, y) into D(n+m)."""
    xs = [f"x{i + 1}" for i in range(n)]
    ys = [f"y{j + 1}" for j in range(m)]
    W1, W2, W3, W4 = scalar_algebra(), _patch(xs), _patch(ys), _patch(xs + ys)
    return InfSquare(
        (W1, W2, W3, W4),
        AlgebraMorphism(W2, W1, [W1.zero()] * n),
        AlgebraMorphism(W3, W1, [W1.zero()] * m),
        AlgebraMorphism(W4, W2, [W2.gen(x) for x in xs] + [W2.zero()] * m),
        AlgebraMorphism(W4, W3, [W3.zero()] * n + [W3.gen(y) for y in ys]),
        f"axis:{n},{m}",
    )


def second_order_square():
    """Two second-order jets D2 agreeing to first order, glued along D.

    W1 = Q[x]/(x^2), W2 = Q[x]/(x^3), W3 = Q[y]/(y^3), and W4 = Q[s,t]/(s^3, s*t, t^2)
    is their fiber product: s -> (x, y), t -> (x^2, 0).
    """
    W1 = algebra("Q[x]/(x^2)")
    W2 = algebra("Q[x]/(x^3)")
    W3 = algebra("Q[y]/(y^3)")
    W4 = algebra("Q[s, t]/(s^3, s*t, t^2)")
    return InfSquare(
        (W1, W2, W3, W4),
        AlgebraMorphism(W2, W1, ["x"]),
        AlgebraMorphism(W3, W1, ["x"]),
        AlgebraMorphism(W4, W2, ["x", "x^2"]),
        AlgebraMorphism(W4, W3, ["y", "0"]),
        "second-order",
    )


def dimension_mismatch_square():
    """W4 = W2 = W3 = D(1), W1 = Q, both maps identity: the fiber product has dimension 3, not 2."""
    W1, D = scalar_algebra(), algebra("Q[e]/(e^2)")
    return InfSquare(
        (W1, D, D, D),
        AlgebraMorphism(D, W1, [W1.zero()]),
        AlgebraMorphism(D, W1, [W1.zero()]),
        AlgebraMorphism.identity(D),
        AlgebraMorphism.identity(D),
        "dim-mismatch",
    )


def tensor_cross_square():
    """The axis square with D(1) (x) D(1) in place of D(2); the cross term e1*e2 is a kernel witness."""
    W1 = scalar_algebra()
    W2, W3 = algebra("Q[x1]/(x1^2)"), algebra("Q[y1]/(y1^2)")
    W4 = tensor(W2, W3)
    return InfSquare(
        (W1, W2, W3, W4),
        AlgebraMorphism(W2, W1, [W1.zero()]),
        AlgebraMorphism(W3, W1, [W1.zero()]),
        AlgebraMorphism(W4, W2, [W2.gen("x1"), W2.zero()]),
        AlgebraMorphism(W4, W3, [W3.zero(), W3.gen("y1")]),
        "tensor-cross",
    )


NAMED_SQUARES = {
    "second-order": second_order_square,
    "dim-mismatch": dimension_mismatch_square,
    "tensor-cross": tensor_cross_square,
}


def named_square(spec):
    """``axis:n,m`` or one of NAMED_SQUARES."""
    if spec.startswith("axis:"):
        n, m = (int(x) for x in spec[5:].split(","))
        return axis_square(n, m)
    try:
        return NAMED_SQUARES[spec]()
    except KeyError:
        raise ValueError(f"unknown square {spec!r}") from None


def default_battery():
    return [axis_square(n, m) for n in range(3) for m in range(3)] + [second_order_square()]


def _psi(s):
    """Matrix of W4 -> W2 (+) W3."""
    return s.m42.matrix + s.m43.matrix


def is_r_pushout(s):
    """Certify that W4 -> W2 x_W1 W3 is a linear isomorphism."""
    W1, W2, W3, W4 = s.corners
    d2, d3, d4 = W2.dimension, W3.dimension, W4.dimension
    psi = _psi(s)
    kernel = linalg.nullspace(psi, d4)
    # equalizer {(u, v) : m21 u = m31 v}
    eq_rows = [list(a) + [-x for x in b] for a, b in zip(s.m21.matrix, s.m31.matrix)]
    equalizer = linalg.nullspace(eq_rows, d2 + d3) if eq_rows else [
        [Fraction(int(i == j)) for j in range(d2 + d3)] for i in range(d2 + d3)
    ]
    image_rank = linalg.rank(linalg.transpose(psi), d2 + d3) if d4 else 0
    info = {
        "square": s.name,
        "dim_W1": W1.dimension,
        "dim_W2": d2,
        "dim_W3": d3,
        "dim_W4": d4,
        "kernel_dim": len(kernel),
        "equalizer_dim": len(equalizer),
        "image_dim": image_rank,
    }
    checks = [
        {"check": "injective", "kernel_dim": len(kernel)},
        {"check": "onto equalizer", "equalizer_dim": len(equalizer), "image_dim": image_rank},
    ]
    if kernel:
        w = kernel[0]
        return Certificate(
            "r_pushout",
            False,
            checks,
            {
                "reason": "W4 -> W2 x W3 is not injective",
                "witness": {n: c for n, c in zip(W4.basis_names(), w) if c},
            },
            info,
        )
    if len(equalizer) != image_rank:
        cols = linalg.transpose(psi)
        witness = next(v for v in equalizer if not linalg.in_span(v, cols, d2 + d3))
        return Certificate(
            "r_pushout",
            False,
            checks,
            {
                "reason": f"equalizer has dimension {len(equalizer)} != {image_rank}",
                "witness": {
                    "W2": {n: c for n, c in zip(W2.basis_names(), witness[:d2]) if c},
                    "W3": {n: c for n, c in zip(W3.basis_names(), witness[d2:]) if c},
                },
            },
            info,
        )
    return Certificate("r_pushout", True, checks, None, info)


# lifting


@dataclass(frozen=True, eq=False)
class LiftProblem:
    locus: object  # ZeroLocus
    base: tuple
    square: InfSquare
    boundary2: tuple  # coordinates over W2
    boundary3: tuple  # coordinates over W3

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(to_fraction(x) for x in self.base))
        object.__setattr__(self, "boundary2", tuple(self.boundary2))
        object.__setattr__(self, "boundary3", tuple(self.boundary3))


@dataclass
class LiftReport:
    ok: bool
    lift: tuple = None  # coordinates over W4
    stages: list = field(default_factory=list)
    failure: dict = None
    checks: list = field(default_factory=list)

    def to_json(self):
        out = {"status": "pass" if self.ok else "fail", "stages": jsonable(self.stages), "checks": jsonable(self.checks)}
        if self.lift is not None:
            out["lift"] = [str(c) for c in self.lift]
        if self.failure is not None:
            out["failure"] = jsonable(self.failure)
        return out


def _check_boundary(p):
    W1, W2, W3, W4 = p.square.corners
    n = p.locus.ambient_dim
    for label, tup, W in (("W2", p.boundary2, W2), ("W3", p.boundary3, W3)):
        if len(tup) != n or any(c.algebra != W for c in tup):
            return {"stage": "boundary", "reason": f"boundary over {label} has wrong shape"}
        for c, (x, b) in enumerate(zip(tup, p.base)):
            if x.augmentation != b:
                return {"stage": "boundary", "reason": f"{label} coordinate {c} is not based at the base point"}
        for g in p.locus.constraints:
            r = lift_eval(g, list(tup))
            if not r.is_zero():
                return {"stage": "boundary", "reason": f"{label} boundary violates {g}", "residue": str(r)}
    for c, (a, b) in enumerate(zip(p.boundary2, p.boundary3)):
        ra, rb = p.square.m21(a), p.square.m31(b)
        if ra != rb:
            return {"stage": "boundary", "reason": f"restrictions to W1 disagree at coordinate {c}",
                    "left": str(ra), "right": str(rb)}
    return None


def lift_against_square(p):
    """Solve for the unique W4-coordinates restricting to the boundary and satisfying the constraints.

    The boundary is first pulled back through W4 -> W2 x_W1 W3. The lift is
    then built by filtration weight: weight-1 unknowns from the Jacobian
    system, weight-k corrections from systems whose right-hand sides involve
    only lower weights. Each stage must have exactly one solution.
    """
    bad = _check_boundary(p)
    if bad:
        return LiftReport(False, failure=bad)
    W1, W2, W3, W4 = p.square.corners
    n = p.locus.ambient_dim
    psi = _psi(p.square)
    weights, A, A_inv = W4.filtration
    cols = linalg.transpose(A)
    stages = []

    pulled = []
    for c in range(n):
        rhs = list(p.boundary2[c].coeffs) + list(p.boundary3[c].coeffs)
        sol = linalg.solve(psi, rhs, W4.dimension)
        if sol.status != "unique":
            stages.append({"stage": "boundary", **sol.to_json()})
            reason = "not unique: W4 -> W2 x W3 has a kernel" if sol.status == "underdetermined" else "boundary not in the fiber product"
            return LiftReport(False, stages=stages, failure={"stage": "boundary", "reason": reason})
        pulled.append(linalg.matvec(A_inv, sol.x))
    stages.append({"stage": "boundary", "status": "unique", "rank": W4.dimension, "unknowns": W4.dimension,
                   "equations": len(psi)})

    jac = p.locus.jacobian(p.base)
    lift = [W4.scalar(b) for b in p.base]
    for k in range(1, max(weights) + 1 if weights else 1):
        idx = [i for i, w in enumerate(weights) if w == k]
        unknowns = [(c, b) for c in range(n) for b in idx]
        col = {u: i for i, u in enumerate(unknowns)}
        rows, rhs = [], []
        for c in range(n):
            for b in idx:
                row = [Fraction(0)] * len(unknowns)
                row[col[(c, b)]] = Fraction(1)
                rows.append(row)
                rhs.append(pulled[c][b])
        residuals = [linalg.matvec(A_inv, lift_eval(g, lift).coeffs) for g in p.locus.constraints]
        for j, r in enumerate(residuals):
            low = [i for i, w in enumerate(weights) if w < k and r[i]]
            if low:
                return LiftReport(False, stages=stages, failure={
                    "stage": k, "reason": "lower-order residual did not vanish", "constraint": j})
            for b in idx:
                row = [Fraction(0)] * len(unknowns)
                for c in range(n):
                    row[col[(c, b)]] = jac[j][c]
                rows.append(row)
                rhs.append(-r[b])
        sol = linalg.solve(rows, rhs, len(unknowns))
        stages.append({"stage": k, **sol.to_json()})
        if sol.status != "unique":
            reason = "underdetermined (not unique)" if sol.status == "underdetermined" else "inconsistent"
            return LiftReport(False, stages=stages, failure={"stage": k, "reason": reason})
        for (c, b), x in zip(unknowns, sol.x):
            if x:
                lift[c] = lift[c] + WeilElement(W4, tuple(x * v for v in cols[b]))

    checks = []
    for g in p.locus.constraints:
        r = lift_eval(g, lift)
        checks.append({"check": "constraint", "constraint": str(g), "residue": str(r)})
        if not r.is_zero():
            return LiftReport(False, stages=stages, checks=checks,
                              failure={"stage": "verify", "reason": f"lift violates {g}"})
    for c in range(n):
        if p.square.m42(lift[c]) != p.boundary2[c] or p.square.m43(lift[c]) != p.boundary3[c]:
            return LiftReport(False, stages=stages, checks=checks,
                              failure={"stage": "verify", "reason": f"restriction mismatch at coordinate {c}"})
    checks.append({"check": "restrictions", "status": "equal"})
    return LiftReport(True, tuple(lift), stages, None, checks)


# battery


def complete_jet(locus, base, W, seed, rng=None, pin=None):
    """Extend first-order data to a point of the locus over W, order by order.

    ``seed[c]`` is a W-element whose weight-1 adapted components are kept.
    Higher weights solve J n = -residual; free directions get small random
    kernel components when ``rng`` is given. ``pin`` optionally adds linear
    conditions ``m(coordinate) = target`` for an algebra map m (pairs
    (m, targets)), imposed weight by weight. Returns None if some stage is
    inconsistent.
    """
    n = locus.ambient_dim
    weights, A, A_inv = W.filtration
    cols = linalg.transpose(A)
    jac = locus.jacobian(base)
    coords = [W.scalar(to_fraction(b)) for b in base]
    for c in range(n):
        comps = linalg.matvec(A_inv, seed[c].coeffs)
        for b, w in enumerate(weights):
            if w == 1 and comps[b]:
                coords[c] = coords[c] + WeilElement(W, tuple(comps[b] * v for v in cols[b]))
    top = max(weights) if weights else 0
    for k in range(1, top + 1):
        residuals = [linalg.matvec(A_inv, lift_eval(g, coords).coeffs) for g in locus.constraints]
        if any(r[i] for r in residuals for i, w in enumerate(weights) if w < k):
            return None
        if k == 1:
            if any(r[b] for r in residuals for b, w in enumerate(weights) if w == 1):
                return None
            continue
        idx = [i for i, w in enumerate(weights) if w == k]
        unknowns = [(c, b) for c in range(n) for b in idx]
        col = {u: i for i, u in enumerate(unknowns)}
        rows, rhs = [], []
        for j, r in enumerate(residuals):
            for b in idx:
                row = [Fraction(0)] * len(unknowns)
                for c in range(n):
                    row[col[(c, b)]] = jac[j][c]
                rows.append(row)
                rhs.append(-r[b])
        if pin is not None:
            m, targets = pin
            tw, _, tinv = m.target.filtration
            for c in range(n):
                have = linalg.matvec(tinv, m(coords[c]).coeffs)
                want = linalg.matvec(tinv, targets[c].coeffs)
                images = [linalg.matvec(tinv, m(WeilElement(W, tuple(cols[b]))).coeffs) for b in idx]
                for t, w in enumerate(tw):
                    if w != k:
                        continue
                    row = [Fraction(0)] * len(unknowns)
                    for b, im in zip(idx, images):
                        row[col[(c, b)]] = im[t]
                    rows.append(row)
                    rhs.append(want[t] - have[t])
        if not unknowns:
            continue
        sol = linalg.solve(rows, rhs, len(unknowns)) if rows else linalg.solve(
            [[Fraction(0)] * len(unknowns)], [Fraction(0)], len(unknowns))
        if sol.status == "inconsistent":
            return None
        x = list(sol.x)
        if rng is not None and sol.status == "underdetermined":
            for v in linalg.nullspace(rows, len(unknowns)):
                t = rng.randint(-1, 1)
                x = [a + t * b for a, b in zip(x, v)]
        for (c, b), val in zip(unknowns, x):
            if val:
                coords[c] = coords[c] + WeilElement(W, tuple(val * v for v in cols[b]))
    for g in locus.constraints:
        if not lift_eval(g, coords).is_zero():
            return None
    return tuple(coords)


def sample_boundary(locus, base, square, rng):
    """A random boundary pair (over W2, W3) built from tangent-kernel combinations."""
    W1, W2, W3, W4 = square.corners
    kernel = tangent_space(locus, base)
    weights, A, _ = W4.filtration
    cols = linalg.transpose(A)
    seed4 = [W4.scalar(b) for b in base]
    for b, w in enumerate(weights):
        if w != 1:
            continue
        coeffs = [rng.randint(-2, 2) for _ in kernel]
        v = [sum((t * k[c] for t, k in zip(coeffs, kernel)), Fraction(0)) for c in range(locus.ambient_dim)]
        for c in range(locus.ambient_dim):
            if v[c]:
                seed4[c] = seed4[c] + WeilElement(W4, tuple(v[c] * x for x in cols[b]))
    u2 = complete_jet(locus, base, W2, [square.m42(x) for x in seed4], rng)
    if u2 is None:
        return None
    restricted = [square.m21(x) for x in u2]
    u3 = complete_jet(locus, base, W3, [square.m43(x) for x in seed4], rng, pin=(square.m31, restricted))
    if u3 is None:
        return None
    return u2, u3


def microlinearity_battery(locus, base_points, squares=None, samples=3, seed=0):
    """Run unique-lifting checks over sampled boundaries for each base point and square.

    The verdict is relative to this finite battery only.
    """
    squares = default_battery() if squares is None else list(squares)
    for s in squares:
        cert = is_r_pushout(s)
        if not cert.ok:
            raise SquareNotRPushout(f"square {s.name} is not an infinitesimal R-pushout", square=s.name,
                                    failure=cert.failure)
    rng = random.Random(seed)
    entries = []
    all_ok = True
    for base in base_points:
        base = tuple(locus.check_point(base))
        for s in squares:
            results = []
            for _ in range(samples):
                pair = sample_boundary(locus, base, s, rng)
                if pair is None:
                    results.append({"status": "skipped", "reason": "no boundary sample at this point"})
                    continue
                report = lift_against_square(LiftProblem(locus, base, s, pair[0], pair[1]))
                entry = {"status": "pass" if report.ok else "fail",
                         "stages": [st.get("status") for st in report.stages]}
                if not report.ok:
                    entry["failure"] = report.failure
                    entry["boundary"] = {"W2": [str(x) for x in pair[0]], "W3": [str(x) for x in pair[1]]}
                    all_ok = False
                results.append(entry)
            entries.append({"base": [fmt(x) for x in base], "square": s.name, "samples": results})
    return {
        "status": "pass" if all_ok else "fail",
        "scope": "finite battery only; not a proof of microlinearity",
        "squares": [s.name for s in squares],
        "entries": entries,
    }

"""Smooth programs evaluated at Weil-algebra arguments.

Evaluating a program at ``x + e`` in ``Q[e]/(e^(k+1))`` yields its Taylor
coefficients up to order k; tensors of such algebras give mixed partials and
D(n) gives Jacobians. Exact mode keeps Fraction coefficients throughout and
refuses transcendental primitives; float mode is only for those.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import linalg
from .errors import (
    DivisionByInfinitesimal,
    ExactModeUnsupportedPrimitive,
    NotTangent,
    ParseError,
    PointNotOnLocus,
    UndeclaredVariable,
)
from .numbers import to_fraction
from .syntax import parse_expression, variables
from .weil import WeilElement, dual_numbers, first_order_patch, scalar_algebra, tensor_with_inclusions, truncated

MODES = ("exact", "float")


@dataclass(frozen=True)
class Primitive:
    """A unary function known through its derivative tower: ``tower(k, s)`` is the k-th derivative at s."""

    name: str
    tower: object
    exact: bool = False


def _exp_tower(k, s):
    return math.exp(s)


def _log_tower(k, s):
    if k == 0:
        return math.log(s)
    return (-1) ** (k - 1) * factorial(k - 1) / s**k


def _sin_tower(k, s):
    return (math.sin, math.cos, lambda t: -math.sin(t), lambda t: -math.cos(t))[k % 4](s)


def _cos_tower(k, s):
    return (math.cos, lambda t: -math.sin(t), lambda t: -math.cos(t), math.sin)[k % 4](s)


DEFAULT_PRIMITIVES = {
    "exp": Primitive("exp", _exp_tower),
    "log": Primitive("log", _log_tower),
    "sin": Primitive("sin", _sin_tower),
    "cos": Primitive("cos", _cos_tower),
}


class Registry(dict):
    def register(self, name, tower, exact=False):
        self[name] = Primitive(name, tower, exact)
        return self[name]


def default_registry():
    return Registry(DEFAULT_PRIMITIVES)


# DAG


@dataclass(frozen=True, eq=False)
class Node:
    op: str  # var | const | add | sub | mul | div | prim
    args: tuple = ()
    value: object = None  # variable name, constant, or primitive name
    label: str = ""  # div: printed denominator (the nonvanishing obligation)


class _Builder:
    def __init__(self):
        self.memo = {}

    def make(self, op, args=(), value=None, label=""):
        key = (op, value, tuple(id(a) for a in args))
        node = self.memo.get(key)
        if node is None:
            node = Node(op, tuple(args), value, label)
            self.memo[key] = node
        return node


def unparse(tree):
    tag = tree[0]
    if tag == "num":
        return str(tree[1])
    if tag == "var":
        return tree[1]
    if tag == "neg":
        return f"-({unparse(tree[1])})"
    if tag == "call":
        return f"{tree[1]}({unparse(tree[2])})"
    if tag == "pow":
        return f"({unparse(tree[1])})^{tree[2]}" if tree[2] >= 0 else f"({unparse(tree[1])})^({tree[2]})"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[tag]
    return f"({unparse(tree[1])} {sym} {unparse(tree[2])})"


@dataclass(frozen=True, eq=False)
class SmoothProgram:
    inputs: tuple
    body: Node
    registry: Registry = field(default_factory=default_registry)
    source: str = ""

    @classmethod
    def parse(cls, text, inputs=None, registry=None):
        registry = default_registry() if registry is None else registry
        tree = parse_expression(text)
        used = variables(tree)
        if inputs is None:
            inputs = used
        inputs = tuple(inputs)
        for v in used:
            if v not in inputs:
                raise UndeclaredVariable(f"variable {v!r} is not an input", variable=v, inputs=list(inputs))
        b = _Builder()
        body = _compile(tree, b, registry)
        return cls(inputs, body, registry, text)

    def __str__(self):
        return self.source

    def __repr__(self):
        return f"SmoothProgram({self.source!r}, inputs={self.inputs!r})"

    def nodes(self):
        """Nodes in dependency order (children first)."""
        order, seen = [], set()
        stack = [(self.body, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in seen:
                continue
            if expanded:
                seen.add(id(node))
                order.append(node)
            else:
                stack.append((node, True))
                stack.extend((a, False) for a in node.args if id(a) not in seen)
        return order


def _compile(tree, b, registry):
    tag = tree[0]
    if tag == "num":
        return b.make("const", value=tree[1])
    if tag == "var":
        return b.make("var", value=tree[1])
    if tag == "neg":
        return b.make("sub", (b.make("const", value=Fraction(0)), _compile(tree[1], b, registry)))
    if tag == "call":
        if tree[1] not in registry:
            raise ParseError(f"unknown function {tree[1]!r}", expected=f"one of {sorted(registry)}")
        return b.make("prim", (_compile(tree[2], b, registry),), value=tree[1])
    if tag == "pow":
        base = _compile(tree[1], b, registry)
        k = tree[2]
        node = _power(base, abs(k), b)
        if k < 0:
            node = b.make("div", (b.make("const", value=Fraction(1)), node), label=unparse(("pow", tree[1], -k)))
        return node
    args = (_compile(tree[1], b, registry), _compile(tree[2], b, registry))
    label = unparse(tree[2]) if tag == "div" else ""
    return b.make(tag, args, label=label)


def _power(base, k, b):
    # square-and-multiply; shared squares make this a DAG rather than a tree
    if k == 0:
        return b.make("const", value=Fraction(1))
    result = None
    square = base
    while k:
        if k & 1:
            result = square if result is None else b.make("mul", (result, square))
        k >>= 1
        if k:
            square = b.make("mul", (square, square))
    return result


# evaluation


def _is_zero_aug(x):
    if isinstance(x, WeilElement):
        return x.augmentation == 0
    return x == 0


def lift_eval(f, args, mode="exact"):
    """Evaluate ``f`` with Weil-element (or scalar) arguments."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if len(args) != len(f.inputs):
        raise ValueError(f"program takes {len(f.inputs)} arguments, got {len(args)}")
    algebra = next((a.algebra for a in args if isinstance(a, WeilElement)), None)
    if algebra is None:
        algebra = scalar_algebra()
    values = []
    for a in args:
        if not isinstance(a, WeilElement):
            a = algebra.scalar(float(a) if mode == "float" else to_fraction(a))
        elif mode == "float":
            a = a.to_float()
        values.append(a)
    env = dict(zip(f.inputs, values))
    memo = {}
    for node in f.nodes():
        memo[id(node)] = _step(node, memo, env, mode, algebra, f.registry)
    out = memo[id(f.body)]
    if not isinstance(out, WeilElement):
        out = algebra.scalar(out)
    return out


def _step(node, memo, env, mode, algebra, registry):
    op = node.op
    if op == "const":
        return float(node.value) if mode == "float" else node.value
    if op == "var":
        return env[node.value]
    a = memo[id(node.args[0])]
    if op == "prim":
        prim = registry[node.value]
        if mode == "exact" and not prim.exact:
            raise ExactModeUnsupportedPrimitive(
                f"primitive {prim.name!r} needs float mode", primitive=prim.name
            )
        return apply_primitive(prim, a if isinstance(a, WeilElement) else algebra.scalar(a))
    b = memo[id(node.args[1])]
    if op == "add":
        return a + b if isinstance(a, WeilElement) or not isinstance(b, WeilElement) else b + a
    if op == "sub":
        return a - b if isinstance(a, WeilElement) or not isinstance(b, WeilElement) else -b + a
    if op == "mul":
        return a * b if isinstance(a, WeilElement) or not isinstance(b, WeilElement) else b * a
    if op == "div":
        if _is_zero_aug(b):
            raise DivisionByInfinitesimal(
                f"denominator {node.label} has zero augmentation", obligation=f"{node.label} != 0"
            )
        if isinstance(b, WeilElement):
            return (a if isinstance(a, WeilElement) else algebra.scalar(a)) / b
        return a / b
    raise ValueError(f"unknown node {op!r}")


def apply_primitive(prim, a):
    """f(s + n) = sum_{k<d} f^(k)(s) n^k / k!, finite because n is nilpotent."""
    s = a.augmentation
    n = a.nilpotent_part()
    d = a.algebra.nilpotency_degree
    total = a.algebra.scalar(s * 0)
    term = a.algebra.scalar(s * 0 + 1)
    for k in range(d):
        total = total + term * (prim.tower(k, s) / factorial(k))
        term = term * n
    return total


def evaluate_at(f, point, mode="exact"):
    """Scalar value of ``f`` at a rational point."""
    return lift_eval(f, list(point), mode).augmentation


def derivative(f, at, mode="exact"):
    """Epsilon coefficient of f(at + e) in the dual numbers."""
    D = dual_numbers()
    x = D.scalar(to_fraction(at) if mode == "exact" else float(at)) + D.gen("e")
    return lift_eval(f, [x], mode).coeffs[1]


def taylor(f, at, order, mode="exact"):
    """Coefficients c_0..c_order of f(at + e) in Q[e]/(e^(order+1))."""
    W = truncated(order)
    x = W.scalar(to_fraction(at) if mode == "exact" else float(at))
    if order > 0:
        x = x + W.gen("e")
    out = lift_eval(f, [x], mode)
    # basis of Q[e]/(e^(k+1)) is 1, e, ..., e^k in that order
    return list(out.coeffs)


def mixed_partial(f, at, multi_index, mode="exact"):
    """Partial derivative of multi-index ``multi_index`` at ``at`` via a tensor of truncated algebras."""
    if len(at) != len(f.inputs) or len(multi_index) != len(f.inputs):
        raise ValueError("point and multi-index must match the program inputs")
    factors = [truncated(k, f"e{i + 1}") for i, k in enumerate(multi_index)]
    T, incs = tensor_with_inclusions(*factors)
    args = []
    for i, (x, inc) in enumerate(zip(at, incs)):
        base = T.scalar(to_fraction(x))
        args.append(base + inc(factors[i].gen(f"e{i + 1}")))
    out = lift_eval(f, args, mode)
    c = out.coefficient(tuple(multi_index))
    scale = 1
    for k in multi_index:
        scale *= factorial(k)
    return c * scale


# zero loci and tangent vectors


@dataclass(frozen=True, eq=False)
class ZeroLocus:
    ambient_dim: int
    constraints: tuple = ()
    names: tuple = None

    def __post_init__(self):
        names = self.names or tuple(f"x{i + 1}" for i in range(self.ambient_dim))
        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for g in self.constraints:
            if g.inputs != self.names:
                raise ValueError("constraints must share the locus input list")

    @classmethod
    def parse(cls, constraints, names):
        names = tuple(names)
        return cls(len(names), tuple(SmoothProgram.parse(c, names) for c in constraints), names)

    def with_constraints(self, extra):
        return ZeroLocus(self.ambient_dim, self.constraints + tuple(extra), self.names)

    def check_point(self, at):
        at = [to_fraction(x) for x in at]
        if len(at) != self.ambient_dim:
            raise ValueError("point has wrong dimension")
        for g in self.constraints:
            value = evaluate_at(g, at)
            if value:
                raise PointNotOnLocus(
                    f"constraint {g} is {value} at the base point", constraint=str(g), value=value
                )
        return at

    def jacobian(self, at):
        """Jacobian rows at ``at``, read off one lift through D(n)."""
        at = [to_fraction(x) for x in at]
        n = self.ambient_dim
        D = first_order_patch(n, "d")
        args = [D.scalar(x) + D.gen(f"d{i + 1}") for i, x in enumerate(at)]
        return [list(lift_eval(g, args).coeffs[1:]) for g in self.constraints]

    def to_json(self):
        return {"variables": list(self.names), "constraints": [str(g) for g in self.constraints]}


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A pointed map D -> Z, stored as base point and direction."""

    locus: ZeroLocus
    base: tuple
    direction: tuple

    def __post_init__(self):
        base = tuple(self.locus.check_point(self.base))
        direction = tuple(to_fraction(x) for x in self.direction)
        if len(direction) != self.locus.ambient_dim:
            raise ValueError("direction has wrong dimension")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", direction)
        for g, value in zip(self.locus.constraints, self.lift_residues()):
            if value:
                raise NotTangent(
                    f"lifting through {g} leaves {value}*e", constraint=str(g), residue=value
                )

    def curve(self, algebra=None, generator="e"):
        """Coordinates base + direction*e over ``algebra`` (dual numbers by default)."""
        algebra = dual_numbers() if algebra is None else algebra
        e = algebra.gen(generator)
        return [algebra.scalar(b) + e * v for b, v in zip(self.base, self.direction)]

    def lift_residues(self):
        curve = self.curve()
        return [lift_eval(g, curve).coeffs[1] for g in self.locus.constraints]

    def __eq__(self, other):
        if not isinstance(other, TangentVector):
            return NotImplemented
        return self.locus is other.locus and self.base == other.base and self.direction == other.direction

    def __hash__(self):
        return hash((id(self.locus), self.base, self.direction))

    def to_json(self):
        return {"base": list(self.base), "direction": list(self.direction)}


def tangent_space(Z, at):
    """Basis of the kernel of the Jacobian at ``at`` (exact elimination)."""
    at = Z.check_point(at)
    rows = Z.jacobian(at)
    basis = linalg.nullspace(rows, Z.ambient_dim) if rows else [
        [Fraction(int(i == j)) for j in range(Z.ambient_dim)] for i in range(Z.ambient_dim)
    ]
    # constructing the vectors re-verifies the tangent invariant
    return [TangentVector(Z, tuple(at), tuple(v)).direction for v in basis]


def scale_tangent(v, r):
    """(r v)(e) = v(r e), realized by precomposing with the algebra map e -> r e."""
    from .weil import AlgebraMorphism

    D = dual_numbers()
    rescale = AlgebraMorphism(D, D, [D.gen("e") * to_fraction(r)])
    curve = [rescale(c) for c in v.curve(D)]
    return TangentVector(v.locus, v.base, tuple(c.coeffs[1] for c in curve))


def tangent_combine(v, w, r=1, s=1):
    """r v + s w through the unique D(2) lift of (r v, s w), then the diagonal e -> (e, e)."""
    from .errors import LiftFailed
    from .microlinear import LiftProblem, axis_square, lift_against_square
    from .weil import AlgebraMorphism

    if v.locus is not w.locus or v.base != w.base:
        raise ValueError("tangent vectors must share locus and base point")
    rv, sw = scale_tangent(v, r), scale_tangent(w, s)
    sq = axis_square(1, 1)
    W2, W3, W4 = sq.corners[1], sq.corners[2], sq.corners[3]
    problem = LiftProblem(v.locus, v.base, sq, tuple(rv.curve(W2, "x1")), tuple(sw.curve(W3, "y1")))
    result = lift_against_square(problem)
    if not result.ok:
        raise LiftFailed("D(2) lift failed", report=result.to_json())
    D = dual_numbers()
    diagonal = AlgebraMorphism(W4, D, [D.gen("e"), D.gen("e")])
    summed = [diagonal(c) for c in result.lift]
    return TangentVector(v.locus, v.base, tuple(c.coeffs[1] for c in summed))


def pushforward(maps, v, target):
    """Push v through a smooth map given by one program per target coordinate.

    Returns the image vector and a report on whether the induced map between
    the two tangent spaces is bijective.
    """
    if len(maps) != target.ambient_dim:
        raise ValueError("need one program per target coordinate")
    image_base = [evaluate_at(m, v.base) for m in maps]
    target.check_point(image_base)
    curve = v.curve()
    image_dir = [lift_eval(m, curve).coeffs[1] for m in maps]
    image = TangentVector(target, tuple(image_base), tuple(image_dir))

    source_basis = tangent_space(v.locus, v.base)
    target_basis = tangent_space(target, image_base)
    n = v.locus.ambient_dim
    D = first_order_patch(n, "d")
    args = [D.scalar(x) + D.gen(f"d{i + 1}") for i, x in enumerate(v.base)]
    jac = [list(lift_eval(m, args).coeffs[1:]) for m in maps]
    images = [linalg.matvec(jac, b) for b in source_basis]
    r = linalg.rank(images, target.ambient_dim) if images else 0
    report = {
        "source_dim": len(source_basis),
        "target_dim": len(target_basis),
        "rank": r,
        "iso": len(source_basis) == len(target_basis) == r,
    }
    return image, report

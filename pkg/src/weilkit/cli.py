"""Command-line front door: ``weilkit <group> <verb> [options]``.

Every invocation prints one JSON report (sorted keys, trailing newline).
Exit status is 0 on pass, 1 on a domain failure, 2 on a usage error.
"""

import argparse
import json
import random
import sys

from . import finite, jet, microlinear, orbifold, points, weil
from .errors import IoFailure, UsageError, WeilkitError
from .numbers import fmt, jsonable, to_fraction


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, synopsis=self.format_usage().strip())


def _add_globals(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--mode", choices=("exact", "float"), default=d("exact"), help="arithmetic mode")
    p.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=d(0), help="seed for sampled checks")
    p.add_argument("--degree-cap", type=int, default=d(weil.DEFAULT_DEGREE_CAP), help="normal-form degree cap")


def _rationals(text):
    return [to_fraction(x) for x in text.split(",") if x.strip()]


def _gaussian(text):
    return orbifold.GaussianRational.parse(text)


def _basis(text):
    w1, w2 = text.split(";")
    return orbifold.LatticeBasis(_gaussian(w1), _gaussian(w2))


def _matrix2(text):
    a, b, c, d = (int(x) for x in text.split(","))
    return orbifold.IntMatrix2(a, b, c, d)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc.strerror}", path=path) from None


def _text_or_file(args, attr="expr"):
    if getattr(args, attr, None) is not None:
        return getattr(args, attr)
    if getattr(args, "file", None) is not None:
        return _read(args.file).strip()
    raise UsageError(f"one of --{attr} or --file is required")


def _json_input(args):
    if getattr(args, "json", None) is not None:
        return json.loads(args.json)
    if getattr(args, "file", None) is not None:
        return json.loads(_read(args.file))
    return None


def _algebra_json(w):
    return {
        "presentation": str(w.presentation),
        "generators": list(w.generators),
        "dimension": w.dimension,
        "basis": w.basis_names(),
        "groebner": [weil.poly.format_poly(g, w.generators) for g in w.groebner],
        "nilpotency_degree": w.nilpotency_degree,
    }


# weil


def cmd_weil_normalize(args):
    w = weil.normalize(_text_or_file(args), args.degree_cap)
    return _algebra_json(w), []


def cmd_weil_standardize(args):
    p = weil.parse_presentation(_text_or_file(args))
    return {"presentation": str(weil.standardize(p)), "was_standard": p.is_standard}, []


def cmd_weil_tensor(args):
    if not args.expr or len(args.expr) < 1:
        raise UsageError("tensor needs at least one --expr")
    factors = [weil.normalize(t, args.degree_cap) for t in args.expr]
    return _algebra_json(weil.tensor(*factors, degree_cap=args.degree_cap)), []


# spec


def _point_from_args(args):
    data = _json_input(args)
    if data is not None:
        return points.point_from_json(data, args.degree_cap)
    if args.of is None or args.carrier is None:
        raise UsageError("give --of and --carrier (with --assign), or --json/--file")
    of = weil.normalize(args.of, args.degree_cap)
    carrier = weil.normalize(args.carrier, args.degree_cap)
    assignment = {}
    for item in args.assign or []:
        name, _, value = item.partition("=")
        assignment[name.strip()] = value.strip()
    return points.SpecPoint(of, carrier, assignment)


def cmd_spec_validate(args):
    p = _point_from_args(args)
    return p.to_json(), [p.certificate]


def cmd_spec_eval(args):
    p = _point_from_args(args)
    p.require_valid()
    value = points.kl_evaluate(p.of.parse_element(args.element), p)
    return {"point": p.to_json(), "element": args.element, "value": str(value),
            "coefficients": [fmt(c) for c in value.coeffs]}, [p.certificate]


# jet


def _program(args, inputs=None):
    names = args.vars.split(",") if args.vars else inputs
    f = jet.SmoothProgram.parse(_text_or_file(args), names)
    if not f.inputs:
        # a constant is still a function of one variable
        f = jet.SmoothProgram.parse(f.source, ("x",))
    return f


def _scalar(text, mode):
    return float(text) if mode == "float" else to_fraction(text)


def cmd_jet_derive(args):
    f = _program(args)
    if len(f.inputs) > 1:
        raise UsageError("derive takes a single-variable program; use 'jet partial'")
    at = _scalar(args.at, args.mode)
    return fmt(jet.derivative(f, at, args.mode)), []


def cmd_jet_taylor(args):
    f = _program(args)
    if len(f.inputs) > 1:
        raise UsageError("taylor takes a single-variable program")
    at = _scalar(args.at, args.mode)
    return [fmt(c) for c in jet.taylor(f, at, args.order, args.mode)], []


def cmd_jet_partial(args):
    f = _program(args)
    at = [_scalar(x, args.mode) for x in args.at.split(",")]
    index = [int(k) for k in args.index.split(",")]
    return fmt(jet.mixed_partial(f, at, index, args.mode)), []


def cmd_jet_tangent(args):
    Z = jet.ZeroLocus.parse(args.constraint or [], args.vars.split(","))
    basis = jet.tangent_space(Z, _rationals(args.at))
    return {"locus": Z.to_json(), "at": [fmt(x) for x in _rationals(args.at)],
            "dimension": len(basis), "basis": [[fmt(x) for x in v] for v in basis]}, []


# micro


def _square(args):
    data = _json_input(args)
    if data is not None:
        return microlinear.square_from_json(data, args.degree_cap)
    if args.square is None:
        raise UsageError("give --square NAME or --json/--file")
    return microlinear.named_square(args.square)


def cmd_micro_check(args):
    s = _square(args)
    cert = microlinear.is_r_pushout(s)
    return {"square": s.to_json()}, [cert]


def cmd_micro_battery(args):
    Z = jet.ZeroLocus.parse(args.constraint or [], args.vars.split(","))
    bases = [_rationals(a) for a in args.at]
    squares = [microlinear.named_square(s) for s in args.square] if args.square else None
    result = microlinear.microlinearity_battery(Z, bases, squares, args.samples, args.seed)
    result["locus"] = Z.to_json()
    return result, []


# orbifold


def cmd_orbifold_sl2z(args):
    result, certs = {}, []
    if args.matrix is not None:
        M = _matrix2(args.matrix)
        if args.tau is None:
            raise UsageError("--matrix needs --tau")
        tau = _gaussian(args.tau)
        result["matrix"] = M.rows()
        result["mobius"] = orbifold.mobius(M, tau)
        if args.p is not None:
            t2, p2 = orbifold.fiber_action(M, tau, _gaussian(args.p))
            result["fiber_action"] = {"tau": t2, "p": p2}
            ok = orbifold.fiber_lattice_check(M, tau, _gaussian(args.p))
            certs.append(orbifold.Certificate("fiber-lattice", ok, [{"check": "lattice preserved", "ok": ok}]))
    if args.basis1 is not None:
        B1 = _basis(args.basis1)
        if args.basis2 is None:
            raise UsageError("--basis1 needs --basis2")
        B2 = _basis(args.basis2)
        same = orbifold.lattice_equal(B1, B2)
        result["lattice_equal"] = same
        if same:
            result["basis_change"] = orbifold.basis_change(B1, B2).rows()
    if not result:
        raise UsageError("give --matrix/--tau or --basis1/--basis2")
    return result, certs


def _builtin_scene(name):
    if name == "c4":
        return orbifold.c4_rotation_scene()
    if name == "sigma2":
        return orbifold.configuration_scene()
    raise UsageError(f"unknown scene {name!r} (c4, sigma2)")


def _scene_point(scene, text):
    parts = [x.strip() for x in text.split(",")]
    if scene.carrier is None:
        return tuple(to_fraction(x) for x in parts)
    return tuple(parts)


def cmd_orbifold_scene(args):
    data = _json_input(args)
    scene = orbifold.scene_from_json(data) if data is not None else _builtin_scene(args.builtin or "c4")
    scene.check_group()
    x, y = _scene_point(scene, args.x), _scene_point(scene, args.y if args.y is not None else args.x)
    out = orbifold.stabilizer_and_transporter(scene, x, y)
    return {
        "order": len(scene.elements),
        "x": list(x),
        "y": list(y),
        "stabilizer": [scene.label(g) for g in out["stabilizer"]],
        "transporter": [scene.label(g) for g in out["transporter"]],
    }, [out["certificate"]]


def cmd_orbifold_torus(args):
    result, certs = {}, []
    if args.matrix is not None:
        M = json.loads(args.matrix)
        pts = orbifold.torus_fixed_points(M, args.denominator)
        result["fixed_points"] = pts
        result["count"] = len(pts)
    if args.gamma is not None:
        X = orbifold.Crystallographic(json.loads(args.gamma))
        certs.append(X.extension_check(args.box))
        result["model"] = X.model
    if not result:
        raise UsageError("give --matrix and/or --gamma")
    return result, certs


def cmd_orbifold_cycle(args):
    C = [int(c) for c in args.set.split(",") if c.strip()] if args.set else []
    return {"n": args.n, "set": sorted(set(c % args.n for c in C))}, [orbifold.cycle_check(args.n, C)]


# fin


def _assoc(data):
    return finite.Association(data["left"], data["right"], [tuple(p) for p in data["pairs"]])


def _assoc_json(a):
    return {"left": list(a.left), "right": list(a.right),
            "pairs": sorted(([x, i] for x, i in a.relation), key=repr)}


def _random_association(rng):
    left = [f"x{i}" for i in range(rng.randint(1, 5))]
    right = list(range(rng.randint(1, 4)))
    return finite.Association(left, right, {(x, rng.choice(right)) for x in left})


def cmd_fin_assoc(args):
    data = _json_input(args)
    if data is None:
        rng = random.Random(args.seed)
        r = _random_association(rng)
        data = {"op": args.op, "args": [_assoc_json(r)]}
        if args.op == "compose":
            right = list(range(rng.randint(1, 3)))
            s = finite.Association(r.right, right, {(y, rng.choice(right)) for y in r.right})
            data["args"].append(_assoc_json(s))
        elif args.op == "product":
            data["args"].append(_assoc_json(_random_association(rng)))
        else:
            universe = [f"x{i}" for i in range(6)]
            subs = []
            for _ in range(rng.randint(1, 3)):
                left = rng.sample(universe, rng.randint(1, 6))
                right = list(range(len(left)))
                subs.append(_assoc_json(finite.Association(left, right, set(zip(left, right)))))
            data = {"op": "union", "args": subs, "universe": universe}
    op = data.get("op", args.op)
    assocs = [_assoc(a) for a in data["args"]]
    if op == "compose":
        out = finite.compose(*assocs)
        return {"op": op, "inputs": data["args"], "association": _assoc_json(out)}, []
    if op == "product":
        out = finite.product_association(*assocs)
        return {"op": op, "inputs": data["args"], "association": _assoc_json(out)}, []
    if op == "union":
        out, cert = finite.union_check(assocs, data["universe"])
        return {"op": op, "inputs": data["args"], "association": _assoc_json(out)}, [cert]
    raise UsageError(f"unknown association op {op!r}")


def build_parser():
    parser = _Parser(prog="weilkit", description="Exact Weil-algebra and orbifold toolkit")
    _add_globals(parser, suppress=False)
    groups = parser.add_subparsers(dest="group", metavar="GROUP", parser_class=_Parser)
    groups.required = True

    def verb(group, name, func, help_text):
        p = group.add_parser(name, help=help_text)
        _add_globals(p, suppress=True)
        p.set_defaults(func=func)
        return p

    def sources(p, expr_help="inline text"):
        p.add_argument("--expr", help=expr_help)
        p.add_argument("--file", help="read the input from a file")

    g = groups.add_parser("weil", help="Weil algebra presentations").add_subparsers(
        dest="verb", metavar="VERB", parser_class=_Parser, required=True)
    sources(verb(g, "normalize", cmd_weil_normalize, "normal form of a presentation"), "presentation text")
    sources(verb(g, "standardize", cmd_weil_standardize, "shift the augmentation to zero"), "presentation text")
    p = verb(g, "tensor", cmd_weil_tensor, "tensor product of presentations")
    p.add_argument("--expr", action="append", required=True, help="a factor (repeatable)")

    g = groups.add_parser("spec", help="points of Spec W").add_subparsers(
        dest="verb", metavar="VERB", parser_class=_Parser, required=True)
    for name, func in (("validate", cmd_spec_validate), ("eval", cmd_spec_eval)):
        p = verb(g, name, func, f"{name} a point")
        p.add_argument("--of", help="source presentation")
        p.add_argument("--carrier", help="carrier presentation")
        p.add_argument("--assign", action="append", help="generator=element (repeatable)")
        p.add_argument("--json", help="point as JSON text")
        p.add_argument("--file", help="point as a JSON file")
        if name == "eval":
            p.add_argument("--element", required=True, help="polynomial representative to evaluate")

    g = groups.add_parser("jet", help="jet evaluation of smooth programs").add_subparsers(
        dest="verb", metavar="VERB", parser_class=_Parser, required=True)
    p = verb(g, "derive", cmd_jet_derive, "first derivative")
    sources(p, "program text")
    p.add_argument("--vars")
    p.add_argument("--at", required=True)
    p = verb(g, "taylor", cmd_jet_taylor, "Taylor coefficients")
    sources(p, "program text")
    p.add_argument("--vars")
    p.add_argument("--at", required=True)
    p.add_argument("--order", type=int, required=True)
    p = verb(g, "partial", cmd_jet_partial, "mixed partial derivative")
    sources(p, "program text")
    p.add_argument("--vars", required=True, help="comma-separated input order")
    p.add_argument("--at", required=True, help="comma-separated point")
    p.add_argument("--index", required=True, help="comma-separated multi-index")
    p = verb(g, "tangent", cmd_jet_tangent, "tangent space of a zero locus")
    p.add_argument("--constraint", action="append", help="constraint program (repeatable)")
    p.add_argument("--vars", required=True)
    p.add_argument("--at", required=True)

    g = groups.add_parser("micro", help="microlinearity").add_subparsers(
        dest="verb", metavar="VERB", parser_class=_Parser, required=True)
    p = verb(g, "check", cmd_micro_check, "certify an infinitesimal R-pushout square")
    p.add_argument("--square", help="axis:n,m, second-order, dim-mismatch or tensor-cross")
    p.add_argument("--json")
    p.add_argument("--file")
    p = verb(g, "battery", cmd_micro_battery, "unique-lifting battery on a zero locus")
    p.add_argument("--constraint", action="append")
    p.add_argument("--vars", required=True)
    p.add_argument("--at", action="append", required=True, help="base point (repeatable)")
    p.add_argument("--square", action="append", help="square name (repeatable; default battery otherwise)")
    p.add_argument("--samples", type=int, default=3)

    g = groups.add_parser("orbifold", help="orbifold group algebra").add_subparsers(
        dest="verb", metavar="VERB", parser_class=_Parser, required=True)
    p = verb(g, "sl2z", cmd_orbifold_sl2z, "Mobius action, fiber action, basis change")
    p.add_argument("--matrix", help="a,b,c,d")
    p.add_argument("--tau", help="re,im")
    p.add_argument("--p", help="re,im")
    p.add_argument("--basis1", help="w1re,w1im;w2re,w2im")
    p.add_argument("--basis2", help="w1re,w1im;w2re,w2im")
    p = verb(g, "scene", cmd_orbifold_scene, "stabilizer and transporter")
    p.add_argument("--builtin", help="c4 or sigma2")
    p.add_argument("--json")
    p.add_argument("--file")
    p.add_argument("--x", required=True, help="comma-separated point")
    p.add_argument("--y", help="comma-separated point (defaults to x)")
    p = verb(g, "torus", cmd_orbifold_torus, "torus fixed points and crystallographic extension")
    p.add_argument("--matrix", help="integer matrix as JSON rows")
    p.add_argument("--denominator", type=int, default=2)
    p.add_argument("--gamma", help="finite group as a JSON list of matrices")
    p.add_argument("--box", type=int, default=1)
    p = verb(g, "cycle", cmd_orbifold_cycle, "cycle check in Z/n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", default="", help="comma-separated residues")

    g = groups.add_parser("fin", help="properly finite sets").add_subparsers(
        dest="verb", metavar="VERB", parser_class=_Parser, required=True)
    p = verb(g, "assoc", cmd_fin_assoc, "association calculus")
    p.add_argument("--op", choices=("compose", "product", "union"), default="compose")
    p.add_argument("--json")
    p.add_argument("--file")
    return parser


def _inputs(args):
    skip = {"func", "out", "group", "verb"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def run(argv):
    """Parse and dispatch; returns (report dict, exit code)."""
    report = {"verb": None, "inputs": {}, "result": None, "certificates": [], "status": "error", "error": None}
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        words = [a for a in argv if not a.startswith("-")][:2]
        report["verb"] = ".".join(words) or None
        report["error"] = exc.to_json()
        report["status"] = "usage"
        return report, 2, None
    report["verb"] = f"{args.group}.{args.verb}"
    report["inputs"] = jsonable(_inputs(args))
    try:
        result, certs = args.func(args)
    except UsageError as exc:
        report["error"] = exc.to_json()
        report["status"] = "usage"
        return report, 2, args.out
    except WeilkitError as exc:
        report["error"] = exc.to_json()
        return report, 1, args.out
    except (ValueError, TypeError, KeyError, ZeroDivisionError, json.JSONDecodeError) as exc:
        report["error"] = {"name": type(exc).__name__, "message": str(exc), "details": {}}
        return report, 1, args.out
    report["result"] = jsonable(result)
    report["certificates"] = [c.to_json() for c in certs]
    ok = all(c.ok for c in certs) and not (isinstance(result, dict) and result.get("status") == "fail")
    report["status"] = "pass" if ok else "fail"
    return report, 0 if ok else 1, args.out


def render(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(report, target=None, stream=None):
    text = render(report)
    if target is None:
        (stream or sys.stdout).write(text)
        return
    try:
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {target}: {exc.strerror}", path=target) from None


def main(argv=None):
    report, code, target = run(sys.argv[1:] if argv is None else argv)
    try:
        emit(report, target)
    except IoFailure as exc:
        report["error"] = exc.to_json()
        report["status"] = "error"
        emit(report)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Acceptance gate: eleven criteria, one PASS/FAIL line each.

Run under pytest (lines are printed in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import json
import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))
import oracles  # noqa: E402

from weilkit import cli  # noqa: E402
from weilkit.errors import NotWeil  # noqa: E402
from weilkit.finite import Association, compose, product_association, union_check  # noqa: E402
from weilkit.jet import SmoothProgram, TangentVector, ZeroLocus, scale_tangent, tangent_combine, tangent_space, taylor  # noqa: E402
from weilkit.orbifold import (  # noqa: E402
    Crystallographic,
    GaussianRational as G,
    IntMatrix2,
    LatticeBasis,
    basis_change,
    c4_rotation_scene,
    configuration_scene,
    fiber_action,
    lattice_equal,
    mobius,
    stabilizer_and_transporter,
    torus_fixed_points,
)
from weilkit.weil import normalize, tensor  # noqa: E402

RESULTS = []


def record(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def cli_result(*argv):
    report, code, _ = cli.run(list(argv))
    return report, code


# corpus of single-variable rational functions with a point where each is defined

HAND = [
    ("x^3", 2), ("x^2 + 3*x - 7", Fraction(1, 2)), ("1/x", 3), ("1/(1 - x)", 0), ("(x + 1)/(x - 1)", 2),
    ("x^(-2)", -1), ("(2*x - 3)^4", 1), ("x^5 - 5*x^3 + 4*x", Fraction(-2, 3)), ("1/(x^2 + 1)", 0),
    ("x/(x^2 + 1)", 1), ("(x^2 - 1)/(x^2 + 1)", Fraction(1, 3)), ("(1 + x)^7", 0), ("3/(2*x + 5)^2", 1),
    ("x^2/(1 - x)^3", Fraction(1, 4)), ("(x - 2)*(x + 3)*(x - 5)", 4), ("1/(x*(x + 1))", 2),
    ("x^6 - x", Fraction(3, 2)), ("(x^3 + 1)/(x + 2)", -1), ("7", 5), ("x", -4),
]


def _random_expr(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(["x", "x", str(rng.randint(1, 5)), f"{rng.randint(1, 5)}/{rng.randint(2, 7)}"])
    op = rng.choice(["+", "-", "*", "/", "^"])
    a = _random_expr(rng, depth - 1)
    if op == "^":
        return f"({a})^{rng.randint(2, 3)}"
    return f"({a}) {op} ({_random_expr(rng, depth - 1)})"


def corpus():
    rng = random.Random(2024)
    items = list(HAND)
    while len(items) < 60:
        text = _random_expr(rng, 3)
        if "x" not in text:
            continue
        at = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        try:
            oracles.derivatives(text, at, 6)
        except (TypeError, ValueError, ZeroDivisionError):
            continue  # pole at the sample point
        items.append((text, at))
    return items


CORPUS = corpus()


def test_c01_kock_lawvere_derivative():
    bad = []
    for text, at in CORPUS:
        report, code = cli_result("jet", "derive", "--expr", text, f"--at={at}")
        expected = oracles.derivatives(text, at, 1)[1]
        if code != 0 or Fraction(report["result"]) != expected:
            bad.append((text, str(at), report["result"], str(expected)))
    record("C1 Kock-Lawvere derivative", not bad and len(CORPUS) >= 50,
           f"{len(CORPUS) - len(bad)}/{len(CORPUS)} programs match the symbolic oracle" + (f"; first mismatch {bad[0]}" if bad else ""))


def test_c02_taylor_towers():
    bad = []
    checked = 0
    for text, at in CORPUS:
        expected = oracles.derivatives(text, at, 6)
        f = SmoothProgram.parse(text, ["x"])
        for order in range(7):
            coeffs = taylor(f, at, order)
            got = [c * _fact(j) for j, c in enumerate(coeffs)]
            checked += 1
            if got != expected[: order + 1]:
                bad.append((text, order))
    record("C2 Taylor towers", not bad, f"{checked - len(bad)}/{checked} (program, order<=6) towers equal j!*c_j")


def _fact(j):
    out = 1
    for k in range(2, j + 1):
        out *= k
    return out


def test_c03_axis_squares_and_non_pushouts():
    failures = []
    for n in range(4):
        for m in range(4):
            report, code = cli_result("micro", "check", "--square", f"axis:{n},{m}")
            if code != 0 or report["certificates"][0]["status"] != "pass":
                failures.append(f"axis:{n},{m}")
    witnesses = {}
    for name in ("dim-mismatch", "tensor-cross"):
        report, code = cli_result("micro", "check", "--square", name)
        cert = report["certificates"][0]
        if code != 1 or cert["status"] != "fail" or "witness" not in cert.get("failure", {}):
            failures.append(name)
        else:
            witnesses[name] = cert["failure"]["witness"]
    record("C3 R-pushout certification", not failures,
           f"16 axis squares certified, non-pushouts rejected with witnesses {witnesses}" if not failures else f"failed: {failures}")


def _module_axioms(Z, base, rng, pairs):
    basis = tangent_space(Z, base)
    failures = 0
    agree = 0

    def rand_vec():
        coeffs = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in basis]
        return TangentVector(Z, base, tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(len(base))))

    def add(v, w):
        return tangent_combine(v, w)

    def scale(r, v):
        return scale_tangent(v, r)

    zero = TangentVector(Z, base, (0,) * len(base))
    for _ in range(pairs):
        v, w, u = rand_vec(), rand_vec(), rand_vec()
        r, s = Fraction(rng.randint(-4, 4), rng.randint(1, 3)), Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        laws = [
            add(add(v, w), u) == add(v, add(w, u)),
            add(v, w) == add(w, v),
            add(v, zero) == v,
            add(v, scale(-1, v)) == zero,
            scale(r, scale(s, v)) == scale(r * s, v),
            scale(1, v) == v,
            scale(r, add(v, w)) == add(scale(r, v), scale(r, w)),
            scale(r + s, v) == add(scale(r, v), scale(s, v)),
        ]
        failures += laws.count(False)
        # kernel-arithmetic oracle: componentwise r v + s w
        lifted = tangent_combine(v, w, r, s).direction
        if lifted == tuple(r * a + s * b for a, b in zip(v.direction, w.direction)):
            agree += 1
    return failures, agree


def test_c04_tangent_module():
    rng = random.Random(7)
    sphere = ZeroLocus.parse(["x^2 + y^2 + z^2 - 1"], ["x", "y", "z"])
    circle = ZeroLocus.parse(["a^2 + b^2 - 1"], ["a", "b"])
    cases = [(sphere, (1, 0, 0)), (sphere, (Fraction(3, 5), Fraction(4, 5), 0)), (circle, (1, 0))]
    failures, agree, total = 0, 0, 0
    for Z, base in cases:
        f, a = _module_axioms(Z, tuple(Fraction(x) for x in base), rng, 8)
        failures += f
        agree += a
        total += 8
    ok = failures == 0 and agree == total and total >= 20
    record("C4 tangent R-module", ok,
           f"8 axioms on {total} sampled pairs, {failures} violations; lift agrees with kernel arithmetic on {agree}/{total}")


def test_c05_tangent_u1():
    report, code = cli_result("jet", "tangent", "--constraint", "a^2 + b^2 - 1", "--vars", "a,b", "--at", "1,0")
    result = report["result"]
    ok = code == 0 and result["dimension"] == 1 and result["basis"] == [["0", "1"]]
    record("C5 T1 U(1)", ok, f"tangent space at (1,0) has basis {result['basis']}")


def random_sl2(rng, bound=10):
    while True:
        a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
        if a * d - b * c == 1:
            return IntMatrix2(a, b, c, d)


def random_gaussian(rng, upper=False):
    im = Fraction(rng.randint(1, 9), rng.randint(1, 5))
    if not upper:
        im *= rng.choice((-1, 1)) if rng.random() < 0.8 else 0
    return G(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), im)


def _act_on_basis(M, B):
    # (w2', w1')^T = M (w2, w1)^T
    return LatticeBasis(B.w2 * M.c + B.w1 * M.d, B.w2 * M.a + B.w1 * M.b)


def test_c06_fiber_action_and_torsor():
    rng = random.Random(11)
    bad_action = bad_lattice = 0
    for _ in range(100):
        M, N = random_sl2(rng), random_sl2(rng)
        tau = random_gaussian(rng, upper=True)
        p = random_gaussian(rng)
        while not p:
            p = random_gaussian(rng)
        lhs = fiber_action(M, *fiber_action(N, tau, p))
        rhs = fiber_action(M @ N, tau, p)
        if lhs != rhs or mobius(M @ N, tau) != mobius(M, mobius(N, tau)):
            bad_action += 1
        scaled = LatticeBasis.standard(mobius(M, tau)).scaled(tau * M.c + M.d)
        if not lattice_equal(scaled, LatticeBasis.standard(tau)):
            bad_lattice += 1
    bad_torsor = 0
    for _ in range(50):
        B1 = LatticeBasis.oriented(random_gaussian(rng), random_gaussian(rng, upper=True))
        M12, M23 = random_sl2(rng, 4), random_sl2(rng, 4)
        B2 = _act_on_basis(M12, B1)
        B3 = _act_on_basis(M23, B2)
        c12, c23, c13 = basis_change(B1, B2), basis_change(B2, B3), basis_change(B1, B3)
        if (c12 != M12 or c23 != M23 or c13 != c23 @ c12 or any(m.det != 1 for m in (c12, c23, c13))
                or basis_change(B1, B1) != IntMatrix2.identity()):
            bad_torsor += 1
    ok = bad_action == bad_lattice == bad_torsor == 0
    record("C6 fiber action and torsor", ok,
           f"100 samples: {bad_action} action-law and {bad_lattice} lattice-identity failures; "
           f"50 basis triples: {bad_torsor} torsor failures")


def test_c07_isotropy():
    c4 = c4_rotation_scene()
    at0 = stabilizer_and_transporter(c4, (0, 0), (0, 0))
    at1 = stabilizer_and_transporter(c4, (1, 0), (1, 0))
    sigma = configuration_scene()
    swap = stabilizer_and_transporter(sigma, ("a", "b"), ("b", "a"))
    labels = [sigma.label(g) for g in swap["transporter"]]
    ok = len(at0["stabilizer"]) == 4 and len(at1["stabilizer"]) == 1 and labels == ["swap"]
    record("C7 isotropy non-constancy", ok,
           f"|stab(0)| = {len(at0['stabilizer'])}, |stab(1)| = {len(at1['stabilizer'])}, transporter((a,b),(b,a)) = {labels}")


def test_c08_kummer_fixed_points():
    minus = [[-int(i == j) for j in range(4)] for i in range(4)]
    report, code = cli_result("orbifold", "torus", "--matrix", json.dumps(minus), "--denominator", "2")
    points = torus_fixed_points(minus, 2)
    ok = code == 0 and report["result"]["count"] == 16 and sorted(points) == oracles.two_torsion(4)
    record("C8 Kummer fixed points", ok, f"{len(points)} fixed points of -I on T^4, oracle has {len(oracles.two_torsion(4))}")


def test_c09_crystallographic_extension():
    outcomes = {}
    for n in (2, 4):
        ident = [[int(i == j) for j in range(n)] for i in range(n)]
        minus = [[-x for x in row] for row in ident]
        cert = Crystallographic([ident, minus]).extension_check(box=1)
        outcomes[n] = cert.ok and all(c["ok"] for c in cert.checks)
    record("C9 crystallographic extension", all(outcomes.values()),
           f"exact at all three spots for GL2: {outcomes[2]}, GL4: {outcomes[4]}")


PRESENTATIONS = [
    ("Q[]/()", [], [], None),
    ("Q[x]/(x^2)", ["x"], ["x^2"], None),
    ("Q[x,y]/(x^2, x*y, y^2)", ["x", "y"], ["x^2", "x*y", "y^2"], None),
    ("Q[x,y,z]/(x^2, x*y, x*z, y^2, y*z, z^2)", ["x", "y", "z"], ["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"], None),
    ("Q[x]/(x^3)", ["x"], ["x^3"], None),
    ("Q[x]/(x^5)", ["x"], ["x^5"], None),
    ("Q[x]/(x^8)", ["x"], ["x^8"], None),
    ("Q[x,y]/(x^2, x*y, y^3)", ["x", "y"], ["x^2", "x*y", "y^3"], None),
    ("Q[x,y]/(x^2 - y^3, x*y)", ["x", "y"], ["x^2 - y^3", "x*y"], None),
    ("Q[x,y]/(x^2 + y^2, x*y)", ["x", "y"], ["x^2 + y^2", "x*y"], None),
    ("Q[x,y]/(x^3, y^2, x*y - x^2)", ["x", "y"], ["x^3", "y^2", "x*y - x^2"], None),
    ("Q[x,y]/(y - x^2, x^3)", ["x", "y"], ["y - x^2", "x^3"], None),
    ("Q[x,y,z]/(x^2, y^2, z^2)", ["x", "y", "z"], ["x^2", "y^2", "z^2"], None),
    ("Q[x]/((x - 1)^2); aug x -> 1", ["x"], ["(x - 1)^2"], {"x": 1}),
    ("Q[x,y]/(x^2 - 4*x + 4, y^2 + 2*y + 1, (x - 2)*(y + 1)); aug x -> 2, y -> -1", ["x", "y"],
     ["x^2 - 4*x + 4", "y^2 + 2*y + 1", "(x - 2)*(y + 1)"], {"x": 2, "y": -1}),
]

TENSORS = [
    (["Q[x]/(x^3)", "Q[y]/(y^2)"], ["x", "y"], ["x^3", "y^2"]),
    (["Q[e]/(e^2)", "Q[e]/(e^2)", "Q[e]/(e^2)"], ["a", "b", "c"], ["a^2", "b^2", "c^2"]),
    (["Q[x,y]/(x^2, x*y, y^2)", "Q[t]/(t^2)"], ["x", "y", "t"], ["x^2", "x*y", "y^2", "t^2"]),
]


def test_c10_weil_certification():
    bad = []
    count = 0
    for text, names, rels, shift in PRESENTATIONS:
        w = normalize(text)
        expected = oracles.quotient_dimension(rels, names, shift)
        count += 1
        if w.dimension != expected or w.dimension > 8:
            bad.append((text, w.dimension, expected))
    for factors, names, rels in TENSORS:
        w = tensor(*(normalize(f) for f in factors))
        expected = oracles.quotient_dimension(rels, names)
        count += 1
        if w.dimension != expected:
            bad.append((factors, w.dimension, expected))
    try:
        normalize("Q[x]/(x^2 - x)")
        rejected = False
    except NotWeil:
        rejected = True
    report, code = cli_result("weil", "normalize", "--expr", "Q[x]/(x^2-x)")
    rejected = rejected and code == 1 and report["error"]["name"] == "NotWeil"
    record("C10 Weil certification", not bad and rejected and count >= 12,
           f"{count - len(bad)}/{count} presentations match the reduction oracle; Q[x]/(x^2-x) rejected: {rejected}"
           + (f"; mismatches {bad}" if bad else ""))


def _random_assoc(rng, left=None, right=None):
    left = left if left is not None else [f"x{i}" for i in range(rng.randint(1, 5))]
    right = right if right is not None else list(range(rng.randint(1, 4)))
    return Association(left, right, {(x, rng.choice(right)) for x in left})


def test_c11_association_calculus():
    rng = random.Random(5)
    generated = 0
    bad = []
    for trial in range(60):
        r = _random_assoc(rng)
        s = _random_assoc(rng, left=list(r.right))
        t = _random_assoc(rng)
        generated += 3
        sr = compose(r, s)
        if not oracles.is_association(sr.left, sr.right, sr.relation) or set(sr.relation) != oracles.compose_pairs(r.relation, s.relation):
            bad.append(("compose", trial))
        rt = product_association(r, t)
        if not oracles.is_association(rt.left, rt.right, rt.relation) or len(rt.right) != len(r.right) * len(t.right):
            bad.append(("product", trial))
        universe = [f"u{i}" for i in range(6)]
        subsets = []
        for _ in range(rng.randint(1, 3)):
            left = rng.sample(universe, rng.randint(1, 6))
            subsets.append(_random_assoc(rng, left=left))
            generated += 1
        union, cert = union_check(subsets, universe)
        covered = {x for a in subsets for x in a.left}
        if not cert.ok or set(union.left) != covered or not oracles.is_association(union.left, union.right, union.relation):
            bad.append(("union", trial))
    record("C11 association calculus", not bad and generated >= 100,
           f"{generated} random associations; {len(bad)} outputs failed re-validation")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

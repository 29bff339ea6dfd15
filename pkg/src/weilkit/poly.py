"""Sparse multivariate polynomials over the rationals.

A polynomial is a dict mapping exponent tuples to nonzero Fractions. The
monomial order is graded lexicographic with generators compared in declared
order (x1 > x2 > ...).
"""

from fractions import Fraction
from itertools import combinations

from .errors import NormalFormDivergence, ParseError, UndeclaredGenerator


def grlex_key(mono):
    return (sum(mono), mono)


def zero():
    return {}


def const(c, nvars):
    c = Fraction(c)
    return {(0,) * nvars: c} if c else {}


def var(i, nvars):
    return {tuple(1 if j == i else 0 for j in range(nvars)): Fraction(1)}


def add(p, q):
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def scale(p, c):
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


def sub(p, q):
    return add(p, scale(q, -1))


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = mono_mul(m1, m2)
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def power(p, k, nvars):
    out = const(1, nvars)
    for _ in range(k):
        out = mul(out, p)
    return out


def degree(p):
    return max((sum(m) for m in p), default=-1)


def leading(p):
    m = max(p, key=grlex_key)
    return m, p[m]


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def is_zero(p):
    return not p


def reduce(p, basis):
    """Full reduction of ``p`` by a list of monic polynomials; returns the remainder."""
    leads = [(leading(g)[0], g) for g in basis]
    p = dict(p)
    rem = {}
    while p:
        m, c = leading(p)
        for lm, g in leads:
            if divides(lm, m):
                shift = tuple(x - y for x, y in zip(m, lm))
                for gm, gc in g.items():
                    t = mono_mul(gm, shift)
                    v = p.get(t, 0) - c * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def monic(p):
    _, c = leading(p)
    return scale(p, 1 / c)


def s_polynomial(f, g):
    mf, cf = leading(f)
    mg, cg = leading(g)
    lcm = tuple(max(x, y) for x, y in zip(mf, mg))
    tf = {tuple(a - b for a, b in zip(lcm, mf)): 1 / cf}
    tg = {tuple(a - b for a, b in zip(lcm, mg)): 1 / cg}
    return sub(mul(tf, f), mul(tg, g))


def groebner(polys, degree_cap=16):
    """Reduced Groebner basis by Buchberger completion.

    Raises NormalFormDivergence as soon as a basis element would exceed
    ``degree_cap`` in total degree.
    """
    basis = []
    for p in polys:
        if p:
            if degree(p) > degree_cap:
                raise NormalFormDivergence(
                    f"relation of degree {degree(p)} exceeds degree cap {degree_cap}",
                    cap=degree_cap,
                )
            basis.append(monic(p))
    pairs = list(combinations(range(len(basis)), 2))
    while pairs:
        i, j = pairs.pop()
        mi, mj = leading(basis[i])[0], leading(basis[j])[0]
        # Buchberger's first criterion: coprime leading monomials reduce to zero
        if all(x == 0 or y == 0 for x, y in zip(mi, mj)):
            continue
        r = reduce(s_polynomial(basis[i], basis[j]), basis)
        if r:
            if degree(r) > degree_cap:
                raise NormalFormDivergence(
                    f"completion produced degree {degree(r)} beyond cap {degree_cap}",
                    cap=degree_cap,
                )
            basis.append(monic(r))
            n = len(basis) - 1
            pairs.extend((k, n) for k in range(n))
    return _interreduce(basis)


def _interreduce(basis):
    # drop elements whose leading monomial is divisible by another's
    basis = sorted(basis, key=lambda g: grlex_key(leading(g)[0]))
    kept = []
    for g in basis:
        lm = leading(g)[0]
        if not any(divides(leading(h)[0], lm) for h in kept):
            kept.append(g)
    out = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1 :]
        lm, _ = leading(g)
        tail = reduce({m: c for m, c in g.items() if m != lm}, others)
        out.append(add({lm: Fraction(1)}, tail))
    return sorted(out, key=lambda g: grlex_key(leading(g)[0]))


def evaluate(p, values, one):
    """Substitute ring elements for the variables; ``one`` is the unit of the target ring."""
    total = one * 0
    cache = {}
    for m, c in sorted(p.items(), key=lambda t: grlex_key(t[0])):
        term = one
        for i, e in enumerate(m):
            if e:
                key = (i, e)
                if key not in cache:
                    x = one
                    for _ in range(e):
                        x = x * values[i]
                    cache[key] = x
                term = term * cache[key]
        total = total + term * c
    return total


def from_tree(tree, gens):
    """Convert a parsed expression into a polynomial over ``gens``."""
    n = len(gens)
    index = {g: i for i, g in enumerate(gens)}

    def conv(node):
        tag = node[0]
        if tag == "num":
            return const(node[1], n)
        if tag == "var":
            if node[1] not in index:
                raise UndeclaredGenerator(
                    f"generator {node[1]!r} is not declared", generator=node[1], declared=list(gens)
                )
            return var(index[node[1]], n)
        if tag == "neg":
            return scale(conv(node[1]), -1)
        if tag == "add":
            return add(conv(node[1]), conv(node[2]))
        if tag == "sub":
            return sub(conv(node[1]), conv(node[2]))
        if tag == "mul":
            return mul(conv(node[1]), conv(node[2]))
        if tag == "div":
            den = conv(node[2])
            if degree(den) > 0 or not den:
                raise ParseError("division only by nonzero constants in polynomials", expected="constant")
            return scale(conv(node[1]), 1 / den[(0,) * n])
        if tag == "pow":
            if node[2] < 0:
                raise ParseError("negative exponent in polynomial", expected="non-negative exponent")
            return power(conv(node[1]), node[2], n)
        raise ParseError(f"function call {node[1]!r} not allowed in a polynomial", expected="polynomial")

    return conv(tree)


def format_poly(p, gens):
    if not p:
        return "0"
    parts = []
    for m in sorted(p, key=grlex_key, reverse=True):
        c = p[m]
        factors = []
        for g, e in zip(gens, m):
            if e == 1:
                factors.append(g)
            elif e > 1:
                factors.append(f"{g}^{e}")
        mono = "*".join(factors)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def format_monomial(m, gens):
    factors = []
    for g, e in zip(gens, m):
        if e == 1:
            factors.append(g)
        elif e > 1:
            factors.append(f"{g}^{e}")
    return "*".join(factors) or "1"


def substitute(p, images, nvars):
    """Compose ``p`` with polynomial images of its variables (images live in ``nvars`` variables)."""
    out = {}
    powers = {}
    for m, c in p.items():
        term = const(c, nvars)
        for i, e in enumerate(m):
            if e:
                if (i, e) not in powers:
                    powers[(i, e)] = power(images[i], e, nvars)
                term = mul(term, powers[(i, e)])
        out = add(out, term)
    return out


def value_at(p, point):
    """Evaluate at a rational point."""
    total = Fraction(0)
    for m, c in p.items():
        t = c
        for x, e in zip(point, m):
            if e:
                t *= Fraction(x) ** e
        total += t
    return total

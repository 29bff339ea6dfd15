"""Reference computations that share no code with weilkit."""

from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import factorial

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

_TRANSFORMS = standard_transformations + (convert_xor,)


def sym(text, names):
    local = {n: sympy.Symbol(n) for n in names}
    return parse_expr(text, local_dict=local, transformations=_TRANSFORMS), [local[n] for n in names]


def derivatives(text, at, order):
    """[f(at), f'(at), ..., f^(order)(at)] as exact Fractions."""
    f, (x,) = sym(text, ["x"])
    out = []
    for k in range(order + 1):
        value = sympy.nsimplify(sympy.diff(f, x, k).subs(x, sympy.Rational(str(at))))
        out.append(Fraction(str(sympy.Rational(value))))
    return out


def taylor_coefficients(text, at, order):
    return [d / factorial(k) for k, d in enumerate(derivatives(text, at, order))]


# presentation dimension by linear algebra in Q[x]/m^N


def _monomials(n, below):
    out = []
    for deg in range(below):
        for combo in combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def _rank(rows):
    rows = [dict(r) for r in rows if r]
    rank = 0
    pivots = {}
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            if col not in pivots:
                pivots[col] = row
                rank += 1
                break
            piv = pivots[col]
            f = row[col] / piv[col]
            for k, v in piv.items():
                row[k] = row.get(k, 0) - f * v
                if row[k] == 0:
                    del row[k]
    return rank


def quotient_dimension(relations, names, shift=None, max_n=12):
    """dim Q[x]/I for an m-primary ideal I given by polynomial text.

    ``shift`` maps generators to augmentation values; relations are first
    moved so the augmentation sits at the origin. dim Q[x]/(I + m^N) grows
    with N and stabilizes exactly at dim Q[x]/I.
    """
    syms = [sympy.Symbol(n) for n in names]
    local = dict(zip(names, syms))
    polys = []
    for text in relations:
        p = parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
        if shift:
            p = p.subs({local[k]: local[k] + sympy.Rational(str(v)) for k, v in shift.items()}, simultaneous=True)
        polys.append(sympy.Poly(sympy.expand(p), *syms) if syms else None)
    n = len(names)
    if n == 0:
        return 1
    previous = None
    for N in range(1, max_n + 1):
        monos = _monomials(n, N)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for g in polys:
            terms = g.terms()
            for m in monos:
                row = {}
                for e, c in terms:
                    key = tuple(a + b for a, b in zip(e, m))
                    if key in index:
                        row[index[key]] = row.get(index[key], 0) + Fraction(int(c.p), int(c.q))
                rows.append({k: v for k, v in row.items() if v})
        dim = len(monos) - _rank(rows)
        if dim == previous:
            return dim
        previous = dim
    raise RuntimeError("dimension did not stabilize")


# lattices and torsion


def two_torsion(n):
    return sorted(product((Fraction(0), Fraction(1, 2)), repeat=n))


# associations


def is_association(left, right, pairs):
    lefts, rights = set(left), set(right)
    if any(x not in lefts or i not in rights for x, i in pairs):
        return False
    images = {}
    for x, i in pairs:
        images.setdefault(x, set()).add(i)
    return all(len(images.get(x, ())) == 1 for x in left)


def compose_pairs(r_pairs, s_pairs):
    return {(x, i) for x, y in r_pairs for y2, i in s_pairs if y == y2}

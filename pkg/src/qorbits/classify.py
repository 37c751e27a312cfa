"""Brute-force check of the numerical RE classification for small n.

At a rational value of q the numerical RE is a polynomial system in the
matrix entries.  Its solution set is split into components by Groebner
bases and factorization; rational points sampled on each component must be
reached by a canonical solution under a diagonal gauge, which is decided by
asking whether the existence system has a complex solution (its reduced
Groebner basis is not [1]).
"""

from __future__ import annotations

import logging
import random
from fractions import Fraction

import sympy as sp

from .qtensor import build_S, sweep_solutions
from .scalars import Specialization, specialize

log = logging.getLogger(__name__)


class SamplingFailed(RuntimeError):
    pass


def entry_symbols(n: int):
    return sp.symbols(" ".join(f"x{r}{c}" for r in range(1, n + 1) for c in range(1, n + 1)))


def re_system(n: int, qval: Fraction):
    """Nonzero entries of S A2 S A2 - A2 S A2 S for A = (x_rc), q = qval."""
    spec = Specialization({"q": qval})
    S = build_S(n)
    Sq = sp.Matrix(n * n, n * n, lambda i, j: sp.Rational(*_pair(specialize(S.rows[i][j], spec))))
    xs = entry_symbols(n)
    A = sp.Matrix(n, n, xs)
    A2 = sp.kronecker_product(sp.eye(n), A)
    M = (Sq * A2 * Sq * A2 - A2 * Sq * A2 * Sq).applyfunc(sp.expand)
    eqs = sorted({e for e in M if e != 0}, key=sp.default_sort_key)
    return eqs, xs


def _pair(v):
    return int(v.numerator), int(v.denominator)


def components(eqs, xs, max_depth: int = 12):
    """Split V(eqs) by factoring Groebner basis elements; returns reduced
    Groebner bases (lex) whose elements are all irreducible powers-free."""
    seen, out = set(), []

    def rec(polys, depth):
        G = sp.groebner(polys, *xs, order="lex")
        if list(G.exprs) == [1]:
            return
        key = tuple(sp.srepr(e) for e in G.exprs)
        if key in seen:
            return
        seen.add(key)
        if depth < max_depth:
            for g in G.exprs:
                factors = sp.factor_list(g)[1]
                if len(factors) > 1 or factors[0][1] > 1:
                    for f, _ in factors:
                        rec(list(G.exprs) + [f], depth + 1)
                    return
        out.append(G)

    rec(list(eqs) or [sp.Integer(0)], 0)
    return out


def _rational_roots(poly, var):
    roots = []
    for f, _ in sp.factor_list(poly, var)[1]:
        p = sp.Poly(f, var)
        if p.degree() == 1:
            c1, c0 = p.all_coeffs()
            roots.append(-c0 / c1)
    return roots


def sample_point(G, xs, rng: random.Random, tries: int = 50):
    """A rational point of V(G), choosing variables from the last one up."""
    polys = list(G.exprs)
    for _ in range(tries):
        vals = {}
        ok = True
        for v in reversed(xs):
            sub = [sp.expand(p.subs(vals)) for p in polys]
            uni = [p for p in sub if p != 0 and p.free_symbols <= {v}]
            if any(p.is_number for p in uni):
                ok = False
                break
            if not uni:
                vals[v] = sp.Rational(rng.randint(-30, 30), rng.randint(1, 7))
                continue
            g = uni[0]
            for p in uni[1:]:
                g = sp.gcd(g, p)
            roots = _rational_roots(g, v) if not g.is_number else []
            if not roots:
                ok = False
                break
            vals[v] = rng.choice(roots)
        if ok and all(sp.expand(p.subs(vals)) == 0 for p in polys):
            return [vals[v] for v in xs]
    raise SamplingFailed(f"no rational point found on component {list(G.exprs)}")


def canonical_templates(n: int):
    """(label, sympy matrix in a, b) for every canonical family member."""
    out = []
    for sol in sweep_solutions(n):
        M = sp.Matrix(n, n, lambda i, j: sol.matrix.rows[i][j]._f.as_expr())
        label = sol.family + str({k: (v.to_json() if hasattr(v, "to_json") else v)
                                  for k, v in sol.params.items()})
        out.append((label, M))
    return out


def reached_by(point, n: int, templates):
    """Label of a canonical member with G F G^-1 = point for diagonal G, or None."""
    a, b = sp.symbols("a b")
    gs = sp.symbols(" ".join(f"g{i}" for i in range(1, n + 1)))
    hs = sp.symbols(" ".join(f"h{i}" for i in range(1, n + 1)))
    gs = gs if isinstance(gs, tuple) else (gs,)
    hs = hs if isinstance(hs, tuple) else (hs,)
    P = sp.Matrix(n, n, point)
    for label, F in templates:
        eqs = [gs[i] * hs[i] - 1 for i in range(n)]
        for i in range(n):
            for j in range(n):
                eqs.append(sp.expand(gs[i] * F[i, j] * hs[j] - P[i, j]))
        G = sp.groebner(eqs, a, b, *gs, *hs, order="grevlex")
        if list(G.exprs) != [1]:
            return label
    return None


def brute_force_classification(n: int = 2, trials: int = 3, seed: int = 0,
                               samples: int = 2) -> dict:
    rng = random.Random(seed)
    templates = canonical_templates(n)
    runs = []
    ok = True
    for _ in range(trials):
        while True:
            qval = Fraction(rng.randint(2, 40), rng.randint(1, 13))
            if qval not in (0, 1, -1):
                break
        eqs, xs = re_system(n, qval)
        comps = components(eqs, xs)
        crec = []
        for G in comps:
            pts = []
            for _ in range(samples):
                pt = sample_point(G, xs, rng)
                lab = reached_by(pt, n, templates)
                ok = ok and lab is not None
                pts.append({"point": [str(v) for v in pt], "canonical": lab})
            crec.append({"equations": [str(e) for e in G.exprs], "samples": pts})
        runs.append({"q": str(qval), "components": crec})
        log.debug("q=%s: %d components", qval, len(comps))
    return {"check": "classification", "params": {"n": n, "trials": trials, "seed": seed},
            "bound": None, "result": "pass" if ok else "fail", "witnesses": [] if ok else runs,
            "runs": runs}

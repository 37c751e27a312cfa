"""Command line driver.

    qorbits verify hecke --n 2..4
    qorbits verify re-solutions --n 4
    qorbits dims --algebra re --n 2 --max-degree 4
    qorbits poisson --n 2
    qorbits check-matrix A.json --against re
    qorbits suite all

Every command prints a JSON report {version, config, checks, summary};
the exit status is 0 iff no check failed, 1 otherwise, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from math import comb

from . import __version__

log = logging.getLogger("qorbits")

VERIFY_CHECKS = ("hecke", "yang-baxter", "re-solutions", "trp", "alg-lemma", "fiber",
                 "substitution", "gl2", "classification", "kks")
ALGEBRAS = ("re", "twoparam", "est", "symmetric", "nilpotent", "bisymmetric", "free")
SUITES = {
    "tensor": [("hecke", "2..4"), ("yang-baxter", "2..3"), ("re-solutions", "4"),
               ("classification", "2")],
    "flatness": [("dims:re", "2"), ("dims:re", "3"), ("dims:est", "0")],
    "orbits": [("dims:symmetric", "2"), ("dims:nilpotent", "2"), ("dims:bisymmetric", "3"),
               ("trp", "2")],
    "fiber": [("alg-lemma", "0"), ("fiber", "3")],
    "classical-limit": [("substitution", "2"), ("kks", "2")],
    "poisson": [("poisson", "2"), ("poisson", "3")],
    "gl2": [("gl2", "2")],
}
# default degree bounds and the caps that need --force to exceed
DEFAULT_DEGREE = {"re": {1: 6, 2: 4, 3: 3, 4: 2}, "est": 12, "symmetric": 4, "nilpotent": 4,
                  "bisymmetric": 3, "twoparam": {2: 4, 3: 3}, "free": 3,
                  "trp": 5, "alg-lemma": 12, "fiber": 5, "gl2": 4}
DEGREE_CAP = {"re": {1: 10, 2: 5, 3: 3, 4: 2}, "est": 14, "symmetric": 5, "nilpotent": 5,
              "bisymmetric": 4, "twoparam": {2: 5, 3: 3}, "free": 4,
              "trp": 6, "alg-lemma": 14, "fiber": 5, "gl2": 6}
N_CAP = 4


class UsageError(Exception):
    pass


def parse_n(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse --n {text!r}; use 3, 2,3 or 2..4")


def _lookup(table, key, n):
    v = table[key]
    if isinstance(v, dict):
        if n not in v:
            raise UsageError(f"n={n} is outside the supported sizes for {key}")
        return v[n]
    return v


def resolve_degree(key: str, n: int, requested, force: bool) -> int:
    d = requested if requested is not None else _lookup(DEFAULT_DEGREE, key, n)
    cap = _lookup(DEGREE_CAP, key, n)
    if d > cap and not force:
        raise UsageError(f"--max-degree {d} exceeds the cap {cap} for {key} (use --force)")
    if d < 0:
        raise UsageError("--max-degree must be nonnegative")
    return d


def check_n(ns, force, lo=1, hi=N_CAP):
    for n in ns:
        if n < lo or (n > hi and not force):
            raise UsageError(f"n={n} outside {lo}..{hi} (use --force above the cap)")


# individual checks -------------------------------------------------------------

def _rec(check, params, bound, ok, witnesses=(), **extra):
    out = {"check": check, "params": params, "bound": bound,
           "result": "pass" if ok else "fail", "witnesses": list(witnesses)}
    out.update(extra)
    return out


def run_hecke(ns, cfg):
    from .qtensor import build_S, check_hecke
    check_n(ns, cfg.force)
    return [_rec("hecke", {"n": n}, None, check_hecke(build_S(n))) for n in ns]


def run_yang_baxter(ns, cfg):
    from .qtensor import build_R, build_S, check_braid, check_yang_baxter
    check_n(ns, cfg.force, hi=3)
    out = []
    for n in ns:
        out.append(_rec("braid", {"n": n}, None, check_braid(build_S(n))))
        out.append(_rec("yang-baxter", {"n": n}, None, check_yang_baxter(build_R(n))))
    return out


def run_re_solutions(ns, cfg):
    """Every canonical solution for sizes 1..max(ns); family B is also checked
    at lam = 0, where it must square to zero."""
    from .qtensor import build_S, check_numerical_re, family_b_matrix, sweep_solutions
    top = max(ns)
    check_n([top], cfg.force)
    out = []
    for n in range(1, top + 1):
        S = build_S(n)
        for sol in sweep_solutions(n, S):
            ok = check_numerical_re(sol.matrix, S)
            if sol.family == "B":
                nil = family_b_matrix(sol.params["pair"], sol.params["l"], 0)
                ok = ok and check_numerical_re(nil, S) and (nil @ nil).is_zero()
            params = sol.to_json()["params"]
            params["n"] = n
            out.append(_rec(f"re-solution:{sol.family}", params, None, ok))
    return out


def run_classification(ns, cfg):
    from .classify import brute_force_classification
    check_n(ns, cfg.force, hi=2)
    out = []
    for n in ns:
        r = brute_force_classification(n, seed=cfg.seed)
        r.pop("runs", None)
        out.append(r)
    return out


def run_trp(ns, cfg):
    from .presentations import check_lemma_trp
    from .scalars import a, b
    check_n(ns, cfg.force, hi=2)
    out = []
    for n in ns:
        d = resolve_degree("trp", n, cfg.max_degree, cfg.force)
        for poly in ((0, 1), (0, 0, 1), (0, -(a * a + b * b), 1)):
            out.append(check_lemma_trp(n, d, poly, seed=cfg.seed, exact=cfg.exact))
        out.append(check_lemma_trp(n, d, (0, 1), seed=cfg.seed, exact=cfg.exact, control=True))
    return out


def run_alg_lemma(ns, cfg):
    from .presentations import check_lemma_alg
    from .scalars import a, b, q
    d = resolve_degree("alg-lemma", 0, cfg.max_degree, cfg.force)
    lam, mu = a * a, b * b
    cases = [((0, -(lam + mu), 1), -lam * mu, q - 1 / q, 4),
             ((0, 1), a, q - 1 / q, 4),
             ((0, 0, 0, 1), a, 0, 3)]
    return [check_lemma_alg(p, al, be, m, d, seed=cfg.seed, exact=cfg.exact)
            for p, al, be, m in cases]


def run_fiber(ns, cfg):
    from .presentations import check_fiber_map
    d = resolve_degree("fiber", 3, cfg.max_degree, cfg.force)
    return [check_fiber_map(1, 1, 1, d, seed=cfg.seed, exact=cfg.exact)]


def run_substitution(ns, cfg):
    from .presentations import check_substitution
    check_n(ns, cfg.force, hi=3)
    return [check_substitution(n) for n in ns]


def run_kks(ns, cfg):
    from .presentations import check_kks_limit
    out = []
    for n in ns:
        for n1 in range(1, n):
            if n1 >= n - n1:
                out.append(check_kks_limit(n1, n - n1))
    return out


def run_gl2(ns, cfg):
    from .presentations import check_gl2_example
    d = resolve_degree("gl2", 2, cfg.max_degree, cfg.force)
    return [check_gl2_example(d, seed=cfg.seed, exact=cfg.exact),
            _negate(check_gl2_example(d, seed=cfg.seed, exact=cfg.exact, perturb=True),
                    "gl2-control")]


def _negate(rec, name):
    """A control record passes iff the wrapped check fails."""
    ok = rec["result"] == "fail"
    return _rec(name, rec["params"], rec["bound"], ok, [] if ok else ["control unexpectedly passed"])


def run_poisson(ns, cfg):
    from .poisson import check_poisson
    check_n(ns, cfg.force, hi=3)
    return [check_poisson(n, seed=cfg.seed) for n in ns]


def run_dims(algebra, ns, cfg):
    from .freealg import filtered_dimension, graded_dimension
    from .presentations import (OrbitQuotientSpec, build_presentation, classical_orbit_dims)
    from .scalars import lam, mu
    out = []
    for n in ns:
        if algebra == "est":
            n = 0
        else:
            check_n([n], cfg.force)
        d = resolve_degree(algebra, n, cfg.max_degree, cfg.force)
        kw = {"seed": cfg.seed, "exact": cfg.exact}
        if algebra in ("re", "twoparam"):
            P = build_presentation("RE" if algebra == "re" else "TwoParam", n)
            dims = graded_dimension(P.ideal(), d, **kw)
            if algebra == "twoparam":
                # filtered dims of the inhomogeneous algebra, graded increments
                fd = filtered_dimension(P.ideal(), d, **kw)
                dims = [fd[0]] + [fd[k] - fd[k - 1] for k in range(1, len(fd))]
            target = [comb(n * n + k - 1, k) for k in range(d + 1)]
            mode = "graded"
        elif algebra == "free":
            from .freealg import IdealSpec
            P = build_presentation("RE", n)
            dims = filtered_dimension(IdealSpec([], alphabet=P.alphabet), d, **kw)
            target = [sum((n * n) ** j for j in range(k + 1)) for k in range(d + 1)]
            mode = "filtered"
        elif algebra == "est":
            from .presentations import est_completion_dims, est_presentation
            P = est_presentation()
            dims = graded_dimension(P.ideal(), d, **kw)
            target = est_completion_dims(d)
            # the last levels of a bounded inhomogeneous span are not saturated
            keep = max(d - 2, 0)
            dims, target = dims[: keep + 1], target[: keep + 1]
            mode = "graded"
        else:
            if algebra == "symmetric":
                l = (n + 1) // 2
                spec = OrbitQuotientSpec("symmetric", n, (l, n - l), (lam(), mu()))
                cl = classical_orbit_dims(n, (l, n - l), (2, 1), d, seed=cfg.seed)
            elif algebra == "bisymmetric":
                if n < 3:
                    raise UsageError("bisymmetric orbits need n >= 3")
                spec = OrbitQuotientSpec("bisymmetric", n, (1, 1, n - 2), (lam(), mu()))
                cl = classical_orbit_dims(n, (1, 1, n - 2), (2, 1, 0), d, seed=cfg.seed)
            else:
                spec = OrbitQuotientSpec("nilpotent", n)
                rep = [[1 if (i, j) == (1, 0) else 0 for j in range(n)] for i in range(n)]
                cl = classical_orbit_dims(n, d=d, representative=rep, seed=cfg.seed)
            dims = filtered_dimension(spec.ideal(), d, **kw)
            target = cl
            mode = "filtered"
        rows = [{"degree": k, "dim": x, "classical": y, "match": x == y}
                for k, (x, y) in enumerate(zip(dims, target))]
        ok = all(r["match"] for r in rows)
        out.append(_rec("dims", {"algebra": algebra, "n": n, "mode": mode}, d, ok,
                        [r for r in rows if not r["match"]], rows=rows))
    return out


def run_check_matrix(path, against, mult, eig, cfg):
    from .presentations import OrbitQuotientSpec, verify_orbit_character
    from .presentations import build_presentation, character_values, failing_relations
    from .qtensor import Mat, build_S, check_numerical_re
    from .scalars import ScalarError, parse
    try:
        with open(path) as fh:
            A = Mat.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError, ScalarError) as exc:
        raise UsageError(f"cannot read matrix from {path}: {exc}")
    n = A.size
    check_n([n], cfg.force)
    P = build_presentation("RE", n)
    bad = [r.render() for r in failing_relations(P.relations, character_values(P, A))]
    ok = not bad
    if ok != check_numerical_re(A, build_S(n)):
        raise RuntimeError("character check and numerical RE disagree")
    params = {"against": against, "n": n}
    if against != "re":
        try:
            eigs = tuple(parse(x) for x in eig.split(",")) if eig else ()
            mults = tuple(int(x) for x in mult.split(",")) if mult else ()
            spec = OrbitQuotientSpec(against, n, mults, eigs)
        except (ValueError, ScalarError) as exc:
            raise UsageError(str(exc))
        params.update(spec.to_json())
        if ok:
            ok = verify_orbit_character(spec, A)
            if not ok:
                bad = ["orbit relations"]
    return [_rec("check-matrix", params, None, ok, bad[:5])]


# driver ----------------------------------------------------------------------------

def _dispatch(name, ns, cfg):
    if name.startswith("dims:"):
        return run_dims(name.split(":", 1)[1], ns, cfg)
    fn = {"hecke": run_hecke, "yang-baxter": run_yang_baxter, "re-solutions": run_re_solutions,
          "classification": run_classification, "trp": run_trp, "alg-lemma": run_alg_lemma,
          "fiber": run_fiber, "substitution": run_substitution, "kks": run_kks, "gl2": run_gl2,
          "poisson": run_poisson}[name]
    return fn(ns, cfg)


def _timed(fn, cfg):
    t0 = time.perf_counter()
    recs = fn()
    dt = time.perf_counter() - t0
    if cfg.timings:
        for r in recs:
            r["seconds"] = round(dt / max(len(recs), 1), 3)
    return recs


def build_report(cfg, checks):
    summary = {"passed": sum(r["result"] == "pass" for r in checks),
               "failed": sum(r["result"] == "fail" for r in checks),
               "skipped": sum(r["result"] == "skip" for r in checks)}
    config = {k: v for k, v in sorted(vars(cfg).items()) if k not in ("func", "timings")}
    return {"version": __version__, "config": config, "checks": checks, "summary": summary}


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", default=None, help="size, list (2,3) or range (2..4)")
    common.add_argument("--max-degree", type=int, default=None, dest="max_degree")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--exact", action="store_true",
                        help="ranks over the rational function field instead of specializations")
    common.add_argument("--out", default=None, help="also write the report here")
    common.add_argument("--force", action="store_true", help="allow sizes above the caps")
    common.add_argument("--timings", action="store_true",
                        help="add wall time per check (reports are then not byte-stable)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="qorbits", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run one named check")
    v.add_argument("what", choices=VERIFY_CHECKS)
    d = sub.add_parser("dims", parents=[common], help="dimension counts against targets")
    d.add_argument("--algebra", choices=ALGEBRAS, default="re")
    sub.add_parser("poisson", parents=[common], help="semiclassical bracket checks")
    c = sub.add_parser("check-matrix", parents=[common], help="test a matrix file")
    c.add_argument("path")
    c.add_argument("--against", default="re",
                   choices=("re", "symmetric", "bisymmetric", "nilpotent"))
    c.add_argument("--mult", default="", help="multiplicities, e.g. 1,1")
    c.add_argument("--eig", default="", help="eigenvalues, e.g. a^2,b^2")
    s = sub.add_parser("suite", parents=[common], help="run a named suite")
    s.add_argument("suite", choices=("all",) + tuple(SUITES))
    return p


DEFAULT_N = {"hecke": "2..4", "yang-baxter": "2..3", "re-solutions": "4", "trp": "2",
             "classification": "2", "substitution": "2", "kks": "2", "gl2": "2", "fiber": "3",
             "alg-lemma": "0", "poisson": "2..3", "dims": "2", "check-matrix": "0"}


def run(cfg) -> dict:
    cmd = cfg.command
    checks = []
    if cmd == "suite":
        names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
        sub_cfg = argparse.Namespace(**vars(cfg))
        for suite in names:
            for name, ns in SUITES[suite]:
                sub_cfg.max_degree = cfg.max_degree if cfg.suite != "all" else None
                checks += _timed(lambda: _dispatch(name, parse_n(ns), sub_cfg), cfg)
    elif cmd == "verify":
        ns = parse_n(cfg.n or DEFAULT_N[cfg.what])
        checks = _timed(lambda: _dispatch(cfg.what, ns, cfg), cfg)
    elif cmd == "dims":
        ns = parse_n(cfg.n or DEFAULT_N["dims"])
        checks = _timed(lambda: run_dims(cfg.algebra, ns, cfg), cfg)
    elif cmd == "poisson":
        ns = parse_n(cfg.n or DEFAULT_N["poisson"])
        checks = _timed(lambda: run_poisson(ns, cfg), cfg)
    elif cmd == "check-matrix":
        checks = _timed(lambda: run_check_matrix(cfg.path, cfg.against, cfg.mult, cfg.eig, cfg),
                        cfg)
    return build_report(cfg, checks)


def main(argv=None) -> int:
    parser = make_parser()
    cfg = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if cfg.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        report = run(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qorbits: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    return 0 if report["summary"]["failed"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())

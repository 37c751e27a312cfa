"""Semiclassical layer of the RE algebra.

The RE bracket is read off the first-order expansion of the RE relations at
q = e^h: with S = P + h S' + O(h^2), the zeroth-order part of
S L2 S L2 - L2 S L2 S is the commutator matrix L1 L2 - L2 L1, so

    {L1, L2} = -(S' L2 P L2 + P L2 S' L2 - L2 S' L2 P - L2 P L2 S')

with commuting entries on the right.  Coordinates: x{i}{j} is the generator
L^i_j, i.e. the linear function A -> A[j][i] = Tr(e^i_j A).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import QQ
from sympy.polys.rings import ring

from .qtensor import build_S
from .scalars import render  # noqa: F401  (kept for symmetry with other modules)

MAX_N = 4


class PoissonError(ValueError):
    pass


class DegenerateOrbit(PoissonError):
    pass


@lru_cache(maxsize=None)
def coordinate_ring(n: int):
    names = [f"x{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    R, *gens = ring(",".join(names), QQ)
    return R, names, gens


def _coord(n, i, j):
    """Index of x^i_j in the generator list."""
    return (i - 1) * n + (j - 1)


def _matrix_of_coords(n):
    """Classical generating matrix: entry (row, col) = x^{col}_{row}."""
    R, _, gens = coordinate_ring(n)
    return [[gens[_coord(n, c + 1, r + 1)] for c in range(n)] for r in range(n)]


# sparse matrices: dict row -> dict col -> value -------------------------------

def _sparse(rows):
    out = {}
    for i, row in enumerate(rows):
        d = {j: v for j, v in enumerate(row) if v}
        if d:
            out[i] = d
    return out


def _smul(A, B):
    out = {}
    for i, row in A.items():
        acc = {}
        for k, v in row.items():
            for j, w in B.get(k, {}).items():
                acc[j] = acc.get(j, 0) + v * w
        acc = {j: v for j, v in acc.items() if v}
        if acc:
            out[i] = acc
    return out


def _sadd(A, B, sign=1):
    out = {i: dict(r) for i, r in A.items()}
    for i, row in B.items():
        tgt = out.setdefault(i, {})
        for j, v in row.items():
            nv = tgt.get(j, 0) + sign * v
            if nv:
                tgt[j] = nv
            else:
                tgt.pop(j, None)
    return {i: r for i, r in out.items() if r}


def _second_leg_sparse(M, n):
    out = {}
    for i1 in range(n):
        for i2 in range(n):
            row = {i1 * n + j2: M[i2][j2] for j2 in range(n) if M[i2][j2]}
            if row:
                out[i1 * n + i2] = row
    return out


def _rational_rows(S, fn):
    return [[fn(x) for x in row] for row in S.rows]


def s_derivative(n: int):
    """S' = dS/dq at q = 1 (q = e^h, so this is the h-coefficient)."""
    S = build_S(n)

    def fn(x):
        return x.diff("q").subs({"q": 1}).to_fraction()

    return _sparse(_rational_rows(S, fn))


def permutation_sparse(n: int):
    return {i1 * n + i2: {i2 * n + i1: 1} for i1 in range(n) for i2 in range(n)}


@dataclass
class PoissonTable:
    n: int
    brackets: dict  # (a, b) coordinate-index pair -> ring element

    def bracket(self, a: int, b: int):
        return self.brackets[(a, b)]

    def names(self):
        return coordinate_ring(self.n)[1]

    def evaluate(self, a: int, b: int, A) -> Fraction:
        """{x_a, x_b} at the matrix A (rows of rationals)."""
        n = self.n
        point = [0] * (n * n)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                point[_coord(n, i, j)] = QQ(Fraction(A[j - 1][i - 1]).numerator,
                                            Fraction(A[j - 1][i - 1]).denominator)
        val = self.brackets[(a, b)](*point) if n * n > 1 else self.brackets[(a, b)](point[0])
        return Fraction(int(val.numerator), int(val.denominator))

    def is_antisymmetric(self) -> bool:
        return all(self.brackets[(a, b)] == -self.brackets[(b, a)] for (a, b) in self.brackets)

    def to_json(self):
        n = self.n
        out = {}
        for (a, b), poly in sorted(self.brackets.items()):
            i, j = divmod(a, n)
            k, l = divmod(b, n)
            out[f"{i + 1},{j + 1}|{k + 1},{l + 1}"] = str(poly.as_expr()).replace("**", "^")
        return {"n": n, "brackets": out}


class InconsistentExtraction(PoissonError):
    pass


def extract_semiclassical(n: int) -> PoissonTable:
    """Bracket table from the h-linear part of the RE relations."""
    if not 1 <= n <= MAX_N:
        raise PoissonError(f"n must be in 1..{MAX_N}")
    R, _, gens = coordinate_ring(n)
    X = _matrix_of_coords(n)
    X2 = _second_leg_sparse(X, n)
    P = permutation_sparse(n)
    Sd = s_derivative(n)
    t1 = _smul(_smul(_smul(Sd, X2), P), X2)
    t2 = _smul(_smul(_smul(P, X2), Sd), X2)
    t3 = _smul(_smul(_smul(X2, Sd), X2), P)
    t4 = _smul(_smul(_smul(X2, P), X2), Sd)
    C = _sadd(_sadd(t1, t2), _sadd(t3, t4), -1)
    brackets = {}
    zero = R.zero
    for i1 in range(n):
        for i2 in range(n):
            row = C.get(i1 * n + i2, {})
            for j1 in range(n):
                for j2 in range(n):
                    # (L1 L2)_{(i1 i2),(j1 j2)} = L[i1][j1] L[i2][j2]; entry
                    # (row, col) of L is x^{col}_{row}
                    a = _coord(n, j1 + 1, i1 + 1)
                    b = _coord(n, j2 + 1, i2 + 1)
                    val = -row.get(j1 * n + j2, zero)
                    val = R(val) if not hasattr(val, "ring") else val
                    if (a, b) in brackets and brackets[(a, b)] != val:
                        raise InconsistentExtraction(f"two values for the bracket {(a, b)}")
                    brackets[(a, b)] = val
    return PoissonTable(n, brackets)


def _leibniz(table: PoissonTable, a: int, f):
    """{x_a, f} for a polynomial f."""
    R, _, gens = coordinate_ring(table.n)
    out = R.zero
    for k, g in enumerate(gens):
        df = f.diff(g)
        if df:
            out += df * table.brackets[(a, k)]
    return out


def verify_jacobi(table: PoissonTable) -> bool:
    N = table.n ** 2
    for a in range(N):
        for b in range(a + 1, N):
            for c in range(b + 1, N):
                total = (_leibniz(table, a, table.brackets[(b, c)])
                         + _leibniz(table, b, table.brackets[(c, a)])
                         + _leibniz(table, c, table.brackets[(a, b)]))
                if total:
                    return False
    return True


# classical tensors and the geometric bracket -----------------------------------

def _unit(n, i, j):
    """e^i_j: 1 at row i, column j (1-based)."""
    return tuple(tuple(Fraction(int(r == i and c == j)) for c in range(1, n + 1))
                 for r in range(1, n + 1))


@dataclass
class ClassicalTensors:
    """r and omega as lists of (coefficient, left factor, right factor)."""
    n: int
    r: list
    omega: list

    @classmethod
    def standard(cls, n: int) -> "ClassicalTensors":
        r, omega = [], []
        for i in range(1, n + 1):
            omega.append((Fraction(1), _unit(n, i, i), _unit(n, i, i)))
            for j in range(i + 1, n + 1):
                pos, neg = _unit(n, i, j), _unit(n, j, i)  # e_alpha, e_{-alpha}
                r.append((Fraction(1), neg, pos))
                r.append((Fraction(-1), pos, neg))
                omega.append((Fraction(1), neg, pos))
                omega.append((Fraction(1), pos, neg))
        return cls(n, r, omega)

    def as_operator(self, which: str):
        """n^2 x n^2 matrix of the tensor (Kronecker product convention)."""
        n = self.n
        terms = self.r if which == "r" else self.omega
        out = [[Fraction(0)] * (n * n) for _ in range(n * n)]
        for c, x, y in terms:
            for i1 in range(n):
                for j1 in range(n):
                    if not x[i1][j1]:
                        continue
                    for i2 in range(n):
                        for j2 in range(n):
                            if y[i2][j2]:
                                out[i1 * n + i2][j1 * n + j2] += c * x[i1][j1] * y[i2][j2]
        return out

    def r_antisymmetric(self) -> bool:
        M = self.as_operator("r")
        N = self.n ** 2
        n = self.n
        flip = lambda k: (k % n) * n + k // n
        return all(M[i][j] == -M[flip(i)][flip(j)] for i in range(N) for j in range(N))

    def omega_is_flip(self) -> bool:
        M = self.as_operator("omega")
        n = self.n
        return all(M[i][j] == Fraction(int(j == (i % n) * n + i // n))
                   for i in range(n * n) for j in range(n * n))


def _mm(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)]


def _tr(A):
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def _comm(A, B):
    AB, BA = _mm(A, B), _mm(B, A)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(AB, BA)]


def _frac_rows(M):
    return [[Fraction(x) for x in row] for row in M]


def invariant_part(A, X, Y) -> Fraction:
    """Tr(A^2 [X, Y])."""
    A, X, Y = _frac_rows(A), _frac_rows(X), _frac_rows(Y)
    if not (len(A) == len(X) == len(Y)):
        raise PoissonError("A, X, Y must have the same size")
    return _tr(_mm(_mm(A, A), _comm(X, Y)))


def r_adjoint_part(tensors: ClassicalTensors, A, X, Y) -> Fraction:
    """sum Tr(X [r1, A]) Tr(Y [r2, A]) over r = r1 (x) r2."""
    A, X, Y = _frac_rows(A), _frac_rows(X), _frac_rows(Y)
    total = Fraction(0)
    for c, r1, r2 in tensors.r:
        total += c * _tr(_mm(X, _comm(r1, A))) * _tr(_mm(Y, _comm(r2, A)))
    return total


# normalization of the geometric formula against the h-expansion: the bracket
# extracted with S = P(1 + h(r + omega)) equals R_COEF * r^{ad,ad} + F_COEF * f
R_COEF = Fraction(1)
F_COEF = Fraction(1)


def geometric_bracket(tensors: ClassicalTensors, A, X, Y) -> Fraction:
    return R_COEF * r_adjoint_part(tensors, A, X, Y) + F_COEF * invariant_part(A, X, Y)


def reps_coefficient(li, lj) -> Fraction:
    """c = (li^2 - lj^2)/(li - lj)^2 = (li + lj)/(li - lj)."""
    li, lj = Fraction(li), Fraction(lj)
    if li == lj:
        raise DegenerateOrbit("equal eigenvalues give a degenerate quasi-root")
    return (li * li - lj * lj) / ((li - lj) ** 2)


def random_rational_matrix(rng: random.Random, n: int):
    return [[Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(n)]
            for _ in range(n)]


def bracket_mismatches(n: int, points: int = 10, seed: int = 0, table=None, extra_points=()):
    table = table or extract_semiclassical(n)
    tens = ClassicalTensors.standard(n)
    rng = random.Random(seed)
    samples = [random_rational_matrix(rng, n) for _ in range(points)] + list(extra_points)
    bad = []
    for A in samples:
        for a in range(n * n):
            for b in range(n * n):
                i, j = divmod(a, n)
                k, l = divmod(b, n)
                X, Y = _unit(n, i + 1, j + 1), _unit(n, k + 1, l + 1)
                lhs = table.evaluate(a, b, A)
                rhs = geometric_bracket(tens, A, X, Y)
                if lhs != rhs:
                    bad.append({"point": [[str(x) for x in row] for row in A],
                                "pair": f"{i + 1},{j + 1}|{k + 1},{l + 1}",
                                "extracted": str(lhs), "geometric": str(rhs)})
    return bad


def verify_bracket_consistency(n: int = 2, points: int = 10, seed: int = 0) -> bool:
    if not 1 <= n <= 3:
        raise PoissonError("bracket consistency is checked for n <= 3")
    return not bracket_mismatches(n, points, seed)


def check_poisson(n: int, seed: int = 0, points: int = 10) -> dict:
    table = extract_semiclassical(n)
    witnesses = []
    anti = table.is_antisymmetric()
    if not anti:
        witnesses.append("antisymmetry")
    jac = verify_jacobi(table)
    if not jac:
        witnesses.append("jacobi")
    consistent = True
    if n <= 3:
        bad = bracket_mismatches(n, points, seed, table)
        consistent = not bad
        witnesses += bad[:5]
    return {"check": "poisson", "params": {"n": n, "points": points, "seed": seed},
            "bound": None, "result": "pass" if anti and jac and consistent else "fail",
            "witnesses": witnesses}

"""Concrete algebra presentations: FRT, RE, two-parameter, classical U(gl(n))[t],
the two-letter algebra A(e, s), the mixed T/L algebra, and orbit quotients.

A matrix family ``X`` of size n has generators ``X{i}{j}`` (upper index i,
lower index j) placed at row j, column i of the generating matrix, i.e.
X = sum X^i_j e^j_i.  Generators are ordered by (i, j).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .freealg import Alphabet, FreeElement, IdealSpec
from .qtensor import Mat, build_S, TensorOperator
from .scalars import ONE, ZERO, Scalar, a, as_scalar, b, q, quantum_integer, t

MAX_N = 4


class PresentationError(ValueError):
    pass


class ShapeMismatch(PresentationError):
    pass


def family_names(fam: str, n: int) -> list[str]:
    return [f"{fam}{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]


def gen_name(fam: str, row: int, col: int) -> str:
    """Name of the generator at 1-based matrix position (row, col)."""
    return f"{fam}{col}{row}"


def _unit(n, k):
    v = [0] * n
    v[k - 1] = 1
    return v


def adjoint_weights(n: int, fams=("L",)):
    """Torus weight e_row - e_col for each generator, families stacked."""
    out = []
    for fi, fam in enumerate(fams):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                w = [0] * (n * len(fams))
                # generator fam{i}{j} sits at row j, col i
                w[fi * 0 + (j - 1)] += 1
                w[i - 1] -= 1
                out.append(w)
    return out


@dataclass
class Presentation:
    name: str
    alphabet: Alphabet
    relations: list
    families: dict = field(default_factory=dict)  # family -> n
    params: dict = field(default_factory=dict)

    def matrix(self, fam: str | None = None) -> list[list[FreeElement]]:
        fam = fam or next(iter(self.families))
        n = self.families[fam]
        return [[self.alphabet.gen(gen_name(fam, r, c)) for c in range(1, n + 1)]
                for r in range(1, n + 1)]

    def ideal(self, extra=()) -> IdealSpec:
        return IdealSpec(list(self.relations) + list(extra), alphabet=self.alphabet)

    def to_json(self):
        return {"name": self.name, "generators": list(self.alphabet.names),
                "relations": [r.render() for r in self.relations]}


# matrix helpers over FreeElements -------------------------------------------

def fmatmul(A, B, zero):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        nz = [(k, A[i][k]) for k in range(n) if A[i][k]]
        for j in range(n):
            acc = zero
            for k, x in nz:
                y = B[k][j]
                if y:
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def fsub(A, B):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(A, B)]


def fadd(A, B):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]


def fscale(A, c):
    return [[x * c for x in r] for r in A]


def scalar_rows(M: Mat):
    return [list(r) for r in M.rows]


def second_leg(M, zero):
    n = len(M)
    out = [[zero] * (n * n) for _ in range(n * n)]
    for i1 in range(n):
        for i2 in range(n):
            for j2 in range(n):
                out[i1 * n + i2][i1 * n + j2] = M[i2][j2]
    return out


def first_leg(M, zero):
    n = len(M)
    out = [[zero] * (n * n) for _ in range(n * n)]
    for i1 in range(n):
        for j1 in range(n):
            for i2 in range(n):
                out[i1 * n + i2][j1 * n + i2] = M[i1][j1]
    return out


def identity_like(n, alphabet):
    return [[alphabet.one() if i == j else alphabet.zero() for j in range(n)] for i in range(n)]


def fpow(M, k, alphabet):
    out = identity_like(len(M), alphabet)
    for _ in range(k):
        out = fmatmul(out, M, alphabet.zero())
    return out


def matrix_poly(M, coeffs, alphabet):
    """sum coeffs[k] * M^k (coefficients low degree first)."""
    n = len(M)
    out = [[alphabet.zero()] * n for _ in range(n)]
    power = identity_like(n, alphabet)
    for k, c in enumerate(coeffs):
        if k:
            power = fmatmul(power, M, alphabet.zero())
        c = as_scalar(c)
        if c:
            out = fadd(out, fscale(power, c))
    return out


def shifted(M, c, alphabet):
    """M - c * 1."""
    n = len(M)
    return [[M[i][j] - (as_scalar(c) if i == j else 0) for j in range(n)] for i in range(n)]


def qtrace(M, alphabet) -> FreeElement:
    acc = alphabet.zero()
    for i in range(len(M)):
        acc = acc + M[i][i] * (q ** (-2 * i))
    return acc


def trace(M, alphabet) -> FreeElement:
    acc = alphabet.zero()
    for i in range(len(M)):
        acc = acc + M[i][i]
    return acc


def entries(M):
    return [x for row in M for x in row]


def re_matrix_defect(M, S: Mat, alphabet):
    """S M_2 S M_2 - M_2 S M_2 S as an n^2 x n^2 matrix of FreeElements."""
    zero = alphabet.zero()
    Srows = scalar_rows(S)
    M2 = second_leg(M, zero)
    SM = fmatmul(Srows, M2, zero)
    MS = fmatmul(M2, Srows, zero)
    return fsub(fmatmul(SM, SM, zero), fmatmul(MS, MS, zero))


def cuea_matrix_defect(M, S: Mat, alphabet, qv=None):
    """S E_2 S E_2 - E_2 S E_2 S - q t (E_2 S - S E_2)."""
    zero = alphabet.zero()
    qv = q if qv is None else as_scalar(qv)
    Srows = scalar_rows(S)
    M2 = second_leg(M, zero)
    SM = fmatmul(Srows, M2, zero)
    MS = fmatmul(M2, Srows, zero)
    quad = fsub(fmatmul(SM, SM, zero), fmatmul(MS, MS, zero))
    return fsub(quad, fscale(fsub(MS, SM), qv * t))


def frt_matrix_defect(T, S: Mat, alphabet):
    """S T_1 T_2 - T_1 T_2 S."""
    zero = alphabet.zero()
    Srows = scalar_rows(S)
    T12 = fmatmul(first_leg(T, zero), second_leg(T, zero), zero)
    return fsub(fmatmul(Srows, T12, zero), fmatmul(T12, Srows, zero))


def _check_n(n):
    if n < 1:
        raise PresentationError("n >= 1")
    if n > MAX_N:
        from .freealg import TooLarge
        raise TooLarge(f"n={n} exceeds the presentation cap {MAX_N}")


def matrix_alphabet(n, fams=("L",)):
    names = []
    for f in fams:
        names += family_names(f, n)
    return Alphabet(names, adjoint_weights(n, fams) if len(fams) == 1 else None)


def re_presentation(n: int, S: Mat | None = None, fam: str = "L") -> Presentation:
    _check_n(n)
    S = S if S is not None else build_S(n)
    alph = matrix_alphabet(n, (fam,))
    P = Presentation("RE", alph, [], {fam: n})
    P.relations = entries(re_matrix_defect(P.matrix(), S, alph))
    return P


def frt_presentation(n: int, S: Mat | None = None, fam: str = "T") -> Presentation:
    _check_n(n)
    S = S if S is not None else build_S(n)
    names = family_names(fam, n)
    weights = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            # T^i_j at row j, col i: left weight e_row, right weight e_col
            weights.append(_unit(n, j) + _unit(n, i))
    alph = Alphabet(names, weights)
    P = Presentation("FRT", alph, [], {fam: n})
    P.relations = entries(frt_matrix_defect(P.matrix(), S, alph))
    return P


def two_param_presentation(n: int, S: Mat | None = None, fam: str = "E") -> Presentation:
    _check_n(n)
    S = S if S is not None else build_S(n)
    alph = matrix_alphabet(n, (fam,))
    P = Presentation("TwoParam", alph, [], {fam: n})
    P.relations = entries(cuea_matrix_defect(P.matrix(), S, alph))
    return P


def clcr_relation(alph, fam, i, j, m, n_) -> FreeElement:
    """E^i_j E^m_n - E^m_n E^i_j - t (delta^m_j E^i_n - delta^i_n E^m_j)."""
    g = lambda u, l: alph.gen(f"{fam}{u}{l}")
    rel = g(i, j) * g(m, n_) - g(m, n_) * g(i, j)
    if m == j:
        rel = rel - g(i, n_) * t
    if i == n_:
        rel = rel + g(m, j) * t
    return rel


def classical_presentation(n: int, fam: str = "E") -> Presentation:
    """U(gl(n))[t]: one commutation relation per unordered generator pair."""
    _check_n(n)
    alph = matrix_alphabet(n, (fam,))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    rels = []
    for x in range(len(pairs)):
        for y in range(x + 1, len(pairs)):
            (i, j), (m, n_) = pairs[x], pairs[y]
            rels.append(clcr_relation(alph, fam, i, j, m, n_))
    return Presentation("Classical", alph, rels, {fam: n})


def est_presentation(beta=None) -> Presentation:
    """A(e, s): eses = sese, s^2 - beta s = 1 (beta defaults to q - 1/q)."""
    beta = q - 1 / q if beta is None else as_scalar(beta)
    alph = Alphabet(["e", "s"])
    e, s = alph.gens()
    rels = [e * s * e * s - s * e * s * e, s * s - s * beta - 1]
    return Presentation("EST", alph, rels, {}, {"beta": beta})


def mixed_tl_presentation(n: int, S: Mat | None = None) -> Presentation:
    """T, Tb (the inverse matrix) and L with FRT on T, T Tb = Tb T = 1,
    RE on L, and L commuting with T and Tb."""
    _check_n(n)
    S = S if S is not None else build_S(n)
    names = family_names("T", n) + family_names("Tb", n) + family_names("L", n)
    weights = []
    for fam in ("T", "Tb", "L"):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                row, col = j, i
                if fam == "T":
                    w = _unit(n, row) + _unit(n, col) + [0] * n
                elif fam == "Tb":
                    w = [-x for x in _unit(n, col)] + [-x for x in _unit(n, row)] + [0] * n
                else:
                    w = [0] * (2 * n) + [x - y for x, y in zip(_unit(n, row), _unit(n, col))]
                weights.append(w)
    alph = Alphabet(names, weights)
    P = Presentation("MixedTL", alph, [], {"T": n, "Tb": n, "L": n})
    T, Tb, L = P.matrix("T"), P.matrix("Tb"), P.matrix("L")
    zero = alph.zero()
    rels = entries(frt_matrix_defect(T, S, alph))
    one = identity_like(n, alph)
    rels += entries(fsub(fmatmul(T, Tb, zero), one))
    rels += entries(fsub(fmatmul(Tb, T, zero), one))
    rels += entries(re_matrix_defect(L, S, alph))
    for x in entries(T) + entries(Tb):
        for y in entries(L):
            rels.append(x * y - y * x)
    P.relations = rels
    return P


def build_presentation(kind: str, n: int | None = None, **kw) -> Presentation:
    kind_l = kind.lower()
    if kind_l == "re":
        return re_presentation(n, **kw)
    if kind_l == "frt":
        return frt_presentation(n, **kw)
    if kind_l in ("twoparam", "two-param", "cuea"):
        return two_param_presentation(n, **kw)
    if kind_l in ("classical", "clcr"):
        return classical_presentation(n, **kw)
    if kind_l in ("est", "es"):
        return est_presentation(**kw)
    if kind_l in ("mixedtl", "mixed"):
        return mixed_tl_presentation(n, **kw)
    raise PresentationError(f"unknown presentation kind {kind!r}")


# characters -------------------------------------------------------------------

def evaluate(x: FreeElement, values: dict) -> Scalar:
    """Image of x under the character sending generator names to Scalars."""
    acc = ZERO
    for w, c in x.terms.items():
        term = c
        for letter in w:
            term = term * values[x.alphabet.names[letter]]
            if not term:
                break
        acc = acc + term
    return acc


def character_values(P: Presentation, A: Mat, fam: str | None = None) -> dict:
    fam = fam or next(iter(P.families))
    n = P.families[fam]
    if A.size != n:
        raise ShapeMismatch(f"matrix of size {A.size} for a family of size {n}")
    return {gen_name(fam, r, c): A.rows[r - 1][c - 1]
            for r in range(1, n + 1) for c in range(1, n + 1)}


def failing_relations(relations, values) -> list:
    return [r for r in relations if evaluate(r, values)]


def verify_character(P: Presentation, A: Mat) -> bool:
    if len(P.families) != 1:
        raise ShapeMismatch("characters are checked on single-family presentations")
    return not failing_relations(P.relations, character_values(P, A))


# orbit quotients --------------------------------------------------------------

ORBIT_KINDS = ("symmetric", "bisymmetric", "nilpotent", "two-parameter", "KKS")


def tsub_shift() -> Scalar:
    """t/(1 - q^-2), the constant of the substitution L = E + t/(1 - q^-2)."""
    return t / (1 - q ** -2)


@dataclass
class OrbitQuotientSpec:
    """Orbit quotient of the RE (or two-parameter / classical) algebra.

    ``mult`` holds the eigenvalue multiplicities, ``eig`` the matching
    eigenvalue Scalars:
      symmetric      mult=(l, m),    eig=(lam, mu),   l + m = n
      bisymmetric    mult=(l, m, k), eig=(lam, mu),   eigenvalue 0 with mult k > 0
      nilpotent      mult=(),        eig=()           L^2 = 0, Tr_q(L) = 0
      two-parameter  mult=(n1, n2),  eig=(mu1, mu2)
      KKS            mult=(n1, n2),  eig=(mu1, mu2)
    """
    kind: str
    n: int
    mult: tuple = ()
    eig: tuple = ()

    def __post_init__(self):
        if self.kind not in ORBIT_KINDS:
            raise PresentationError(f"unknown orbit kind {self.kind!r}")
        self.mult = tuple(int(x) for x in self.mult)
        self.eig = tuple(as_scalar(x) for x in self.eig)
        _check_n(self.n)
        if self.kind == "nilpotent":
            return
        if len(self.eig) != 2:
            raise PresentationError("two eigenvalue symbols expected")
        if self.eig[0] == self.eig[1]:
            raise PresentationError("eigenvalues must be distinct")
        if any(x < 0 for x in self.mult):
            raise PresentationError("multiplicities must be nonnegative")
        if self.kind == "bisymmetric":
            if len(self.mult) != 3 or sum(self.mult) != self.n or self.mult[2] <= 0:
                raise PresentationError("bisymmetric needs (l, m, k) with k > 0 and l+m+k = n")
            if 0 in self.eig:
                raise PresentationError("bisymmetric eigenvalues must be nonzero")
        else:
            if len(self.mult) != 2 or sum(self.mult) != self.n:
                raise PresentationError("multiplicities must sum to n")
        # ordering (l, lam) > (m, mu) is a labeling convention; only the
        # multiplicity part is decidable for symbolic eigenvalues
        if self.kind in ("symmetric", "bisymmetric") and self.mult[0] < self.mult[1]:
            raise PresentationError("ordering convention requires l >= m")

    @property
    def base_kind(self):
        return {"two-parameter": "TwoParam", "KKS": "Classical"}.get(self.kind, "RE")

    def base(self) -> Presentation:
        fam = "E" if self.kind in ("two-parameter", "KKS") else "L"
        return build_presentation(self.base_kind, self.n, fam=fam)

    def extra_relations(self, P: Presentation) -> list:
        alph = P.alphabet
        M = P.matrix()
        if self.kind == "nilpotent":
            return entries(fmatmul(M, M, alph.zero())) + [qtrace(M, alph)]
        l, m = self.mult[0], self.mult[1]
        lam, mu = self.eig
        if self.kind == "symmetric":
            quad = fmatmul(shifted(M, lam, alph), shifted(M, mu, alph), alph.zero())
            tr = qtrace(M, alph) - (lam * quantum_integer(l) + mu * quantum_integer(m))
            return entries(quad) + [tr]
        if self.kind == "bisymmetric":
            cub = fmatmul(M, fmatmul(shifted(M, lam, alph), shifted(M, mu, alph), alph.zero()),
                          alph.zero())
            tr1 = qtrace(M, alph) - (lam * quantum_integer(l) + mu * quantum_integer(m))
            tr2 = qtrace(fmatmul(M, M, alph.zero()), alph) - (
                (lam + mu) * (lam * quantum_integer(l) + mu * quantum_integer(m))
                - lam * mu * quantum_integer(l + m))
            return entries(cub) + [tr1, tr2]
        quad = fmatmul(shifted(M, lam, alph), shifted(M, mu, alph), alph.zero())
        if self.kind == "two-parameter":
            n1, n2 = quantum_integer(l), quantum_integer(m)
            tr = qtrace(M, alph) - (n1 * lam + n2 * mu + t * n1 * n2)
        else:
            tr = trace(M, alph) - (l * lam + m * mu + t * l * m)
        return entries(quad) + [tr]

    def presentation(self) -> Presentation:
        P = self.base()
        extra = self.extra_relations(P)
        return Presentation(f"{P.name}/{self.kind}", P.alphabet, P.relations + extra,
                            dict(P.families), self.to_json())

    def ideal(self) -> IdealSpec:
        return self.presentation().ideal()

    def character(self) -> Mat:
        """The designated character matrix of the quotient."""
        from .qtensor import AdmissiblePair, family_a_matrix, family_b_matrix
        if self.kind == "nilpotent":
            if self.n < 2:
                return Mat.zero(self.n)
            return family_b_matrix(AdmissiblePair(self.n, ((2, 1),)), 0, ZERO)
        if self.kind in ("symmetric", "bisymmetric"):
            lam_, mu_ = self.eig
            if (lam_, mu_) == (a * a, b * b):
                return family_a_matrix(self.n, self.mult[0], self.mult[1])
            # a diagonal gauge moves sqrt(lam mu) entirely into the upper entries
            M = family_a_matrix(self.n, self.mult[0], self.mult[1], lam_, mu_, ZERO)
            l, m = self.mult[0], self.mult[1]
            for i in range(1, m + 1):
                s = l + m + 1 - i
                M.rows[i - 1][s - 1] = lam_ * mu_
                M.rows[s - 1][i - 1] = -ONE
            return M
        raise PresentationError(f"no designated character for {self.kind}")

    def to_json(self):
        from .scalars import render
        return {"kind": self.kind, "n": self.n, "mult": list(self.mult),
                "eig": [render(x) for x in self.eig]}


def verify_orbit_character(spec: OrbitQuotientSpec, A: Mat) -> bool:
    P = spec.base()
    vals = character_values(P, A)
    return not failing_relations(spec.extra_relations(P), vals)


# classical orbit oracle -----------------------------------------------------

class SamplingUnstable(RuntimeError):
    pass


_PRIMES = (33554393, 33554383)


def _rand_unimodular(rng, n):
    """Random integer matrix with determinant 1 and its integer inverse."""
    G = [[int(i == j) for j in range(n)] for i in range(n)]
    Gi = [row[:] for row in G]
    for _ in range(3 * n * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            break
        c = rng.randint(-3, 3)
        # G <- G (1 + c e_ij), Gi <- (1 - c e_ij) Gi
        for r in range(n):
            G[r][j] += c * G[r][i]
        for k in range(n):
            Gi[i][k] -= c * Gi[j][k]
    return G, Gi


def _mm(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _monomials(nvars, d):
    from itertools import combinations_with_replacement
    out = []
    for k in range(d + 1):
        out.extend(combinations_with_replacement(range(nvars), k))
    return out


def _rank_mod(rows, p):
    """Incremental ranks of integer row vectors modulo the prime p (< 2^25,
    so that int64 dot products of a few hundred terms cannot overflow)."""
    import numpy as np
    width = len(rows[0]) if rows else 0
    basis = np.zeros((0, width), dtype=np.int64)
    cols: list[int] = []
    ranks = []
    for row in rows:
        v = np.array([x % p for x in row], dtype=np.int64)
        if cols:
            v = (v - (v[cols] @ basis) % p) % p
        nz = np.flatnonzero(v)
        if nz.size:
            lead = int(nz[0])
            v = (v * pow(int(v[lead]), -1, p)) % p
            if cols:
                basis = (basis - np.outer(basis[:, lead], v) % p) % p
            basis = np.vstack([basis, v])
            cols.append(lead)
        ranks.append(len(cols))
    return ranks


def _orbit_ranks(rep, d, npoints, rng):
    """Evaluation ranks per filtration level at npoints orbit points.

    rep has integer entries (denominators cleared by the caller, which only
    rescales the orbit).  Ranks are taken modulo two large primes; the
    rank over Q is at least the larger one and equals it generically."""
    n = len(rep)
    pts = []
    for _ in range(npoints):
        G, Gi = _rand_unimodular(rng, n)
        X = _mm(_mm(Gi, rep), G)
        pts.append([x for row in X for x in row])
    monos = _monomials(n * n, d)
    rows = []
    for mono in monos:
        row = []
        for vals in pts:
            v = 1
            for var in mono:
                v *= vals[var]
            row.append(v)
        rows.append(row)
    best = None
    for p in _PRIMES:
        inc = _rank_mod(rows, p)
        ranks = [0] * (d + 1)
        for mono, r in zip(monos, inc):
            ranks[len(mono)] = r
        best = ranks if best is None else [max(x, y) for x, y in zip(best, ranks)]
    return best


def classical_orbit_dims(n: int, multiplicities=(), eigenvalues=(), d: int = 2, *,
                         representative=None, seed: int = 0, oversample: int = 2,
                         attempts: int = 3) -> list[int]:
    """Filtered dims (levels 0..d) of the coordinate ring of the conjugation
    orbit of diag(eigenvalues with multiplicities), or of ``representative``.

    Two independent point samples must agree; the sample grows otherwise."""
    import random
    from math import gcd
    if representative is None:
        if len(set(eigenvalues)) != len(eigenvalues):
            raise PresentationError("eigenvalues must be pairwise distinct")
        diag = []
        for m_, ev in zip(multiplicities, eigenvalues):
            diag += [mpq(ev)] * m_
        if len(diag) != n:
            raise PresentationError("multiplicities must sum to n")
        rep = [[diag[i] if i == j else mpq(0) for j in range(n)] for i in range(n)]
    else:
        rep = [[mpq(x) for x in row] for row in representative]
    # a common denominator only dilates the orbit; filtered dims are unchanged
    den = 1
    for row in rep:
        for x in row:
            den = den * int(x.denominator) // gcd(den, int(x.denominator))
    rep = [[int(x * den) for x in row] for row in rep]
    rng = random.Random(seed)
    nmono = len(_monomials(n * n, d))
    npoints = max(oversample * nmono, 1)
    for _ in range(attempts):
        r1 = _orbit_ranks(rep, d, npoints, rng)
        r2 = _orbit_ranks(rep, d, npoints, rng)
        if r1 == r2:
            return r1
        npoints *= 2
    raise SamplingUnstable(f"orbit ranks did not stabilize after {attempts} attempts")


# verification checks ------------------------------------------------------------
#
# Each check_* returns a JSON-ready record; verify_* wraps it as a bool.

def make_record(check: str, params: dict, bound, ok: bool, witnesses=()) -> dict:
    return {"check": check, "params": params, "bound": bound,
            "result": "pass" if ok else "fail", "witnesses": list(witnesses)}


def _members(xs, ideal, d, seed, exact):
    from .freealg import ideal_membership_many
    return ideal_membership_many(xs, ideal, d, seed=seed, exact=exact)


def _poly_of(M, coeffs, alph):
    """P(M) for P given by coefficients low degree first."""
    return matrix_poly(M, coeffs, alph)


class InvalidPolynomial(PresentationError):
    pass


# Trace invariance and polynomial covariance in the mixed T/L algebra.
#
# In the mixed algebra L commutes with T and Tb, so it is the tensor product
# of the T/Tb algebra (FRT + inverse relations) and the RE algebra.  An element
# is in the ideal iff, after moving L letters to the right and expanding in a
# normal-word basis b of the RE algebra (exact in each L-degree, the RE
# relations being homogeneous), every T/Tb coefficient of b lies in the T/Tb
# ideal.  The degree bound applies to the T/Tb part.

def _tl_split(x: FreeElement, n_t_letters: int):
    """Map L-word -> T/Tb element with letters in their original order."""
    out: dict[tuple, dict] = {}
    for w, c in x.terms.items():
        tw = tuple(i for i in w if i < n_t_letters)
        lw = tuple(i - n_t_letters for i in w if i >= n_t_letters)
        bucket = out.setdefault(lw, {})
        bucket[tw] = bucket.get(tw, ZERO) + c
    return out


class TLReducer:
    def __init__(self, n: int, d: int, S: Mat | None = None):
        self.n = n
        self.d = d
        self.mixed = mixed_tl_presentation(n, S)
        self.re = re_presentation(n, S)
        nt = 2 * n * n
        self.nt = nt
        names = list(self.mixed.alphabet.names[:nt])
        weights = [w[: 2 * n] for w in self.mixed.alphabet.weights[:nt]]
        self.t_alph = Alphabet(names, weights)
        t_images = {nm: self.t_alph.gen(nm) for nm in names}
        self.t_ideal = IdealSpec([r.substitute(t_images, self.t_alph)
                                  for r in self.mixed.relations
                                  if all(len(w) == 0 or max(w) < nt for w in r.terms)],
                                 alphabet=self.t_alph)

    def split(self, x: FreeElement):
        parts = _tl_split(x, self.nt)
        out = {}
        for lw, terms in parts.items():
            el = FreeElement(self.t_alph, {w: c for w, c in terms.items() if c})
            if el:
                out[lw] = el
        return out

    def scalars(self, xs):
        out = list(self.t_ideal.scalars()) + list(self.re.ideal().scalars())
        for x in xs:
            out.extend(x.terms.values())
        return out

    def members(self, xs, fld):
        """Ideal membership for each element of xs, over one field."""
        from .freealg import BoundedSpan
        from .freealg.ideal import _weights_of
        splits = [self.split(x) for x in xs]
        tparts = [el for sp in splits for el in sp.values()]
        for el in tparts:
            if el.degree > self.d:
                from .freealg import BoundTooSmall
                raise BoundTooSmall(f"T-degree {el.degree} exceeds the bound {self.d}")
        ldeg = max((len(lw) for sp in splits for lw in sp), default=0)
        lspan = BoundedSpan(self.re.ideal(), max(ldeg, 1), fld)
        tspan = BoundedSpan(self.t_ideal, self.d, fld, target_weights=_weights_of(tparts))
        results = []
        for sp in splits:
            combos: dict[int, dict] = {}
            for lw, el in sp.items():
                nf = lspan.normal_form_vec({lspan.coder.encode(lw): fld(ONE)})
                tv = tspan.vec(el)
                for bcode, cb in nf.items():
                    acc = combos.setdefault(bcode, {})
                    for code, v in tv.items():
                        nv = acc.get(code, 0) + cb * v
                        if nv:
                            acc[code] = nv
                        else:
                            acc.pop(code, None)
            results.append(all(tspan.echelon.contains(vec) for vec in combos.values() if vec))
        return results


def _robust_fields(scalars, seed, trials, exact):
    from .freealg import ExactField, fields_for
    if exact:
        return [ExactField()]
    return fields_for(seed, scalars, trials)


def _robust_members(reducer_members, scalars, seed, trials=3, exact=False):
    from .freealg import ExactField
    results = [tuple(reducer_members(f)) for f in _robust_fields(scalars, seed, trials, exact)]
    if all(r == results[0] for r in results):
        return list(results[0])
    return list(reducer_members(ExactField()))


def trp_elements(n: int, poly_coeffs, reducer: TLReducer, weight: str = "quantum"):
    """Differences that trace invariance and covariance say vanish, for one polynomial."""
    P = reducer.mixed
    alph = P.alphabet
    zero = alph.zero()
    T, Tb, L = P.matrix("T"), P.matrix("Tb"), P.matrix("L")
    conj = fmatmul(fmatmul(Tb, L, zero), T, zero)
    tr = qtrace if weight == "quantum" else trace
    out = []
    if weight == "quantum":
        lhs = _poly_of(conj, poly_coeffs, alph)
        rhs = fmatmul(fmatmul(Tb, _poly_of(L, poly_coeffs, alph), zero), T, zero)
        out += [("P", x) for x in entries(fsub(lhs, rhs))]
    out.append(("Tr", tr(fmatmul(fmatmul(Tb, _poly_of(L, poly_coeffs, alph), zero), T, zero), alph)
                - tr(_poly_of(L, poly_coeffs, alph), alph)))
    return [(tag, x) for tag, x in out]


def check_lemma_trp(n: int = 2, d: int = 5, poly_coeffs=(0, 1), *, seed: int = 0,
                    exact: bool = False, control: bool = False) -> dict:
    """P(Tb L T) = Tb P(L) T and Tr_q(Tb P(L) T) = Tr_q(P(L)) in the mixed
    algebra.  With control=True the ordinary trace replaces Tr_q and the
    record passes iff that identity FAILS."""
    from .freealg import BoundTooSmall
    if d < 4:
        raise BoundTooSmall("trace invariance needs a T-degree bound d >= 4")
    red = TLReducer(n, d)
    items = trp_elements(n, poly_coeffs, red, "ordinary" if control else "quantum")
    xs = [x for _, x in items]
    res = _robust_members(lambda f: red.members(xs, f), red.scalars(xs), seed, exact=exact)
    from .scalars import render
    params = {"n": n, "poly": [render(as_scalar(c)) for c in poly_coeffs],
              "trace": "ordinary" if control else "quantum"}
    if control:
        ok = not res[-1]
        return make_record("trp-control", params, d, ok, [] if ok else [xs[-1].render()])
    bad = [x.render() for x, r in zip(xs, res) if not r]
    return make_record("trp", params, d, not bad, bad)


def verify_lemma_trp(n: int = 2, d: int = 5, poly_coeffs=(0, 1), **kw) -> bool:
    return check_lemma_trp(n, d, poly_coeffs, **kw)["result"] == "pass"


# the (e, s) algebra lemma ----------------------------------------------------

def _poly_elem(coeffs, x: FreeElement) -> FreeElement:
    alph = x.alphabet
    out, power = alph.zero(), alph.one()
    for k, c in enumerate(coeffs):
        if k:
            power = power * x
        c = as_scalar(c)
        if c:
            out = out + power * c
    return out


def lemma_alg_elements(poly_coeffs, alpha, beta, m_max):
    P = est_presentation(beta)
    e, s = P.alphabet.gens()
    Pe = _poly_elem(poly_coeffs, e)
    items = []
    for m in range(1, m_max + 1):
        sems = s * (e ** m) * s
        items.append((f"stronger m={m}", Pe * sems - sems * Pe))
    items.append(("weaker", Pe * s * Pe * s - s * Pe * s * Pe))
    items.append(("factor", Pe * Pe - Pe * as_scalar(alpha)))
    extra = e * Pe - e * as_scalar(alpha)
    return P, extra, items


def check_lemma_alg(poly_coeffs, alpha, beta=None, m_max: int = 4, d: int | None = None, *,
                    seed: int = 0, exact: bool = False) -> dict:
    from .freealg import BoundTooSmall
    from .scalars import render
    coeffs = [as_scalar(c) for c in poly_coeffs]
    if not coeffs or coeffs[0]:
        raise InvalidPolynomial("the polynomial must vanish at 0")
    beta = q - 1 / q if beta is None else as_scalar(beta)
    P, extra, items = lemma_alg_elements(coeffs, alpha, beta, m_max)
    need = max(x.degree for _, x in items)
    if d is None:
        d = max(12, need + 2)
    if d < need:
        raise BoundTooSmall(f"bound {d} below the degree {need} of the checked identities")
    ideal = P.ideal([extra]) if extra else P.ideal()
    xs = [x for _, x in items]
    res = _members(xs, ideal, d, seed, exact)
    bad = [f"{tag}: {x.render()}" for (tag, x), r in zip(items, res) if not r]
    params = {"poly": [render(c) for c in coeffs], "alpha": render(as_scalar(alpha)),
              "beta": render(beta), "m_max": m_max}
    return make_record("alg-lemma", params, d, not bad, bad)


def verify_lemma_alg(poly_coeffs, alpha, beta=None, m_max: int = 4, d: int | None = None,
                     **kw) -> bool:
    return check_lemma_alg(poly_coeffs, alpha, beta, m_max, d, **kw)["result"] == "pass"


# fiber map -------------------------------------------------------------------

def fiber_elements(spec: OrbitQuotientSpec):
    P = spec.base()
    alph = P.alphabet
    zero = alph.zero()
    lam_, mu_ = spec.eig
    l, m = spec.mult[0], spec.mult[1]
    E = P.matrix()
    pi = fsub(fmatmul(E, E, zero), fscale(E, lam_ + mu_))
    S = build_S(spec.n)
    items = [("re", x) for x in entries(re_matrix_defect(pi, S, alph))]
    items += [("quad", x) for x in entries(fmatmul(pi, shifted(pi, -lam_ * mu_, alph), zero))]
    items.append(("trace", qtrace(pi, alph) + lam_ * mu_ * quantum_integer(l + m)))
    return items


def check_fiber_map(l: int = 1, m: int = 1, k: int = 1, d: int = 5, *, seed: int = 0,
                    exact: bool = False) -> dict:
    from .freealg import BoundTooSmall
    if d < 5:
        raise BoundTooSmall("the fiber map check needs d >= 5")
    from .scalars import lam, mu
    spec = OrbitQuotientSpec("bisymmetric", l + m + k, (l, m, k), (lam(), mu()))
    items = fiber_elements(spec)
    # the clauses at the designated character
    A = spec.character()
    vals = character_values(spec.base(), A)
    char_bad = [tag for tag, x in items if evaluate(x, vals)]
    items = [(tag, x) for tag, x in items if x]
    res = _members([x for _, x in items], spec.ideal(), d, seed, exact)
    bad = [f"{tag}: {x.render()}" for (tag, x), r in zip(items, res) if not r]
    bad += [f"character: {tag}" for tag in char_bad]
    return make_record("fiber", {"l": l, "m": m, "k": k}, d, not bad, bad)


def verify_fiber_map(l: int = 1, m: int = 1, k: int = 1, d: int = 5, **kw) -> bool:
    return check_fiber_map(l, m, k, d, **kw)["result"] == "pass"


# substitution L = E + t/(1 - q^-2) and the classical limit --------------------

def substitute_shift(x: FreeElement, target: Alphabet, src_fam="L", dst_fam="E", n=None):
    c = tsub_shift()
    images = {}
    for nm in x.alphabet.names:
        i, j = int(nm[len(src_fam)]), int(nm[len(src_fam) + 1])
        img = target.gen(f"{dst_fam}{i}{j}")
        images[nm] = img + c if i == j else img
    return x.substitute(images, target)


def classical_limit(x: FreeElement) -> FreeElement:
    """q -> 1 on the coefficients; raises BadSpecialization on a pole."""
    return x.map_coefficients(lambda c: c.subs({"q": 1}))


def check_substitution(n: int = 2) -> dict:
    re = re_presentation(n)
    tp = two_param_presentation(n)
    cl = classical_presentation(n)
    bad = []
    for k, (r, c) in enumerate(zip(re.relations, tp.relations)):
        if substitute_shift(r, tp.alphabet) != c:
            bad.append(f"re->cuea component {k}")
    # t = 0 turns cuea back into re
    names = {nm: re.alphabet.gen("L" + nm[1:]) for nm in tp.alphabet.names}
    for k, (r, c) in enumerate(zip(re.relations, tp.relations)):
        if c.map_coefficients(lambda z: z.subs({"t": 0})).substitute(names, re.alphabet) != r:
            bad.append(f"cuea(t=0)->re component {k}")
    # q -> 1: component ((i1,i2),(j1,j2)) is the commutation relation
    # [E^{j1}_{i1}, E^{j2}_{i2}] = t(...), i.e. clcr(i=j1, j=i1, m=j2, n=i2)
    limit = [classical_limit(c) for c in tp.relations]
    for (i1, i2, j1, j2), x in zip(_components(n), limit):
        want = clcr_relation(tp.alphabet, "E", j1, i1, j2, i2)
        if x != want:
            bad.append(f"cuea(q=1) component {(i1, i2, j1, j2)}: {x.render()}")
    ok = not bad
    # the classical presentation is generated by these components
    gens = {r for r in cl.relations}
    comps = {x for x in limit if x} | {-x for x in limit if x}
    missing = [r.render() for r in gens if r not in comps]
    bad += [f"clcr relation not produced: {r}" for r in missing]
    return make_record("substitution", {"n": n}, None, ok and not missing, bad)


def _components(n):
    for i1 in range(1, n + 1):
        for i2 in range(1, n + 1):
            for j1 in range(1, n + 1):
                for j2 in range(1, n + 1):
                    yield i1, i2, j1, j2


def verify_substitution(n: int = 2) -> bool:
    return check_substitution(n)["result"] == "pass"


# two-parameter quotient -> KKS quotient ------------------------------------------

def check_kks_limit(n1: int = 1, n2: int = 1) -> dict:
    """The symmetric RE quotient with lam = mu1 + c, mu = mu2 + c (c the
    substitution constant) becomes the two-parameter quotient under
    L = E + c, and the two-parameter quotient becomes the KKS quotient at q = 1."""
    from .scalars import symbol
    n = n1 + n2
    mu1, mu2 = symbol("l1"), symbol("l2")
    c = tsub_shift()
    sym = OrbitQuotientSpec("symmetric", n, (n1, n2), (mu1 + c, mu2 + c)).presentation()
    tp = OrbitQuotientSpec("two-parameter", n, (n1, n2), (mu1, mu2)).presentation()
    kks = OrbitQuotientSpec("KKS", n, (n1, n2), (mu1, mu2)).presentation()
    bad = []
    for k, (r, x) in enumerate(zip(sym.relations, tp.relations)):
        if substitute_shift(r, tp.alphabet) != x:
            bad.append(f"symmetric -> two-parameter relation {k}")
    nre = n ** 4
    # quotient relations map one to one; the base relations were checked by
    # check_substitution and span the classical relations at q = 1
    for k, (x, y) in enumerate(zip(tp.relations[nre:], kks.relations[len(kks.relations) - n * n - 1:])):
        if classical_limit(x) != y:
            bad.append(f"two-parameter -> KKS relation {k}: {classical_limit(x).render()}")
    limit_base = {classical_limit(x) for x in tp.relations[:nre]}
    limit_base |= {-x for x in limit_base}
    for r in kks.relations[: len(kks.relations) - n * n - 1]:
        if r not in limit_base:
            bad.append(f"classical relation not produced: {r.render()}")
    return make_record("kks-limit", {"n1": n1, "n2": n2}, None, not bad, bad)


def verify_kks_limit(n1: int = 1, n2: int = 1) -> bool:
    return check_kks_limit(n1, n2)["result"] == "pass"


# the gl(2) example ---------------------------------------------------------------

def gl2_systems(P: Presentation | None = None):
    """The four-equation systems of the gl(2) sphere example, by name."""
    from .scalars import symbol
    P = P or classical_presentation(2)
    alph = P.alphabet
    g = lambda i, j: alph.gen(f"E{i}{j}")
    E11, E12, E21, E22 = g(1, 1), g(1, 2), g(2, 1), g(2, 2)
    mu1, mu2 = symbol("l1"), symbol("l2")
    s1, s2 = mu1 + mu2, mu1 * mu2
    sys = {
        "e1": E11 * E11 + E21 * E12 - E11 * s1 + s2,
        "e2": E22 * E22 + E12 * E21 - E22 * s1 + s2,
        "e3": E12 * E11 + E22 * E12 - E12 * s1,
        "e4": E11 * E21 + E21 * E22 - E21 * s1,
        # e1 + e2: the cross term is E^1_2E^2_1 + E^2_1E^1_2
        "e1'": E11 * E11 + E22 * E22 + E12 * E21 + E21 * E12 - (E11 + E22) * s1 + 2 * s2,
        "e2'": E11 * E11 - E22 * E22 - (E11 - E22) * t - (E11 - E22) * s1,
        "e3'": E11 * E12 + E22 * E12 - E12 * (s1 + t),
        "e4'": E11 * E21 + E22 * E21 - E21 * (s1 + t),
        "e5'": E11 + E22 - (s1 + t),
    }
    trE = E11 + E22
    trE2 = E11 * E11 + E12 * E21 + E21 * E12 + E22 * E22
    return sys, trE, trE2, (s1, s2)


def check_gl2_example(d: int = 4, *, seed: int = 0, exact: bool = False,
                      perturb: bool = False) -> dict:
    """(a) e1..e4 and e1'..e4' generate the same ideal slice modulo the gl(2)
    relations, (b) e2'..e4' follow from e5', (c) e1' + e5' give
    Tr(E^2) = s1(s1 + t) - 2 s2; plus centrality of Tr(E), Tr(E^2).
    perturb=True adds 1 to e5' (a control that must make (b) fail)."""
    from .freealg import BoundTooSmall
    if d < 4:
        raise BoundTooSmall("the gl(2) example needs d >= 4")
    P = classical_presentation(2)
    sys_, trE, trE2, (s1, s2) = gl2_systems(P)
    e5 = sys_["e5'"] + (1 if perturb else 0)
    plain = [sys_[k] for k in ("e1", "e2", "e3", "e4")]
    primed = [sys_[k] for k in ("e1'", "e2'", "e3'", "e4'")]
    bad = []
    ok_a1 = _members(primed, P.ideal(plain), d, seed, exact)
    ok_a2 = _members(plain, P.ideal(primed), d, seed, exact)
    bad += [f"(a) {k} not in (e1..e4)" for k, r in zip(("e1'", "e2'", "e3'", "e4'"), ok_a1) if not r]
    bad += [f"(a) {k} not in (e1'..e4')" for k, r in zip(("e1", "e2", "e3", "e4"), ok_a2) if not r]
    ok_b = _members(primed[1:], P.ideal([e5]), d, seed, exact)
    bad += [f"(b) {k} not in (e5')" for k, r in zip(("e2'", "e3'", "e4'"), ok_b) if not r]
    target = trE2 - (s1 * (s1 + t) - 2 * s2)
    ok_c = _members([target], P.ideal([sys_["e1'"], e5]), d, seed, exact)
    if not ok_c[0]:
        bad.append("(c) Tr(E^2) - (s1(s1+t) - 2 s2) not in (e1', e5')")
    comms = [c * x - x * c for c in (trE, trE2) for x in P.alphabet.gens()]
    ok_z = _members(comms, P.ideal(), d, seed, exact)
    if not all(ok_z):
        bad.append("Casimir centrality")
    return make_record("gl2", {"perturbed": perturb}, d, not bad, bad)


def verify_gl2_example(d: int = 4, **kw) -> bool:
    return check_gl2_example(d, **kw)["result"] == "pass"


def est_completion_dims(d: int, beta=None, *, seed: int = 0, slack: int = 3) -> list[int]:
    """Graded dims of A(e, s) from word rewriting (independent of the
    linear-algebra engine), at a random rational value of q."""
    import random
    from fractions import Fraction
    from .freealg.rewriting import completion_dims
    from .scalars import Specialization, specialize
    beta = q - 1 / q if beta is None else as_scalar(beta)
    rng = random.Random(seed)
    qv = Fraction(rng.randint(2, 50), rng.randint(1, 13))
    bv = specialize(beta, Specialization({s: qv for s in ("q",)} | _other_symbols(beta, rng)))
    bv = Fraction(int(bv.numerator), int(bv.denominator))
    e, s = 0, 1
    rels = [{(e, s, e, s): 1, (s, e, s, e): -1},
            {(s, s): 1, (s,): -bv, (): -1}]
    return completion_dims(rels, 2, d, d + slack)


def _other_symbols(x: Scalar, rng):
    from fractions import Fraction
    return {s: Fraction(rng.randint(2, 50), rng.randint(1, 13)) for s in x.symbols() if s != "q"}

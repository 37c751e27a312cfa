"""Matrices and tensor operators over Scalar.

Conventions: ``e(i, j)`` is the matrix unit with a single 1 at row i,
column j (1-based).  On V (x) V the composite index (i1, i2) maps to
(i1 - 1) * n + i2, first factor major, and A_2 means I (x) A.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .scalars import ONE, ZERO, Scalar, as_scalar, a, b, q, quantum_integer, render


class QTensorError(ValueError):
    pass


class InvalidParameters(QTensorError):
    pass


class InternalInconsistency(RuntimeError):
    pass


class SingularGauge(QTensorError):
    pass


class Mat:
    """Square matrix of Scalars (immutable by convention)."""

    __slots__ = ("size", "rows")

    def __init__(self, rows):
        rows = [[as_scalar(x) for x in row] for row in rows]
        if not rows or any(len(r) != len(rows) for r in rows):
            raise QTensorError("matrix must be square and nonempty")
        self.size = len(rows)
        self.rows = rows

    @classmethod
    def zero(cls, size):
        return cls([[ZERO] * size for _ in range(size)])

    @classmethod
    def identity(cls, size):
        return cls([[ONE if i == j else ZERO for j in range(size)] for i in range(size)])

    @classmethod
    def diag(cls, entries):
        m = cls.zero(len(entries))
        for i, x in enumerate(entries):
            m.rows[i][i] = as_scalar(x)
        return m

    @property
    def n(self):
        return self.size

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _like(self, rows):
        return type(self)(rows) if type(self) is Mat else self._rewrap(rows)

    def _rewrap(self, rows):
        return Mat(rows)

    def __add__(self, other):
        return self._like([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self._like([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self._like([[-x for x in r] for r in self.rows])

    def scale(self, c):
        c = as_scalar(c)
        return self._like([[c * x for x in r] for r in self.rows])

    def __matmul__(self, other):
        if self.size != other.size:
            raise QTensorError("size mismatch")
        n = self.size
        cols = [[(k, other.rows[k][j]) for k in range(n) if other.rows[k][j]] for j in range(n)]
        out = []
        for r in self.rows:
            nz = {k: x for k, x in enumerate(r) if x}
            row = []
            for j in range(n):
                acc = ZERO
                for k, y in cols[j]:
                    x = nz.get(k)
                    if x is not None:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return self._like(out)

    def __pow__(self, k):
        out = type(self).identity(self.size) if type(self) is Mat else self._rewrap(Mat.identity(self.size).rows)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other):
        return isinstance(other, Mat) and self.size == other.size and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def is_zero(self):
        return not any(x for r in self.rows for x in r)

    def is_diagonal(self):
        return all(not self.rows[i][j] for i in range(self.size) for j in range(self.size) if i != j)

    def transpose(self):
        return self._like([list(col) for col in zip(*self.rows)])

    def trace(self):
        acc = ZERO
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def to_json(self):
        return {"n": self.size, "entries": [[render(x) for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        m = Mat([[as_scalar(x) for x in r] for r in data["entries"]])
        if m.size != data["n"]:
            raise QTensorError("declared n does not match entries")
        return m

    def __repr__(self):
        return f"Mat({[[render(x) for x in r] for r in self.rows]})"


class TensorOperator(Mat):
    """Endomorphism of V (x) V, stored as an n^2 x n^2 Mat."""

    __slots__ = ("dim",)

    def __init__(self, rows, n=None):
        super().__init__(rows)
        if n is None:
            n = round(self.size ** 0.5)
        if n * n != self.size:
            raise QTensorError("tensor operator size must be a perfect square")
        self.dim = n

    @property
    def n(self):
        return self.dim

    def _rewrap(self, rows):
        return TensorOperator(rows, self.dim)

    def to_json(self):
        return {"n": self.dim, "entries": [[render(x) for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        return cls([[as_scalar(x) for x in r] for r in data["entries"]], data["n"])


def e(n: int, i: int, j: int) -> Mat:
    """Matrix unit e^i_j: 1 at row i, column j (1-based)."""
    m = Mat.zero(n)
    m.rows[i - 1][j - 1] = ONE
    return m


def kron(A: Mat, B: Mat) -> Mat:
    rows = []
    for ra in A.rows:
        for rb in B.rows:
            rows.append([x * y if x and y else ZERO for x in ra for y in rb])
    return Mat(rows)


def idx(n: int, i1: int, i2: int) -> int:
    """0-based composite index of 1-based (i1, i2)."""
    return (i1 - 1) * n + (i2 - 1)


def build_R(n: int) -> TensorOperator:
    if n < 1:
        raise QTensorError("n >= 1")
    rows = [[ZERO] * (n * n) for _ in range(n * n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            rows[idx(n, i, j)][idx(n, i, j)] = q if i == j else ONE
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            # e^k_i (x) e^i_k
            rows[idx(n, k, i)][idx(n, i, k)] = q - 1 / q
    return TensorOperator(rows, n)


def build_P(n: int) -> TensorOperator:
    rows = [[ZERO] * (n * n) for _ in range(n * n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            rows[idx(n, i, j)][idx(n, j, i)] = ONE
    return TensorOperator(rows, n)


def build_S(n: int) -> TensorOperator:
    return build_P(n) @ build_R(n)


def build_D(n: int) -> Mat:
    return Mat.diag([q ** (-2 * i + 2) for i in range(1, n + 1)])


def check_hecke(S: TensorOperator) -> bool:
    one = TensorOperator(Mat.identity(S.size).rows, S.n)
    return (S @ S) - S.scale(q - 1 / q) == one


def check_braid(S: TensorOperator) -> bool:
    """S_1 S_2 S_1 == S_2 S_1 S_2 on V^(x)3."""
    n = S.n
    I = Mat.identity(n)
    S1, S2 = kron(S, I), kron(I, S)
    return S1 @ S2 @ S1 == S2 @ S1 @ S2


def check_yang_baxter(R: TensorOperator) -> bool:
    """R_12 R_13 R_23 == R_23 R_13 R_12 on V^(x)3."""
    n = R.n
    I = Mat.identity(n)
    P23 = kron(I, build_P(n))
    R12 = kron(R, I)
    R23 = kron(I, R)
    R13 = P23 @ R12 @ P23
    return R12 @ R13 @ R23 == R23 @ R13 @ R12


def quantum_trace(A: Mat) -> Scalar:
    acc = ZERO
    for i in range(A.size):
        if A.rows[i][i]:
            acc = acc + q ** (-2 * i) * A.rows[i][i]
    return acc


def quantum_trace_power(A: Mat, k: int) -> Scalar:
    return quantum_trace(A**k)


def second_leg(A: Mat) -> Mat:
    return kron(Mat.identity(A.size), A)


def re_defect(A: Mat, S: TensorOperator) -> Mat:
    """S A_2 S A_2 - A_2 S A_2 S."""
    if S.n != A.size:
        raise QTensorError("A and S sizes disagree")
    A2 = second_leg(A)
    SA = S @ A2
    AS = A2 @ S
    return SA @ SA - AS @ AS


def check_numerical_re(A: Mat, S: TensorOperator) -> bool:
    return re_defect(A, S).is_zero()


def gauge_transform(A: Mat, G: Mat) -> Mat:
    """G A G^{-1} for invertible diagonal G."""
    if not G.is_diagonal():
        raise SingularGauge("only diagonal gauge transformations are supported")
    g = [G.rows[i][i] for i in range(G.size)]
    if not all(g):
        raise SingularGauge("gauge matrix has a zero diagonal entry")
    return Mat([[A.rows[i][j] * g[i] / g[j] if A.rows[i][j] else ZERO
                 for j in range(A.size)] for i in range(A.size)])


def charpoly(A: Mat) -> list[Scalar]:
    """Coefficients c_0..c_n of det(x - A), low degree first (Faddeev-LeVerrier)."""
    n = A.size
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    M = Mat.zero(n)
    I = Mat.identity(n)
    for k in range(1, n + 1):
        M = A @ M + I.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(A @ M).trace() / k
    return coeffs


def poly_from_roots(roots) -> list[Scalar]:
    coeffs = [ONE]
    for r in roots:
        shifted = [ZERO] + coeffs
        scaled = [-r * c for c in coeffs] + [ZERO]
        coeffs = [x + y for x, y in zip(shifted, scaled)]
    return coeffs


# admissible pairs -------------------------------------------------------

@dataclass(frozen=True)
class AdmissiblePair:
    n: int
    sigma: tuple  # sorted ((i, sigma(i)), ...)

    def __post_init__(self):
        dom = [i for i, _ in self.sigma]
        img = [s for _, s in self.sigma]
        if dom != sorted(set(dom)):
            raise InvalidParameters("Y must be listed in increasing order without repeats")
        if any(not 1 <= x <= self.n for x in dom + img):
            raise InvalidParameters("Y and sigma(Y) must lie in 1..n")
        if any(img[k] <= img[k + 1] for k in range(len(img) - 1)):
            raise InvalidParameters("sigma must be strictly decreasing")

    @property
    def Y(self) -> tuple:
        return tuple(i for i, _ in self.sigma)

    @property
    def image(self) -> tuple:
        return tuple(s for _, s in self.sigma)

    def __call__(self, i):
        return dict(self.sigma)[i]

    @property
    def Y_plus(self):
        return tuple(i for i, s in self.sigma if i > s)

    @property
    def Y_minus(self):
        return tuple(i for i, s in self.sigma if i < s)

    @property
    def b_minus(self) -> int:
        m = dict(self.sigma)
        pool = list(self.Y_minus) + [m[i] for i in self.Y_plus]
        return max(pool) if pool else 0

    @property
    def b_plus(self) -> int:
        m = dict(self.sigma)
        pool = list(self.Y_plus) + [m[i] for i in self.Y_minus]
        return min(pool) if pool else self.n + 1

    def type_b(self) -> bool:
        return 2 * len(self.sigma) <= self.n and not set(self.Y) & set(self.image)

    def to_json(self):
        return {"n": self.n, "Y": list(self.Y), "sigma": {str(i): s for i, s in self.sigma}}


def enumerate_admissible_pairs(n: int) -> list[AdmissiblePair]:
    """Every (Y, sigma) with sigma: Y -> {1..n} strictly decreasing.

    A decreasing map is fixed by its image, so pairs are indexed by two
    subsets of equal size."""
    out = []
    points = range(1, n + 1)
    for k in range(n + 1):
        for Y in itertools.combinations(points, k):
            for img in itertools.combinations(points, k):
                out.append(AdmissiblePair(n, tuple(zip(Y, reversed(img)))))
    return out


def type_b_pairs(n: int) -> list[AdmissiblePair]:
    return [p for p in enumerate_admissible_pairs(n) if p.type_b()]


# canonical solutions ----------------------------------------------------

@dataclass(frozen=True)
class NumericalRESolution:
    family: str
    n: int
    params: dict = field(hash=False, compare=False)
    matrix: Mat = field(hash=False)
    eigenvalues: tuple = field(hash=False, compare=False)  # ((value, multiplicity), ...)

    def to_json(self):
        params = {}
        for k, v in self.params.items():
            if isinstance(v, AdmissiblePair):
                params[k] = v.to_json()
            elif isinstance(v, Scalar):
                params[k] = render(v)
            else:
                params[k] = v
        return {"family": self.family, "n": self.n, "params": params,
                "matrix": self.matrix.to_json(),
                "eigenvalues": [[render(v), m] for v, m in self.eigenvalues]}


def family_a_matrix(n, l, m, lam=None, mu=None, root=None) -> Mat:
    """mu sum_{i<=m} e^i_i + lam sum_{i<=l} e^i_i + sqrt(lam mu) sum_{i<=m}(e^i_s - e^s_i)."""
    lam = a * a if lam is None else as_scalar(lam)
    mu = b * b if mu is None else as_scalar(mu)
    root = a * b if root is None else as_scalar(root)
    M = Mat.zero(n)
    for i in range(1, m + 1):
        M.rows[i - 1][i - 1] += mu
    for i in range(1, l + 1):
        M.rows[i - 1][i - 1] += lam
    for i in range(1, m + 1):
        s = l + m + 1 - i
        M.rows[i - 1][s - 1] += root
        M.rows[s - 1][i - 1] -= root
    return M


def family_b_matrix(pair: AdmissiblePair, l: int, lam=None) -> Mat:
    lam = a * a if lam is None else as_scalar(lam)
    n = pair.n
    M = Mat.zero(n)
    for i in range(1, l + 1):
        M.rows[i - 1][i - 1] += lam
    for i, s in pair.sigma:
        M.rows[i - 1][s - 1] += ONE
    return M


def build_solution(family: str, params: dict, n: int, S: TensorOperator | None = None
                   ) -> NumericalRESolution:
    """Canonical numerical RE solution; the RE is re-checked exactly."""
    S = S if S is not None else build_S(n)
    if family == "A":
        l, m = params["l"], params["m"]
        if not (0 <= m <= l and l + m <= n):
            raise InvalidParameters(f"family A needs 0 <= m <= l, l + m <= n; got l={l}, m={m}")
        lam = as_scalar(params.get("lam", a * a))
        mu = as_scalar(params.get("mu", b * b))
        root = as_scalar(params.get("root", a * b))
        if root * root != lam * mu:
            raise InvalidParameters("root must square to lam * mu")
        matrix = family_a_matrix(n, l, m, lam, mu, root)
        eig = ((mu, m), (lam, l), (ZERO, n - l - m))
        expected = poly_from_roots([mu] * m + [lam] * l + [ZERO] * (n - l - m))
    elif family == "B":
        pair, l = params["pair"], params["l"]
        if pair.n != n:
            raise InvalidParameters("admissible pair built for another n")
        if not pair.type_b():
            raise InvalidParameters("type B needs card(Y) <= n/2 and sigma(Y) disjoint from Y")
        if not (pair.b_minus <= l < pair.b_plus and 0 <= l <= n):
            raise InvalidParameters(f"l={l} outside [{pair.b_minus}, {pair.b_plus})")
        lam = as_scalar(params.get("lam", a * a))
        matrix = family_b_matrix(pair, l, lam)
        eig = ((lam, l), (ZERO, n - l))
        expected = poly_from_roots([lam] * l + [ZERO] * (n - l))
    else:
        raise InvalidParameters(f"unknown family {family!r}")
    if not check_numerical_re(matrix, S):
        raise InternalInconsistency(f"family {family} {params} fails the numerical RE")
    if charpoly(matrix) != expected:
        raise InternalInconsistency(f"family {family} {params}: eigenvalue data mismatch")
    return NumericalRESolution(family, n, dict(params), matrix, eig)


def sweep_solutions(n: int, S: TensorOperator | None = None):
    """All canonical family members for size n with symbolic eigenvalues."""
    S = S if S is not None else build_S(n)
    out = []
    for l in range(n + 1):
        for m in range(l + 1):
            if l + m <= n:
                out.append(build_solution("A", {"l": l, "m": m}, n, S))
    for pair in type_b_pairs(n):
        for l in range(pair.b_minus, min(pair.b_plus, n + 1)):
            out.append(build_solution("B", {"pair": pair, "l": l}, n, S))
    return out

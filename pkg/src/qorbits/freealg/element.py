"""Free associative algebra over Scalar on a named alphabet."""

from __future__ import annotations

from fractions import Fraction

from ..scalars import ONE, Scalar, as_scalar, parse, render


class AlphabetMismatch(ValueError):
    pass


class Alphabet:
    """Ordered generator names; the order is the deglex letter order.

    ``weights`` optionally assigns each letter an integer vector (a torus
    weight); relations homogeneous for it allow weight-restricted
    linear algebra.
    """

    def __init__(self, names, weights=None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.weights = tuple(tuple(w) for w in weights) if weights is not None else None

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Alphabet({list(self.names)})"

    def gen(self, name) -> "FreeElement":
        return FreeElement(self, {(self.index[name],): ONE})

    def gens(self):
        return [self.gen(nm) for nm in self.names]

    def one(self):
        return FreeElement(self, {(): ONE})

    def zero(self):
        return FreeElement(self, {})

    def word_weight(self, word):
        if self.weights is None:
            return None
        dim = len(self.weights[0]) if self.weights else 0
        acc = [0] * dim
        for x in word:
            for k, v in enumerate(self.weights[x]):
                acc[k] += v
        return tuple(acc)

    def parse(self, text: str) -> "FreeElement":
        def resolve(name):
            if name in self.index:
                return self.gen(name)
            raise ValueError(f"unknown generator {name!r}")
        val = parse(text, resolve)
        return val if isinstance(val, FreeElement) else self.one() * val


def _coerce_scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return None


class FreeElement:
    """Finite linear combination of words with nonzero Scalar coefficients."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms=None):
        self.alphabet = alphabet
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    def _check(self, other):
        if other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet} vs {other.alphabet}")

    def _promote(self, other):
        if isinstance(other, FreeElement):
            self._check(other)
            return other
        c = _coerce_scalar(other)
        if c is None:
            return None
        return FreeElement(self.alphabet, {(): c})

    def __add__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for w, c in o.terms.items():
            out[w] = out[w] + c if w in out else c
        return FreeElement(self.alphabet, out)

    __radd__ = __add__

    def __neg__(self):
        return FreeElement(self.alphabet, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._promote(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "FreeElement":
        c = as_scalar(c)
        if not c:
            return FreeElement(self.alphabet)
        return FreeElement(self.alphabet, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, FreeElement):
            self._check(other)
            out = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    out[w] = out[w] + c1 * c2 if w in out else c1 * c2
            return FreeElement(self.alphabet, out)
        c = _coerce_scalar(other)
        return NotImplemented if c is None else self.scale(c)

    def __rmul__(self, other):
        c = _coerce_scalar(other)
        return NotImplemented if c is None else self.scale(c)

    def __truediv__(self, other):
        c = _coerce_scalar(other)
        return NotImplemented if c is None else self.scale(1 / c)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("FreeElement powers need a nonnegative integer")
        out = self.alphabet.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._promote(other) if not isinstance(other, FreeElement) else other
        if o is None:
            return NotImplemented
        return self.alphabet == o.alphabet and self.terms == o.terms

    def __hash__(self):
        return hash((self.alphabet, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def weights(self):
        return {self.alphabet.word_weight(w) for w in self.terms}

    def coefficient(self, word) -> Scalar:
        if isinstance(word, str):
            word = tuple(self.alphabet.index[x] for x in word.split("*")) if word else ()
        return self.terms.get(tuple(word), Scalar(0))

    def map_coefficients(self, f) -> "FreeElement":
        return FreeElement(self.alphabet, {w: f(c) for w, c in self.terms.items()})

    def substitute(self, images: dict, target: Alphabet | None = None) -> "FreeElement":
        """Algebra homomorphism sending letter names to FreeElements."""
        target = target or self.alphabet
        out = FreeElement(target)
        for w, c in self.terms.items():
            term = FreeElement(target, {(): c})
            for x in w:
                term = term * images[self.alphabet.names[x]]
            out = out + term
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0]), reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            word = "*".join(self.alphabet.names[x] for x in w)
            coef = render(c)
            if not word:
                parts.append(f"({coef})")
            elif c == 1:
                parts.append(word)
            else:
                parts.append(f"({coef})*{word}")
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"FreeElement({self.render()!r})"


def free_arith(x: FreeElement, y, op: str) -> FreeElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "scale":
        return x.scale(y)
    raise ValueError(f"unknown op {op!r}")


def commutator(x: FreeElement, y: FreeElement) -> FreeElement:
    return x * y - y * x

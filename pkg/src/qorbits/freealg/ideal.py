"""Degree-bounded two-sided ideal calculus by exact linear algebra.

For a generating set G the bounded span at level d is

    V_d = span{ u * g * w : g in G, len(u) + deg(g) + len(w) <= d },

built incrementally as V_k = V_{k-1} + X V_{k-1} + V_{k-1} X + G_k.  Ranks
are taken at seeded random rational specializations (three by default);
disagreement triggers a recomputation over the rational function field.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..scalars import SYMBOLS, BadSpecialization, Scalar, Specialization, specialize
from .element import Alphabet, AlphabetMismatch, FreeElement
from .linalg import Echelon, WordCoder

log = logging.getLogger(__name__)

DEFAULT_WORD_CAP = 80_000
DEFAULT_TRIALS = 3


class IdealError(ValueError):
    pass


class BoundTooSmall(IdealError):
    pass


class TooLarge(IdealError):
    pass


@dataclass
class IdealSpec:
    generators: list
    alphabet: Alphabet = None
    homogeneous: bool = field(default=None)

    def __post_init__(self):
        gens = [g for g in self.generators if not g.is_zero()]
        if not gens and self.alphabet is None:
            raise IdealError("ideal needs at least one nonzero generator or an alphabet")
        if self.alphabet is None:
            self.alphabet = gens[0].alphabet
        for g in gens:
            if g.alphabet != self.alphabet:
                raise AlphabetMismatch("ideal generators over different alphabets")
        self.generators = gens
        if self.homogeneous is None:
            self.homogeneous = all(g.is_homogeneous() for g in gens)

    def weight_homogeneous(self) -> bool:
        if self.alphabet.weights is None:
            return False
        return all(len(g.weights()) == 1 for g in self.generators)

    def scalars(self):
        for g in self.generators:
            yield from g.terms.values()

    def to_json(self):
        return {"generators": list(self.alphabet.names),
                "relations": [g.render() for g in self.generators]}


# field contexts -----------------------------------------------------------

class ExactField:
    """Coefficients stay Scalars (rational function field)."""

    name = "exact"

    def __call__(self, c):
        return c if isinstance(c, Scalar) else Scalar(c)

    def describe(self):
        return {"mode": "exact"}


class SpecializedField:
    name = "specialized"

    def __init__(self, spec: Specialization):
        self.spec = spec

    def __call__(self, c):
        return specialize(c, self.spec)

    def describe(self):
        return {"mode": "specialized", "point": self.spec.as_dict()}


def random_specialization(rng: random.Random, scalars=(), allow_classical=False) -> Specialization:
    """Random rational point at which every listed Scalar is defined."""
    scalars = list(scalars)
    for _ in range(200):
        values = {}
        for name in SYMBOLS:
            while True:
                v = Fraction(rng.randint(-97, 97), rng.randint(1, 61))
                if v not in (0, 1, -1):
                    break
            values[name] = v
        spec = Specialization(values, allow_classical=allow_classical)
        try:
            for c in scalars:
                specialize(c, spec)
        except BadSpecialization:
            continue
        return spec
    raise BadSpecialization("could not find a valid random specialization")


def fields_for(seed: int, scalars, trials: int = DEFAULT_TRIALS):
    rng = random.Random(seed)
    scalars = list(scalars)
    return [SpecializedField(random_specialization(rng, scalars)) for _ in range(trials)]


# the bounded span ---------------------------------------------------------

class BoundedSpan:
    """Echelon basis of V_d over one coefficient field.

    ``target_weights`` restricts the computation to the weight components
    needed to decide questions about elements of those weights (only valid
    for weight-homogeneous generators)."""

    def __init__(self, ideal: IdealSpec, bound: int, fld, word_cap=DEFAULT_WORD_CAP,
                 target_weights=None, lazy=False):
        self.ideal = ideal
        self.alphabet = ideal.alphabet
        self.bound = bound
        self.field = fld
        g = len(self.alphabet)
        self.coder = WordCoder(g, bound + 1)
        total = self.coder.count_upto(bound)
        if target_weights is None and total > word_cap:
            raise TooLarge(f"{total} words up to degree {bound} exceed the cap {word_cap}")
        self.target_weights = None
        if target_weights is not None:
            if not ideal.weight_homogeneous():
                raise IdealError("weight restriction needs weight-homogeneous generators")
            self.target_weights = set(target_weights)
        self.echelon = Echelon()
        self.level = -1
        self._steps = self._build()
        if not lazy:
            self.complete()

    def advance(self) -> bool:
        """Process the next filtration level; False once the bound is reached."""
        if self.level >= self.bound:
            return False
        next(self._steps)
        return True

    def complete(self):
        while self.advance():
            pass

    def vec(self, x: FreeElement) -> dict:
        enc = self.coder.encode
        out = {}
        for w, c in x.terms.items():
            v = self.field(c)
            if v:
                out[enc(w)] = v
        return out

    def element(self, vec: dict) -> FreeElement:
        dec = self.coder.decode
        return FreeElement(self.alphabet, {dec(c): Scalar(_to_fraction(v)) if not isinstance(v, Scalar) else v
                                           for c, v in vec.items()})

    def _needed_weights(self):
        """Weights allowed at each level so that level-d targets are reachable."""
        if self.target_weights is None:
            return None
        letters = {w for w in self.alphabet.weights}
        levels = [None] * (self.bound + 1)
        levels[self.bound] = set(self.target_weights)
        for k in range(self.bound, 0, -1):
            prev = set(levels[k])
            for w in levels[k]:
                for lw in letters:
                    prev.add(tuple(x - y for x, y in zip(w, lw)))
            levels[k - 1] = prev
        return levels

    def _build(self):
        ech = self.echelon
        alphabet = self.alphabet
        coder = self.coder
        levels = self._needed_weights()
        gens_by_deg: dict[int, list] = {}
        for gen in self.ideal.generators:
            gens_by_deg.setdefault(gen.degree, []).append(gen)
        g = len(alphabet)
        letter_w = alphabet.weights
        new_rows: list[tuple] = []  # (pivot, weight) added at the previous level
        for k in range(0, self.bound + 1):
            allowed = levels[k] if levels is not None else None
            added = []
            for gen in gens_by_deg.get(k, []):
                if allowed is not None and next(iter(gen.weights())) not in allowed:
                    continue
                piv = ech.insert(self.vec(gen))
                if piv is not None:
                    added.append((piv, next(iter(gen.weights())) if allowed is not None else None))
            # rows are copied before extension because insert() may not keep them
            prev_rows = [(ech.rows[p], w) for p, w in new_rows]
            for row, wt in prev_rows:
                for x in range(g):
                    if allowed is not None:
                        nw = tuple(u + v for u, v in zip(wt, letter_w[x]))
                        if nw not in allowed:
                            continue
                    else:
                        nw = None
                    left = {coder.left(x, c): v for c, v in row.items()}
                    piv = ech.insert(left)
                    if piv is not None:
                        added.append((piv, nw))
                    right = {coder.right(c, x): v for c, v in row.items()}
                    piv = ech.insert(right)
                    if piv is not None:
                        added.append((piv, nw))
            new_rows = added
            self.level = k
            log.debug("level %d: %d new rows, total %d", k, len(added), len(ech))
            yield k

    def contains(self, x: FreeElement) -> bool:
        return self.echelon.contains(self.vec(x))

    def pivot_counts(self) -> list[int]:
        counts = [0] * (self.bound + 1)
        for p in self.echelon.rows:
            counts[self.coder.length(p)] += 1
        return counts

    def graded_quotient_dims(self) -> list[int]:
        """dim F_k/(F_k cap V_d) minus the same at k-1, for k = 0..bound."""
        g = len(self.alphabet)
        return [g**k - c for k, c in enumerate(self.pivot_counts())]

    def normal_words(self, upto=None):
        upto = self.bound if upto is None else upto
        pivots = self.echelon.rows
        out = []
        for code in range(self.coder.count_upto(upto)):
            if code not in pivots:
                out.append(self.coder.decode(code))
        return out

    def normal_form_vec(self, vec: dict) -> dict:
        return self.echelon.reduce(vec, full=True)


def _to_fraction(v):
    return Fraction(int(v.numerator), int(v.denominator))


# public operations ----------------------------------------------------------

def _check_bound(x: FreeElement, d: int):
    if x.degree > d:
        raise BoundTooSmall(f"element of degree {x.degree} exceeds the bound {d}")


def _fields(ideal, extra, seed, trials, exact):
    if exact:
        return [ExactField()]
    scalars = list(ideal.scalars())
    for x in extra:
        scalars.extend(x.terms.values())
    return fields_for(seed, scalars, trials)


def _weights_of(elements):
    ws = set()
    for x in elements:
        ws |= x.weights()
    return ws


def _robust(compute, ideal, extra, seed, trials, exact):
    """Evaluate ``compute(field)`` at several specializations; fall back to
    the exact field on disagreement."""
    results = [compute(f) for f in _fields(ideal, extra, seed, trials, exact)]
    if all(r == results[0] for r in results):
        return results[0]
    log.warning("specializations disagree (%s); recomputing exactly", results)
    return compute(ExactField())


def ideal_membership(x: FreeElement, ideal: IdealSpec, d: int, *, seed: int = 0,
                     trials: int = DEFAULT_TRIALS, exact: bool = False,
                     word_cap: int = DEFAULT_WORD_CAP, use_weights: bool = True) -> bool:
    """True iff x lies in the degree-d slice of the two-sided ideal."""
    return all(ideal_membership_many([x], ideal, d, seed=seed, trials=trials, exact=exact,
                                     word_cap=word_cap, use_weights=use_weights))


def ideal_membership_many(xs, ideal: IdealSpec, d: int, *, seed: int = 0,
                          trials: int = DEFAULT_TRIALS, exact: bool = False,
                          word_cap: int = DEFAULT_WORD_CAP, use_weights: bool = True) -> list[bool]:
    xs = list(xs)
    for x in xs:
        if x.alphabet != ideal.alphabet:
            raise AlphabetMismatch("element and ideal over different alphabets")
        _check_bound(x, d)
    targets = None
    if use_weights and ideal.weight_homogeneous():
        targets = _weights_of(xs)

    start = max((x.degree for x in xs), default=0)

    def compute(fld):
        # V_k grows with k, so a member found at level k is a member at d;
        # only non-members need the full bound
        span = BoundedSpan(ideal, d, fld, word_cap, targets, lazy=True)
        vecs = [span.vec(x) for x in xs]
        found = [False] * len(xs)
        while span.advance():
            if span.level < start and span.level < d:
                continue
            for i, v in enumerate(vecs):
                if not found[i] and span.echelon.contains(v):
                    found[i] = True
            if all(found):
                break
        return tuple(found)

    return list(_robust(compute, ideal, xs, seed, trials, exact))


def graded_dimension(ideal: IdealSpec, d: int, *, seed=0, trials=DEFAULT_TRIALS,
                     exact=False, word_cap=DEFAULT_WORD_CAP) -> list[int]:
    """Per-degree dims of the associated graded of the bounded quotient."""
    def compute(fld):
        return tuple(BoundedSpan(ideal, d, fld, word_cap).graded_quotient_dims())

    return list(_robust(compute, ideal, [], seed, trials, exact))


def filtered_dimension(ideal: IdealSpec, d: int, **kw) -> list[int]:
    """dim of (words of length <= k) modulo the bounded ideal, k = 0..d."""
    out, acc = [], 0
    for g in graded_dimension(ideal, d, **kw):
        acc += g
        out.append(acc)
    return out


class DegreeBoundedQuotient:
    """Normal words and normal forms modulo V_d, over one field.

    Defaults to the exact rational function field, so normal forms carry
    Scalar coefficients."""

    def __init__(self, ideal: IdealSpec, bound: int, fld=None, word_cap=DEFAULT_WORD_CAP):
        self.ideal = ideal
        self.bound = bound
        self.field = fld if fld is not None else ExactField()
        self.span = BoundedSpan(ideal, bound, self.field, word_cap)
        self.basis = self.span.normal_words()
        self.rank_by_degree = self.span.pivot_counts()

    @property
    def generators(self):
        return self.ideal.alphabet.names

    def graded_dims(self):
        return self.span.graded_quotient_dims()

    def normal_form(self, x: FreeElement) -> FreeElement:
        _check_bound(x, self.bound)
        return self.span.element(self.span.normal_form_vec(self.span.vec(x)))

    def contains(self, x: FreeElement) -> bool:
        _check_bound(x, self.bound)
        return self.span.contains(x)


def normal_form(x: FreeElement, Q: DegreeBoundedQuotient) -> FreeElement:
    return Q.normal_form(x)

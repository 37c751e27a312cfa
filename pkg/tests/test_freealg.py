from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qorbits.freealg import (Alphabet, AlphabetMismatch, BoundTooSmall, DegreeBoundedQuotient,
                             ExactField, IdealError, IdealSpec, TooLarge, commutator,
                             filtered_dimension, free_arith, graded_dimension, ideal_membership,
                             ideal_membership_many, normal_form)
from qorbits.freealg.rewriting import RewriteSystem, completion_dims
from qorbits.presentations import est_completion_dims, est_presentation, re_presentation
from qorbits.scalars import ONE, q

EST = est_presentation()
EST_IDEAL = EST.ideal()
e, s = EST.alphabet.gens()


def test_noncommutative_product():
    x = free_arith(e, s, "mul") - s * e
    assert x.terms == {(0, 1): ONE, (1, 0): -ONE}
    assert commutator(e, s) == x


def test_unit_and_expansion():
    L = Alphabet(["L11", "L12", "L21", "L22"])
    x = L.gen("L11") + L.gen("L22")
    assert x * L.one() == x
    sq = free_arith(x, x, "mul")
    assert len(sq.terms) == 4 and sq.degree == 2 and sq.is_homogeneous()
    assert free_arith(x, q, "scale").coefficient((0,)) == q


def test_alphabet_mismatch():
    other = Alphabet(["x", "y"])
    with pytest.raises(AlphabetMismatch):
        e + other.gen("x")
    with pytest.raises(AlphabetMismatch):
        ideal_membership(other.gen("x"), EST_IDEAL, 2)
    with pytest.raises(ValueError):
        Alphabet(["x", "x"])


def test_generators_are_members():
    for r in EST.relations:
        assert ideal_membership(r, EST_IDEAL, r.degree)
        assert ideal_membership(r, EST_IDEAL, 6)


def test_est_examples():
    assert ideal_membership(e * s * e * s - s * e * s * e, EST_IDEAL, 4)
    for d in range(2, 7):
        assert not ideal_membership(e * s - s * e, EST_IDEAL, d)


def test_bound_too_small():
    with pytest.raises(BoundTooSmall):
        ideal_membership(e * e * e, EST_IDEAL, 2)


def test_ideal_needs_generators():
    with pytest.raises(IdealError):
        IdealSpec([])


def test_normal_form_examples():
    Q = DegreeBoundedQuotient(EST_IDEAL, 4)
    assert normal_form(s * e * s * e, Q) == e * s * e * s
    assert normal_form(EST.relations[0], Q).is_zero()
    assert normal_form(e * s, Q) == e * s
    with pytest.raises(BoundTooSmall):
        normal_form(e * e * e * e * e, Q)


def test_normal_form_projection():
    Q = DegreeBoundedQuotient(EST_IDEAL, 4)
    samples = [s * s * e, s * s * s * s, s * e * s * e + 3 * e, e * s * s * e - q * s]
    for x in samples:
        nf = normal_form(x, Q)
        assert normal_form(nf, Q) == nf
        assert ideal_membership(x - nf, EST_IDEAL, 4)


@pytest.mark.parametrize("g,d", [(1, 6), (2, 5), (3, 4)])
def test_free_algebra_dims(g, d):
    A = Alphabet([f"x{i}" for i in range(g)])
    I = IdealSpec([], alphabet=A)
    assert filtered_dimension(I, d) == [sum(g**j for j in range(k + 1)) for k in range(d + 1)]


def test_re_graded_dims_n2():
    I = re_presentation(2).ideal()
    assert graded_dimension(I, 4) == [comb(3 + k, k) for k in range(5)]


def test_filtered_matches_graded_for_homogeneous():
    I = re_presentation(2).ideal()
    g = graded_dimension(I, 3)
    f = filtered_dimension(I, 3)
    assert I.homogeneous
    assert f == [sum(g[:k + 1]) for k in range(4)]


def test_exact_mode_agrees():
    assert graded_dimension(EST_IDEAL, 6) == graded_dimension(EST_IDEAL, 6, exact=True)
    assert ideal_membership(s * e * s * e - e * s * e * s, EST_IDEAL, 4, exact=True)


def test_too_large():
    big = Alphabet([f"x{i}" for i in range(9)])
    with pytest.raises(TooLarge):
        graded_dimension(IdealSpec([], alphabet=big), 6)


def test_est_dims_against_rewriting_oracle():
    d = 10
    ours = graded_dimension(EST_IDEAL, d)
    oracle = est_completion_dims(d)
    # the top two levels of the bounded span are not yet saturated
    assert ours[:d - 1] == oracle[:d - 1]


def test_rewriting_system_basics():
    # commutative polynomial ring in two letters: ba -> ab
    assert completion_dims([{(1, 0): 1, (0, 1): -1}], 2, 5, 6) == [k + 1 for k in range(6)]
    rs = RewriteSystem(4)
    rs.add({(0, 0): 1})
    assert rs.reduce({(1, 0, 0): 1}) == {}
    # words avoiding "ee" are counted by Fibonacci numbers
    assert rs.normal_word_counts(4, 2) == [1, 2, 3, 5, 8]


def test_many_matches_single():
    xs = [e * s * e * s - s * e * s * e, e * s - s * e, s * s - 1]
    many = ideal_membership_many(xs, EST_IDEAL, 4)
    assert many == [ideal_membership(x, EST_IDEAL, 4) for x in xs]
    assert many[0] and not many[1] and not many[2]


_words = st.lists(st.sampled_from([0, 1]), min_size=0, max_size=3)


@settings(max_examples=25, deadline=None)
@given(_words, _words)
def test_membership_monotone(left, right):
    def word(w):
        out = EST.alphabet.one()
        for x in w:
            out = out * (e if x == 0 else s)
        return out
    x = word(left) * EST.relations[1] * word(right)
    found = [ideal_membership(x, EST_IDEAL, d) for d in range(x.degree, 7)]
    assert all(found)
    y = word(left) * (e * s - s * e) * word(right)
    found = [ideal_membership(y, EST_IDEAL, d) for d in range(y.degree, 7)]
    assert found == sorted(found)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3))
def test_free_dims_property(g, d):
    A = Alphabet([f"y{i}" for i in range(g)])
    assert graded_dimension(IdealSpec([], alphabet=A), d) == [g**k for k in range(d + 1)]


def test_exact_field_describe():
    assert ExactField().describe()

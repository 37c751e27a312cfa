import pytest

from qorbits.freealg import BoundTooSmall, TooLarge, graded_dimension, ideal_membership
from qorbits.presentations import (InvalidPolynomial, OrbitQuotientSpec, PresentationError,
                                   SamplingUnstable, ShapeMismatch, build_presentation,
                                   check_fiber_map, check_gl2_example, check_kks_limit,
                                   check_lemma_alg, check_lemma_trp, check_substitution,
                                   classical_limit, classical_orbit_dims, clcr_relation,
                                   fiber_elements, gl2_systems, mixed_tl_presentation,
                                   substitute_shift, tsub_shift, verify_character,
                                   verify_lemma_alg, verify_lemma_trp, verify_orbit_character,
                                   verify_substitution)
from qorbits.qtensor import (AdmissiblePair, Mat, build_S, check_numerical_re, e,
                             family_a_matrix, family_b_matrix, quantum_trace)
from qorbits.scalars import ONE, ZERO, a, b, lam, mu, q, quantum_integer, symbol, t


def test_re_n1_is_vacuous():
    P = build_presentation("RE", 1)
    assert P.alphabet.names == ("L11",)
    assert all(r.is_zero() for r in P.relations)


@pytest.mark.parametrize("n", [2, 3])
def test_raw_component_counts(n):
    assert len(build_presentation("RE", n).relations) == n**4
    assert len(build_presentation("FRT", n).relations) == n**4


def test_classical_n2_is_gl2cr():
    P = build_presentation("Classical", 2)
    g = lambda i, j: P.alphabet.gen(f"E{i}{j}")
    comm = lambda x, y: x * y - y * x
    expected = [
        comm(g(1, 1), g(1, 2)) - g(1, 2) * t,
        comm(g(1, 1), g(2, 1)) + g(2, 1) * t,
        comm(g(1, 1), g(2, 2)),
        comm(g(1, 2), g(2, 1)) - (g(1, 1) - g(2, 2)) * t,
        comm(g(1, 2), g(2, 2)) - g(1, 2) * t,
        comm(g(2, 1), g(2, 2)) + g(2, 1) * t,
    ]
    assert len(P.relations) == 6
    assert set(P.relations) == set(expected)


def test_est_has_two_relations():
    P = build_presentation("EST")
    assert P.alphabet.names == ("e", "s") and len(P.relations) == 2


def test_unknown_kind_and_caps():
    with pytest.raises(PresentationError):
        build_presentation("nope", 2)
    with pytest.raises(TooLarge):
        build_presentation("RE", 9)


def test_presentation_json():
    js = build_presentation("Classical", 2).to_json()
    assert js["generators"] == ["E11", "E12", "E21", "E22"] and len(js["relations"]) == 6


def test_verify_character_examples():
    P = build_presentation("RE", 2)
    assert verify_character(P, Mat.diag([lam(), ZERO]))
    assert verify_character(P, family_a_matrix(2, 1, 1))
    assert not verify_character(P, Mat([[ONE, ONE], [ONE, ONE]]))
    with pytest.raises(ShapeMismatch):
        verify_character(P, Mat.identity(3))


@pytest.mark.parametrize("n", [2, 3])
def test_character_agrees_with_numerical_re(n):
    P = build_presentation("RE", n)
    S = build_S(n)
    x = symbol("l1")
    cands = [family_a_matrix(n, 1, 1), Mat.identity(n).scale(x),
             Mat([[ONE if i <= j else ZERO for j in range(n)] for i in range(n)]),
             e(n, n, 1) + e(n, 1, 1).scale(x)]
    for A in cands:
        assert verify_character(P, A) == check_numerical_re(A, S)


def test_frt_character_is_group_like():
    # T -> invertible diagonal matrix satisfies the FRT relations
    P = build_presentation("FRT", 2)
    assert verify_character(P, Mat.diag([a, b]))


def test_orbit_character_examples():
    sym = OrbitQuotientSpec("symmetric", 2, (1, 1), (lam(), mu()))
    A = family_a_matrix(2, 1, 1)
    assert verify_orbit_character(sym, A)
    assert quantum_trace(A) == lam() + mu()
    bis = OrbitQuotientSpec("bisymmetric", 3, (1, 1, 1), (lam(), mu()))
    assert verify_orbit_character(bis, family_a_matrix(3, 1, 1))
    wrong = OrbitQuotientSpec("symmetric", 2, (2, 0), (lam(), mu()))
    assert not verify_orbit_character(wrong, A)


@pytest.mark.parametrize("spec", [
    OrbitQuotientSpec("symmetric", 2, (1, 1), (lam(), mu())),
    OrbitQuotientSpec("symmetric", 3, (2, 1), (lam(), mu())),
    OrbitQuotientSpec("symmetric", 2, (1, 1), (2, 1)),
    OrbitQuotientSpec("bisymmetric", 3, (1, 1, 1), (lam(), mu())),
    OrbitQuotientSpec("bisymmetric", 4, (2, 1, 1), (lam(), mu())),
    OrbitQuotientSpec("nilpotent", 2),
    OrbitQuotientSpec("nilpotent", 3),
])
def test_designated_characters(spec):
    A = spec.character()
    assert verify_character(spec.base(), A)
    assert verify_orbit_character(spec, A)


def test_nilpotent_character_is_e21():
    assert OrbitQuotientSpec("nilpotent", 2).character() == family_b_matrix(
        AdmissiblePair(2, ((2, 1),)), 0, ZERO)


def test_orbit_spec_validation():
    with pytest.raises(PresentationError):
        OrbitQuotientSpec("symmetric", 2, (1, 1), (lam(), lam()))
    with pytest.raises(PresentationError):
        OrbitQuotientSpec("symmetric", 3, (1, 1), (lam(), mu()))
    with pytest.raises(PresentationError):
        OrbitQuotientSpec("bisymmetric", 3, (1, 2, 0), (lam(), mu()))
    with pytest.raises(PresentationError):
        OrbitQuotientSpec("symmetric", 3, (1, 2), (lam(), mu()))
    with pytest.raises(PresentationError):
        OrbitQuotientSpec("weird", 2, (1, 1), (lam(), mu()))


def test_classical_orbit_examples():
    dims = classical_orbit_dims(2, (1, 1), (2, 1), 4)
    assert dims[0] == 1
    # four coordinates, one linear relation (the trace)
    assert dims[1] - dims[0] == 3
    # the orbit is a smooth affine quadric surface: 2k + 1 new functions in degree k
    assert dims == [(k + 1) ** 2 for k in range(5)]


def test_classical_orbit_needs_distinct_eigenvalues():
    with pytest.raises(PresentationError):
        classical_orbit_dims(2, (1, 1), (1, 1), 2)


def test_classical_orbit_nilpotent():
    dims = classical_orbit_dims(2, representative=[[0, 0], [1, 0]], d=3)
    # the nilpotent cone tr = det = 0 has the same Hilbert function as the quadric
    assert dims == [1, 4, 9, 16]


def test_sampling_unstable_is_runtime_error():
    assert issubclass(SamplingUnstable, RuntimeError)


def test_mixed_tl_shape():
    P = mixed_tl_presentation(2)
    assert len(P.alphabet) == 12
    # FRT (16) + two inverse conditions (4 + 4) + RE (16) + commutators (8 * 4)
    assert len(P.relations) == 16 + 8 + 16 + 32


@pytest.mark.parametrize("coeffs", [(0, 1), (0, 0, 1)])
def test_lemma_trp(coeffs):
    assert verify_lemma_trp(2, 5, coeffs)


def test_lemma_trp_control():
    rec = check_lemma_trp(2, 5, (0, 1), control=True)
    assert rec["check"] == "trp-control" and rec["result"] == "pass"


def test_lemma_trp_bound():
    with pytest.raises(BoundTooSmall):
        verify_lemma_trp(2, 3)


def test_lemma_alg_examples():
    assert verify_lemma_alg((0, 1), a, q - 1 / q, 4)
    assert verify_lemma_alg((0, -(lam() + mu()), 1), -lam() * mu(), q - 1 / q, 4)
    assert verify_lemma_alg((0, 0, 0, 1), a, 0, 3)


def test_lemma_alg_invalid_polynomial():
    with pytest.raises(InvalidPolynomial):
        check_lemma_alg((1, 1), a, q - 1 / q)


def test_lemma_alg_record_shape():
    rec = check_lemma_alg((0, 1), a, q - 1 / q, 2)
    assert set(rec) >= {"check", "params", "bound", "result", "witnesses"}


def test_fiber_character_clauses():
    from qorbits.presentations import character_values, evaluate
    spec = OrbitQuotientSpec("bisymmetric", 3, (1, 1, 1), (lam(), mu()))
    vals = character_values(spec.base(), family_a_matrix(3, 1, 1))
    for tag, x in fiber_elements(spec):
        assert evaluate(x, vals) == ZERO, tag
    A = family_a_matrix(3, 1, 1)
    pi = A @ A - A.scale(lam() + mu())
    assert quantum_trace(pi) == -lam() * mu() * quantum_integer(2)
    assert (pi @ (pi + Mat.identity(3).scale(lam() * mu()))).is_zero()


def test_fiber_bound():
    with pytest.raises(BoundTooSmall):
        check_fiber_map(1, 1, 1, 4)


def test_substitution():
    assert verify_substitution(2)
    rec = check_substitution(2)
    assert rec["witnesses"] == []


def test_substitution_shift_constant():
    assert tsub_shift() == t * q * q / (q * q - 1)


def test_classical_limit_of_cuea_component():
    tp = build_presentation("TwoParam", 2)
    lim = {classical_limit(x) for x in tp.relations}
    assert clcr_relation(tp.alphabet, "E", 1, 2, 2, 1) in lim | {-x for x in lim}


def test_kks_limit():
    rec = check_kks_limit(1, 1)
    assert rec["result"] == "pass", rec["witnesses"]


def test_two_param_at_t0_has_re_dims():
    tp = build_presentation("TwoParam", 2)
    at0 = [r.map_coefficients(lambda z: z.subs({"t": 0})) for r in tp.relations]
    from qorbits.freealg import IdealSpec
    re = build_presentation("RE", 2)
    assert graded_dimension(IdealSpec(at0, alphabet=tp.alphabet), 3) == \
        graded_dimension(re.ideal(), 3)


def test_shift_preserves_degree_one_part():
    re = build_presentation("RE", 2)
    tp = build_presentation("TwoParam", 2)
    x = substitute_shift(re.alphabet.gen("L12"), tp.alphabet)
    assert x == tp.alphabet.gen("E12")
    y = substitute_shift(re.alphabet.gen("L11"), tp.alphabet)
    assert y == tp.alphabet.gen("E11") + tsub_shift()


def test_gl2_example():
    rec = check_gl2_example(4)
    assert rec["result"] == "pass", rec["witnesses"]


def test_gl2_perturbed_control():
    rec = check_gl2_example(4, perturb=True)
    assert rec["result"] == "fail"
    assert any(w.startswith("(b)") for w in rec["witnesses"])


def test_gl2_trace_target():
    P = build_presentation("Classical", 2)
    sys_, trE, trE2, (s1, s2) = gl2_systems(P)
    target = trE2 - (s1 * (s1 + t) - 2 * s2)
    assert ideal_membership(target, P.ideal([sys_["e1'"], sys_["e5'"]]), 4)
    assert not ideal_membership(trE2 - s1 * s1, P.ideal([sys_["e1'"], sys_["e5'"]]), 4)

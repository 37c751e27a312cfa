import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qorbits.poisson import (ClassicalTensors, DegenerateOrbit, PoissonError, PoissonTable,
                             bracket_mismatches, check_poisson, extract_semiclassical,
                             geometric_bracket, invariant_part, reps_coefficient, verify_jacobi,
                             verify_bracket_consistency)


def unit(n, i, j):
    return [[Fraction(int(r == i and c == j)) for c in range(1, n + 1)] for r in range(1, n + 1)]


def diag(*xs):
    n = len(xs)
    return [[Fraction(xs[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def test_n1_is_zero():
    T = extract_semiclassical(1)
    assert all(not v for v in T.brackets.values())
    assert verify_jacobi(T)


@pytest.mark.parametrize("n", [2, 3])
def test_antisymmetry_and_jacobi(n):
    T = extract_semiclassical(n)
    assert T.is_antisymmetric()
    assert verify_jacobi(T)


def test_entries_are_homogeneous_quadratic():
    T = extract_semiclassical(2)
    for poly in T.brackets.values():
        assert all(sum(m) == 2 for m in poly.monoms()) or not poly


def test_perturbed_table_fails_jacobi():
    T = extract_semiclassical(2)
    R = next(iter(T.brackets.values())).ring
    x = R.gens
    br = dict(T.brackets)
    br[(0, 1)] = br[(0, 1)] + x[2] * x[3]
    br[(1, 0)] = -br[(0, 1)]
    assert not verify_jacobi(PoissonTable(2, br))


def test_diagonal_bracket_matches_geometric():
    T = extract_semiclassical(2)
    tens = ClassicalTensors.standard(2)
    A = diag(Fraction(3, 2), -4)
    # {x11, x22}: coordinates 0 and 3
    assert T.evaluate(0, 3, A) == geometric_bracket(tens, A, unit(2, 1, 1), unit(2, 2, 2))


def test_invariant_part_examples():
    A = diag(2, 1)
    X, Y = unit(2, 2, 1), unit(2, 1, 2)
    assert invariant_part(A, X, Y) == -3
    assert invariant_part(A, X, X) == 0
    rng = random.Random(1)
    M = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
    N = [[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)]
    assert invariant_part(diag(1, 1, 1), M, N) == 0
    with pytest.raises(PoissonError):
        invariant_part(diag(1, 1), M, N)


_q = st.fractions(min_value=-6, max_value=6, max_denominator=4)
_mat = st.lists(st.lists(_q, min_size=2, max_size=2), min_size=2, max_size=2)


@settings(max_examples=40, deadline=None)
@given(_mat, _mat, _mat, _mat, _q, _q)
def test_invariant_part_bilinear_antisymmetric(A, X, Y, Z, c1, c2):
    lin = [[c1 * x + c2 * z for x, z in zip(rx, rz)] for rx, rz in zip(X, Z)]
    assert invariant_part(A, lin, Y) == c1 * invariant_part(A, X, Y) + c2 * invariant_part(A, Z, Y)
    assert invariant_part(A, X, Y) == -invariant_part(A, Y, X)


@settings(max_examples=30, deadline=None)
@given(_q, _q, _mat, _mat, st.fractions(min_value=1, max_value=5, max_denominator=3))
def test_invariant_part_torus_invariance(l1, l2, X, Y, g):
    # conjugating X, Y by a diagonal matrix leaves Tr(A^2[X, Y]) unchanged at diagonal A
    G = [g, Fraction(1)]
    conj = lambda M: [[M[i][j] * G[i] / G[j] for j in range(2)] for i in range(2)]
    A = diag(l1, l2)
    assert invariant_part(A, conj(X), conj(Y)) == invariant_part(A, X, Y)


def test_reps_examples():
    assert reps_coefficient(2, 1) == 3
    assert reps_coefficient(5, -5) == 0
    assert reps_coefficient(Fraction(7, 3), 0) == 1
    with pytest.raises(DegenerateOrbit):
        reps_coefficient(2, 2)


@settings(max_examples=50, deadline=None)
@given(_q, _q, _q)
def test_reps_dilation_invariance(li, lj, nu):
    if li == lj or nu == 0:
        return
    c = reps_coefficient(li, lj)
    assert reps_coefficient(nu * li, nu * lj) == c
    assert c == (li + lj) / (li - lj)


def test_classical_tensors():
    for n in (2, 3):
        tens = ClassicalTensors.standard(n)
        assert tens.r_antisymmetric()
        assert tens.omega_is_flip()


@pytest.mark.parametrize("n", [2, 3])
def test_bracket_consistency(n):
    assert verify_bracket_consistency(n, points=10, seed=0)


def test_consistency_at_zero_and_diagonal():
    zero = [[Fraction(0)] * 2 for _ in range(2)]
    T = extract_semiclassical(2)
    assert all(T.evaluate(a, b, zero) == 0 for a in range(4) for b in range(4))
    assert not bracket_mismatches(2, points=0, extra_points=[zero, diag(Fraction(2, 3), 5)])


def test_trace_coordinate_bracket():
    # sum_i x_ii against every coordinate, compared pointwise with the geometric side
    n = 2
    T = extract_semiclassical(n)
    tens = ClassicalTensors.standard(n)
    rng = random.Random(7)
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(5):
        A = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)]
        for b in range(n * n):
            k, l = divmod(b, n)
            lhs = sum(T.evaluate(i * n + i, b, A) for i in range(n))
            assert lhs == geometric_bracket(tens, A, I, unit(n, k + 1, l + 1))


def test_consistency_n_cap():
    with pytest.raises(PoissonError):
        verify_bracket_consistency(4)


def test_table_json():
    js = extract_semiclassical(2).to_json()
    assert js["n"] == 2 and len(js["brackets"]) == 16
    assert all("|" in k for k in js["brackets"])


def test_check_record():
    rec = check_poisson(2)
    assert rec["result"] == "pass" and rec["witnesses"] == []

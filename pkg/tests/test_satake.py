from fractions import Fraction

import pytest

from maass.exactalg import LaurentPoly, PolyMatrix, is_weyl_invariant, lp, reduce_half_powers
from maass.satake import (SatakeVector, b_entry, build_A, build_Aprime, build_B,
                          build_B_chain, eigenvalue_at,
                          palindrome_image, phi_row, phi_row_via_chain, phi_T, symbolic_p)

X = [LaurentPoly.var(f"X{i}") for i in range(5)]
PRIMES = [2, 3, symbolic_p()]


def test_b_entry_cases():
    p = 3
    assert b_entry(1, 1, 2, p) == X[2] / 3
    assert b_entry(0, 1, 2, p) == 1 + Fraction(2, 9) * X[2] + X[2] * X[2]
    assert b_entry(0, 2, 2, p) == (9 - 1) * X[2] / 3
    assert b_entry(1, 0, 2, p).is_zero()
    with pytest.raises(IndexError):
        b_entry(2, 0, 2, p)


def test_chain_conventions():
    assert build_B_chain(1, 2) == PolyMatrix.identity(2)
    assert build_A(1, 5, 4) == PolyMatrix.identity(2)
    k = 6
    assert build_A(2, 3, k) == build_B(2, 3, lp(Fraction(3) ** (2 - k)))


@pytest.mark.parametrize("p", [2, 5])
def test_seed_images(p):
    t01, t10 = phi_T(0, 1, p), phi_T(1, 1, p)
    assert t01 == X[0] ** 2 * X[1] / p
    assert t10 == t01 * (p / X[1] + (p - 1) + p * X[1])
    assert phi_T(0, 2, p) == X[0] ** 2 * X[1] * X[2] / p ** 3


def test_phi_bounds():
    with pytest.raises(IndexError):
        phi_T(3, 2, 2)


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_recursion_agrees_with_chain(p, n):
    assert phi_row(n, p) == phi_row_via_chain(n, p)


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_weyl_invariance(p, n):
    for f in phi_row(n, p):
        assert is_weyl_invariant(f, n)
        assert set(f.collect("X0")) == {2}


def test_row_step_identity():
    for n in (2, 3, 4):
        prev = PolyMatrix(1, n, phi_row(n - 1, 3))
        assert (prev @ build_B(n, 3)).row(0) == phi_row(n, 3)


def test_eisenstein_point_eigenvalue():
    sv = SatakeVector(1, 1, (8,))
    assert eigenvalue_at(sv, 1, 1, 2) == 69
    assert SatakeVector.normalized([8], 4, 2).mu0_sq == 1


def test_lambda_g_from_eigenvalue():
    b = LaurentPoly.var("b")
    k, n = 4, 2
    weight = k + n
    P = symbolic_p()
    sv = SatakeVector.normalized([b ** 2], weight, P)
    expected = P ** (k + n - 2) * (P * b ** 2 + (P - 1) + P * b ** -2)
    assert eigenvalue_at(sv, 1, 1, P) == expected


def test_evaluation_at_one_sums_coefficients():
    for n in (1, 2, 3):
        f = phi_T(0, n, 3)
        sv = SatakeVector(n, 1, (1,) * n)
        assert eigenvalue_at(sv, 0, n, 3) == f.coefficient_sum()


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("n", [2, 3])
def test_aprime_palindromic(p, n):
    Ap = build_Aprime(n, p)
    assert Ap == Ap.map(lambda e: palindrome_image(e, p))


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [2, 3])
def test_symbolic_aprime_specializes(p, n):
    sym, conc = build_Aprime(n, symbolic_p()), build_Aprime(n, p)
    assert sym.map(lambda e: reduce_half_powers(e, p)) == conc

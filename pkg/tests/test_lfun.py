from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from maass import lfun
from maass.exactalg import lp, reduce_half_powers
from maass.lfun import (A_SYM, B_SYM, EulerFactor, adjoint_L_factor, corollary4_sides,
                        hecke_L_factor, lambda_g, miyawaki_satake, verify_adash,
                        verify_aprime_palindromy, verify_corollary4, verify_eisenstein_eigenvalue,
                        verify_matrix_identities, verify_specialization, verify_theorem3)
from maass.satake import symbolic_p


def test_lambda_g_shape():
    assert lambda_g(4, 2, 2) == 16 * (2 * B_SYM ** 2 + 1 + 2 * B_SYM ** -2)


def test_miyawaki_similitude():
    sv = miyawaki_satake(2, 6, 3)
    assert reduce_half_powers(sv.similitude(), 3) == Fraction(3) ** (3 * 6)
    assert miyawaki_satake(2, 6).similitude() == symbolic_p() ** (3 * 6)


@pytest.mark.parametrize("n, k", [(2, 10), (3, 12), (2, 12), (3, 10)])
def test_standard_factor_splits(n, k):
    assert verify_corollary4(n, k).passed


def test_euler_factor_degrees():
    lhs, rhs = corollary4_sides(3, 12)
    assert lhs.degree == rhs.degree == 2 * 5 + 1
    assert adjoint_L_factor().degree == 3 and hecke_L_factor(10).degree == 2


def _inversions():
    return [lambda c: c.substitute({"a": A_SYM ** -1}), lambda c: c.substitute({"b": B_SYM ** -1})]


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3]), st.sampled_from([4, 6, 10, 12]), st.integers(0, 1))
def test_factors_invariant_under_parameter_inversion(n, k, which):
    lhs, rhs = corollary4_sides(n, k)
    inv = _inversions()[which]
    assert lhs.map(inv) == lhs and rhs.map(inv) == rhs


def test_euler_factor_requires_unit_constant():
    with pytest.raises(ValueError):
        EulerFactor([2, 1])
    f = EulerFactor.from_roots([A_SYM, 3])
    assert f.coeffs == [lp(1), -(A_SYM + 3), A_SYM * 3]


@pytest.mark.parametrize("k", [4, 10])
@pytest.mark.parametrize("p", [None, 2, 3])
def test_lift_eigenvalue_row(k, p):
    assert verify_theorem3(2, k, p).passed


def test_degree5_eigenvalues_opt_in():
    with pytest.raises(ValueError):
        verify_theorem3(3, 4, 2)
    assert verify_theorem3(3, 4, 2, allow_large=True).passed


def test_eigenvalue_row_detects_wrong_lambda(monkeypatch):
    real = lfun.lambda_g
    monkeypatch.setattr(lfun, "lambda_g", lambda k, n, p=None: real(k, n, p) + 1)
    assert not verify_theorem3(2, 4, None).passed


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("p", [2, 3])
def test_matrix_identities(n, p):
    assert verify_aprime_palindromy(n, p).passed
    for k in (4, 6, 8, 10):
        assert verify_adash(n, k, p).passed
        for delta in (0, 1):
            assert verify_specialization(n, k, p, delta).passed


def test_adash_symbolic_and_aggregate():
    assert verify_adash(3, 6, symbolic_p()).passed
    assert verify_matrix_identities(2, [4], [2]).passed


def test_specialization_detects_wrong_delta():
    from maass.relations import theorem1_matrix
    assert lfun.specialization_matrix(2, 4, 2, 1) != theorem1_matrix(1, 2, 6, 3)


@pytest.mark.parametrize("k", [4, 6])
@pytest.mark.parametrize("p", [2, 3])
def test_eisenstein_eigenvalue(k, p):
    r = verify_eisenstein_eigenvalue(k, p)
    assert r.passed
    assert r.details["eigenvalue"] == p ** (2 * k - 2) + (p - 1) * p ** (k - 2) + 1

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from maass import arith
from maass.arith import (COSET_KINDS, cohen_H, coset_count, coset_count_bruteforce,
                         discriminant_split, g_k, g_p_count, gauss_sum, gauss_sum_bruteforce,
                         lattice_multiplicities, lattice_multiplicities_bruteforce, sigma,
                         square_divisors, zeta_negative)


def test_g_k_examples():
    assert g_k(4, 1) == 1
    assert g_k(4, 2) == 9
    assert g_k(4, 4) == 72 == 8 * g_k(4, 2)
    with pytest.raises(ValueError, match="index must be positive"):
        g_k(4, 0)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([4, 6, 8]), st.integers(1, 60), st.integers(1, 60))
def test_g_k_multiplicative(k, m, l):
    if gcd(m, l) == 1:
        assert g_k(k, m * l) == g_k(k, m) * g_k(k, l)


@pytest.mark.parametrize("k", [4, 6])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_g_k_hecke_recurrence(k, p):
    # g_k(mp) from g_k(m): multiply by p^{k-1}+1 when p does not divide m, by p^{k-1} otherwise
    for m in range(1, 51):
        factor = p ** (k - 1) if m % p == 0 else p ** (k - 1) + 1
        assert g_k(k, m * p) == factor * g_k(k, m)


@pytest.mark.parametrize("k", [4, 6])
def test_g_k_telescopes_to_sigma(k):
    for m in range(1, 201):
        assert sum(g_k(k, m // (d * d)) for d in square_divisors(m)) == sigma(k - 1, m)


def test_g_p_count_examples():
    assert g_p_count(5, 3, 0) == 1
    assert g_p_count(2, 2, 1) == 3
    assert g_p_count(3, 2, 3) == 0
    # lines in F_2^2
    lines = {frozenset({v, (0, 0)}) for v in [(0, 1), (1, 0), (1, 1)]}
    assert len(lines) == g_p_count(2, 2, 1)


def test_gauss_examples():
    assert gauss_sum(3, 2, 0, 1, True) == 1
    assert gauss_sum(3, 1, 1, 1, True) == -1
    assert gauss_sum(3, 1, 1, 1, False) == 2
    with pytest.raises(ValueError):
        gauss_sum(2, 1, 2, 1, True)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_gauss_closed_form_matches_enumeration(p, n):
    lam = [1] + [0] * (n - 1)
    for j in range(n + 1):
        assert gauss_sum(p, n, j, 1, True) == gauss_sum_bruteforce(p, n, j, 1, lam)
        assert gauss_sum(p, n, j, p, False) == gauss_sum_bruteforce(p, n, j, p, lam)


def test_coset_count_examples():
    assert coset_count("H_GL", 7, 3, 0, 0) == 1
    assert coset_count("H_GL", 2, 2, 1, 1) == 3
    assert coset_count("Hij_GL", 5, 1, 0, 1) == 1
    with pytest.raises(ValueError):
        coset_count("Hij_GL", 2, 2, 2, 1)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("n", [1, 2])
def test_coset_counts_match_enumeration(p, n):
    for i in range(n + 1):
        for j in range(i, n + 1):
            for kind in COSET_KINDS:
                assert coset_count(kind, p, n, i, j) == coset_count_bruteforce(kind, p, n, i, j)


@pytest.mark.parametrize("p", [2, 3])
def test_lattice_multiplicities(p):
    assert lattice_multiplicities(p, 2, 0, 0) == (1, 0, 0)
    assert sum(lattice_multiplicities(p, 1, 1, 1)) == coset_count("Hij_GL", p, 1, 1, 1) == 1
    for n in (1, 2):
        for i in range(n + 1):
            for j in range(i, n + 1):
                assert tuple(lattice_multiplicities(p, n, i, j)) == \
                    tuple(lattice_multiplicities_bruteforce(p, n, i, j))
    for i in range(4):
        for j in range(i, 4):
            assert all(a >= 0 and a.denominator == 1 for a in lattice_multiplicities(p, 3, i, j))


def test_discriminant_split():
    assert discriminant_split(-4) == arith.DiscriminantSplit(-4, 1)
    assert discriminant_split(-12) == arith.DiscriminantSplit(-3, 2)
    assert discriminant_split(-16) == arith.DiscriminantSplit(-4, 2)
    with pytest.raises(ValueError, match="not a discriminant"):
        discriminant_split(-5)


def test_cohen_H_examples():
    assert cohen_H(3, 0) == zeta_negative(6) == Fraction(-1, 252)
    assert cohen_H(3, 3) == Fraction(-2, 9)
    assert cohen_H(3, 4) == Fraction(-1, 2)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_cohen_H_support(r):
    for N in range(1, 61):
        admissible = ((-1) ** r * N) % 4 in (0, 1)
        assert (cohen_H(r, N) != 0) == admissible


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([-3, -4, -7, -8, -11, 5, 8, 12]), st.integers(1, 6))
def test_split_round_trip(D, f):
    s = discriminant_split(D * f * f)
    assert (s.fundamental, s.conductor) == (D, f)

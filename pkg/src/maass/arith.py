"""Number-theoretic kernel.

Multiplicative functions, the Gaussian-binomial counts ``g_p(n, i)``, Gauss
sums over symmetric matrices mod p, coset counts of the congruence subgroups
``H_i`` and ``H_{i,j}`` of GL_n(Z), and the Cohen H-function built from
generalized Bernoulli numbers.  The counting formulas each have a
brute-force companion that enumerates the underlying finite objects.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, isqrt

import sympy

from .exactalg import RootOfUnitySum

COSET_KINDS = ("H_GL", "H_S_i", "Hij_GL", "Hij_S_i", "Hij_S_ij")


def is_prime(p: int) -> bool:
    return isinstance(p, int) and bool(sympy.isprime(p))


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def divisors(m: int) -> list[int]:
    return [int(d) for d in sympy.divisors(m)]


def mobius(d: int) -> int:
    return int(sympy.mobius(d))


def sigma(k: int, m: int) -> int:
    """Divisor power sum sigma_k(m)."""
    return int(sympy.divisor_sigma(m, k))


def ord_p(m: int, p: int) -> int:
    if m == 0:
        raise ValueError("ord_p(0) is infinite")
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    return e


def square_divisors(m: int) -> list[int]:
    """All d > 0 with d^2 | m, increasing."""
    return [d for d in range(1, isqrt(m) + 1) if m % (d * d) == 0]


@lru_cache(maxsize=None)
def g_k(k: int, m: int) -> int:
    """sum over d^2 | m of mu(d) sigma_{k-1}(m/d^2)."""
    if m <= 0:
        raise ValueError("index must be positive")
    return sum(mobius(d) * sigma(k - 1, m // (d * d)) for d in square_divisors(m))


def g_p_count(p: int, n: int, i: int) -> Fraction:
    """Gaussian binomial count g_p(n, i); 1 for i = 0 and 0 outside 0..n."""
    if i == 0:
        return Fraction(1)
    if not 1 <= i <= n:
        return Fraction(0)
    out = Fraction(1)
    for a in range(1, i + 1):
        out *= Fraction(p ** (n - a + 1) - 1, p ** a - 1)
    return out


# Gauss sums over symmetric matrices

def gauss_sum(p: int, n: int, j: int, m: int, lambda_nonzero_mod_p: bool) -> Fraction:
    """Closed form of the sum of e(m * lambda^t x lambda / p) over rank-j x.

    The value depends on (m, lambda) only through whether m*lambda is
    zero mod p.
    """
    if not 0 <= j <= n:
        raise ValueError(f"rank j={j} must satisfy 0 <= j <= n={n}")
    h = j // 2
    lead = Fraction(p ** (h * (h + 1)))
    if m % p == 0 or not lambda_nonzero_mod_p:
        odd = 1
        for a in range(1, j + 1, 2):
            odd *= p ** a - 1
        return lead * g_p_count(p, n, j) * odd
    odd = 1
    for a in range(1, j, 2):
        odd *= p ** a - 1
    return (-1) ** j * lead * g_p_count(p, n - 1, 2 * h) * odd


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    mat = [[x % p for x in r] for r in rows]
    rank, ncols = 0, len(mat[0]) if mat else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, p)
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col] * inv % p
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def symmetric_matrices_mod_p(p: int, n: int):
    cells = [(a, b) for a in range(n) for b in range(a, n)]
    for vals in itertools.product(range(p), repeat=len(cells)):
        x = [[0] * n for _ in range(n)]
        for (a, b), v in zip(cells, vals):
            x[a][b] = x[b][a] = v
        yield x


def gauss_sum_bruteforce(p: int, n: int, j: int, m: int, lam) -> Fraction:
    """Enumerate all symmetric n x n x over Z/p of rank j and sum exactly.

    The p-th roots of unity are reduced modulo the cyclotomic polynomial;
    a non-rational total raises ArithmeticError.
    """
    lam = list(lam)
    if len(lam) != n:
        raise ValueError("lambda must have length n")
    acc = RootOfUnitySum(p)
    for x in symmetric_matrices_mod_p(p, n):
        if rank_mod_p(x, p) != j:
            continue
        quad = sum(lam[a] * x[a][b] * lam[b] for a in range(n) for b in range(n))
        acc.add(m * quad)
    return acc.rational_value()


# coset counts of H_i, H_{i,j} in GL_n(Z)

def _check_ij(n: int, i: int, j: int) -> None:
    if not 0 <= i <= j <= n:
        raise ValueError(f"need 0 <= i <= j <= n, got i={i}, j={j}, n={n}")


def coset_count(kind: str, p: int, n: int, i: int, j: int) -> Fraction:
    """Closed-form coset counts; ``H_*`` kinds ignore ``j``."""
    _check_ij(n, i, j)
    g = lambda a, b: g_p_count(p, a, b)
    if kind == "H_GL":
        return g(n, i)
    if kind == "H_S_i":
        return g(n - 1, i)
    if kind == "Hij_GL":
        return p ** (i * (n - j)) * g(n, j) * g(j, i)
    if kind == "Hij_S_i":
        return p ** (i * (n - j)) * g(n - 1, i) * g(n - i, n - j)
    if kind == "Hij_S_ij":
        return Fraction(p) ** (i * (n - 1 - j)) * g(n - 1, j) * g(j, i)
    raise ValueError(f"unknown coset kind {kind!r}; expected one of {COSET_KINDS}")


def _block_exponents(n: int, i: int, j: int) -> list[int]:
    # diagonal p-exponents of delta_{i,j} = diag(1_i, p 1_{j-i}, p^2 1_{n-j})
    return [0] * i + [1] * (j - i) + [2] * (n - j)


def _matmul_mod(a, b, n, mod):
    return tuple(sum(a[r * n + t] * b[t * n + c] for t in range(n)) % mod
                 for r in range(n) for c in range(n))


def _inverse_mod(a, n, mod):
    aug = [list(a[r * n:(r + 1) * n]) + [int(r == c) for c in range(n)] for r in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if gcd(aug[r][col], mod) == 1)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], -1, mod)
        aug[col] = [x * inv % mod for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % mod for x, y in zip(aug[r], aug[col])]
    return tuple(aug[r][n + c] for r in range(n) for c in range(n))


@lru_cache(maxsize=None)
def _gl_image(p: int, n: int) -> tuple:
    """Image of GL_n(Z) in M_n(Z/p^2), n <= 2: the matrices of determinant +-1."""
    mod = p * p
    out = []
    for a in itertools.product(range(mod), repeat=n * n):
        det = (a[0] * a[3] - a[1] * a[2] if n == 2 else a[0]) % mod
        if det in (1, mod - 1):
            out.append(tuple(a))
    return tuple(out)


def _in_H(a, n, p, expo) -> bool:
    for r in range(n):
        for c in range(n):
            d = expo[r] - expo[c]
            if d > 0 and a[r * n + c] % p ** d:
                return False
    return True


def _in_S(a, n, p, expo) -> bool:
    inv = _inverse_mod(a, n, p * p)
    last = inv[(n - 1) * n:]
    return all(last[c] % p ** expo[c] == 0 for c in range(n))


def coset_count_bruteforce(kind: str, p: int, n: int, i: int, j: int) -> int:
    """Count left H-orbits on the relevant subset of GL_n(Z/p^2), n <= 2.

    Every condition defining H_i, H_{i,j}, S_i and S_{i,j} only depends on a
    matrix modulo p^2, so the orbit count equals the coset count in GL_n(Z).
    """
    _check_ij(n, i, j)
    if not 1 <= n <= 2:
        raise ValueError("brute-force coset enumeration is capped at n <= 2")
    if kind not in COSET_KINDS:
        raise ValueError(f"unknown coset kind {kind!r}")
    mod = p * p
    group = _gl_image(p, n)
    if kind.startswith("Hij"):
        h_expo = _block_exponents(n, i, j)
    else:
        h_expo = [0] * i + [1] * (n - i)
    if kind.endswith("_GL"):
        s_test = lambda a: True
    elif kind.endswith("S_i"):
        s_expo = [1] * i + [0] * (n - i)
        s_test = lambda a: _in_S(a, n, p, s_expo)
    else:
        s_expo = [2] * i + [1] * (j - i) + [0] * (n - j)
        s_test = lambda a: _in_S(a, n, p, s_expo)
    H = [h for h in group if _in_H(h, n, p, h_expo)]
    S = [a for a in group if s_test(a)]
    members = set(S)
    seen: set = set()
    orbits = 0
    for a in S:
        if a in seen:
            continue
        orbits += 1
        for h in H:
            b = _matmul_mod(h, a, n, mod)
            if b not in members:
                raise AssertionError(f"{kind} set is not stable under H at {a}")
            seen.add(b)
    return orbits


def lattice_multiplicities(p: int, n: int, i: int, j: int) -> tuple[Fraction, Fraction, Fraction]:
    """(a0, a1, a2) solved from the three coset counts of H_{i,j}."""
    full = coset_count("Hij_GL", p, n, i, j)
    s_i = coset_count("Hij_S_i", p, n, i, j)
    s_ij = coset_count("Hij_S_ij", p, n, i, j)
    return s_ij, s_i - s_ij, full - s_i


def lattice_multiplicities_bruteforce(p: int, n: int, i: int, j: int) -> tuple[int, int, int]:
    """Count representatives A of H_{i,j}\\GL_n with lambda in A^t L0 for
    lambda = e_n, p e_n, p^2 e_n, where L0 = (p^2 Z)^i x (p Z)^(j-i) x Z^(n-j).
    """
    _check_ij(n, i, j)
    mod = p * p
    group = _gl_image(p, n)
    H = [h for h in group if _in_H(h, n, p, _block_exponents(n, i, j))]
    lattice = [2] * i + [1] * (j - i) + [0] * (n - j)
    seen: set = set()
    reps = []
    for a in group:
        if a in seen:
            continue
        reps.append(a)
        seen.update(_matmul_mod(h, a, n, mod) for h in H)

    def count(scale: int) -> int:
        lam = [0] * (n - 1) + [scale]
        total = 0
        for a in reps:
            inv = _inverse_mod(a, n, mod)
            # (A^t)^{-1} lambda = (A^{-1})^t lambda, i.e. scale * (last row of A^{-1})
            v = [sum(inv[r * n + c] * lam[r] for r in range(n)) % mod for c in range(n)]
            if all(v[c] % p ** lattice[c] == 0 for c in range(n)):
                total += 1
        return total

    c1, cp, cp2 = count(1), count(p), count(mod)
    return c1, cp - c1, cp2 - cp


# Bernoulli numbers, quadratic characters and the Cohen H-function

@lru_cache(maxsize=None)
def bernoulli(r: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2."""
    if r == 1:
        return Fraction(-1, 2)
    b = sympy.bernoulli(r)
    return Fraction(int(b.p), int(b.q))


def zeta_negative(k: int) -> Fraction:
    """zeta(1 - k) = -B_k / k for k >= 2."""
    return -bernoulli(k) / k


def kronecker(d: int, a: int) -> int:
    return int(sympy.kronecker_symbol(d, a))


@dataclass(frozen=True)
class DiscriminantSplit:
    fundamental: int
    conductor: int


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return sympy.ntheory.factor_.core(abs(d)) == abs(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and sympy.ntheory.factor_.core(abs(m)) == abs(m)
    return False


def discriminant_split(delta: int) -> DiscriminantSplit:
    """Write a discriminant as D * f^2 with D fundamental."""
    if delta == 0 or delta % 4 not in (0, 1):
        raise ValueError(f"{delta} is not a discriminant")
    sign = 1 if delta > 0 else -1
    core = sign * int(sympy.ntheory.factor_.core(abs(delta)))
    D = core if core % 4 == 1 else 4 * core
    f = isqrt(delta // D)
    assert D * f * f == delta and is_fundamental_discriminant(D)
    return DiscriminantSplit(D, f)


@lru_cache(maxsize=None)
def _character_table(D: int) -> tuple[int, ...]:
    N = abs(D)
    return tuple(kronecker(D, a) for a in range(1, N + 1))


@lru_cache(maxsize=None)
def generalized_bernoulli(r: int, D: int) -> Fraction:
    """B_{r, chi_D} = |D|^(r-1) sum_{a=1}^{|D|} chi_D(a) B_r(a/|D|)."""
    N = abs(D)
    chi = _character_table(D)
    power_sums = [sum(c * a ** e for a, c in enumerate(chi, 1) if c) for e in range(r + 1)]
    total = Fraction(0)
    for i in range(r + 1):
        if power_sums[r - i]:
            total += comb(r, i) * bernoulli(i) * Fraction(N) ** (i - 1) * power_sums[r - i]
    return total


def dirichlet_L_negative(r: int, D: int) -> Fraction:
    """L(1 - r, chi_D) = -B_{r, chi_D} / r."""
    return -generalized_bernoulli(r, D) / r


@lru_cache(maxsize=None)
def cohen_H(r: int, N: int) -> Fraction:
    if r < 2:
        raise ValueError("cohen_H needs r >= 2")
    if N < 0:
        raise ValueError("cohen_H needs N >= 0")
    if N == 0:
        return zeta_negative(2 * r)
    delta = (-1) ** r * N
    if delta % 4 not in (0, 1):
        return Fraction(0)
    split = discriminant_split(delta)
    D, f = split.fundamental, split.conductor
    s = sum(mobius(d) * kronecker(D, d) * d ** (r - 1) * sigma(2 * r - 1, f // d)
            for d in divisors(f))
    return dirichlet_L_negative(r, D) * s

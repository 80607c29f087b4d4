"""Truncated Fourier expansions and the operators acting on them.

Degree-2 Siegel-Eisenstein coefficients come from the Cohen H-function.  The
degree-1 Jacobi forms used here are Fourier-Jacobi coefficients of those
series (and their Moebius-inverted Jacobi-Eisenstein counterparts).  Every
expansion records ``n_complete``: all nonzero coefficients with ``n`` up to
that bound are present, and each operator computes the bound it can
guarantee for its output.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Mapping

from .arith import (bernoulli, cohen_H, divisors, g_k, require_prime, sigma,
                    square_divisors, zeta_negative)
from .exactalg import RootOfUnitySum, format_rational, parse_rational, to_rational


def check_weight(k: int) -> int:
    if not isinstance(k, int) or k < 4 or k % 2:
        raise ValueError(f"weight out of supported range: {k} (need an even integer >= 4)")
    return k


# elliptic Eisenstein series

def eisenstein_series(k: int, length: int) -> list[Fraction]:
    """Coefficients 0..length-1 of E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    check_weight(k)
    scale = Fraction(-2 * k) / bernoulli(k)
    return [Fraction(1)] + [scale * sigma(k - 1, n) for n in range(1, length)]


# degree 2 Siegel-Eisenstein series

def _check_half_integral(T) -> tuple[int, int, int]:
    n, r, m = (int(x) for x in T)
    if n < 0 or m < 0 or 4 * n * m - r * r < 0:
        raise ValueError(f"T = {(n, r, m)} is not positive semi-definite")
    return n, r, m


@lru_cache(maxsize=None)
def _siegel2_value(k: int, content: int, disc: int) -> Fraction:
    if content == 0:
        return Fraction(1)
    c1 = 2 / zeta_negative(k)
    if disc == 0:
        return c1 * sigma(k - 1, content)
    c2 = c1 / zeta_negative(2 * k - 2)
    return c2 * sum((Fraction(d) ** (k - 1) * cohen_H(k - 1, disc // (d * d))
                     for d in divisors(content)), Fraction(0))


def siegel2_coeff(k: int, T) -> Fraction:
    """Fourier coefficient a(T) of the degree-2 Siegel-Eisenstein series.

    ``T = (n, r, m)`` stands for the half-integral matrix [[n, r/2], [r/2, m]].
    """
    check_weight(k)
    n, r, m = _check_half_integral(T)
    return _siegel2_value(k, gcd(gcd(n, r), m), 4 * n * m - r * r)


class SiegelExpansion2:
    """Degree-2 expansion containing every T with max(n, m) <= bound."""

    def __init__(self, weight: int, bound: int, coeffs: Mapping):
        self.weight = check_weight(weight)
        self.bound = int(bound)
        self.coeffs = {}
        for T, c in coeffs.items():
            n, r, m = _check_half_integral(T)
            if max(n, m) > self.bound:
                raise ValueError(f"{T} exceeds bound {self.bound}")
            c = to_rational(c)
            if c:
                self.coeffs[(n, r, m)] = c

    def __getitem__(self, T) -> Fraction:
        n, r, m = _check_half_integral(T)
        if max(n, m) > self.bound:
            raise KeyError(f"{T} is beyond the completeness bound {self.bound}")
        return self.coeffs.get((n, r, m), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, SiegelExpansion2):
            return NotImplemented
        return (self.weight, self.bound, self.coeffs) == (other.weight, other.bound, other.coeffs)

    def to_json(self) -> dict:
        return {"weight": self.weight, "bound": self.bound,
                "coeffs": [[[str(n), str(r), str(m)], format_rational(c)]
                           for (n, r, m), c in sorted(self.coeffs.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "SiegelExpansion2":
        return cls(data["weight"], data["bound"],
                   {tuple(int(x) for x in key): parse_rational(c) for key, c in data["coeffs"]})


def half_integral_keys(bound: int) -> Iterable[tuple[int, int, int]]:
    for n in range(bound + 1):
        for m in range(bound + 1):
            top = isqrt(4 * n * m)
            for r in range(-top, top + 1):
                yield (n, r, m)


def siegel2_expand(k: int, bound: int) -> SiegelExpansion2:
    check_weight(k)
    return SiegelExpansion2(k, bound, {T: siegel2_coeff(k, T) for T in half_integral_keys(bound)})


# degree 1 Jacobi expansions

class JacobiExpansion:
    """Truncated Fourier expansion sum c(n, r) q^n zeta^r of a degree-1 Jacobi form.

    Only nonzero coefficients are stored.  Keys satisfy 4nm - r^2 >= 0 and
    n <= n_complete.
    """

    def __init__(self, weight: int, index: int, coeffs: Mapping, n_complete: int):
        self.weight = int(weight)
        self.index = int(index)
        self.n_complete = int(n_complete)
        if self.index < 0:
            raise ValueError("index must be non-negative")
        self.coeffs = {}
        for (n, r), c in coeffs.items():
            n, r = int(n), int(r)
            c = to_rational(c)
            if not c:
                continue
            if n < 0 or n > self.n_complete:
                raise ValueError(f"key {(n, r)} outside 0..n_complete={self.n_complete}")
            if 4 * n * self.index - r * r < 0:
                raise ValueError(f"key {(n, r)} violates 4nm - r^2 >= 0 at index {self.index}")
            self.coeffs[(n, r)] = c

    def __getitem__(self, key) -> Fraction:
        n, r = key
        if n > self.n_complete:
            raise KeyError(f"n = {n} is beyond n_complete = {self.n_complete}")
        return self.coeffs.get((n, r), Fraction(0))

    def is_symmetric(self) -> bool:
        return all(self.coeffs.get((n, -r), 0) == c for (n, r), c in self.coeffs.items())

    def truncate(self, n_complete: int) -> "JacobiExpansion":
        if n_complete > self.n_complete:
            raise ValueError(f"cannot extend completeness from {self.n_complete} to {n_complete}")
        return JacobiExpansion(self.weight, self.index,
                               {key: c for key, c in self.coeffs.items() if key[0] <= n_complete},
                               n_complete)

    def _combine(self, other: "JacobiExpansion", sign: int) -> "JacobiExpansion":
        if (self.weight, self.index) != (other.weight, other.index):
            raise ValueError("expansions of different weight or index")
        bound = min(self.n_complete, other.n_complete)
        out = {key: c for key, c in self.coeffs.items() if key[0] <= bound}
        for key, c in other.coeffs.items():
            if key[0] <= bound:
                out[key] = out.get(key, 0) + sign * c
        return JacobiExpansion(self.weight, self.index, out, bound)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, scalar):
        c = to_rational(scalar)
        return JacobiExpansion(self.weight, self.index,
                               {key: c * v for key, v in self.coeffs.items()}, self.n_complete)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, JacobiExpansion):
            return NotImplemented
        return ((self.weight, self.index, self.n_complete, self.coeffs)
                == (other.weight, other.index, other.n_complete, other.coeffs))

    def first_difference(self, other: "JacobiExpansion", bound: int | None = None):
        """First key (in sorted order) up to ``bound`` where the two differ, or None."""
        if bound is None:
            bound = min(self.n_complete, other.n_complete)
        keys = {k for k in self.coeffs if k[0] <= bound} | {k for k in other.coeffs if k[0] <= bound}
        for key in sorted(keys):
            if self[key] != other[key]:
                return key, self[key], other[key]
        return None

    def to_json(self) -> dict:
        return {"weight": self.weight, "index": self.index, "n_complete": self.n_complete,
                "coeffs": [[n, r, format_rational(c)] for (n, r), c in sorted(self.coeffs.items())]}

    @classmethod
    def from_json(cls, data: dict) -> "JacobiExpansion":
        return cls(data["weight"], data["index"],
                   {(n, r): parse_rational(c) for n, r, c in data["coeffs"]}, data["n_complete"])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def __repr__(self):
        return (f"JacobiExpansion(weight={self.weight}, index={self.index}, "
                f"n_complete={self.n_complete}, terms={len(self.coeffs)})")


def fourier_jacobi(k: int, m: int, n_max: int, source: SiegelExpansion2 | None = None) -> JacobiExpansion:
    """The index-m Fourier-Jacobi coefficient e_{k,m}(n, r) = a((n, r, m)), n <= n_max.

    Coefficients are computed on demand unless ``source`` supplies them, in
    which case its bound must reach max(n_max, m).
    """
    check_weight(k)
    if m < 0 or n_max < 0:
        raise ValueError("index and n_max must be non-negative")
    if source is not None:
        need = max(n_max, m)
        if source.weight != k:
            raise ValueError(f"source has weight {source.weight}, expected {k}")
        if source.bound < need:
            raise ValueError(f"insufficient bound: source has {source.bound}, need at least {need}")
        coeff = source.__getitem__
    else:
        coeff = lambda T: siegel2_coeff(k, T)  # noqa: E731
    out = {}
    for n in range(n_max + 1):
        top = isqrt(4 * n * m)
        for r in range(-top, top + 1):
            out[(n, r)] = coeff((n, r, m))
    phi = JacobiExpansion(k, m, out, n_max)
    assert phi.is_symmetric(), "Fourier-Jacobi coefficient lost r -> -r symmetry"
    return phi


@lru_cache(maxsize=256)
def _fourier_jacobi_cached(k: int, m: int, n_max: int) -> JacobiExpansion:
    return fourier_jacobi(k, m, n_max)


def moebius_terms(k: int, m: int) -> list[tuple[int, int, int]]:
    """Triangular system for the Jacobi-Eisenstein inversion: (d, m/d^2, g_k(m/d^2))."""
    return [(d, m // (d * d), g_k(k, m // (d * d))) for d in square_divisors(m)]


@lru_cache(maxsize=256)
def jacobi_eisenstein(k: int, m: int, n_max: int) -> JacobiExpansion:
    """The series E^_{k,m} solving e_{k,m} = sum_{d^2|m} g_k(m/d^2) E^_{k,m/d^2}|U(d).

    E^ agrees with the normalized Jacobi-Eisenstein series up to one scalar
    that does not depend on m (its constant term).
    """
    check_weight(k)
    if m < 1:
        raise ValueError("index must be positive")
    rest = _fourier_jacobi_cached(k, m, n_max)
    diagonal = None
    for d, mu, g in moebius_terms(k, m):
        if d == 1:
            diagonal = g
            continue
        rest = rest - apply_U(jacobi_eisenstein(k, mu, n_max), d) * g
    if not diagonal or diagonal <= 0:
        raise ArithmeticError(f"triangular system is singular at m = {m}")
    out = rest * Fraction(1, diagonal)
    assert out.is_symmetric()
    return out


# operators

def apply_U(phi: JacobiExpansion, d: int) -> JacobiExpansion:
    """phi(tau, d z): index m d^2, c'(n, r) = c(n, r/d)."""
    if d < 1:
        raise ValueError("U(d) needs d >= 1")
    return JacobiExpansion(phi.weight, phi.index * d * d,
                           {(n, r * d): c for (n, r), c in phi.coeffs.items()}, phi.n_complete)


def coset_representatives(p: int) -> list[tuple[int, int, int]]:
    """Upper-triangular (a, b, d), ad = p^2, 0 <= b < d, gcd(a, b, d) = 1.

    Right cosets of the double coset of diag(1, p^2) in SL2(Z), found by
    enumerating the Hermite normal forms of determinant p^2 with unit content.
    """
    require_prime(p)
    reps = []
    for a in divisors(p * p):
        d = p * p // a
        for b in range(d):
            if gcd(gcd(a, b), d) == 1:
                reps.append((a, b, d))
    return reps


def _coset_sum(coeffs: Mapping, k: int, p: int, out_bound: int, scale_z: bool) -> dict:
    """Sum over the l = 1 cosets of d^{-k} f((a tau + b)/d, a z), exactly.

    Roots of unity e(nb/d) are accumulated in Q(zeta_{p^2}); the total at an
    integral exponent must be rational and at a fractional one must vanish.
    """
    order = p * p
    acc: dict = {}
    for a, b, d in coset_representatives(p):
        w = Fraction(1, d ** k)
        for (n, r), c in coeffs.items():
            N = Fraction(n * a, d)
            if N > out_bound:
                continue
            key = (N, a * r if scale_z else r)
            s = acc.get(key)
            if s is None:
                s = acc[key] = RootOfUnitySum(order)
            s.add(n * b * (order // d), w * c)
    out = {}
    for (N, R), s in acc.items():
        if N.denominator != 1:
            if any(s.reduced()):
                raise ArithmeticError(f"fractional exponent {N} survived the coset sum")
            continue
        v = s.rational_value()
        if v:
            out[(int(N), R)] = v
    return out


def apply_V(phi: JacobiExpansion, l: int, p: int, degree: int = 1,
            method: str = "fast") -> JacobiExpansion:
    """phi | V_{l,1-l}(p^2) on a degree-1 Jacobi form (index m -> m p^2).

    ``method="fast"`` uses the closed coefficient map; ``method="cosets"``
    sums the slash action over explicit coset representatives.
    """
    if degree != 1:
        raise ValueError("only degree 1 supported")
    require_prime(p)
    k = phi.weight
    if l == 0:
        return apply_U(phi, p) * Fraction(1, p ** k)
    if l != 1:
        raise ValueError(f"l must be 0 or 1 in degree 1, got {l}")
    bound = phi.n_complete // (p * p)
    if method == "cosets":
        return JacobiExpansion(k, phi.index * p * p, _coset_sum(phi.coeffs, k, p, bound, True), bound)
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    pk = Fraction(1, p ** k)
    out: dict = {}

    def add(key, v):
        out[key] = out.get(key, 0) + v

    for (n, r), c in phi.coeffs.items():
        # (p^2, 0, 1): phi(p^2 tau, p^2 z)
        if n * p * p <= bound:
            add((n * p * p, r * p * p), c)
        # (p, b, p): p^{-k} sum_b phi(tau + b/p, p z)
        if n <= bound:
            add((n, r * p), pk * (p * (n % p == 0) - 1) * c)
        # (1, b, p^2): p^{-2k} sum_b phi((tau + b)/p^2, z)
        if n % (p * p) == 0 and n // (p * p) <= bound:
            add((n // (p * p), r), pk * pk * p * p * c)
    return JacobiExpansion(k, phi.index * p * p, out, bound)


def specialize_z0(phi: JacobiExpansion) -> list[Fraction]:
    """W(phi)(tau) = phi(tau, 0): b(n) = sum_r c(n, r), n <= n_complete."""
    out = [Fraction(0)] * (phi.n_complete + 1)
    for (n, _), c in phi.coeffs.items():
        out[n] += c
    return out


def hecke_T_elliptic(F: list, k: int, p: int, target_length: int | None = None,
                     method: str = "fast") -> list[Fraction]:
    """F | T_{1,0}(p^2) = p^{2k-2} sum over cosets of d^{-k} F((a tau + b)/d).

    The input must carry p^2 (target_length - 1) + 1 coefficients; by default
    the longest guaranteed output is returned.
    """
    require_prime(p)
    F = [to_rational(c) for c in F]
    p2 = p * p
    bound = (len(F) - 1) // p2
    if target_length is not None:
        if target_length - 1 > bound:
            raise ValueError(f"insufficient length: need {p2 * (target_length - 1) + 1} "
                             f"coefficients, got {len(F)}")
        bound = target_length - 1
    scale = Fraction(p) ** (2 * k - 2)
    if method == "cosets":
        raw = _coset_sum({(n, 0): c for n, c in enumerate(F) if c}, k, p, bound, False)
        return [scale * raw.get((n, 0), Fraction(0)) for n in range(bound + 1)]
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    pk = Fraction(1, p ** k)
    out = []
    for n in range(bound + 1):
        v = pk * (p * (n % p == 0) - 1) * F[n] + pk * pk * p2 * F[p2 * n]
        if n % p2 == 0:
            v += F[n // p2]
        out.append(scale * v)
    return out

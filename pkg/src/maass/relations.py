"""Maass-relation verifiers for degree-1 Jacobi-Eisenstein data.

Checks come back as :class:`VerificationReport` records.  A failing report
carries the first mismatching coefficient as its witness.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import (g_k, g_p_count, gauss_sum, lattice_multiplicities, ord_p,
                    require_prime, square_divisors)
from .exactalg import PolyMatrix, format_rational
from .qexp import (JacobiExpansion, _fourier_jacobi_cached, apply_U, apply_V,
                   check_weight, hecke_T_elliptic, jacobi_eisenstein, specialize_z0)
from .satake import build_A


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass
class VerificationReport:
    check: str
    params: dict
    status: str = "pass"
    witness: dict | None = None
    runtime_ms: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def fail(self, key, lhs, rhs) -> "VerificationReport":
        if self.status == "pass":
            self.status = "fail"
            self.witness = {"key": _jsonable(key), "lhs": _jsonable(lhs), "rhs": _jsonable(rhs)}
        return self

    def to_json(self, timing: bool = True) -> dict:
        out = {"check": self.check, "params": _jsonable(self.params), "status": self.status,
               "runtime_ms": round(self.runtime_ms, 3) if timing else 0}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class _Timer:
    def __init__(self, report: VerificationReport):
        self.report = report

    def __enter__(self):
        self.start = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.runtime_ms = (time.perf_counter() - self.start) * 1000
        return False


def timed(report: VerificationReport) -> _Timer:
    return _Timer(report)


# coefficient vectors

@dataclass(frozen=True)
class AVector:
    a0: Fraction
    a1: Fraction
    a2: Fraction
    case: str  # "p2|m", "p|m", "p!|m"

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a0, self.a1, self.a2)


def a_vector(m: int, p: int, k: int) -> AVector:
    """How V_{1,0}(p^2) acts on E_{k,m} in the basis (E_{m/p^2}|U(p^2), E_m|U(p), E_{mp^2})."""
    check_weight(k)
    require_prime(p)
    P = Fraction(p)
    e = ord_p(m, p)
    if e >= 2:
        return AVector(P ** (2 - 2 * k), P ** -k * (P - 1), Fraction(1), "p2|m")
    if e == 1:
        return AVector(Fraction(0), P ** (2 - 2 * k) + P ** (1 - k) - P ** -k, Fraction(1), "p|m")
    return AVector(Fraction(0), P ** (2 - 2 * k) - P ** -k, P ** (1 - k) + 1, "p!|m")


def k_combination(n: int, i: int, j: int, alpha: int, m: int, p: int, k: int) -> tuple:
    """Coefficients of K_{i,j}^alpha in (E_{m/p^2}|U(p^2), E_m|U(p), E_{mp^2}).

    For p^2 | m this works in every degree n.  Otherwise it needs the indices
    [Gamma(delta_j) : Gamma(delta_{i,j})] and [Gamma(delta_i) : Gamma(delta_{i,j})],
    which are only known here for n = 1, where both equal 1.
    """
    check_weight(k)
    require_prime(p)
    if not 0 <= i <= j <= n or not 0 <= alpha <= j - i:
        raise ValueError(f"invalid K-combination indices n={n}, i={i}, j={j}, alpha={alpha}")
    P = Fraction(p)
    scale = P ** (-k * (2 * n - i - j) + (n - j) * (n - i + 1))

    def G(mm: int) -> Fraction:
        if j == i:
            return Fraction(1)
        return gauss_sum(p, j - i, alpha, mm, True)

    if m % (p * p) == 0:
        g0 = G(0)
        return tuple(scale * g0 * a for a in lattice_multiplicities(p, n, i, j))
    if n != 1:
        raise NotImplementedError("requires subgroup indices not in closed form")
    idx_j = idx_i = 1
    g0, gm = G(0), G(m)
    c1 = (g0 - gm) * idx_j * g_p_count(p, n - 1, j) + gm * idx_i * g_p_count(p, n - 1, i)
    c2 = ((g0 - gm) * idx_j * P ** (n - j) * g_p_count(p, n - 1, j - 1)
          + gm * idx_i * P ** (n - i) * g_p_count(p, n - 1, i - 1))
    return (Fraction(0), scale * c1, scale * c2)


def k_combination_n1(i: int, j: int, alpha: int, m: int, p: int, k: int) -> tuple:
    if (i, j) not in {(0, 0), (0, 1), (1, 1)}:
        raise ValueError(f"(i, j) = {(i, j)} does not occur in degree 1")
    return k_combination(1, i, j, alpha, m, p, k)


def k_sum_n1(m: int, p: int, k: int) -> tuple:
    """K_{0,0}^0 + K_{0,1}^1 + K_{1,1}^0, the pieces of E_{k,m}|V_{1,0}(p^2)."""
    parts = [k_combination_n1(0, 0, 0, m, p, k), k_combination_n1(0, 1, 1, m, p, k),
             k_combination_n1(1, 1, 0, m, p, k)]
    return tuple(sum(col, Fraction(0)) for col in zip(*parts))


def relation_matrix(m: int, p: int, k: int) -> PolyMatrix:
    """The 3 x 2 matrix (0, 1; p^-k, p^-k(-1 + p delta); 0, p^{2-2k})."""
    P = Fraction(p)
    delta = 1 if m % p == 0 else 0
    return PolyMatrix.from_rows([[0, 1], [P ** -k, P ** -k * (-1 + p * delta)],
                                 [0, P ** (2 - 2 * k)]])


def theorem1_matrix(m: int, p: int, k: int, n: int) -> PolyMatrix:
    """relation_matrix(m, p, k) times A_{2,n+1}^{p,k}; a 3 x (n+1) rational matrix.

    Any positive integer k is accepted: the matrix makes sense beyond the
    even weights where Eisenstein data exists.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    require_prime(p)
    return relation_matrix(m, p, k) @ build_A(n, p, k)


def ev_matrix(m: int, p: int, k: int) -> PolyMatrix:
    a = a_vector(m, p, k)
    return PolyMatrix.from_rows([[0, a.a0], [Fraction(1, p ** k), a.a1], [0, a.a2]])


# formal combinations of E_{k,mu} | U(u)

class FormalCombo:
    """Formal linear combination of symbols (index, u_scale) standing for E_{k,index}|U(u_scale).

    A symbol with a non-integral index may only carry coefficient 0; this is
    how terms such as E_{k,m/p^2} with p^2 not dividing m are kept honest.
    """

    def __init__(self, terms: dict | None = None):
        self.terms: dict = {}
        for sym, c in (terms or {}).items():
            self.add(sym[0], sym[1], c)

    def add(self, index, u_scale: int, coeff) -> None:
        coeff = Fraction(coeff)
        if not coeff:
            return
        index = Fraction(index)
        if index.denominator != 1 or index <= 0:
            raise ValueError(f"nonzero coefficient on the vanishing symbol E_{index}|U({u_scale})")
        key = (index, int(u_scale))
        v = self.terms.get(key, 0) + coeff
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "FormalCombo") -> "FormalCombo":
        out = FormalCombo(self.terms)
        for (idx, u), c in other.terms.items():
            out.add(idx, u, c)
        return out

    def scaled(self, c) -> "FormalCombo":
        return FormalCombo({key: v * Fraction(c) for key, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, FormalCombo) and self.terms == other.terms

    def first_difference(self, other: "FormalCombo"):
        for key in sorted(set(self.terms) | set(other.terms)):
            a, b = self.terms.get(key, Fraction(0)), other.terms.get(key, Fraction(0))
            if a != b:
                return key, a, b
        return None

    def __repr__(self):
        return "FormalCombo(" + ", ".join(
            f"{c}*E[{i}]|U({u})" for (i, u), c in sorted(self.terms.items())) + ")"


def bo_satz_expansion(k: int, index, u_scale: int) -> FormalCombo:
    """e_{k,index}|U(u) = sum_{d^2 | index} g_k(index/d^2) E_{k,index/d^2}|U(u d).

    A non-integral index gives the zero combination.
    """
    index = Fraction(index)
    out = FormalCombo()
    if index.denominator != 1:
        return out
    mm = int(index)
    for d in square_divisors(mm):
        out.add(mm // (d * d), u_scale * d, g_k(k, mm // (d * d)))
    return out


def _placed(k: int, m: int, p: int, vector_fn) -> FormalCombo:
    out = FormalCombo()
    for d in square_divisors(m):
        mu = m // (d * d)
        g = g_k(k, mu)
        a0, a1, a2 = vector_fn(mu)
        out.add(Fraction(mu, p * p), p * p * d, g * a0)
        out.add(mu, p * d, g * a1)
        out.add(mu * p * p, d, g * a2)
    return out


def _e_side(k: int, m: int, p: int) -> FormalCombo:
    P = Fraction(p)
    delta = 1 if m % p == 0 else 0
    return (bo_satz_expansion(k, Fraction(m, p * p), p * p)
            + bo_satz_expansion(k, m, p).scaled(P ** -k * (-1 + p * delta))
            + bo_satz_expansion(k, m * p * p, 1).scaled(P ** (2 - 2 * k)))


def sum_EU_sides(k: int, m: int, p: int) -> tuple[FormalCombo, FormalCombo]:
    lhs = _placed(k, m, p, lambda mu: a_vector(mu, p, k).as_tuple())
    return lhs, _e_side(k, m, p)


def verify_sum_EU(k: int, m: int, p: int) -> VerificationReport:
    report = VerificationReport("sum_eu", {"k": k, "m": m, "p": p})
    with timed(report):
        lhs, rhs = sum_EU_sides(k, m, p)
        diff = lhs.first_difference(rhs)
        if diff:
            (idx, u), a, b = diff
            report.fail(f"E[{format_rational(idx)}]|U({u})", a, b)
    return report


def verify_consistency_triangle(k: int, m: int, p: int) -> VerificationReport:
    """For p not dividing m: the relation column expanded by Moebius inversion
    equals the K-combinations K00^0 + K01^1 + K11^0 placed on the same symbols."""
    report = VerificationReport("consistency_triangle", {"k": k, "m": m, "p": p})
    with timed(report):
        if m % p == 0:
            raise ValueError("the consistency triangle is stated for p not dividing m")
        lhs = _placed(k, m, p, lambda mu: k_sum_n1(mu, p, k))
        diff = lhs.first_difference(_e_side(k, m, p))
        if diff:
            (idx, u), a, b = diff
            report.fail(f"E[{format_rational(idx)}]|U({u})", a, b)
    return report


def verify_k_sum(m: int, p: int, k: int) -> VerificationReport:
    """K00^0 + K01^1 + K11^0 equals the a-vector in degree 1."""
    report = VerificationReport("k_sum_a_vector", {"k": k, "m": m, "p": p})
    with timed(report):
        got, want = k_sum_n1(m, p, k), a_vector(m, p, k).as_tuple()
        for idx, (a, b) in enumerate(zip(got, want)):
            if a != b:
                report.fail(f"a{idx}", a, b)
                break
    return report


# expansion-level checks

def _zero_like(k: int, index: int, n_complete: int) -> JacobiExpansion:
    return JacobiExpansion(k, index, {}, n_complete)


def _combine_columns(basis: list[JacobiExpansion], matrix: PolyMatrix) -> list[JacobiExpansion]:
    cols = []
    for j in range(matrix.cols):
        acc = None
        for i, phi in enumerate(basis):
            term = phi * matrix[i, j].constant_value()
            acc = term if acc is None else acc + term
        cols.append(acc)
    return cols


def _compare_columns(report, lhs, rhs, bound):
    for col, (a, b) in enumerate(zip(lhs, rhs)):
        if min(a.n_complete, b.n_complete) < bound:
            return report.fail("n_complete", min(a.n_complete, b.n_complete), bound)
        diff = a.first_difference(b, bound)
        if diff:
            (n, r), x, y = diff
            return report.fail({"column": col, "n": n, "r": r}, x, y)
    return report


def _basis(source, k: int, m: int, p: int, n_max: int) -> list[JacobiExpansion]:
    p2 = p * p
    first = (apply_U(source(k, m // p2, n_max), p2) if m % p2 == 0
             else _zero_like(k, m * p2, n_max))
    return [first, apply_U(source(k, m, n_max), p), source(k, m * p2, n_max)]


def verify_theorem1_n1(k: int, m: int, p: int, n_max: int = 4,
                       method: str = "fast") -> VerificationReport:
    """e_{k,m} | (V_{0,1}(p^2), V_{1,0}(p^2)) against the three-term right side."""
    report = VerificationReport("theorem1", {"k": k, "m": m, "p": p, "n_max": n_max})
    with timed(report):
        check_weight(k)
        require_prime(p)
        e = _fourier_jacobi_cached(k, m, n_max * p * p)
        lhs = [apply_V(e, 0, p).truncate(n_max), apply_V(e, 1, p, method=method)]
        rhs = _combine_columns(_basis(_fourier_jacobi_cached, k, m, p, n_max),
                               theorem1_matrix(m, p, k, 1))
        _compare_columns(report, lhs, rhs, n_max)
    return report


def verify_EV_n1(k: int, m: int, p: int, n_max: int = 4) -> VerificationReport:
    """The a-vector action of (V_{0,1}, V_{1,0}) on the inverted series E^_{k,m}."""
    report = VerificationReport("ev_degree1", {"k": k, "m": m, "p": p, "n_max": n_max})
    with timed(report):
        E = jacobi_eisenstein(k, m, n_max * p * p)
        lhs = [apply_V(E, 0, p).truncate(n_max), apply_V(E, 1, p)]
        rhs = _combine_columns(_basis(jacobi_eisenstein, k, m, p, n_max), ev_matrix(m, p, k))
        _compare_columns(report, lhs, rhs, n_max)
    return report


def verify_wtv(k: int, m: int, p: int, n_max: int = 4) -> VerificationReport:
    """W(e_{k,m}) | T_{1,0}(p^2) = p^{2(k-1)} W(e_{k,m} | V_{1,0}(p^2))."""
    report = VerificationReport("w_t_v", {"k": k, "m": m, "p": p, "n_max": n_max})
    with timed(report):
        e = _fourier_jacobi_cached(k, m, n_max * p * p)
        lhs = hecke_T_elliptic(specialize_z0(e), k, p, target_length=n_max + 1)
        scale = Fraction(p) ** (2 * k - 2)
        rhs = [scale * c for c in specialize_z0(apply_V(e, 1, p))][: n_max + 1]
        for n, (a, b) in enumerate(zip(lhs, rhs)):
            if a != b:
                report.fail({"n": n}, a, b)
                break
        if len(lhs) != len(rhs):
            report.fail("length", len(lhs), len(rhs))
    return report


def verify_moebius_normalization(k: int, indices, n_max: int = 2) -> VerificationReport:
    """The inverted series E^_{k,m} share one constant term for all m."""
    report = VerificationReport("moebius_constant", {"k": k, "indices": list(indices)})
    with timed(report):
        values = {m: jacobi_eisenstein(k, m, n_max)[(0, 0)] for m in indices}
        base = values[min(values)]
        for m, v in sorted(values.items()):
            if v != base:
                report.fail({"m": m}, v, base)
                break
        report.details["constant"] = base
    return report

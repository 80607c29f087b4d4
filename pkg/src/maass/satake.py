"""Satake images of the similitude-p^2 Hecke operators and their matrix calculus.

The prime ``p`` may be a concrete prime or the symbolic unit ``q**2`` (see
:func:`symbolic_p`); every formula here is written so that both work.  With a
symbolic prime, identities are checked in the free Laurent ring over ``q``,
which implies them at every prime at once.

Variable conventions: ``X0..Xn`` are the Satake variables.  The matrix A'
is expressed in ``(q, u)`` with ``u = q * X_p``, so the shifted arguments
``p**(i - n - 1/2) * X_p`` become ``q**(2i - 2n - 2) * u``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import require_prime
from .exactalg import LaurentPoly, PolyMatrix, lp, reduce_half_powers, xvars

Q = LaurentPoly.var("q")
U = LaurentPoly.var("u")


def symbolic_p() -> LaurentPoly:
    """The formal prime ``q**2``."""
    return Q ** 2


def _ring_p(p):
    """Return p as a ring element: a Fraction for a concrete prime, else q**2."""
    if isinstance(p, LaurentPoly):
        if p != Q ** 2:
            raise ValueError("the only supported symbolic prime is q**2")
        return p
    return Fraction(require_prime(int(p)))


def _key(p):
    if isinstance(p, LaurentPoly):
        _ring_p(p)
        return "q^2"
    return int(p)


def _is_symbolic(p) -> bool:
    return isinstance(p, LaurentPoly)


def half_power(p, e2: int) -> LaurentPoly:
    """p**(e2/2) as a polynomial in q (q**2 = p); integral for even e2."""
    if _is_symbolic(p):
        return Q ** e2
    if e2 % 2 == 0:
        return lp(Fraction(p) ** (e2 // 2))
    return Q * Fraction(p) ** ((e2 - 1) // 2)


def _finish(f: LaurentPoly, p) -> LaurentPoly:
    return f if _is_symbolic(p) else reduce_half_powers(f, p)


# B matrices

def b_entry(t: int, j: int, l: int, p, x: LaurentPoly | None = None) -> LaurentPoly:
    """Entry b_{t,j} of B_{l,l+1}(X_l), a polynomial in ``X_l`` (or in ``x``)."""
    if not (0 <= t <= l - 1 and 0 <= j <= l):
        raise IndexError(f"b_entry index (t={t}, j={j}) out of range for l={l}")
    P = _ring_p(p)
    X = LaurentPoly.var(f"X{l}") if x is None else lp(x)
    if t == j - 2:
        return (P ** (2 * l - 2 * j + 2) - 1) * P ** (j - 1 - l) * X
    if t == j - 1:
        return 1 + P ** (j - 1 - l) * (P - 1) * X + X * X
    if t == j:
        return P ** (j - l) * X
    return lp(0)


def build_B(l: int, p, x: LaurentPoly | None = None) -> PolyMatrix:
    """The l x (l+1) matrix B_{l,l+1}(X_l)."""
    if l < 1:
        raise ValueError("B_{l,l+1} needs l >= 1")
    return PolyMatrix(l, l + 1, [b_entry(t, j, l, p, x) for t in range(l) for j in range(l + 1)])


def build_B_chain(n: int, p, args: dict | None = None) -> PolyMatrix:
    """B_{2,n+1} = B_{2,3}(X_2) ... B_{n,n+1}(X_n); the 2x2 identity for n = 1.

    ``args`` optionally maps l to the value substituted for X_l.
    """
    if n < 1:
        raise ValueError("chain length needs n >= 1")
    args = args or {}
    m = PolyMatrix.identity(2)
    for l in range(2, n + 1):
        m = m @ build_B(l, p, args.get(l))
    return m


def build_Bprime(n: int, p) -> PolyMatrix:
    """B'_{2,2n} = (X_2 ... X_{2n-1})^{-1} B_{2,2n}, over X_2..X_{2n-1}."""
    chain = build_B_chain(2 * n - 1, p)
    scale = lp(1)
    for i in range(2, 2 * n):
        scale = scale * LaurentPoly.var(f"X{i}")
    return chain.map(lambda e: e / scale)


def build_A(n: int, p, k: int) -> PolyMatrix:
    """A_{2,n+1}^{p,k} = B_{2,n+1}(p^{2-k}, ..., p^{n-k})."""
    P = _ring_p(p)
    return build_B_chain(n, p, {l: lp(P ** (l - k)) for l in range(2, n + 1)})


def aprime_arguments(n: int, p) -> dict:
    """X_i -> p^{i-n-1/2} X_p written as q^{2i-2n-2} u, for i = 2..2n-1."""
    return {f"X{i}": half_power(p, 2 * i - 2 * n - 2) * U for i in range(2, 2 * n)}


def build_Aprime(n: int, p) -> PolyMatrix:
    """A'_{2,2n} as a matrix of Laurent polynomials in (q, u), u = q X_p.

    For a concrete prime the entries are reduced modulo q**2 = p.
    """
    return build_Bprime(n, p).map(lambda e: _finish(e.substitute(aprime_arguments(n, p)), p))


def evaluate_Aprime(n: int, p, x_p) -> PolyMatrix:
    """A'_{2,2n}(X_p) at a given value of X_p (any unit Laurent polynomial)."""
    u_val = Q * lp(x_p)
    return build_Aprime(n, p).map(lambda e: _finish(e.substitute({"u": u_val}), p))


def palindrome_image(f: LaurentPoly, p) -> LaurentPoly:
    """f(q^2/u): the u-representation of X_p -> X_p^{-1}."""
    return _finish(f.substitute({"u": Q ** 2 / U}), p)


# Satake images

def _seed(p) -> tuple[LaurentPoly, LaurentPoly]:
    P = _ring_p(p)
    X0, X1 = LaurentPoly.var("X0"), LaurentPoly.var("X1")
    t01 = X0 * X0 * X1 / P
    t10 = t01 * (P / X1 + (P - 1) + P * X1)
    return t01, t10


@lru_cache(maxsize=None)
def _phi_row_recursive(n: int, pkey) -> tuple:
    p = pkey if isinstance(pkey, int) else symbolic_p()
    if n == 1:
        return _seed(p)
    P = _ring_p(p)
    prev = _phi_row_recursive(n - 1, pkey)  # prev[j] = phi(T_{j, n-1-j})
    X = LaurentPoly.var(f"X{n}")
    row = []
    for j in range(n + 1):
        if j == n:
            val = (1 / X + (P - 1) / P + X) * prev[n - 1] + (P * P - 1) / P * prev[n - 2]
        elif j == 1:
            val = P ** (1 - n) * prev[1] + (1 / X + (P - 1) * P ** (-n) + X) * prev[0]
        elif j == 0:
            val = P ** (-n) * prev[0]
        else:
            val = (P ** (j - n) * prev[j]
                   + (1 / X + P ** (j - n - 1) * (P - 1) + X) * prev[j - 1]
                   + (P ** (2 * n - 2 * j + 2) - 1) * P ** (j - n - 1) * prev[j - 2])
        row.append(X * val)
    return tuple(row)


def _over_x(f: LaurentPoly, n: int) -> LaurentPoly:
    xs = xvars(n)
    return f.over(xs + tuple(v for v in f.used_variables() if v not in xs))


def phi_row(n: int, p) -> list[LaurentPoly]:
    """(phi(T_{0,n}(p^2)), ..., phi(T_{n,0}(p^2))) by the degree recursion."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    return [_over_x(f, n) for f in _phi_row_recursive(n, _key(p))]


def phi_T(l: int, n: int, p) -> LaurentPoly:
    """Satake image of T_{l,n-l}(p^2) as a Laurent polynomial in X0..Xn."""
    if n < 1 or not 0 <= l <= n:
        raise IndexError(f"T_{{{l},{n - l}}} is not defined in degree {n}")
    return phi_row(n, p)[l]


def phi_row_via_chain(n: int, p) -> list[LaurentPoly]:
    """The same row computed as (phi(T_{0,1}), phi(T_{1,0})) * B_{2,n+1}."""
    seed = PolyMatrix(1, 2, _seed(p))
    return [_over_x(f, n) for f in (seed @ build_B_chain(n, p)).row(0)]


# Satake vectors and eigenvalues

@dataclass(frozen=True)
class HeckeSymbol:
    l: int
    n: int
    p: int

    def __post_init__(self):
        if not 0 <= self.l <= self.n:
            raise ValueError(f"need 0 <= l <= n, got l={self.l}, n={self.n}")
        require_prime(self.p)


@dataclass(frozen=True)
class SatakeVector:
    """Satake parameter (mu_0, ..., mu_n), with mu_0 kept only through mu_0^2.

    Hecke operators of similitude p^2 have Satake images of X0-degree exactly
    two, so the square is all that evaluation needs.
    """

    degree: int
    mu0_sq: LaurentPoly
    mu: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "mu0_sq", lp(self.mu0_sq))
        object.__setattr__(self, "mu", tuple(lp(m) for m in self.mu))
        if len(self.mu) != self.degree:
            raise ValueError(f"expected {self.degree} parameters, got {len(self.mu)}")

    @classmethod
    def normalized(cls, mu, k: int, p) -> "SatakeVector":
        """Fix mu_0^2 by mu_0^2 mu_1 ... mu_n = p^{nk - n(n+1)/2}."""
        mu = [lp(m) for m in mu]
        n = len(mu)
        prod = lp(1)
        for m in mu:
            prod = prod * m
        target = half_power(p, 2 * (n * k - n * (n + 1) // 2))
        return cls(n, target / prod, tuple(mu))

    def similitude(self) -> LaurentPoly:
        out = self.mu0_sq
        for m in self.mu:
            out = out * m
        return out

    def assignment(self) -> dict:
        return {f"X{i}": m for i, m in enumerate(self.mu, start=1)}


def eigenvalue_at(sv: SatakeVector, l: int, n: int, p) -> LaurentPoly:
    """Eigenvalue of T_{l,n-l}(p^2) at the Satake parameter ``sv``."""
    if sv.degree != n:
        raise ValueError(f"Satake vector has degree {sv.degree}, operator has degree {n}")
    f = phi_T(l, n, p)
    parts = f.collect("X0")
    if set(parts) - {2}:
        raise ArithmeticError(f"X0-degrees {sorted(parts)} differ from 2")
    out = (parts.get(2, lp(0)) * sv.mu0_sq).substitute(sv.assignment())
    return _finish(out, p)

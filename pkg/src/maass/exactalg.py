"""Exact arithmetic substrate.

Rationals are :class:`fractions.Fraction`.  Laurent polynomials are sparse
maps from integer exponent tuples to rationals over an ordered list of
symbol names.  Small dense matrices over Laurent polynomials, the Weyl group
action on ``X0..Xn`` and exact sums of roots of unity live here as well.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

import sympy

Rational = Fraction


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(x) -> str:
    """Serialize as ``"num/den"`` (denominator always written)."""
    x = to_rational(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)


class LaurentPoly:
    """Multivariate Laurent polynomial with exact rational coefficients.

    ``variables`` is an ordered tuple of symbol names and ``terms`` maps
    exponent tuples (negative entries allowed) to nonzero coefficients.
    Values are immutable; arithmetic between polynomials over different
    variable lists works over the union of the lists.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        nv = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nv:
                raise ValueError(f"exponent {exp} does not match variables {self.variables}")
            c = to_rational(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    # constructors

    @classmethod
    def const(cls, c, variables: Sequence[str] = ()) -> "LaurentPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str) -> "LaurentPoly":
        return cls((name,), {(1,): 1})

    @classmethod
    def monomial(cls, exponents: Mapping[str, int], coeff=1) -> "LaurentPoly":
        variables = tuple(exponents)
        return cls(variables, {tuple(exponents[v] for v in variables): coeff})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        return cls.const(x)

    # structure

    def over(self, variables: Sequence[str]) -> "LaurentPoly":
        """Re-express over a variable list containing every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        for v, col in zip(self.variables, zip(*self.terms) if self.terms else ()):
            if v not in pos and any(col):
                raise ValueError(f"variable {v} is used but missing from {variables}")
        idx = [(pos[v], i) for i, v in enumerate(self.variables) if v in pos]
        out = {}
        for exp, c in self.terms.items():
            new = [0] * len(variables)
            for j, i in idx:
                new[j] = exp[i]
            out[tuple(new)] = c
        return LaurentPoly(variables, out)

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables)
                     if any(exp[i] for exp in self.terms))

    def _align(self, other: "LaurentPoly"):
        if self.variables == other.variables:
            return self, other
        merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
        return self.over(merged), other.over(merged)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return next(iter(self.terms.values()), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree_range(self, var: str) -> tuple[int, int]:
        """(min, max) exponent of ``var`` over all terms."""
        if var not in self.variables or not self.terms:
            return (0, 0)
        i = self.variables.index(var)
        exps = [exp[i] for exp in self.terms]
        return (min(exps), max(exps))

    def coefficient(self, exponents: Mapping[str, int]) -> Fraction:
        exp = tuple(exponents.get(v, 0) for v in self.variables)
        if any(v not in self.variables and e for v, e in exponents.items()):
            return Fraction(0)
        return self.terms.get(exp, Fraction(0))

    def collect(self, var: str) -> dict[int, "LaurentPoly"]:
        """Split into {exponent of var: coefficient polynomial in the other variables}."""
        if var not in self.variables:
            return {0: self} if self.terms else {}
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        parts: dict[int, dict] = {}
        for exp, c in self.terms.items():
            parts.setdefault(exp[i], {})[exp[:i] + exp[i + 1:]] = c
        return {e: LaurentPoly(rest, t) for e, t in sorted(parts.items())}

    # arithmetic

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        a, b = self._align(other)
        out = dict(a.terms)
        for exp, c in b.terms.items():
            out[exp] = out.get(exp, 0) + c
        return LaurentPoly(a.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = to_rational(other)
            return LaurentPoly(self.variables, {e: c * v for e, v in self.terms.items()})
        a, b = self._align(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(a.variables, out)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ValueError("non-invertible substitution: only monomials are units")
        (exp, c), = self.terms.items()
        return LaurentPoly(self.variables, {tuple(-e for e in exp): 1 / c})

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            return self * other.inverse()
        return self * (1 / to_rational(other))

    def __rtruediv__(self, other):
        return LaurentPoly.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("only integer powers are supported")
        if e < 0:
            return self.inverse() ** (-e)
        if self.is_monomial():
            (exp, c), = self.terms.items()
            return LaurentPoly(self.variables, {tuple(x * e for x in exp): c ** e})
        result = LaurentPoly.const(1, self.variables)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.const(to_rational(other))
            except TypeError:
                return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    def _canonical(self):
        used = self.used_variables()
        pos = [self.variables.index(v) for v in used]
        return tuple(sorted(
            (tuple((v, exp[i]) for v, i in zip(used, pos) if exp[i]), c)
            for exp, c in self.terms.items()))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._canonical())
        return self._hash

    # evaluation

    def substitute(self, assignment: Mapping[str, object]) -> "LaurentPoly":
        """Ring homomorphism sending each assigned variable to a value.

        Unassigned variables are kept.  A negative exponent requires the
        assigned value to be a unit (a single monomial).
        """
        values = {v: LaurentPoly.coerce(x) for v, x in assignment.items()
                  if v in self.variables}
        keep = tuple(v for v in self.variables if v not in values)
        target = keep + tuple(sorted({w for val in values.values() for w in val.variables
                                      if w not in keep}))
        values = {v: val.over(target) for v, val in values.items()}
        keep_idx = [self.variables.index(v) for v in keep]
        subst_idx = [(i, v) for i, v in enumerate(self.variables) if v in values]
        pad = (0,) * (len(target) - len(keep))
        powers: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in powers:
                val = values[v]
                if e < 0 and not val.is_monomial():
                    raise ValueError("non-invertible substitution")
                powers[key] = val ** e
            return powers[key]

        out: dict = {}
        for exp, c in self.terms.items():
            partial = {tuple(exp[i] for i in keep_idx) + pad: c}
            for i, v in subst_idx:
                if not exp[i]:
                    continue
                factor = power(v, exp[i]).terms
                nxt: dict = {}
                for e1, c1 in partial.items():
                    for e2, c2 in factor.items():
                        e = tuple(x + y for x, y in zip(e1, e2))
                        nxt[e] = nxt.get(e, 0) + c1 * c2
                partial = nxt
            for e, v in partial.items():
                out[e] = out.get(e, 0) + v
        return LaurentPoly(target, out)

    def evaluate(self, assignment: Mapping[str, object]) -> Fraction:
        """Fully evaluate to a rational."""
        return self.substitute(assignment).constant_value()

    def coefficient_sum(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    # display / serialization

    def term_list(self) -> list:
        """Deterministic ``[[exponents...], "num/den"]`` list sorted by exponent."""
        return [[list(exp), format_rational(c)] for exp, c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(v if e == 1 else f"{v}^{e}"
                            for v, e in zip(self.variables, exp) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def lp(x) -> LaurentPoly:
    return LaurentPoly.coerce(x)


def xvars(n: int) -> tuple[str, ...]:
    return tuple(f"X{i}" for i in range(n + 1))


def reduce_half_powers(f: LaurentPoly, p: int, var: str = "q") -> LaurentPoly:
    """Reduce modulo ``var**2 = p``: every ``var`` exponent lands in {0, 1}.

    This is the quotient map onto Q(sqrt p)[other variables]; two
    polynomials agree at ``var = sqrt(p)`` iff their reductions are equal.
    """
    if var not in f.variables:
        return f
    i = f.variables.index(var)
    out: dict = {}
    for exp, c in f.terms.items():
        e = exp[i]
        new = exp[:i] + (e % 2,) + exp[i + 1:]
        out[new] = out.get(new, 0) + c * Fraction(p) ** (e // 2)
    return LaurentPoly(f.variables, out)


class PolyMatrix:
    """Small dense matrix over LaurentPoly, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        self.rows, self.cols = rows, cols
        self.entries = tuple(lp(e) for e in entries)
        if len(self.entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PolyMatrix":
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, [x for r in rows for x in r])

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[LaurentPoly]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[LaurentPoly]]:
        return [self.row(i) for i in range(self.rows)]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = lp(0)
                for t in range(self.cols):
                    a, b = self[i, t], other[t, j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                out.append(acc)
        return PolyMatrix(self.rows, other.cols, out)

    def __mul__(self, scalar) -> "PolyMatrix":
        return self.map(lambda e: e * scalar)

    __rmul__ = __mul__

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, [fn(e) for e in self.entries])

    def substitute(self, assignment) -> "PolyMatrix":
        return self.map(lambda e: e.substitute(assignment))

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and all(
            a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return "PolyMatrix(" + "; ".join(
            ", ".join(repr(e) for e in self.row(i)) for i in range(self.rows)) + ")"


def row_vector(entries: Sequence) -> PolyMatrix:
    return PolyMatrix(1, len(entries), entries)


# Weyl group of the symplectic group acting on X0..Xn

def _weyl_generator(f: LaurentPoly, gen) -> LaurentPoly:
    kind = gen[0]
    n = max((int(v[1:]) for v in f.variables if v.startswith("X")), default=0)
    if kind == "swap":
        _, i, j = gen
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"transposition ({i},{j}) out of range for X1..X{n}")
        return f.substitute({f"X{i}": LaurentPoly.var(f"X{j}"),
                             f"X{j}": LaurentPoly.var(f"X{i}")})
    if kind == "sigma":
        _, i = gen
        if not 1 <= i <= n:
            raise IndexError(f"sigma_{i} out of range for X1..X{n}")
        xi = LaurentPoly.var(f"X{i}")
        return f.substitute({f"X{i}": xi ** -1, "X0": LaurentPoly.var("X0") * xi})
    raise ValueError(f"unknown Weyl generator {gen!r}")


def weyl_action(f: LaurentPoly, element) -> LaurentPoly:
    """Apply a Weyl group element given as one generator or a word of them.

    Generators are ``("swap", i, j)`` exchanging ``Xi``/``Xj`` (i, j >= 1) and
    ``("sigma", i)`` sending ``Xi -> 1/Xi`` and ``X0 -> X0*Xi``.
    Words are applied left to right.
    """
    word = [element] if element and isinstance(element[0], str) else list(element)
    for gen in word:
        f = _weyl_generator(f, gen)
    return f


def weyl_generators(n: int) -> list:
    gens = [("sigma", i) for i in range(1, n + 1)]
    gens += [("swap", i, i + 1) for i in range(1, n)]
    return gens


def is_weyl_invariant(f: LaurentPoly, n: int | None = None) -> bool:
    if n is None:
        n = max((int(v[1:]) for v in f.used_variables() if v.startswith("X")), default=0)
    return all(weyl_action(f, g) == f for g in weyl_generators(n))


# exact sums of roots of unity

@lru_cache(maxsize=None)
def cyclotomic_coeffs(order: int) -> tuple[int, ...]:
    """Coefficients of the order-th cyclotomic polynomial, constant term first."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(sympy.cyclotomic_poly(order, x), x)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


class RootOfUnitySum:
    """Accumulates sum of c * zeta^j for a primitive order-th root zeta.

    Stored in the group ring Q[Z/order]; :meth:`reduced` reduces modulo the
    cyclotomic polynomial to coordinates in the basis 1, zeta, ...,
    zeta^(phi(order)-1).
    """

    def __init__(self, order: int):
        self.order = order
        self.counts = [Fraction(0)] * order

    def add(self, exponent: int, coeff=1) -> None:
        self.counts[exponent % self.order] += coeff

    def reduced(self) -> list[Fraction]:
        phi = cyclotomic_coeffs(self.order)
        deg = len(phi) - 1
        work = list(self.counts)
        for top in range(len(work) - 1, deg - 1, -1):
            c = work[top]
            if c:
                for i, a in enumerate(phi):
                    work[top - deg + i] -= c * a
        return work[:deg]

    def rational_value(self) -> Fraction:
        coords = self.reduced()
        if any(coords[1:]):
            raise ArithmeticError(f"root-of-unity sum is not rational: {coords}")
        return coords[0]

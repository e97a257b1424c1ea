"""Exact arithmetic in the cyclotomic field Q(zeta_M).

Elements are coefficient tuples on 1, z, ..., z^(phi(M)-1), reduced modulo
the M-th cyclotomic polynomial.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from sympy import Poly, cyclotomic_poly, symbols

_x = symbols("x")


@lru_cache(maxsize=None)
def _phi_coeffs(M: int) -> tuple:
    """Coefficients of Phi_M, lowest degree first."""
    p = Poly(cyclotomic_poly(M, _x), _x)
    return tuple(int(c) for c in reversed(p.all_coeffs()))


@lru_cache(maxsize=None)
def _power_table(M: int) -> tuple:
    """Reduced coefficient vectors of z^k for k = 0 .. 2*deg."""
    phi = _phi_coeffs(M)
    d = len(phi) - 1
    table = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(2 * d + 1):
        table.append(tuple(cur))
        # multiply by z: shift, then reduce the z^d term
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for i in range(d):
                nxt[i] -= top * phi[i]
        cur = nxt
    return tuple(table)


@lru_cache(maxsize=None)
def _root_table(M: int) -> tuple:
    """Coefficient vectors of z^k for k = 0 .. M-1."""
    d = len(_phi_coeffs(M)) - 1
    out = []
    cur = [Fraction(0)] * d
    cur[0] = Fraction(1)
    base = Cyc._raw(M, tuple(cur))
    z = Cyc._raw(M, tuple(Fraction(c) for c in _power_table(M)[1]))
    x = base
    for _ in range(M):
        out.append(x.c)
        x = x * z
    return tuple(out)


class Cyc:
    __slots__ = ("M", "c")

    def __init__(self, M: int, value=0):
        self.M = M
        d = len(_phi_coeffs(M)) - 1
        if isinstance(value, Cyc):
            if value.M != M:
                raise ValueError("mixed cyclotomic orders")
            self.c = value.c
        elif isinstance(value, (int, Fraction)):
            c = [Fraction(0)] * d
            c[0] = Fraction(value)
            self.c = tuple(c)
        else:
            vals = tuple(Fraction(v) for v in value)
            if len(vals) != d:
                raise ValueError("wrong coefficient count")
            self.c = vals

    @classmethod
    def _raw(cls, M, coeffs):
        obj = cls.__new__(cls)
        obj.M = M
        obj.c = tuple(coeffs)
        return obj

    @classmethod
    def root(cls, M: int, k: int) -> "Cyc":
        """zeta_M ** k."""
        return cls._raw(M, _root_table(M)[k % M])

    def _coerce(self, other) -> "Cyc":
        if isinstance(other, Cyc):
            if other.M != self.M:
                raise ValueError("mixed cyclotomic orders")
            return other
        return Cyc(self.M, other)

    def __add__(self, other):
        o = self._coerce(other)
        return Cyc._raw(self.M, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc._raw(self.M, tuple(-a for a in self.c))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc._raw(self.M, tuple(a * other for a in self.c))
        o = self._coerce(other)
        d = len(self.c)
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        prod[i + j] += a * b
        table = _power_table(self.M)
        out = [Fraction(0)] * d
        for k, v in enumerate(prod):
            if v:
                row = table[k]
                for i in range(d):
                    if row[i]:
                        out[i] += v * row[i]
        return Cyc._raw(self.M, tuple(out))

    __rmul__ = __mul__

    def conj(self) -> "Cyc":
        roots = _root_table(self.M)
        out = [Fraction(0)] * len(self.c)
        for k, a in enumerate(self.c):
            if a:
                row = roots[(-k) % self.M]
                for i in range(len(out)):
                    if row[i]:
                        out[i] += a * row[i]
        return Cyc._raw(self.M, tuple(out))

    def galois(self, u: int) -> "Cyc":
        """Image under zeta -> zeta^u (u a unit mod M)."""
        roots = _root_table(self.M)
        out = [Fraction(0)] * len(self.c)
        for k, a in enumerate(self.c):
            if a:
                row = roots[(u * k) % self.M]
                for i in range(len(out)):
                    if row[i]:
                        out[i] += a * row[i]
        return Cyc._raw(self.M, tuple(out))

    def inverse(self) -> "Cyc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        from math import gcd
        others = Cyc(self.M, 1)
        for u in range(2, self.M):
            if gcd(u, self.M) == 1:
                others = others * self.galois(u)
        norm = (self * others).c[0]
        return others * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.c[0] == other and not any(self.c[1:])
        if isinstance(other, Cyc):
            return self.M == other.M and self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash((self.M, self.c))

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def is_real(self) -> bool:
        return self == self.conj()

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.c[0]

    def to_complex(self) -> complex:
        import cmath
        z = cmath.exp(2j * cmath.pi / self.M)
        return sum(float(a) * z ** k for k, a in enumerate(self.c))

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.M}, {self.c[0]})"
        return f"Cyc({self.M}, {[str(a) for a in self.c]})"


def root_exponent(x: Cyc) -> int:
    """k with x = zeta_M^k, or raise if x is not an M-th root of unity."""
    table = _root_table(x.M)
    for k in range(x.M):
        if table[k] == x.c:
            return k
    raise ValueError("not a root of unity")


def solve_linear(rows: Sequence[Sequence[Cyc]], M: int) -> list[list[Cyc]]:
    """Basis of the right null space of a matrix over Q(zeta_M)."""
    A = [[Cyc(M, v) for v in r] for r in rows]
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(A)) if not A[i][col].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][col].inverse()
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and not A[i][col].is_zero():
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Cyc(M, 0) for _ in range(ncols)]
        v[fcol] = Cyc(M, 1)
        for i, pc in enumerate(pivots):
            v[pc] = -A[i][fcol]
        basis.append(v)
    return basis


def rank_cyc(rows: Sequence[Sequence[Cyc]], M: int) -> int:
    if not rows:
        return 0
    return len(rows[0]) - len(solve_linear(rows, M))

"""Exact arithmetic in the cyclotomic field Q(zeta_ell).

Elements are stored in the power basis 1, z, ..., z^(phi-1) of
Q[x]/(Phi_ell(x)).  The root of unity ``q`` used throughout the package is
``zeta(ell)``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "CyclotomicError",
    "CyclotomicNumber",
    "cyclotomic_polynomial",
    "euler_phi",
    "check_ell",
    "ell_is_validated",
    "zeta",
    "qpow",
    "qint",
    "qfactorial",
    "qbinom",
]


class CyclotomicError(ValueError):
    """Raised on invalid field operations (zero inverse, mismatched ell)."""


def euler_phi(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # Coefficient lists are lowest degree first; den is monic.
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise CyclotomicError(f"cyclotomic order must be positive, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def check_ell(ell: int) -> int:
    """Validate the order of the root of unity; ell >= 3 is required."""
    if not isinstance(ell, int) or isinstance(ell, bool) or ell < 3:
        raise CyclotomicError(f"ell must be an integer >= 3, got {ell!r}")
    return ell


def ell_is_validated(ell: int) -> bool:
    """Even ell is accepted but its results are flagged as unvalidated."""
    return ell % 2 == 1


@lru_cache(maxsize=None)
def _reduction_table(ell: int) -> tuple[tuple[int, ...], ...]:
    """Row k holds the power-basis coordinates of z^k for 0 <= k < ell."""
    phi_poly = cyclotomic_polynomial(ell)
    deg = len(phi_poly) - 1
    rows: list[tuple[int, ...]] = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(ell):
        rows.append(tuple(cur))
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for j in range(deg):
                nxt[j] -= top * phi_poly[j]
        cur = nxt
    return tuple(rows)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class CyclotomicNumber:
    """Immutable element of Q(zeta_ell) in the power basis."""

    __slots__ = ("ell", "coeffs", "_hash")

    def __init__(self, ell: int, coeffs: Iterable = ()):
        check_ell(ell)
        phi = euler_phi(ell)
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) > phi:
            raise CyclotomicError(
                f"expected at most {phi} coefficients for ell={ell}, got {len(cs)}"
            )
        cs.extend([Fraction(0)] * (phi - len(cs)))
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_int(cls, ell: int, value) -> "CyclotomicNumber":
        return cls(ell, [_as_fraction(value)])

    @classmethod
    def from_exponents(cls, ell: int, terms: dict[int, int] | Iterable[tuple[int, int]]) -> "CyclotomicNumber":
        """Sum of c * z^k over (k, c) pairs; exponents taken mod ell."""
        table = _reduction_table(check_ell(ell))
        phi = euler_phi(ell)
        acc = [0] * phi
        items = terms.items() if isinstance(terms, dict) else terms
        for k, c in items:
            if c:
                row = table[k % ell]
                for j in range(phi):
                    if row[j]:
                        acc[j] += c * row[j]
        return cls(ell, acc)

    # -- basic protocol -------------------------------------------------
    @property
    def phi(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.ell != self.ell:
                raise CyclotomicError(
                    f"mismatched cyclotomic orders {self.ell} and {other.ell}"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CyclotomicNumber.from_int(self.ell, other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, CyclotomicNumber):
            return self.ell == other.ell and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ell, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"({c})*z^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"CyclotomicNumber(ell={self.ell}: {body})"

    # -- ring operations ------------------------------------------------
    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.ell, [-c for c in self.coeffs])

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.ell, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicNumber(self.ell, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        phi = self.phi
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicNumber(self.ell, _reduce(self.ell, prod))

    __rmul__ = __mul__

    def galois(self, j: int) -> "CyclotomicNumber":
        """Image under the automorphism z -> z^j (gcd(j, ell) = 1)."""
        if math.gcd(j, self.ell) != 1:
            raise CyclotomicError(f"z -> z^{j} is not an automorphism for ell={self.ell}")
        table = _reduction_table(self.ell)
        acc = [Fraction(0)] * self.phi
        for k, c in enumerate(self.coeffs):
            if c:
                row = table[(k * j) % self.ell]
                for t in range(self.phi):
                    if row[t]:
                        acc[t] += c * row[t]
        return CyclotomicNumber(self.ell, acc)

    def norm(self) -> Fraction:
        """Field norm to Q: product of all Galois conjugates."""
        out = CyclotomicNumber.from_int(self.ell, 1)
        for j in range(1, self.ell):
            if math.gcd(j, self.ell) == 1:
                out = out * self.galois(j)
        if any(out.coeffs[1:]):
            raise ArithmeticError("norm did not land in Q")
        return out.coeffs[0]

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise CyclotomicError("inverse of zero")
        # a^-1 = (product of the non-trivial conjugates) / N(a)
        co = CyclotomicNumber.from_int(self.ell, 1)
        for j in range(2, self.ell):
            if math.gcd(j, self.ell) == 1:
                co = co * self.galois(j)
        n = (self * co).coeffs[0]
        return CyclotomicNumber(self.ell, [c / n for c in co.coeffs])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int) -> "CyclotomicNumber":
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = CyclotomicNumber.from_int(self.ell, 1)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- display and serialization -------------------------------------
    def to_complex(self) -> complex:
        """Floating-point value under z = exp(2 pi i / ell); display only."""
        z = cmath.exp(2j * math.pi / self.ell)
        return sum(float(c) * z**k for k, c in enumerate(self.coeffs))

    def display_float(self) -> float:
        return round(self.to_complex().real, 12) + 0.0

    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_json(cls, ell: int, data: Sequence[str]) -> "CyclotomicNumber":
        return cls(ell, [Fraction(s) for s in data])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])


def _reduce(ell: int, prod: Sequence[Fraction]) -> list[Fraction]:
    table = _reduction_table(ell)
    phi = euler_phi(ell)
    acc = list(prod[:phi]) + [Fraction(0)] * max(0, phi - len(prod))
    for k in range(phi, len(prod)):
        c = prod[k]
        if c:
            row = table[k % ell]
            for t in range(phi):
                if row[t]:
                    acc[t] += c * row[t]
    return acc


def zeta(ell: int) -> CyclotomicNumber:
    return CyclotomicNumber.from_exponents(ell, {1: 1})


def qpow(ell: int, k: int) -> CyclotomicNumber:
    """q^k with q = zeta_ell."""
    return CyclotomicNumber.from_exponents(ell, {k: 1})


def qint(n: int, d: int, ell: int) -> CyclotomicNumber:
    """Quantum integer [n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})."""
    check_ell(ell)
    if d <= 0:
        raise CyclotomicError(f"d must be positive, got {d}")
    if (2 * d) % ell == 0:
        raise CyclotomicError(f"degenerate quantum integer: q^{d} = q^-{d} at ell={ell}")
    # Geometric expansion avoids the division: sum_{j<|n|} q^{d(|n|-1-2j)}.
    sign = 1 if n >= 0 else -1
    terms: dict[int, int] = {}
    for j in range(abs(n)):
        k = (d * (abs(n) - 1 - 2 * j)) % ell
        terms[k] = terms.get(k, 0) + sign
    return CyclotomicNumber.from_exponents(ell, terms)


def qfactorial(n: int, d: int, ell: int) -> CyclotomicNumber:
    """[n]! = [1][2]...[n] at q^d, for n >= 0."""
    if n < 0:
        raise CyclotomicError("quantum factorial of a negative integer")
    out = CyclotomicNumber.from_int(ell, 1)
    for k in range(1, n + 1):
        out = out * qint(k, d, ell)
    return out


def qbinom(n: int, k: int, d: int, ell: int) -> CyclotomicNumber:
    """Gaussian binomial [n choose k] at q^d via the q-Pascal recursion.

    The recursion is division-free, so it stays valid when [n]! vanishes.
    """
    if k < 0 or n < 0 or k > n:
        return CyclotomicNumber.from_int(ell, 0)
    # [n, k] = q^{dk} [n-1, k] + q^{-d(n-k)} [n-1, k-1]
    row = [CyclotomicNumber.from_int(ell, 1)]
    for m in range(1, n + 1):
        nxt = []
        for j in range(m + 1):
            acc = CyclotomicNumber.from_int(ell, 0)
            if j <= m - 1:
                acc = acc + qpow(ell, d * j) * row[j]
            if j - 1 >= 0:
                acc = acc + qpow(ell, -d * (m - j)) * row[j - 1]
            nxt.append(acc)
        row = nxt
    return row[k]

"""Exact linear combinations of roots of unity.

Character sums over class groups and Hecke-eigenvalue accumulations are
carried as formal Q-linear combinations of e(theta) = exp(2*pi*i*theta)
with theta rational.  Zero-testing and extraction of rational values go
through reduction modulo the cyclotomic polynomial of the common order,
so every comparison made here is exact; floats appear only in
``to_complex`` for reporting.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import lcm


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending degree."""
    if n == 1:
        return (-1, 1)
    # (x^n - 1) / prod_{d | n, d < n} Phi_d, all divisions exact
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_div_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        coeff = num[k + len(den) - 1]
        assert coeff % den[-1] == 0
        q = coeff // den[-1]
        out[k] = q
        for i, d in enumerate(den):
            num[k + i] -= q * d
    assert not any(num)
    return out


class Cyc:
    """A formal sum  sum_theta  c_theta * e(theta),  theta in Q/Z."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Fraction, Fraction] | None = None):
        self.terms: dict[Fraction, Fraction] = {}
        if terms:
            for angle, coeff in terms.items():
                if coeff:
                    self.terms[angle % 1] = self.terms.get(angle % 1, Fraction(0)) + coeff
            self.terms = {a: c for a, c in self.terms.items() if c}

    @classmethod
    def zero(cls) -> "Cyc":
        return cls()

    @classmethod
    def rational(cls, q) -> "Cyc":
        q = Fraction(q)
        return cls({Fraction(0): q}) if q else cls()

    @classmethod
    def root_of_unity(cls, angle) -> "Cyc":
        return cls({Fraction(angle) % 1: Fraction(1)})

    def __add__(self, other: "Cyc") -> "Cyc":
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, Fraction(0)) + c
        return Cyc(out)

    def __sub__(self, other: "Cyc") -> "Cyc":
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, Fraction(0)) - c
        return Cyc(out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc({a: c * other for a, c in self.terms.items()})
        out: dict[Fraction, Fraction] = {}
        for a1, c1 in self.terms.items():
            for a2, c2 in other.terms.items():
                a = (a1 + a2) % 1
                out[a] = out.get(a, Fraction(0)) + c1 * c2
        return Cyc(out)

    __rmul__ = __mul__

    def __neg__(self) -> "Cyc":
        return Cyc({a: -c for a, c in self.terms.items()})

    def conjugate(self) -> "Cyc":
        return Cyc({(-a) % 1: c for a, c in self.terms.items()})

    def order(self) -> int:
        """lcm of the angle denominators (1 for rational values)."""
        n = 1
        for a in self.terms:
            n = lcm(n, a.denominator)
        return n

    def canonical(self) -> tuple[int, tuple[Fraction, ...]]:
        """(N, coefficients over the basis 1, z, ..., z^(phi(N)-1)) with
        z = e(1/N), after reduction mod Phi_N."""
        n = self.order()
        vec = [Fraction(0)] * max(n, 1)
        for a, c in self.terms.items():
            vec[int(a * n) % n] += c
        phi = list(cyclotomic_polynomial(n))
        deg = len(phi) - 1
        # reduce mod Phi_n (monic): ascending synthetic division
        for k in range(len(vec) - 1, deg - 1, -1):
            q = vec[k]
            if q:
                for i in range(len(phi)):
                    vec[k - deg + i] -= q * phi[i]
        return n, tuple(vec[:deg])

    def is_zero(self) -> bool:
        _, vec = self.canonical()
        return not any(vec)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(other)
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.canonical())

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction if it is rational, else None.

        In the canonical basis 1, z, ..., z^(phi(N)-1) of Q(zeta_N) the
        value is rational exactly when the nonconstant coordinates vanish.
        """
        _, vec = self.canonical()
        if any(vec[1:]):
            return None
        return vec[0] if vec else Fraction(0)

    def abs_squared(self) -> "Cyc":
        return self * self.conjugate()

    def to_complex(self) -> complex:
        return sum(
            (complex(c) * cmath.exp(2j * cmath.pi * float(a)) for a, c in self.terms.items()),
            0j,
        )

    def abs_float(self) -> float:
        """|z| with the squared modulus formed exactly first."""
        sq = self.abs_squared()
        r = sq.as_rational()
        if r is not None:
            if r < 0:  # roundoff impossible: exact arithmetic
                raise ArithmeticError("negative exact |z|^2")
            return float(r) ** 0.5
        val = sq.to_complex()
        return max(val.real, 0.0) ** 0.5

    def __repr__(self):
        if not self.terms:
            return "Cyc(0)"
        bits = " + ".join(f"{c}*e({a})" for a, c in sorted(self.terms.items()))
        return f"Cyc({bits})"

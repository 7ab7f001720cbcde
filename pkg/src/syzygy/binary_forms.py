"""Binary quartic, quadratic and sextic forms with exact invariant theory.

A degree-d homogeneous form is stored as its coefficient tuple
(c0, ..., cd) for c0*x^d + c1*x^(d-1)*y + ... + cd*y^d.  Quartics carry
integer polynomial coefficients p0..p4; the classical "Mordell"
coefficients (a, b, c, d, e) = (p0, p1/4, p2/6, p3/4, p4) are rational.
Covariants (Hessian, Jacobian sextic) therefore live over the rationals
and are exact Fractions throughout.

The normalization used here is the one under which the classical
identity

    T^2 = -4 H^3 + I * H * F^2 - J * F^3

holds coefficient-by-coefficient: H is the closed form
(ac - b^2, 2(ad - bc), ae + 2bd - 3c^2, 2(be - cd), ce - d^2) and
T = -(1/8) (F_x H_y - F_y H_x).  ``verify_syzygy`` is the arbiter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

Coeff = int | Fraction

# --- generic homogeneous-form helpers -----------------------------------


def _norm(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def form_eval(coeffs: Sequence[Coeff], m1, m2):
    """Evaluate sum c_i x^(d-i) y^i at (m1, m2)."""
    d = len(coeffs) - 1
    total = 0
    for i, c in enumerate(coeffs):
        if c:
            total += c * m1 ** (d - i) * m2**i
    return _norm(total)


def form_mul(a: Sequence[Coeff], b: Sequence[Coeff]) -> list[Coeff]:
    out: list[Coeff] = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def form_add(a: Sequence[Coeff], b: Sequence[Coeff]) -> list[Coeff]:
    assert len(a) == len(b)
    return [x + y for x, y in zip(a, b)]


def form_scale(a: Sequence[Coeff], s: Coeff) -> list[Coeff]:
    return [s * x for x in a]


def form_dx(coeffs: Sequence[Coeff]) -> list[Coeff]:
    """d/dx of a homogeneous form (degree drops by one)."""
    d = len(coeffs) - 1
    return [coeffs[i] * (d - i) for i in range(d)]


def form_dy(coeffs: Sequence[Coeff]) -> list[Coeff]:
    d = len(coeffs) - 1
    return [coeffs[i + 1] * (i + 1) for i in range(d)]


def form_substitute(coeffs: Sequence[Coeff], m11, m12, m21, m22) -> list[Coeff]:
    """Coefficients of F(m11*x + m12*y, m21*x + m22*y)."""
    d = len(coeffs) - 1
    xs = [1]  # (m11 x + m12 y)^k as coefficient lists
    out = [0] * (d + 1)
    # powers of the two linear forms
    lin1 = [m11, m12]
    lin2 = [m21, m22]
    pow1 = [[1]]
    pow2 = [[1]]
    for _ in range(d):
        pow1.append(form_mul(pow1[-1], lin1))
        pow2.append(form_mul(pow2[-1], lin2))
    for i, c in enumerate(coeffs):
        if not c:
            continue
        term = form_mul(pow1[d - i], pow2[i])
        for k, t in enumerate(term):
            out[k] += c * t
    return [_norm(v) for v in out]


def form_content_den(coeffs: Sequence[Coeff]) -> int:
    """lcm of coefficient denominators (1 for integer forms)."""
    den = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    return den


def form_int_scaled(coeffs: Sequence[Coeff]) -> tuple[list[int], int]:
    """(integer coefficients, denominator) with coeffs = ints/den."""
    den = form_content_den(coeffs)
    return [int(c * den) for c in coeffs], den


# --- domain types --------------------------------------------------------


@dataclass(frozen=True)
class UnimodularMatrix:
    """Element of SL2(Z); determinant is checked at construction."""

    m11: int
    m12: int
    m21: int
    m22: int

    def __post_init__(self):
        if self.m11 * self.m22 - self.m12 * self.m21 != 1:
            raise ValueError("matrix must have determinant exactly 1")

    def __mul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.m22, -self.m12, -self.m21, self.m11)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.m11, self.m12, self.m21, self.m22)


IDENTITY = UnimodularMatrix(1, 0, 0, 1)
NEG_IDENTITY = UnimodularMatrix(-1, 0, 0, -1)
S_GEN = UnimodularMatrix(0, 1, -1, 0)  # (x, y) -> (y, -x)
T_GEN = UnimodularMatrix(1, 1, 0, 1)  # (x, y) -> (x + y, y)


@dataclass(frozen=True)
class SexticForm:
    """Binary sextic with rational coefficients (the Jacobian covariant)."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != 7:
            raise ValueError("sextic needs 7 coefficients")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def evaluate(self, m1, m2):
        return form_eval(self.coeffs, m1, m2)


@dataclass(frozen=True)
class QuarticForm:
    """Binary quartic p0 x^4 + p1 x^3 y + p2 x^2 y^2 + p3 x y^3 + p4 y^4.

    Integer coefficients for the forms being classified; rational
    coefficients are tolerated so covariants (the Hessian) can live in
    the same type.
    """

    coeffs: tuple[Coeff, ...]

    def __post_init__(self):
        if len(self.coeffs) != 5:
            raise ValueError("quartic needs 5 coefficients")
        normalized = tuple(_norm(Fraction(c) if not isinstance(c, int) else c) for c in self.coeffs)
        # the zero tuple is allowed so degenerate covariants (e.g. the
        # Hessian of x^4) stay representable; classification operations
        # require a nonzero form and check is_zero themselves
        object.__setattr__(self, "coeffs", normalized)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # Mordell coefficients
    @property
    def mordell(self) -> tuple[Fraction, Fraction, Fraction, Fraction, Fraction]:
        p0, p1, p2, p3, p4 = self.coeffs
        return (
            Fraction(p0),
            Fraction(p1, 4),
            Fraction(p2, 6),
            Fraction(p3, 4),
            Fraction(p4),
        )

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def evaluate(self, m1, m2):
        return form_eval(self.coeffs, m1, m2)

    def height(self) -> Coeff:
        return sum(abs(c) for c in self.coeffs)

    def neg(self) -> "QuarticForm":
        return QuarticForm(tuple(-c for c in self.coeffs))

    @classmethod
    def from_text(cls, text: str) -> "QuarticForm":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise ValueError(f"expected 5 comma-separated coefficients, got {text!r}")
        from .exact_arith import parse_rational

        return cls(tuple(_norm(parse_rational(p)) for p in parts))

    def to_text(self) -> str:
        from .exact_arith import format_rational

        return ",".join(format_rational(Fraction(c)) for c in self.coeffs)

    def pretty(self) -> str:
        return pretty_form(self.coeffs, ("x", "y"))

    def __str__(self) -> str:
        return self.pretty()


@dataclass(frozen=True)
class QuadForm:
    """Integral binary quadratic qa u^2 + qb uv + qc v^2."""

    qa: int
    qb: int
    qc: int

    @property
    def disc(self) -> int:
        return self.qb * self.qb - 4 * self.qa * self.qc

    @property
    def is_positive_definite(self) -> bool:
        return self.disc < 0 and self.qa > 0

    def evaluate(self, u, v):
        return self.qa * u * u + self.qb * u * v + self.qc * v * v

    def content(self) -> int:
        return gcd(gcd(abs(self.qa), abs(self.qb)), abs(self.qc))

    def coeff_tuple(self) -> tuple[int, int, int]:
        return (self.qa, self.qb, self.qc)

    @classmethod
    def from_text(cls, text: str) -> "QuadForm":
        parts = [int(p.strip()) for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 3 comma-separated integers, got {text!r}")
        return cls(*parts)

    def to_text(self) -> str:
        return f"{self.qa},{self.qb},{self.qc}"

    def pretty(self) -> str:
        return pretty_form((self.qa, self.qb, self.qc), ("u", "v"))

    def __str__(self) -> str:
        return self.pretty()


def pretty_form(coeffs: Sequence[Coeff], names: tuple[str, str]) -> str:
    """Human-readable polynomial like "x^4 - 6*x^2*y^2 + y^4"."""
    d = len(coeffs) - 1
    x, y = names
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        ex, ey = d - i, i
        mono = "*".join(
            part
            for part in (
                (f"{x}^{ex}" if ex > 1 else x if ex == 1 else ""),
                (f"{y}^{ey}" if ey > 1 else y if ey == 1 else ""),
            )
            if part
        )
        cpart = str(c)
        if mono:
            if c == 1:
                cpart = ""
            elif c == -1:
                cpart = "-"
            else:
                cpart = f"{c}*"
        terms.append(f"{cpart}{mono}" if mono else cpart)
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


# --- invariants and covariants -------------------------------------------


def invariant_I(F: QuarticForm) -> Fraction:
    """I = ae - 4bd + 3c^2 in Mordell coefficients."""
    a, b, c, d, e = F.mordell
    return a * e - 4 * b * d + 3 * c * c


def invariant_J(F: QuarticForm) -> Fraction:
    """J = ace + 2bcd - b^2 e - d^2 a - c^3."""
    a, b, c, d, e = F.mordell
    return a * c * e + 2 * b * c * d - b * b * e - d * d * a - c**3


def discriminant(F: QuarticForm) -> Fraction:
    """Delta(F) = I^3 - 27 J^2; nonzero exactly for squarefree quartics."""
    I, J = invariant_I(F), invariant_J(F)
    return I**3 - 27 * J * J


def hessian(F: QuarticForm) -> QuarticForm:
    """The quartic covariant H_F, in the syzygy normalization."""
    a, b, c, d, e = F.mordell
    return QuarticForm(
        (
            a * c - b * b,
            2 * (a * d - b * c),
            a * e + 2 * b * d - 3 * c * c,
            2 * (b * e - c * d),
            c * e - d * d,
        )
    )


def jacobian_covariant(F: QuarticForm) -> SexticForm:
    """T_F = -(1/8) * (F_x H_y - F_y H_x), a binary sextic."""
    H = hessian(F)
    fx, fy = form_dx(F.coeffs), form_dy(F.coeffs)
    hx, hy = form_dx(H.coeffs), form_dy(H.coeffs)
    det = [p - q for p, q in zip(form_mul(fx, hy), form_mul(fy, hx))]
    return SexticForm(tuple(Fraction(-v, 8) if isinstance(v, int) else -v / 8 for v in det))


def verify_syzygy(F: QuarticForm) -> bool:
    """Check T^2 = -4 H^3 + I H F^2 - J F^3 as exact degree-12 polynomials."""
    I, J = invariant_I(F), invariant_J(F)
    H = hessian(F)
    T = jacobian_covariant(F)
    lhs = form_mul(T.coeffs, T.coeffs)
    H2 = form_mul(H.coeffs, H.coeffs)
    H3 = form_mul(H2, H.coeffs)
    F2 = form_mul(F.coeffs, F.coeffs)
    F3 = form_mul(F2, F.coeffs)
    HFF = form_mul(H.coeffs, F2)
    rhs = [
        -4 * h3 + I * hff - J * f3
        for h3, hff, f3 in zip(H3, HFF, F3)
    ]
    return all(Fraction(l) == Fraction(r) for l, r in zip(lhs, rhs))


def sl2_act(M: UnimodularMatrix, F: QuarticForm) -> QuarticForm:
    """Substituted form F(m11 x + m12 y, m21 x + m22 y)."""
    return QuarticForm(tuple(form_substitute(F.coeffs, *M.entries())))


def sl2_act_quad(M: UnimodularMatrix, Q: QuadForm) -> QuadForm:
    a, b, c = form_substitute((Q.qa, Q.qb, Q.qc), *M.entries())
    return QuadForm(a, b, c)


def evaluate(F: QuarticForm, m1, m2):
    return F.evaluate(m1, m2)


def resultant(F, G) -> Fraction:
    """Homogeneous resultant via the Sylvester determinant.

    Accepts quartics, quadratics, or raw coefficient sequences; forms
    sharing a factor give 0 (a value, not an error).
    """
    fc = _coeff_seq(F)
    gc = _coeff_seq(G)
    m, n = len(fc) - 1, len(gc) - 1
    size = m + n
    rows: list[list[Fraction]] = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(fc):
            row[i + j] = Fraction(c)
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(gc):
            row[i + j] = Fraction(c)
        rows.append(row)
    return _det_fraction(rows)


def _coeff_seq(F) -> Sequence[Coeff]:
    if isinstance(F, QuarticForm):
        return F.coeffs
    if isinstance(F, QuadForm):
        return (F.qa, F.qb, F.qc)
    if isinstance(F, SexticForm):
        return F.coeffs
    return tuple(F)


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if rows[r][col]:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col]:
                factor = rows[r][col] * inv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def is_squarefree(F: QuarticForm) -> bool:
    """True iff F has no repeated projective root over Qbar.

    y-divisibility is read off the leading coefficients; the x-side is
    the usual gcd(f, f') test on the dehomogenization.
    """
    coeffs = list(F.coeffs)
    k = 0
    while k < 5 and coeffs[k] == 0:
        k += 1
    # k = multiplicity of the root (x : y) = (0 : 1)? No: F(x, 0) = p0 x^4,
    # so trailing structure governs y | F: F = y^t * (...), t = leading zeros.
    if k >= 2:
        return False
    poly = [Fraction(c) for c in coeffs[k:]]  # F(x, 1) up to the y^k factor
    deriv = [poly[i] * (len(poly) - 1 - i) for i in range(len(poly) - 1)]
    return _poly_gcd_degree(poly, deriv) == 0


def _poly_gcd_degree(a: list[Fraction], b: list[Fraction]) -> int:
    """Degree of gcd of two univariate rational polys (coeffs high-to-low)."""
    a = _trim(a)
    b = _trim(b)
    while b:
        a, b = b, _poly_mod(a, b)
    return len(a) - 1 if a else -1


def _trim(a: list[Fraction]) -> list[Fraction]:
    i = 0
    while i < len(a) and a[i] == 0:
        i += 1
    return a[i:]


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        if a[0] == 0:
            a.pop(0)
            continue
        factor = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= factor * b[i]
        a.pop(0)
    return _trim(a)

"""Factorization over Z, quartic Galois groups, quadratic subfields of
splitting fields, and the three surface classifiers.

The classifier chain runs: factor the binary form into irreducibles;
compute, for each irreducible factor, the set of fundamental
discriminants D with Q(sqrt(D)) inside its splitting field (resolvent
cubic case analysis for quartics, discriminant kernels below that); then

  * the log-power exponent of a (form, quadratic form) pair is the
    number of irreducible factors whose splitting field contains K_Q,
  * a surface datum (A, B, Q) is disassociated when disc(K_Q) appears in
    no class of quartics with invariants (-4A, -4B),
  * the Picard rank of the desingularized surface is 3, 4 or 5 according
    to the number of roots of z^3 - A*Disc(Q)*z + B*Disc(Q)^(3/2) lying
    in K_Q (0, 1 or 3), found exactly by rational root searches on the
    two real-coordinate cubics of z = u + v*sqrt(Disc).

Polynomial factorization over Z is delegated to sympy behind this
module's interface; everything layered on top of it is checked by
multiply-back and certificate tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import sympy

from .binary_forms import QuadForm, QuarticForm, is_squarefree
from .class_group import ClassGroupTable, Character, prime_discriminants
from .exact_arith import squarefree_part
from .quartic_classes import ClassSet

_X = sympy.Symbol("x")


@dataclass(frozen=True)
class IntPolynomial:
    """Univariate integer polynomial, descending coefficients, deg <= 6."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        i = 0
        while i < len(c) - 1 and c[i] == 0:
            i += 1
        c = c[i:]
        if not c or (len(c) == 1 and c[0] == 0):
            raise ValueError("zero polynomial")
        if len(c) - 1 > 6:
            raise ValueError("degree must be <= 6")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, x):
        out = 0
        for c in self.coeffs:
            out = out * x + c
        return out

    def to_sympy(self):
        return sympy.Poly(self.coeffs, _X, domain=sympy.ZZ)

    def pretty(self) -> str:
        return str(self.to_sympy().as_expr())


def factor_over_Z(P: IntPolynomial) -> tuple[int, list[IntPolynomial]]:
    """(content, irreducible factors with multiplicity), content * prod = P."""
    content, factors = P.to_sympy().factor_list()
    out: list[IntPolynomial] = []
    for poly, mult in factors:
        coeffs = tuple(int(c) for c in poly.all_coeffs())
        out.extend([IntPolynomial(coeffs)] * mult)
    out.sort(key=lambda q: (q.degree, q.coeffs))
    return int(content), out


def _poly_from_fractions(coeffs: list[Fraction]) -> IntPolynomial:
    """Clear denominators to a primitive integer polynomial."""
    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    if g > 1:
        ints = [c // g for c in ints]
    return IntPolynomial(tuple(ints))


def rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """All rational roots of a polynomial with rational coefficients."""
    P = _poly_from_fractions(coeffs)
    _, factors = factor_over_Z(P)
    roots = []
    for f in factors:
        if f.degree == 1:
            a, b = f.coeffs
            roots.append(Fraction(-b, a))
    return sorted(set(roots))


def square_kernel(q) -> int:
    """Squarefree integer s with q = s * (rational square); q != 0."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("kernel of zero")
    return squarefree_part(q.numerator * q.denominator)[0]


def fundamental_discriminant(kernel: int) -> int:
    """The discriminant of Q(sqrt(kernel)) for squarefree kernel != 1."""
    if kernel == 1:
        raise ValueError("trivial kernel has no quadratic field")
    return kernel if kernel % 4 == 1 else 4 * kernel


def field_discriminant_of_quad(Q: QuadForm) -> int:
    """Fundamental discriminant of K_Q = Q(sqrt(disc Q))."""
    return fundamental_discriminant(square_kernel(Q.disc))


# --- binary-form factorization ---------------------------------------------


def factor_binary_form(F: QuarticForm) -> list[tuple[int, ...]]:
    """Irreducible factors (with multiplicity) of the binary form, as
    descending coefficient tuples of their own degree; the factor y is
    returned as (1, 0) read in the variable y.

    A factor tuple (c0, ..., cd) stands for c0 x^d + ... + cd y^d.
    """
    coeffs = list(F.coeffs)
    if not all(isinstance(c, int) for c in coeffs):
        raise ValueError("factorization requires an integral form")
    k = 0
    while coeffs[k] == 0:
        k += 1
    out = [(1, 0)] * k  # y-factors
    poly = IntPolynomial(tuple(coeffs[k:]))
    _, factors = factor_over_Z(poly)
    for f in factors:
        out.append(f.coeffs)
    return out


# --- quartic Galois groups ---------------------------------------------------


def poly_discriminant(coeffs: list[Fraction]) -> Fraction:
    """Discriminant of a univariate polynomial via the Sylvester resultant."""
    from .binary_forms import _det_fraction

    f = [Fraction(c) for c in coeffs]
    d = len(f) - 1
    deriv = [f[i] * (d - i) for i in range(d)]
    m, n = d, d - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(f):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(deriv):
            row[i + j] = c
        rows.append(row)
    res = _det_fraction(rows)
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * res / f[0]


def _resolvent_cubic(b: Fraction, c: Fraction, d: Fraction, e: Fraction) -> list[Fraction]:
    """Resolvent with roots x1x2 + x3x4 etc. of x^4 + b x^3 + c x^2 + d x + e."""
    return [
        Fraction(1),
        -c,
        b * d - 4 * e,
        -(b * b * e - 4 * c * e + d * d),
    ]


def _monic_quartic(P: IntPolynomial) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    a0 = Fraction(P.coeffs[0])
    cs = [Fraction(c) / a0 for c in P.coeffs]
    return cs[1], cs[2], cs[3], cs[4]


def quartic_galois_group(P: IntPolynomial) -> str:
    """Galois tag of an irreducible quartic: S4, A4, D4, C4 or V4."""
    if P.degree != 4:
        raise ValueError("quartic required")
    _, factors = factor_over_Z(P)
    if len(factors) != 1:
        raise ValueError("polynomial is reducible over Q")
    b, c, d, e = _monic_quartic(P)
    disc = poly_discriminant([Fraction(x) for x in P.coeffs])
    res = _resolvent_cubic(b, c, d, e)
    roots = rational_roots(res)
    disc_square = square_kernel(disc) == 1
    if not roots:
        return "A4" if disc_square else "S4"
    if len(roots) == 3:
        return "V4"
    theta = roots[0]
    z = b * b - 4 * c + 4 * theta
    w = theta * theta - 4 * e
    g = z if z != 0 else w
    assert g != 0, "z and w cannot both vanish for a squarefree quartic"
    return "C4" if square_kernel(g * disc) == 1 else "D4"


@dataclass(frozen=True)
class SplittingFieldProfile:
    galois_tag: str
    quadratic_subfield_discriminants: tuple[int, ...]


_TAG_DEGREE = {
    "S4": 24,
    "A4": 12,
    "D4": 8,
    "C4": 4,
    "V4": 4,
    "S3": 6,
    "C3": 3,
    "C2": 2,
    "C1": 1,
}


def _subfield_kernels_irreducible(coeffs: tuple[int, ...]) -> list[int]:
    """Square kernels D (squarefree, != 1) with sqrt(D) in the splitting
    field of an irreducible polynomial of degree <= 4.

    Each kernel comes with an implicit certificate: it is the kernel of
    an explicit rational whose square root lies in the field (the
    polynomial discriminant, or a resolvent quantity z = (x1+x2-x3-x4)^2
    or w = (x1x2 - x3x4)^2 for quartics).
    """
    P = IntPolynomial(coeffs)
    d = P.degree
    if d == 1:
        return []
    fc = [Fraction(c) for c in P.coeffs]
    disc = poly_discriminant(fc)
    if d == 2:
        return [square_kernel(disc)]
    if d == 3:
        k = square_kernel(disc)
        return [] if k == 1 else [k]
    # irreducible quartic
    tag = quartic_galois_group(P)
    kd = square_kernel(disc)
    if tag == "A4":
        return []
    if tag in ("S4", "C4"):
        return [kd]
    b, c, dd, e = _monic_quartic(P)
    res = _resolvent_cubic(b, c, dd, e)
    roots = rational_roots(res)
    if tag == "D4":
        theta = roots[0]
        z = b * b - 4 * c + 4 * theta
        w = theta * theta - 4 * e
        g = z if z != 0 else w
        kg = square_kernel(g)
        span = {kg, kd, square_kernel(Fraction(kg) * kd)}
        span.discard(1)
        assert len(span) == 3, "D4 field must have three quadratic subfields"
        return sorted(span)
    assert tag == "V4"
    kernels = set()
    for theta in roots:
        z = b * b - 4 * c + 4 * theta
        if z != 0:
            k = square_kernel(z)
            assert k != 1, "resolvent square for an irreducible quartic"
            kernels.add(k)
    span = set(kernels)
    for k1 in kernels:
        for k2 in kernels:
            if k1 != k2:
                span.add(square_kernel(Fraction(k1) * k2))
    span.discard(1)
    assert len(span) == 3, "V4 field must have three quadratic subfields"
    return sorted(span)


def _kernel_span(kernels: set[int]) -> set[int]:
    """Closure of a set of square kernels under products (mod squares)."""
    span = {1}
    for k in kernels:
        span |= {square_kernel(Fraction(k) * s) for s in span}
    span.discard(1)
    return span


def quadratic_subfields(F) -> list[int]:
    """Fundamental discriminants D with Q(sqrt(D)) inside the splitting
    field of F (a QuarticForm or IntPolynomial), for squarefree F.

    Reducible inputs combine the subfields of the factors and the square
    kernels of their pairwise products; irreducible quartics go through
    the resolvent-cubic case analysis.
    """
    if isinstance(F, QuarticForm):
        if not is_squarefree(F):
            raise ValueError("form must be squarefree")
        factors = factor_binary_form(F)
    else:
        P = F if isinstance(F, IntPolynomial) else IntPolynomial(tuple(F))
        _, factors_p = factor_over_Z(P)
        if len(set(factors_p)) != len(factors_p):
            raise ValueError("polynomial must be squarefree")
        factors = [f.coeffs for f in factors_p]
    kernels: set[int] = set()
    for fc in factors:
        if len(fc) - 1 > 4:
            raise NotImplementedError("irreducible factors of degree > 4")
        kernels.update(_subfield_kernels_irreducible(fc))
    span = _kernel_span(kernels)
    return sorted((fundamental_discriminant(k) for k in span), key=abs)


def quadratic_subfields_of_factor(fc: tuple[int, ...]) -> list[int]:
    """Fundamental discriminants inside the splitting field of one
    irreducible factor."""
    return sorted(
        (fundamental_discriminant(k) for k in _subfield_kernels_irreducible(fc)),
        key=abs,
    )


# --- classifiers -------------------------------------------------------------


def beta_exponent(F: QuarticForm, Q: QuadForm) -> int:
    """Number of irreducible factors of F whose splitting field contains
    K_Q; the log-power exponent of the correlation sum for (F, Q)."""
    if not Q.is_positive_definite:
        raise ValueError("Q must be positive definite")
    if not is_squarefree(F):
        raise ValueError("F must be squarefree")
    dK = field_discriminant_of_quad(Q)
    beta = 0
    for fc in factor_binary_form(F):
        if len(fc) - 1 < 2:
            continue  # linear factors have trivial splitting field
        if dK in quadratic_subfields_of_factor(fc):
            beta += 1
    return beta


def is_disassociated(A, B, Q: QuadForm, classes: ClassSet) -> tuple[bool, dict]:
    """True iff K_Q lies in no splitting field over the class set; the
    report carries the per-class subfield lists and beta exponents."""
    A, B = Fraction(A), Fraction(B)
    if classes.target_I != -4 * A or classes.target_J != -4 * B:
        raise ValueError("class set does not match (A, B)")
    dK = field_discriminant_of_quad(Q)
    report = {}
    verdict = True
    for F in classes.representatives:
        subs = quadratic_subfields(F)
        contained = dK in subs
        report[F.to_text()] = {
            "subfield_discriminants": subs,
            "contains_K_Q": contained,
            "beta": beta_exponent(F, Q),
        }
        if contained:
            verdict = False
    return verdict, report


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    from .exact_arith import int_sqrt

    return int_sqrt(q.numerator)[1] and int_sqrt(q.denominator)[1]


def picard_rank(A, B, Q: QuadForm) -> int:
    """Rank (3, 4 or 5) of the rational Picard group of the desingularized
    surface: the number of roots of z^3 - A D z + B D sqrt(D) in K_Q
    (D = disc Q) decides the case.

    Roots u + v sqrt(D) satisfy u (u^2 + 3 v^2 D - A D) = 0, so either
    u = 0 and v^3 - A v + B = 0, or 8 v^3 - 2 A v - B = 0 with
    u^2 = D (A - 3 v^2) a positive rational square.
    """
    A, B = Fraction(A), Fraction(B)
    if 4 * A**3 - 27 * B**2 == 0:
        raise ValueError("degenerate surface")
    D = Q.disc
    if D >= 0:
        raise ValueError("Q must have negative discriminant")
    roots = 0
    for v in rational_roots([Fraction(1), Fraction(0), -A, B]):
        roots += 1
    for v in rational_roots([Fraction(8), Fraction(0), -2 * A, -B]):
        usq = D * (A - 3 * v * v)
        if usq > 0 and _is_rational_square(usq):
            roots += 2
    if roots not in (0, 1, 3):
        raise AssertionError(f"separable cubic cannot have {roots} roots in K_Q")
    return {0: 3, 1: 4, 3: 5}[roots]


# --- genus field and the cuspidality check -----------------------------------


def genus_field(disc: int) -> list[int]:
    """Prime-discriminant factorization of a fundamental discriminant;
    the genus field is Q(sqrt(q) : q in the list)."""
    return prime_discriminants(disc)


@dataclass(frozen=True)
class CuspidalityReport:
    verdict: str  # cuspidal | noncuspidal | undecided
    savings: str  # strong | log-half | none | undecided
    reason: str


def genus_cuspidality_check(
    disc: int, character: Character, profile: SplittingFieldProfile,
    table: ClassGroupTable | None = None,
) -> CuspidalityReport:
    """Decide, at genus-field precision, whether the induced object
    attached to a class-group character keeps its savings over the
    splitting field described by the profile.

    F = Q(sqrt(disc)); K the splitting field.  F not inside K certifies
    the cuspidal branch (strong logarithmic savings).  When F lies in K,
    the lower-bound regime is entered exactly when the kernel field of
    the squared character lands inside K; that is decidable at genus
    precision when the squared character is a genus character, and by
    degree obstructions otherwise.  Anything else is left undecided.
    """
    if character.order <= 2:
        return CuspidalityReport(
            "noncuspidal", "none", "character of order <= 2 induces an Eisenstein object"
        )
    subs = set(profile.quadratic_subfield_discriminants)
    if disc not in subs:
        return CuspidalityReport("cuspidal", "strong", "F is not contained in K")
    ord_sq = character.order // gcd(character.order, 2)
    if ord_sq == 2:
        if table is None:
            table = ClassGroupTable(disc)
        pair = _matching_genus_pair(character, table)
        q1 = pair.q1 if abs(pair.q1) > 1 else pair.q2
        q2 = disc // q1
        inside = fundamental_discriminant(square_kernel(q1)) in subs or (
            abs(q2) > 1 and fundamental_discriminant(square_kernel(q2)) in subs
        )
        if inside:
            return CuspidalityReport(
                "noncuspidal", "none", "kernel field of the squared character lies in K"
            )
        return CuspidalityReport(
            "noncuspidal", "log-half", "squared character survives restriction to K"
        )
    deg_k = _TAG_DEGREE.get(profile.galois_tag)
    if deg_k is not None and (deg_k < 2 * ord_sq or deg_k % (2 * ord_sq)):
        return CuspidalityReport(
            "noncuspidal",
            "log-half",
            "kernel field degree 2*ord exceeds or does not divide [K:Q]",
        )
    return CuspidalityReport("undecided", "undecided", "beyond genus-field precision")


def _matching_genus_pair(character: Character, table: ClassGroupTable):
    """The genus pair realizing the *square* of the given character."""
    from .class_group import genus_character_value, genus_pairs

    for pair in genus_pairs(table.disc):
        if all(
            genus_character_value(pair, table, i)
            == (1 if (2 * character.angle(i)) % 1 == 0 else -1)
            for i in range(table.h)
        ):
            return pair
    raise ValueError("squared character does not match any genus character")


# --- local root counts --------------------------------------------------------


_SCAN_LIMIT = 10**4


def local_root_count(P: IntPolynomial, p: int) -> int:
    """rho(p) = #{a mod p : P(a) = 0 mod p}, exactly."""
    red = [c % p for c in P.coeffs]
    i = 0
    while i < len(red) and red[i] == 0:
        i += 1
    red = red[i:]
    if not red:
        return p  # the zero polynomial mod p
    if len(red) == 1:
        return 0
    if p <= _SCAN_LIMIT:
        return sum(1 for a in range(p) if P.evaluate(a) % p == 0)
    return _count_roots_gcd(red, p)


def _count_roots_gcd(red: list[int], p: int) -> int:
    """deg gcd(x^p - x, f) in F_p[x] counts distinct roots."""
    inv = pow(red[0], -1, p)
    f = [c * inv % p for c in red]

    def mod_f(poly):
        poly = list(poly)
        while len(poly) >= len(f):
            lead = poly[0]
            if lead:
                for i in range(1, len(f)):
                    poly[i] = (poly[i] - lead * f[i]) % p
            poly.pop(0)
        return poly

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return mod_f(out)

    # x^p mod f by square-and-multiply
    result = [1]
    base = mod_f([1, 0])
    e = p
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    # x^p - x
    diff = [0] * max(len(result), 2)
    for i, c in enumerate(reversed(result)):
        diff[len(diff) - 1 - i] = c
    diff[-2] = (diff[-2] - 1) % p
    g = _gcd_fp(f, diff, p)
    return len(g) - 1 if g else 0


def _gcd_fp(a: list[int], b: list[int], p: int) -> list[int]:
    def trim(c):
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        return c[i:]

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[0], -1, p)
        r = list(a)
        while len(r) >= len(b):
            lead = r[0] * inv % p
            for i in range(len(b)):
                r[i] = (r[i] - lead * b[i]) % p
            r = trim(r)
            if not r:
                break
        a, b = b, r
    return a


def local_root_count_form(F: QuarticForm, p: int) -> int:
    """#{(a, b) mod p : F(a, b) = 0 mod p} for a binary form."""
    coeffs = [int(c) % p for c in F.coeffs]
    if not any(coeffs):
        return p * p
    d = len(coeffs) - 1
    count = 1  # (0, 0)
    # pairs with b != 0 scale to (t, 1)
    dehom = coeffs
    i = 0
    while i < len(dehom) and dehom[i] == 0:
        i += 1
    poly = dehom[i:]
    if len(poly) == 1:
        roots = 0
    else:
        roots = sum(1 for t in range(p) if _eval_mod_desc(coeffs, t, p) == 0)
    count += (p - 1) * roots
    # pairs with b = 0, a != 0: p0 a^d = 0
    if coeffs[0] % p == 0:
        count += p - 1
    return count


def _eval_mod_desc(coeffs, t, p):
    out = 0
    for c in coeffs:
        out = (out * t + c) % p
    return out

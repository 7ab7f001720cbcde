"""Imaginary-quadratic form class groups and representation numbers.

The class group of a fundamental discriminant D < 0 is realized on
reduced primitive positive-definite forms with Gauss composition.  Two
independent computations of the representation number

    r_Q(n) = #{(u, v) in Z^2 : Q(u, v) = n}

are provided: a direct lattice scan, and an ideal walk that factors n
and distributes prime ideals over classes (times the unit count).  On
top of the ideal walk sit the class-group characters, the genus
characters attached to coprime splittings D = q1*q2, and the split of
r_Q into its Eisenstein part (characters of order <= 2, equivalently
genus divisor sums) and cuspidal part (characters of order >= 3).

Normalization note: the genus divisor-sum expression for the Eisenstein
part runs over *ordered* pairs (q1, q2), and every real character arises
from exactly two ordered pairs, so the constant in front is |U|/(2h).
The character-sum expression with constant |U|/h is definitional (it
makes r_Q = lambda_E + lambda_C an orthogonality identity); agreement of
the two expressions is part of the test suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

from .binary_forms import QuadForm
from .cyclotomic import Cyc
from .exact_arith import (
    Factorization,
    divisors,
    factorize,
    int_sqrt,
    kronecker,
    mobius,
    sqrt_mod_prime,
)


def is_fundamental_discriminant(d: int) -> bool:
    if d == 0 or d == 1:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    n = abs(n)
    return all(e == 1 for _, e in factorize(n))


def reduce_quad(f: QuadForm) -> QuadForm:
    """Unique reduced representative: |b| <= a <= c, with b >= 0 when
    |b| = a or a = c.  Rejects indefinite or degenerate forms."""
    a, b, c = f.qa, f.qb, f.qc
    if f.disc >= 0 or a <= 0:
        raise ValueError("reduction requires a positive-definite form")
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # normalize b into (-a, a]
            r = (a - b) // (2 * a)
            b2 = b + 2 * r * a
            c = a * r * r + b * r + c
            b = b2
            continue
        break
    if a == c and b < 0:
        b = -b
    if b == -a:
        b = a
    return QuadForm(a, b, c)


def compose_quad(f: QuadForm, g: QuadForm) -> QuadForm:
    """Gauss composition of primitive forms of equal discriminant,
    returned reduced.

    Implemented as Dirichlet composition of concordant forms: replace f
    by an equivalent form whose leading coefficient is coprime to g's,
    then glue the middle coefficients by CRT.
    """
    D = f.disc
    if D != g.disc:
        raise ValueError("composition needs equal discriminants")
    if f.content() != 1 or g.content() != 1:
        raise ValueError("composition needs primitive forms")
    a2, b2 = g.qa, g.qb
    a1, b1 = _equivalent_with_leading_coprime_to(f, a2)
    # B = b1 (mod 2 a1), B = b2 (mod 2 a2); consistent since b1 = b2 = D (2)
    t = ((b2 - b1) // 2) * pow(a1, -1, a2) % a2
    B = b1 + 2 * a1 * t
    C4 = B * B - D
    assert C4 % (4 * a1 * a2) == 0
    out = QuadForm(a1 * a2, B, C4 // (4 * a1 * a2))
    assert out.disc == D
    return reduce_quad(out)


def _equivalent_with_leading_coprime_to(f: QuadForm, n: int) -> tuple[int, int]:
    """(a, b) of a form equivalent to f with gcd(a, n) = 1.

    A primitive form properly represents integers coprime to any fixed
    modulus; a small search always succeeds.
    """
    if gcd(f.qa, n) == 1:
        return f.qa, f.qb
    for bound in (2, 4, 8, 16, 32):
        for u in range(-bound, bound + 1):
            for v in range(-bound, bound + 1):
                if gcd(u, v) != 1:
                    continue
                a = f.evaluate(u, v)
                if a > 0 and gcd(a, n) == 1:
                    # complete (u, v) to an SL2 matrix and transform
                    gg, x, y = _gcdext(u, v)
                    assert gg == 1
                    # matrix [[u, -y], [v, x]] has det ux + vy... fix signs:
                    # need det = u*beta - (-y)*... use columns (u, v), (r, s)
                    # with u*s - r*v = 1: take s = x, r = -y
                    from .binary_forms import UnimodularMatrix, form_substitute

                    M = UnimodularMatrix(u, -y, v, x)
                    aa, bb, cc = form_substitute((f.qa, f.qb, f.qc), *M.entries())
                    assert aa == a
                    return aa, bb
    raise RuntimeError("no represented value coprime to the modulus found")


def _gcdext(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# --- class group table ----------------------------------------------------


@dataclass(frozen=True)
class Character:
    """Class-group character with exact root-of-unity values.

    angle(i) is the rational theta with value e(theta) on class i.
    """

    exponents: tuple[int, ...]
    basis_orders: tuple[int, ...]
    dlogs: tuple[tuple[int, ...], ...]

    def angle(self, class_index: int) -> Fraction:
        theta = Fraction(0)
        for t, e, n in zip(self.exponents, self.dlogs[class_index], self.basis_orders):
            theta += Fraction(t * e, n)
        return theta % 1

    def value(self, class_index: int) -> Cyc:
        return Cyc.root_of_unity(self.angle(class_index))

    @property
    def order(self) -> int:
        n = 1
        for t, m in zip(self.exponents, self.basis_orders):
            n = lcm(n, m // gcd(t, m))
        return n

    def is_real(self) -> bool:
        return self.order <= 2

    def real_value(self, class_index: int) -> int:
        assert self.is_real()
        return 1 if self.angle(class_index) == 0 else -1


class ClassGroupTable:
    """Reduced forms, Gauss composition, unit count, exact characters."""

    def __init__(self, disc: int):
        if disc >= 0 or disc % 4 not in (0, 1):
            raise ValueError("discriminant must be negative and 0 or 1 mod 4")
        self.disc = disc
        self.forms = self._reduced_forms(disc)
        self.h = len(self.forms)
        self.unit_count = 6 if disc == -3 else 4 if disc == -4 else 2
        self._index = {f.coeff_tuple(): i for i, f in enumerate(self.forms)}
        self.compose_table = [
            [self._index[compose_quad(f, g).coeff_tuple()] for g in self.forms]
            for f in self.forms
        ]
        self._build_structure()

    @staticmethod
    def _reduced_forms(disc: int) -> list[QuadForm]:
        forms = []
        amax = isqrt(-disc // 3) if disc < -3 else 1
        for a in range(1, max(amax, 1) + 1):
            for b in range(-a + 1, a + 1):
                if (b * b - disc) % (4 * a):
                    continue
                c = (b * b - disc) // (4 * a)
                if c < a:
                    continue
                if a == c and b < 0:
                    continue
                if gcd(gcd(a, abs(b)), c) != 1:
                    continue
                forms.append(QuadForm(a, b, c))
        # principal form first, then by (a, |b|, b)
        principal = ClassGroupTable.principal_form(disc).coeff_tuple()
        forms.sort(key=lambda f: (f.coeff_tuple() != principal, f.qa, abs(f.qb), -f.qb))
        return forms

    @staticmethod
    def principal_form(disc: int) -> QuadForm:
        if disc % 4 == 0:
            return QuadForm(1, 0, -disc // 4)
        return QuadForm(1, 1, (1 - disc) // 4)

    def class_index(self, f: QuadForm) -> int:
        if f.disc != self.disc:
            raise ValueError("form has a different discriminant")
        if f.content() != 1:
            raise ValueError("imprimitive form")
        return self._index[reduce_quad(f).coeff_tuple()]

    def compose(self, i: int, j: int) -> int:
        return self.compose_table[i][j]

    def inverse(self, i: int) -> int:
        f = self.forms[i]
        return self.class_index(QuadForm(f.qa, -f.qb, f.qc))

    def power(self, i: int, e: int) -> int:
        if e < 0:
            return self.power(self.inverse(i), -e)
        out = 0  # principal
        base = i
        while e:
            if e & 1:
                out = self.compose(out, base)
            base = self.compose(base, base)
            e >>= 1
        return out

    def element_order(self, i: int) -> int:
        n, cur = 1, i
        while cur != 0:
            cur = self.compose(cur, i)
            n += 1
        return n

    def _build_structure(self):
        """Cyclic decomposition and the full character table."""
        basis = _abelian_basis(
            list(range(self.h)), self.compose, 0, self.element_order, self.power
        )
        self.basis = basis  # list of (generator index, order)
        orders = tuple(n for _, n in basis)
        # discrete logs by enumerating all exponent tuples
        dlogs: dict[int, tuple[int, ...]] = {}
        exps = [0] * len(basis)
        total = 1
        for n in orders:
            total *= n
        assert total == self.h, "basis does not span the class group"
        for _ in range(total):
            g = 0
            for (gen, _n), e in zip(basis, exps):
                g = self.compose(g, self.power(gen, e))
            dlogs[g] = tuple(exps)
            # increment mixed-radix counter
            for k in range(len(exps)):
                exps[k] += 1
                if exps[k] < orders[k]:
                    break
                exps[k] = 0
        assert len(dlogs) == self.h
        self.dlogs = tuple(dlogs[i] for i in range(self.h))
        chars = []
        exps = [0] * len(basis)
        for _ in range(total):
            chars.append(Character(tuple(exps), orders, self.dlogs))
            for k in range(len(exps)):
                exps[k] += 1
                if exps[k] < orders[k]:
                    break
                exps[k] = 0
        self.characters = chars

    def to_json(self) -> str:
        return json.dumps(
            {
                "discriminant": self.disc,
                "class_number": self.h,
                "unit_count": self.unit_count,
                "forms": [f.coeff_tuple() for f in self.forms],
                "composition": self.compose_table,
                "characters": [
                    {
                        "order": chi.order,
                        "angles": [str(chi.angle(i)) for i in range(self.h)],
                    }
                    for chi in self.characters
                ],
            },
            sort_keys=True,
        )


def _abelian_basis(elems, compose, identity, element_order, power):
    """Cyclic decomposition [(g, n)] of a small abelian group given by its
    operation table; direct-sum property is asserted by the caller."""
    if len(elems) == 1:
        return []
    orders = {g: element_order(g) for g in elems if g != identity}
    exponent = 1
    for n in orders.values():
        exponent = lcm(exponent, n)
    g1 = next(g for g, n in orders.items() if n == exponent)
    sub = [power(g1, k) for k in range(exponent)]
    sub_set = set(sub)
    if exponent == len(elems):
        return [(g1, exponent)]
    # quotient group on cosets
    coset_of = {}
    cosets = []
    for g in elems:
        cs = frozenset(compose(g, s) for s in sub)
        if cs not in coset_of:
            coset_of[cs] = len(cosets)
            cosets.append(cs)
    index_of = {}
    for cs, idx in coset_of.items():
        for g in cs:
            index_of[g] = idx
    q_identity = index_of[identity]
    reps = [min(cs) for cs in cosets]

    def q_compose(i, j):
        return index_of[compose(reps[i], reps[j])]

    def q_power(i, e):
        out = q_identity
        for _ in range(e % (len(cosets) * 2 + 1) if e >= 0 else 0):
            out = q_compose(out, i)
        return out

    def q_order(i):
        n, cur = 1, i
        while cur != q_identity:
            cur = q_compose(cur, i)
            n += 1
        return n

    q_basis = _abelian_basis(
        list(range(len(cosets))), q_compose, q_identity, q_order, q_power
    )
    out = [(g1, exponent)]
    for q_gen, q_n in q_basis:
        # lift to an element of the same order (exists since exponent is maximal)
        lift = None
        for cand in sorted(cosets[q_gen]):
            if element_order(cand) == q_n:
                lift = cand
                break
        if lift is None:
            # adjust by elements of <g1>
            for cand in sorted(cosets[q_gen]):
                for s in sub:
                    x = compose(cand, s)
                    if element_order(x) == q_n:
                        lift = x
                        break
                if lift is not None:
                    break
        assert lift is not None, "no order-preserving lift found"
        out.append((lift, q_n))
    return out


# --- representation numbers ----------------------------------------------


def r_Q_lattice(Q: QuadForm, n: int) -> int:
    """#{(u, v) : Q(u, v) = n} by scanning the ellipse exactly."""
    if not Q.is_positive_definite:
        raise ValueError("lattice count requires a positive-definite form")
    if n < 0:
        return 0
    if n == 0:
        return 1  # the origin
    a, b, c = Q.qa, Q.qb, Q.qc
    D = -Q.disc  # positive
    count = 0
    # 4a*Q(u,v) = (2au + bv)^2 + D v^2  =>  |v| <= sqrt(4an/D)
    vmax = isqrt(4 * a * n // D)
    for v in range(-vmax, vmax + 1):
        # a u^2 + (b v) u + (c v^2 - n) = 0
        disc = b * b * v * v - 4 * a * (c * v * v - n)
        if disc < 0:
            continue
        r, exact = int_sqrt(disc)
        if not exact:
            continue
        for numer in ({-b * v + r, -b * v - r} if r else {-b * v}):
            if numer % (2 * a) == 0:
                count += 1
    return count


def ideal_class_counts(table: ClassGroupTable, n: int, fac: Factorization | None = None) -> list[int]:
    """counts[i] = #{ideals of norm n in class i} for fundamental disc."""
    if not is_fundamental_discriminant(table.disc):
        raise ValueError("ideal walk requires a fundamental discriminant")
    if n <= 0:
        return [0] * table.h
    counts = [0] * table.h
    counts[0] = 1
    if fac is None:
        fac = factorize(n)
    for p, e in fac:
        chi = kronecker(table.disc, p)
        local: dict[int, int] = {}
        if chi == -1:
            if e % 2:
                return [0] * table.h
            local[0] = 1
        elif chi == 0:
            cls = table.class_index(_prime_form(table.disc, p))
            local[table.power(cls, e)] = 1
        else:
            cls = table.class_index(_prime_form(table.disc, p))
            for i in range(e + 1):
                key = table.power(cls, 2 * i - e)
                local[key] = local.get(key, 0) + 1
        new_counts = [0] * table.h
        for g1, c1 in enumerate(counts):
            if not c1:
                continue
            for g2, c2 in local.items():
                new_counts[table.compose(g1, g2)] += c1 * c2
        counts = new_counts
    return counts


def _prime_form(disc: int, p: int) -> QuadForm:
    """A form (p, b, *) of discriminant disc: the class of a prime ideal
    above the split or ramified prime p."""
    if p == 2:
        for b in (0, 1, 2):
            if (b * b - disc) % 8 == 0:
                return QuadForm(2, b, (b * b - disc) // 8)
        raise ValueError("2 is inert for this discriminant")
    r = sqrt_mod_prime(disc % p, p)
    if r is None:
        raise ValueError(f"{p} is inert for this discriminant")
    # fix parity: need b = disc (mod 2) and b = +-r (mod p)
    b = r if (r - disc) % 2 == 0 else r + p
    b %= 2 * p
    assert (b * b - disc) % (4 * p) == 0
    return QuadForm(p, b, (b * b - disc) // (4 * p))


def r_Q_ideal(Q: QuadForm, n: int, table: ClassGroupTable | None = None,
              fac: Factorization | None = None) -> int:
    """r_Q via the ideal walk: |U| * #{ideals of norm n in the class [Q]}."""
    if not Q.is_positive_definite:
        raise ValueError("r_Q requires a positive-definite form")
    if table is None:
        table = ClassGroupTable(Q.disc)
    if n <= 0:
        return 0
    counts = ideal_class_counts(table, n, fac)
    return table.unit_count * counts[table.class_index(Q)]


# --- genus characters and the Eisenstein/cuspidal split -------------------


def prime_discriminants(disc: int) -> list[int]:
    """The unique factorization of a fundamental discriminant into prime
    discriminants (-4, +-8, p* = (-1)^((p-1)/2) p)."""
    if not is_fundamental_discriminant(disc):
        raise ValueError("prime-discriminant splitting needs a fundamental discriminant")
    out = []
    rest = disc
    for p, _ in factorize(abs(disc)):
        if p == 2:
            continue
        pstar = p if p % 4 == 1 else -p
        out.append(pstar)
        rest //= pstar
    if rest != 1:
        assert rest in (-4, 8, -8), rest
        out.append(rest)
    return sorted(out, key=abs)


@dataclass(frozen=True)
class GenusPair:
    """Ordered coprime splitting disc = q1 * q2 into two discriminants."""

    q1: int
    q2: int


def genus_pairs(disc: int) -> list[GenusPair]:
    """All ordered pairs (q1, q2) of coprime discriminants with q1 q2 = disc,
    including (1, disc) and (disc, 1): 2^t pairs for t prime discriminants."""
    parts = prime_discriminants(disc)
    pairs = []
    for mask in range(1 << len(parts)):
        q1 = 1
        for i, q in enumerate(parts):
            if mask >> i & 1:
                q1 *= q
        pairs.append(GenusPair(q1, disc // q1))
    pairs.sort(key=lambda g: (abs(g.q1), g.q1))
    return pairs


def genus_character_value(pair: GenusPair, table: ClassGroupTable, class_index: int) -> int:
    """psi_{q1,q2} on a class: chi_{q1}(m) for any represented m coprime
    to the discriminant."""
    f = table.forms[class_index]
    m = _represented_coprime(f, table.disc)
    return kronecker(pair.q1, m)


def _represented_coprime(f: QuadForm, disc: int) -> int:
    for bound in (3, 6, 12, 24):
        for u in range(-bound, bound + 1):
            for v in range(-bound, bound + 1):
                val = f.evaluate(u, v)
                if val > 0 and gcd(val, 2 * abs(disc)) == 1:
                    return val
    raise RuntimeError("no represented value coprime to the discriminant found")


def eisenstein_divisor_sum(q1: int, q2: int, n: int) -> int:
    """epsilon_{q1,q2}(n) = sum_{d | n} chi_{q1}(d) chi_{q2}(n/d)."""
    if n <= 0:
        raise ValueError("divisor sum needs n >= 1")
    total = 0
    for d in divisors(n):
        total += kronecker(q1, d) * kronecker(q2, n // d)
    return total


def eisenstein_coeff(Q: QuadForm, n: int, table: ClassGroupTable | None = None,
                     route: str = "characters") -> Fraction:
    """lambda_E(n): the Eisenstein component of r_Q(n).

    route="characters": (|U|/h) sum over real characters psi of
    psi([Q]) * sum_{N(a)=n} psi(a).
    route="genus": (|U|/(2h)) sum over ordered genus pairs of
    psi_{q1,q2}([Q]) * epsilon_{q1,q2}(n).
    """
    if table is None:
        table = ClassGroupTable(Q.disc)
    iQ = table.class_index(Q)
    if route == "characters":
        counts = ideal_class_counts(table, n)
        total = Fraction(0)
        for chi in table.characters:
            if not chi.is_real():
                continue
            s = sum(counts[i] * chi.real_value(i) for i in range(table.h))
            total += chi.real_value(iQ) * s
        return Fraction(table.unit_count, table.h) * total
    if route == "genus":
        total = 0
        for pair in genus_pairs(table.disc):
            psi = genus_character_value(pair, table, iQ)
            total += psi * eisenstein_divisor_sum(pair.q1, pair.q2, n)
        return Fraction(table.unit_count, 2 * table.h) * total
    raise ValueError(f"unknown route {route!r}")


def cuspidal_coeff(Q: QuadForm, n: int, table: ClassGroupTable | None = None) -> Fraction:
    """lambda_C(n): contribution of the characters of order >= 3; exact,
    and checked against r_Q = lambda_E + lambda_C."""
    if table is None:
        table = ClassGroupTable(Q.disc)
    iQ = table.class_index(Q)
    counts = ideal_class_counts(table, n)
    total = Cyc.zero()
    for chi in table.characters:
        if chi.is_real():
            continue
        s = Cyc.zero()
        for i in range(table.h):
            if counts[i]:
                s = s + counts[i] * chi.value(i)
        total = total + chi.value(iQ).conjugate() * s
    total = Fraction(table.unit_count, table.h) * total
    val = total.as_rational()
    assert val is not None, "cuspidal coefficient must be rational"
    lamE = eisenstein_coeff(Q, n, table)
    rq = table.unit_count * counts[iQ]
    assert lamE + val == rq, "r_Q = lambda_E + lambda_C failed"
    return val


def eisenstein_multiplicativity_check(q1: int, q2: int, n: int, m: int) -> bool:
    """epsilon(nm) = sum_{c | gcd(n, m)} mu(c) chi(c) eps(n/c) eps(m/c)
    with chi the quadratic character of discriminant q1*q2, checked exactly."""
    disc = q1 * q2
    lhs = eisenstein_divisor_sum(q1, q2, n * m)
    rhs = 0
    for c in divisors(gcd(n, m)):
        rhs += (
            mobius(c)
            * kronecker(disc, c)
            * eisenstein_divisor_sum(q1, q2, n // c)
            * eisenstein_divisor_sum(q1, q2, m // c)
        )
    return lhs == rhs

import random
from fractions import Fraction

import pytest

from syzygy import exact_arith as ea


def trial_division_oracle(n):
    """Independent plain trial-division factorizer."""
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_factorize_examples():
    assert ea.factorize(1) == []
    assert ea.factorize(12) == [(2, 2), (3, 1)]
    # oracle: trial division
    assert trial_division_oracle(9797) == [(97, 1), (101, 1)]
    assert ea.factorize(9797) == [(97, 1), (101, 1)]


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValueError):
        ea.factorize(0)
    with pytest.raises(ValueError):
        ea.factorize(-4)


def test_factorize_roundtrip_random():
    rng = random.Random(20240817)
    for _ in range(200):
        n = rng.randrange(1, 10**12)
        fac = ea.factorize(n)
        assert ea.factorization_to_int(fac) == n
        assert all(ea.is_prime(p) for p, _ in fac)
        assert [p for p, _ in fac] == sorted({p for p, _ in fac})


def test_factorize_large_semiprime():
    p, q = 1000003, 1000033
    assert ea.factorize(p * q) == [(p, 1), (q, 1)]


def test_kronecker_examples():
    for a in (-7, -1, 0, 1, 2, 10):
        assert ea.kronecker(a, 1) == 1
    # -4 = 1 mod 5 and 1 is a QR mod 5
    assert ea.kronecker(-4, 5) == 1
    # -4 = 2 mod 3 and 2 is a non-residue mod 3
    assert ea.kronecker(-4, 3) == -1


def test_kronecker_matches_euler_criterion():
    for p in ea.primes_up_to(100):
        if p == 2:
            continue
        for a in range(p):
            want = pow(a, (p - 1) // 2, p)
            want = -1 if want == p - 1 else want
            assert ea.kronecker(a, p) == want, (a, p)


def test_kronecker_multiplicative():
    rng = random.Random(7)
    for _ in range(300):
        a, b = rng.randrange(-50, 50), rng.randrange(-50, 50)
        n = rng.randrange(1, 60)
        assert ea.kronecker(a * b, n) == ea.kronecker(a, n) * ea.kronecker(b, n)
        m = rng.randrange(1, 60)
        assert ea.kronecker(a, n * m) == ea.kronecker(a, n) * ea.kronecker(a, m)


def test_kronecker_mod2_convention():
    # (a|2) by a mod 8
    assert ea.kronecker(7, 2) == 1
    assert ea.kronecker(1, 2) == 1
    assert ea.kronecker(3, 2) == -1
    assert ea.kronecker(5, 2) == -1
    assert ea.kronecker(6, 2) == 0


def test_int_sqrt():
    assert ea.int_sqrt(0) == (0, True)
    assert ea.int_sqrt(35) == (5, False)
    assert ea.int_sqrt(36) == (6, True)
    big = 10**30 + 12345
    r, exact = ea.int_sqrt(big)
    assert r * r <= big < (r + 1) ** 2 and not exact


def test_squarefree_part():
    assert ea.squarefree_part(-20) == (-5, 2)
    assert ea.squarefree_part(1) == (1, 1)
    assert ea.squarefree_part(8) == (2, 2)
    rng = random.Random(99)
    for _ in range(100):
        n = rng.randrange(1, 10**9)
        if rng.random() < 0.5:
            n = -n
        s, f = ea.squarefree_part(n)
        assert s * f * f == n
        assert all(e == 1 for _, e in ea.factorize(abs(s))) or abs(s) == 1


def test_sqrt_mod_prime():
    for p in ea.primes_up_to(200):
        for a in range(p):
            r = ea.sqrt_mod_prime(a, p)
            if ea.kronecker(a, p) == -1:
                assert r is None
            else:
                assert r is not None and (r * r - a) % p == 0


def test_mobius():
    assert [ea.mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_decimal_roundtrip():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randrange(-(10**40), 10**40)
        assert ea.parse_int(ea.format_int(n)) == n
    assert ea.parse_rational("-97/48") == Fraction(-97, 48)
    assert ea.format_rational(Fraction(955, 864)) == "955/864"
    assert ea.format_rational(Fraction(4)) == "4"
    assert ea.parse_rational("7") == Fraction(7)


def test_divisors():
    assert ea.divisors(12) == [1, 2, 3, 4, 6, 12]
    assert ea.divisors(1) == [1]


def test_spf_sieve_matches_factorize():
    spf = ea.smallest_prime_factors(10**4)
    for n in range(2, 10**4 + 1):
        assert ea.factorize_with_spf(n, spf) == ea.factorize(n)

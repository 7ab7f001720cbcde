"""Exact integer and rational arithmetic substrate.

Arbitrary-precision integers and rationals are the language builtins
(``int`` and ``fractions.Fraction``); this module supplies the number
theory on top of them: factorization, primality, Kronecker symbols,
integer square roots, squarefree decomposition and modular square
roots.  Everything here is exact and deterministic; inputs in this
package stay below ~10**18, so trial division plus deterministic
Miller-Rabin plus Brent's rho is enough.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterator

# Trial division covers primes up to this bound before rho kicks in.
_SMALL_PRIME_LIMIT = 10**6

_small_primes: list[int] | None = None


def small_primes() -> list[int]:
    """Primes below 10**6, sieved once per process."""
    global _small_primes
    if _small_primes is None:
        limit = _SMALL_PRIME_LIMIT
        sieve = bytearray([1]) * (limit + 1)
        sieve[0] = sieve[1] = 0
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
        _small_primes = [i for i, flag in enumerate(sieve) if flag]
    return _small_primes


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit (fresh sieve for limit > 10**6)."""
    if limit < 2:
        return []
    if limit <= _SMALL_PRIME_LIMIT:
        ps = small_primes()
        # bisect would do; the list is sorted
        import bisect

        return ps[: bisect.bisect_right(ps, limit)]
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3 * 10**24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho_brent(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = seed, seed, 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


Factorization = list[tuple[int, int]]


def factorize(n: int) -> Factorization:
    """Prime factorization of n >= 1 as an increasing list of (p, e).

    Rejects n <= 0.  The empty product is returned for n = 1.
    """
    if n <= 0:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out: dict[int, int] = {}
    for p in small_primes():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _rho_brent(m)
            stack.append(d)
            stack.append(m // d)
    return sorted(out.items())


def divisors(n: int) -> list[int]:
    """All positive divisors of n >= 1, ascending."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def factorization_to_int(fac: Factorization) -> int:
    out = 1
    for p, e in fac:
        out *= p**e
    return out


def smallest_prime_factors(limit: int) -> list[int]:
    """spf[k] = least prime factor of k, for 0 <= k <= limit (spf[0]=spf[1]=0).

    Batch helper for summing multiplicative data over ranges.
    """
    spf = list(range(limit + 1))
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            for k in range(p * p, limit + 1, p):
                if spf[k] == k:
                    spf[k] = p
    if limit >= 1:
        spf[1] = 0
    if limit >= 0:
        spf[0] = 0
    return spf


def factorize_with_spf(n: int, spf: list[int]) -> Factorization:
    out: list[tuple[int, int]] = []
    while n > 1:
        p = spf[n]
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), completely multiplicative in both slots.

    (a|2) is 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8;
    (a|-1) is the sign of a (with (0|-1) = 1); (a|0) is 1 only for a = +-1.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # split powers of two off n
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        t = 0
        while n % 2 == 0:
            n //= 2
            t += 1
        if t % 2 == 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    # Jacobi loop on the odd part
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def int_sqrt(n: int) -> tuple[int, bool]:
    """(floor(sqrt(n)), n is a perfect square) for n >= 0."""
    if n < 0:
        raise ValueError("int_sqrt requires n >= 0")
    r = math.isqrt(n)
    return r, r * r == n


def squarefree_part(n: int) -> tuple[int, int]:
    """Split n != 0 as n = s * f**2 with s squarefree (sign carried by s)."""
    if n == 0:
        raise ValueError("squarefree_part requires n != 0")
    s, f = 1 if n > 0 else -1, 1
    for p, e in factorize(abs(n)):
        if e % 2:
            s *= p
        f *= p ** (e // 2)
    return s, f


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a modulo prime p, or None if a is a non-residue.

    Tonelli-Shanks; p = 2 and a = 0 handled directly.
    """
    a %= p
    if p == 2 or a == 0:
        return a
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def mobius(n: int) -> int:
    """Moebius function of n >= 1."""
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


# --- decimal-string interfaces -----------------------------------------


def parse_int(text: str) -> int:
    return int(text.strip())


def format_int(n: int) -> str:
    return str(n)


def parse_rational(text: str) -> Fraction:
    """Parse "num/den" or a plain integer string into a Fraction."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    """Render in "num/den" form, or plain integer when the denominator is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"

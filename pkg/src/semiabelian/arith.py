"""Exact integer arithmetic: valuations, Legendre symbols, primality, factoring.

Everything here works on plain Python ints, which never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

__all__ = [
    "Factorization",
    "NotPrimeError",
    "divisors",
    "factor",
    "factor_product",
    "gcd",
    "is_prime",
    "is_square",
    "legendre",
    "prime_divisors",
    "valuation",
]

TRIAL_DIVISION_BOUND = 10**6
SPF_LIMIT = 1 << 20

# Deterministic for n < 3.3e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class NotPrimeError(ValueError):
    """A prime modulus was required."""


def gcd(a: int, b: int) -> int:
    """Non-negative greatest common divisor, with gcd(0, 0) == 0."""
    return math.gcd(a, b)


def is_square(x: int) -> bool:
    if x < 0:
        return False
    r = isqrt(x)
    return r * r == x


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 43 * 43:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")


def _val(p: int, x: int) -> int:
    # unchecked: p prime, x != 0
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def valuation(p: int, x: int) -> int:
    """Largest e with p**e dividing x."""
    if x == 0:
        raise ValueError("valuation of 0 is undefined here")
    _require_prime(p)
    return _val(p, x)


def _jacobi(a: int, n: int) -> int:
    # binary reciprocity algorithm; n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    if p == 2:
        raise NotPrimeError("the Legendre symbol needs an odd prime")
    _require_prime(p)
    return _jacobi(a, p)


# -- factorization ---------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """sign * prod(p**e) with primes strictly increasing."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        return dict(self.factors).get(p, 0)

    def __str__(self) -> str:
        if not self.factors:
            return str(self.sign)
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)
        return ("-" if self.sign < 0 else "") + body


@lru_cache(maxsize=1)
def _spf_table() -> list[int]:
    """Smallest prime factor for every n < SPF_LIMIT (0 and 1 map to 0/1)."""
    spf = list(range(SPF_LIMIT))
    # descending, so that the smallest prime writes last
    for p in reversed(_small_primes(isqrt(SPF_LIMIT))):
        spf[p * p :: p] = [p] * len(range(p * p, SPF_LIMIT, p))
    return spf


@lru_cache(maxsize=4)
def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def _pollard_brent(n: int) -> int:
    """A non-trivial factor of the odd composite n."""
    for c in range(1, 64):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
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
    raise ArithmeticError(f"Pollard rho failed on {n}")


def _factor_into(n: int, out: dict[int, int]) -> None:
    # n >= 1
    if n < SPF_LIMIT:
        spf = _spf_table()
        while n > 1:
            p = spf[n]
            out[p] = out.get(p, 0) + 1
            n //= p
        return
    for p in _small_primes(TRIAL_DIVISION_BOUND):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = out.get(p, 0) + e
            if n < SPF_LIMIT:
                _factor_into(n, out)
                return
            if is_prime(n):
                break
    if n == 1:
        return
    stack = [n]
    while stack:
        k = stack.pop()
        if k == 1:
            continue
        if is_prime(k):
            out[k] = out.get(k, 0) + 1
            continue
        r = isqrt(k)
        if r * r == k:
            stack += [r, r]
            continue
        f = _pollard_brent(k)
        stack += [f, k // f]


def factor(x: int) -> Factorization:
    """Complete prime factorization of a nonzero integer.

    Small inputs are read off a smallest-prime-factor table; larger ones go
    through trial division (primes below 10**6) and then Pollard-Brent rho.
    """
    if x == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    _factor_into(abs(x), out)
    return Factorization(1 if x > 0 else -1, tuple(sorted(out.items())))


def factor_product(parts: list[int]) -> Factorization:
    """Factorization of prod(parts), assembled from the factors of each part."""
    sign = 1
    out: dict[int, int] = {}
    for x in parts:
        if x == 0:
            raise ValueError("cannot factor 0")
        if x < 0:
            sign = -sign
        _factor_into(abs(x), out)
    return Factorization(sign, tuple(sorted(out.items())))


def prime_divisors(x: int) -> tuple[int, ...]:
    return factor(x).primes


def divisors(x: int) -> list[int]:
    """Positive divisors of x != 0, ascending."""
    return list(_divisors_cached(abs(x)))


@lru_cache(maxsize=1 << 16)
def _divisors_cached(x: int) -> tuple[int, ...]:
    divs = [1]
    for p, e in factor(x).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return tuple(sorted(divs))

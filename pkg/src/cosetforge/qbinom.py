"""Exact prime powers and Gaussian binomial coefficients at a prime."""

from __future__ import annotations

from functools import lru_cache

from .errors import PreconditionError


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def require_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise PreconditionError(f"{p!r} is not a prime")
    return p


def prime_power(p: int, e: int) -> int:
    require_prime(p)
    if e < 0:
        raise PreconditionError(f"negative exponent {e}")
    return p ** e


def ilog(p: int, n: int) -> int:
    """Exact base-``p`` logarithm of a power of ``p``."""
    if n < 1:
        raise ValueError(f"{n} is not a power of {p}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise ValueError(f"not a power of {p}")
    return e


@lru_cache(maxsize=4096)
def gaussian_binomial(n: int, m: int, p: int) -> int:
    """Number of ``m``-dimensional subspaces of an ``n``-dimensional space
    over the field with ``p`` elements.

    ``m == 0`` gives the empty product 1; out-of-range arguments give 0.
    """
    require_prime(p)
    if n < 0 or m < 0 or m > n:
        return 0
    num = den = 1
    for i in range(1, m + 1):
        num *= p ** (n - m + i) - 1
        den *= p ** i - 1
    q, rem = divmod(num, den)
    assert rem == 0, (n, m, p)
    return q

"""Bounded-height solutions of S-unit equations.

Height is a uniform cap on the exponent of every prime of M.  Solutions are
multisets, reported as tuples sorted in descending order.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .counting import evertse_bound
from .errors import CapExceeded, PreconditionError
from .qbinom import require_prime

DEFAULT_BUDGET = 10 ** 7


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple[int, ...]

    def __init__(self, primes: Iterable[int]):
        ps = sorted(set(int(q) for q in primes))
        for q in ps:
            require_prime(q)
        object.__setattr__(self, "primes", tuple(ps))

    @classmethod
    def parse(cls, text: str) -> "PrimeSet":
        return cls(int(t) for t in re.split(r"[,\s]+", text.strip()) if t)

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, q) -> bool:
        return q in self.primes


@dataclass(frozen=True)
class SUnitTuple:
    entries: tuple[int, ...]
    canonical: bool = True

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def is_m_unit(x: int, M: PrimeSet) -> bool:
    if x == 0:
        raise PreconditionError("0 is not an M-unit candidate")
    x = abs(x)
    for q in M.primes:
        while x % q == 0:
            x //= q
    return x == 1


def m_units(M: PrimeSet, expBound: int) -> list[int]:
    """All +-prod q^e with 0 <= e <= expBound, sorted descending."""
    if expBound < 0:
        raise PreconditionError("expBound must be nonnegative")
    mags = [1]
    for q in M.primes:
        mags = [m * q ** e for m in mags for e in range(expBound + 1)]
    return sorted(mags + [-m for m in mags], reverse=True)


def has_vanishing_subsum(xs: Sequence[int]) -> bool:
    """Does some nonempty proper sub-collection sum to 0?"""
    n = len(xs)
    for size in range(1, n):
        for sub in itertools.combinations(xs, size):
            if sum(sub) == 0:
                return True
    return False


def _gcd_one(xs: Sequence[int]) -> bool:
    return math.gcd(*xs) == 1


def _desc(xs) -> tuple:
    return tuple(sorted(xs, reverse=True))


def canonical_zero_sum(xs: Sequence[int]) -> tuple:
    """Representative of xs under permutation and global negation."""
    return min(_desc(xs), _desc(-x for x in xs))


def _multisets_summing(values: list[int], l: int, target: int,
                       budget: int) -> tuple[set, int]:
    """Every sorted l-multiset from ``values`` summing to ``target``, and the
    number of candidates examined.  l <= 3 is a direct scan, larger l meets
    in the middle on the sums of the two halves."""
    values = sorted(values)
    V = len(values)
    if l <= 3:
        cost = math.comb(V + l - 1, l)
        if cost > budget:
            raise CapExceeded(f"{cost} candidates exceed the budget {budget}")
        found = {c for c in itertools.combinations_with_replacement(values, l)
                 if sum(c) == target}
        return found, cost
    a = l // 2
    b = l - a
    cost = math.comb(V + a - 1, a) + math.comb(V + b - 1, b)
    if cost > budget:
        raise CapExceeded(f"{cost} candidates exceed the budget {budget}")
    right = defaultdict(list)
    for c in itertools.combinations_with_replacement(values, b):
        right[sum(c)].append(c)
    found = set()
    for c in itertools.combinations_with_replacement(values, a):
        for d in right.get(target - sum(c), ()):
            found.add(tuple(sorted(c + d)))
    return found, cost


@dataclass
class Enumeration:
    tuples: list
    candidates: int
    params: dict

    def to_json(self) -> dict:
        return {"parameters": self.params, "count": len(self.tuples),
                "budget_used": self.candidates,
                "tuples": [list(t.entries) for t in self.tuples]}


def zero_sums(M: PrimeSet, l: int, expBound: int,
              budget: int = DEFAULT_BUDGET) -> Enumeration:
    if l < 2:
        raise PreconditionError("zero sums need l >= 2")
    found, cost = _multisets_summing(m_units(M, expBound), l, 0, budget)
    keep = set()
    for c in found:
        if _gcd_one(c) and not has_vanishing_subsum(c):
            keep.add(canonical_zero_sum(c))
    tuples = [SUnitTuple(t) for t in sorted(keep, reverse=True)]
    return Enumeration(tuples, cost, {"equation": "zero", "primes": list(M.primes),
                                      "l": l, "exp_bound": expBound, "budget": budget})


def enumerate_zero_sums(M: PrimeSet, l: int, expBound: int,
                        budget: int = DEFAULT_BUDGET) -> list[SUnitTuple]:
    """x_1 + ... + x_l = 0 in M-units, gcd 1, no vanishing proper subsum;
    one representative per permutation/negation class."""
    return zero_sums(M, l, expBound, budget).tuples


def power_sums(M: PrimeSet, l: int, p: int, R: int, expBound: int,
               budget: int = DEFAULT_BUDGET) -> Enumeration:
    require_prime(p)
    if p in M:
        raise PreconditionError(f"p={p} must not belong to M")
    if l < 1 or R < 0:
        raise PreconditionError("need l >= 1 and R >= 0")
    found, cost = _multisets_summing(m_units(M, expBound), l, p ** R, budget)
    keep = {_desc(c) for c in found if not has_vanishing_subsum(c)}
    tuples = [SUnitTuple(t) for t in sorted(keep, reverse=True)]
    return Enumeration(tuples, cost, {"equation": "power", "primes": list(M.primes),
                                      "l": l, "p": p, "R": R, "exp_bound": expBound,
                                      "budget": budget})


def enumerate_power_sums(M: PrimeSet, l: int, p: int, R: int, expBound: int,
                         budget: int = DEFAULT_BUDGET) -> list[SUnitTuple]:
    """x_1 + ... + x_l = p^R in M-units with no vanishing proper subsum."""
    return power_sums(M, l, p, R, expBound, budget).tuples


def valuation(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def reduce_by_p_power(entries: Sequence[int], p: int) -> tuple[list[int], int]:
    """Divide out p^s' where s' is the least p-adic valuation of the entries."""
    require_prime(p)
    if not entries or any(x == 0 for x in entries):
        raise PreconditionError("entries must be nonzero")
    s = min(valuation(x, p) for x in entries)
    return [x // p ** s for x in entries], s


def count_vs_evertse(M: PrimeSet, l: int, expBound: int, C1, C2,
                     budget: int = DEFAULT_BUDGET) -> dict:
    """Observed solution counts per height beside the Evertse bound for
    n = l - 1.  Descriptive only: the constants are not known."""
    bound = evertse_bound(l - 1, C1, C2)
    rows = [{"exp_bound": e, "count": len(enumerate_zero_sums(M, l, e, budget))}
            for e in range(expBound + 1)]
    return {"primes": list(M.primes), "l": l, "rows": rows, "evertse": bound.to_json()}

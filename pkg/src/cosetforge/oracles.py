"""Brute-force oracles that share no code path with the library proper.

Subgroups are found by closing element sets under addition, subspaces the
same way, and S-unit sums by plain ordered loops.
"""

from __future__ import annotations

import cmath
import itertools
import math
from collections import Counter

from .abelian import GroupSpec


def _addition_table(G: GroupSpec) -> tuple[list, list]:
    elems = list(G.elements())
    pos = {x: i for i, x in enumerate(elems)}
    table = [[pos[tuple((a + b) % m for a, b, m in zip(x, y, G.moduli))] for y in elems]
             for x in elems]
    return elems, table


def closure_subgroups(G: GroupSpec) -> set[frozenset]:
    """Every subgroup, as a frozenset of element indices (0 is the identity).

    Starts from {0} and repeatedly adjoins one element, closing under
    addition, until nothing new appears."""
    elems, add = _addition_table(G)
    n = len(elems)

    def adjoin(S: frozenset, g: int) -> frozenset:
        # <S, g> is the union of the translates k*g + S
        T = set(S)
        h = g
        while h not in T:
            T.update(add[h][s] for s in S)
            h = add[h][g]
        return frozenset(T)

    seen = {frozenset([0])}
    todo = [frozenset([0])]
    while todo:
        S = todo.pop()
        for g in range(n):
            if g not in S:
                T = adjoin(S, g)
                if T not in seen:
                    seen.add(T)
                    todo.append(T)
    return seen


def subgroup_counts_by_order(G: GroupSpec) -> Counter:
    return Counter(len(S) for S in closure_subgroups(G))


def coset_counts_by_size(G: GroupSpec) -> Counter:
    """Number of distinct cosets of each size, found as translates of the
    closure subgroups."""
    elems, add = _addition_table(G)
    cosets = set()
    for S in closure_subgroups(G):
        for x in range(len(elems)):
            cosets.add(frozenset(add[x][s] for s in S))
    return Counter(len(c) for c in cosets)


def subspace_count(p: int, n: int, m: int) -> int:
    """m-dimensional subspaces of F_p^n, by closure enumeration."""
    G = GroupSpec(p, (1,) * n)
    return sum(1 for S in closure_subgroups(G) if len(S) == p ** m)


def dense_norm(G: GroupSpec, support) -> float:
    """(1/#G) sum_g |sum_{chi in support} chi(g)| with cmath, no tables."""
    total = []
    support = [tuple(c) for c in support]
    for g in G.elements():
        s = 0j
        for chi in support:
            s += cmath.exp(2j * math.pi * sum(c * x / m for c, x, m in zip(chi, g, G.moduli)))
        total.append(abs(s))
    return math.fsum(total) / G.order


def _units(primes, e):
    out = set()
    for exps in itertools.product(range(e + 1), repeat=len(primes)):
        v = 1
        for q, k in zip(primes, exps):
            v *= q ** k
        out.add(v)
        out.add(-v)
    return sorted(out)


def naive_zero_sums_3(primes, e) -> list[tuple]:
    """Ordered triple loop for x + y + z = 0 in M-units of height <= e, gcd 1,
    no pair summing to zero, one representative up to order and sign."""
    vals = _units(primes, e)
    reps = set()
    for x in vals:
        for y in vals:
            for z in vals:
                if x + y + z != 0:
                    continue
                if x + y == 0 or x + z == 0 or y + z == 0:
                    continue
                if math.gcd(math.gcd(x, y), z) != 1:
                    continue
                a = sorted((x, y, z), reverse=True)
                b = sorted((-x, -y, -z), reverse=True)
                reps.add(tuple(min(a, b)))
    return sorted(reps, reverse=True)


def naive_power_sums_2(primes, p, R, e) -> list[tuple]:
    vals = _units(primes, e)
    reps = set()
    for x in vals:
        for y in vals:
            if x + y == p ** R:
                reps.add(tuple(sorted((x, y), reverse=True)))
    return sorted(reps, reverse=True)

"""Formula-versus-oracle checks behind ``cosetforge verify`` and the
acceptance suite.  Reports contain no timings so that reruns are
byte-identical."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from . import oracles
from .abelian import (GroupSpec, coset_from_elements, enumerate_cosets, enumerate_subgroups,
                      lemma4_holds)
from .census import census
from .cosetring import extract, materialize, random_indicator_combination
from .counting import (GroupClassSpec, admissible_gamma_types, count_cosets, count_subgroups,
                       subgroup_count_lower_bound, subgroup_count_upper_bound, representable)
from .partition import partitions_of
from .qbinom import gaussian_binomial
from .spectral import CoefficientVector, a_norm, subset_norms
from .sunit import PrimeSet, enumerate_power_sums, enumerate_zero_sums

GRID_ORDER = 2 ** 10
ORACLE_ORDER = 2 ** 6
DEFAULT_SAMPLES = 600
DEFAULT_SEED = 0


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion:>2} {self.name}: {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.criterion, "name": self.name,
                "passed": self.passed, "detail": self.detail}


def grid_groups(max_order: int = GRID_ORDER, primes=(2, 3)) -> list[GroupSpec]:
    out = []
    for p in primes:
        w = 0
        while p ** w <= max_order:
            for alpha in (partitions_of(w) if w else [()]):
                out.append(GroupSpec(p, alpha))
            w += 1
    return out


_census = lru_cache(maxsize=None)(census)


def check_subgroup_counts(max_order: int = GRID_ORDER, oracle_order: int = ORACLE_ORDER) -> CheckResult:
    groups = grid_groups(max_order)
    bad, total, checked = [], 0, 0
    for G in groups:
        formula = [count_subgroups(G.p, G.type, r) for r in range(G.weight + 1)]
        if G.rank == 0:
            found = [1]
        else:
            found = list(_census(G).counts)
        total += sum(found)
        if found != formula:
            bad.append(G)
        if G.order <= oracle_order:
            by_order = oracles.subgroup_counts_by_order(G)
            closure = [by_order.get(G.p ** r, 0) for r in range(G.weight + 1)]
            checked += 1
            if closure != formula:
                bad.append(G)
    detail = (f"{len(groups)} groups, {total} subgroups enumerated, "
              f"{checked} groups also closure-checked, {len(bad)} mismatches")
    if bad:
        detail += f" (first: {bad[0]!r})"
    return CheckResult(1, "subgroup-counts", not bad, detail)


def check_cosets(max_order: int = GRID_ORDER, oracle_order: int = ORACLE_ORDER) -> CheckResult:
    groups = grid_groups(max_order)
    bad, total = [], 0
    for G in groups:
        formula = [count_cosets(G.p, G.type, r) for r in range(G.weight + 1)]
        found = [1] if G.rank == 0 else list(_census(G).coset_counts)
        total += sum(found)
        if found != formula:
            bad.append(G)
        if G.order <= oracle_order:
            sizes = oracles.coset_counts_by_size(G)
            listed = [0] * (G.weight + 1)
            for c in enumerate_cosets(G):
                listed[round(math.log(c.size, G.p))] += 1
            if [sizes.get(G.p ** r, 0) for r in range(G.weight + 1)] != formula or listed != formula:
                bad.append(G)
    detail = f"{len(groups)} groups, {total} cosets enumerated, {len(bad)} mismatches"
    return CheckResult(2, "coset-conversion", not bad, detail)


def check_gaussian() -> CheckResult:
    bad, n_checked = [], 0
    for p in (2, 3):
        for n in range(0, 5):
            for m in range(0, n + 1):
                n_checked += 1
                if gaussian_binomial(n, m, p) != oracles.subspace_count(p, n, m):
                    bad.append((n, m, p))
    if gaussian_binomial(4, 2, 2) != 35:
        bad.append((4, 2, 2))
    return CheckResult(3, "gaussian-binomial", not bad,
                       f"{n_checked} (n,m,p) triples against subspace counts, {len(bad)} mismatches")


def check_bounds() -> CheckResult:
    bad, n_checked = [], 0
    for p in (2, 3):
        for N in range(1, 5):
            for a in (2, 3):
                for r in range(N * a + 1):
                    upper = subgroup_count_upper_bound(p, N, a, r)
                    n_checked += 1
                    if not upper.holds_for(count_subgroups(p, (a,) * N, r)):
                        bad.append(("upper", p, N, a, r))
                    lower = subgroup_count_lower_bound(p, N, a, r, r)
                    for gamma in admissible_gamma_types(N, a):
                        n_checked += 1
                        if not lower.holds_for(count_subgroups(p, gamma, r)):
                            bad.append(("lower", p, N, a, r, gamma.parts))
    return CheckResult(4, "bound-sandwich", not bad,
                       f"{n_checked} inequalities, {len(bad)} violations")


def check_extraction(samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                     max_rank: int = 10) -> CheckResult:
    rng = random.Random(seed)
    bad, fallback = 0, 0
    for k in range(samples):
        N = 1 + k % max_rank
        G = GroupSpec(2, (1,) * N)
        comb = random_indicator_combination(G, rng)
        res = extract(comb)
        U = materialize(comb)
        elems = res.coset.elements()
        genuine = coset_from_elements(G, elems) == res.coset
        if not (genuine and set(elems) <= U and res.guarantee_met):
            bad += 1
        if res.method != "descent":
            fallback += 1
    return CheckResult(5, "coset-extraction", bad == 0,
                       f"{samples} combinations (seed {seed}), {bad} failures, "
                       f"{fallback} needed the density fallback")


def check_subgroup_types(max_order: int = GRID_ORDER, oracle_order: int = ORACLE_ORDER) -> CheckResult:
    groups = grid_groups(max_order)
    violations, total = 0, 0
    for G in groups:
        if G.rank == 0:
            total += 1
            continue
        c = _census(G)
        violations += c.type_violations
        total += c.total
        if G.order <= oracle_order:
            violations += sum(1 for H in enumerate_subgroups(G) if not lemma4_holds(H))
    return CheckResult(6, "subgroup-types", violations == 0,
                       f"{total} subgroups of {len(groups)} groups, {violations} violations")


def check_norms() -> CheckResult:
    problems = []
    n_cosets = 0
    for G in grid_groups(32):
        for c in enumerate_cosets(G):
            n_cosets += 1
            v = a_norm(CoefficientVector.indicator(G, c.elements()))
            if abs(v - 1) > 1e-12:
                problems.append(("coset", G, c))
    Z4 = GroupSpec(2, (2,))
    v = a_norm(CoefficientVector.indicator(Z4, [(0,), (1,)]))
    if abs(v - (2 + 2 * math.sqrt(2)) / 4) > 1e-9:
        problems.append(("Z4", v))
    if abs(oracles.dense_norm(Z4, [(0,), (1,)]) - v) > 1e-12:
        problems.append(("Z4-dense", v))
    n_subsets = 0
    for G in grid_groups(16):
        norms = subset_norms(G)
        cosets = _oracle_coset_masks(G)
        for mask in range(1, 1 << G.order):
            n_subsets += 1
            if (abs(norms[mask] - 1) <= 1e-9) != (mask in cosets) or norms[mask] < 1 - 1e-9:
                problems.append(("iff", G, mask))
    return CheckResult(7, "norm-facts", not problems,
                       f"{n_cosets} coset indicators, {n_subsets} subsets, "
                       f"{len(problems)} problems")


def _oracle_coset_masks(G: GroupSpec) -> set[int]:
    _, add = oracles._addition_table(G)
    out = set()
    for S in oracles.closure_subgroups(G):
        for x in range(G.order):
            m = 0
            for s in S:
                m |= 1 << add[x][s]
            out.add(m)
    return out


def check_sunit(max_exp: int = 4) -> CheckResult:
    M = PrimeSet([2, 3])
    bad = []
    for e in range(max_exp + 1):
        lib = [t.entries for t in enumerate_zero_sums(M, 3, e)]
        if lib != oracles.naive_zero_sums_3([2, 3], e):
            bad.append(("zero", e))
    four = [t.entries for t in enumerate_power_sums(PrimeSet([3]), 2, 2, 2, 1)]
    eight = [t.entries for t in enumerate_power_sums(PrimeSet([3]), 2, 2, 3, 2)]
    if (3, 1) not in four:
        bad.append("4=3+1")
    if (9, -1) not in eight:
        bad.append("8=9-1")
    for R in range(0, 5):
        lib = [t.entries for t in enumerate_power_sums(PrimeSet([3, 5]), 2, 2, R, 3)]
        if lib != oracles.naive_power_sums_2([3, 5], 2, R, 3):
            bad.append(("power", R))
    return CheckResult(8, "sunit-oracle", not bad,
                       f"l=3 zero sums for exp bound 0..{max_exp} and l=2 power sums, "
                       f"{len(bad)} mismatches")


def _random_class(rng: random.Random) -> GroupClassSpec:
    return GroupClassSpec((rng.choice((2, 3, 5)), rng.randint(1, 4))
                          for _ in range(rng.randint(1, 3)))


def _widen(spec: GroupClassSpec, rng: random.Random) -> GroupClassSpec:
    fs = [(q, s + rng.randint(0, 2)) for q, s in spec.factors]
    fs += [(rng.choice((2, 3, 5, 7)), rng.randint(1, 3)) for _ in range(rng.randint(0, 2))]
    rng.shuffle(fs)
    return GroupClassSpec(fs)


def check_representable(seed: int = DEFAULT_SEED, trials: int = 20) -> CheckResult:
    P = GroupClassSpec.parse
    table = [(P("2^2"), P("2^3"), True), (P("2^2"), P("2^1,3^5"), False),
             (P("2^2,3^5,2^1"), P("2^2,3^5,2^1"), True), (P("5^1"), P("2^1,3^1"), False)]
    bad = [(str(s), str(t)) for s, t, want in table if representable(s, t) != want]
    rng = random.Random(seed)
    for _ in range(trials):
        A = _random_class(rng)
        B = _widen(A, rng)
        C = _widen(B, rng)
        if not representable(A, A):
            bad.append(("reflexive", str(A)))
        if not (representable(A, B) and representable(B, C) and representable(A, C)):
            bad.append(("transitive", str(A), str(B), str(C)))
        X, Y, Z = _random_class(rng), _random_class(rng), _random_class(rng)
        if representable(X, Y) and representable(Y, Z) and not representable(X, Z):
            bad.append(("transitive", str(X), str(Y), str(Z)))
    return CheckResult(9, "representable", not bad,
                       f"4 fixed cases + {trials} random chains, {len(bad)} failures")


def run_all(max_order: int = GRID_ORDER, samples: int = DEFAULT_SAMPLES,
            seed: int = DEFAULT_SEED) -> list[CheckResult]:
    return [
        check_subgroup_counts(max_order),
        check_cosets(max_order),
        check_gaussian(),
        check_bounds(),
        check_extraction(samples, seed),
        check_subgroup_types(max_order),
        check_norms(),
        check_sunit(),
        check_representable(seed),
    ]


def report(results: list[CheckResult], max_order: int, samples: int, seed: int) -> str:
    head = f"cosetforge verify: max_order={max_order} samples={samples} seed={seed}"
    passed = sum(r.passed for r in results)
    lines = [head] + [r.line() for r in results]
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"

"""Signed sums of coset indicators and the large-coset extraction.

A combination sum 1_{A_i} - sum 1_{B_j} is evaluated densely: every coset
becomes an index array into the lexicographic element order of the group.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .abelian import (Coset, GroupSpec, Subgroup, _check_cap, coset_from_json,
                      enumerate_cosets, enumerate_subgroups, hermite_form, intersection,
                      join, scaled, subgroup_from_generators, trivial_subgroup)
from .counting import lambda_constant
from .errors import ExtractionFailure, PreconditionError
from .qbinom import ilog

MINREP_CAP = 2 ** 5


@dataclass(frozen=True)
class SignedCosetCombination:
    group: GroupSpec
    positives: tuple[Coset, ...]
    negatives: tuple[Coset, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "positives", tuple(self.positives))
        object.__setattr__(self, "negatives", tuple(self.negatives))
        for c in self.positives + self.negatives:
            if c.group != self.group:
                raise PreconditionError(f"{c!r} does not live in {self.group!r}")

    @property
    def l1(self) -> int:
        return len(self.positives)

    @property
    def l2(self) -> int:
        return len(self.negatives)

    @property
    def L(self) -> int:
        return max(self.l1, self.l2)

    def to_json(self) -> dict:
        return {"group": self.group.to_json(),
                "positives": [c.to_json() for c in self.positives],
                "negatives": [c.to_json() for c in self.negatives]}

    @classmethod
    def from_json(cls, obj) -> "SignedCosetCombination":
        G = GroupSpec.from_json(obj["group"])
        return cls(G, [coset_from_json(G, c) for c in obj.get("positives", [])],
                   [coset_from_json(G, c) for c in obj.get("negatives", [])])


def evaluate(comb: SignedCosetCombination, x: Sequence[int]) -> int:
    x = comb.group.check(x)
    return (sum(1 for A in comb.positives if x in A)
            - sum(1 for B in comb.negatives if x in B))


def values(comb: SignedCosetCombination, cap: int | None = None) -> np.ndarray:
    """evaluate() at every element, in index order."""
    _check_cap(comb.group.order, cap)
    out = np.zeros(comb.group.order, dtype=np.int64)
    for A in comb.positives:
        out[A.element_indices] += 1
    for B in comb.negatives:
        out[B.element_indices] -= 1
    return out


def is_indicator(comb: SignedCosetCombination, cap: int | None = None) -> bool:
    v = values(comb, cap)
    return bool(np.all((v == 0) | (v == 1)))


def _elements_at(G: GroupSpec, idx: np.ndarray) -> set:
    return {tuple(int(c) for c in G.element_array[i]) for i in idx}


def materialize(comb: SignedCosetCombination, cap: int | None = None) -> set:
    v = values(comb, cap)
    if not np.all((v == 0) | (v == 1)):
        raise PreconditionError("combination is not an indicator function")
    return _elements_at(comb.group, np.flatnonzero(v))


# extraction -------------------------------------------------------------------

@dataclass
class Extraction:
    """Result of :func:`extract` together with its guarantee ledger."""

    coset: Coset
    K: int
    L: int
    lam: object
    lam_ceil: int
    start: Coset
    path: list = field(default_factory=list)
    backtracks: int = 0
    method: str = "descent"

    @property
    def size(self) -> int:
        return self.coset.size

    @property
    def guaranteed_log(self) -> int:
        return self.K - self.lam_ceil

    @property
    def guarantee_met(self) -> bool:
        e = self.guaranteed_log
        return e <= 0 or self.size >= self.coset.group.p ** e

    def ledger(self) -> dict:
        return {"K": self.K, "L": self.L, "Lambda": self.lam,
                "Lambda_ceil": self.lam_ceil, "size": self.size,
                "guaranteed_size_log": self.guaranteed_log,
                "guarantee_met": self.guarantee_met, "steps": len(self.path),
                "backtracks": self.backtracks, "method": self.method}


def _quotient_basis(H: Subgroup, D: Subgroup) -> list:
    """Elements of H whose images form a basis of the F_p-space H / D
    (D must contain pH)."""
    G = H.group
    basis, span = [], D
    for g in H.generators:
        if g not in span:
            basis.append(g)
            span = Subgroup(G, hermite_form(G.moduli, span.generators + (g,)))
    return basis


def _hyperplanes(H: Subgroup, C: Subgroup) -> list:
    """Every (T, g) with C <= T <= H, [H:T] = p, and g in H outside T."""
    G = H.group
    p = G.p
    D = join(C, scaled(H, p))
    basis = _quotient_basis(H, D)
    d = len(basis)
    out = []
    # functionals phi normalised so that the first nonzero coefficient is 1
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            phi = (0,) * lead + (1,) + tail
            kernel = [basis[i] for i in range(lead)]
            for i in range(lead + 1, d):
                kernel.append(G.sub(basis[i], G.scale(phi[i], basis[lead])))
            T = Subgroup(G, hermite_form(G.moduli, D.generators + tuple(kernel)))
            out.append((T, basis[lead]))
    return out


def _covered(idx: np.ndarray, mask: np.ndarray) -> bool:
    return bool(mask[idx].all())


def extract(comb: SignedCosetCombination, cap: int | None = None) -> Extraction:
    G = comb.group
    p = G.p
    v = values(comb, cap)
    if not np.all((v == 0) | (v == 1)):
        raise PreconditionError("combination is not an indicator function")
    size_u = int(v.sum())
    try:
        K = ilog(p, size_u)
    except ValueError:
        raise PreconditionError(f"#U = {size_u} is not a power of {p}") from None
    L = comb.L
    lam = lambda_constant(L, p)
    lam_ceil = lam.constants["ceil"]

    # identical +A and -A cancel without changing U
    pos = list(comb.positives)
    neg = []
    for B in comb.negatives:
        if B in pos:
            pos.remove(B)
        else:
            neg.append(B)
    neg.sort(key=lambda B: (-B.size, B.key))

    cover = np.zeros(G.order, dtype=bool)
    for B in neg:
        cover[B.element_indices] = True

    def free(C: Coset) -> int:
        return int((~cover[C.element_indices]).sum())

    start = min(pos, key=lambda A: (-free(A), A.key))
    if free(start) == 0:
        # every point of U sits under some B_j and is paid for by repeated
        # positives, so no A_i minus the B's is nonempty
        return _density_descent(comb, v, K, L, lam.text(), lam_ceil)
    result = Extraction(start, K, L, lam.text(), lam_ceil, start)

    def descend(Z: Coset, j: int, path: list):
        while j < len(neg):
            B = neg[j]
            common = np.intersect1d(Z.element_indices, B.element_indices, assume_unique=True)
            if common.size:
                break
            j += 1
        else:
            return Z, path
        C = intersection(Z.subgroup, B.subgroup)
        b = tuple(int(c) for c in G.element_array[common[0]])
        candidates = []
        for T, g in _hyperplanes(Z.subgroup, C):
            x = b
            for _ in range(p - 1):
                x = G.add(x, g)
                candidates.append(Coset.of(T, x))
        for Zn in sorted(set(candidates)):
            if _covered(Zn.element_indices, cover):
                continue
            got = descend(Zn, j + 1, path + [Zn])
            if got is not None:
                return got
            result.backtracks += 1
        return None

    got = descend(start, 0, [])
    if got is None:
        raise ExtractionFailure(
            "no splitting subgroup leaves an uncovered subcoset", comb)
    result.coset, result.path = got
    return result


def _subcosets(Z: Coset) -> list:
    """All cosets of index p inside Z."""
    G = Z.group
    out = set()
    for T, g in _hyperplanes(Z.subgroup, trivial_subgroup(G)):
        x = Z.representative
        for _ in range(G.p):
            out.add(Coset.of(T, x))
            x = G.add(x, g)
    return sorted(out)


def _density_descent(comb, v, K, L, lam, lam_ceil) -> Extraction:
    """Fallback when no positive coset reaches outside the negatives: walk
    down through index-p subcosets, always keeping the one with the most
    points of U.  The density of U never drops, so the walk ends inside U."""
    inside = v == 1

    def hits(C: Coset) -> int:
        return int(inside[C.element_indices].sum())

    Z = start = min(comb.positives, key=lambda A: (-hits(A), A.key))
    path = []
    while hits(Z) < Z.size:
        Z = min(_subcosets(Z), key=lambda C: (-hits(C), C.key))
        path.append(Z)
    return Extraction(Z, K, L, lam, lam_ceil, start, path, 0, "density")


def extract_coset(comb: SignedCosetCombination, cap: int | None = None) -> Coset:
    """A coset inside U of size at least p^(K - ceil(L + log_p L))."""
    return extract(comb, cap).coset


# minimal representation length -------------------------------------------------

class _CosetTable:
    """Indicator vectors of all cosets of a small group, indexed by point."""

    def __init__(self, G: GroupSpec):
        self.group = G
        self.cosets = enumerate_cosets(G)
        n = G.order
        self.vectors = []
        self.lookup = {}
        self.through = [[] for _ in range(n)]
        for c in self.cosets:
            vec = np.zeros(n, dtype=np.int8)
            vec[c.element_indices] = 1
            k = len(self.vectors)
            self.vectors.append(vec)
            self.lookup[vec.tobytes()] = (1, k)
            self.lookup[(-vec).tobytes()] = (-1, k)
            for i in c.element_indices:
                self.through[int(i)].append(k)


_TABLES: dict = {}


def _table(G: GroupSpec) -> _CosetTable:
    if G not in _TABLES:
        _TABLES[G] = _CosetTable(G)
    return _TABLES[G]


def _search(tab: _CosetTable, residual: np.ndarray, k: int, out: list) -> bool:
    """Can ``residual`` be written as exactly k signed coset indicators?"""
    nz = np.flatnonzero(residual)
    if nz.size == 0:
        # k > 0 here would only add cancelling +A -A pairs
        return k == 0
    if k == 0:
        return False
    if k == 1:
        hit = tab.lookup.get(residual.tobytes())
        if hit is None:
            return False
        out.append(hit)
        return True
    if np.abs(residual).max() > k:
        return False
    x = int(nz[0])
    sign = 1 if residual[x] > 0 else -1
    for c in tab.through[x]:
        nxt = residual - sign * tab.vectors[c]
        if _search(tab, nxt, k - 1, out):
            out.append((sign, c))
            return True
    return False


def minimal_representation(G: GroupSpec, U: Iterable, maxL: int,
                           cap: int = MINREP_CAP) -> SignedCosetCombination | None:
    """A shortest signed coset combination equal to 1_U, or None beyond maxL."""
    _check_cap(G.order, cap)
    target = np.zeros(G.order, dtype=np.int8)
    for x in U:
        target[G.index_of(G.check(x))] = 1
    tab = _table(G)
    for k in range(0, maxL + 1):
        out: list = []
        if _search(tab, target.copy(), k, out):
            pos = [tab.cosets[c] for s, c in out if s > 0]
            neg = [tab.cosets[c] for s, c in out if s < 0]
            return SignedCosetCombination(G, sorted(pos), sorted(neg))
    return None


def minimal_representation_length(G: GroupSpec, U: Iterable, maxL: int,
                                  cap: int = MINREP_CAP) -> int | None:
    """Least l1 + l2 with 1_U = sum 1_{A_i} - sum 1_{B_j}; 0 for empty U."""
    rep = minimal_representation(G, U, maxL, cap)
    return None if rep is None else rep.l1 + rep.l2


# random combinations -------------------------------------------------------------

UNIFORM_SUBGROUP_LIMIT = 20000


def random_subgroup(G: GroupSpec, rng: random.Random, log_order: int | None = None,
                    inside: Subgroup | None = None) -> Subgroup:
    """Span of random elements of ``inside`` (default G), grown until the
    order reaches p^log_order or more."""
    gens = inside.generators if inside is not None else None
    top = G.weight if inside is None else ilog(G.p, inside.order)
    if log_order is None:
        log_order = rng.randint(0, top)
    H = trivial_subgroup(G)
    while ilog(G.p, H.order) < log_order:
        if gens is None:
            x = tuple(rng.randrange(m) for m in G.moduli)
        else:
            x = G.zero()
            for g in gens:
                x = G.add(x, G.scale(rng.randrange(G.p ** G.type.part(1)), g))
        if x not in H:
            H = Subgroup(G, hermite_form(G.moduli, H.generators + (x,)))
    return H


class _SubgroupSampler:
    def __init__(self, G: GroupSpec):
        self.group = G
        self.listing = None
        if G.order <= 2 ** 6:
            subs = enumerate_subgroups(G)
            if len(subs) <= UNIFORM_SUBGROUP_LIMIT:
                self.listing = subs

    def draw(self, rng: random.Random) -> Subgroup:
        if self.listing is not None:
            return rng.choice(self.listing)
        return random_subgroup(self.group, rng)


def _random_point(G: GroupSpec, rng: random.Random) -> tuple:
    return tuple(rng.randrange(m) for m in G.moduli)


def random_indicator_combination(G: GroupSpec, rng: random.Random, max_l1: int = 4,
                                 max_l2: int = 4, p_power: bool = True,
                                 max_tries: int = 100000) -> SignedCosetCombination:
    """Rejection sample a combination that is an indicator (and, with
    ``p_power``, has #U a power of p).  Negatives are subcosets of positives
    so that the indicator condition is met reasonably often."""
    sampler = _SUBGROUP_SAMPLERS.get(G)
    if sampler is None:
        sampler = _SUBGROUP_SAMPLERS[G] = _SubgroupSampler(G)
    for _ in range(max_tries):
        l1 = rng.randint(1, max_l1)
        l2 = rng.randint(0, max_l2)
        pos = []
        for _ in range(l1):
            H = sampler.draw(rng)
            pos.append(Coset.of(H, _random_point(G, rng)))
        neg = []
        for _ in range(l2):
            A = rng.choice(pos)
            Hb = random_subgroup(G, rng, inside=A.subgroup)
            x = rng.choice(A.element_array.tolist())
            neg.append(Coset.of(Hb, x))
        comb = SignedCosetCombination(G, pos, neg)
        v = values(comb)
        if not np.all((v == 0) | (v == 1)):
            continue
        n = int(v.sum())
        if n == 0:
            continue
        if p_power and G.p ** round(math.log(n, G.p)) != n:
            continue
        return comb
    raise RuntimeError("rejection sampling did not find a combination")


_SUBGROUP_SAMPLERS: dict = {}

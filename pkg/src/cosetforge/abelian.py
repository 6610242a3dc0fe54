"""Finite abelian p-groups Z_{p^a1} + ... + Z_{p^an} and their subgroups.

Elements are tuples of residues.  A subgroup H is stored through the
lattice L = {v in Z^n : v mod moduli lies in H}, which always contains the
relation lattice R = diag(p^a1, ..., p^an).  L has a unique row-style
Hermite normal form: upper triangular rows b_1..b_n, pivots d_i dividing
p^ai, entries above each pivot reduced into [0, d_i).  That matrix is the
canonical key of H, and #H = #G / prod(d_i).
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapExceeded, PreconditionError
from .partition import Partition, as_partition, conjugate, contains, weight
from .qbinom import ilog, require_prime

DEFAULT_CAP = 2 ** 12

Element = tuple


def enumeration_cap() -> int:
    """Maximum group order for brute-force enumeration (env COSETFORGE_CAP)."""
    env = os.environ.get("COSETFORGE_CAP")
    return int(env) if env else DEFAULT_CAP


def _check_cap(order: int, cap: int | None) -> None:
    cap = enumeration_cap() if cap is None else cap
    if order > cap:
        raise CapExceeded(f"group order {order} exceeds enumeration cap {cap}")


@dataclass(frozen=True)
class GroupSpec:
    p: int
    type: Partition

    def __post_init__(self):
        require_prime(self.p)
        object.__setattr__(self, "type", as_partition(self.type))

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p ** a for a in self.type.parts)

    @property
    def rank(self) -> int:
        return len(self.type)

    @property
    def weight(self) -> int:
        return weight(self.type)

    @property
    def order(self) -> int:
        return self.p ** self.weight

    def zero(self) -> Element:
        return (0,) * self.rank

    def check(self, x: Sequence[int]) -> Element:
        x = tuple(int(c) for c in x)
        if len(x) != self.rank:
            raise PreconditionError(
                f"dimension mismatch: {x} in a group of rank {self.rank}")
        for c, m in zip(x, self.moduli):
            if not 0 <= c < m:
                raise PreconditionError(f"coordinate out of range: {x}")
        return x

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple((a - b) % m for a, b, m in zip(x, y, self.moduli))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % m for a, m in zip(x, self.moduli))

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic order (which is index order)."""
        return itertools.product(*(range(m) for m in self.moduli))

    @cached_property
    def _radix(self) -> np.ndarray:
        w = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            w[i] = w[i + 1] * self.moduli[i + 1]
        return np.array(w, dtype=np.int64)

    def index_of(self, x: Element) -> int:
        return int(np.dot(np.asarray(x, dtype=np.int64), self._radix)) if x else 0

    def indices(self, coords: np.ndarray) -> np.ndarray:
        """Row-wise element indices of an (m, rank) coordinate array."""
        if self.rank == 0:
            return np.zeros(len(coords), dtype=np.int64)
        return coords.astype(np.int64) @ self._radix

    @cached_property
    def element_array(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*(np.arange(m) for m in self.moduli), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def to_json(self) -> dict:
        return {"p": self.p, "type": self.type.to_json()}

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        return cls(int(obj["p"]), Partition(obj["type"]))

    def __repr__(self) -> str:
        return f"GroupSpec(p={self.p}, type={self.type.parts})"


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_form(moduli: Sequence[int], rows: Iterable[Sequence[int]]) -> tuple:
    """Canonical HNF of the lattice spanned by ``rows`` and diag(moduli)."""
    n = len(moduli)
    work = [[int(x) % m for x, m in zip(r, moduli)] for r in rows]
    basis = []
    for c in range(n):
        pivot = [0] * n
        pivot[c] = moduli[c]
        rest = []
        for r in work:
            if r[c] == 0:
                rest.append(r)
                continue
            a, b = pivot[c], r[c]
            g, x, y = _xgcd(a, b)
            new = [x * u + y * v for u, v in zip(pivot, r)]
            other = [(b // g) * u - (a // g) * v for u, v in zip(pivot, r)]
            for k in range(c + 1, n):
                new[k] %= moduli[k]
                other[k] %= moduli[k]
            pivot = new
            if any(other):
                rest.append(other)
        basis.append(pivot)
        work = rest
    for c in range(n):
        d = basis[c][c]
        for j in range(c):
            q = basis[j][c] // d
            if q:
                basis[j] = [u - q * v for u, v in zip(basis[j], basis[c])]
    return tuple(tuple(r) for r in basis)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup in canonical form; build with :func:`subgroup_from_generators`."""

    group: GroupSpec
    hnf: tuple

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(self.hnf[i][i] for i in range(self.group.rank))

    @cached_property
    def index(self) -> int:
        out = 1
        for d in self.pivots:
            out *= d
        return out

    @property
    def order(self) -> int:
        return self.group.order // self.index

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        gens = []
        for row in self.hnf:
            x = tuple(v % m for v, m in zip(row, self.group.moduli))
            if any(x):
                gens.append(x)
        return tuple(gens)

    @property
    def key(self) -> tuple:
        return (self.order, self.hnf)

    def __lt__(self, other: "Subgroup") -> bool:
        return self.key < other.key

    def reduce(self, x: Element) -> Element:
        """Lexicographically least element of the coset x + H."""
        moduli = self.group.moduli
        x = list(x)
        for c, row in enumerate(self.hnf):
            q = x[c] // row[c]
            if q:
                for k in range(c, len(x)):
                    x[k] = (x[k] - q * row[k]) % moduli[k]
        return tuple(x)

    def __contains__(self, x: Element) -> bool:
        return not any(self.reduce(x))

    @cached_property
    def element_array(self) -> np.ndarray:
        """(order, rank) array of members, lexicographically sorted."""
        G = self.group
        if G.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        moduli = np.array(G.moduli, dtype=np.int64)
        acc = np.zeros((1, G.rank), dtype=np.int64)
        for c, row in enumerate(self.hnf):
            steps = moduli[c] // row[c]
            if steps == 1:
                continue
            mult = np.arange(steps, dtype=np.int64)[:, None] * np.array(row, dtype=np.int64)
            acc = (acc[:, None, :] + mult[None, :, :]).reshape(-1, G.rank) % moduli
        order = np.lexsort(acc.T[::-1])
        return acc[order]

    @cached_property
    def element_indices(self) -> np.ndarray:
        return np.sort(self.group.indices(self.element_array))

    def elements(self) -> list[Element]:
        return [tuple(int(v) for v in r) for r in self.element_array]

    def to_json(self) -> dict:
        return {"group": self.group.to_json(),
                "generators": [list(g) for g in self.generators]}

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, generators={list(self.generators)})"


def subgroup_from_generators(G: GroupSpec, gens: Iterable[Sequence[int]]) -> Subgroup:
    gens = [G.check(g) for g in gens]
    return Subgroup(G, hermite_form(G.moduli, gens))


def subgroup_from_json(obj) -> Subgroup:
    G = GroupSpec.from_json(obj["group"])
    return subgroup_from_generators(G, obj.get("generators", []))


def trivial_subgroup(G: GroupSpec) -> Subgroup:
    return subgroup_from_generators(G, [])


def whole_group(G: GroupSpec) -> Subgroup:
    basis = [tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)]
    return subgroup_from_generators(G, basis)


def membership(H: Subgroup, x: Sequence[int]) -> bool:
    return H.group.check(x) in H


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    return Subgroup(H.group, hermite_form(H.group.moduli, H.generators + K.generators))


def scaled(H: Subgroup, k: int) -> Subgroup:
    """The subgroup k*H."""
    G = H.group
    return Subgroup(G, hermite_form(G.moduli, [G.scale(k, g) for g in H.generators]))


def intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    small, big = (H, K) if H.order <= K.order else (K, H)
    G = H.group
    span = trivial_subgroup(G)
    for x in small.elements():
        if x in big and x not in span:
            span = Subgroup(G, hermite_form(G.moduli, span.generators + (x,)))
    return span


def _orders_of_multiples(H: Subgroup) -> list[int]:
    """[log_p #(p^j H) for j = 0, 1, ...] down to the trivial group."""
    G = H.group
    logs = [ilog(G.p, H.order)]
    cur = H
    while logs[-1] > 0:
        cur = scaled(cur, G.p)
        logs.append(ilog(G.p, cur.order))
    return logs


def subgroup_type(H: Subgroup) -> Partition:
    """The partition beta with H isomorphic to sum Z_{p^beta_i}.

    rank(p^j H / p^{j+1} H) is the (j+1)-th part of the conjugate of beta.
    """
    logs = _orders_of_multiples(H)
    conj = [logs[j] - logs[j + 1] for j in range(len(logs) - 1)]
    return conjugate(Partition(conj))


def quotient_type(H: Subgroup) -> Partition:
    """Type of G/H, via #p^j(G/H) = #(p^j G + H) / #H."""
    G = H.group
    p = G.p
    logs = []
    j = 0
    while True:
        pj = [G.scale(p ** j, g) for g in whole_group(G).generators]
        logs.append(ilog(p, Subgroup(G, hermite_form(G.moduli, pj + list(H.generators))).order)
                    - ilog(p, H.order))
        if logs[-1] == 0:
            break
        j += 1
    return conjugate(Partition(logs[j] - logs[j + 1] for j in range(len(logs) - 1)))


@dataclass(frozen=True)
class Coset:
    """x + H, stored with the lexicographically least member as representative."""

    subgroup: Subgroup
    representative: Element

    @classmethod
    def of(cls, H: Subgroup, x: Sequence[int]) -> "Coset":
        return cls(H, H.reduce(H.group.check(x)))

    @property
    def group(self) -> GroupSpec:
        return self.subgroup.group

    @property
    def size(self) -> int:
        return self.subgroup.order

    def __len__(self) -> int:
        return self.subgroup.order

    @property
    def key(self) -> tuple:
        return (self.subgroup.key, self.representative)

    def __lt__(self, other: "Coset") -> bool:
        return self.key < other.key

    def __contains__(self, x: Element) -> bool:
        return self.subgroup.reduce(x) == self.representative

    @cached_property
    def element_array(self) -> np.ndarray:
        moduli = np.array(self.group.moduli, dtype=np.int64)
        rep = np.array(self.representative, dtype=np.int64)
        return (self.subgroup.element_array + rep) % moduli

    @cached_property
    def element_indices(self) -> np.ndarray:
        return np.sort(self.group.indices(self.element_array))

    def elements(self) -> list[Element]:
        return sorted(tuple(int(v) for v in r) for r in self.element_array)

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.subgroup.generators],
                "representative": list(self.representative)}

    def __repr__(self) -> str:
        return f"Coset({list(self.representative)} + <{list(self.subgroup.generators)}>)"


def coset_from_json(G: GroupSpec, obj) -> Coset:
    H = subgroup_from_generators(G, obj.get("generators", []))
    return Coset.of(H, obj.get("representative", G.zero()))


def coset_from_elements(G: GroupSpec, elems: Iterable[Element]) -> Coset | None:
    """The coset with exactly these elements, or None if the set is not one."""
    elems = sorted(set(elems))
    if not elems:
        return None
    x0 = elems[0]
    diffs = [G.sub(x, x0) for x in elems]
    H = trivial_subgroup(G)
    for d in diffs:
        if d not in H:
            H = Subgroup(G, hermite_form(G.moduli, H.generators + (d,)))
            if H.order > len(elems):
                return None
    if H.order != len(elems):
        return None
    return Coset(H, x0)


def _log_target(G: GroupSpec, order: int | None) -> int | None:
    if order is None:
        return None
    if order < 1 or G.order % order:
        return -1
    try:
        return G.weight - ilog(G.p, order)
    except ValueError:
        return -1


def iter_subgroup_hnfs(G: GroupSpec, order: int | None = None) -> Iterator[tuple]:
    """Depth-first walk over every HNF lattice between R and Z^n.

    Rows are chosen bottom-up.  Row i is (0.., p^e, t) with t reduced
    against the rows already fixed; it is admissible iff p^(a_i - e) * t
    already lies in the lattice of the lower rows (so p^ai e_i is in L).
    """
    n, p, alpha, moduli = G.rank, G.p, G.type.parts, G.moduli
    target = _log_target(G, order)
    if target == -1:
        return
    rows: list = [None] * n
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + alpha[i]

    def in_lower(v: list[int], i: int) -> bool:
        v = list(v)
        for k in range(i + 1, n):
            row = rows[k]
            q, rem = divmod(v[k], row[k])
            if rem:
                return False
            if q:
                for j in range(k, n):
                    v[j] -= q * row[j]
        return True

    def rec(i: int, used: int) -> Iterator[tuple]:
        if i < 0:
            yield tuple(rows)
            return
        for e in range(alpha[i] + 1):
            if target is not None:
                # used counts log_p of prod(pivots) for rows below i
                if used + e > target or used + e + suffix[0] - suffix[i] < target:
                    continue
            d, m = p ** e, p ** (alpha[i] - e)
            box = [range(rows[k][k]) for k in range(i + 1, n)]
            for t in itertools.product(*box):
                full = [0] * (i + 1) + [m * v for v in t]
                if not in_lower(full, i):
                    continue
                rows[i] = (0,) * i + (d,) + t
                yield from rec(i - 1, used + e)
        rows[i] = None

    yield from rec(n - 1, 0)


def enumerate_subgroups(G: GroupSpec, order: int | None = None,
                        cap: int | None = None) -> list[Subgroup]:
    """Every subgroup of the given order (all subgroups if ``order`` is None),
    sorted by canonical key."""
    _check_cap(G.order, cap)
    return sorted(Subgroup(G, h) for h in iter_subgroup_hnfs(G, order))


def enumerate_cosets(G: GroupSpec, order: int | None = None,
                     cap: int | None = None) -> list[Coset]:
    """Every coset of every subgroup of the given order.

    The reduced representatives of H are exactly the points of the box
    prod [0, d_i) cut out by the HNF pivots.
    """
    out = []
    for H in enumerate_subgroups(G, order, cap):
        for rep in itertools.product(*(range(d) for d in H.pivots)):
            out.append(Coset(H, tuple(rep)))
    return sorted(out)


def order(G: GroupSpec) -> int:
    return G.order


def _rectangular_exponent(G: GroupSpec) -> int:
    parts = G.type.parts
    if not parts or any(a != parts[0] for a in parts):
        raise PreconditionError(f"ambient type {parts} is not rectangular")
    return parts[0]


def max_free_rank(H: Subgroup, a: int) -> int:
    """Number of Z_{p^a} summands of H; H contains (Z_{p^a})^(k+1) iff this is > k."""
    a0 = _rectangular_exponent(H.group)
    if a != a0:
        raise PreconditionError(f"exponent {a} does not match ambient type {H.group.type.parts}")
    return sum(1 for b in subgroup_type(H).parts if b == a)


def lemma3_exponent(N: int, a: int, k: int) -> int:
    """log_p of the cap a*k + (a-1)*(N-k) on subgroups without (Z_{p^a})^(k+1)."""
    return a * k + (a - 1) * (N - k)


def lemma3_check(G: GroupSpec, H: Subgroup, k: int, strict: bool = True) -> bool:
    """Evaluate: max_free_rank(H) <= k implies #H < p^(ak + (a-1)(N-k)).

    ``strict=False`` evaluates the non-strict form (<=).  The strict form
    fails whenever the bound is attained, e.g. H = pG.
    """
    if H.group != G:
        raise PreconditionError("subgroup does not belong to the ambient group")
    a = _rectangular_exponent(G)
    if max_free_rank(H, a) > k:
        return True
    bound = G.p ** lemma3_exponent(G.rank, a, k)
    return H.order < bound if strict else H.order <= bound


def lemma4_holds(H: Subgroup) -> bool:
    return contains(H.group.type, subgroup_type(H))


def lemma3_survey(G: GroupSpec, cap: int | None = None) -> dict:
    """Exhaustive evaluation of lemma3_check over all subgroups and all k.

    Reports violations of the non-strict bound and, separately, the cases
    where the bound is attained (which falsify the strict form).
    """
    a = _rectangular_exponent(G)
    N = G.rank
    checked, violations, equality = 0, [], []
    for H in enumerate_subgroups(G, cap=cap):
        free = max_free_rank(H, a)
        for k in range(N + 1):
            if free > k:
                continue
            checked += 1
            bound = G.p ** lemma3_exponent(N, a, k)
            if H.order > bound:
                violations.append((H, k))
            elif H.order == bound:
                equality.append((H, k))
    return {"checked": checked, "violations": violations, "equality": equality}

"""Integer partitions as group types.

A partition is stored by its positive parts only; reading past the end
yields 0, so containment and conjugation are total.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x < 0 for x in parts):
            raise ValueError(f"negative part in {parts}")
        # trailing zeros are allowed on input and dropped
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(x == 0 for x in parts):
            raise ValueError(f"zero part before a positive one in {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        text = text.strip().strip("[]()")
        if not text:
            return cls()
        return cls(int(x) for x in text.split(","))

    def part(self, i: int) -> int:
        """1-based access; 0 beyond the last part."""
        if i < 1:
            raise IndexError(i)
        return self.parts[i - 1] if i <= len(self.parts) else 0

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __repr__(self) -> str:
        return f"Partition({self.parts})"

    def to_json(self) -> list[int]:
        return list(self.parts)


def as_partition(obj) -> Partition:
    if isinstance(obj, Partition):
        return obj
    if isinstance(obj, str):
        return Partition.parse(obj)
    return Partition(obj)


def conjugate(beta) -> Partition:
    beta = as_partition(beta)
    if not beta.parts:
        return Partition()
    return Partition(
        sum(1 for b in beta.parts if b >= i) for i in range(1, beta.parts[0] + 1))


def weight(beta) -> int:
    return sum(as_partition(beta).parts)


def contains(alpha, beta) -> bool:
    """True iff ``beta`` fits inside ``alpha`` part by part."""
    alpha, beta = as_partition(alpha), as_partition(beta)
    if len(beta) > len(alpha):
        return False
    return all(b <= a for a, b in zip(alpha.parts, beta.parts))


def enumerate_subtypes(alpha, r: int) -> list[Partition]:
    """All partitions of weight ``r`` contained in ``alpha``.

    Ordered lexicographically descending, so ``(2,)`` precedes ``(1, 1)``.
    """
    alpha = as_partition(alpha)
    if r < 0 or r > weight(alpha):
        return []
    bounds = alpha.parts

    def fill(i: int, remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        if i >= len(bounds):
            return
        # the tail can hold at most cap per remaining slot
        if min(cap, bounds[i]) * (len(bounds) - i) < remaining:
            return
        for v in range(min(cap, bounds[i], remaining), 0, -1):
            for rest in fill(i + 1, remaining - v, v):
                yield (v,) + rest

    return [Partition(t) for t in fill(0, r, r)]


def partitions_of(n: int) -> Iterator[Partition]:
    """Every partition of ``n``, lexicographically descending."""
    def gen(n: int, cap: int) -> Iterator[tuple[int, ...]]:
        if n == 0:
            yield ()
            return
        for k in range(min(n, cap), 0, -1):
            for rest in gen(n - k, k):
                yield (k,) + rest

    for t in gen(n, n):
        yield Partition(t)

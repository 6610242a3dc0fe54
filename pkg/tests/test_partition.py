from hypothesis import given

from cosetforge.partition import (Partition, conjugate, contains, enumerate_subtypes,
                                  partitions_of, weight)
import pytest

from conftest import partitions


def test_conjugate_examples():
    assert conjugate((3, 1)) == Partition((2, 1, 1))
    assert conjugate(()) == Partition()
    assert conjugate((4, 4, 4)) == Partition((3, 3, 3, 3))


def test_weight_examples():
    assert weight((3, 1)) == 4
    assert weight(()) == 0
    assert weight((2, 2, 1)) == weight(conjugate((2, 2, 1))) == 5


def test_contains_examples():
    assert contains((2, 2), (2, 1))
    assert not contains((2, 2), (3,))
    assert contains((3, 1), (3, 1))
    assert not contains((1,), (1, 1))


def test_enumerate_subtypes_examples():
    assert enumerate_subtypes((1, 1, 1), 1) == [Partition((1,))]
    assert enumerate_subtypes((2, 1), 2) == [Partition((2,)), Partition((1, 1))]
    assert enumerate_subtypes((2, 2), 5) == []
    assert enumerate_subtypes((2, 2), 0) == [Partition()]


def test_invalid_partitions_rejected():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))
    assert Partition((2, 1, 0, 0)) == Partition((2, 1))


def test_part_reads_zero_past_end():
    b = Partition((3, 1))
    assert [b.part(i) for i in range(1, 5)] == [3, 1, 0, 0]


@given(partitions(max_parts=12, max_part=12))
def test_conjugation_is_an_involution(beta):
    assert conjugate(conjugate(beta)) == beta
    assert weight(conjugate(beta)) == weight(beta)


@given(partitions(max_parts=5, max_part=4))
def test_subtypes_match_filtered_partitions(alpha):
    total = 0
    for r in range(weight(alpha) + 1):
        got = enumerate_subtypes(alpha, r)
        brute = [b for b in partitions_of(r) if contains(alpha, b)]
        assert got == brute
        assert got == sorted(got, key=lambda b: b.parts, reverse=True)
        total += len(got)
    # a subtype is a sub-diagram; count them by direct recursion over rows
    def count(i, cap):
        if i == len(alpha):
            return 1
        return sum(count(i + 1, v) for v in range(min(cap, alpha.part(i + 1)) + 1))
    assert total == count(0, alpha.part(1))


def test_partitions_of_counts():
    assert [sum(1 for _ in partitions_of(n)) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]

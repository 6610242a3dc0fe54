import math
import random

import pytest
from hypothesis import given, strategies as st

from cosetforge.abelian import GroupSpec, enumerate_cosets, enumerate_subgroups
from cosetforge.counting import (BoundValue, GroupClassSpec, admissible_gamma_types,
                                 coset_count_bounds, count_cosets, count_subgroups,
                                 distortion_floor, evertse_bound, green_sanders_L,
                                 lambda_ceiling, lambda_constant, representable,
                                 subgroup_count_lower_bound, subgroup_count_upper_bound)
from cosetforge.errors import PreconditionError
from cosetforge.partition import partitions_of

from conftest import partitions


def test_count_examples():
    assert count_subgroups(2, (1, 1, 1), 1) == 7
    assert count_subgroups(5, (2, 1), 0) == 1
    assert count_subgroups(2, (2, 1), 1) == 3
    assert count_subgroups(2, (2, 1), 2) == 3
    assert count_subgroups(2, (2, 1), 4) == 0
    assert count_cosets(2, (1, 1), 1) == 6
    assert count_cosets(3, (2, 1), 3) == 1
    assert count_cosets(2, (1, 1, 1), 2) == 14
    assert count_cosets(2, (1,), 3) == 0
    with pytest.raises(PreconditionError):
        count_subgroups(4, (1,), 1)


@pytest.mark.parametrize("p,w", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 1), (3, 2), (3, 3)])
def test_counts_match_listing(p, w):
    for alpha in partitions_of(w):
        G = GroupSpec(p, alpha)
        subs = enumerate_subgroups(G)
        cosets = enumerate_cosets(G)
        for r in range(w + 1):
            assert count_subgroups(p, alpha, r) == sum(1 for H in subs if H.order == p ** r)
            assert count_cosets(p, alpha, r) == sum(1 for C in cosets if C.size == p ** r)


@given(partitions(max_parts=4, max_part=4), st.sampled_from([2, 3, 5]))
def test_counts_self_dual_and_sum(alpha, p):
    w = sum(alpha.parts)
    counts = [count_subgroups(p, alpha, r) for r in range(w + 1)]
    assert counts == counts[::-1]
    assert counts[0] == counts[-1] == 1


def test_upper_bound_examples():
    assert subgroup_count_upper_bound(2, 3, 1, 1).value == 16
    assert subgroup_count_upper_bound(2, 2, 2, 0).value == 1
    assert subgroup_count_upper_bound(3, 2, 1, 1).value == 27
    with pytest.raises(PreconditionError):
        subgroup_count_upper_bound(2, 2, 1, 3)


def test_lower_bound_examples():
    b = subgroup_count_lower_bound(2, 2, 2, 1, 1)
    assert b.text() == "4" and b.holds_for(15)
    assert subgroup_count_lower_bound(2, 1, 2, 0, 1).text() == "1"
    b = subgroup_count_lower_bound(3, 2, 2, 1, 1)
    assert b.text() == "9" and b.holds_for(40) and not b.holds_for(8)
    with pytest.raises(PreconditionError):
        subgroup_count_lower_bound(2, 2, 1, 1, 1)


def test_fractional_exponent_compared_exactly():
    # 2^(3/2 * 2 * 1 - 2) = 2^1 for a = 3, N = 2, r = 1, b1 = 1 ... exponent 1
    b = subgroup_count_lower_bound(2, 2, 3, 1, 1)
    assert b.exponent == 1
    b = subgroup_count_lower_bound(2, 3, 3, 1, 1)
    assert b.exponent == pytest.approx(2.5)
    # 2^2.5 = 5.657: 5 is below, 6 is above
    assert not b.holds_for(5) and b.holds_for(6)


@pytest.mark.parametrize("p", [2, 3])
def test_bound_sandwich(p):
    for N in range(1, 5):
        for a in (2, 3):
            for r in range(N * a + 1):
                assert subgroup_count_upper_bound(p, N, a, r).holds_for(count_subgroups(p, (a,) * N, r))
                lower = subgroup_count_lower_bound(p, N, a, r, r)
                for gamma in admissible_gamma_types(N, a):
                    assert lower.holds_for(count_subgroups(p, gamma, r))


def test_coset_bounds_examples():
    lo, hi = coset_count_bounds(2, 4, 2, 2)
    assert lo.holds_for(count_cosets(2, (2,) * 4, 2)) and hi.holds_for(count_cosets(2, (2,) * 4, 2))
    for gamma in admissible_gamma_types(4, 2):
        assert lo.holds_for(count_cosets(2, gamma, 2))
    lo, hi = coset_count_bounds(2, 6, 2, 3)
    assert hi.holds_for(count_cosets(2, (2,) * 6, 3))
    for gamma in admissible_gamma_types(6, 2):
        assert lo.holds_for(count_cosets(2, gamma, 3))
    lo, hi = coset_count_bounds(3, 2, 2, 0, slack_coeff=0)
    assert hi.value >= 1
    lo, hi = coset_count_bounds(2, 6, 2, R=2)
    assert hi.constants["r"] == 3
    with pytest.raises(PreconditionError):
        coset_count_bounds(2, 5, 2, R=2)
    with pytest.raises(PreconditionError):
        coset_count_bounds(2, 6, 2, 2, R=2)


def test_lambda_examples():
    assert lambda_constant(8, 2).text() == "11"
    assert lambda_constant(1, 7).text() == "1"
    assert lambda_constant(9, 3).text() == "11"
    for L in range(1, 40):
        for p in (2, 3, 5):
            exact = L + math.log(L, p)
            assert lambda_ceiling(L, p) == math.ceil(exact - 1e-12)
            assert float(lambda_constant(L, p).value) == pytest.approx(exact)


def test_green_sanders_examples():
    assert float(green_sanders_L(1, 0).value) == pytest.approx(math.e)
    assert green_sanders_L(2, 0.1).log_value > green_sanders_L(1, 0.1).log_value
    b = green_sanders_L(1.5, 1)
    assert b.symbolic == "exp(exp(5.0625))"
    assert float(b.log_value) == pytest.approx(math.exp(5.0625))
    big = green_sanders_L(3, 1)
    assert big.value is None and big.text() == "exp(exp(81.0))"


def test_evertse_examples():
    assert evertse_bound(2, 1, 0).text() == "1"
    assert evertse_bound(3, 1, 1).text() == str(3 ** 27)
    logs = [evertse_bound(n, 2, 0.5).log_value for n in range(1, 30)]
    assert logs == sorted(logs)
    assert evertse_bound(200, 1, 1).value is None
    with pytest.raises(PreconditionError):
        evertse_bound(0, 1, 1)


def test_distortion_floor():
    n = math.ceil(math.e ** math.e)
    assert float(distortion_floor(n, "p_group", 1).value) == pytest.approx(1.0, abs=0.01)
    n = math.ceil(math.e ** math.e ** math.e)
    assert n == 3814280
    assert float(distortion_floor(n, "no_p_subgroup", 1).value) == pytest.approx(1.0, abs=1e-6)
    vals = [distortion_floor(n, "p_group", 2).value for n in range(16, 5000, 37)]
    assert vals == sorted(vals)
    with pytest.raises(PreconditionError):
        distortion_floor(15, "p_group", 1)
    with pytest.raises(PreconditionError):
        distortion_floor(3814279, "no_p_subgroup", 1)
    with pytest.raises(PreconditionError):
        distortion_floor(100, "mixed", 1)


def test_representable_examples():
    P = GroupClassSpec.parse
    assert representable(P("2^2"), P("2^3"))
    assert not representable(P("2^2"), P("2^1,3^5"))
    assert representable(P("2^2,3^1"), P("2^2,3^1"))
    assert not representable(P("5^1"), P("2^1,3^1"))
    assert P("2^2,3").factors == ((2, 2), (3, 1))
    with pytest.raises(PreconditionError):
        P("4^2")
    with pytest.raises(PreconditionError):
        P("2^0")


def test_representable_reflexive_transitive():
    rng = random.Random(11)

    def rand():
        return GroupClassSpec((rng.choice((2, 3, 5)), rng.randint(1, 3)) for _ in range(rng.randint(0, 3)))

    specs = [rand() for _ in range(25)]
    for A in specs:
        assert representable(A, A)
        for B in specs:
            for C in specs:
                if representable(A, B) and representable(B, C):
                    assert representable(A, C)


def test_bound_json():
    j = lambda_constant(5, 2).to_json()
    assert j["kind"] == "exact" and j["constants"]["ceil"] == 8
    with pytest.raises(ValueError):
        BoundValue("sideways", 1)

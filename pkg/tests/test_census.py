import pytest

from cosetforge.abelian import GroupSpec, enumerate_subgroups, subgroup_type
from cosetforge.census import census
from cosetforge.oracles import closure_subgroups
from cosetforge.qbinom import ilog


@pytest.mark.parametrize("p,alpha", [(2, (1,)), (2, (1, 1, 1)), (2, (2, 1)), (2, (3, 2, 1)),
                                     (3, (1, 1)), (3, (2, 1)), (2, (2, 2, 1, 1)), (3, (2,))])
def test_census_matches_closure(p, alpha):
    G = GroupSpec(p, alpha)
    c = census(G)
    by_order = [0] * (G.weight + 1)
    for S in closure_subgroups(G):
        by_order[ilog(p, len(S))] += 1
    assert list(c.counts) == by_order
    assert c.coset_counts == tuple(n * p ** (G.weight - r) for r, n in enumerate(by_order))
    assert c.type_violations == 0


@pytest.mark.parametrize("p,alpha", [(2, (2, 2)), (2, (3, 1)), (2, (1, 1, 1, 1)), (3, (2, 1)), (2, (2, 1, 1))])
def test_free_rank_profile(p, alpha):
    G = GroupSpec(p, alpha)
    c = census(G)
    best = [-1] * (G.rank + 1)
    for H in enumerate_subgroups(G):
        free = sum(1 for b in subgroup_type(H).parts if b == alpha[0])
        best[free] = max(best[free], ilog(p, H.order))
    assert list(c.max_log_by_free_rank) == best


def test_trivial_group():
    c = census(GroupSpec(2, ()))
    assert c.counts == (1,) and c.total == 1

import cmath
import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from cosetforge.abelian import GroupSpec, enumerate_cosets, enumerate_subgroups
from cosetforge.errors import CapExceeded, PreconditionError
from cosetforge.oracles import dense_norm
from cosetforge.spectral import (CoefficientVector, InjectionTable, a_norm, character_value,
                                 coset_masks, default_witnesses, distortion_witness,
                                 idempotent_survey, is_coset, mask_elements, pushforward,
                                 subset_norms, survey_csv)

from conftest import small_groups

Z2 = GroupSpec(2, (1,))
Z4 = GroupSpec(2, (2,))
V = GroupSpec(2, (1, 1))


def test_character_examples():
    for g in Z4.elements():
        assert character_value(Z4, (0,), g) == 1
    assert character_value(Z2, (1,), (1,)) == -1
    assert character_value(Z4, (1,), (1,)) == 1j
    with pytest.raises(PreconditionError):
        character_value(Z4, (4,), (0,))


@given(small_groups(max_order=64), st.randoms(use_true_random=False))
def test_character_matches_exponential(G, rnd):
    elems = list(G.elements())
    chi, g = rnd.choice(elems), rnd.choice(elems)
    want = cmath.exp(2j * math.pi * sum(c * x / m for c, x, m in zip(chi, g, G.moduli)))
    got = character_value(G, chi, g)
    assert abs(got - want) < 1e-12 and abs(abs(got) - 1) < 1e-12


def test_norm_examples():
    assert abs(a_norm(CoefficientVector(Z4, {(3,): 1})) - 1) < 1e-12
    v = a_norm(CoefficientVector.indicator(Z4, [(0,), (1,)]))
    assert abs(v - (2 + 2 * math.sqrt(2)) / 4) < 1e-12
    assert a_norm(CoefficientVector(Z4)) == 0
    with pytest.raises(CapExceeded):
        a_norm(CoefficientVector(GroupSpec(2, (1,) * 6), {}), cap=32)


@given(small_groups(max_order=32))
def test_coset_indicators_have_norm_one(G):
    for c in enumerate_cosets(G):
        assert abs(a_norm(CoefficientVector.indicator(G, c.elements())) - 1) < 1e-12


@given(small_groups(max_order=27), st.randoms(use_true_random=False))
def test_norm_matches_dense_oracle(G, rnd):
    S = [x for x in G.elements() if rnd.random() < 0.4]
    assert abs(a_norm(CoefficientVector.indicator(G, S)) - dense_norm(G, S)) < 1e-12


def _random_vector(G, rnd):
    return CoefficientVector(G, {x: complex(rnd.uniform(-2, 2), rnd.uniform(-2, 2))
                                 for x in G.elements() if rnd.random() < 0.5})


@given(small_groups(max_order=32), st.randoms(use_true_random=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_norm_triangle_and_homogeneity(G, rnd, lam):
    u, w = _random_vector(G, rnd), _random_vector(G, rnd)
    s = dict(u.coeffs)
    for k, a in w.coeffs.items():
        s[k] = s.get(k, 0) + a
    assert a_norm(CoefficientVector(G, s)) <= a_norm(u) + a_norm(w) + 1e-9
    scaled = CoefficientVector(G, {k: lam * a for k, a in u.coeffs.items()})
    assert abs(a_norm(scaled) - abs(lam) * a_norm(u)) <= 1e-9 * (1 + abs(lam) * a_norm(u))


@pytest.mark.parametrize("G", [Z2, Z4, V, GroupSpec(2, (1, 1, 1)), GroupSpec(2, (2, 1)),
                               GroupSpec(3, (1,)), GroupSpec(2, (1, 1, 1, 1)), GroupSpec(2, (2, 2))])
def test_norm_one_iff_coset(G):
    norms = subset_norms(G)
    cosets = coset_masks(G)
    for mask in range(1, 1 << G.order):
        assert norms[mask] >= 1 - 1e-9
        assert (abs(norms[mask] - 1) <= 1e-9) == (mask in cosets)
        if mask.bit_count() <= 4 or mask in cosets:
            assert is_coset(G, mask_elements(G, mask)) == (mask in cosets)


def test_witness_counts():
    assert len(default_witnesses(GroupSpec(2, ()))) == 1
    # {0}, {1} and the whole dual; there are three cosets in Z_2, not four
    assert len(default_witnesses(Z2)) == 3
    assert len(default_witnesses(V)) == 11


def test_identity_injection():
    sigma = InjectionTable.identity(V)
    v = CoefficientVector(V, {(1, 0): 2 - 1j, (1, 1): 0.5})
    assert pushforward(sigma, v) == v
    assert pushforward(sigma, CoefficientVector(V)) == CoefficientVector(V)
    rep = distortion_witness(sigma, default_witnesses(V))
    assert all(abs(r - 1) < 1e-12 for r in rep.ratios)
    assert abs(rep.distortion_lower_bound - 1) < 1e-12


def test_injection_errors():
    with pytest.raises(PreconditionError):
        InjectionTable(Z2, V, {(0,): (0, 0), (1,): (0, 0)})
    partial = InjectionTable(Z4, V, {(0,): (0, 0)})
    with pytest.raises(PreconditionError):
        pushforward(partial, CoefficientVector.indicator(Z4, [(1,)]))
    with pytest.raises(PreconditionError):
        distortion_witness(InjectionTable.identity(Z4), [CoefficientVector(Z4)])
    with pytest.raises(PreconditionError):
        distortion_witness(InjectionTable.identity(Z4), [])


def test_z4_to_klein_bijections():
    src, tgt = list(Z4.elements()), list(V.elements())
    cosets = default_witnesses(Z4)
    subsets = [CoefficientVector.indicator(Z4, mask_elements(Z4, m)) for m in range(1, 16)]
    by_cosets, by_subsets = [], []
    for perm in itertools.permutations(tgt):
        sigma = InjectionTable(Z4, V, dict(zip(src, perm)))
        by_cosets.append(distortion_witness(sigma, cosets).distortion_lower_bound)
        by_subsets.append(distortion_witness(sigma, subsets).distortion_lower_bound)
    assert len(by_cosets) == 24
    # every 2-subset of Z_2^2 is a coset, so coset witnesses cannot see any distortion
    assert all(abs(b - 1) < 1e-12 for b in by_cosets)
    assert min(by_subsets) > 1.2
    assert all(abs(b - (2 + 2 * math.sqrt(2)) / 4) < 1e-9 for b in by_subsets)


@pytest.mark.parametrize("G", [V, Z4, GroupSpec(2, (2, 1)), GroupSpec(3, (1, 1))])
def test_affine_maps_preserve_norm(G):
    rng = random.Random(G.order)
    elems = list(G.elements())
    autos = []
    # automorphisms via images of the standard generators with matching orders
    basis = [tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)]
    for images in itertools.product(elems, repeat=G.rank):
        def f(x, images=images):
            out = (0,) * G.rank
            for c, im in zip(x, images):
                out = G.add(out, G.scale(c, im))
            return out
        table = {x: f(x) for x in elems}
        if len(set(table.values())) == G.order and all(
                table[G.add(x, y)] == G.add(table[x], table[y]) for x in basis for y in elems):
            autos.append(table)
    assert autos
    for _ in range(10):
        table = rng.choice(autos)
        t = rng.choice(elems)
        sigma = InjectionTable(G, G, {x: G.add(y, t) for x, y in table.items()})
        v = _random_vector(G, rng)
        assert abs(a_norm(pushforward(sigma, v)) - a_norm(v)) < 1e-9
        for c in rng.sample(list(enumerate_cosets(G)), 3):
            w = CoefficientVector.indicator(G, c.elements())
            rep = distortion_witness(sigma, [w])
            assert abs(rep.ratios[0] - 1) < 1e-12


def test_pushforward_of_coset_is_sum_of_image_characters():
    sigma = InjectionTable(Z4, GroupSpec(2, (1, 1, 1)),
                           {(0,): (0, 0, 0), (1,): (1, 0, 0), (2,): (0, 1, 0), (3,): (0, 0, 1)})
    H = next(H for H in enumerate_subgroups(Z4) if H.order == 2)
    v = CoefficientVector.indicator(Z4, H.elements())
    w = pushforward(sigma, v)
    assert w.support == {(0, 0, 0), (0, 1, 0)} and set(w.coeffs.values()) == {1}


def test_survey_examples():
    rows = idempotent_survey(Z4, 10, 4)
    assert len(rows) == 15
    cosets = coset_masks(Z4)
    for r in rows:
        if r.subset_bitmask in cosets:
            assert abs(r.norm - 1) < 1e-12 and r.min_coset_length == 1
        else:
            assert r.min_coset_length == 2
    row = next(r for r in rows if r.subset_bitmask == 0b11)
    assert abs(row.norm - 1.2071067811865475) < 1e-9
    capped = idempotent_survey(Z4, 1.3, 4)
    assert all(r.norm <= 1.3 for r in capped) and len(capped) == 11
    text = survey_csv(capped)
    assert text.splitlines()[0] == "subset_bitmask,norm,min_coset_length,distinct_subgroups"
    with pytest.raises(CapExceeded):
        idempotent_survey(GroupSpec(2, (1,) * 5), 2, 2)


def test_json_round_trip():
    v = CoefficientVector(V, {(1, 0): 2 - 1j})
    assert CoefficientVector.from_json(v.to_json()) == v
    assert CoefficientVector.from_json({"group": V.to_json(), "support": [[0, 1]]}) == \
        CoefficientVector.indicator(V, [(0, 1)])
    sigma = InjectionTable.identity(V)
    assert InjectionTable.from_json(sigma.to_json()) == sigma

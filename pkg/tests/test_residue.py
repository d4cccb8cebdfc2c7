from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import divisors, primerange

from reciplab.errors import DomainError, PreconditionError
from reciplab.nf import CyclotomicField, apply_automorphism
from reciplab.residue import (ReductionSite, discrete_log, is_lth_power_residue, multiplicative_order,
                              primitive_root, reduce, roots_mod, sites_over, valuation)


def test_reduce_examples(gauss):
    x = gauss.element((3, 2))
    assert reduce(x, ReductionSite(5, 2, 4)) == 2
    assert reduce(gauss.one(), ReductionSite(5, 2, 4)) == 1
    assert reduce(x, ReductionSite(13, 5, 4)) == 0


def test_discrete_log_examples():
    assert discrete_log(2, 8, 13) == 3
    assert discrete_log(2, 1, 13) == 0
    assert discrete_log(2, 5, 13) == 9
    with pytest.raises(DomainError):
        discrete_log(2, 0, 13)
    with pytest.raises(DomainError):
        discrete_log(3, 2, 13)  # 3 has order 3 mod 13


def test_power_residue_examples():
    assert is_lth_power_residue(8, 3, 13)
    assert not is_lth_power_residue(2, 3, 13)
    assert is_lth_power_residue(1, 3, 13)
    with pytest.raises(PreconditionError):
        is_lth_power_residue(2, 5, 13)


def test_site_validation():
    with pytest.raises(DomainError):
        ReductionSite(7, 2, 4)  # 7 is not 1 mod 4
    with pytest.raises(DomainError):
        ReductionSite(13, 3, 4)  # 3 has order 3


def test_discrete_log_exhaustive_small_primes():
    """Every x in F_q^* for every prime q < 2000 (the acceptance suite covers q < 10^4)."""
    checked = 0
    for q in primerange(2, 2000):
        g = primitive_root(q)
        table, cur = {}, 1
        for e in range(q - 1):
            table[cur] = e
            cur = cur * g % q
        for x in range(1, q):
            assert discrete_log(g, x, q) == table[x]
        checked += q - 1
    assert checked > 200_000


def test_power_residue_brute_force():
    for q in primerange(3, 501):
        for ell in divisors(q - 1):
            powers = {pow(y, ell, q) for y in range(1, q)}
            for x in range(1, q):
                assert is_lth_power_residue(x, ell, q) == (x in powers)


def test_primitive_root_order():
    for q in primerange(3, 2000):
        assert multiplicative_order(primitive_root(q), q) == q - 1


@pytest.mark.parametrize("N", [3, 4, 5, 8, 12])
def test_sites_are_a_galois_orbit(N):
    K = CyclotomicField(N)
    rng = random.Random(N)
    q = next(p for p in primerange(100, 10 ** 4) if p % N == 1)
    sites = sites_over(q, N)
    assert len(sites) == K.degree
    assert len({s.omega for s in sites}) == K.degree
    assert all(multiplicative_order(s.omega, q) == N for s in sites)
    # the count of valid omegas is exactly phi(N)
    assert sum(1 for w in range(1, q) if multiplicative_order(w, q) == N) == K.degree
    base = sites[0]
    for _ in range(50):
        x = K.element([rng.randint(-20, 20) for _ in range(K.degree)])
        for a in K.galois_group:
            assert reduce(x, base.conjugate(a)) == reduce(apply_automorphism(a, x), base)


@st.composite
def site_and_pair(draw):
    N = draw(st.sampled_from([3, 4, 5, 8, 12]))
    K = CyclotomicField(N)
    q = draw(st.sampled_from([p for p in primerange(2, 3000) if p % N == 1]))
    site = draw(st.sampled_from(sites_over(q, N)))
    coords = st.lists(st.integers(-50, 50), min_size=K.degree, max_size=K.degree)
    return site, K.element(draw(coords)), K.element(draw(coords))


@settings(max_examples=1000, deadline=None)
@given(site_and_pair())
def test_reduction_is_ring_homomorphism(data):
    site, x, y = data
    q = site.q
    assert reduce(x * y, site) == reduce(x, site) * reduce(y, site) % q
    assert reduce(x + y, site) == (reduce(x, site) + reduce(y, site)) % q


def test_reduce_subfield_element():
    K, L = CyclotomicField(4), CyclotomicField(8)
    site = sites_over(17, 8)[0]
    x = K.element((3, 2))
    assert reduce(x, site) == reduce(L.embed(x), site)


def _valuation_by_division(x, pi):
    v = 0
    while (x / pi).is_integral():
        x = x / pi
        v += 1
    return v


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.lists(st.integers(-9, 9), min_size=2, max_size=2))
def test_valuation_matches_exact_division(a, b, coords):
    K = CyclotomicField(4)
    pi = K.element((2, 1))
    unit_part = K.element(coords)
    if unit_part.is_zero():
        return
    x = pi ** a * apply_automorphism(3, pi) ** b * unit_part
    site = sites_over(5, 4)
    expected = {s: _valuation_by_division(x, g) for g in (pi, apply_automorphism(3, pi))
                for s in site if reduce(g, s) == 0}
    for s, v in expected.items():
        assert valuation(x, s) == v


def test_roots_mod_against_brute_force():
    rng = random.Random(3)
    for q in [2, 3, 5, 7, 13, 101, 257]:
        for _ in range(100):
            d = rng.randint(1, 4)
            f = [rng.randrange(q) for _ in range(d)] + [1]
            roots = roots_mod(f, q)
            # expand prod (X - r) when split, else confirm fewer roots than the degree
            brute = [x for x in range(q) if sum(c * pow(x, i, q) for i, c in enumerate(f)) % q == 0]
            if roots is None:
                prod = None
            else:
                prod = [1]
                for r in roots:
                    prod = [((prod[i - 1] if i else 0) - r * (prod[i] if i < len(prod) else 0)) % q
                            for i in range(len(prod) + 1)]
                assert prod == [c % q for c in f]
                assert sorted(set(roots)) == brute
            if roots is None:
                # a non-split polynomial of degree <= 3 has fewer than d roots counted with multiplicity
                assert len(brute) < d


def test_roots_mod_repeated():
    # (X-3)^2 (X-5) over F_7
    assert roots_mod([-45 % 7, 39 % 7, -11 % 7, 1], 7) == [3, 3, 5]
    assert roots_mod([1, 0, 1], 7) is None  # X^2 + 1 is irreducible mod 7

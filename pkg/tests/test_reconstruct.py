from __future__ import annotations

import itertools
import random

import pytest
from sympy import factorint, primerange

from reciplab.compsys import Record, generate_dataset, poly_from_roots
from reciplab.errors import (AmbiguousFinitePartError, DomainError, FinitePartNotFoundError,
                             MultiplicityMismatchError, NotAbelianCompatibleError, NotFoundError,
                             PreconditionError, UnsupportedInputError)
from reciplab.hecke import canonical_gaussian_character, norm_character, trivial_character
from reciplab.nf import CyclotomicField, conjugates_product, norm
from reciplab.primes import SplitPrime, sample_split_prime, sample_split_primes
from reciplab.reconstruct import (ReconstructConfig, SiteBank, are_multiplicatively_independent, default_bound,
                                  is_separating, match_multiplicities, reconstruct_system,
                                  recover_exponent_tuple, select_separating_prime, separating_norms,
                                  split_charpoly)

from conftest import octic_characters


def same_multiset(found, expected) -> bool:
    left = list(expected)
    for chi in found:
        k = next((k for k, e in enumerate(left) if chi.same_as(e)), None)
        if k is None:
            return False
        left.pop(k)
    return not left


# -- exponent recovery -------------------------------------------------------

def test_recover_examples(gauss):
    beta = gauss.element((3, 2))
    d = recover_exponent_tuple(gauss.element((39, 26)), beta, 2)
    assert (d.exponents, d.residual, d.order) == ((2, 1), gauss.one(), 1)
    d = recover_exponent_tuple(gauss.one(), beta, 2)
    assert (d.exponents, d.residual, d.order) == ((0, 0), gauss.one(), 1)
    d = recover_exponent_tuple(gauss.zeta() * beta, beta, 2)
    assert (d.exponents, d.residual, d.order) == ((1, 0), gauss.zeta(), 4)


def test_recover_errors(gauss):
    beta = gauss.element((3, 2))
    with pytest.raises(NotFoundError):
        recover_exponent_tuple(beta ** 3, beta, 2)
    with pytest.raises(NotFoundError):
        recover_exponent_tuple(gauss.element((2, 1)), beta, 4)
    with pytest.raises(DomainError):
        recover_exponent_tuple(gauss.zero(), beta, 1)


@pytest.mark.parametrize("N", [4, 8, 12])
def test_recover_random_monomials(N):
    """gamma = u * prod sigma(beta)^m re-multiplies exactly; residual order is minimal and divides W."""
    K = CyclotomicField(N)
    rng = random.Random(N)
    bank = SiteBank(K, seed=1)
    bound = 2
    for r in sample_split_primes(K, 15, 10 ** 4 if K.degree == 4 else 10 ** 3, seed=N):
        m = tuple(rng.randint(-bound, bound) for _ in range(K.degree))
        j = rng.randrange(K.torsion_order)
        gamma = K.root_of_unity(j) * conjugates_product(r.generator, m)
        d = recover_exponent_tuple(gamma, r.generator, bound, bank)
        assert d.exponents == m
        assert d.value(r.generator) == gamma
        W = K.torsion_order
        assert W % d.order == 0 and d.residual ** d.order == 1
        assert all(d.residual ** e != 1 for e in range(1, d.order))


def test_split_charpoly(gauss):
    beta = gauss.element((2, 1))
    roots = [gauss.one(), gauss.scalar(5), gauss.zeta() * beta ** 2, gauss.zeta() * beta ** 2]
    coeffs = poly_from_roots(roots, gauss)
    decs = split_charpoly(list(coeffs), beta, 3, SiteBank(gauss))
    assert sorted(d.value(beta).coords for d in decs) == sorted(r.coords for r in roots)
    assert [d.exponents for d in decs].count((2, 0)) == 2


def test_default_bound(gaussian_dataset):
    import math
    expected = 0
    for r in gaussian_dataset.records:
        h = max(abs(int(x)) for c in r.charpoly for x in c.coords)
        expected = max(expected, 2 * math.ceil(math.log(h) / math.log(r.prime.norm) - 1e-12))
    assert default_bound(gaussian_dataset) == expected == 6


# -- separating prime ----------------------------------------------------------

def test_separating_prime_examples(gauss):
    alpha = gauss.element((2, 1))
    norms = separating_norms(alpha, 1)
    assert len(norms) == 8
    assert set(norms.values()) == {2, 4, 16}
    # differences of two tuples bounded by 1 have entries bounded by 2
    wide = set(separating_norms(alpha, 2).values())
    assert {2, 4, 16, 20, 106} <= wide
    assert {2, 3, 5, 53} <= {q for v in wide for q in factorint(v)}
    assert select_separating_prime(alpha, 1) == 7
    assert select_separating_prime(alpha, 0) == 2
    assert select_separating_prime(alpha, 0, forbidden={2}) == 3
    p = select_separating_prime(alpha, 1, forbidden={7})
    assert p > 7 and is_separating(alpha, 1, p) and p % 5 != 0


def test_separating_prime_full_enumeration(gauss):
    """The returned prime separates all tuple differences, and no smaller admissible prime does."""
    for alpha in [gauss.element((2, 1)), gauss.element((3, 2)), gauss.element((4, 1))]:
        for bound in (1, 2):
            p = select_separating_prime(alpha, bound)
            assert is_separating(alpha, 2 * bound, p)
            # brute recomputation of the difference norms
            for m in itertools.product(range(-2 * bound, 2 * bound + 1), repeat=2):
                if any(m):
                    pos = conjugates_product(alpha, [max(x, 0) for x in m])
                    neg = conjugates_product(alpha, [max(-x, 0) for x in m])
                    assert abs(norm(pos - neg)) % p
            for q in primerange(2, p):
                assert abs(norm(alpha)) % q == 0 or not is_separating(alpha, 2 * bound, q)


# -- multiplicative independence -------------------------------------------------

def test_independence_examples(gauss):
    a, b = gauss.element((2, 1)), gauss.element((3, 2))
    assert are_multiplicatively_independent([a, gauss.element((2, -1))])
    assert not are_multiplicatively_independent([a, a ** 2])
    assert not are_multiplicatively_independent([a, b, a * b])
    with pytest.raises(UnsupportedInputError):
        are_multiplicatively_independent([a, gauss.scalar(3)])


@pytest.mark.parametrize("N", [4, 5, 8])
def test_conjugates_are_independent(N):
    K = CyclotomicField(N)
    from reciplab.nf import conjugates
    for r in sample_split_primes(K, 5, 10 ** 4, seed=3):
        assert are_multiplicatively_independent(conjugates(r.generator))


# -- multiplicities ----------------------------------------------------------

def _congruent_pair(gauss):
    alpha = SplitPrime(gauss.element((2, 1)), 5)
    beta = sample_split_prime(gauss, 10 ** 5, constraint=(alpha.generator, 7))
    return alpha, beta


def test_match_multiplicities(gauss):
    alpha, beta = _congruent_pair(gauss)
    assert beta.generator.coords == (16, 1)
    res = match_multiplicities(alpha, beta, 7, [(1, 0), (0, 1)], [(1, 0), (0, 1)])
    assert res["pairing"] == [0, 1]
    res = match_multiplicities(alpha, beta, 7, [(0, 1), (1, 0)], [(1, 0), (0, 1)])
    assert res["pairing"] == [1, 0]
    with pytest.raises(MultiplicityMismatchError) as info:
        match_multiplicities(alpha, beta, 7, [(1, 0), (1, 0)], [(1, 0), (0, 1)])
    assert info.value.index == 1
    with pytest.raises(PreconditionError):
        match_multiplicities(alpha, SplitPrime(gauss.element((3, 2)), 13), 7, [(1, 0)], [(1, 0)])


def test_match_multiplicities_round_trip_pairs(gauss):
    chars = [trivial_character(gauss), norm_character(gauss), canonical_gaussian_character(gauss)]
    alpha, beta = _congruent_pair(gauss)
    p = select_separating_prime(alpha.generator, 1)
    assert p == 7
    bank = SiteBank(gauss)
    tuples = []
    for r in (alpha, beta):
        # the canonical character has conductor above 2, so evaluate on odd primes only
        coeffs = poly_from_roots([c.value_at(r.generator) for c in chars], gauss)
        tuples.append([d.exponents for d in split_charpoly(list(coeffs), r.generator, 2, bank)])
    res = match_multiplicities(alpha, beta, p, tuples[0], list(reversed(tuples[1])))
    assert [tuples[1][::-1][j] for j in res["pairing"]] == tuples[0]


# -- full reconstruction ------------------------------------------------------

def test_reconstruct_canonical(gauss):
    chi = canonical_gaussian_character(gauss)
    ds = generate_dataset([chi], 100, seed=1)
    rec = reconstruct_system(ds, {"bound": 2})
    assert rec.tuples == [(1, 0)]
    assert same_multiset(rec.characters, [chi])
    assert rec.characters[0].finite_part.two_part is not None


def test_reconstruct_trivial_norm(trivial_norm_dataset, gauss):
    rec = reconstruct_system(trivial_norm_dataset, ReconstructConfig(bound=2))
    assert rec.tuples == [(0, 0), (1, 1)]
    assert same_multiset(rec.characters, [trivial_character(gauss), norm_character(gauss)])
    assert all(c.finite_part.order == 1 for c in rec.characters)


def test_reconstruct_octic(q8):
    chars = octic_characters(q8)
    ds = generate_dataset(chars, 40, seed=2)
    rec = reconstruct_system(ds)
    assert same_multiset(rec.characters, chars)


def test_reconstruct_detects_foreign_record(trivial_norm_dataset):
    ds = trivial_norm_dataset
    L = ds.L
    records = list(ds.records)
    records[11] = Record(records[11].prime, poly_from_roots([L.one(), L.one()], L))
    with pytest.raises(NotAbelianCompatibleError) as info:
        reconstruct_system(ds.replace_records(records), {"bound": 2})
    assert info.value.report["records"] == [11]
    assert "11" in str(info.value)


def test_reconstruct_unexplained_root(trivial_norm_dataset):
    ds = trivial_norm_dataset
    L = ds.L
    records = list(ds.records)
    records[4] = Record(records[4].prime, poly_from_roots([L.one(), L.scalar(7)], L))
    with pytest.raises(NotAbelianCompatibleError) as info:
        reconstruct_system(ds.replace_records(records), {"bound": 2})
    assert info.value.report["records"] == [4]


def test_reconstruct_finite_part_outside_search(gaussian_dataset):
    # the quartic character lives on the prime above 5; excluding 5 leaves it unexplained
    with pytest.raises(FinitePartNotFoundError):
        reconstruct_system(gaussian_dataset, {"bound": 4, "modulus_candidates": (2, 13)})


def test_reconstruct_ambiguous(gauss):
    # with very few records, distinct candidate finite parts are indistinguishable
    from conftest import gaussian_characters
    ds = generate_dataset(gaussian_characters(gauss)[2:], 3, seed=4)
    with pytest.raises(AmbiguousFinitePartError) as info:
        reconstruct_system(ds, {"bound": 4, "min_records": 1})
    assert len(info.value.report["solutions"]) > 1


def test_reconstruct_too_few_records(trivial_norm_dataset):
    ds = trivial_norm_dataset.replace_records(trivial_norm_dataset.records[:3])
    with pytest.raises(PreconditionError):
        reconstruct_system(ds)


def test_reordering_invariance(gauss, gaussian_chars):
    chars = list(gaussian_chars)
    ds = generate_dataset(chars, 80, seed=21)
    base = reconstruct_system(ds, {"bound": 4})
    rng = random.Random(5)
    records = list(ds.records)
    rng.shuffle(records)
    shuffled = reconstruct_system(ds.replace_records(records), {"bound": 4})
    assert [c.to_json() for c in shuffled.characters] == [c.to_json() for c in base.characters]
    permuted = generate_dataset(chars[::-1], 80, seed=21)
    assert [c.to_json() for c in reconstruct_system(permuted, {"bound": 4}).characters] == \
        [c.to_json() for c in base.characters]
    assert same_multiset(base.characters, chars)

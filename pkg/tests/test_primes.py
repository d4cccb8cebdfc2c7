from __future__ import annotations

import random

import pytest
from sympy import isprime

from reciplab.errors import DomainError, NotFoundError
from reciplab.nf import CyclotomicField, norm
from reciplab.primes import (SplitPrime, conjugate_primes, normalize_generator, primes_above, sample_split_prime,
                             sample_split_primes, split_rational_primes)
from reciplab.residue import reduce, sites_over


def test_unconstrained_small_bound(gauss):
    r = sample_split_prime(gauss, 10)
    assert r.norm == 5
    assert r.generator.coords == (2, 1)


def test_constrained_example(gauss):
    alpha = gauss.element((2, 1))
    r = sample_split_prime(gauss, 10 ** 5, constraint=(alpha, 7))
    assert r.generator.coords == (16, 1)
    assert r.norm == 257
    assert all(c % 7 == 0 for c in (r.generator - alpha).coords)


def test_avoid(gauss):
    r = sample_split_prime(gauss, 10 ** 3, avoid={5})
    assert r.norm != 5
    r = sample_split_prime(gauss, 10 ** 3, avoid={5}, rng=random.Random(0))
    assert r.norm != 5


def test_exhaustion(gauss):
    with pytest.raises(NotFoundError):
        sample_split_prime(gauss, 4)


def test_split_prime_rejects_bad_generators(gauss):
    with pytest.raises(DomainError):
        SplitPrime(gauss.element((3, 0)), 3)  # 3 is inert, norm 9
    with pytest.raises(DomainError):
        SplitPrime(gauss.element((1, 1)), 2)  # ramified
    with pytest.raises(DomainError):
        SplitPrime(gauss.element((2, 1)), 13)


def test_conjugate_examples(gauss):
    assert [x.coords for x in conjugate_primes(SplitPrime(gauss.element((2, 1)), 5))] == [(2, 1), (2, -1)]
    assert [x.coords for x in conjugate_primes(SplitPrime(gauss.element((3, 2)), 13))] == [(3, 2), (3, -2)]


@pytest.mark.parametrize("N", [4, 5, 8, 12])
def test_conjugates_pairwise_non_associate(N):
    K = CyclotomicField(N)
    for r in sample_split_primes(K, 10, 10 ** 5, seed=N):
        conj = conjugate_primes(r)
        for i in range(len(conj)):
            for j in range(i + 1, len(conj)):
                ratio = conj[i] / conj[j]
                assert not (ratio.is_integral() and ratio.is_unit())


@pytest.mark.parametrize("N", [3, 4, 5, 8, 12])
def test_sampled_primes_satisfy_invariants(N):
    K = CyclotomicField(N)
    bound = 10 ** 5 if K.degree <= 4 else 10 ** 6
    rs = sample_split_primes(K, 100, bound, seed=11)
    assert len({r.norm for r in rs}) == len(rs)
    for r in rs:
        n = norm(r.generator)
        assert abs(n) == r.norm and isprime(r.norm) and r.norm % N == 1 and r.norm <= bound
        assert reduce(r.generator, r.site) == 0


def test_five_hundred_gaussian_samples(gauss):
    rs = sample_split_primes(gauss, 500, 10 ** 6, seed=1)
    for r in rs:
        assert isprime(r.norm) and r.norm % 4 == 1
        assert abs(norm(r.generator)) == r.norm
        assert normalize_generator(r.generator) == r.generator


def test_sampling_is_seeded():
    K = CyclotomicField(8)
    a = sample_split_primes(K, 20, 10 ** 5, seed=5)
    b = sample_split_primes(K, 20, 10 ** 5, seed=5)
    assert a == b


def test_constrained_samples_cover_residues(gauss):
    """200 constrained draws hit every unit class modulo small auxiliary primes of Q(i)."""
    alpha = gauss.element((2, 1))
    rng = random.Random(17)
    samples = []
    for _ in range(200):
        r = sample_split_prime(gauss, 10 ** 6, constraint=(alpha, 7), rng=rng)
        assert all(c % 7 == 0 for c in (r.generator - alpha).coords)
        samples.append(r.generator)
    # split auxiliary primes of norm 5 and 13: residues in F_q^*
    for q in (5, 13):
        site = sites_over(q, 4)[0]
        hit = {reduce(b, site) for b in samples}
        assert hit >= set(range(1, q))
    # the inert prime 3: residues (a mod 3, b mod 3) in F_9^*
    hit = {(b.coords[0] % 3, b.coords[1] % 3) for b in samples} - {(0, 0)}
    assert len(hit) == 8


def test_norm_multiplicativity_of_samples():
    K = CyclotomicField(12)
    rs = sample_split_primes(K, 40, 10 ** 5, seed=2)
    for a, b in zip(rs, rs[1:]):
        assert abs(norm(a.generator * b.generator)) == a.norm * b.norm


def test_normalization_greatest_associate(gauss):
    beta = gauss.element((3, 2))
    assert normalize_generator(beta) == beta
    for j in range(4):
        assert normalize_generator(gauss.root_of_unity(j) * beta) == beta


def test_primes_above(q8):
    ps = primes_above(q8, 17)
    assert len(ps) == 4
    assert len({p.site.omega for p in ps}) == 4


def test_split_rational_primes():
    assert list(split_rational_primes(4, 50)) == [5, 13, 17, 29, 37, 41]
    assert list(split_rational_primes(4, 200, modulus=7)) == [29, 113, 197]

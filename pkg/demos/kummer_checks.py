"""Residue-level checks for the ell-th power splitting step, and the covering claim over F_ell."""

from __future__ import annotations

import random

from reciplab import CyclotomicField
from reciplab.compsys import generate_dataset
from reciplab.hecke import norm_character, trivial_character
from reciplab.kummer import (corollary_subgroup_check, find_uncovered_vector, lemma_splitting_check,
                             random_proper_subspaces)
from reciplab.reconstruct import SiteBank, split_charpoly

K = CyclotomicField(4)
ds = generate_dataset([trivial_character(K), norm_character(K)], 10, seed=3)
bank = SiteBank(K)
tuples = [[d.exponents for d in split_charpoly(list(r.charpoly), r.prime.generator, 2, bank)] for r in ds.records]
r, r2 = ds.records[0].prime, ds.records[1].prime
print("r =", r.generator, "r' =", r2.generator, "tuples", tuples[0])

# %% sample primes s with N(s) = 1 mod ell at which every sigma(r r') is an ell-th power
for ell in (7, 11, 13):
    for ti in tuples[0]:
        rep = lemma_splitting_check(r, r2, ti, tuples[1], ell, 10 ** 5)
        print(f"ell={ell} i={ti}: {rep['samples']} qualifying primes of {rep['examined']}, "
              f"{len(rep['violations'])} violations -> {rep['status']}")

# %% a tuple paired with the wrong partner is caught
rep = lemma_splitting_check(r, r2, (0, 1), [(1, 0)], 7, 10 ** 5)
print("adversarial pairing:", rep["status"], len(rep["violations"]), "violations")

# %% the same question in K*/(K*)^ell, by linear algebra on valuation vectors
for ti in tuples[0]:
    print("span check", ti, corollary_subgroup_check(r, r2, ti, tuples[1], 7))

# %% k < ell proper subspaces never cover F_ell^d
rng = random.Random(11)
subs = random_proper_subspaces(11, 4, 5, rng)
v = find_uncovered_vector(subs, rng)
print("ranks", [s.rank for s in subs], "-> uncovered vector", v)

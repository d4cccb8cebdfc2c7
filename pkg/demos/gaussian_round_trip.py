"""Round trip over Q(i): three Hecke characters -> f_r data -> recovered characters.

Run with ``python demos/gaussian_round_trip.py``.  Takes a couple of seconds.
"""

from __future__ import annotations

from reciplab import CyclotomicField
from reciplab.compsys import generate_dataset, verify_compatibility
from reciplab.hecke import (FiniteOrderCharacter, HeckeCharacter, PrimeComponent, canonical_gaussian_character,
                            norm_character)
from reciplab.primes import SplitPrime
from reciplab.reconstruct import ReconstructConfig, SiteBank, reconstruct_system, split_charpoly

# %% the characters
K = CyclotomicField(4)
P = SplitPrime(K.element((2, 1)), 5)
chars = [
    canonical_gaussian_character(K),  # conductor (1+i)^3, type (1, 0)
    norm_character(K),  # type (1, 1)
    HeckeCharacter(K, K, (2, 1), FiniteOrderCharacter((PrimeComponent(P, 2, 4, 1),))),
]
for chi in chars:
    print(chi.infinity_type, chi.order_data(), "valid" if chi.validate().valid else "INVALID")

# %% a dataset of characteristic polynomials f_r = prod (X - chi_i(r))
ds = generate_dataset(chars, 300, seed=7)
rec = ds.records[0]
print("r =", rec.prime.generator, " N(r) =", rec.prime.norm)
for k, c in enumerate(rec.charpoly):
    print(f"  coefficient of X^{k}: {c}")

# %% each f_r splits into monomials in the conjugates of its generator, times roots of unity
bank = SiteBank(ds.L)
for d in split_charpoly(list(rec.charpoly), rec.prime.generator, 4, bank):
    print("  root: tuple", d.exponents, "residual zeta^%d (order %d)" % (d.residual_log, d.order))

# %% the verifier only knows f_r; with candidate characters it recomputes every record
report = verify_compatibility(ds, chars, site_sample=10)
print("verify:", report["status"])

# %% reconstruction: tuples first, then the finite parts that explain the residuals
recovered = reconstruct_system(ds, ReconstructConfig(bound=4, finite_order_bound=8))
print("tuple multiset:", recovered.tuples)
print("separating prime used:", recovered.diagnostics["multiplicity"]["separating_prime"])
for chi in recovered.characters:
    match = [k for k, c in enumerate(chars) if c.same_as(chi)]
    print(chi.to_json(), "-> matches generating character", match)

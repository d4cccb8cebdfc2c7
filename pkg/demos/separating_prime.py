"""Why a separating prime pins down multiplicities.

Two primes alpha, beta with beta = alpha (mod p') have monomials in their
conjugates that agree mod p'.  If p' separates all bounded monomials of
alpha, equal residues force equal exponent tuples.
"""

from __future__ import annotations

from sympy import factorint

from reciplab import CyclotomicField
from reciplab.errors import MultiplicityMismatchError
from reciplab.primes import SplitPrime, sample_split_prime
from reciplab.reconstruct import is_separating, match_multiplicities, select_separating_prime, separating_norms

K = CyclotomicField(4)
alpha = SplitPrime(K.element((2, 1)), 5)

# %% norms of prod_{m>0} sigma(alpha)^m - prod_{m<0} sigma(alpha)^-m
for bound in (1, 2):
    norms = separating_norms(alpha.generator, bound)
    bad = sorted({q for v in norms.values() for q in factorint(v)})
    print(f"|m| <= {bound}: {len(norms)} tuples, norms {sorted(set(norms.values()))[:8]}..., primes to avoid {bad}")

p = select_separating_prime(alpha.generator, 1)
print("separating prime for tuples bounded by 1:", p, "| check:", is_separating(alpha.generator, 2, p))

# %% a congruent partner
beta = sample_split_prime(K, 10 ** 5, constraint=(alpha.generator, p))
print("beta =", beta.generator, "N(beta) =", beta.norm)

# %% pairing two tuple lists through residues modulo a prime above p'
print(match_multiplicities(alpha, beta, p, [(1, 0), (0, 1), (1, 1)], [(1, 1), (1, 0), (0, 1)]))
try:
    match_multiplicities(alpha, beta, p, [(1, 0), (1, 0)], [(1, 0), (0, 1)])
except MultiplicityMismatchError as exc:
    print("mismatch:", exc)

"""Split principal primes of Q(zeta_N), produced generator-first.

A candidate element beta is accepted when |N(beta)| is a prime p = 1 mod N,
so (beta) is a degree-one prime above a rational prime that splits
completely.  Sampling is a deterministic function of the supplied
``random.Random`` instance (or of the enumeration order when none is given).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Iterator

from sympy import isprime, primerange

from .errors import DomainError, NotFoundError
from .nf import CyclotomicField, FieldElement, apply_automorphism, conjugates, norm
from .residue import ReductionSite, site_of_generator


@dataclass(frozen=True)
class SplitPrime:
    """A degree-one prime ideal (beta) with |N(beta)| = p prime, p = 1 mod N."""

    generator: FieldElement
    norm: int

    def __post_init__(self):
        n = norm(self.generator)
        if abs(n) != self.norm or not isprime(self.norm):
            raise DomainError(f"{self.generator} has norm {n}, not +-{self.norm} with {self.norm} prime")
        N = self.generator.field.N
        if N > 1 and self.norm % N != 1:
            raise DomainError(f"{self.norm} does not split completely in Q(zeta_{N})")

    @classmethod
    def from_generator(cls, beta: FieldElement) -> SplitPrime:
        return cls(beta, abs(norm(beta)))

    @property
    def field(self) -> CyclotomicField:
        return self.generator.field

    @property
    def site(self) -> ReductionSite:
        """The residue map O_K -> F_p for this prime."""
        return site_of_generator(self.generator, self.norm)

    def to_json(self) -> list:
        return list(self.generator.coords)


def normalize_generator(beta: FieldElement) -> FieldElement:
    """Deterministic representative among the torsion multiples of ``beta``.

    Picks the lexicographically greatest coordinate vector, so 3+2z stays
    3+2z in Q(i).  Non-torsion unit multiples are not normalized.
    """
    field = beta.field
    return max((field.root_of_unity(j) * beta for j in range(field.torsion_order)),
               key=lambda x: x.coords)


def associates_mod(beta: FieldElement) -> list[FieldElement]:
    field = beta.field
    return [field.root_of_unity(j) * beta for j in range(field.torsion_order)]


def conjugate_primes(r: SplitPrime) -> list[FieldElement]:
    """Generators sigma(beta) of the phi(N) distinct primes above p."""
    return conjugates(r.generator)


def _admissible(beta: FieldElement, norm_bound: int, avoid) -> int | None:
    n = abs(norm(beta))
    N = beta.field.N
    if n > norm_bound or n in avoid or not isprime(n):
        return None
    if N > 1 and n % N != 1:
        return None
    return n


def _box_radius(field: CyclotomicField, norm_bound: int) -> int:
    r = 1
    while (r + 1) ** field.degree <= norm_bound:
        r += 1
    return r


def _congruent_walk(alpha: FieldElement, modulus: int, radius: int) -> Iterator[FieldElement]:
    # constant coordinate runs fastest through 1, -1, 2, -2, ...; the other
    # coordinates sweep shells of increasing height
    field = alpha.field
    d = field.degree
    kmax = radius // modulus + 1
    ks = [0] + [s * k for k in range(1, kmax + 1) for s in (1, -1)]
    for h in range(0, kmax + 1):
        for tail in itertools.product(range(-h, h + 1), repeat=d - 1):
            if d > 1 and max(map(abs, tail)) != h:
                continue
            if d == 1 and h > 0:
                return
            for k in ks:
                if h == 0 and k == 0:
                    continue
                delta = field.element((k,) + tail)
                yield alpha + delta * modulus


def sample_split_prime(field: CyclotomicField, norm_bound: int, avoid: Iterable[int] = (),
                       constraint: tuple[FieldElement, int] | None = None,
                       rng: random.Random | None = None, budget: int = 200_000) -> SplitPrime:
    """Find a split prime of norm at most ``norm_bound`` whose norm is not in ``avoid``.

    With ``constraint=(alpha, p1)`` the generator satisfies beta = alpha (mod p1)
    coordinate-wise and is returned as found (not normalized).  Without an
    ``rng`` the search is a fixed enumeration; with one, candidates are drawn
    at random from a box sized to the norm bound.
    """
    avoid = set(avoid)
    radius = _box_radius(field, norm_bound)
    if constraint is not None:
        alpha, modulus = constraint
        if alpha.field != field:
            raise DomainError("constraint element lives in a different field")
        if rng is None:
            candidates = _congruent_walk(alpha, modulus, 2 * radius + max(abs(c) for c in alpha.coords))
        else:
            span = max(1, radius // modulus)
            candidates = (alpha + field.element([rng.randint(-span, span) for _ in range(field.degree)]) * modulus
                          for _ in range(budget))
        for beta in itertools.islice(candidates, budget):
            n = _admissible(beta, norm_bound, avoid)
            if n is not None:
                return SplitPrime(beta, n)
        raise NotFoundError(f"no split prime = {alpha} mod {modulus} of norm <= {norm_bound}")

    if rng is None:
        candidates = (field.element(c) for h in range(1, radius + 1)
                      for c in itertools.product(range(-h, h + 1), repeat=field.degree)
                      if max(map(abs, c)) == h)
    else:
        candidates = (field.element([rng.randint(-radius, radius) for _ in range(field.degree)])
                      for _ in range(budget))
    for beta in itertools.islice(candidates, budget):
        n = _admissible(beta, norm_bound, avoid)
        if n is not None:
            return SplitPrime(normalize_generator(beta), n)
    raise NotFoundError(f"no split prime of norm <= {norm_bound} outside {sorted(avoid)[:10]}...")


def sample_split_primes(field: CyclotomicField, count: int, norm_bound: int, seed: int,
                        avoid: Iterable[int] = ()) -> list[SplitPrime]:
    """``count`` split primes with pairwise distinct norms, reproducible from ``seed``."""
    rng = random.Random(seed)
    avoid = set(avoid)
    out = []
    for _ in range(count):
        r = sample_split_prime(field, norm_bound, avoid, rng=rng)
        avoid.add(r.norm)
        out.append(r)
    return out


def split_rational_primes(N: int, upper: int, lower: int = 2, modulus: int = 1) -> Iterator[int]:
    """Rational primes in [lower, upper] that are 1 mod lcm(N, modulus)."""
    m = lcm(max(N, 1), modulus)
    for p in primerange(lower, upper + 1):
        if p % m == 1 % m:
            yield p


def primes_above(field: CyclotomicField, p: int) -> list[SplitPrime]:
    """Generators for all primes above a split rational prime p (by bounded search)."""
    first = None
    radius = 1
    while first is None:
        for c in itertools.product(range(-radius, radius + 1), repeat=field.degree):
            beta = field.element(c)
            if abs(norm(beta)) == p:
                first = beta
                break
        radius += 1
        if radius > 64:
            raise NotFoundError(f"no generator of norm {p} found")
    return [SplitPrime(normalize_generator(apply_automorphism(a, first)), p) for a in field.galois_group]

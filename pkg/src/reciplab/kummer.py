"""Residue-level checks of the Kummer-theoretic step relating tuples at two primes.

* ``lemma_splitting_check`` samples degree-one primes s of K with
  N(s) = 1 (mod ell) at which every conjugate of r*r' is an ell-th power
  residue, and asks that some mixed monomial built from the tuples is one too.
* ``corollary_subgroup_check`` does the same in K*/(K*)^ell directly, with
  elements represented by exponent vectors over the primes sigma(r), sigma(r').
* ``find_uncovered_vector`` exhibits a vector of F_ell^d avoiding k proper
  subspaces when ell > k.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from sympy import isprime

from .errors import DomainError, NotFoundError, PreconditionError
from .hecke import ExponentTuple
from .modlinalg import nullspace_mod, rank_mod, rref_mod, span_coefficients
from .nf import CyclotomicField, FieldElement, apply_automorphism, conjugates_product, euler_phi
from .primes import SplitPrime, split_rational_primes
from .residue import is_lth_power_residue, reduce, sites_over, valuation


@dataclass(frozen=True)
class FlSubspace:
    """Row space of ``basis`` inside F_ell^dim (stored reduced)."""

    ell: int
    dim: int
    basis: np.ndarray

    @classmethod
    def span(cls, ell: int, dim: int, vectors) -> FlSubspace:
        vectors = np.array(vectors, dtype=np.int64).reshape(-1, dim)
        R, _ = rref_mod(vectors, ell) if len(vectors) else (np.zeros((0, dim), dtype=np.int64), [])
        return cls(ell, dim, R)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_proper(self) -> bool:
        return self.rank < self.dim

    def contains(self, v) -> bool:
        return span_coefficients(self.basis, v, self.ell) is not None

    def annihilator(self) -> np.ndarray:
        """Linear forms (rows) vanishing on the subspace."""
        if self.rank == 0:
            return np.eye(self.dim, dtype=np.int64)
        return nullspace_mod(self.basis, self.ell)


def random_proper_subspaces(ell: int, dim: int, k: int, rng: random.Random) -> list[FlSubspace]:
    out = []
    for _ in range(k):
        r = rng.randint(1, dim - 1) if dim > 1 else 0
        rows = [[rng.randrange(ell) for _ in range(dim)] for _ in range(r)]
        out.append(FlSubspace.span(ell, dim, rows))
    return out


def _avoid_forms(forms: list[np.ndarray], ell: int, dim: int) -> list[int]:
    """A vector on which every (nonzero) linear form is nonzero, fixing one coordinate at a time.

    After x_1..x_{j-1} are fixed, a form whose remaining coefficients past j
    all vanish becomes a + c*x_j, which rules out at most one value of x_j;
    with fewer than ell forms some value always survives.
    """
    v = [0] * dim
    for j in range(dim):
        banned = set()
        for f in forms:
            if any(int(c) % ell for c in f[j + 1:]):
                continue
            a = sum(int(f[m]) * v[m] for m in range(j)) % ell
            c = int(f[j]) % ell
            if c:
                banned.add(-a * pow(c, -1, ell) % ell)
        v[j] = next(x for x in range(ell) if x not in banned)
    return v


def find_uncovered_vector(subspaces: Sequence[FlSubspace], rng: random.Random | None = None,
                          tries: int = 32) -> list[int]:
    """A vector of F_ell^d lying in none of the given proper subspaces (needs ell > k)."""
    if not subspaces:
        raise PreconditionError("need at least one subspace")
    ell, dim = subspaces[0].ell, subspaces[0].dim
    k = len(subspaces)
    if any(s.ell != ell or s.dim != dim for s in subspaces):
        raise PreconditionError("subspaces live in different ambient spaces")
    if ell <= k:
        raise PreconditionError(f"ell = {ell} must exceed the number of subspaces k = {k}")
    if not all(s.is_proper for s in subspaces):
        raise PreconditionError("every subspace must be proper")
    if rng is not None:
        for _ in range(tries):
            v = [rng.randrange(ell) for _ in range(dim)]
            if not any(s.contains(v) for s in subspaces):
                return v
    # one nonzero form per subspace: avoiding its kernel avoids the subspace
    forms = [s.annihilator()[0] for s in subspaces]
    v = _avoid_forms(forms, ell, dim)
    assert not any(s.contains(v) for s in subspaces)
    return v


def _mixed_monomial(r: FieldElement, r2: FieldElement, t1: Sequence[int], t2: Sequence[int]) -> FieldElement:
    return conjugates_product(r, t1) * conjugates_product(r2, t2)


def _check_ell(ell: int, K: CyclotomicField, S: Sequence[int], norms: Sequence[int]) -> None:
    if not isprime(ell):
        raise PreconditionError(f"ell = {ell} is not prime")
    if K.N % 4:
        raise PreconditionError("the field must contain i (4 | N)")
    d = euler_phi(K.N)
    for p in S:
        if (p * (p ** d - 1)) % ell == 0:
            raise PreconditionError(f"ell = {ell} divides {p}*({p}^{d} - 1) for {p} in S")
    for n in norms:
        if n % ell == 0:
            raise PreconditionError(f"ell = {ell} divides the norm {n}")


def lemma_splitting_check(r: SplitPrime, r2: SplitPrime, tuple_i: ExponentTuple,
                          tuples_j: Sequence[ExponentTuple], ell: int, sample_bound: int,
                          S: Sequence[int] = ()) -> dict:
    """Residue-level test of the splitting implication over all admissible s up to ``sample_bound``."""
    return lemma_splitting_checks(r, r2, [tuple_i], tuples_j, ell, sample_bound, S)[0]


def lemma_splitting_checks(r: SplitPrime, r2: SplitPrime, tuples_i: Sequence[ExponentTuple],
                           tuples_j: Sequence[ExponentTuple], ell: int, sample_bound: int,
                           S: Sequence[int] = ()) -> list[dict]:
    """:func:`lemma_splitting_check` for several i at once, sharing the sampled primes."""
    K = r.field
    _check_ell(ell, K, S, (r.norm, r2.norm))
    G = K.galois_group
    skip = set(S) | {r.norm, r2.norm}
    samples, examined = 0, 0
    violations = [[] for _ in tuples_i]
    for p in split_rational_primes(K.N, sample_bound, modulus=ell):
        if p in skip:
            continue
        for s in sites_over(p, K.N):
            examined += 1
            # sigma_a(x) mod s equals x mod the conjugate site omega^a
            red_r = [reduce(r.generator, s.conjugate(a)) for a in G]
            red_r2 = [reduce(r2.generator, s.conjugate(a)) for a in G]
            if not all(is_lth_power_residue(x * y, ell, p) for x, y in zip(red_r, red_r2)):
                continue
            samples += 1
            right = [_residue_monomial(red_r2, tj, p) for tj in tuples_j]
            for i, ti in enumerate(tuples_i):
                left = _residue_monomial(red_r, ti, p)
                if not any(is_lth_power_residue(left * v, ell, p) for v in right):
                    violations[i].append(s.to_json())
    return [{
        "ell": ell, "bound": sample_bound, "examined": examined, "samples": samples, "violations": v,
        "status": "inconclusive" if not samples else ("ok" if not v else "violated"),
    } for v in violations]


def _residue_monomial(residues: Sequence[int], exponents: Sequence[int], p: int) -> int:
    out = 1
    for x, e in zip(residues, exponents):
        out = out * pow(x, e, p) % p
    return out


@dataclass(frozen=True)
class KummerClass:
    """Image of an element in K*/(K*)^ell: exponents over a support of primes, plus unit coordinates."""

    ell: int
    valuations: tuple[int, ...]
    units: tuple[int, ...]

    def vector(self) -> list[int]:
        return list(self.valuations) + list(self.units)


def _unit_coordinates(u: FieldElement, ell: int, search: int = 6) -> tuple[int, ...]:
    """Exponents of a unit over (torsion generator, unit basis) mod ell, found by bounded search."""
    K = u.field
    W = K.torsion_order
    basis = K.unit_basis
    for exps in itertools.product(range(-search, search + 1), repeat=len(basis)):
        rest = u
        for b, e in zip(basis, exps):
            rest = rest / b ** e
        j = K.root_of_unity_log(rest)
        if j is not None:
            # mu_W maps onto mu_W / mu_W^ell, which is trivial unless ell | W
            torsion = j % ell if W % ell == 0 else 0
            return (torsion,) + tuple(e % ell for e in exps)
    raise NotFoundError(f"unit {u} is not a bounded product of the configured unit basis")


def kummer_class(x: FieldElement, support: Sequence[FieldElement], ell: int) -> KummerClass:
    """Valuations of x over the degree-one primes generated by ``support`` and its unit coordinates."""
    if x.is_zero():
        raise DomainError("0 has no Kummer class")
    vals = []
    rest = x
    for pi in support:
        site = SplitPrime.from_generator(pi).site
        v = valuation(x, site)
        vals.append(v)
        rest = rest / pi ** v
    if not rest.is_unit():
        raise DomainError(f"{x} is not supported on the declared primes")
    return KummerClass(ell, tuple(v % ell for v in vals), _unit_coordinates(rest, ell))


def corollary_subgroup_check(r: SplitPrime, r2: SplitPrime, tuple_i: ExponentTuple,
                             tuples_j: Sequence[ExponentTuple], ell: int) -> dict:
    """Find j with the mixed monomial for (i, j) in the span of the classes of tau(r r')."""
    K = r.field
    G = K.galois_group
    support = [apply_automorphism(a, r.generator) for a in G] + [apply_automorphism(a, r2.generator) for a in G]
    span_rows = [kummer_class(apply_automorphism(a, r.generator * r2.generator), support, ell).vector()
                 for a in G]
    for j, tj in enumerate(tuples_j):
        target = kummer_class(_mixed_monomial(r.generator, r2.generator, tuple_i, tj), support, ell).vector()
        coeffs = span_coefficients(span_rows, target, ell)
        if coeffs is not None:
            return {"ell": ell, "witness": j, "tuple": list(tj), "coefficients": coeffs, "satisfied": True}
    return {"ell": ell, "witness": None, "satisfied": False,
            "span_rank": rank_mod(span_rows, ell)}

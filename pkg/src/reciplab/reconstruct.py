"""Recover the Hecke characters behind an abelian compatible-system dataset.

Pipeline, per dataset:

1. Each f_r is split into linear factors over L.  Candidate roots have the
   shape  u * prod_sigma sigma(beta_r)^{m_sigma}  with u a root of unity and
   |m_sigma| <= bound; residues at a few auxiliary degree-one sites prune the
   tuple grid and every surviving root is confirmed by exact division.
2. The multiset of exponent tuples must be the same for every record.
   Multiplicities are additionally certified modulo a separating prime p'
   on pairs of records whose generators agree mod p' up to torsion.
3. Roots sharing a tuple carry root-of-unity residuals; these are explained
   by finite-order characters on a candidate modulus through a system of
   congruences mod W(L) (one row per record).
4. The resulting characters are assembled and validated.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

import numpy as np
from sympy import factorint, isprime, nextprime, primerange
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

from .compsys import CompatibleSystemDataset
from .errors import (AmbiguousFinitePartError, ConfigError, DomainError, FinitePartNotFoundError,
                     MultiplicityMismatchError, NotAbelianCompatibleError, NotFoundError,
                     PreconditionError, ReconstructionError, UnsupportedInputError)
from .hecke import (ExponentTuple, FiniteOrderCharacter, HeckeCharacter, PrimeComponent, TwoPart,
                    character_config)
from .modlinalg import rational_left_kernel, rational_rank, solve_congruences
from .nf import (CyclotomicField, FieldElement, apply_automorphism, conjugates_product, cyclotomic_polynomial,
                 norm)
from .primes import SplitPrime, primes_above
from .residue import (ReductionSite, discrete_log, poly_mulmod, poly_powmod, poly_rem, primitive_root,
                      reduce, roots_mod, sites_over, valuation)

GRID_LIMIT = 2_000_000


@dataclass(frozen=True)
class MonomialDecomposition:
    """gamma = residual * prod_sigma sigma(beta)^exponents[sigma], residual of exact order ``order``."""

    exponents: ExponentTuple
    residual: FieldElement
    residual_log: int  # residual = L.root_of_unity(residual_log)
    order: int

    def value(self, beta: FieldElement) -> FieldElement:
        L = self.residual.field
        return self.residual * L.embed(conjugates_product(beta, self.exponents))

    def to_json(self) -> dict:
        return {"tuple": list(self.exponents), "residual": self.residual_log, "order": self.order}


def _decomposition(L: CyclotomicField, exponents, j: int) -> MonomialDecomposition:
    W = L.torsion_order
    j %= W
    return MonomialDecomposition(tuple(exponents), L.root_of_unity(j), j, W // gcd(W, j))


@lru_cache(maxsize=32)
def _tuple_grid(d: int, bound: int) -> np.ndarray:
    size = (2 * bound + 1) ** d
    if size > GRID_LIMIT:
        raise PreconditionError(f"tuple grid (2*{bound}+1)^{d} = {size} is too large; lower the bound")
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


class _FilterSite:
    """A degree-one site of L with a full discrete-log table, used to prune tuple grids."""

    def __init__(self, site: ReductionSite, L: CyclotomicField):
        self.site = site
        q = site.q
        g = primitive_root(q)
        table = np.zeros(q, dtype=np.int64)
        cur = 1
        for e in range(q - 1):
            table[cur] = e
            cur = cur * g % q
        self.dlog = table
        self.q = q
        W = L.torsion_order
        self.rou = {reduce(L.root_of_unity(j), site): j for j in range(W)}


class SiteBank:
    """A handful of auxiliary sites of L; records whose norm collides with a site use the spares."""

    def __init__(self, L: CyclotomicField, count: int = 3, spare: int = 2, seed: int = 0,
                 lower: int = 20_000, upper: int = 60_000):
        rng = random.Random(seed)
        step = max(L.N, 2)
        chosen: list[int] = []
        while len(chosen) < count + spare:
            q = step * rng.randint(lower // step, upper // step) + 1
            if q not in chosen and isprime(q):
                chosen.append(q)
        self.L = L
        self.count = count
        self.sites = [_FilterSite(rng.choice(sites_over(q, L.N)), L) for q in chosen]

    def for_norm(self, p: int) -> list[_FilterSite]:
        return [s for s in self.sites if s.q != p][: self.count]


def _conjugate_logs(beta: FieldElement, site: _FilterSite) -> np.ndarray:
    return np.array([site.dlog[reduce(apply_automorphism(a, beta), site.site)] for a in beta.field.galois_group],
                    dtype=np.int64)


def _filter_tuples(beta: FieldElement, root_sets: list[list[int]], sites: list[_FilterSite],
                   bound: int, W: int) -> np.ndarray:
    """Tuples m with (rho / prod sigma(beta)^m)^W = 1 for some residue root rho at every site."""
    grid = _tuple_grid(beta.field.degree, bound)
    keep = np.ones(len(grid), dtype=bool)
    for roots, s in zip(root_sets, sites):
        n = s.q - 1
        mono = grid @ _conjugate_logs(beta, s) % n
        hit = np.zeros(len(grid), dtype=bool)
        for rho in set(roots):
            hit |= (W * (s.dlog[rho] - mono)) % n == 0
        keep &= hit
    return grid[keep]


def recover_exponent_tuple(gamma: FieldElement, beta: FieldElement, bound: int,
                           bank: SiteBank | None = None) -> MonomialDecomposition:
    """The unique bounded tuple with gamma / prod sigma(beta)^m a root of unity."""
    L = gamma.field
    if gamma.is_zero():
        raise DomainError("cannot decompose 0")
    p = abs(norm(beta))
    n = abs(Fraction(norm(gamma)))
    # negative exponents are allowed, so N(gamma) = p^k with k of either sign
    for part in (n.numerator, n.denominator):
        while part % p == 0:
            part //= p
        if part != 1:
            raise NotFoundError(f"|N(gamma)| is not a power of N(beta) = {p}")
    bank = bank or SiteBank(L)
    sites = bank.for_norm(p)
    root_sets = [[reduce(gamma, s.site)] for s in sites]
    found = []
    for m in _filter_tuples(beta, root_sets, sites, bound, L.torsion_order):
        m = tuple(int(x) for x in m)
        j = L.root_of_unity_log(gamma / L.embed(conjugates_product(beta, m)))
        if j is not None:
            found.append(_decomposition(L, m, j))
    if not found:
        raise NotFoundError(f"no exponent tuple with entries bounded by {bound}")
    assert len(found) == 1, "conjugates of a split-prime generator are multiplicatively independent"
    return found[0]


def _synthetic_division(coeffs: list[FieldElement], c: FieldElement) -> tuple[list[FieldElement], FieldElement]:
    """Divide sum coeffs[i] X^i by (X - c); returns (quotient, remainder)."""
    acc = None
    out = []
    for a in reversed(coeffs):
        acc = a if acc is None else a + acc * c
        out.append(acc)
    rem = out.pop()
    return list(reversed(out)), rem


def split_charpoly(coeffs: Sequence[FieldElement], beta: FieldElement, bound: int,
                   bank: SiteBank) -> list[MonomialDecomposition]:
    """Write a monic polynomial over L as prod (X - root), each root decomposed against beta."""
    L = coeffs[0].field
    W = L.torsion_order
    p = abs(norm(beta))
    sites = bank.for_norm(p)
    root_sets = []
    for s in sites:
        roots = roots_mod([reduce(c, s.site) for c in coeffs], s.q)
        if roots is None:
            raise NotFoundError(f"f_r does not split modulo the degree-one site q={s.q}")
        root_sets.append(roots)
    first, first_roots = sites[0], root_sets[0]
    remaining = list(coeffs)
    out = []
    for m in _filter_tuples(beta, root_sets, sites, bound, W):
        m = tuple(int(x) for x in m)
        mono = L.embed(conjugates_product(beta, m))
        mono_red = reduce(mono, first.site)
        if mono_red == 0:
            continue
        inv = pow(mono_red, -1, first.q)
        for j in sorted({first.rou[r * inv % first.q] for r in first_roots if r * inv % first.q in first.rou}):
            c = L.root_of_unity(j) * mono
            while len(remaining) > 1:
                quotient, rem = _synthetic_division(remaining, c)
                if not rem.is_zero():
                    break
                remaining = quotient
                out.append(_decomposition(L, m, j))
    if len(remaining) > 1:
        raise NotFoundError(f"{len(remaining) - 1} root(s) of f_r are not bounded monomials "
                            f"(bound {bound})")
    return sorted(out, key=lambda d: (d.exponents, d.residual_log))


def default_bound(ds: CompatibleSystemDataset) -> int:
    """Twice the least k with N(beta)^k >= (max coefficient height), over all records."""
    best = 1
    for rec in ds.records:
        p = rec.prime.norm
        height = max(max(abs(c.numerator) for c in coef.coords) if any(coef.coords) else 0
                     for coef in rec.charpoly)
        k, power = 0, 1
        while power < height:
            power *= p
            k += 1
        best = max(best, 2 * k)
    return best


def _orbit_key(m: tuple, perms: list[list[int]]) -> tuple:
    reps = []
    for perm in perms:
        t = tuple(m[i] for i in perm)
        reps.append(t)
        reps.append(tuple(-x for x in t))
    return min(reps)


def _galois_permutations(K: CyclotomicField) -> list[list[int]]:
    """For each a, the index permutation induced on conjugate tuples by sigma_a."""
    G = K.galois_group
    index = {g: i for i, g in enumerate(G)}
    perms = []
    for a in G:
        # sigma_a(prod sigma_b(x)^{m_b}) = prod sigma_{ab}(x)^{m_b}
        perm = [0] * len(G)
        for i, b in enumerate(G):
            perm[index[(a * b) % K.N if K.N > 1 else 1]] = i
        perms.append(perm)
    return perms


def separating_norms(alpha: FieldElement, bound: int) -> dict[tuple, int]:
    """|N(prod_{m>0} sigma(alpha)^m - prod_{m<0} sigma(alpha)^-m)| for every nonzero tuple, |m| <= bound."""
    K = alpha.field
    perms = _galois_permutations(K)
    cache: dict[tuple, int] = {}
    out = {}
    for m in itertools.product(range(-bound, bound + 1), repeat=K.degree):
        if not any(m):
            continue
        key = _orbit_key(m, perms)
        if key not in cache:
            pos = conjugates_product(alpha, [max(x, 0) for x in m])
            neg = conjugates_product(alpha, [max(-x, 0) for x in m])
            cache[key] = abs(norm(pos - neg))
        out[m] = cache[key]
    return out


def select_separating_prime(alpha: FieldElement, bound: int, forbidden=(), budget: int = 10_000) -> int:
    """Least prime p' outside ``forbidden`` and coprime to N(alpha) that separates bounded monomials.

    Tuples are enumerated with |m_sigma| <= 2*bound: two tuples with entries
    bounded by ``bound`` differ by a tuple with entries bounded by 2*bound,
    and it is these differences that must stay nonzero modulo p'.
    """
    if bound < 0:
        raise ConfigError("bound must be non-negative")
    forbidden = set(forbidden)
    n_alpha = abs(norm(alpha))
    values = set(separating_norms(alpha, 2 * bound).values())
    if 0 in values:
        raise DomainError(f"conjugates of {alpha} are multiplicatively dependent")
    p = 2
    for _ in range(budget):
        if p not in forbidden and n_alpha % p and all(v % p for v in values):
            return p
        p = nextprime(p)
    raise NotFoundError(f"no separating prime among the first {budget} primes")


def is_separating(alpha: FieldElement, bound: int, p: int) -> bool:
    """Definitional check: every nonzero tuple with |m| <= bound has difference norm coprime to p."""
    return all(v % p for v in separating_norms(alpha, bound).values())


def _split_prime_sites(x: FieldElement) -> list[ReductionSite]:
    K = x.field
    n = abs(norm(x))
    sites = []
    for q in sorted(factorint(n)):
        if K.N > 1 and q % K.N != 1:
            raise UnsupportedInputError(f"{x} has norm divisible by {q}, which does not split completely")
        sites.extend(sites_over(q, K.N))
    return sites


def are_multiplicatively_independent(xs: Sequence[FieldElement]) -> bool:
    """Whether no nontrivial product prod x_i^{c_i} is a root of unity."""
    if not xs:
        return True
    K = xs[0].field
    for x in xs:
        if x.is_zero() or not x.is_integral():
            raise DomainError(f"{x} must be a nonzero algebraic integer")
        if x.is_unit():
            raise DomainError(f"{x} is a unit")
    sites = sorted({s for x in xs for s in _split_prime_sites(x)}, key=lambda s: (s.q, s.omega))
    vectors = [[valuation(x, s) for s in sites] for x in xs]
    if rational_rank(vectors) == len(xs):
        return True
    kernel = rational_left_kernel(vectors)
    residuals = []
    for c in kernel:
        u = K.one()
        for x, e in zip(xs, c):
            u = u * x ** e
        if u.is_root_of_unity():
            return False
        residuals.append(u)
    if len(kernel) > K.unit_rank:
        return False
    if len(kernel) == 1:
        return True
    raise UnsupportedInputError("deciding independence needs relations among several units")


class _ResidueField:
    """F_{p^f} = F_p[x]/(h) for an irreducible factor h of Phi_N mod p."""

    def __init__(self, N: int, p: int):
        phi = list(reversed(cyclotomic_polynomial(N)))  # highest degree first for sympy
        _, factors = gf_factor([ZZ(c) for c in phi], p, ZZ)
        h = [int(c) for c in factors[0][0]]
        self.modulus = list(reversed(h))
        self.p = p
        self.size = p ** (len(self.modulus) - 1)

    def reduce(self, x: FieldElement) -> tuple:
        if not x.is_integral():
            den = x.denominator()
            if den % self.p == 0:
                raise DomainError(f"{x} is not integral at {self.p}")
            num = self.reduce(x * den)
            return self.mul(num, self.inverse(self.reduce(x.field.scalar(den))))
        return tuple(poly_rem([int(c) for c in x.coords], self.modulus, self.p))

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple(poly_mulmod(list(a), list(b), self.modulus, self.p))

    def inverse(self, a: tuple) -> tuple:
        if not a:
            raise DomainError("zero has no inverse")
        return tuple(poly_powmod(list(a), self.size - 2, self.modulus, self.p))

    def monomial(self, conj: list[tuple], m: Sequence[int]) -> tuple:
        out: tuple = (1,)
        for c, e in zip(conj, m):
            base = c if e >= 0 else self.inverse(c)
            out = self.mul(out, tuple(poly_powmod(list(base), abs(e), self.modulus, self.p)))
        return out


def congruent_mod(a: FieldElement, b: FieldElement, p: int) -> bool:
    return all((x - y) % p == 0 for x, y in zip(a.coords, b.coords))


def match_multiplicities(alpha: SplitPrime, beta: SplitPrime, p_sep: int,
                         tuples_alpha: Sequence[ExponentTuple], tuples_beta: Sequence[ExponentTuple]) -> dict:
    """Pair tuples of two congruent primes through their monomials reduced modulo a prime above p'.

    Returns ``{"pairing": [j for each i], "field_size": p'^f, "certified": [...]}``;
    raises :class:`MultiplicityMismatchError` naming the first unmatched index.
    """
    if len(tuples_alpha) != len(tuples_beta):
        raise MultiplicityMismatchError("tuple lists have different lengths", index=min(len(tuples_alpha),
                                                                                        len(tuples_beta)))
    if not congruent_mod(alpha.generator, beta.generator, p_sep):
        raise PreconditionError(f"generators are not congruent mod {p_sep}")
    K = alpha.field
    F = _ResidueField(K.N, p_sep)
    conj_a = [F.reduce(apply_automorphism(a, alpha.generator)) for a in K.galois_group]
    conj_b = [F.reduce(apply_automorphism(a, beta.generator)) for a in K.galois_group]
    certified = []
    for t in tuples_beta:
        # beta = alpha mod p' makes the monomials agree; recorded as a certificate
        if F.monomial(conj_b, t) != F.monomial(conj_a, t):
            raise PreconditionError("monomials of congruent generators disagree; inputs are inconsistent")
        certified.append(list(t))
    values_b = [F.monomial(conj_a, t) for t in tuples_beta]
    used = [False] * len(tuples_beta)
    pairing = []
    for i, t in enumerate(tuples_alpha):
        v = F.monomial(conj_a, t)
        j = next((j for j, w in enumerate(values_b) if not used[j] and w == v), None)
        if j is None:
            raise MultiplicityMismatchError(f"tuple {list(t)} at index {i} has no partner", index=i)
        used[j] = True
        pairing.append(j)
    return {"pairing": pairing, "field_size": F.size, "certified": certified}


def torsion_partner(alpha: FieldElement, beta: FieldElement, p_sep: int) -> FieldElement | None:
    """A torsion multiple u*beta congruent to alpha mod p', if any."""
    K = alpha.field
    for j in range(K.torsion_order):
        cand = K.root_of_unity(j) * beta
        if congruent_mod(cand, alpha, p_sep):
            return cand
    return None


@dataclass(frozen=True)
class ReconstructConfig:
    bound: int | None = None
    finite_order_bound: int = 8
    modulus_candidates: tuple | None = None  # rational primes; 2 stands for (1+i)^3 when K = Q(i)
    modulus_prime_bound: int = 30
    seed: int = 0
    min_records: int = 10
    partner_attempts: int = 10
    solution_limit: int = 1000


@dataclass
class RecoveredSystem:
    K: CyclotomicField
    L: CyclotomicField
    tuples: list  # sorted multiset of exponent tuples
    decompositions: list  # per record: list of MonomialDecomposition
    characters: list
    diagnostics: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"version": 1}
        out.update(character_config(self.K, self.L, self.characters))
        out["diagnostics"] = self.diagnostics
        return out

    def tuple_multiset_bytes(self, index: int) -> bytes:
        """Canonical serialization of one record's tuple multiset."""
        ts = sorted(d.exponents for d in self.decompositions[index])
        return json.dumps([list(t) for t in ts], separators=(",", ":")).encode()


@dataclass(frozen=True)
class _Unknown:
    """One local factor whose character exponent mod W is to be solved for."""

    prime: SplitPrime | None  # None for the (1+i)^3 factor
    g: int
    group_order: int
    site: ReductionSite | None = None

    def log(self, x: FieldElement) -> int:
        if self.prime is None:
            return TwoPart(3, 0).log(x)
        return discrete_log(self.g, reduce(x, self.site), self.prime.norm)

    def label(self):
        return "2" if self.prime is None else [self.prime.norm, list(self.prime.generator.coords)]


def _modulus_unknowns(ds: CompatibleSystemDataset, cfg: ReconstructConfig, W: int) -> tuple[list, list]:
    K = ds.K
    record_norms = {r.prime.norm for r in ds.records}
    if cfg.modulus_candidates is not None:
        rational = sorted({int(p) for p in cfg.modulus_candidates})
    else:
        bound = cfg.modulus_prime_bound
        rational = sorted(set(primerange(2, bound + 1)) | set(ds.S))
    unknowns, skipped = [], []
    for p in rational:
        if p == 2 and K.N == 4:
            unknowns.append(_Unknown(None, 1, 4))
            continue
        if p in record_norms or (K.N > 1 and p % K.N != 1) or not isprime(p):
            skipped.append(p)
            continue
        if gcd(W, p - 1) == 1:
            continue  # only the trivial character of F_p^* has order dividing W
        g = primitive_root(p)
        for P in primes_above(K, p):
            unknowns.append(_Unknown(P, g, p - 1, P.site))
    return unknowns, skipped


def _character_from_exponents(K, L, tuple_, unknowns, e) -> HeckeCharacter:
    W = L.torsion_order
    comps, two = [], None
    for u, x in zip(unknowns, e):
        x %= W
        if not x:
            continue
        t = W // gcd(W, x)
        k = x * t // W
        if u.prime is None:
            two = TwoPart(3, k * 4 // t)
        else:
            comps.append(PrimeComponent(u.prime, u.g, t, k))
    return HeckeCharacter(K, L, tuple_, FiniteOrderCharacter(tuple(comps), two))


def _order(e, W) -> int:
    out = 1
    for x in e:
        out = lcm(out, W // gcd(W, int(x) % W))
    return out


def _solve_group(tuple_, records, residual_sets, unknowns, ds, cfg) -> list[tuple]:
    """Exponent vectors e (one per character in the group) explaining every record's residuals."""
    K, L = ds.K, ds.L
    W = L.torsion_order
    c = len(residual_sets[0])
    logs = [[u.log(r.prime.generator) % W for u in unknowns] for r in records]
    zeta_K = K.root_of_unity(1)
    torsion_row = [u.log(zeta_K) % W for u in unknowns]
    torsion_rhs = -L.root_of_unity_log(L.embed(conjugates_product(zeta_K, tuple_))) % W
    order_rows = []
    for i, u in enumerate(unknowns):
        row = [0] * len(unknowns)
        row[i] = u.group_order % W
        order_rows.append(row)

    if c == 1:
        A = logs + [torsion_row] + order_rows
        b = [s[0] for s in residual_sets] + [torsion_rhs] + [0] * len(unknowns)
        sols, complete = solve_congruences(A, b, W, limit=cfg.solution_limit)
        if not complete:
            listed = [[_character_from_exponents(K, L, tuple_, unknowns, s).to_json()] for s in sols[:20]]
            raise AmbiguousFinitePartError(f"more than {cfg.solution_limit} finite parts fit tuple {list(tuple_)}",
                                           report={"tuple": list(tuple_), "truncated": True,
                                                   "solutions": listed})
        return [(s,) for s in sols if _order(s, W) <= cfg.finite_order_bound]

    # several characters share this tuple: filter the full exponent grid record by record
    choices = [range(0, W, W // gcd(W, u.group_order)) for u in unknowns]
    size = 1
    for ch in choices:
        size *= len(ch)
    if size > GRID_LIMIT:
        raise ConfigError(f"finite-part search space of size {size} is too large; "
                          "pass explicit modulus candidates")
    grid = np.array(list(itertools.product(*choices)), dtype=np.int64).reshape(size, len(unknowns))
    grid = grid[(grid @ np.array(torsion_row, dtype=np.int64)) % W == torsion_rhs]
    D = np.array(logs, dtype=np.int64).reshape(len(records), len(unknowns))
    for i, res in enumerate(residual_sets):
        grid = grid[np.isin((grid @ D[i]) % W, list(set(res)))]
    grid = np.array([row for row in grid if _order(row, W) <= cfg.finite_order_bound], dtype=np.int64)
    if len(grid) == 0:
        return []
    values = (grid @ D.T) % W  # candidate x record
    target = np.sort(np.array(residual_sets, dtype=np.int64), axis=1)
    out = []
    for combo in itertools.combinations_with_replacement(range(len(grid)), c):
        if np.array_equal(np.sort(values[list(combo)].T, axis=1), target):
            out.append(tuple(tuple(int(x) for x in grid[k]) for k in combo))
            if len(out) > cfg.solution_limit:
                break
    return out


def _tuple_multiset(decs: list[MonomialDecomposition]) -> tuple:
    return tuple(sorted(d.exponents for d in decs))


def _multiplicity_certificates(ds, decompositions, reference, bound, cfg) -> dict:
    forbidden = set(ds.S) | set(ds.T_extra)
    info = {"separating_prime": None, "alpha": None, "pairs": []}
    attempts = min(cfg.partner_attempts, len(ds.records))
    for a in range(attempts):
        alpha = ds.records[a].prime
        p_sep = select_separating_prime(alpha.generator, bound, forbidden)
        partners = []
        for b, rec in enumerate(ds.records):
            if b == a:
                continue
            cand = torsion_partner(alpha.generator, rec.prime.generator, p_sep)
            if cand is not None:
                partners.append((b, SplitPrime(cand, rec.prime.norm)))
        if not partners and a < attempts - 1:
            continue
        info.update(separating_prime=p_sep, alpha=list(alpha.generator.coords), alpha_record=a)
        for b, beta in partners[:20]:
            ta = [d.exponents for d in decompositions[a]]
            tb = [d.exponents for d in decompositions[b]]
            try:
                cert = match_multiplicities(alpha, beta, p_sep, ta, tb)
            except MultiplicityMismatchError as exc:
                raise NotAbelianCompatibleError(
                    f"records {a} and {b} disagree modulo {p_sep}: {exc}",
                    report={"records": [a, b], "index": exc.index}) from exc
            info["pairs"].append({"record": b, "pairing": cert["pairing"], "field_size": cert["field_size"]})
        if not partners:
            info["note"] = "no constrained partner in the dataset"
        return info
    return info


def reconstruct_system(ds: CompatibleSystemDataset, config: ReconstructConfig | dict | None = None
                       ) -> RecoveredSystem:
    if config is None:
        cfg = ReconstructConfig()
    elif isinstance(config, dict):
        try:
            cfg = ReconstructConfig(**config)
        except TypeError as exc:
            raise ConfigError(f"unknown reconstruct option: {exc}") from exc
    else:
        cfg = config
    if len(ds.records) < cfg.min_records:
        raise PreconditionError(f"{len(ds.records)} records; at least {cfg.min_records} are required")
    for i, rec in enumerate(ds.records):
        if rec.degree != ds.n or rec.charpoly[-1] != 1:
            raise PreconditionError(f"record {i}: f_r is not monic of degree {ds.n}")
    K, L = ds.K, ds.L
    W = L.torsion_order
    bound = cfg.bound if cfg.bound is not None else default_bound(ds)
    bank = SiteBank(L, seed=cfg.seed)

    # (1) split every f_r into decomposed roots
    decompositions = []
    for i, rec in enumerate(ds.records):
        try:
            decompositions.append(split_charpoly(list(rec.charpoly), rec.prime.generator, bound, bank))
        except NotFoundError as exc:
            raise NotAbelianCompatibleError(f"record {i} ({list(rec.prime.generator.coords)}): {exc}",
                                            report={"records": [i]}) from exc

    # (2) the tuple multiset must not depend on the record
    multisets = [_tuple_multiset(d) for d in decompositions]
    reference, _ = Counter(multisets).most_common(1)[0]
    deviating = [i for i, m in enumerate(multisets) if m != reference]
    if deviating:
        raise NotAbelianCompatibleError(
            f"records {deviating} have tuple multisets differing from the majority {[list(t) for t in reference]}",
            report={"records": deviating,
                    "generators": [list(ds.records[i].prime.generator.coords) for i in deviating],
                    "expected": [list(t) for t in reference],
                    "found": [[list(t) for t in multisets[i]] for i in deviating]})
    max_entry = max((abs(x) for t in reference for x in t), default=0)
    certificates = _multiplicity_certificates(ds, decompositions, reference, max_entry, cfg)

    # (3) finite parts, one group of equal tuples at a time
    unknowns, skipped = _modulus_unknowns(ds, cfg, W)
    characters = []
    groups = []
    for tuple_ in sorted(set(reference)):
        residual_sets = [sorted(d.residual_log for d in decs if d.exponents == tuple_) for decs in decompositions]
        sols = _solve_group(tuple_, ds.records, residual_sets, unknowns, ds, cfg)
        if not sols:
            raise FinitePartNotFoundError(
                f"no finite part of order <= {cfg.finite_order_bound} on the candidate modulus explains "
                f"the residuals for tuple {list(tuple_)}",
                report={"tuple": list(tuple_), "candidates": [u.label() for u in unknowns]})
        if len(sols) > 1:
            listed = [[_character_from_exponents(K, L, tuple_, unknowns, e).to_json() for e in sol] for sol in sols]
            raise AmbiguousFinitePartError(f"{len(sols)} finite-part assignments fit tuple {list(tuple_)}",
                                           report={"tuple": list(tuple_), "solutions": listed})
        chars = [_character_from_exponents(K, L, tuple_, unknowns, e) for e in sols[0]]
        groups.append({"tuple": list(tuple_), "multiplicity": len(chars),
                       "exponents": [[int(x) for x in e] for e in sols[0]]})
        characters.extend(chars)

    # (4) validation and the final consistency check on records = 1 mod the modulus
    failures = []
    for chi in characters:
        rep = chi.validate()
        if not rep.valid:
            failures.append({"character": chi.to_json(), "failures": rep.failures})
    if failures:
        raise ReconstructionError("assembled characters fail validation", report={"failures": failures})
    used = [u for k, u in enumerate(unknowns) if any(e[k] for g in groups for e in g["exponents"])]
    one_mod = [i for i, rec in enumerate(ds.records)
               if all(u.log(rec.prime.generator) == 0 for u in used)]
    trivial_ok = all(d.residual_log == 0 for i in one_mod for d in decompositions[i])
    # the sorted order keeps the output independent of record order
    characters.sort(key=lambda c: json.dumps(c.to_json(), sort_keys=True))
    diagnostics = {
        "bound": bound,
        "tuples": [list(t) for t in reference],
        "records": [{"generator": list(r.prime.generator.coords), "norm": r.prime.norm,
                     "roots": [d.to_json() for d in decs]} for r, decs in zip(ds.records, decompositions)],
        "multiplicity": certificates,
        "modulus_candidates": [u.label() for u in unknowns],
        "skipped_candidates": skipped,
        "groups": groups,
        "one_mod_modulus": {"records": one_mod, "residuals_trivial": trivial_ok},
    }
    return RecoveredSystem(K, L, sorted(reference), decompositions, characters, diagnostics)

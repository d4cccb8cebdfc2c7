"""Compatible-system datasets: records r -> f_r(X) with exact coefficients in L.

The characteristic-zero polynomials are the stored objects; the mod-P
representations are views obtained by reducing at degree-one primes of L.
The defect set T is every prime of L of residue degree > 1 (never a site
here) together with the rational primes listed in ``T_extra``.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from sympy import isprime

from .errors import ConfigError, CorruptDataError, DomainError
from .hecke import HeckeCharacter
from .nf import CyclotomicField, FieldElement, field_from_config, field_to_config
from .primes import SplitPrime, sample_split_primes
from .residue import ReductionSite, reduce, roots_mod, sites_over

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Record:
    prime: SplitPrime
    charpoly: tuple[FieldElement, ...]  # constant term first, monic

    @property
    def degree(self) -> int:
        return len(self.charpoly) - 1


@dataclass(frozen=True)
class CompatibleSystemDataset:
    K: CyclotomicField
    L: CyclotomicField
    n: int
    S: tuple[int, ...]
    T_extra: tuple[int, ...]
    records: tuple[Record, ...]

    def in_defect_set(self, site: ReductionSite) -> bool:
        # sites are degree-one by construction, so only the explicit list applies
        return site.q in self.T_extra

    def replace_records(self, records: Sequence[Record]) -> CompatibleSystemDataset:
        return CompatibleSystemDataset(self.K, self.L, self.n, self.S, self.T_extra, tuple(records))

    def to_json(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "K": field_to_config(self.K),
            "L": field_to_config(self.L),
            "n": self.n,
            "S": list(self.S),
            "T_extra": list(self.T_extra),
            "records": [
                {
                    "generator": list(r.prime.generator.coords),
                    "norm": r.prime.norm,
                    "charpoly": [_coef_to_json(c) for c in r.charpoly],
                }
                for r in self.records
            ],
        }

    def dumps(self) -> str:
        return _dumps_dataset(self.to_json())

    @classmethod
    def from_json(cls, obj: dict) -> CompatibleSystemDataset:
        try:
            if obj.get("version") != SCHEMA_VERSION:
                raise ConfigError(f"unsupported dataset version {obj.get('version')!r}")
            K = field_from_config(obj["K"])
            L = field_from_config(obj["L"])
            if L.N == K.N:
                L = K
            records = []
            for i, rec in enumerate(obj["records"]):
                beta = K.element(rec["generator"])
                try:
                    prime = SplitPrime(beta, int(rec["norm"]))
                except DomainError as exc:
                    raise CorruptDataError(f"record {i}: {exc}") from exc
                records.append(Record(prime, tuple(_coef_from_json(L, c) for c in rec["charpoly"])))
            return cls(K, L, int(obj["n"]), tuple(obj["S"]), tuple(obj.get("T_extra", [])), tuple(records))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed dataset: {exc!r}") from exc

    @classmethod
    def loads(cls, text: str) -> CompatibleSystemDataset:
        return cls.from_json(json.loads(text))


def dumps(obj) -> str:
    """JSON text for reports and character files (insertion key order, trailing newline)."""
    return json.dumps(obj, indent=2) + "\n"


def _dumps_dataset(obj: dict) -> str:
    # one record per line keeps large datasets diffable
    head = {k: v for k, v in obj.items() if k != "records"}
    body = ",\n".join("  " + json.dumps(r, separators=(",", ":")) for r in obj["records"])
    text = json.dumps(head, separators=(", ", ": "))[:-1]
    return f'{text}, "records": [\n{body}\n]}}\n'


def _coef_to_json(c: FieldElement) -> list:
    if c.is_integral():
        return [list(c.coords)]
    den = c.denominator()
    return [[int(x * den) for x in c.coords], den]


def _coef_from_json(L: CyclotomicField, obj) -> FieldElement:
    if not isinstance(obj, list) or not obj or not isinstance(obj[0], list):
        raise ConfigError(f"coefficient must be [[coords...]] or [[coords...], den], got {obj!r}")
    if len(obj[0]) != L.degree:
        raise CorruptDataError(f"coefficient {obj!r} has {len(obj[0])} coordinates, L has degree {L.degree}")
    den = int(obj[1]) if len(obj) > 1 else 1
    return L.element([Fraction(int(x), den) for x in obj[0]])


def poly_from_roots(roots: Sequence[FieldElement], L: CyclotomicField) -> tuple[FieldElement, ...]:
    """Coefficients (constant term first) of prod (X - root)."""
    coeffs = [L.one()]
    for r in roots:
        nxt = [L.zero()] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * r
        coeffs = nxt
    return tuple(coeffs)


def generate_dataset(characters: Sequence[HeckeCharacter], prime_budget: int, seed: int,
                     norm_bound: int = 10 ** 5, T_extra: Sequence[int] = ()) -> CompatibleSystemDataset:
    """f_r(X) = prod_i (X - chi_i(r)) at ``prime_budget`` sampled split primes."""
    if not characters:
        raise ConfigError("need at least one character")
    if prime_budget < 1:
        raise ConfigError("prime_budget must be >= 1")
    K, L = characters[0].K, characters[0].L
    for chi in characters:
        if chi.K != K or chi.L != L:
            raise ConfigError("all characters must share K and L")
        report = chi.validate()
        if not report.valid:
            raise ConfigError(f"invalid character {chi.to_json()}: {report.failures}")
    S = sorted(set().union(*(chi.finite_part.modulus_primes for chi in characters)))
    primes = sample_split_primes(K, prime_budget, norm_bound, seed, avoid=set(S) | set(T_extra))
    records = tuple(Record(r, poly_from_roots([chi.evaluate(r) for chi in characters], L)) for r in primes)
    return CompatibleSystemDataset(K, L, len(characters), tuple(S), tuple(sorted(T_extra)), records)


@dataclass
class ReducedRepresentationTable:
    site: ReductionSite
    entries: dict = dc_field(default_factory=dict)  # record index -> sorted roots in F_q (None: not split)
    skipped: list = dc_field(default_factory=list)  # record indices sharing the residue characteristic


def reduce_polynomial(coeffs: Sequence[FieldElement], site: ReductionSite) -> list[int]:
    return [reduce(c, site) for c in coeffs]


def reduce_dataset_at(ds: CompatibleSystemDataset, site: ReductionSite) -> ReducedRepresentationTable:
    if site.N != ds.L.N:
        raise DomainError(f"site is for Q(zeta_{site.N}), dataset coefficients live in Q(zeta_{ds.L.N})")
    if ds.in_defect_set(site):
        raise DomainError(f"q={site.q} is in the defect set")
    table = ReducedRepresentationTable(site)
    for i, rec in enumerate(ds.records):
        if rec.prime.norm == site.q:
            table.skipped.append(i)
            continue
        _check_monic(rec, i, ds.n)
        table.entries[i] = roots_mod(reduce_polynomial(rec.charpoly, site), site.q)
    return table


def _check_monic(rec: Record, index: int, n: int) -> None:
    if rec.degree != n or rec.charpoly[-1] != 1:
        raise CorruptDataError(f"record {index}: f_r is not monic of degree {n}")


def random_sites(L: CyclotomicField, count: int, rng: random.Random, lower: int = 1000,
                 upper: int = 1 << 20, exclude: Sequence[int] = ()) -> list[ReductionSite]:
    """Distinct degree-one sites of L with q drawn uniformly from an arithmetic progression."""
    exclude = set(exclude)
    out, seen = [], set()
    N = max(L.N, 2)
    while len(out) < count:
        q = N * rng.randint(lower // N + 1, upper // N) + 1
        if q in exclude or q in seen or not isprime(q):
            continue
        seen.add(q)
        out.append(rng.choice(sites_over(q, L.N)))
    return out


def verify_compatibility(ds: CompatibleSystemDataset, candidates: Sequence[HeckeCharacter] | None = None,
                         site_sample: int = 25, seed: int = 0) -> dict:
    """Check the structural and reduction conditions of a dataset; report-valued."""
    report = {"records": len(ds.records), "n": ds.n, "structural": [], "mismatches": [],
              "sites": [], "passed": True}
    structural = report["structural"]
    norms = Counter(r.prime.norm for r in ds.records)
    for i, rec in enumerate(ds.records):
        if rec.degree != ds.n:
            structural.append({"record": i, "problem": f"degree {rec.degree} != {ds.n}"})
        elif rec.charpoly[-1] != 1:
            structural.append({"record": i, "problem": "not monic"})
        if not all(c.is_integral() for c in rec.charpoly):
            structural.append({"record": i, "problem": "non-integral coefficient"})
        if norms[rec.prime.norm] > 1:
            structural.append({"record": i, "problem": f"norm {rec.prime.norm} repeated"})
        if rec.prime.norm in ds.S:
            structural.append({"record": i, "problem": f"norm {rec.prime.norm} lies in S"})
    bad = {s["record"] for s in structural}

    expected = {}
    if candidates is not None:
        if len(candidates) != ds.n:
            report["mismatches"].append({"record": None, "problem": f"{len(candidates)} candidates for n={ds.n}"})
        for i, rec in enumerate(ds.records):
            if i in bad:
                continue
            try:
                exp = poly_from_roots([chi.evaluate(rec.prime) for chi in candidates], ds.L)
            except DomainError as exc:
                report["mismatches"].append({"record": i, "problem": str(exc)})
                continue
            expected[i] = exp
            if exp != rec.charpoly:
                report["mismatches"].append({
                    "record": i, "generator": list(rec.prime.generator.coords),
                    "coefficients": [k for k, (a, b) in enumerate(zip(exp, rec.charpoly)) if a != b],
                    "sites_differing": 0, "sites_compared": 0})

    rng = random.Random(seed)
    sites = random_sites(ds.L, site_sample, rng, exclude=ds.T_extra)
    mismatch_index = {m["record"]: m for m in report["mismatches"] if "sites_differing" in m}
    nonsplit = []
    for site in sites:
        entry = {"site": site.to_json(), "skipped": [], "non_split": []}
        for i, rec in enumerate(ds.records):
            if i in bad or not all(c.is_integral() for c in rec.charpoly):
                continue
            if rec.prime.norm == site.q:
                entry["skipped"].append(i)
                continue
            red = reduce_polynomial(rec.charpoly, site)
            if roots_mod(red, site.q) is None:
                entry["non_split"].append(i)
                nonsplit.append(i)
            if i in mismatch_index:
                m = mismatch_index[i]
                m["sites_compared"] += 1
                if reduce_polynomial(expected[i], site) != red:
                    m["sites_differing"] += 1
        report["sites"].append(entry)

    # In scope every reduction at a degree-one site splits, so a non-split
    # reduction is reported; without candidates it is advisory only.
    report["non_split_records"] = sorted(set(nonsplit))
    report["passed"] = not structural and not report["mismatches"]
    if candidates is not None and nonsplit:
        report["passed"] = False
    if candidates is None:
        report["status"] = "structurally plausible" if report["passed"] else "inconsistent"
    else:
        report["status"] = "compatible" if report["passed"] else "mismatch"
    return report

"""Algebraic Hecke characters of type A0 on cyclotomic fields.

A character is an infinity type (one integer per Galois element of K) and a
finite-order character of (O_K / m)^*, evaluated on a principal prime (beta)
as ``eps(beta) * prod_sigma sigma(beta)^{m_sigma}``.  The modulus is
square-free away from 2, built from degree-one primes; for K = Q(i) a factor
(1+i)^e with e <= 3 is also available.

Exponent tuples are plain tuples of ints ordered like ``K.galois_group``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from math import gcd, lcm
from typing import Sequence

from .errors import ConfigError, DomainError
from .nf import CyclotomicField, FieldElement, conjugates_product, field_from_config, field_to_config
from .primes import SplitPrime
from .residue import discrete_log, multiplicative_order, primitive_root, reduce

ExponentTuple = tuple


def exponent_tuple(field: CyclotomicField, mapping) -> ExponentTuple:
    """Normalize a ``{a: m_a}`` mapping (keys int or str) or a sequence into a tuple."""
    if isinstance(mapping, dict):
        m = {int(a) % field.N if field.N > 1 else 1: int(v) for a, v in mapping.items()}
        extra = set(m) - set(field.galois_group)
        if extra:
            raise ConfigError(f"exponents given for non-Galois residues {sorted(extra)}")
        return tuple(m.get(a, 0) for a in field.galois_group)
    out = tuple(int(v) for v in mapping)
    if len(out) != field.degree:
        raise ConfigError(f"expected {field.degree} exponents, got {len(out)}")
    return out


@dataclass(frozen=True)
class PrimeComponent:
    """x -> zeta_t^(k * dlog_g(x mod P)) on (O_K/P)^* = F_p^*."""

    prime: SplitPrime
    g: int
    t: int
    k: int

    def __post_init__(self):
        p = self.prime.norm
        if (p - 1) % self.t:
            raise ConfigError(f"order t={self.t} does not divide {p} - 1")
        if self.g % p == 0 or multiplicative_order(self.g, p) != p - 1:
            raise ConfigError(f"g={self.g} is not a primitive root mod {p}")
        object.__setattr__(self, "k", self.k % self.t)

    @cached_property
    def site(self):
        return self.prime.site

    @property
    def group_order(self) -> int:
        return self.prime.norm - 1

    def log(self, x: FieldElement) -> int:
        """dlog_g of x mod P, in Z/(p-1)."""
        r = reduce(x, self.site)
        if r == 0:
            raise DomainError(f"{x} is not coprime to the modulus factor {self.prime.generator}")
        return discrete_log(self.g, r, self.prime.norm)

    def exponent(self, x: FieldElement, W: int) -> int:
        """j with value(x) = zeta_W^j."""
        return (W // self.t) * self.k * self.log(x) % W

    def to_json(self) -> dict:
        return {"p": self.prime.norm, "g": self.g, "t": self.t, "k": self.k}


@dataclass(frozen=True)
class TwoPart:
    """Character of (Z[i] / (1+i)^e)^*, cyclic of order 2^(e-1) generated by i."""

    e: int
    k: int

    def __post_init__(self):
        if self.e not in (1, 2, 3):
            raise ConfigError("special two-part supports exponents e in {1, 2, 3}")
        object.__setattr__(self, "k", self.k % self.t)

    @property
    def t(self) -> int:
        return 2 ** (self.e - 1)

    group_order = t

    def log(self, x: FieldElement) -> int:
        if x.field.N != 4:
            raise ConfigError("special two-part is only defined for K = Q(i)")
        K = x.field
        pi_e = K.element((1, 1)) ** self.e
        for j in range(4):
            if ((x - K.zeta(j)) / pi_e).is_integral():
                return j % self.t
        raise DomainError(f"{x} is not coprime to (1+i)")

    def exponent(self, x: FieldElement, W: int) -> int:
        return (W // self.t) * self.k * self.log(x) % W

    def to_json(self) -> dict:
        return {"e": self.e, "k": self.k}


@dataclass(frozen=True)
class FiniteOrderCharacter:
    components: tuple[PrimeComponent, ...] = ()
    two_part: TwoPart | None = None

    @property
    def order(self) -> int:
        out = 1
        for c in self.parts:
            out = lcm(out, c.t // gcd(c.t, c.k) if c.k else 1)
        return out

    @property
    def declared_order(self) -> int:
        """lcm of the declared component orders t."""
        out = 1
        for c in self.parts:
            out = lcm(out, c.t)
        return out

    @property
    def parts(self) -> list:
        return list(self.components) + ([self.two_part] if self.two_part else [])

    @property
    def modulus_primes(self) -> set[int]:
        """Rational primes below the modulus."""
        out = {c.prime.norm for c in self.components}
        if self.two_part is not None:
            out.add(2)
        return out

    def exponent(self, x: FieldElement, W: int) -> int:
        return sum(c.exponent(x, W) for c in self.parts) % W

    def signature(self, W: int) -> dict:
        """Canonical data determining the character as a function on residues.

        Keys identify the local factor (the site of a split prime, or "2");
        values are the exponent j with eps(generator) = zeta_W^j, where the
        generator is the least primitive root mod p (resp. i).  Trivial
        factors are dropped, so two characters agree on every residue coprime
        to both moduli exactly when their signatures are equal.
        """
        sig = {}
        for c in self.components:
            p = c.prime.norm
            g0 = primitive_root(p)
            j = (W // c.t) * c.k * discrete_log(c.g, g0, p) % W
            if j:
                sig[(p, c.site.omega)] = j
        if self.two_part is not None and self.two_part.e >= 2:
            tp = self.two_part
            j = (W // tp.t) * tp.k % W
            if j:
                sig["2"] = j
        return sig

    @classmethod
    def trivial(cls) -> FiniteOrderCharacter:
        return cls()


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failures: list = dc_field(default_factory=list)
    checked: list = dc_field(default_factory=list)


@dataclass(frozen=True)
class HeckeCharacter:
    K: CyclotomicField
    L: CyclotomicField
    infinity_type: ExponentTuple
    finite_part: FiniteOrderCharacter = dc_field(default_factory=FiniteOrderCharacter)

    def __post_init__(self):
        if self.L.N % self.K.N:
            raise ConfigError(f"L = Q(zeta_{self.L.N}) does not contain K = Q(zeta_{self.K.N})")
        object.__setattr__(self, "infinity_type", exponent_tuple(self.K, self.infinity_type))
        for c in self.finite_part.components:
            if c.prime.field != self.K:
                raise ConfigError("modulus factor not in K")
        if self.L.torsion_order % self.finite_part.declared_order:
            raise ConfigError(f"finite order {self.finite_part.declared_order} does not divide "
                              f"W(L) = {self.L.torsion_order}")
        if self.finite_part.two_part is not None and self.K.N != 4:
            raise ConfigError("special two-part requires K = Q(i)")

    def value_at(self, x: FieldElement) -> FieldElement:
        """The evaluation formula applied to any element of K coprime to the modulus."""
        W = self.L.torsion_order
        mono = self.L.embed(conjugates_product(x, self.infinity_type))
        j = self.finite_part.exponent(x, W)
        return mono if j == 0 else self.L.root_of_unity(j) * mono

    def evaluate(self, r: SplitPrime | FieldElement) -> FieldElement:
        beta = r.generator if isinstance(r, SplitPrime) else r
        p = r.norm if isinstance(r, SplitPrime) else abs(beta.norm())
        fp = self.finite_part
        if any(reduce(beta, c.site) == 0 for c in fp.components) or (fp.two_part is not None and p == 2):
            raise DomainError(f"prime {beta} divides the modulus")
        return self.value_at(beta)

    def validate(self) -> ValidationReport:
        failures, checked = [], []
        for j in range(self.K.torsion_order):
            u = self.K.root_of_unity(j)
            v = self.value_at(u)
            checked.append({"kind": "torsion", "unit": list(u.coords)})
            if v != 1:
                failures.append({"kind": "torsion", "unit": list(u.coords), "value": list(v.coords)})
        for u in self.K.unit_basis:
            v = self.value_at(u)
            checked.append({"kind": "unit", "unit": list(u.coords)})
            if not v.is_root_of_unity():
                failures.append({"kind": "unit", "unit": list(u.coords), "value": [str(c) for c in v.coords]})
        return ValidationReport(not failures, failures, checked)

    def order_data(self) -> tuple[int, int]:
        """(max |m_sigma|, order of the finite part)."""
        return max((abs(m) for m in self.infinity_type), default=0), self.finite_part.order

    def same_as(self, other: HeckeCharacter) -> bool:
        """Identical infinity type and finite parts equal on all common coprime residues."""
        W = lcm(self.L.torsion_order, other.L.torsion_order)
        return (self.K == other.K and self.infinity_type == other.infinity_type
                and self.finite_part.signature(W) == other.finite_part.signature(W))

    def to_json(self) -> dict:
        fp = self.finite_part
        out = {
            "modulus": [list(c.prime.generator.coords) for c in fp.components],
            "infinity_type": {str(a): m for a, m in zip(self.K.galois_group, self.infinity_type)},
            "finite_part": [c.to_json() for c in fp.components],
        }
        if fp.two_part is not None:
            out["special_two_part"] = fp.two_part.to_json()
        return out

    @classmethod
    def from_json(cls, K: CyclotomicField, L: CyclotomicField, obj: dict) -> HeckeCharacter:
        try:
            modulus = obj.get("modulus", [])
            parts = obj.get("finite_part", [])
            if len(modulus) != len(parts):
                raise ConfigError("'modulus' and 'finite_part' must have the same length")
            comps = []
            for gen, part in zip(modulus, parts):
                prime = SplitPrime.from_generator(K.element(gen))
                if prime.norm != int(part["p"]):
                    raise ConfigError(f"modulus generator {gen} has norm {prime.norm}, not {part['p']}")
                comps.append(PrimeComponent(prime, int(part["g"]), int(part["t"]), int(part["k"])))
            two = obj.get("special_two_part")
            two_part = TwoPart(int(two["e"]), int(two["k"])) if two else None
            return cls(K, L, exponent_tuple(K, obj["infinity_type"]), FiniteOrderCharacter(tuple(comps), two_part))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed character object: {exc!r}") from exc


def load_character_config(obj: dict) -> tuple[CyclotomicField, CyclotomicField, list[HeckeCharacter]]:
    """Parse ``{"K": {...}, "L": {...}, "characters": [...]}``."""
    if not isinstance(obj, dict) or "K" not in obj or "characters" not in obj:
        raise ConfigError("character config needs keys 'K' and 'characters'")
    K = field_from_config(obj["K"])
    L = field_from_config(obj["L"]) if "L" in obj else K
    if L.N == K.N:
        L = K
    chars = [HeckeCharacter.from_json(K, L, c) for c in obj["characters"]]
    return K, L, chars


def character_config(K: CyclotomicField, L: CyclotomicField, chars: Sequence[HeckeCharacter]) -> dict:
    return {"K": field_to_config(K), "L": field_to_config(L), "characters": [c.to_json() for c in chars]}


# named characters used throughout tests and demos

def canonical_gaussian_character(K: CyclotomicField | None = None) -> HeckeCharacter:
    """Conductor (1+i)^3, infinity type (1, 0), eps(i^j) = i^-j: the value at (beta) is the
    generator beta = 1 mod (1+i)^3."""
    K = K or CyclotomicField(4)
    return HeckeCharacter(K, K, (1, 0), FiniteOrderCharacter((), TwoPart(3, 3)))


def norm_character(K: CyclotomicField, L: CyclotomicField | None = None) -> HeckeCharacter:
    return HeckeCharacter(K, L or K, (1,) * K.degree)


def trivial_character(K: CyclotomicField, L: CyclotomicField | None = None) -> HeckeCharacter:
    return HeckeCharacter(K, L or K, (0,) * K.degree)

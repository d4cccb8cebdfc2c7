"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as coordinate tuples in the power basis
``1, zeta, ..., zeta^(d-1)`` with ``d = phi(N)``, reduced modulo the N-th
cyclotomic polynomial.  Coordinates are Python ints or ``Fraction`` objects;
integral coordinates are always stored as ints so that equality and hashing
are plain tuple operations.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import ConfigError, DomainError

SUPPORTED_CONDUCTORS = (1, 3, 4, 5, 8, 12, 15, 16, 20, 24)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert not any(num), "inexact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)


def _canon(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    raise TypeError(f"unsupported coordinate type {type(c).__name__}")


class _Tables:
    """Per-conductor constants: powers of zeta reduced into the power basis."""

    def __init__(self, N: int):
        self.N = N
        self.phi = cyclotomic_polynomial(N)
        self.d = len(self.phi) - 1
        d = self.d
        powers = []
        cur = [1] + [0] * (d - 1)
        for _ in range(N):
            powers.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(d):
                    cur[j] -= top * self.phi[j]
        self.powers = powers
        self.galois = tuple(a for a in range(1, N) if gcd(a, N) == 1) if N > 1 else (1,)
        self.W = 2 * N if N % 2 else N

    def reduce_cyclic(self, acc: Sequence) -> tuple:
        """Reduce a coefficient vector indexed by exponents mod N."""
        d = self.d
        out = list(acc[:d]) if len(acc) >= d else list(acc) + [0] * (d - len(acc))
        for k in range(d, len(acc)):
            c = acc[k]
            if c:
                for j, pj in enumerate(self.powers[k]):
                    if pj:
                        out[j] += c * pj
        return tuple(_canon(c) for c in out)


@lru_cache(maxsize=None)
def _tables(N: int) -> _Tables:
    return _Tables(N)


class CyclotomicField:
    """The field Q(zeta_N) for a supported class-number-one conductor N.

    ``units`` is an optional list of coordinate vectors of non-torsion units.
    They are validated on construction (norm +-1, not a root of unity) but
    not checked to form a fundamental system; supplying a full-rank set is
    the caller's responsibility.  Two fields compare equal when their
    conductors agree.
    """

    def __init__(self, N: int, units: Iterable[Sequence[int]] = ()):
        if N not in SUPPORTED_CONDUCTORS:
            raise ConfigError(f"conductor {N} not in supported set {SUPPORTED_CONDUCTORS}")
        self.N = N
        self._t = _tables(N)
        self.degree = self._t.d
        self.galois_group = self._t.galois
        self.torsion_order = self._t.W
        self.unit_basis = tuple(self.element(u) for u in units)
        for u in self.unit_basis:
            if not u.is_integral():
                raise ConfigError(f"unit {u} is not an algebraic integer")
            if u.norm() not in (1, -1):
                raise ConfigError(f"unit {u} has norm {u.norm()}, expected +-1")
            if u.is_root_of_unity():
                raise ConfigError(f"unit {u} is a root of unity")

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.N == self.N

    def __hash__(self):
        return hash(("CyclotomicField", self.N))

    def __repr__(self):
        return f"CyclotomicField({self.N})"

    @property
    def unit_rank(self) -> int:
        return 0 if self.N <= 2 else self.degree // 2 - 1

    # construction helpers
    def element(self, coords: Sequence) -> FieldElement:
        """Build an element from coordinates; vectors longer than phi(N) are reduced via zeta^N = 1."""
        coords = list(coords)
        if len(coords) > self.N:
            acc = [0] * self.N
            for i, c in enumerate(coords):
                acc[i % self.N] += c
            coords = acc
        if len(coords) <= self.degree:
            coords = coords + [0] * (self.degree - len(coords))
            return FieldElement(self, tuple(_canon(c) for c in coords))
        return FieldElement(self, self._t.reduce_cyclic(coords))

    __call__ = element

    def scalar(self, c) -> FieldElement:
        return FieldElement(self, (_canon(c),) + (0,) * (self.degree - 1))

    def one(self) -> FieldElement:
        return self.scalar(1)

    def zero(self) -> FieldElement:
        return self.scalar(0)

    def zeta(self, k: int = 1) -> FieldElement:
        return FieldElement(self, self._t.powers[k % self.N])

    def root_of_unity(self, j: int) -> FieldElement:
        """The j-th power of the fixed generator of the roots of unity (order W)."""
        return self._roots_of_unity[j % self.torsion_order]

    @cached_property
    def _roots_of_unity(self) -> list[FieldElement]:
        gen = self.zeta() if self.N % 2 == 0 else -self.zeta()
        out, cur = [], self.one()
        for _ in range(self.torsion_order):
            out.append(cur)
            cur = cur * gen
        return out

    @cached_property
    def _rou_index(self) -> dict:
        return {x.coords: j for j, x in enumerate(self._roots_of_unity)}

    def root_of_unity_log(self, x: FieldElement) -> int | None:
        """Return j with x = root_of_unity(j), or None when x is not torsion."""
        return self._rou_index.get(x.coords)

    def automorphism(self, a: int) -> GaloisAutomorphism:
        return GaloisAutomorphism(a % self.N if self.N > 1 else 1, self.N)

    def automorphisms(self) -> list[GaloisAutomorphism]:
        return [GaloisAutomorphism(a, self.N) for a in self.galois_group]

    def embed(self, x: FieldElement) -> FieldElement:
        """Map an element of a subfield Q(zeta_M), M | N, into this field."""
        M = x.field.N
        if M == self.N:
            return x
        if self.N % M:
            raise DomainError(f"Q(zeta_{M}) is not a subfield of Q(zeta_{self.N})")
        step = self.N // M
        acc = [0] * self.N
        for i, c in enumerate(x.coords):
            if c:
                acc[(i * step) % self.N] += c
        return FieldElement(self, self._t.reduce_cyclic(acc))


class GaloisAutomorphism:
    """sigma_a : zeta_N -> zeta_N^a."""

    __slots__ = ("a", "N")

    def __init__(self, a: int, N: int):
        a %= N if N > 1 else 1
        if N == 1:
            a = 1
        if gcd(a, N) != 1:
            raise DomainError(f"gcd({a}, {N}) != 1")
        self.a, self.N = a, N

    def __call__(self, x: FieldElement) -> FieldElement:
        return apply_automorphism(self, x)

    def __mul__(self, other: GaloisAutomorphism) -> GaloisAutomorphism:
        if other.N != self.N:
            raise DomainError("automorphisms of different fields")
        return GaloisAutomorphism(self.a * other.a, self.N)

    def __eq__(self, other):
        return isinstance(other, GaloisAutomorphism) and (self.a, self.N) == (other.a, other.N)

    def __hash__(self):
        return hash((self.a, self.N))

    def __repr__(self):
        return f"sigma_{self.a}"


class FieldElement:
    """An immutable element of Q(zeta_N)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: CyclotomicField, coords: tuple):
        self.field = field
        self.coords = coords

    # coercion
    def _lift(self, other) -> FieldElement | None:
        if isinstance(other, FieldElement):
            if other.field.N == self.field.N:
                return other
            raise DomainError(f"mixing Q(zeta_{self.field.N}) and Q(zeta_{other.field.N})")
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(_canon(a + b) for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(_canon(a - b) for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(_canon(a * other) for a in self.coords))
        t = self.field._t
        a, b = self.coords, o.coords
        acc = [0] * (2 * t.d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        acc[i + j] += ai * bj
        if len(acc) > t.N:
            folded = [0] * t.N
            for k, c in enumerate(acc):
                folded[k % t.N] += c
            acc = folded
        return FieldElement(self.field, t.reduce_cyclic(acc))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise DomainError("inverse of zero")
        n = self.norm()
        cof = self.field.one()
        for a in self.field.galois_group:
            if a != 1:
                cof = cof * apply_automorphism(self.field.automorphism(a), self)
        return cof * (Fraction(1) / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DomainError("division by zero")
            return self * (Fraction(1) / other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base, e = self.inverse(), -e
        result = self.field.one()
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._lift(other) if isinstance(other, (int, Fraction, FieldElement)) else None
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.field.N, self.coords))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}" if i > 1 else f"{c}*z")
        return f"<Q(z{self.field.N}): {' + '.join(terms) or '0'}>"

    # predicates and invariants
    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def denominator(self) -> int:
        den = 1
        for c in self.coords:
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
        return den

    def norm(self):
        """N_{K/Q}(x) as an int or Fraction."""
        return norm(self)

    def conjugate(self, a: int) -> FieldElement:
        return apply_automorphism(self.field.automorphism(a), self)

    def is_root_of_unity(self) -> bool:
        return is_root_of_unity(self)

    def is_unit(self) -> bool:
        return is_unit(self)

    def height(self) -> int:
        """Max absolute value of the (integral) coordinates."""
        return max(abs(c) for c in self.coords)


AlgebraicInteger = FieldElement
"""Elements with integer coordinates; Z[zeta_N] is the full ring of integers."""


def apply_automorphism(sigma: GaloisAutomorphism | int, x: FieldElement) -> FieldElement:
    """Substitute zeta -> zeta^a in ``x`` and reduce."""
    a = sigma.a if isinstance(sigma, GaloisAutomorphism) else sigma
    t = x.field._t
    if a % t.N == 1 % t.N:
        return x
    acc = [0] * t.N
    for i, c in enumerate(x.coords):
        if c:
            acc[(a * i) % t.N] += c
    return FieldElement(x.field, t.reduce_cyclic(acc))


def norm(x: FieldElement):
    prod = x
    for a in x.field.galois_group:
        if a != 1:
            prod = prod * apply_automorphism(a, x)
    assert prod.is_rational(), "norm must be rational"
    return prod.coords[0]


def conjugates(x: FieldElement) -> list[FieldElement]:
    """[sigma_a(x) for a in the Galois group], in galois_group order."""
    return [apply_automorphism(a, x) for a in x.field.galois_group]


def conjugates_product(x: FieldElement, exponents: Sequence[int]) -> FieldElement:
    """prod_sigma sigma(x)^{m_sigma}, exponents ordered like ``galois_group``."""
    field = x.field
    if len(exponents) != field.degree:
        raise DomainError(f"exponent tuple of length {len(exponents)} for degree {field.degree}")
    if x.is_zero() and any(m < 0 for m in exponents):
        raise DomainError("zero base with a negative exponent")
    num, den = field.one(), field.one()
    for a, m in zip(field.galois_group, exponents):
        if m > 0:
            num = num * apply_automorphism(a, x) ** m
        elif m < 0:
            den = den * apply_automorphism(a, x) ** (-m)
    return num if den == 1 else num / den


def is_root_of_unity(x: FieldElement) -> bool:
    return x.field.root_of_unity_log(x) is not None


def is_unit(x: FieldElement) -> bool:
    return x.is_integral() and not x.is_zero() and norm(x) in (1, -1)


def field_from_config(block: dict) -> CyclotomicField:
    """Build a field from a ``{"N": ..., "units": [[...], ...]}`` configuration block."""
    if not isinstance(block, dict) or "N" not in block:
        raise ConfigError(f"field block must be an object with key 'N', got {block!r}")
    return CyclotomicField(int(block["N"]), block.get("units", ()))


def field_to_config(field: CyclotomicField) -> dict:
    out = {"N": field.N}
    if field.unit_basis:
        out["units"] = [list(u.coords) for u in field.unit_basis]
    return out

"""Reduction at degree-one primes and prime-field arithmetic.

A degree-one prime of Q(zeta_N) above a rational prime q = 1 (mod N) is
described by a :class:`ReductionSite` ``(q, omega)`` where ``omega`` is an
element of multiplicative order exactly N mod q; reduction is evaluation of
the coordinate polynomial at ``omega``.  Residues are plain ints in [0, q).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from sympy import factorint, isprime

from .errors import DomainError, PreconditionError
from .nf import FieldElement, cyclotomic_polynomial


def multiplicative_order(x: int, q: int) -> int:
    x %= q
    if x == 0:
        raise DomainError("0 has no multiplicative order")
    order = q - 1
    for ell, e in factorint(q - 1).items():
        for _ in range(e):
            if pow(x, order // ell, q) == 1:
                order //= ell
            else:
                break
    return order


@lru_cache(maxsize=4096)
def primitive_root(q: int) -> int:
    """Least primitive root modulo the prime q (trial over small integers)."""
    if q == 2:
        return 1
    if not isprime(q):
        raise DomainError(f"{q} is not prime")
    factors = list(factorint(q - 1))
    for g in range(2, q):
        if all(pow(g, (q - 1) // ell, q) != 1 for ell in factors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


@dataclass(frozen=True)
class ReductionSite:
    """A degree-one prime of Q(zeta_N): zeta -> omega in F_q."""

    q: int
    omega: int
    N: int

    def __post_init__(self):
        if (self.q - 1) % self.N:
            raise DomainError(f"q={self.q} is not 1 mod {self.N}")
        if self.N > 1 and multiplicative_order(self.omega, self.q) != self.N:
            raise DomainError(f"omega={self.omega} does not have order {self.N} mod {self.q}")
        if self.N == 1 and self.omega % self.q != 1:
            raise DomainError("for N = 1 omega must be 1")

    def restrict(self, M: int) -> ReductionSite:
        """The site of the subfield Q(zeta_M) lying under this one."""
        if self.N % M:
            raise DomainError(f"{M} does not divide {self.N}")
        return ReductionSite(self.q, pow(self.omega, self.N // M, self.q), M)

    def conjugate(self, a: int) -> ReductionSite:
        """The site zeta -> omega^a."""
        return ReductionSite(self.q, pow(self.omega, a, self.q), self.N)

    def to_json(self) -> dict:
        return {"q": self.q, "omega": self.omega}


def sites_over(q: int, N: int) -> list[ReductionSite]:
    """All phi(N) degree-one sites above q, ordered by Galois exponent a (omega_0^a)."""
    if not isprime(q):
        raise DomainError(f"{q} is not prime")
    if (q - 1) % N:
        raise DomainError(f"{q} does not split completely in Q(zeta_{N})")
    w = pow(primitive_root(q), (q - 1) // N, q)
    return [ReductionSite(q, pow(w, a, q), N) for a in range(1, N + 1) if gcd(a, N) == 1] if N > 1 \
        else [ReductionSite(q, 1, 1)]


def reduce(x: FieldElement, site: ReductionSite) -> int:
    """Image of ``x`` in F_q; the field of ``x`` may be any subfield of the site's field."""
    M = x.field.N
    if M != site.N:
        site = site.restrict(M)
    q, w = site.q, site.omega
    acc, pw = 0, 1
    for c in x.coords:
        if c:
            if isinstance(c, Fraction):
                if c.denominator % q == 0:
                    raise DomainError(f"{x} is not integral at q={q}")
                c = c.numerator * pow(c.denominator, -1, q)
            acc += c * pw
        pw = pw * w % q
    return acc % q


def site_of_generator(pi: FieldElement, q: int) -> ReductionSite:
    """The unique site above q at which the degree-one prime generator ``pi`` vanishes."""
    hits = [s for s in sites_over(q, pi.field.N) if reduce(pi, s) == 0]
    if len(hits) != 1:
        raise DomainError(f"{pi} does not generate a single degree-one prime above {q}")
    return hits[0]


@lru_cache(maxsize=256)
def _bsgs_table(g: int, q: int) -> tuple[int, dict, int]:
    if q > 2 and multiplicative_order(g, q) != q - 1:
        raise DomainError(f"{g} does not generate F_{q}^*")
    n = q - 1
    m = isqrt(n - 1) + 1 if n > 1 else 1
    baby = {}
    cur = 1
    for j in range(m):
        baby.setdefault(cur, j)
        cur = cur * g % q
    giant = pow(g, -m, q) if q > 2 else 1
    return m, baby, giant


def discrete_log(g: int, x: int, q: int) -> int:
    """Return e in [0, q-1) with g^e = x (mod q) by baby-step/giant-step."""
    g %= q
    x %= q
    if x == 0:
        raise DomainError("discrete log of 0")
    m, baby, giant = _bsgs_table(g, q)
    n = q - 1
    y = x
    for i in range(m + 1):
        j = baby.get(y)
        if j is not None:
            return (i * m + j) % n if n else 0
        y = y * giant % q
    raise AssertionError("unreachable for a generator")


def is_lth_power_residue(x: int, ell: int, q: int) -> bool:
    """Whether x is an ell-th power in F_q^* (requires ell | q - 1)."""
    if (q - 1) % ell:
        raise PreconditionError(f"{ell} does not divide {q} - 1")
    if x % q == 0:
        raise DomainError("0 is not in F_q^*")
    return pow(x, (q - 1) // ell, q) == 1


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_rem(a: list[int], f: list[int], q: int) -> list[int]:
    a = _trim([c % q for c in a])
    inv = pow(f[-1], -1, q)
    while len(a) >= len(f):
        c = a[-1] * inv % q
        shift = len(a) - len(f)
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % q
        _trim(a)
    return a


def poly_mulmod(a: list[int], b: list[int], f: list[int], q: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return poly_rem(out, f, q)


def poly_powmod(base: list[int], e: int, f: list[int], q: int) -> list[int]:
    result, base = [1], poly_rem(base, f, q)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, q)
        e >>= 1
        if e:
            base = poly_mulmod(base, base, f, q)
    return result


def poly_gcd(a: list[int], b: list[int], q: int) -> list[int]:
    a, b = _trim([c % q for c in a]), _trim([c % q for c in b])
    while b:
        a, b = b, poly_rem(a, b, q)
    inv = pow(a[-1], -1, q)
    return [c * inv % q for c in a]


def _distinct_roots(g: list[int], q: int) -> list[int]:
    """Roots of a monic squarefree g that splits into distinct linear factors over F_q."""
    if len(g) == 1:
        return []
    if len(g) == 2:
        return [(-g[0]) % q]
    if q == 2:
        return [x for x in (0, 1) if sum(c * x ** i for i, c in enumerate(g)) % 2 == 0]
    a = 0
    while True:
        h = poly_powmod([a, 1], (q - 1) // 2, g, q)
        h = h + [0] * (1 - len(h)) if h else [0]
        h[0] = (h[0] - 1) % q
        d = poly_gcd(g, h, q)
        if 1 < len(d) < len(g):
            rest = _pdiv_exact(g, d, q)
            return _distinct_roots(d, q) + _distinct_roots(rest, q)
        a += 1


def _pdiv_exact(a: list[int], b: list[int], q: int) -> list[int]:
    a = list(a)
    inv = pow(b[-1], -1, q)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] * inv % q
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] = (a[i + j] - c * bj) % q
    return out


def roots_mod(coeffs, q: int) -> list[int] | None:
    """Roots with multiplicity of a polynomial over F_q (coefficients lowest degree first).

    Returns None when the polynomial does not split into linear factors.
    """
    f = _trim([int(c) % q for c in coeffs])
    if not f:
        raise DomainError("zero polynomial")
    deg = len(f) - 1
    if deg == 0:
        return []
    xq = poly_powmod([0, 1], q, f, q)
    xq = xq + [0] * (2 - len(xq))
    xq[1] = (xq[1] - 1) % q
    g = poly_gcd(f, xq, q)  # product of the distinct linear factors
    roots = []
    for r in _distinct_roots(g, q):
        cur = f
        while True:
            # synthetic division by (X - r)
            acc, quot = 0, []
            for c in reversed(cur):
                acc = (acc * r + c) % q
                quot.append(acc)
            if quot[-1] != 0:
                break
            roots.append(r)
            cur = list(reversed(quot[:-1]))
    if len(roots) != deg:
        return None
    return sorted(roots)


def _hensel_root(N: int, q: int, omega: int, prec: int) -> int:
    phi = cyclotomic_polynomial(N)
    dphi = [i * c for i, c in enumerate(phi)][1:]
    r, mod = omega % q, q
    while mod < q ** prec:
        mod = min(mod * mod, q ** prec)
        f = sum(c * pow(r, i, mod) for i, c in enumerate(phi)) % mod
        df = sum(c * pow(r, i, mod) for i, c in enumerate(dphi)) % mod
        r = (r - f * pow(df, -1, mod)) % mod
    return r


def valuation(x: FieldElement, site: ReductionSite) -> int:
    """Exact valuation of ``x`` at the degree-one prime described by ``site``.

    The root ``omega`` is Hensel-lifted to a q-adic root of Phi_N, so the
    valuation is that of a q-adic integer.  ``x`` may have rational
    denominators; q is unramified (q = 1 mod N) so they contribute v_q(den).
    """
    if x.is_zero():
        raise DomainError("valuation of zero")
    if x.field.N != site.N:
        site = site.restrict(x.field.N)
    q = site.q
    den = x.denominator()
    coords = [int(c * den) for c in x.coords]
    vden = 0
    while den % q == 0:
        den //= q
        vden += 1
    prec = 8
    while True:
        r = _hensel_root(site.N, q, site.omega, prec)
        mod = q ** prec
        val = sum(c * pow(r, i, mod) for i, c in enumerate(coords)) % mod
        if val:
            v = 0
            while val % q == 0:
                val //= q
                v += 1
            return v - vden
        prec *= 2

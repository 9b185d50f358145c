"""Exact arithmetic over F_{p^k} and Z_q.

Field elements are stored in the polynomial basis 1, t, ..., t^(k-1) of
F_p[t]/(f).  An element with coordinates (c_0, ..., c_{k-1}) is handled as
the integer code c_0 + c_1 p + ... + c_{k-1} p^(k-1), so that for prime
fields the code is the residue itself and points can live in integer numpy
arrays.  ``FieldCtx.coeffs`` / ``FieldCtx.elem`` convert between the two.

The scalar routines below do genuine polynomial arithmetic.  Vectorised
kernels used by the geometry and spectral code go through the q x q
addition / multiplication tables, which are built once per context from
the scalar routines.
"""

from __future__ import annotations

import cmath
import functools
import itertools
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .errors import CapExceeded, InvalidInput

__all__ = [
    "FieldCtx",
    "RingCtx",
    "DivisorStats",
    "field_make",
    "ring_make",
    "fe_add",
    "fe_sub",
    "fe_neg",
    "fe_mul",
    "fe_inv",
    "fe_pow",
    "trace",
    "additive_character",
    "divisor_stats",
    "is_prime",
    "parse_prime_power",
]

#: Largest field order for which the q x q operation tables are built.
TABLE_CAP = 2187


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


# -- polynomials over Z_p, coefficient lists low-to-high -----------------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim((x - y) % p for x, y in zip(a, b))


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_mod(a, f, p):
    """Remainder of a modulo the monic polynomial f."""
    a = _trim(a)
    k = len(f) - 1
    while len(a) > k:
        lead = a[-1]
        shift = len(a) - 1 - k
        for i, c in enumerate(f):
            a[shift + i] = (a[shift + i] - lead * c) % p
        a = _trim(a)
    return a


def _poly_divmod_general(a, b, p):
    inv = pow(b[-1], p - 2, p)
    a = _trim(a)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b):
        coef = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = coef
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a = _trim(a)
    return _trim(q), a


def _poly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod_general(a, b, p)
        a, b = b, r
    return a


def _poly_powmod(base, e, f, p):
    result = [1]
    base = _poly_mod(base, f, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), f, p)
        base = _poly_mod(_poly_mul(base, base, p), f, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f, p):
    """Rabin's test for a monic polynomial f over Z_p."""
    k = len(f) - 1
    if k == 1:
        return True
    x = [0, 1]
    if _trim(_poly_sub(_poly_powmod(x, p**k, f, p), x, p)):
        return False
    for r in _prime_factors(k):
        h = _poly_sub(_poly_powmod(x, p ** (k // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def _smallest_irreducible(p, k):
    # Non-leading coefficients enumerated with c_{k-1} most significant.
    for digits in itertools.product(range(p), repeat=k):
        f = list(reversed(digits)) + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- contexts ------------------------------------------------------------------


@dataclass(frozen=True)
class FieldCtx:
    """The field F_q = F_p[t]/(modulus), q = p**k.

    ``modulus`` is the coefficient sequence of a monic irreducible
    polynomial, low-to-high, so it has length k + 1.
    """

    p: int
    k: int
    modulus: tuple

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def kind(self) -> str:
        return "field"

    def coeffs(self, x: int) -> tuple:
        """Polynomial-basis coordinates of the element with code x."""
        out = []
        for _ in range(self.k):
            x, c = divmod(x, self.p)
            out.append(c)
        return tuple(out)

    def elem(self, coeffs) -> int:
        """Code of the element with the given coordinates (low-to-high)."""
        coeffs = list(coeffs)
        if len(coeffs) > self.k or any(not 0 <= c < self.p for c in coeffs):
            raise InvalidInput(f"not an element of F_{self.q}: {coeffs}")
        return sum(c * self.p**i for i, c in enumerate(coeffs))

    def check(self, x: int) -> int:
        if not 0 <= int(x) < self.q:
            raise InvalidInput(f"{x} is not an element code of F_{self.q}")
        return int(x)

    def __str__(self):
        return f"F_{self.q}" if self.k == 1 else f"F_{self.p}^{self.k}"

    # q x q operation tables over element codes, built lazily.

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        self._require_tables()
        idx = np.arange(self.q)
        if self.k == 1:
            return (idx[:, None] + idx[None, :]) % self.p
        digits = self._digits()
        s = (digits[:, None, :] + digits[None, :, :]) % self.p
        return s @ (self.p ** np.arange(self.k))

    @functools.cached_property
    def neg_table(self) -> np.ndarray:
        digits = self._digits()
        return ((-digits) % self.p) @ (self.p ** np.arange(self.k))

    @functools.cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        self._require_tables()
        idx = np.arange(self.q)
        if self.k == 1:
            return (idx[:, None] * idx[None, :]) % self.p
        table = np.zeros((self.q, self.q), dtype=np.int64)
        for a in range(self.q):
            for b in range(a, self.q):
                table[a, b] = table[b, a] = fe_mul(self, a, b)
        return table

    @functools.cached_property
    def trace_table(self) -> np.ndarray:
        """Tr(x) in Z_p for every code x."""
        return np.array([trace(self, x) for x in range(self.q)], dtype=np.int64)

    @functools.cached_property
    def trace_mul_table(self) -> np.ndarray:
        """Tr(a*b) for every pair of codes; the phase table of the characters."""
        return self.trace_table[self.mul_table]

    def pow_table(self, e: int) -> np.ndarray:
        return _pow_table(self, e)

    def _digits(self):
        idx = np.arange(self.q)
        return (idx[:, None] // self.p ** np.arange(self.k)) % self.p

    def _require_tables(self):
        if self.q > TABLE_CAP:
            raise CapExceeded(f"operation tables need q <= {TABLE_CAP}, got {self.q}")


@functools.lru_cache(maxsize=None)
def _pow_table(ctx: FieldCtx, e: int) -> np.ndarray:
    return np.array([fe_pow(ctx, x, e) for x in range(ctx.q)], dtype=np.int64)


@dataclass(frozen=True)
class RingCtx:
    """The ring Z_q of residues [0, q) for an odd modulus q >= 3."""

    q: int

    @property
    def kind(self) -> str:
        return "ring"

    def check(self, x: int) -> int:
        if not 0 <= int(x) < self.q:
            raise InvalidInput(f"{x} is not a residue mod {self.q}")
        return int(x)

    def __str__(self):
        return f"Z_{self.q}"


@dataclass(frozen=True)
class DivisorStats:
    tau: int
    gamma: int


@functools.lru_cache(maxsize=None)
def field_make(p: int, k: int = 1) -> FieldCtx:
    """Context for F_{p^k} with a deterministic modulus.

    The modulus is the smallest monic irreducible polynomial of degree k,
    comparing non-leading coefficients with c_{k-1} most significant.  For
    k = 1 this is x itself.

    >>> field_make(3, 2).modulus
    (1, 0, 1)
    """
    if not isinstance(p, (int, np.integer)) or not isinstance(k, (int, np.integer)):
        raise InvalidInput("p and k must be integers")
    p, k = int(p), int(k)
    if k < 1:
        raise InvalidInput(f"extension degree must be >= 1, got {k}")
    if p == 2 or not is_prime(p):
        raise InvalidInput(f"characteristic must be an odd prime, got {p}")
    return FieldCtx(p, k, _smallest_irreducible(p, k))


def ring_make(q: int) -> RingCtx:
    q = int(q)
    if q < 3 or q % 2 == 0:
        raise InvalidInput(f"ring modulus must be odd and >= 3, got {q}")
    return RingCtx(q)


def parse_prime_power(text: str) -> FieldCtx:
    """Field context from ``"p^k"``, ``"p**k"`` or a plain prime power ``"9"``."""
    text = str(text).strip().replace("**", "^")
    try:
        if "^" in text:
            p, k = (int(s) for s in text.split("^"))
        else:
            n = int(text)
            if n < 2:
                raise InvalidInput(f"not a prime power: {text}")
            p = _prime_factors(n)[0]
            k, m = 0, n
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise InvalidInput(f"not a prime power: {text}")
    except ValueError as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"cannot parse field order {text!r}") from exc
    return field_make(p, k)


# -- scalar field operations ---------------------------------------------------


def fe_add(ctx: FieldCtx, x: int, y: int) -> int:
    return ctx.elem((a + b) % ctx.p for a, b in zip(ctx.coeffs(x), ctx.coeffs(y)))


def fe_neg(ctx: FieldCtx, x: int) -> int:
    return ctx.elem((-a) % ctx.p for a in ctx.coeffs(x))


def fe_sub(ctx: FieldCtx, x: int, y: int) -> int:
    return fe_add(ctx, x, fe_neg(ctx, y))


def fe_mul(ctx: FieldCtx, x: int, y: int) -> int:
    if ctx.k == 1:
        return x * y % ctx.p
    prod = _poly_mul(_trim(ctx.coeffs(x)), _trim(ctx.coeffs(y)), ctx.p)
    return ctx.elem(_poly_mod(prod, ctx.modulus, ctx.p))


def fe_pow(ctx: FieldCtx, x: int, e: int) -> int:
    """x**e by square-and-multiply; e must be a positive integer."""
    if e < 1:
        raise InvalidInput(f"exponent must be positive, got {e}")
    result, base = None, x
    while e:
        if e & 1:
            result = base if result is None else fe_mul(ctx, result, base)
        e >>= 1
        if e:
            base = fe_mul(ctx, base, base)
    return result


def fe_inv(ctx: FieldCtx, x: int) -> int:
    if x == 0:
        raise ZeroDivisionError("0 has no inverse")
    return 1 if ctx.q == 2 else fe_pow(ctx, x, ctx.q - 2)


def trace(ctx: FieldCtx, x: int) -> int:
    """Absolute trace x + x^p + ... + x^(p^(k-1)), as a residue mod p."""
    total, y = 0, ctx.check(x)
    for _ in range(ctx.k):
        total = fe_add(ctx, total, y)
        if y:
            y = fe_pow(ctx, y, ctx.p)
    if total >= ctx.p:
        raise AssertionError("trace left the prime subfield")  # pragma: no cover
    return total


def additive_character(ctx: FieldCtx, m: int, x: int) -> complex:
    """psi_m(x) = exp(2 pi i Tr(m x) / p)."""
    if m == 0:
        return 1 + 0j
    return cmath.exp(2j * cmath.pi * trace(ctx, fe_mul(ctx, m, x)) / ctx.p)


# -- Z_q -----------------------------------------------------------------------


def divisor_stats(q: int) -> DivisorStats:
    """Number of divisors and smallest prime divisor of an odd q >= 3."""
    q = int(q)
    if q < 3 or q % 2 == 0:
        raise InvalidInput(f"q must be odd and >= 3, got {q}")
    tau = 0
    for f in range(1, isqrt(q) + 1):
        if q % f == 0:
            tau += 1 if f * f == q else 2
    gamma = next(f for f in range(3, q + 1, 2) if q % f == 0)
    return DivisorStats(tau=tau, gamma=gamma)


def coprime_to_char(c: int, p: int) -> bool:
    return gcd(c, p) == 1

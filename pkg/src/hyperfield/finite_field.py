"""Exact arithmetic in GF(q) for prime powers q <= 64.

Elements of GF(p^k) are encoded as integers ``sum c_i p^i`` of their
polynomial coefficients; the modulus is the first monic irreducible
polynomial of degree k in that same encoding order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_Q = 64


def prime_power(q: int):
    """Return ``(p, k)`` with ``q == p**k`` or ``None``."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


def prime_powers(upto: int) -> list:
    return [q for q in range(2, upto + 1) if prime_power(q)]


def divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


# polynomials over Z/p are coefficient lists, lowest degree first


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, m, p):
    a = list(a)
    inv_lead = pow(m[-1], -1, p)
    while len(_trim(a)) >= len(m):
        shift = len(a) - len(m)
        f = a[-1] * inv_lead % p
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
    return a


def _monic(p, deg):
    for code in range(p**deg):
        coeffs = []
        for _ in range(deg):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def is_irreducible(poly, p) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for f in _monic(p, d):
            if not _trim(_polymod(poly, f, p)):
                return False
    return True


def first_irreducible(p: int, k: int) -> tuple:
    for f in _monic(p, k):
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FiniteField:
    p: int
    k: int
    modulus: tuple
    add_table: np.ndarray
    mul_table: np.ndarray

    @property
    def q(self) -> int:
        return self.p**self.k

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(np.flatnonzero(self.add_table[a] == 0)[0])

    def power(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def subgroup(self, d: int) -> list:
        """The unique subgroup of order d in the multiplicative group."""
        if (self.q - 1) % d:
            raise ValueError(f"{d} does not divide {self.q - 1}")
        return [x for x in range(1, self.q) if self.power(x, d) == 1]


@lru_cache(maxsize=None)
def build_finite_field(q: int) -> FiniteField:
    pk = prime_power(q)
    if pk is None:
        raise ValueError(f"{q} is not a prime power")
    if q > MAX_Q:
        raise ValueError(f"q={q} exceeds the supported bound {MAX_Q}")
    p, k = pk
    modulus = (0, 1) if k == 1 else first_irreducible(p, k)

    def digits(x):
        return [(x // p**i) % p for i in range(k)]

    def encode(c):
        return sum(int(v) * p**i for i, v in enumerate(c))

    polys = [digits(x) for x in range(q)]
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add[a, b] = encode([(x + y) % p for x, y in zip(polys[a], polys[b])])
            prod_ = [0] * (2 * k - 1)
            for i, x in enumerate(polys[a]):
                for j, y in enumerate(polys[b]):
                    prod_[i + j] = (prod_[i + j] + x * y) % p
            mul[a, b] = encode(_polymod(prod_, list(modulus), p) if k > 1 else [prod_[0] % p])
    add.setflags(write=False)
    mul.setflags(write=False)
    return FiniteField(p, k, modulus, add, mul)

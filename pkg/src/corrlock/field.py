"""Arithmetic in GF(p^n) for the small prime powers used by the MUB construction.

Elements are stored as integers ``0 .. p^n - 1`` whose base-p digits are the
polynomial coefficients (digit ``i`` multiplies ``x^i``).  ``to_vector`` and
``from_vector`` convert to the coefficient-vector form.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

MAX_ORDER = 81
MAX_DEGREE = 4

# Conway polynomials, low degree coefficient first, leading 1 omitted.
CONWAY = {
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (5, 2): (2, 4),
    (7, 2): (3, 6),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, n)`` with ``q == p**n``, or ``None``."""
    if q < 2:
        return None
    p = next(f for f in range(2, q + 1) if q % f == 0)
    n = 0
    while q % p == 0:
        q //= p
        n += 1
    return (p, n) if q == 1 else None


def least_prime_power(d: int) -> int:
    """Smallest prime power no less than ``d``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    q = d
    while prime_power(q) is None:
        q += 1
    return q


def _poly_mod_has_factor(p: int, modulus: tuple[int, ...]) -> bool:
    """Trial division by every monic polynomial of degree 1 .. n//2."""
    n = len(modulus) - 1
    for deg in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            divisor = list(tail) + [1]
            rem = list(modulus)
            for shift in range(n - deg, -1, -1):
                c = rem[shift + deg] % p
                if c:
                    for i, a in enumerate(divisor):
                        rem[shift + i] = (rem[shift + i] - c * a) % p
            if not any(r % p for r in rem[:deg]):
                return True
    return False


class GaloisField:
    """GF(p^n) with precomputed addition and multiplication tables."""

    def __init__(self, p: int, n: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be positive")
        if n > 1 and (n > MAX_DEGREE or p**n > MAX_ORDER):
            raise ValueError(f"GF({p}^{n}) is outside the supported range (n <= {MAX_DEGREE}, p^n <= {MAX_ORDER})")
        if modulus is None:
            modulus = (0, 1) if n == 1 else CONWAY[(p, n)] + (1,)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if n > 1 and _poly_mod_has_factor(p, modulus):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p, self.n, self.modulus = p, n, modulus
        self.order = p**n
        self._digits = p ** np.arange(n)
        vecs = np.array([self.to_vector(x) for x in range(self.order)])
        self._add = self._encode((vecs[:, None, :] + vecs[None, :, :]) % p)
        self._neg = self._encode((-vecs) % p)
        self._mul = np.array([[self._poly_mul(a, b) for b in vecs] for a in vecs], dtype=np.int64)
        self._trace = np.array([self._compute_trace(x) for x in range(self.order)], dtype=np.int64)

    def __repr__(self):
        return f"GaloisField(p={self.p}, n={self.n}, modulus={self.modulus})"

    def to_vector(self, x: int) -> tuple[int, ...]:
        return tuple((x // self.p**i) % self.p for i in range(self.n))

    def from_vector(self, v) -> int:
        return int(np.dot(np.asarray(v) % self.p, self._digits))

    def _encode(self, vecs: np.ndarray) -> np.ndarray:
        return (vecs * self._digits).sum(axis=-1)

    def _poly_mul(self, a, b) -> int:
        p, n = self.p, self.n
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] += int(ai) * int(bj)
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(n + 1):
                    prod[k - n + i] -= c * self.modulus[i]
        return self.from_vector([c % p for c in prod[:n]])

    def add(self, x: int, y: int) -> int:
        return int(self._add[x, y])

    def neg(self, x: int) -> int:
        return int(self._neg[x])

    def mul(self, x: int, y: int) -> int:
        return int(self._mul[x, y])

    def pow(self, x: int, k: int) -> int:
        r = 1
        for _ in range(k):
            r = self.mul(r, x)
        return r

    def _compute_trace(self, x: int) -> int:
        acc, y = 0, x
        for _ in range(self.n):
            acc = self.add(acc, y)
            y = self.pow(y, self.p)
        # the trace lies in the prime subfield, i.e. the constant coefficient
        if acc >= self.p:
            raise ArithmeticError("field trace left the prime subfield; modulus is wrong")
        return acc

    def trace(self, x: int) -> int:
        """Absolute trace ``x + x^p + ... + x^(p^(n-1))`` as an integer mod p."""
        return int(self._trace[x])

    def multiplicative_order(self, x: int) -> int:
        if x == 0:
            raise ValueError("zero has no multiplicative order")
        k, y = 1, x
        while y != 1:
            y = self.mul(y, x)
            k += 1
        return k


@lru_cache(maxsize=None)
def field_for(q: int) -> GaloisField:
    pn = prime_power(q)
    if pn is None:
        raise ValueError(f"{q} is not a prime power")
    return GaloisField(*pn)


def gf_trace(f: GaloisField, x) -> int:
    """Field trace of ``x`` (an integer label or a coefficient vector)."""
    if not isinstance(x, (int, np.integer)):
        x = f.from_vector(x)
    return f.trace(int(x))

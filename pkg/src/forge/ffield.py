"""Exact arithmetic in F_q and F_{q^n} with the relative Frobenius.

The base field F_q (q = p^f) is realized as F_p[y]/(g) for the smallest
irreducible monic g in a fixed encoding order; an extension F_{q^n} is
F_q[x]/(h) with h chosen the same way.  Elements are coefficient tuples
(little-endian).  The encoding order makes every derived value (moduli,
multiplicative generators, special elements) reproducible.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache
from typing import Iterator, Optional

import sympy

_FACTOR_EFFORT_BOUND = 10**40


class BaseField:
    """F_q with q = p^f; elements are ints (f=1) or little-endian tuples."""

    def __init__(self, p: int, f: int = 1):
        if not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")
        if f < 1:
            raise ValueError("f must be positive")
        self.p = p
        self.f = f
        self.q = p**f
        if f == 1:
            self.modulus: Optional[tuple[int, ...]] = None
        else:
            self.modulus = _smallest_irreducible_prime_field(p, f)

    # -- element plumbing ------------------------------------------------
    def zero(self):
        return 0 if self.f == 1 else (0,) * self.f

    def one(self):
        return 1 if self.f == 1 else (1,) + (0,) * (self.f - 1)

    def from_int(self, n: int):
        if self.f == 1:
            return n % self.p
        digits = []
        n %= self.q
        for _ in range(self.f):
            digits.append(n % self.p)
            n //= self.p
        return tuple(digits)

    def encode(self, a) -> int:
        if self.f == 1:
            return a
        return sum(c * self.p**i for i, c in enumerate(a))

    def elements(self) -> Iterator:
        for n in range(self.q):
            yield self.from_int(n)

    # -- arithmetic ------------------------------------------------------
    def add(self, a, b):
        if self.f == 1:
            return (a + b) % self.p
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.f == 1:
            return (a - b) % self.p
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        if self.f == 1:
            return -a % self.p
        return tuple(-x % self.p for x in a)

    def mul(self, a, b):
        if self.f == 1:
            return a * b % self.p
        prod = [0] * (2 * self.f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self._reduce(prod)

    def _reduce(self, prod: list[int]):
        mod = self.modulus
        assert mod is not None
        dm = self.f
        for i in range(len(prod) - 1, dm - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(dm):
                    prod[i - dm + j] = (prod[i - dm + j] - c * mod[j]) % self.p
        return tuple(prod[:dm])

    def smul(self, n: int, a):
        if self.f == 1:
            return n * a % self.p
        return tuple(n * x % self.p for x in a)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError
        return self.pow(a, self.q - 2)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        if not self.is_zero(a):
            e %= self.q - 1
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_zero(self, a) -> bool:
        return a == self.zero()


def _prime_field_polmul(p: int, a: tuple, b: tuple, mod: tuple) -> tuple:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    dm = len(mod) - 1
    for i in range(len(prod) - 1, dm - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(dm):
                prod[i - dm + j] = (prod[i - dm + j] - c * mod[j]) % p
    out = list(prod[:dm])
    out += [0] * (dm - len(out))
    return tuple(out)


def _prime_field_powmod(p: int, a: tuple, e: int, mod: tuple) -> tuple:
    r = (1,) + (0,) * (len(mod) - 2)
    b = tuple(a)
    while e:
        if e & 1:
            r = _prime_field_polmul(p, r, b, mod)
        b = _prime_field_polmul(p, b, b, mod)
        e >>= 1
    return r


@lru_cache(maxsize=None)
def _smallest_irreducible_prime_field(p: int, n: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree n over F_p in encoding order."""
    for enc in itertools.count(0):
        digits, e = [], enc
        for _ in range(n):
            digits.append(e % p)
            e //= p
        if e:
            raise ValueError("no irreducible polynomial found")  # unreachable
        mod = tuple(digits) + (1,)
        if _is_irreducible_prime_field(p, mod):
            return mod
    raise AssertionError


def _is_irreducible_prime_field(p: int, mod: tuple[int, ...]) -> bool:
    n = len(mod) - 1
    if n == 1:
        return True
    x = (0, 1) + (0,) * (n - 2)
    if _prime_field_powmod(p, x, p**n, mod) != x:
        return False
    for ell in sympy.primefactors(n):
        y = _prime_field_powmod(p, x, p ** (n // ell), mod)
        diff = tuple((a - b) % p for a, b in zip(y, x))
        if _poly_gcd_degree(p, list(diff), list(mod)) > 0:
            return False
    return True


def _poly_gcd_degree(p: int, a: list[int], b: list[int]) -> int:
    def deg(u):
        for i in range(len(u) - 1, -1, -1):
            if u[i]:
                return i
        return -1

    while deg(a) >= 0:
        da, db = deg(a), deg(b)
        if da < db:
            a, b = b, a
            continue
        c = a[da] * pow(b[db], -1, p) % p
        for j in range(db + 1):
            a[da - db + j] = (a[da - db + j] - c * b[j]) % p
    return deg(b)


class FieldExtension:
    """F_{q^n} over F_q with Frobenius sigma: x -> x^q."""

    def __init__(self, p: int, f: int, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.base = BaseField(p, f)
        self.p, self.f, self.n = p, f, n
        self.q = self.base.q
        self.modulus = self._find_modulus()
        self._frobenius_matrix = self._build_frobenius_matrix()
        self._generator: Optional[tuple] = None

    # -- construction ----------------------------------------------------
    def _find_modulus(self) -> tuple:
        base = self.base
        if self.n == 1:
            # x - c with c the smallest non-residue-free choice: x itself.
            return (base.zero(), base.one())
        for enc in itertools.count(0):
            digits, e = [], enc
            for _ in range(self.n):
                digits.append(base.from_int(e % self.q))
                e //= self.q
            mod = tuple(digits) + (base.one(),)
            if self._is_irreducible(mod):
                return mod
        raise AssertionError

    def _polmul(self, a: tuple, b: tuple, mod: tuple) -> tuple:
        base = self.base
        prod = [base.zero()] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not base.is_zero(x):
                for j, y in enumerate(b):
                    prod[i + j] = base.add(prod[i + j], base.mul(x, y))
        dm = len(mod) - 1
        for i in range(len(prod) - 1, dm - 1, -1):
            c = prod[i]
            if not base.is_zero(c):
                prod[i] = base.zero()
                for j in range(dm):
                    prod[i - dm + j] = base.sub(prod[i - dm + j], base.mul(c, mod[j]))
        out = list(prod[:dm])
        out += [base.zero()] * (dm - len(out))
        return tuple(out)

    def _powmod(self, a: tuple, e: int, mod: tuple) -> tuple:
        base = self.base
        r = tuple([base.one()] + [base.zero()] * (len(mod) - 2))
        b = tuple(a)
        while e:
            if e & 1:
                r = self._polmul(r, b, mod)
            b = self._polmul(b, b, mod)
            e >>= 1
        return r

    def _is_irreducible(self, mod: tuple) -> bool:
        base = self.base
        n = len(mod) - 1
        if n == 1:
            return True
        x = tuple([base.zero(), base.one()] + [base.zero()] * (n - 2))
        if self._powmod(x, self.q**n, mod) != x:
            return False
        for ell in sympy.primefactors(n):
            y = self._powmod(x, self.q ** (n // ell), mod)
            diff = [base.sub(u, v) for u, v in zip(y, x)]
            if self._ext_gcd_degree(diff, list(mod)) > 0:
                return False
        return True

    def _ext_gcd_degree(self, a: list, b: list) -> int:
        base = self.base

        def deg(u):
            for i in range(len(u) - 1, -1, -1):
                if not base.is_zero(u[i]):
                    return i
            return -1

        while deg(a) >= 0:
            da, db = deg(a), deg(b)
            if da < db:
                a, b = b, a
                continue
            c = base.mul(a[da], base.inv(b[db]))
            for j in range(db + 1):
                a[da - db + j] = base.sub(a[da - db + j], base.mul(c, b[j]))
        return deg(b)

    def _build_frobenius_matrix(self) -> tuple:
        # sigma is F_q-linear; precompute images of the power basis.
        x = self.gen_x()
        xq = self.pow(x, self.q)
        cols = [self.one()]
        if self.n > 1:
            cols = [self.one(), xq]
            for _ in range(2, self.n):
                cols.append(self.mul(cols[-1], xq))
        return tuple(cols)

    # -- element plumbing ------------------------------------------------
    def zero(self) -> tuple:
        return (self.base.zero(),) * self.n

    def one(self) -> tuple:
        return tuple([self.base.one()] + [self.base.zero()] * (self.n - 1))

    def gen_x(self) -> tuple:
        if self.n == 1:
            # residue of x modulo x - c is c; modulus here is x itself -> 0.
            return self.zero()
        return tuple(
            [self.base.zero(), self.base.one()] + [self.base.zero()] * (self.n - 2)
        )

    def from_base(self, c) -> tuple:
        return tuple([c] + [self.base.zero()] * (self.n - 1))

    def from_int(self, n: int) -> tuple:
        digits = []
        n %= self.q**self.n
        for _ in range(self.n):
            digits.append(self.base.from_int(n % self.q))
            n //= self.q
        return tuple(digits)

    def encode(self, a: tuple) -> int:
        return sum(self.base.encode(c) * self.q**i for i, c in enumerate(a))

    def elements(self) -> Iterator[tuple]:
        for n in range(self.q**self.n):
            yield self.from_int(n)

    def is_zero(self, a: tuple) -> bool:
        return all(self.base.is_zero(c) for c in a)

    def in_base_field(self, a: tuple) -> bool:
        return all(self.base.is_zero(c) for c in a[1:])

    # -- arithmetic ------------------------------------------------------
    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        return self._polmul(a, b, self.modulus)

    def smul(self, n: int, a):
        return tuple(self.base.smul(n, x) for x in a)

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        return self._powmod(a, e, self.modulus)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError
        return self.pow(a, self.q**self.n - 2)

    # -- Frobenius and traces ---------------------------------------------
    def frobenius(self, a: tuple, k: int = 1) -> tuple:
        """sigma^k with sigma: x -> x^q."""
        k %= self.n
        out = a
        for _ in range(k):
            out = self._frobenius_once(out)
        return out

    def _frobenius_once(self, a: tuple) -> tuple:
        # sigma fixes F_q, so sigma(sum c_i x^i) = sum c_i (x^q)^i.
        base = self.base
        acc = self.zero()
        for i, c in enumerate(a):
            if not base.is_zero(c):
                acc = self.add(acc, self.mul(self.from_base(c), self._frobenius_matrix[i]))
        return acc

    def trace(self, a: tuple) -> tuple:
        out = self.zero()
        cur = a
        for _ in range(self.n):
            out = self.add(out, cur)
            cur = self._frobenius_once(cur)
        return out

    def minimal_polynomial_degree(self, a: tuple) -> int:
        """Degree of the minimal polynomial over F_q = Frobenius orbit size."""
        cur = self._frobenius_once(a)
        k = 1
        while cur != a:
            cur = self._frobenius_once(cur)
            k += 1
        return k

    # -- special elements --------------------------------------------------
    def find_trace_zero_generator(self) -> tuple:
        """A unit residue e with full Frobenius orbit and zero trace.

        Start from the residue class of x (whose minimal polynomial is the
        modulus, hence of full degree) and subtract off its trace scaled by
        1/n; requires p not dividing n and n >= 2.
        """
        if self.n < 2:
            raise ValueError("extension degree must be at least 2")
        if self.n % self.p == 0:
            raise ValueError("requires p not dividing n")
        e0 = self.gen_x()
        e = self.sub(self.smul(self.n, e0), self.trace(e0))
        assert not self.is_zero(e)
        assert self.is_zero(self.trace(e))
        assert self.minimal_polynomial_degree(e) == self.n
        return e

    def multiplicative_generator(self) -> tuple:
        """Smallest element (encoding order) of multiplicative order q^n - 1."""
        if self._generator is not None:
            return self._generator
        order = self.q**self.n - 1
        if order >= _FACTOR_EFFORT_BOUND:
            raise ValueError("factorization effort bound exceeded for q^n - 1")
        primes = sympy.primefactors(order)
        one = self.one()
        for enc in range(2, self.q**self.n):
            c = self.from_int(enc)
            if all(self.pow(c, order // ell) != one for ell in primes):
                self._generator = c
                return c
        raise AssertionError("no generator found")

    def generator_power(self, exponent: int) -> tuple:
        return self.pow(self.multiplicative_generator(), exponent)

    # -- serialization ------------------------------------------------------
    def to_json_dict(self) -> dict:
        def enc_poly(poly):
            return [self.base.encode(c) for c in poly]

        return {
            "p": self.p,
            "f": self.f,
            "n": self.n,
            "modulus": enc_poly(self.modulus),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def element_to_json(self, a: tuple) -> list[int]:
        return [self.base.encode(c) for c in a]

    def element_from_json(self, data: list[int]) -> tuple:
        return tuple(self.base.from_int(c) for c in data)


@lru_cache(maxsize=None)
def build_extension(p: int, f: int, n: int) -> FieldExtension:
    """Cached handle for F_{(p^f)^n} with deterministic modulus."""
    return FieldExtension(p, f, n)


def extension_from_json(text: str) -> FieldExtension:
    data = json.loads(text)
    ext = build_extension(data["p"], data["f"], data["n"])
    if ext.to_json_dict()["modulus"] != data["modulus"]:
        raise ValueError("modulus mismatch: non-canonical serialized extension")
    return ext


def frobenius(ext: FieldExtension, x: tuple, k: int = 1) -> tuple:
    return ext.frobenius(x, k)


def find_trace_zero_generator(ext: FieldExtension) -> tuple:
    return ext.find_trace_zero_generator()


def generator_power(ext: FieldExtension, exponent: int) -> tuple:
    return ext.generator_power(exponent)

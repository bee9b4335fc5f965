"""Exact arithmetic contexts: prime fields, extension fields GF(p^k), rationals.

Every context exposes the same small surface:

    zero, one, characteristic, size
    add / sub / mul / neg / inv / is_zero / is_element
    sample_uniform(rng)

No floating point is used anywhere.  Extension-field elements are stored as
Python ints with the coefficient vector packed into fixed-width limbs, so
equality and zero tests are plain integer comparisons.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction

from .errors import FieldError

_MASK64 = (1 << 64) - 1

# Proven-deterministic Miller-Rabin witness set for n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic primality test (valid below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise FieldError(f"primality test limit exceeded: {n}")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Rng:
    """Seeded deterministic generator (Mersenne Twister).

    The same 64-bit seed yields the same stream on every platform and run.
    Child generators are derived by hashing (seed, index) with SHA-256, so
    concurrent trials can own independent, reproducible streams.
    """

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._r = random.Random(self.seed)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        return self._r.randint(lo, hi)

    def randrange(self, n: int) -> int:
        return self._r.randrange(n)

    def spawn(self, index: int) -> "Rng":
        h = hashlib.sha256(f"rigidmat:{self.seed}:{index}".encode()).digest()
        return Rng(int.from_bytes(h[:8], "little"))


class Rationals:
    """Exact rational arithmetic (arbitrary precision).

    ``sample_uniform`` draws uniform integers from the window [-window, window]
    embedded as rationals; ``size`` reports the window cardinality, which is
    what enters Schwartz-Zippel error bounds.
    """

    characteristic = 0

    def __init__(self, window: int = 1 << 20):
        if window < 1:
            raise FieldError("sampling window must be positive")
        self.window = window
        self.zero = Fraction(0)
        self.one = Fraction(1)

    @property
    def size(self) -> int:
        return 2 * self.window + 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_element(self, a) -> bool:
        return isinstance(a, (Fraction, int))

    def sample_uniform(self, rng: Rng):
        return Fraction(rng.randint(-self.window, self.window))

    def __eq__(self, other):
        return isinstance(other, Rationals) and other.window == self.window

    def __hash__(self):
        return hash(("Q", self.window))

    def __repr__(self):
        return "Rationals()"


class PrimeField:
    """GF(p) for prime p; elements are ints reduced to [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    @property
    def size(self) -> int:
        return self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_element(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.p

    def sample_uniform(self, rng: Rng):
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


# ---------------------------------------------------------------------------
# GF(p^k)


def _poly_trim(a: tuple) -> tuple:
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _poly_mulmod(a, b, f, p):
    """(a*b) mod f over GF(p); f monic, coefficient tuples little-endian."""
    k = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for e in range(k):
                if f[e]:
                    prod[d - k + e] = (prod[d - k + e] - c * f[e]) % p
    return _poly_trim(tuple(prod))


def _poly_powmod(a, e, f, p):
    result = (1,)
    base = a
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(tuple(x % p for x in a)), _poly_trim(tuple(x % p for x in b))
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        r = list(a)
        while len(r) >= len(b) and _poly_trim(tuple(r)):
            r = list(_poly_trim(tuple(r)))
            if len(r) < len(b):
                break
            c = r[-1] * inv_lead % p
            shift = len(r) - len(b)
            for i, bi in enumerate(b):
                r[shift + i] = (r[shift + i] - c * bi) % p
            r = list(_poly_trim(tuple(r)))
        a, b = b, _poly_trim(tuple(r))
    return a


def is_irreducible(f: tuple, p: int) -> bool:
    """Monic f of degree k is irreducible over GF(p) iff it has no factor of
    degree <= k/2; tested via gcd(f, x^(p^i) - x) for i = 1 .. k//2."""
    f = _poly_trim(tuple(c % p for c in f))
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        return False
    if k == 1:
        return True
    if f[0] == 0:  # divisible by x
        return False
    h = (0, 1)  # x
    for _ in range(k // 2):
        h = _poly_powmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(f, tuple(diff), p)
        if len(g) > 1:
            return False
    return True


_IRREDUCIBLE_CACHE: dict[tuple[int, int], tuple] = {}


def irreducible_polynomial(p: int, k: int) -> tuple:
    """Deterministic monic irreducible of degree k over GF(p).

    Prefers sparse candidates (binomials, trinomials, then denser) searched in
    a fixed order, so every run of the library agrees on the modulus; falls
    back to a seeded random search.  Results are cached per (p, k).
    """
    key = (p, k)
    if key in _IRREDUCIBLE_CACHE:
        return _IRREDUCIBLE_CACHE[key]
    if k == 1:
        f = (0, 1)
        _IRREDUCIBLE_CACHE[key] = f
        return f

    def candidates():
        # Low exponents first: a sparse modulus with small inner exponents
        # keeps the limb-fold in packed arithmetic to a couple of passes.
        for b in range(1, p):  # x^k + b
            yield (b,) + (0,) * (k - 1) + (1,)
        for j in range(1, k):  # x^k + a x^j + b
            for a in range(1, p):
                for b in range(1, p):
                    c = [0] * (k + 1)
                    c[0], c[j], c[k] = b, a, 1
                    yield tuple(c)
        if p > 2:  # even-weight polynomials over GF(2) are divisible by x+1
            for j2 in range(2, k):
                for j1 in range(1, j2):
                    for a2 in range(1, p):
                        for a1 in range(1, p):
                            for b in range(1, p):
                                c = [0] * (k + 1)
                                c[0], c[j1], c[j2], c[k] = b, a1, a2, 1
                                yield tuple(c)
        for j3 in range(3, k):  # pentanomials x^k + x^j3 + x^j2 + x^j1 + b
            for j2 in range(2, j3):
                for j1 in range(1, j2):
                    for b in range(1, p):
                        c = [0] * (k + 1)
                        c[0], c[j1], c[j2], c[j3], c[k] = b, 1, 1, 1, 1
                        yield tuple(c)

    for f in candidates():
        if is_irreducible(f, p):
            _IRREDUCIBLE_CACHE[key] = f
            return f
    rng = Rng(0xF1E1D * p + k)
    while True:
        c = [rng.randrange(p) for _ in range(k)] + [1]
        f = tuple(c)
        if is_irreducible(f, p):
            _IRREDUCIBLE_CACHE[key] = f
            return f


class ExtensionField:
    """GF(p^k) with a verified irreducible modulus polynomial.

    Elements are ints packing the coefficient vector little-endian into
    ``limb_bits``-wide limbs.  ``limb_bits`` is chosen so that the limbwise
    convolution arising from integer multiplication of two packed elements
    never carries between limbs (k * (p-1)^2 fits in one limb).
    """

    def __init__(self, p: int, k: int, modulus_poly=None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be positive")
        self.p = p
        self.k = k
        self.characteristic = p
        if modulus_poly is None:
            modulus_poly = irreducible_polynomial(p, k)
        modulus_poly = tuple(c % p for c in modulus_poly)
        if len(_poly_trim(modulus_poly)) != k + 1 or modulus_poly[k] != 1:
            raise FieldError(f"modulus must be monic of degree {k}")
        if not is_irreducible(modulus_poly, p):
            raise FieldError(f"modulus {modulus_poly} is reducible over GF({p})")
        self.modulus = modulus_poly
        # nonzero lower-degree terms, used for the fold x^k = -(sum c_e x^e)
        self.lower_terms = tuple((e, modulus_poly[e]) for e in range(k) if modulus_poly[e])
        bound = k * (p - 1) * (p - 1)
        self.limb_bits = next(w for w in (8, 16, 32) if bound < (1 << w))
        self._mask = (1 << self.limb_bits) - 1
        self.zero = 0
        self.one = 1
        self._x = 1 << self.limb_bits if k > 1 else self.pack((1,))

    @property
    def size(self) -> int:
        return self.p**self.k

    # -- packing -----------------------------------------------------------
    def pack(self, coeffs) -> int:
        out = 0
        for i, c in enumerate(coeffs):
            out |= (int(c) % self.p) << (i * self.limb_bits)
        return out

    def unpack(self, a: int) -> tuple:
        w, mask = self.limb_bits, self._mask
        return tuple((a >> (i * w)) & mask for i in range(self.k))

    def _unpack_long(self, a: int, n: int) -> list:
        w, mask = self.limb_bits, self._mask
        return [(a >> (i * w)) & mask for i in range(n)]

    def _fold(self, limbs: list) -> list:
        """Reduce a coefficient list modulo the modulus polynomial."""
        p, k = self.p, self.k
        for d in range(len(limbs) - 1, k - 1, -1):
            c = limbs[d]
            if c:
                limbs[d] = 0
                for e, fc in self.lower_terms:
                    limbs[d - k + e] -= c * fc
        return [v % p for v in limbs[:k]]

    # -- arithmetic ---------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        s = a + b  # limbwise, no carries: limbs < p and 2p fits the limb
        w, mask, p = self.limb_bits, self._mask, self.p
        out = 0
        i = 0
        while s:
            out |= ((s & mask) % p) << (i * w)
            s >>= w
            i += 1
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        w, mask, p = self.limb_bits, self._mask, self.p
        out = 0
        i = 0
        while a:
            out |= ((p - (a & mask)) % p) << (i * w)
            a >>= w
            i += 1
        return out

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        prod = a * b  # limbwise convolution, no carries by limb choice
        limbs = self._unpack_long(prod, 2 * self.k - 1)
        return self.pack(self._fold(limbs))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.p
        r0, r1 = self.modulus, _poly_trim(self.unpack(a))
        s0, s1 = (), (1,)
        while r1:
            # divide r0 by r1
            q = [0] * (max(len(r0) - len(r1), 0) + 1)
            r = list(r0)
            inv_lead = pow(r1[-1], p - 2, p)
            while len(_poly_trim(tuple(r))) >= len(r1):
                r = list(_poly_trim(tuple(r)))
                shift = len(r) - len(r1)
                c = r[-1] * inv_lead % p
                q[shift] = c
                for i, bi in enumerate(r1):
                    r[shift + i] = (r[shift + i] - c * bi) % p
            r = _poly_trim(tuple(r))
            # s_new = s0 - q * s1
            qs1 = [0] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, qi in enumerate(q):
                if qi:
                    for j, sj in enumerate(s1):
                        qs1[i + j] = (qs1[i + j] + qi * sj) % p
            s_new = [0] * max(len(s0), len(qs1))
            for i, v in enumerate(s0):
                s_new[i] = v
            for i, v in enumerate(qs1):
                s_new[i] = (s_new[i] - v) % p
            r0, r1 = r1, r
            s0, s1 = s1, _poly_trim(tuple(s_new))
        # r0 is the gcd, a nonzero constant
        c_inv = pow(r0[0], p - 2, p)
        return self.pack(tuple(v * c_inv % p for v in s0))

    def is_zero(self, a) -> bool:
        return a == 0

    def is_element(self, a) -> bool:
        if not isinstance(a, int) or a < 0:
            return False
        return all(c < self.p for c in self._unpack_long(a, max(1, a.bit_length() // self.limb_bits + 1)))

    def sample_uniform(self, rng: Rng) -> int:
        return self.pack(tuple(rng.randrange(self.p) for _ in range(self.k)))

    def x(self) -> int:
        """The packed class of x, a generator of the field over GF(p) as algebra."""
        return self._x

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.k == self.k
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("Fq", self.p, self.k, self.modulus))

    def __repr__(self):
        return f"ExtensionField({self.p}, {self.k})"


def field_for_characteristic(p: int, min_size: int = 1 << 30):
    """Pick the working field for a target characteristic.

    Characteristic 0 maps to exact rationals.  For prime p the field is GF(p)
    itself when p already reaches ``min_size`` and otherwise GF(p^k) with the
    smallest k such that p^k >= min_size, keeping randomized rank queries
    inside a uniform Schwartz-Zippel budget.
    """
    if p == 0:
        return Rationals()
    if not is_prime(p):
        raise FieldError(f"characteristic must be 0 or prime, got {p}")
    if p >= min_size:
        return PrimeField(p)
    k = 1
    size = p
    while size < min_size:
        size *= p
        k += 1
    return ExtensionField(p, k)


# 62-bit prime used by the fast characteristic-0 surrogate rank path.
CHAR0_SURROGATE_PRIME = (1 << 62) - 57


def char0_surrogate_field() -> PrimeField:
    """Large prime field standing in for characteristic 0 during wide scans.

    Rank over GF(q) of an integer matrix never exceeds its rational rank, so
    the surrogate keeps the one-sided error contract; callers re-confirm any
    reported witness over the rationals.
    """
    return PrimeField(CHAR0_SURROGATE_PRIME)

"""Exact coefficient arithmetic for the two shifting backends.

The symbolic backend works with sparse multivariate polynomials over the
integers (reduced modulo p on demand) and decides linear dependence by
fraction-free Bareiss elimination, so every zero test is exact.  The
randomized backend replaces the indeterminates by values drawn from a
domain large enough for the Schwartz-Zippel bound: uniform integers from
``[1, ceil(2 * degree_budget / epsilon)]`` in characteristic zero, or a
field GF(p^e) with ``p^e`` at least ``2 * degree_budget / epsilon`` in
characteristic p.  Randomized runs derive every sample from a SHA-256
counter stream keyed by (seed, call fingerprint, attempt), which makes
results reproducible and independent of call order.

All scalars are plain Python data (ints, tuples of ints); each concrete
domain is a small object bundling the ring operations for them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    InternalError,
    InvalidCharacteristicError,
    MathPreconditionError,
)

__all__ = [
    "is_prime",
    "Characteristic",
    "Backend",
    "FieldContext",
    "make_field_context",
    "DEFAULT_EPSILON",
    "IntegerRing",
    "ZZ",
    "PrimeField",
    "BinaryExtensionField",
    "PrimeExtensionField",
    "gf_extension",
    "MultiPoly",
    "PolynomialRing",
    "EvalPoint",
    "poly_eval",
    "sample_eval_point",
    "char0_prime_pair",
    "reduce_point_mod",
    "DeterministicStream",
    "rank_profile",
    "matrix_rank",
    "ProfileState",
]

DEFAULT_EPSILON = Fraction(1, 2**30)


# ------------------------------------------------------------- primality

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Miller-Rabin with a fixed base set, deterministic below 3.3e24."""
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Characteristic:
    """Zero or a prime; validated on construction."""

    value: int

    def __post_init__(self):
        if self.value != 0 and not is_prime(self.value):
            raise InvalidCharacteristicError(
                f"characteristic must be 0 or prime, got {self.value}"
            )

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self) -> str:
        return f"Characteristic({self.value})"


class Backend(Enum):
    SYMBOLIC = "symbolic"
    RANDOMIZED = "randomized"


def _ceil_fraction(fr: Fraction) -> int:
    return -((-fr.numerator) // fr.denominator)


@dataclass(frozen=True)
class FieldContext:
    """Everything a shifting call needs to know about its arithmetic.

    Immutable; operations taking a context are pure functions of
    (inputs, context).  ``extension_degree`` optionally floors the
    extension used for characteristic-p sampling; the degree required by
    the per-call Schwartz-Zippel budget always wins if larger.
    ``char0_double_prime`` switches the characteristic-zero randomized
    path from exact big-integer elimination to reduction modulo two
    independently chosen 62-bit primes with an agreement check.
    """

    characteristic: Characteristic
    backend: Backend
    seed: int = 0
    epsilon: Fraction = DEFAULT_EPSILON
    extension_degree: int | None = None
    char0_double_prime: bool = False

    def domain_size_bound(self, degree_budget: int) -> int:
        """Smallest admissible sampling-domain size for one randomized call."""
        budget = max(1, degree_budget)
        return max(2, _ceil_fraction(Fraction(2 * budget) / self.epsilon))


def make_field_context(
    characteristic: int | Characteristic = 0,
    backend: Backend | str = Backend.RANDOMIZED,
    seed: int = 0,
    epsilon: Fraction = DEFAULT_EPSILON,
    extension_degree: int | None = None,
    char0_double_prime: bool = False,
) -> FieldContext:
    if not isinstance(characteristic, Characteristic):
        characteristic = Characteristic(int(characteristic))
    if isinstance(backend, str):
        try:
            backend = Backend(backend.lower())
        except ValueError as exc:
            raise MathPreconditionError(f"unknown backend {backend!r}") from exc
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise MathPreconditionError(f"epsilon must lie in (0, 1), got {epsilon}")
    if extension_degree is not None and extension_degree < 1:
        raise MathPreconditionError("extension_degree must be positive")
    return FieldContext(
        characteristic=characteristic,
        backend=backend,
        seed=int(seed),
        epsilon=epsilon,
        extension_degree=extension_degree,
        char0_double_prime=char0_double_prime,
    )


# ------------------------------------------------------------ domains


class IntegerRing:
    """Arbitrary-precision integers; exact division only where it is exact."""

    characteristic = 0
    is_field = False
    zero = 0
    one = 1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def exact_div(a, b):
        q, r = divmod(a, b)
        if r:
            raise InternalError(f"inexact integer division {a} / {b}")
        return q

    @staticmethod
    def from_int(c):
        return c

    def __repr__(self) -> str:
        return "ZZ"


ZZ = IntegerRing()


class PrimeField:
    """GF(p) with elements written as ints in [0, p)."""

    is_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise InvalidCharacteristicError(f"{p} is not prime")
        self.p = p
        self.e = 1
        self.size = p
        self.characteristic = p
        self.modulus = None
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def is_zero(self, a):
        return a == 0

    def inv(self, a):
        if a % self.p == 0:
            raise MathPreconditionError("division by zero in GF(p)")
        return pow(a, self.p - 2, self.p)

    def exact_div(self, a, b):
        return a * self.inv(b) % self.p

    def from_int(self, c):
        return c % self.p

    def sample(self, index: int):
        return index % self.p

    def __repr__(self) -> str:
        return f"GF({self.p})"


class BinaryExtensionField:
    """GF(2^e) with elements packed into ints, bit t holding the x^t coefficient."""

    is_field = True
    characteristic = 2

    def __init__(self, e: int, modulus: int):
        if modulus.bit_length() != e + 1:
            raise MathPreconditionError("modulus degree does not match extension degree")
        self.p = 2
        self.e = e
        self.size = 1 << e
        self.modulus = modulus
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return a ^ b

    sub = add

    @staticmethod
    def neg(a):
        return a

    @staticmethod
    def is_zero(a):
        return a == 0

    def mul(self, a, b):
        if not a or not b:
            return 0
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        m, e = self.modulus, self.e
        rl = r.bit_length()
        while rl > e:
            r ^= m << (rl - 1 - e)
            rl = r.bit_length()
        return r

    def inv(self, a):
        if a == 0:
            raise MathPreconditionError("division by zero in GF(2^e)")
        # extended Euclid in GF(2)[x] on bit-packed polynomials
        r0, r1 = self.modulus, a
        s0, s1 = 0, 1
        while r1:
            q = 0
            r = r0
            d1 = r1.bit_length()
            while r.bit_length() >= d1:
                shift = r.bit_length() - d1
                r ^= r1 << shift
                q ^= 1 << shift
            r0, r1 = r1, r
            prod = 0
            qq, ss = q, s1
            while qq:
                if qq & 1:
                    prod ^= ss
                ss <<= 1
                qq >>= 1
            s0, s1 = s1, s0 ^ prod
        if r0 != 1:
            raise InternalError("modulus of GF(2^e) is not irreducible")
        # s0 may exceed degree e - 1; reduce it
        m, e = self.modulus, self.e
        rl = s0.bit_length()
        while rl > e:
            s0 ^= m << (rl - 1 - e)
            rl = s0.bit_length()
        return s0

    def exact_div(self, a, b):
        return self.mul(a, self.inv(b))

    @staticmethod
    def from_int(c):
        return c & 1

    @staticmethod
    def sample(index: int):
        return index

    def __repr__(self) -> str:
        return f"GF(2^{self.e})"


class PrimeExtensionField:
    """GF(p^e) for odd p; elements are coefficient tuples of length e."""

    is_field = True

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise MathPreconditionError("modulus must be monic of degree e")
        self.p = p
        self.e = e
        self.size = p**e
        self.characteristic = p
        self.modulus = modulus
        self.zero = (0,) * e
        self.one = (1,) + (0,) * (e - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def is_zero(self, a):
        return not any(a)

    def mul(self, a, b):
        p, e = self.p, self.e
        acc = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    acc[i + j] += x * y
        # reduce degree >= e terms using x^e = -(modulus minus leading term)
        mod = self.modulus
        for i in range(2 * e - 2, e - 1, -1):
            c = acc[i] % p
            if c:
                for j in range(e):
                    acc[i - e + j] -= c * mod[j]
            acc[i] = 0
        return tuple(x % p for x in acc[:e])

    def inv(self, a):
        if self.is_zero(a):
            raise MathPreconditionError("division by zero in GF(p^e)")
        p = self.p
        r0 = list(self.modulus)
        r1 = list(a)
        s0, s1 = [0], [1]
        while any(r1):
            q, r = _gfp_poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _gfp_poly_sub(s0, _gfp_poly_mul(q, s1, p), p)
        # r0 is a nonzero constant gcd
        r0 = _gfp_poly_trim(r0)
        if len(r0) != 1:
            raise InternalError("modulus of GF(p^e) is not irreducible")
        c_inv = pow(r0[0], p - 2, p)
        s0 = [(x * c_inv) % p for x in s0]
        s0 = (s0 + [0] * self.e)[: self.e]
        return tuple(s0)

    def exact_div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, c):
        return (c % self.p,) + (0,) * (self.e - 1)

    def sample(self, index: int):
        digits = []
        for _ in range(self.e):
            index, d = divmod(index, self.p)
            digits.append(d)
        return tuple(digits)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"


# ---------------------------------------------- GF(p)[x] helpers (lists)


def _gfp_poly_trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _gfp_poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    size = max(len(a), len(b))
    a = a + [0] * (size - len(a))
    b = b + [0] * (size - len(b))
    return _gfp_poly_trim([(x - y) % p for x, y in zip(a, b)])


def _gfp_poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    acc = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                acc[i + j] = (acc[i + j] + x * y) % p
    return _gfp_poly_trim(acc)


def _gfp_poly_divmod(a: list[int], b: list[int], p: int):
    a = list(a)
    b = _gfp_poly_trim(list(b))
    if b == [0]:
        raise InternalError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        a = _gfp_poly_trim(a)
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        c = (a[-1] * inv_lead) % p
        if c == 0:
            a = a[:-1]
            continue
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = (a[shift + j] - c * y) % p
        a = a[:-1]
    return _gfp_poly_trim(q), _gfp_poly_trim(a)


def _gfp_poly_powmod(base: list[int], exp: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _gfp_poly_divmod(base, mod, p)[1]
    while exp:
        if exp & 1:
            result = _gfp_poly_divmod(_gfp_poly_mul(result, base, p), mod, p)[1]
        base = _gfp_poly_divmod(_gfp_poly_mul(base, base, p), mod, p)[1]
        exp >>= 1
    return result


def _gfp_poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    while any(b):
        a, b = b, _gfp_poly_divmod(a, b, p)[1]
    return _gfp_poly_trim(a)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over GF(p)."""
    e = len(coeffs) - 1
    if e < 1 or coeffs[-1] != 1:
        return False
    if e == 1:
        return True
    x = [0, 1]
    # x^(p^e) must equal x mod f
    frob = _gfp_poly_powmod(x, p**e, coeffs, p)
    if _gfp_poly_trim(frob) != _gfp_poly_sub(x, [0], p):
        return False
    for q in _prime_factors(e):
        power = _gfp_poly_powmod(x, p ** (e // q), coeffs, p)
        diff = _gfp_poly_sub(power, x, p)
        g = _gfp_poly_gcd(coeffs, diff, p)
        if len(g) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def _find_irreducible(p: int, e: int, seed: int) -> tuple[int, ...]:
    """Deterministic rejection sampling of a monic irreducible of degree e."""
    stream = DeterministicStream("irreducible", p, e, seed)
    while True:
        coeffs = [stream.randbelow(p) for _ in range(e)] + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)


@lru_cache(maxsize=None)
def _gf_extension_cached(p: int, e: int, seed: int):
    if e == 1:
        return PrimeField(p)
    modulus = _find_irreducible(p, e, seed)
    if p == 2:
        packed = 0
        for t, c in enumerate(modulus):
            if c:
                packed |= 1 << t
        return BinaryExtensionField(e, packed)
    return PrimeExtensionField(p, e, modulus)


def gf_extension(p: int, min_size: int, seed: int = 0):
    """A field GF(p^e) of size at least ``min_size``, e minimal.

    The irreducible modulus is found deterministically from ``seed`` by
    rejection sampling with Rabin's irreducibility test; results are cached
    per (p, e, seed).
    """
    if not is_prime(p):
        raise InvalidCharacteristicError(f"{p} is not prime")
    if min_size < 2:
        min_size = 2
    e, size = 1, p
    while size < min_size:
        size *= p
        e += 1
    return _gf_extension_cached(p, e, seed)


# ------------------------------------------------------------ polynomials

# A variable is a pair (i, j) of 1-based matrix indices; a monomial is a
# tuple of ((i, j), exponent) pairs sorted by the column-major key (j, i).

Var = tuple[int, int]
Monomial = tuple[tuple[Var, int], ...]


def _var_key(var: Var) -> tuple[int, int]:
    return (var[1], var[0])


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    merged: dict[Var, int] = dict(m1)
    for var, e in m2:
        merged[var] = merged.get(var, 0) + e
    return tuple(sorted(merged.items(), key=lambda item: _var_key(item[0])))

def _mono_deg(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_divide(m1: Monomial, m2: Monomial) -> Monomial | None:
    """m1 / m2 as a monomial, or None when some exponent would go negative."""
    quota = dict(m1)
    for var, e in m2:
        have = quota.get(var, 0)
        if have < e:
            return None
        if have == e:
            del quota[var]
        else:
            quota[var] = have - e
    return tuple(sorted(quota.items(), key=lambda item: _var_key(item[0])))


def _mono_gt(a: Monomial, b: Monomial) -> bool:
    """Graded lexicographic order with variables prioritized by (j, i)."""
    da, db = _mono_deg(a), _mono_deg(b)
    if da != db:
        return da > db
    ia = ib = 0
    while ia < len(a) and ib < len(b):
        ka, kb = _var_key(a[ia][0]), _var_key(b[ib][0])
        if ka == kb:
            if a[ia][1] != b[ib][1]:
                return a[ia][1] > b[ib][1]
            ia += 1
            ib += 1
        elif ka < kb:
            return True  # a has positive exponent on an earlier variable
        else:
            return False
    return ia < len(a)


def _norm_terms(terms: dict[Monomial, int], p: int) -> dict[Monomial, int]:
    if p:
        return {m: c % p for m, c in terms.items() if c % p}
    return {m: c for m, c in terms.items() if c}


class MultiPoly:
    """Sparse multivariate polynomial with integer coefficients.

    The class itself always computes over the integers; characteristic-p
    arithmetic goes through ``PolynomialRing(p)``, which reduces every
    coefficient modulo p.  Instances are treated as immutable.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, int] | None = None):
        self.terms = _norm_terms(terms, 0) if terms else {}

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> "MultiPoly":
        poly = cls.__new__(cls)
        poly.terms = terms
        return poly

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls._raw({})

    @classmethod
    def const(cls, c: int) -> "MultiPoly":
        return cls._raw({(): c} if c else {})

    @classmethod
    def variable(cls, i: int, j: int) -> "MultiPoly":
        if i < 1 or j < 1:
            raise MathPreconditionError(f"variable indices must be positive: ({i},{j})")
        return cls._raw({(((i, j), 1),): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant:
            raise MathPreconditionError("polynomial is not constant")
        return self.terms.get((), 0)

    def degree(self) -> int:
        """Total degree; zero and constants report 0."""
        if not self.terms:
            return 0
        return max(_mono_deg(m) for m in self.terms)

    def variables(self) -> frozenset[Var]:
        return frozenset(var for m in self.terms for var, _ in m)

    def reduce_mod(self, p: int) -> "MultiPoly":
        return MultiPoly._raw(_norm_terms(self.terms, p))

    def map_variables(self, mapping) -> "MultiPoly":
        """Apply a relabeling var -> var to every monomial."""
        out: dict[Monomial, int] = {}
        for mono, c in self.terms.items():
            new = tuple(
                sorted(
                    ((mapping(var), e) for var, e in mono),
                    key=lambda item: _var_key(item[0]),
                )
            )
            out[new] = out.get(new, 0) + c
        return MultiPoly._raw(_norm_terms(out, 0))

    def evaluate(self, assignment: Mapping[Var, object], domain) -> object:
        total = domain.zero
        for mono, coeff in self.terms.items():
            val = domain.from_int(coeff)
            for var, e in mono:
                if var not in assignment:
                    raise MathPreconditionError(f"no value assigned to x{var}")
                val = domain.mul(val, _domain_pow(domain, assignment[var], e))
            total = domain.add(total, val)
        return total

    # integer-coefficient operator arithmetic

    def __add__(self, other) -> "MultiPoly":
        return _padd(self, _coerce(other), 0)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return _padd(self, -_coerce(other), 0)

    def __rsub__(self, other) -> "MultiPoly":
        return _padd(_coerce(other), -self, 0)

    def __mul__(self, other) -> "MultiPoly":
        return _pmul(self, _coerce(other), 0)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            raise MathPreconditionError("negative polynomial power")
        result = MultiPoly.const(1)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.terms == MultiPoly.const(other).terms
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        """Terms from largest to smallest monomial in the canonical order."""
        import functools

        return sorted(
            self.terms.items(),
            key=functools.cmp_to_key(
                lambda a, b: 1 if _mono_gt(a[0], b[0]) else (-1 if _mono_gt(b[0], a[0]) else 0)
            ),
            reverse=True,
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            names = []
            for (i, j), e in mono:
                name = f"x{i}{j}" if max(i, j) <= 9 else f"x({i},{j})"
                names.append(name if e == 1 else f"{name}^{e}")
            if not names:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(names))
            elif c == -1:
                parts.append("-" + "*".join(names))
            else:
                parts.append("*".join([str(c)] + names))
        return " + ".join(parts).replace("+ -", "- ")


def _coerce(value) -> MultiPoly:
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, int):
        return MultiPoly.const(value)
    raise TypeError(f"cannot mix {type(value).__name__} with MultiPoly")


def _padd(f: MultiPoly, g: MultiPoly, p: int) -> MultiPoly:
    if not f.terms:
        return g.reduce_mod(p) if p else g
    out = dict(f.terms)
    for m, c in g.terms.items():
        new = out.get(m, 0) + c
        if new:
            out[m] = new
        else:
            out.pop(m, None)
    return MultiPoly._raw(_norm_terms(out, p)) if p else MultiPoly._raw(out)


def _pmul(f: MultiPoly, g: MultiPoly, p: int) -> MultiPoly:
    out: dict[Monomial, int] = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            m = _mono_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return MultiPoly._raw(_norm_terms(out, p))


def _plead(f: MultiPoly) -> tuple[Monomial, int]:
    best = None
    for m, c in f.terms.items():
        if best is None or _mono_gt(m, best[0]):
            best = (m, c)
    if best is None:
        raise InternalError("leading term of zero polynomial")
    return best


def _pdiv_exact(f: MultiPoly, g: MultiPoly, p: int) -> MultiPoly:
    """f / g when the division is exact; raises InternalError otherwise."""
    if g.is_zero:
        raise InternalError("polynomial division by zero")
    if f.is_zero:
        return f
    lead_g, lc_g = _plead(g)
    if p:
        lc_g_inv = pow(lc_g, p - 2, p)
    quotient: dict[Monomial, int] = {}
    rest = f
    while not rest.is_zero:
        lead_f, lc_f = _plead(rest)
        mono = _mono_divide(lead_f, lead_g)
        if mono is None:
            raise InternalError("inexact polynomial division (monomial)")
        if p:
            c = (lc_f * lc_g_inv) % p
        else:
            c, rem = divmod(lc_f, lc_g)
            if rem:
                raise InternalError("inexact polynomial division (coefficient)")
        quotient[mono] = quotient.get(mono, 0) + c
        rest = _padd(rest, _pmul(MultiPoly._raw({mono: -c}), g, 0), p)
    return MultiPoly._raw(_norm_terms(quotient, p))


class PolynomialRing:
    """Ring operations on MultiPoly with coefficients taken modulo p (or not)."""

    is_field = False

    def __init__(self, characteristic: int = 0):
        if characteristic and not is_prime(characteristic):
            raise InvalidCharacteristicError(f"{characteristic} is not prime")
        self.characteristic = characteristic
        self.zero = MultiPoly.zero()
        self.one = MultiPoly.const(1 % characteristic if characteristic else 1)

    def add(self, a, b):
        return _padd(a, b, self.characteristic)

    def sub(self, a, b):
        return _padd(a, -b, self.characteristic)

    def mul(self, a, b):
        return _pmul(a, b, self.characteristic)

    def neg(self, a):
        return (-a).reduce_mod(self.characteristic) if self.characteristic else -a

    def is_zero(self, a):
        if self.characteristic:
            return not _norm_terms(a.terms, self.characteristic)
        return a.is_zero

    def exact_div(self, a, b):
        return _pdiv_exact(a, b, self.characteristic)

    def from_int(self, c):
        return MultiPoly.const(c % self.characteristic if self.characteristic else c)

    def __repr__(self) -> str:
        base = "ZZ" if not self.characteristic else f"GF({self.characteristic})"
        return f"{base}[x]"


def _domain_pow(domain, a, e: int):
    result = domain.one if e == 0 else a
    if e <= 1:
        return result
    result = domain.one
    base = a
    while e:
        if e & 1:
            result = domain.mul(result, base)
        base = domain.mul(base, base)
        e >>= 1
    return result


# ------------------------------------------------------- randomized points


class DeterministicStream:
    """Counter-mode SHA-256 bit stream, a pure function of its key parts."""

    def __init__(self, *key_parts):
        self._key = hashlib.sha256(repr(key_parts).encode()).digest()
        self._counter = 0
        self._bits = 0
        self._nbits = 0

    def getbits(self, k: int) -> int:
        while self._nbits < k:
            block = hashlib.sha256(
                self._key + self._counter.to_bytes(8, "big")
            ).digest()
            self._counter += 1
            self._bits = (self._bits << 256) | int.from_bytes(block, "big")
            self._nbits += 256
        self._nbits -= k
        val = self._bits >> self._nbits
        self._bits &= (1 << self._nbits) - 1
        return val

    def randbelow(self, bound: int) -> int:
        if bound <= 0:
            raise MathPreconditionError("randbelow needs a positive bound")
        k = max(1, (bound - 1).bit_length())
        while True:
            v = self.getbits(k)
            if v < bound:
                return v

    def random_prime(self, bits: int) -> int:
        while True:
            candidate = self.getbits(bits) | (1 << (bits - 1)) | 1
            if is_prime(candidate):
                return candidate


@dataclass
class EvalPoint:
    """A concrete substitution for the matrix indeterminates.

    Reproducible from (seed, call fingerprint, attempt); the domain holds the
    arithmetic the values live in.
    """

    assignment: dict[Var, object]
    domain: object
    seed: int
    call_tag: str
    attempt: int = 0


def poly_eval(f: MultiPoly, point: EvalPoint):
    """Evaluate a polynomial at a point; every variable must be assigned."""
    return f.evaluate(point.assignment, point.domain)


def sample_eval_point(
    ctx: FieldContext,
    variables: Iterable[Var],
    degree_budget: int,
    call_tag: str,
    attempt: int = 0,
) -> EvalPoint:
    """Draw a Schwartz-Zippel evaluation point for one randomized call.

    In characteristic zero the values are uniform integers from
    [1, ceil(2 * degree_budget / epsilon)]; in characteristic p they are
    uniform elements of GF(p^e) with p^e at least that bound.
    """
    ordered = sorted(set(variables))
    bound = ctx.domain_size_bound(degree_budget)
    stream = DeterministicStream(
        "evalpoint", ctx.seed, ctx.characteristic.value, call_tag, attempt
    )
    if ctx.characteristic.is_zero:
        domain = ZZ
        assignment = {var: 1 + stream.randbelow(bound) for var in ordered}
    else:
        p = ctx.characteristic.value
        if ctx.extension_degree:
            bound = max(bound, p**ctx.extension_degree)
        domain = gf_extension(p, bound, seed=ctx.seed)
        assignment = {
            var: domain.sample(stream.randbelow(domain.size)) for var in ordered
        }
    return EvalPoint(
        assignment=assignment,
        domain=domain,
        seed=ctx.seed,
        call_tag=call_tag,
        attempt=attempt,
    )


def char0_prime_pair(
    ctx: FieldContext, call_tag: str, attempt: int = 0
) -> tuple[PrimeField, PrimeField]:
    """Two distinct random 62-bit prime fields for the double-prime mode."""
    stream = DeterministicStream("doubleprime", ctx.seed, call_tag, attempt)
    first = stream.random_prime(62)
    second = stream.random_prime(62)
    while second == first:
        second = stream.random_prime(62)
    return PrimeField(first), PrimeField(second)


def reduce_point_mod(point: EvalPoint, field: PrimeField) -> EvalPoint:
    """The same integer evaluation point with arithmetic moved to GF(p)."""
    if point.domain is not ZZ:
        raise InternalError("only integer points can be reduced modulo a prime")
    return EvalPoint(
        assignment={v: a % field.p for v, a in point.assignment.items()},
        domain=field,
        seed=point.seed,
        call_tag=point.call_tag,
        attempt=point.attempt,
    )


# --------------------------------------------------- rank-profile engines


class ProfileState:
    """Streaming column rank profile over a domain.

    Feed columns left to right with ``offer``; it answers whether the column
    increased the rank.  Over a non-field domain the update is fraction-free
    Bareiss-style (exact divisions only), over a field it is plain Gaussian
    elimination.  Zero tests are exact in both cases.
    """

    def __init__(self, domain, nrows: int):
        self.dom = domain
        self.m = nrows
        self.pivot_rows: list[int] = []
        self._stack: list[tuple] = []
        self._fraction_free = not domain.is_field

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def offer(self, column: Sequence) -> bool:
        if self.rank >= self.m:
            return False
        c = list(column)
        if len(c) != self.m:
            raise InternalError("column length mismatch")
        if self._fraction_free:
            return self._offer_bareiss(c)
        return self._offer_gauss(c)

    def _offer_bareiss(self, c: list) -> bool:
        dom = self.dom
        done: set[int] = set()
        for pr, u, piv, prev_piv in self._stack:
            f = c[pr]
            for i in range(self.m):
                if i == pr or i in done:
                    continue
                c[i] = dom.exact_div(
                    dom.sub(dom.mul(piv, c[i]), dom.mul(u[i], f)), prev_piv
                )
            done.add(pr)
        for i in range(self.m):
            if i not in done and not dom.is_zero(c[i]):
                prev = self._stack[-1][2] if self._stack else dom.one
                self._stack.append((i, c, c[i], prev))
                self.pivot_rows.append(i)
                return True
        return False

    def _offer_gauss(self, c: list) -> bool:
        dom = self.dom
        for pr, u in self._stack:
            f = c[pr]
            if not dom.is_zero(f):
                for i in range(self.m):
                    if i != pr and not dom.is_zero(u[i]):
                        c[i] = dom.sub(c[i], dom.mul(f, u[i]))
                c[pr] = dom.zero
        for i in range(self.m):
            if not dom.is_zero(c[i]):
                inv = dom.inv(c[i])
                u = [dom.mul(x, inv) for x in c]
                u[i] = dom.one
                self._stack.append((i, u))
                self.pivot_rows.append(i)
                return True
        return False


def _profile_over(rows, order, domain) -> tuple[tuple[int, ...], frozenset[int]]:
    state = ProfileState(domain, len(rows))
    ranks = [0]
    pivots = []
    for col in order:
        column = [row[col] for row in rows]
        if state.offer(column):
            pivots.append(col)
        ranks.append(state.rank)
    return tuple(ranks), frozenset(pivots)


def rank_profile(
    rows: Sequence[Sequence],
    column_order: Sequence[int] | None = None,
    ctx: FieldContext | None = None,
    domain=None,
) -> tuple[tuple[int, ...], frozenset[int]]:
    """Column rank sequence (r_0, .., r_N) and the set of pivot columns.

    ``rows`` is a rectangular matrix given row-wise.  Entries may be
    ``MultiPoly`` (then ``ctx`` selects the backend: symbolic elimination
    over the coefficient ring, or evaluation at a seeded point followed by
    concrete elimination) or raw scalars for an explicit ``domain``
    (default: exact integers).  The rank sequence starts at r_0 = 0 and
    increases by at most one per column; pivot columns are exactly the
    positions where it steps.
    """
    if not rows:
        return (0,), frozenset()
    ncols = len(rows[0])
    for row in rows:
        if len(row) != ncols:
            raise MathPreconditionError("matrix rows have unequal lengths")
    order = list(range(ncols)) if column_order is None else list(column_order)
    symbolic_entries = any(
        isinstance(entry, MultiPoly) for row in rows for entry in row
    )
    if not symbolic_entries:
        return _profile_over(rows, order, domain if domain is not None else ZZ)
    char = ctx.characteristic.value if ctx is not None else 0
    if ctx is None or ctx.backend is Backend.SYMBOLIC:
        poly_rows = [[_coerce(entry) for entry in row] for row in rows]
        return _profile_over(poly_rows, order, PolynomialRing(char))
    poly_rows = [[_coerce(entry) for entry in row] for row in rows]
    variables = set()
    max_deg = 0
    for row in poly_rows:
        for entry in row:
            variables |= entry.variables()
            max_deg = max(max_deg, entry.degree())
    budget = max(1, max_deg) * min(len(rows), ncols) * max(1, ncols)
    tag = "rank_profile:" + repr(
        (len(rows), ncols, tuple(order), sorted(variables))
    )
    point = sample_eval_point(ctx, variables, budget, tag)
    concrete = [
        [entry.evaluate(point.assignment, point.domain) for entry in row]
        for row in poly_rows
    ]
    if ctx.characteristic.is_zero and ctx.char0_double_prime:
        results = []
        for fld in char0_prime_pair(ctx, tag):
            reduced = [[e % fld.p for e in row] for row in concrete]
            results.append(_profile_over(reduced, order, fld))
        if results[0] == results[1]:
            return results[0]
        # the prime pair disagreed; settle with exact integer elimination
    return _profile_over(concrete, order, point.domain)


def matrix_rank(rows: Sequence[Sequence], domain=None) -> int:
    """Rank of a matrix of raw scalars over the given domain (default ZZ)."""
    if not rows:
        return 0
    ranks, _ = _profile_over(rows, range(len(rows[0])), domain if domain is not None else ZZ)
    return ranks[-1]

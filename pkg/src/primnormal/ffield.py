"""The tower F_p ⊂ F_q ⊂ F_{q^n}.

F_q elements are canonical integers in [0, q): the base-p digits are the
coordinates over F_p[y]/(base modulus).  For t > 1 multiplication goes
through exp/log tables and addition through Zech logarithms.

F_{q^n} elements are tuples of n F_q-encodings, the coordinates in the
power basis of F_q[x]/(ext modulus).  ``ExtensionField`` works on raw tuples
for speed; ``FieldElement`` wraps a tuple with operators for library use.
Both moduli are the first irreducible polynomial in canonical order, so a
given (p, t, n) always produces the same field.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache
from typing import Iterator, Sequence

from . import intarith
from .errors import CapExceeded, FieldMismatch, NotADivisor, NotPrime, ZeroElement
from .fqpoly import FqPolynomial, first_irreducible

DEFAULT_FIELD_CAP = 10**15


class PrimePower:
    """The base field F_q, q = p^t, with arithmetic on integer encodings."""

    zero = 0
    one = 1

    def __init__(self, p: int, t: int = 1):
        if not intarith.is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if t < 1:
            raise ValueError("t must be positive")
        self.p = p
        self.t = t
        self.q = p**t
        self._lock = threading.Lock()
        self._q_factored = None
        self.modulus = None
        if t > 1:
            self._build_tables()

    @classmethod
    def from_q(cls, q: int) -> "PrimePower":
        pt = intarith.as_prime_power(q)
        if pt is None:
            raise NotPrime(f"{q} is not a prime power")
        return prime_power(*pt)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimePower) and (self.p, self.t) == (other.p, other.t)

    def __hash__(self) -> int:
        return hash(("PrimePower", self.p, self.t))

    def __repr__(self) -> str:
        return f"PrimePower({self.p}, {self.t})"

    def __reduce__(self):
        return (prime_power, (self.p, self.t))

    @property
    def is_prime_field(self) -> bool:
        return self.t == 1

    @property
    def q_factored(self) -> intarith.IntFactorization:
        """Factorization of q - 1 (computed lazily)."""
        with self._lock:
            if self._q_factored is None:
                self._q_factored = (
                    intarith.IntFactorization(()) if self.q == 2 else intarith.factor_power_minus_one(self.p, self.t)
                )
            return self._q_factored

    # -- tables for t > 1 -------------------------------------------------

    def _build_tables(self) -> None:
        p, t, q = self.p, self.t, self.q
        prime = prime_power(p, 1)
        self.modulus = first_irreducible(prime, t)
        mod = list(self.modulus.coeffs)

        def times_y_encoding(digits: list[int], g: list[int]) -> list[int]:
            prod = [0] * (2 * t - 1)
            for i, a in enumerate(digits):
                if a:
                    for j, b in enumerate(g):
                        prod[i + j] += a * b
            for k in range(2 * t - 2, t - 1, -1):
                c = prod[k] % p
                if c:
                    for j in range(t):
                        prod[k - t + j] -= c * mod[j]
            return [c % p for c in prod[:t]]

        def encode(digits: list[int]) -> int:
            return sum(d * p**j for j, d in enumerate(digits))

        def decode(a: int) -> list[int]:
            out = []
            for _ in range(t):
                a, r = divmod(a, p)
                out.append(r)
            return out

        for cand in range(p, q):
            g = decode(cand)
            exp = [1]
            cur = [1] + [0] * (t - 1)
            for _ in range(q - 2):
                cur = times_y_encoding(cur, g)
                e = encode(cur)
                if e == 1:
                    break
                exp.append(e)
            if len(exp) == q - 1:
                break
        else:
            raise AssertionError("F_q* has no generator")
        self.generator = cand
        self._exp = exp + exp  # doubled so log sums need no reduction
        log = [0] * q
        for i, e in enumerate(exp):
            log[e] = i
        self._log = log
        n1 = q - 1
        # zech[j] = log(1 + g^j), or -1 when 1 + g^j = 0
        zech = [-1] * n1
        for j in range(n1):
            s = self._digit_add(1, exp[j])
            zech[j] = -1 if s == 0 else log[s]
        self._zech = zech
        self._neg = [self._digit_neg(a) for a in range(q)]

    def _digit_add(self, a: int, b: int) -> int:
        p = self.p
        out, place = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * place
            place *= p
        return out

    def _digit_neg(self, a: int) -> int:
        p = self.p
        out, place = 0, 1
        while a:
            a, x = divmod(a, p)
            out += ((-x) % p) * place
            place *= p
        return out

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.t == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self._exp[la + z]

    def neg(self, a: int) -> int:
        if self.t == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.t == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.t == 1:
            return pow(a, -1, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if self.t == 1:
            return pow(a, e, self.p) if e >= 0 else pow(pow(a, -1, self.p), -e, self.p)
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 has no negative powers")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def from_int(self, c: int) -> int:
        """Image of the integer c under Z -> F_p ⊂ F_q."""
        return c % self.p

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.t):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        return sum((d % self.p) * self.p**j for j, d in enumerate(digits))

    def abs_trace(self, a: int) -> int:
        """Tr_{q/p}(a) as an integer in [0, p)."""
        acc, cur = 0, a
        for _ in range(self.t):
            acc = self.add(acc, cur)
            cur = self.pow(cur, self.p)
        return acc

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def prime_power(p: int, t: int = 1) -> PrimePower:
    return PrimePower(p, t)


class FieldElement:
    """Immutable element of an ExtensionField."""

    __slots__ = ("field", "coords")

    def __init__(self, field: "ExtensionField", coords: Sequence[int]):
        coords = tuple(coords)
        if len(coords) != field.n:
            raise ValueError(f"expected {field.n} coordinates, got {len(coords)}")
        self.field = field
        self.coords = coords

    def _coerce(self, other) -> tuple:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("elements of different fields")
            return other.coords
        if isinstance(other, int):
            return self.field.embed(self.field.base.from_int(other))
        return NotImplemented

    def _wrap(self, v: tuple) -> "FieldElement":
        return FieldElement(self.field, v)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.coords, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.coords, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.coords))

    def __neg__(self):
        return self._wrap(self.field.neg(self.coords))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.coords, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.field.mul(self.coords, self.field.inv(o)))

    def __pow__(self, e: int):
        return self._wrap(self.field.pow(self.coords, e))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, int):
            return self.coords == self.field.embed(self.field.base.from_int(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def index(self) -> int:
        return self.field.index(self.coords)

    def to_nested(self) -> list[list[int]]:
        """Serialization: n outer lists of t F_p digits each."""
        return [self.field.base.digits(c) for c in self.coords]

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coords)})"


class ExtensionField:
    """F_{q^n} = F_q[x]/(ext modulus)."""

    def __init__(self, base: PrimePower, n: int, cap: int = DEFAULT_FIELD_CAP):
        if n < 1:
            raise ValueError("extension degree must be positive")
        if base.q**n > cap:
            raise CapExceeded(f"field of size {base.q}^{n} exceeds cap {cap}")
        self.base = base
        self.n = n
        self.p = base.p
        self.q = base.q
        self.size = base.q**n
        self.order = self.size - 1
        self.ext_modulus = first_irreducible(base, n)
        self._mod = list(self.ext_modulus.coeffs)
        self._negmod = [base.neg(c) for c in self._mod[:n]]
        self.zero = (0,) * n
        self.one = (1,) + (0,) * (n - 1)
        self._lock = threading.Lock()
        self._order_factored = None
        self._generator = None
        self._frob = self._frobenius_matrix()

    def __reduce__(self):
        return (build_field, (self.base.p, self.base.t, self.n))

    def __repr__(self) -> str:
        return f"ExtensionField(q={self.q}, n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtensionField) and (self.base, self.n) == (other.base, other.n)

    def __hash__(self) -> int:
        return hash(("ExtensionField", self.base.p, self.base.t, self.n))

    # -- raw tuple arithmetic ---------------------------------------------

    def add(self, a: tuple, b: tuple) -> tuple:
        if self.base.t == 1:
            p = self.p
            return tuple((x + y) % p for x, y in zip(a, b))
        badd = self.base.add
        return tuple(badd(x, y) for x, y in zip(a, b))

    def neg(self, a: tuple) -> tuple:
        bneg = self.base.neg
        return tuple(bneg(x) for x in a)

    def sub(self, a: tuple, b: tuple) -> tuple:
        if self.base.t == 1:
            p = self.p
            return tuple((x - y) % p for x, y in zip(a, b))
        return self.add(a, self.neg(b))

    def scale(self, c: int, a: tuple) -> tuple:
        """Multiply by a base-field scalar."""
        if self.base.t == 1:
            p = self.p
            return tuple(c * x % p for x in a)
        bmul = self.base.mul
        return tuple(bmul(c, x) for x in a)

    def mul(self, a: tuple, b: tuple) -> tuple:
        n = self.n
        if self.base.t == 1:
            p = self.p
            prod = [0] * (2 * n - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        prod[i + j] += ai * bj
            negmod = self._negmod
            for k in range(2 * n - 2, n - 1, -1):
                c = prod[k] % p
                if c:
                    off = k - n
                    for j in range(n):
                        prod[off + j] += c * negmod[j]
            return tuple(c % p for c in prod[:n])
        base = self.base
        badd, bmul = base.add, base.mul
        prod = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] = badd(prod[i + j], bmul(ai, bj))
        negmod = self._negmod
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                off = k - n
                for j in range(n):
                    if negmod[j]:
                        prod[off + j] = badd(prod[off + j], bmul(c, negmod[j]))
        return tuple(prod[:n])

    def pow(self, a: tuple, e: int) -> tuple:
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a: tuple) -> tuple:
        if not any(a):
            raise ZeroDivisionError("inverse of 0")
        return self.pow(a, self.order - 1)

    def embed(self, c: int) -> tuple:
        return (c,) + (0,) * (self.n - 1)

    def element(self, coords: Sequence[int]) -> FieldElement:
        return FieldElement(self, coords)

    def wrap(self, v: tuple) -> FieldElement:
        return FieldElement(self, v)

    def x(self) -> tuple:
        """The class of x, a root of the extension modulus."""
        if self.n == 1:
            return (self.base.neg(self._mod[0]),)
        return (0, 1) + (0,) * (self.n - 2)

    # -- enumeration ----------------------------------------------------

    def from_index(self, i: int) -> tuple:
        q = self.q
        out = []
        for _ in range(self.n):
            i, r = divmod(i, q)
            out.append(r)
        return tuple(out)

    def index(self, v: tuple) -> int:
        i = 0
        for c in reversed(v):
            i = i * self.q + c
        return i

    def elements(self) -> Iterator[tuple]:
        """All elements in index order (index = sum c_i q^i)."""
        for i in range(self.size):
            yield self.from_index(i)

    # -- Frobenius --------------------------------------------------------

    def _frobenius_matrix(self) -> list[tuple]:
        # row j holds x^(j q) reduced, so frob(sum c_j x^j) = sum c_j row_j
        xq = self.pow(self.x(), self.q)
        rows = [self.one]
        for _ in range(1, self.n):
            rows.append(self.mul(rows[-1], xq))
        return rows

    def frob(self, a: tuple) -> tuple:
        """a^q via the precomputed F_q-linear map."""
        n = self.n
        rows = self._frob
        if self.base.t == 1:
            p = self.p
            out = [0] * n
            for c, row in zip(a, rows):
                if c:
                    for k in range(n):
                        out[k] += c * row[k]
            return tuple(x % p for x in out)
        badd, bmul = self.base.add, self.base.mul
        out = [0] * n
        for c, row in zip(a, rows):
            if c:
                for k in range(n):
                    if row[k]:
                        out[k] = badd(out[k], bmul(c, row[k]))
        return tuple(out)

    def frob_pow(self, a: tuple, i: int) -> tuple:
        for _ in range(i % self.n):
            a = self.frob(a)
        return a

    def conjugates(self, a: tuple) -> list[tuple]:
        """[a, a^q, ..., a^(q^(n-1))]."""
        out = [a]
        for _ in range(self.n - 1):
            out.append(self.frob(out[-1]))
        return out

    def trace(self, a: tuple, m: int = 1) -> tuple:
        """Tr_{q^n/q^m}(a)."""
        if m < 1 or self.n % m:
            raise NotADivisor(f"{m} does not divide n={self.n}")
        acc = a
        cur = a
        for _ in range(self.n // m - 1):
            cur = self.frob_pow(cur, m)
            acc = self.add(acc, cur)
        return acc

    def in_subfield(self, a: tuple, m: int) -> bool:
        """Fixed-point test a^(q^m) = a."""
        if m < 1 or self.n % m:
            raise NotADivisor(f"{m} does not divide n={self.n}")
        return self.frob_pow(a, m) == a

    def abs_trace(self, a: tuple) -> int:
        """Tr_{q^n/p}(a) as an integer in [0, p)."""
        return self.base.abs_trace(self.trace(a, 1)[0])

    def subfield_elements(self, m: int) -> list[tuple]:
        """Elements of F_{q^m} inside this field, by exhaustive fixed-point test."""
        if self.n % m:
            raise NotADivisor(f"{m} does not divide n={self.n}")
        if m == self.n:
            return list(self.elements())
        return [v for v in self.elements() if self.frob_pow(v, m) == v]

    # -- multiplicative structure ---------------------------------------

    @property
    def order_factored(self) -> intarith.IntFactorization:
        with self._lock:
            if self._order_factored is None:
                if self.order == 1:
                    self._order_factored = intarith.IntFactorization(())
                else:
                    self._order_factored = intarith.factor_power_minus_one(self.p, self.base.t * self.n)
            return self._order_factored

    def mult_order(self, a: tuple) -> int:
        if not any(a):
            raise ZeroElement("0 has no multiplicative order")
        order = self.order
        for r, _ in self.order_factored:
            while order % r == 0 and self.pow(a, order // r) == self.one:
                order //= r
        return order

    def is_generator(self, a: tuple) -> bool:
        if not any(a):
            return False
        N = self.order
        return all(self.pow(a, N // r) != self.one for r in self.order_factored.primes)

    @property
    def generator(self) -> tuple:
        """First element in index order whose order is q^n - 1."""
        with self._lock:
            if self._generator is not None:
                return self._generator
        # elements of index < q lie in F_q and cannot generate when n > 1
        start = self.q if self.n > 1 else 1
        for i in range(start, self.size):
            v = self.from_index(i)
            if self.is_generator(v):
                with self._lock:
                    self._generator = v
                return v
        raise AssertionError("F_{q^n}* has no generator")

    def q_associate(self, f: Sequence[int], a: tuple, conj: list[tuple] | None = None) -> tuple:
        """f∘a = sum f_i a^(q^i), for f given by F_q coefficients."""
        if conj is None or len(conj) < len(f):
            conj = self.conjugates(a)
            while len(conj) < len(f):
                conj.append(self.frob(conj[-1]))
        n = self.n
        if self.base.t == 1:
            p = self.p
            out = [0] * n
            for c, v in zip(f, conj):
                if c:
                    for k in range(n):
                        out[k] += c * v[k]
            return tuple(x % p for x in out)
        badd, bmul = self.base.add, self.base.mul
        out = [0] * n
        for c, v in zip(f, conj):
            if c:
                for k in range(n):
                    if v[k]:
                        out[k] = badd(out[k], bmul(c, v[k]))
        return tuple(out)


@lru_cache(maxsize=64)
def _cached_field(p: int, t: int, n: int) -> ExtensionField:
    return ExtensionField(prime_power(p, t), n, cap=math.inf)


def build_field(p: int, t: int, n: int, cap: int = DEFAULT_FIELD_CAP) -> ExtensionField:
    """Canonical F_{q^n} over F_q, q = p^t; identical calls share one instance."""
    if not intarith.is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if t < 1 or n < 1:
        raise ValueError("t and n must be positive")
    if p ** (t * n) > cap:
        raise CapExceeded(f"{p}^{t * n} exceeds field cap {cap}")
    return _cached_field(p, t, n)


def field_for(q: int, n: int, cap: int = DEFAULT_FIELD_CAP) -> ExtensionField:
    base = PrimePower.from_q(q)
    return build_field(base.p, base.t, n, cap)


def frobenius(w: FieldElement, i: int) -> FieldElement:
    return w.field.wrap(w.field.frob_pow(w.coords, i))


def trace(w: FieldElement, m: int) -> FieldElement:
    return w.field.wrap(w.field.trace(w.coords, m))


def mult_order(w: FieldElement) -> int:
    return w.field.mult_order(w.coords)


def find_generator(F: ExtensionField) -> FieldElement:
    return F.wrap(F.generator)


def is_r_primitive(w: FieldElement, r: int) -> bool:
    F = w.field
    if r < 1 or F.order % r:
        raise NotADivisor(f"{r} does not divide q^n - 1 = {F.order}")
    return F.mult_order(w.coords) * r == F.order

"""Integer multiplicative number theory.

Factorization (trial division, then Brent's variant of Pollard rho),
Miller-Rabin primality, and the arithmetic functions phi, theta, W and
the W-bound constants used by the existence inequalities.

Numbers of the shape p^N - 1 are split along cyclotomic values first,
which keeps every piece handed to rho small even when p^N - 1 is huge.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .errors import CapExceeded, PreconditionViolated

DEFAULT_FACTOR_CAP = 2**128
TRIAL_LIMIT = 10**6
# rho iteration budget once a cofactor is above the cap
BOUNDED_RHO_STEPS = 2_000_000

# Deterministic for n < 3.3e24, which covers everything below 2^64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i in range(limit + 1) if sieve[i]]


_PRIMES = _small_primes(TRIAL_LIMIT)


def _mr_round(n: int, d: int, r: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 2^64, 40 seeded random rounds above."""
    if n < 2:
        return False
    for p in _PRIMES[:50]:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < _MR_DETERMINISTIC_LIMIT:
        return all(_mr_round(n, d, r, a) for a in _MR_BASES)
    rng = random.Random(n)
    return all(_mr_round(n, d, r, rng.randrange(2, n - 1)) for _ in range(40))


@dataclass(frozen=True)
class IntFactorization:
    """Multiset of (prime, multiplicity), ascending by prime."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev = 0
        for p, e in self.factors:
            if p <= prev or e < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            prev = p

    @property
    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    @property
    def distinct(self) -> int:
        """d(t): number of distinct prime divisors."""
        return len(self.factors)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def to_list(self) -> list[list[int]]:
        return [[p, e] for p, e in self.factors]

    @classmethod
    def from_counts(cls, counts: dict[int, int]) -> "IntFactorization":
        return cls(tuple(sorted((p, e) for p, e in counts.items() if e)))


IntLike = Union[int, IntFactorization]


def _rho_brent(n: int, rng: random.Random, max_steps: int | None) -> int | None:
    """Return a nontrivial factor of the odd composite n, or None if the budget runs out."""
    steps = 0
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            steps += r
            r *= 2
            if max_steps is not None and steps > max_steps:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, counts: dict[int, int], cap: int, rng: random.Random) -> None:
    # n has no prime factor below TRIAL_LIMIT here
    if n == 1:
        return
    if is_prime(n):
        counts[n] = counts.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, counts, cap, rng)
        _split(r, counts, cap, rng)
        return
    budget = None if n <= cap else BOUNDED_RHO_STEPS
    d = _rho_brent(n, rng, budget)
    if d is None:
        raise CapExceeded(f"could not factor {n.bit_length()}-bit cofactor above cap")
    _split(d, counts, cap, rng)
    _split(n // d, counts, cap, rng)


def _factor_counts(n: int, cap: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    for p in _PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            counts[p] = e
    if n > 1:
        if n < TRIAL_LIMIT * TRIAL_LIMIT:
            counts[n] = counts.get(n, 0) + 1
        else:
            _split(n, counts, cap, random.Random(n))
    return counts


@lru_cache(maxsize=4096)
def _factorize_cached(n: int, cap: int) -> IntFactorization:
    return IntFactorization.from_counts(_factor_counts(n, cap))


def factorize(n: int, cap: int = DEFAULT_FACTOR_CAP) -> IntFactorization:
    """Factor n >= 2 into ascending (prime, multiplicity) pairs."""
    if n < 2:
        raise PreconditionViolated(f"factorize needs n >= 2, got {n}")
    return _factorize_cached(n, cap)


def _as_factorization(t: IntLike, cap: int = DEFAULT_FACTOR_CAP) -> IntFactorization:
    if isinstance(t, IntFactorization):
        return t
    if t == 1:
        return IntFactorization(())
    return factorize(t, cap)


def mobius(t: IntLike) -> int:
    f = _as_factorization(t)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if f.distinct % 2 else 1


def divisors(t: IntLike) -> list[int]:
    """All positive divisors, ascending."""
    out = [1]
    for p, e in _as_factorization(t):
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def euler_phi(f: IntLike) -> int:
    out = 1
    for p, e in _as_factorization(f):
        out *= p ** (e - 1) * (p - 1)
    return out


def big_w_int(f: IntLike) -> int:
    """W(t) = 2^d(t), the number of squarefree divisors."""
    return 2 ** _as_factorization(f).distinct


def theta(t: IntLike) -> Fraction:
    f = _as_factorization(t)
    return Fraction(euler_phi(f), f.value)


def squarefree_part(t: IntLike) -> int:
    """Product of the distinct primes dividing t (the radical)."""
    return math.prod(_as_factorization(t).primes)


def w_bound_constant(t: IntLike, a: int, exclude: Iterable[int] = ()) -> float:
    """c_{t,a} = 2^s / (p_1...p_s)^(1/a) over the primes p_i < 2^a dividing t.

    Guarantees W(t) <= c_{t,a} * t^(1/a).  ``exclude`` drops primes known not
    to divide t, which is how the universal maxima for restricted t are formed.
    """
    skip = set(exclude)
    small = [p for p in _as_factorization(t).primes if p < 2**a and p not in skip]
    return 2 ** len(small) / math.prod(small) ** (1 / a)


def universal_w_constant(a: int, exclude: Iterable[int] = ()) -> float:
    """Maximum of c_{t,a} over all t: every prime below 2^a divides t."""
    skip = set(exclude)
    primes = [p for p in _PRIMES if p < 2**a and p not in skip]
    return 2 ** len(primes) / math.prod(primes) ** (1 / a)


def ramanujan_bound(q: int, u: int) -> float:
    """3.6 ln q + 1.8 ln u, an upper bound for 1/theta(q^(pu) - 1) when p >= 5."""
    return 3.6 * math.log(q) + 1.8 * math.log(u)


def as_prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, t) with q = p^t, or None if q is not a prime power."""
    if q < 2:
        return None
    for t in range(q.bit_length(), 0, -1):
        p = round(q ** (1 / t))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand**t == q and is_prime(cand):
                return cand, t
    return None


def multiplicative_order(a: int, n: int) -> int:
    """Least k >= 1 with a^k = 1 mod n; requires gcd(a, n) = 1."""
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise PreconditionViolated(f"{a} is not a unit mod {n}")
    order = euler_phi(n)
    for p, _ in factorize(order) if order > 1 else ():
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def cyclotomic_value(d: int, x: int) -> int:
    """Phi_d(x) as an integer, via Phi_d(x) = prod_{e|d} (x^e - 1)^mu(d/e)."""
    num = den = 1
    for e in divisors(d):
        mu = mobius(d // e)
        if mu == 1:
            num *= x**e - 1
        elif mu == -1:
            den *= x**e - 1
    return num // den


def factor_power_minus_one(p: int, exponent: int, cap: int = DEFAULT_FACTOR_CAP) -> IntFactorization:
    """Factor p^exponent - 1 by splitting into cyclotomic values Phi_d(p), d | exponent."""
    if p**exponent - 1 < 2:
        raise PreconditionViolated(f"{p}^{exponent} - 1 is below 2")
    counts: dict[int, int] = {}
    for d in divisors(exponent):
        piece = cyclotomic_value(d, p)
        if piece < 2:
            continue
        for r, e in factorize(piece, cap):
            counts[r] = counts.get(r, 0) + e
    return IntFactorization.from_counts(counts)

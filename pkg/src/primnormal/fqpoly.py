"""Polynomials over F_q.

The low-level routines work on coefficient lists (lowest degree first) over
any field object exposing ``zero``, ``one``, ``add``, ``sub``, ``neg``,
``mul`` and ``inv``; that covers both the base field F_q and the extension
F_{q^n} (needed for the gcd criterion on k-normality).  ``FqPolynomial``
wraps them for the base field and adds factorization and the polynomial
versions of Phi, mu and W.

Canonical order of polynomials: by degree, then lexicographically on the
coefficient tuple (lowest degree first), coefficients compared through
their canonical integer encodings.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import intarith
from .errors import FieldMismatch, PreconditionViolated

# ---------------------------------------------------------------------------
# coefficient-list arithmetic over an arbitrary field


def trim(field, a: list) -> list:
    while a and a[-1] == field.zero:
        a.pop()
    return a


def padd(field, a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = field.add(out[i], c)
    return trim(field, out)


def psub(field, a: Sequence, b: Sequence) -> list:
    out = list(a) + [field.zero] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = field.sub(out[i], c)
    return trim(field, out)


def pmul(field, a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == field.zero:
            continue
        for j, bj in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(ai, bj))
    return trim(field, out)


def pscale(field, c, a: Sequence) -> list:
    return trim(field, [field.mul(c, x) for x in a])


def pdivmod(field, a: Sequence, b: Sequence) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], trim(field, rem)
    inv_lead = field.inv(b[-1])
    quot = [field.zero] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c == field.zero:
            continue
        c = field.mul(c, inv_lead)
        quot[k - db] = c
        for j in range(db + 1):
            rem[k - db + j] = field.sub(rem[k - db + j], field.mul(c, b[j]))
    return trim(field, quot), trim(field, rem[:db])


def pmod(field, a: Sequence, b: Sequence) -> list:
    return pdivmod(field, a, b)[1]


def pmonic(field, a: Sequence) -> list:
    if not a:
        return []
    inv_lead = field.inv(a[-1])
    return [field.mul(inv_lead, c) for c in a]


def pgcd(field, a: Sequence, b: Sequence) -> list:
    """Monic gcd; the gcd of two zero polynomials is the zero list."""
    a, b = trim(field, list(a)), trim(field, list(b))
    while b:
        a, b = b, pmod(field, a, b)
    return pmonic(field, a)


def ppowmod(field, base: Sequence, e: int, mod: Sequence) -> list:
    result = [field.one]
    base = pmod(field, base, mod)
    while e:
        if e & 1:
            result = pmod(field, pmul(field, result, base), mod)
        e >>= 1
        if e:
            base = pmod(field, pmul(field, base, base), mod)
    return pmod(field, result, mod)


# ---------------------------------------------------------------------------
# polynomials over the base field


class FqPolynomial:
    """Polynomial over F_q with coefficients stored as canonical integer encodings."""

    __slots__ = ("base", "coeffs")

    def __init__(self, base, coeffs: Sequence[int]):
        self.base = base
        cs = [int(c) for c in coeffs]
        for c in cs:
            if not 0 <= c < base.q:
                raise ValueError(f"coefficient {c} outside F_{base.q}")
        self.coeffs = tuple(trim(base, cs))

    @classmethod
    def x(cls, base) -> "FqPolynomial":
        return cls(base, [0, 1])

    @classmethod
    def one(cls, base) -> "FqPolynomial":
        return cls(base, [1])

    @classmethod
    def x_n_minus_one(cls, base, n: int) -> "FqPolynomial":
        return cls(base, [base.neg(1)] + [0] * (n - 1) + [1])

    @classmethod
    def from_list(cls, base, coeffs: Sequence[int]) -> "FqPolynomial":
        return cls(base, coeffs)

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "FqPolynomial":
        return FqPolynomial(self.base, pmonic(self.base, self.coeffs))

    def key(self) -> tuple:
        return (self.degree, self.coeffs)

    def _check(self, other: "FqPolynomial") -> None:
        if not isinstance(other, FqPolynomial):
            raise TypeError(f"expected FqPolynomial, got {type(other).__name__}")
        if other.base != self.base:
            raise FieldMismatch(f"F_{self.base.q} vs F_{other.base.q}")

    def __eq__(self, other) -> bool:
        return isinstance(other, FqPolynomial) and self.base == other.base and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.base.p, self.base.t, self.coeffs))

    def __lt__(self, other: "FqPolynomial") -> bool:
        return self.key() < other.key()

    def __add__(self, other):
        self._check(other)
        return FqPolynomial(self.base, padd(self.base, self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return FqPolynomial(self.base, psub(self.base, self.coeffs, other.coeffs))

    def __mul__(self, other):
        self._check(other)
        return FqPolynomial(self.base, pmul(self.base, self.coeffs, other.coeffs))

    def __divmod__(self, other):
        self._check(other)
        qt, r = pdivmod(self.base, self.coeffs, other.coeffs)
        return FqPolynomial(self.base, qt), FqPolynomial(self.base, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e: int):
        out = FqPolynomial.one(self.base)
        for _ in range(e):
            out = out * self
        return out

    def divides(self, other: "FqPolynomial") -> bool:
        return (other % self).is_zero()

    def derivative(self) -> "FqPolynomial":
        b = self.base
        cs = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            acc = 0
            for _ in range(i % b.p):
                acc = b.add(acc, c)
            cs.append(acc)
        return FqPolynomial(b, cs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)


@dataclass(frozen=True)
class PolyFactorization:
    """(monic irreducible, multiplicity) pairs in canonical order, plus the leading coefficient."""

    factors: tuple[tuple[FqPolynomial, int], ...]
    leading: int = 1

    @property
    def distinct(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)


def poly_gcd(a: FqPolynomial, b: FqPolynomial) -> FqPolynomial:
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise PreconditionViolated("gcd(0, 0) is undefined")
    return FqPolynomial(a.base, pgcd(a.base, a.coeffs, b.coeffs))


def _x_power(base, e: int, mod: FqPolynomial) -> list:
    return ppowmod(base, [0, 1], e, mod.coeffs)


def is_irreducible(f: FqPolynomial) -> bool:
    """Rabin's test."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    base = f.base
    f = f.monic()
    if _x_power(base, base.q**d, f) != [0, 1]:
        return False
    for r in intarith.factorize(d).primes if d > 1 else ():
        h = psub(base, _x_power(base, base.q ** (d // r), f), [0, 1])
        if len(pgcd(base, f.coeffs, h)) > 1:
            return False
    return True


def monic_polynomials(base, degree: int) -> Iterator[FqPolynomial]:
    """All monic polynomials of the given degree in canonical order."""
    for low in itertools.product(range(base.q), repeat=degree):
        yield FqPolynomial(base, list(low) + [1])


def first_irreducible(base, degree: int) -> FqPolynomial:
    if degree == 1:
        return FqPolynomial.x(base)
    # irreducibles of degree > 1 have nonzero constant term
    for c0 in range(1, base.q):
        for rest in itertools.product(range(base.q), repeat=degree - 1):
            f = FqPolynomial(base, [c0, *rest, 1])
            if is_irreducible(f):
                return f
    raise AssertionError("unreachable: irreducibles of every degree exist")


def _pth_root(f: FqPolynomial) -> FqPolynomial:
    # f(x) = g(x^p); coefficientwise c -> c^(q/p)
    base = f.base
    e = base.q // base.p
    return FqPolynomial(base, [base.pow(c, e) for c in f.coeffs[:: base.p]])


def _squarefree_decomposition(f: FqPolynomial) -> list[tuple[FqPolynomial, int]]:
    """Yun-style decomposition in characteristic p; returns (squarefree part, multiplicity)."""
    base = f.base
    out: list[tuple[FqPolynomial, int]] = []
    one = FqPolynomial.one(base)

    def rec(g: FqPolynomial, mult: int):
        if g.degree < 1:
            return
        dg = g.derivative()
        if dg.is_zero():
            rec(_pth_root(g), mult * base.p)
            return
        c = poly_gcd(g, dg)
        w = g // c
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            z = w // y
            if z.degree > 0:
                out.append((z, i * mult))
            i += 1
            w = y
            c = c // y
        if c != one and c.degree > 0:
            rec(_pth_root(c), mult * base.p)

    rec(f.monic(), 1)
    return out


def _distinct_degree(f: FqPolynomial) -> list[tuple[FqPolynomial, int]]:
    base = f.base
    out = []
    h = [0, 1]
    i = 0
    g = f
    while g.degree >= 2 * (i + 1):
        i += 1
        h = ppowmod(base, h, base.q, g.coeffs)
        d = FqPolynomial(base, pgcd(base, g.coeffs, psub(base, h, [0, 1])))
        if d.degree > 0:
            out.append((d, i))
            g = g // d
            h = pmod(base, h, g.coeffs)
    if g.degree > 0:
        out.append((g, g.degree))
    return out


def _equal_degree(f: FqPolynomial, d: int, rng: random.Random) -> list[FqPolynomial]:
    base = f.base
    if f.degree == d:
        return [f]
    n = f.degree
    while True:
        a = [rng.randrange(base.q) for _ in range(n)]
        a = trim(base, a)
        if len(a) < 2:
            continue
        if base.p == 2:
            # absolute trace map a + a^2 + ... + a^(2^(t*d - 1))
            acc, cur = list(a), list(a)
            for _ in range(base.t * d - 1):
                cur = pmod(base, pmul(base, cur, cur), f.coeffs)
                acc = padd(base, acc, cur)
            h = acc
        else:
            h = psub(base, ppowmod(base, a, (base.q**d - 1) // 2, f.coeffs), [1])
        g = FqPolynomial(base, pgcd(base, f.coeffs, h))
        if 0 < g.degree < n:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor_poly(f: FqPolynomial) -> PolyFactorization:
    """Complete factorization into monic irreducibles, deterministic and canonically ordered."""
    if f.degree < 1:
        raise PreconditionViolated("factor_poly needs degree >= 1")
    base = f.base
    rng = random.Random(hash((base.p, base.t, f.coeffs)) & 0xFFFFFFFF)
    counts: dict[FqPolynomial, int] = {}
    for part, mult in _squarefree_decomposition(f):
        for block, d in _distinct_degree(part):
            for irr in _equal_degree(block, d, rng):
                irr = irr.monic()
                counts[irr] = counts.get(irr, 0) + mult
    return PolyFactorization(tuple(sorted(counts.items(), key=lambda kv: kv[0].key())), f.coeffs[-1])


def _as_poly_factorization(f) -> PolyFactorization:
    if isinstance(f, PolyFactorization):
        return f
    if not f.is_monic():
        raise PreconditionViolated("expected a monic polynomial")
    if f.degree == 0:
        return PolyFactorization(())
    return factor_poly(f)


def poly_phi(f) -> int:
    """|(F_q[x]/<f>)^*|, from the factorization."""
    fac = _as_poly_factorization(f)
    out = 1
    for irr, e in fac:
        Q = irr.base.q ** irr.degree
        out *= Q**e - Q ** (e - 1)
    return out


def poly_mobius(f) -> int:
    fac = _as_poly_factorization(f)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if fac.distinct % 2 else 1


def big_w_poly(f) -> int:
    return 2 ** _as_poly_factorization(f).distinct


def count_irreducible_factors_cyclotomic(q: int, u: int) -> int:
    """Number of distinct monic irreducible factors of x^u - 1 over F_q, gcd(u, q) = 1."""
    if math.gcd(u, q) != 1:
        raise PreconditionViolated(f"u={u} must be coprime to q={q}")
    return sum(intarith.euler_phi(d) // intarith.multiplicative_order(q, d) for d in intarith.divisors(u))


def w_poly_bound_values(q: int, u: int) -> dict[str, float]:
    """The individual upper bounds for W(x^u - 1) over F_q, keyed by name.

    ``generic`` is 2^((u + gcd(u, q-1))/2), ``generic_min`` its weaker form
    with min(u, q-1), ``trivial`` is 2^u.  ``q5`` and ``q3`` are the
    special-case bounds and appear only for those q (``q3`` only where its
    stated range of validity is met, see ``w_poly_bounds``).
    """
    out = {
        "trivial": 2.0**u,
        "generic": 2.0 ** ((u + math.gcd(u, q - 1)) / 2),
        "generic_min": 2.0 ** ((u + min(u, q - 1)) / 2),
    }
    if q == 5:
        out["q5"] = 2.0 ** (u / 3 + 6)
    if q == 3 and u not in Q3_EXCLUDED_U:
        out["q3"] = 2.0 ** ((u + 1) / 3)
    return out


# The q = 3 special bound 2^((u+1)/3) undercounts exactly for these u
# (exact factor counts, u < 3000 swept); it is only applied outside this set.
Q3_EXCLUDED_U = frozenset({1, 2, 4, 8, 10, 13, 16, 26})


def w_poly_bounds(q: int, u: int) -> float:
    """Smallest applicable upper bound for W(x^u - 1) over F_q."""
    if math.gcd(u, q) != 1:
        raise PreconditionViolated(f"u={u} must be coprime to q={q}")
    return min(w_poly_bound_values(q, u).values())


def divisors_of(f) -> list[FqPolynomial]:
    """All monic divisors of the monic polynomial f, canonically ordered."""
    if isinstance(f, PolyFactorization):
        fac = f
        base = fac.factors[0][0].base if fac.factors else None
    else:
        fac = _as_poly_factorization(f)
        base = f.base
    if base is None:
        raise PreconditionViolated("cannot infer base field of an empty factorization")
    out = [FqPolynomial.one(base)]
    for irr, e in fac:
        powers = [FqPolynomial.one(base)]
        for _ in range(e):
            powers.append(powers[-1] * irr)
        out = [d * pw for d in out for pw in powers]
    return sorted(out, key=FqPolynomial.key)

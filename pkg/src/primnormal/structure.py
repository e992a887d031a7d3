"""Additive structure of F_{q^n} over F_q.

q-associates, the F_q-order m_w(x), k-normality (three independent routes:
divisor scan, conjugate rank, and the gcd criterion), multiplicative and
additive freeness, and the exact (non-character) indicator functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import intarith
from .errors import CapExceeded, FieldMismatch, NotADivisor, PreconditionViolated, ZeroElement
from .ffield import ExtensionField, FieldElement
from .fqpoly import FqPolynomial, divisors_of, factor_poly, pgcd, poly_gcd

DEFAULT_EXHAUSTIVE_CAP = 10**8


@dataclass(frozen=True)
class NormalityProfile:
    element: FieldElement
    fq_order: FqPolynomial
    k: int

    def to_record(self) -> dict:
        return {"element": self.element.to_nested(), "fq_order": self.fq_order.to_list(), "k": self.k}


def p_decomposition(n: int, p: int) -> tuple[int, int, int]:
    """n = p^k * u with p not dividing u; returns (k, p^k, u)."""
    k, u = 0, n
    while u % p == 0:
        u //= p
        k += 1
    return k, p**k, u


@lru_cache(maxsize=256)
def _xn1_divisors(field: ExtensionField, m: int) -> tuple[FqPolynomial, ...]:
    return tuple(divisors_of(FqPolynomial.x_n_minus_one(field.base, m)))


def xn_minus_one_divisors(F: ExtensionField, m: int | None = None) -> list[FqPolynomial]:
    """Monic divisors of x^m - 1 (default m = n) in canonical order."""
    return list(_xn1_divisors(F, F.n if m is None else m))


def _check_field(f: FqPolynomial, F: ExtensionField) -> None:
    if f.base != F.base:
        raise FieldMismatch(f"polynomial over F_{f.base.q}, field over F_{F.q}")


def q_associate_apply(f: FqPolynomial, w: FieldElement) -> FieldElement:
    """f∘w = sum a_i w^(q^i)."""
    F = w.field
    _check_field(f, F)
    return F.wrap(F.q_associate(f.coeffs, w.coords))


def _annihilates(F: ExtensionField, f: FqPolynomial, conj: list[tuple]) -> bool:
    return not any(F.q_associate(f.coeffs, conj[0], conj))


def _fq_order_raw(F: ExtensionField, v: tuple, m: int | None = None) -> FqPolynomial:
    m = F.n if m is None else m
    conj = F.conjugates(v)
    for D in _xn1_divisors(F, m):
        if _annihilates(F, D, conj):
            return D
    raise AssertionError("x^m - 1 must annihilate an element of F_{q^m}")


def fq_order(w: FieldElement) -> FqPolynomial:
    """Minimal monic divisor of x^n - 1 annihilating w, by divisor scan."""
    return _fq_order_raw(w.field, w.coords)


def fq_order_in_subfield(w: FieldElement, m: int) -> FqPolynomial:
    """F_q-order of an element of F_{q^m}, as a divisor of x^m - 1."""
    F = w.field
    if not F.in_subfield(w.coords, m):
        raise PreconditionViolated(f"element is not in F_(q^{m})")
    return _fq_order_raw(F, w.coords, m)


def normality_profile(w: FieldElement) -> NormalityProfile:
    order = fq_order(w)
    return NormalityProfile(w, order, w.field.n - order.degree)


def rank_over_base(F: ExtensionField, vectors: list[tuple]) -> int:
    """Rank over F_q of coordinate vectors."""
    base = F.base
    rows = [list(v) for v in vectors]
    rank = 0
    ncols = F.n
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        if base.t == 1:
            p = base.p
            inv = pow(prow[col], -1, p)
            prow = [c * inv % p for c in prow]
            rows[rank] = prow
            for r in range(len(rows)):
                if r != rank and rows[r][col]:
                    c = rows[r][col]
                    rows[r] = [(a - c * b) % p for a, b in zip(rows[r], prow)]
        else:
            inv = base.inv(prow[col])
            prow = [base.mul(c, inv) for c in prow]
            rows[rank] = prow
            for r in range(len(rows)):
                if r != rank and rows[r][col]:
                    c = rows[r][col]
                    rows[r] = [base.sub(a, base.mul(c, b)) for a, b in zip(rows[r], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def k_normality_rank(F: ExtensionField, v: tuple) -> int:
    """k = n - dim span{v, v^q, ..., v^(q^(n-1))}, straight from the definition."""
    return F.n - rank_over_base(F, F.conjugates(v))


def k_normality(w: FieldElement) -> int:
    return k_normality_rank(w.field, w.coords)


def k_normality_gcd(w: FieldElement) -> int:
    """deg gcd(x^n - 1, g_w) over F_{q^n}, g_w = sum_i w^(q^i) x^(n-1-i)."""
    F = w.field
    conj = F.conjugates(w.coords)
    g = list(reversed(conj))  # coefficient of x^j is w^(q^(n-1-j))
    xn1 = [F.neg(F.one)] + [F.zero] * (F.n - 1) + [F.one]
    if not any(any(c) for c in g):
        return F.n
    return len(pgcd(F, xn1, g)) - 1


def _check_divides_order(F: ExtensionField, t: int) -> None:
    if t < 1 or F.order % t:
        raise NotADivisor(f"{t} does not divide q^n - 1 = {F.order}")


def is_t_free(w: FieldElement, t: int) -> bool:
    """w is t-free iff w^((q^n - 1)/r) != 1 for every prime r | t."""
    F = w.field
    _check_divides_order(F, t)
    if w.is_zero():
        raise ZeroElement("freeness is defined on F_{q^n}^*")
    if t == 1:
        return True
    return all(F.pow(w.coords, F.order // r) != F.one for r in intarith.factorize(t).primes)


def _check_divides_xn1(F: ExtensionField, D: FqPolynomial) -> None:
    _check_field(D, F)
    if not D.is_monic() or not D.divides(FqPolynomial.x_n_minus_one(F.base, F.n)):
        raise NotADivisor(f"{D} is not a monic divisor of x^{F.n} - 1")


def is_poly_free(w: FieldElement, D: FqPolynomial) -> bool:
    """w is D-free iff ((x^n - 1)/P)∘w != 0 for every irreducible P | D."""
    F = w.field
    _check_divides_xn1(F, D)
    if D.degree == 0:
        return True
    xn1 = FqPolynomial.x_n_minus_one(F.base, F.n)
    conj = F.conjugates(w.coords)
    for P, _ in factor_poly(D):
        if _annihilates(F, xn1 // P, conj):
            return False
    return True


def is_poly_free_via_order(w: FieldElement, D: FqPolynomial) -> bool:
    """Same predicate through gcd(D, (x^n - 1)/m_w) = 1."""
    F = w.field
    _check_divides_xn1(F, D)
    xn1 = FqPolynomial.x_n_minus_one(F.base, F.n)
    return poly_gcd(D, xn1 // fq_order(w)).degree == 0


def xn1_over_x1(F: ExtensionField, m: int | None = None) -> FqPolynomial:
    """(x^m - 1)/(x - 1)."""
    m = F.n if m is None else m
    base = F.base
    return FqPolynomial.x_n_minus_one(base, m) // FqPolynomial(base, [base.neg(1), 1])


def indicator_2primitive_knormal(w: FieldElement, k: int) -> bool:
    """w primitive and w^2 normal (k=0) or with F_q-order (x^n - 1)/(x - 1) (k=1)."""
    F = w.field
    if F.p == 2:
        raise PreconditionViolated("q must be odd")
    if w.is_zero():
        raise ZeroElement("0 is not primitive")
    if k not in (0, 1):
        raise PreconditionViolated("k must be 0 or 1")
    if not F.is_generator(w.coords):
        return False
    order = fq_order(w * w)
    if k == 0:
        return order.degree == F.n
    return order == xn1_over_x1(F)


def decompose_1normal_check(w: FieldElement) -> bool:
    """w is T-free (T = (x^u - 1)/(x - 1)) and Tr_{q^n/q^(p^k)}(w) has F_q-order (x^(p^k) - 1)/(x - 1)."""
    F = w.field
    _, pk, u = p_decomposition(F.n, F.p)
    T = xn1_over_x1(F, u)
    if not is_poly_free(w, T):
        return False
    beta = F.wrap(F.trace(w.coords, pk))
    return fq_order_in_subfield(beta, pk) == xn1_over_x1(F, pk)


def trace_reduction_check(w: FieldElement) -> tuple[bool, bool]:
    """For n = p^2 s: (m_w = (x^n-1)/(x-1), m_beta = (x^(ps)-1)/(x-1)) with beta = Tr_{q^n/q^(ps)}(w)."""
    F = w.field
    if F.n % (F.p * F.p):
        raise PreconditionViolated(f"n={F.n} is not divisible by p^2")
    ps = F.n // F.p
    beta = F.wrap(F.trace(w.coords, ps))
    lhs = fq_order(w) == xn1_over_x1(F)
    rhs = fq_order_in_subfield(beta, ps) == xn1_over_x1(F, ps)
    return lhs, rhs


def _check_exhaustive(F: ExtensionField, cap: int) -> None:
    if F.size > cap:
        raise CapExceeded(f"exhaustive scan of {F.size} elements exceeds cap {cap}")


def check_count_n_preconditions(F: ExtensionField, f: FqPolynomial, m: int, beta: FieldElement) -> None:
    _check_field(f, F)
    if F.n % m:
        raise NotADivisor(f"{m} does not divide n={F.n}")
    _, _, u = p_decomposition(F.n, F.p)
    if not f.is_monic() or not f.divides(FqPolynomial.x_n_minus_one(F.base, u)):
        raise PreconditionViolated(f"f must be a monic divisor of x^{u} - 1")
    if FqPolynomial(F.base, [F.base.neg(1), 1]).divides(f):
        raise PreconditionViolated("f must not be divisible by x - 1")
    if not F.in_subfield(beta.coords, m):
        raise PreconditionViolated(f"beta is not in F_(q^{m})")


def count_n_hypotheses_hold(F: ExtensionField, f: FqPolynomial, m: int) -> bool:
    """m < n, and m = 1 or m a power of p whenever f != 1."""
    if m >= F.n:
        return False
    if f.degree == 0:
        return True
    if m == 1:
        return True
    k, pk, _ = p_decomposition(m, F.p)
    return pk == m


def count_N(f: FqPolynomial, m: int, beta: FieldElement, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> int:
    """#{w primitive : w^2 is f-free and Tr_{q^n/q^m}(w^2) = beta}, by enumeration."""
    F = beta.field
    check_count_n_preconditions(F, f, m, beta)
    _check_exhaustive(F, cap)
    xn1 = FqPolynomial.x_n_minus_one(F.base, F.n)
    cofactors = [xn1 // P for P, _ in factor_poly(f)] if f.degree > 0 else []
    count = 0
    for i in range(1, F.size):
        v = F.from_index(i)
        if not F.is_generator(v):
            continue
        sq = F.mul(v, v)
        if F.trace(sq, m) != beta.coords:
            continue
        if cofactors:
            conj = F.conjugates(sq)
            if any(_annihilates(F, c, conj) for c in cofactors):
                continue
        count += 1
    return count


def count_n_lower_bound(F: ExtensionField, f: FqPolynomial, m: int) -> float:
    """theta(q^n-1) Theta(f) (q^(n-m) - 2 q^(n/2) W(q^n-1) W(f))."""
    from .fqpoly import big_w_poly, poly_phi

    q, n = F.q, F.n
    th = float(intarith.theta(F.order_factored))
    Th = poly_phi(f) / q**f.degree
    return th * Th * (q ** (n - m) - 2 * q ** (n / 2) * intarith.big_w_int(F.order_factored) * big_w_poly(f))


def literal_t_free(w: FieldElement, t: int) -> bool:
    """Definition by brute force: w = b^d with d | t forces d = 1."""
    F = w.field
    _check_divides_order(F, t)
    powers: dict[int, set] = {}
    for d in intarith.divisors(t):
        if d == 1:
            continue
        image = powers.setdefault(d, {F.pow(F.from_index(i), d) for i in range(1, F.size)})
        if w.coords in image:
            return False
    return True


def literal_poly_free(w: FieldElement, D: FqPolynomial) -> bool:
    """Definition by brute force: w = h∘b with h | D forces h = 1."""
    F = w.field
    _check_divides_xn1(F, D)
    for h in divisors_of(D):
        if h.degree == 0:
            continue
        for i in range(F.size):
            if F.q_associate(h.coeffs, F.from_index(i)) == w.coords:
                return False
    return True

"""Existence inequalities and the peeling sieve.

Every mode has the shape

    q^e  >  C * W(q0) * [W(x^u - 1)] * Delta,     Delta = (s - 1)/delta + 2,

where q0 is the square-free part of q^n - 1 with the s sieving primes removed
and delta = 1 - sum 1/p_i over those primes.  With exact W values both sides
are algebraic of the form (rational) * q^(half-integer), so the comparison is
done exactly on squares; floats are only reported.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable

from . import intarith
from .errors import PreconditionViolated
from .fqpoly import count_irreducible_factors_cyclotomic, w_poly_bound_values

# relative safety margin for floating comparisons against a threshold
ROUNDING_MARGIN = 2.0**-40

CSV_COLUMNS = ("q", "n", "mode", "outcome", "s", "delta_num", "delta_den", "lhs", "rhs")


class Mode(Enum):
    NORMAL0 = "normal0"
    ONE_NORMAL = "one-normal"
    CUBIC_ONE_NORMAL = "cubic-one-normal"
    TRACE_COVERAGE = "trace-coverage"


class Outcome(Enum):
    SUCCESS = "Success"
    FAIL = "Fail"
    FAIL_DELTA_NONPOSITIVE = "FailDeltaNonpositive"
    FAIL_NO_MORE_PRIMES = "FailNoMorePrimes"


@dataclass(frozen=True)
class ModeShape:
    """q-exponent on the left, constant factor, and whether W(x^u - 1) appears."""

    exponent: Fraction
    constant: int
    uses_poly_w: bool


def p_split(q: int, n: int, p: int | None = None) -> tuple[int, int, int]:
    """(p, p^k, u) with n = p^k u and p the characteristic of F_q."""
    if p is None:
        pt = intarith.as_prime_power(q)
        if pt is None:
            raise PreconditionViolated(f"{q} is not a prime power")
        p = pt[0]
    pk, u = 1, n
    while u % p == 0:
        u //= p
        pk *= p
    return p, pk, u


def mode_shape(q: int, n: int, mode: Mode, p: int | None = None) -> ModeShape:
    if mode is Mode.NORMAL0:
        return ModeShape(Fraction(n, 2), 2, True)
    if mode is Mode.ONE_NORMAL:
        _, pk, u = p_split(q, n, p)
        return ModeShape(pk * (Fraction(u, 2) - 1), 1, True)
    if mode is Mode.CUBIC_ONE_NORMAL:
        if n != 3:
            raise PreconditionViolated("the cubic mode needs n = 3")
        return ModeShape(Fraction(1, 2), 2, False)
    return ModeShape(Fraction(n, 2) - 1, 2, False)


def _check_odd(q: int) -> None:
    pt = intarith.as_prime_power(q)
    if pt is None:
        raise PreconditionViolated(f"{q} is not a prime power")
    if pt[0] == 2:
        raise PreconditionViolated("q must be odd")


def exact_poly_w(q: int, n: int) -> int:
    """W(x^u - 1) over F_q, u the p-free part of n."""
    _, _, u = p_split(q, n)
    return 2 ** count_irreducible_factors_cyclotomic(q, u)


def big_delta(s: int, delta: Fraction) -> Fraction:
    return Fraction(s - 1) / delta + 2


def _exceeds(q: int, exponent: Fraction, rhs: Fraction) -> bool:
    """q^exponent > rhs, exactly, for rhs > 0 and 2*exponent integral."""
    if rhs <= 0:
        return True
    e2 = exponent * 2
    if e2.denominator != 1:
        raise ValueError("exponent must be a half-integer")
    e2 = int(e2)
    left = Fraction(q) ** e2
    return left > rhs * rhs


@dataclass(frozen=True)
class SieveReport:
    q: int
    n: int
    mode: Mode
    outcome: Outcome
    sieving_primes: tuple[int, ...]
    delta: Fraction
    big_delta: Fraction
    w_q0: int
    w_poly: int | None
    lhs_log: float
    rhs_log: float
    prime_count: int

    @property
    def s(self) -> int:
        return len(self.sieving_primes)

    @property
    def success(self) -> bool:
        return self.outcome is Outcome.SUCCESS

    @property
    def big_delta_conservative(self) -> Fraction:
        """max(Delta, 2): the reading that keeps a factor 2 at s = 0."""
        return max(self.big_delta, Fraction(2))

    @property
    def lhs(self) -> float:
        return math.exp(self.lhs_log) if self.lhs_log < 700 else math.inf

    @property
    def rhs(self) -> float:
        return math.exp(self.rhs_log) if self.rhs_log < 700 else math.inf

    def to_record(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "mode": self.mode.value,
            "outcome": self.outcome.value,
            "sieving_primes": list(self.sieving_primes),
            "s": self.s,
            "delta_num": self.delta.numerator,
            "delta_den": self.delta.denominator,
            "big_delta": str(self.big_delta),
            "big_delta_conservative": str(self.big_delta_conservative),
            "w_q0": self.w_q0,
            "w_poly": self.w_poly,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lhs_log": self.lhs_log,
            "rhs_log": self.rhs_log,
        }


def _evaluate(q, n, mode, shape, w_poly, primes, sieved, delta, outcome_if_fail) -> SieveReport:
    s = len(sieved)
    D = big_delta(s, delta)
    w_q0 = 2 ** (len(primes) - s)
    rhs = shape.constant * w_q0 * (w_poly if shape.uses_poly_w else 1) * D
    ok = delta > 0 and _exceeds(q, shape.exponent, rhs)
    return SieveReport(
        q=q,
        n=n,
        mode=mode,
        outcome=Outcome.SUCCESS if ok else outcome_if_fail,
        sieving_primes=tuple(sieved),
        delta=delta,
        big_delta=D,
        w_q0=w_q0,
        w_poly=w_poly if shape.uses_poly_w else None,
        lhs_log=float(shape.exponent) * math.log(q),
        rhs_log=math.log(rhs) if rhs > 0 else -math.inf,
        prime_count=len(primes),
    )


def _setup(q: int, n: int, mode: Mode, cap: int):
    _check_odd(q)
    if n < 1:
        raise PreconditionViolated("n must be positive")
    shape = mode_shape(q, n, mode)
    p, t = intarith.as_prime_power(q)
    primes = intarith.factor_power_minus_one(p, t * n, cap).primes
    w_poly = exact_poly_w(q, n) if shape.uses_poly_w else None
    return shape, primes, w_poly


def base_inequality(q: int, n: int, mode: Mode, cap: int = intarith.DEFAULT_FACTOR_CAP) -> SieveReport:
    """The mode inequality with s = 0, delta = 1 and exact W values."""
    shape, primes, w_poly = _setup(q, n, mode, cap)
    return _evaluate(q, n, mode, shape, w_poly, primes, [], Fraction(1), Outcome.FAIL)


def run_sieve(q: int, n: int, mode: Mode, cap: int = intarith.DEFAULT_FACTOR_CAP) -> SieveReport:
    """Peel the largest remaining prime of q^n - 1 until the inequality holds."""
    shape, primes, w_poly = _setup(q, n, mode, cap)
    m = len(primes)
    delta = Fraction(1)
    sieved: list[int] = []
    while True:
        report = _evaluate(q, n, mode, shape, w_poly, primes, sieved, delta, Outcome.FAIL_NO_MORE_PRIMES)
        if report.success or len(sieved) == m:
            return report
        nxt = primes[m - 1 - len(sieved)]
        delta -= Fraction(1, nxt)
        sieved.append(nxt)
        if delta <= 0:
            report = _evaluate(q, n, mode, shape, w_poly, primes, sieved, delta, Outcome.FAIL_DELTA_NONPOSITIVE)
            return replace(report, outcome=Outcome.FAIL_DELTA_NONPOSITIVE)


# -- screening with estimated W values -------------------------------------

W_INT_BOUNDS = ("exact", "c4", "c8", "c12", "c4_t", "c8_t", "c12_t")
W_POLY_BOUNDS = ("exact", "best", "generic", "generic_min", "trivial", "q5", "q3")

# published maxima of c_{t,4} and c_{t,8}
PUBLISHED_C4 = 4.9
PUBLISHED_C8 = 4514.7


def _log_w_int(q: int, n: int, how: str, int_constant: float | None, cap: int) -> float:
    if how not in W_INT_BOUNDS:
        raise PreconditionViolated(f"unknown W(q^n-1) bound {how!r}")
    if how == "exact" or how.endswith("_t"):
        pt = intarith.as_prime_power(q)
        if pt is None:
            raise PreconditionViolated(f"bound {how!r} needs q to be a prime power")
        fac = intarith.factor_power_minus_one(pt[0], pt[1] * n, cap)
        if how == "exact":
            return math.log(intarith.big_w_int(fac))
    a = int(how[1:].removesuffix("_t"))
    if int_constant is not None:
        c = int_constant
    elif how.endswith("_t"):
        c = intarith.w_bound_constant(fac, a)
    elif a == 4:
        c = PUBLISHED_C4
    elif a == 8:
        c = PUBLISHED_C8
    else:
        c = intarith.universal_w_constant(a)
    return math.log(c) + n * math.log(q) / a


def _log_w_poly(q: int, n: int, how: str, p: int | None) -> float:
    _, _, u = p_split(q, n, p)
    if how == "exact":
        return math.log(2 ** count_irreducible_factors_cyclotomic(q, u))
    values = w_poly_bound_values(q, u)
    if how == "best":
        return math.log(min(values.values()))
    if how not in values:
        raise PreconditionViolated(f"bound {how!r} does not apply to q={q}, u={u}")
    return math.log(values[how])


def evaluate_bound_based_condition(
    q: int,
    n: int,
    mode: Mode,
    w_int_bound: str = "exact",
    w_poly_bound: str = "exact",
    int_constant: float | None = None,
    p: int | None = None,
    cap: int = intarith.DEFAULT_FACTOR_CAP,
) -> bool:
    """The s = 0 mode inequality with W(q^n - 1) and W(x^u - 1) replaced by upper bounds.

    ``c4``/``c8``/``c12`` use the universal constants, ``*_t`` the constant
    computed for t = q^n - 1; ``int_constant`` overrides either.  Passing the
    characteristic ``p`` lets q range over arbitrary integers, which is how
    thresholds like "for all q >= Q" are probed; bounds that need the actual
    factorization of q^n - 1 still require a prime power.
    """
    if p is None:
        _check_odd(q)
    elif p == 2 or not intarith.is_prime(p):
        raise PreconditionViolated("p must be an odd prime")
    shape = mode_shape(q, n, mode, p)
    lhs = float(shape.exponent) * math.log(q)
    rhs = math.log(shape.constant) + _log_w_int(q, n, w_int_bound, int_constant, cap)
    if shape.uses_poly_w:
        rhs += _log_w_poly(q, n, w_poly_bound, p)
    return lhs - rhs > ROUNDING_MARGIN * max(1.0, abs(lhs), abs(rhs))


# -- n = p and n = 2p -----------------------------------------------------


@dataclass(frozen=True)
class CaseNPReport:
    q: int
    n: int
    lhs: float
    rhs: float
    violated: bool

    @property
    def existence_follows(self) -> bool:
        return self.violated

    def to_record(self) -> dict:
        return {"q": self.q, "n": self.n, "lhs": self.lhs, "rhs": self.rhs, "violated": self.violated,
                "existence_follows": self.existence_follows}


def case_np_analysis(q: int, p_mode: str, cap: int = intarith.DEFAULT_FACTOR_CAP) -> CaseNPReport:
    """Evaluate the necessary condition for non-existence when n = p or n = 2p.

    n = p:  1/theta(q^p - 1) > q - 2 q^(2 - p/2) W(q^p - 1)
    n = 2p: q/((q-1) theta(q^2p - 1)) > q - 4 q^(2-p) W(q^2p - 1)
    A violated inequality means a 2-primitive 1-normal element exists.
    """
    pt = intarith.as_prime_power(q)
    if pt is None:
        raise PreconditionViolated(f"{q} is not a prime power")
    p, t = pt
    if p < 5:
        raise PreconditionViolated("the characteristic must be at least 5")
    if p_mode == "n_equals_p":
        n = p
        fac = intarith.factor_power_minus_one(p, t * n, cap)
        lhs = 1 / float(intarith.theta(fac))
        rhs = q - 2 * q ** (2 - p / 2) * intarith.big_w_int(fac)
    elif p_mode == "n_equals_2p":
        n = 2 * p
        fac = intarith.factor_power_minus_one(p, t * n, cap)
        lhs = q / ((q - 1) * float(intarith.theta(fac)))
        rhs = q - 4 * q ** (2 - p) * intarith.big_w_int(fac)
    else:
        raise PreconditionViolated(f"unknown case {p_mode!r}")
    holds = lhs - rhs > ROUNDING_MARGIN * max(1.0, abs(lhs), abs(rhs))
    # only a clear failure counts as violated; a near-tie stays undecided (not violated)
    return CaseNPReport(q, n, lhs, rhs, violated=not holds and rhs - lhs > ROUNDING_MARGIN * max(1.0, abs(lhs)))


def cor_2trace_condition(q: int, n: int, cap: int = intarith.DEFAULT_FACTOR_CAP) -> bool:
    """q^(n - n/p) > 2 q^(n/2) W(q^n - 1), for n = p^k u with k >= 2 and p >= 5."""
    p, pk, _ = p_split(q, n)
    if p < 5:
        raise PreconditionViolated("the characteristic must be at least 5")
    if pk < p * p:
        raise PreconditionViolated(f"n={n} is not divisible by p^2")
    _, t = intarith.as_prime_power(q)
    W = intarith.big_w_int(intarith.factor_power_minus_one(p, t * n, cap))
    return _exceeds(q, Fraction(n) - Fraction(n, p) - Fraction(n, 2), Fraction(2 * W))


# -- batches ----------------------------------------------------------------


def sweep(pairs: Iterable[tuple[int, int]], mode: Mode, cap: int = intarith.DEFAULT_FACTOR_CAP) -> list[SieveReport]:
    return [run_sieve(q, n, mode, cap) for q, n in pairs]


def reports_to_csv(reports: Iterable[SieveReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        rec = r.to_record()
        writer.writerow([rec[c] for c in CSV_COLUMNS])
    return buf.getvalue()

"""Complex characters of F_{q^n} and numerical checks of character-sum identities.

Everything here enumerates the field, so it is meant for small fields only.
Multiplicative characters are indexed through discrete logarithms to the
canonical generator; additive characters are chi_delta(w) = zeta_p^Tr(delta w)
with Tr the absolute trace to F_p.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from functools import lru_cache

from . import intarith
from .errors import CapExceeded, NotADivisor, PreconditionViolated
from .ffield import ExtensionField, FieldElement
from .fqpoly import FqPolynomial, big_w_poly, poly_mobius, poly_phi
from . import structure

DEFAULT_CHARSUM_CAP = 10**6
TOLERANCE = 1e-6


@lru_cache(maxsize=None)
def _roots_of_unity(d: int) -> tuple[complex, ...]:
    # exact residue first, then one float step, so phases never drift
    return tuple(cmath.exp(2j * math.pi * k / d) for k in range(d))


def root_of_unity(k: int, d: int) -> complex:
    return _roots_of_unity(d)[k % d]


class FieldTables:
    """Discrete logs and absolute traces, indexed by element index."""

    def __init__(self, F: ExtensionField):
        self.F = F
        N = F.order
        g = F.generator
        exp = [0] * N
        log = [-1] * F.size
        cur = F.one
        for j in range(N):
            idx = F.index(cur)
            exp[j] = idx
            log[idx] = j
            cur = F.mul(cur, g)
        self.exp = exp
        self.log = log
        self.abs_trace = [F.abs_trace(F.from_index(i)) for i in range(F.size)]
        self._delta_lock = threading.Lock()
        self._delta_classes: dict[FqPolynomial, list[int]] | None = None

    def mul_index(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % self.F.order]

    def delta_classes(self) -> dict[FqPolynomial, list[int]]:
        """Map each monic E | x^n - 1 to the indices of delta with chi_delta of F_q-order E."""
        with self._delta_lock:
            if self._delta_classes is None:
                self._delta_classes = _classify_deltas(self)
            return self._delta_classes


_tables_lock = threading.Lock()
_tables: dict[ExtensionField, FieldTables] = {}


def field_tables(F: ExtensionField, cap: int = DEFAULT_CHARSUM_CAP) -> FieldTables:
    if F.size > cap:
        raise CapExceeded(f"character tables for {F.size} elements exceed cap {cap}")
    with _tables_lock:
        tab = _tables.get(F)
        if tab is None:
            tab = _tables[F] = FieldTables(F)
        return tab


def _fp_basis(F: ExtensionField) -> list[tuple]:
    p = F.p
    return [tuple(p**a if j == i else 0 for j in range(F.n)) for i in range(F.n) for a in range(F.base.t)]


def _classify_deltas(tab: FieldTables) -> dict[FqPolynomial, list[int]]:
    F = tab.F
    divisors = structure.xn_minus_one_divisors(F)
    basis = _fp_basis(F)
    # E∘b for every divisor E and basis vector b; w -> Tr(delta E∘w) is F_p-linear
    images = {E: [F.index(F.q_associate(E.coeffs, b)) for b in basis] for E in divisors}
    classes: dict[FqPolynomial, list[int]] = {E: [] for E in divisors}
    for delta in range(F.size):
        for E in divisors:  # ascending degree, so the first hit generates the annihilator
            if all(tab.abs_trace[tab.mul_index(delta, v)] == 0 for v in images[E]):
                classes[E].append(delta)
                break
    return classes


@dataclass(frozen=True)
class MultCharacter:
    """eta(g^j) = exp(2 pi i index j / order_d), g the canonical generator."""

    field: ExtensionField
    order_d: int
    index: int

    def __post_init__(self):
        if self.field.order % self.order_d:
            raise NotADivisor(f"{self.order_d} does not divide {self.field.order}")
        if math.gcd(self.index, self.order_d) != 1:
            raise PreconditionViolated(f"index {self.index} is not a unit mod {self.order_d}")

    @property
    def is_trivial(self) -> bool:
        return self.order_d == 1

    def exponent_step(self) -> tuple[int, int]:
        """(k, N) with eta(g^j) = zeta_N^(k j)."""
        N = self.field.order
        return self.index * (N // self.order_d) % N, N


@dataclass(frozen=True)
class AddCharacter:
    """chi_delta(w) = exp(2 pi i Tr_{q^n/p}(delta w) / p)."""

    field: ExtensionField
    delta: tuple

    @property
    def is_trivial(self) -> bool:
        return not any(self.delta)


def characters_of_order(F: ExtensionField, d: int) -> list[MultCharacter]:
    return [MultCharacter(F, d, i) for i in range(d) if math.gcd(i, d) == 1] if d > 1 else [MultCharacter(F, 1, 0)]


def eval_mult_char(eta: MultCharacter, w: FieldElement) -> complex:
    F = eta.field
    if w.is_zero():
        return 1.0 + 0j if eta.is_trivial else 0j
    tab = field_tables(F)
    k, N = eta.exponent_step()
    return root_of_unity(k * tab.log[F.index(w.coords)], N)


def eval_add_char(chi: AddCharacter, w: FieldElement) -> complex:
    F = chi.field
    tab = field_tables(F)
    t = tab.abs_trace[tab.mul_index(F.index(chi.delta), F.index(w.coords))]
    return root_of_unity(t, F.p)


def _g2_indices(tab: FieldTables, eta: MultCharacter, delta_idx: int, include_zero: bool) -> complex:
    F = tab.F
    N = F.order
    k, _ = eta.exponent_step()
    zp = _roots_of_unity(F.p)
    zN = _roots_of_unity(N)
    total = 0j
    if delta_idx == 0:
        for j in range(N):
            total += zN[k * j % N]
    else:
        ld = tab.log[delta_idx]
        exp, tr = tab.exp, tab.abs_trace
        for j in range(N):
            total += zN[k * j % N] * zp[tr[exp[(ld + 2 * j) % N]]]
    if include_zero and eta.is_trivial:
        total += 1  # eta_1(0) chi(0) = 1
    return total


def gauss_sum_g2(eta: MultCharacter, chi: AddCharacter, cap: int = DEFAULT_CHARSUM_CAP) -> complex:
    """G_2(eta, chi) = sum over all w of eta(w) chi(w^2), with eta_1(0) = 1 and eta(0) = 0 otherwise."""
    tab = field_tables(eta.field, cap)
    return _g2_indices(tab, eta, eta.field.index(chi.delta), include_zero=True)


def quadratic_char_sum(F: ExtensionField, a: tuple, cap: int = DEFAULT_CHARSUM_CAP) -> complex:
    """sum_w chi(a w^2)."""
    tab = field_tables(F, cap)
    ai = F.index(a)
    total = 0j
    zp = _roots_of_unity(F.p)
    for w in range(F.size):
        total += zp[tab.abs_trace[tab.mul_index(ai, tab.mul_index(w, w))]]
    return total


# -- characteristic functions ----------------------------------------------


def omega_t(F: ExtensionField, t: int, w_idx: int, tab: FieldTables | None = None) -> complex:
    """theta(t) sum_{d | t} mu(d)/phi(d) sum_{eta of order d} eta(w), for w != 0."""
    tab = tab or field_tables(F)
    N = F.order
    j = tab.log[w_idx]
    zN = _roots_of_unity(N)
    total = 0j
    for d in intarith.divisors(t):
        mu = intarith.mobius(d)
        if mu == 0:
            continue
        step = N // d
        s = sum(zN[i * step * j % N] for i in range(d) if math.gcd(i, d) == 1) if d > 1 else 1
        total += mu / intarith.euler_phi(d) * s
    return float(intarith.theta(t)) * total


def big_omega_d(F: ExtensionField, D: FqPolynomial, w_idx: int, tab: FieldTables | None = None) -> complex:
    """Theta(D) sum_{E | D} mu_q(E)/Phi(E) sum_{delta in Delta_E} chi_delta(w)."""
    tab = tab or field_tables(F)
    classes = tab.delta_classes()
    zp = _roots_of_unity(F.p)
    total = 0j
    for E in structure.xn_minus_one_divisors(F):
        if not E.divides(D):
            continue
        mu = poly_mobius(E)
        if mu == 0:
            continue
        s = sum(zp[tab.abs_trace[tab.mul_index(delta, w_idx)]] for delta in classes[E])
        total += mu / poly_phi(E) * s
    return poly_phi(D) / F.q**D.degree * total


def delta_class_sizes(F: ExtensionField) -> dict[FqPolynomial, int]:
    return {E: len(v) for E, v in field_tables(F).delta_classes().items()}


def char_indicator_cross_check(F: ExtensionField, t: int, D: FqPolynomial, tol: float = TOLERANCE) -> bool:
    """Character forms of omega_t and Omega_D agree with the freeness predicates at every w."""
    if F.order % t:
        raise NotADivisor(f"{t} does not divide {F.order}")
    tab = field_tables(F)
    for i in range(F.size):
        w = F.wrap(F.from_index(i))
        if i:
            exact = 1.0 if structure.is_t_free(w, t) else 0.0
            if abs(omega_t(F, t, i, tab) - exact) > tol:
                return False
        exact = 1.0 if structure.is_poly_free(w, D) else 0.0
        if abs(big_omega_d(F, D, i, tab) - exact) > tol:
            return False
    return True


def _trace_preimage(F: ExtensionField, m: int, beta: tuple) -> tuple:
    for v in F.elements():
        if F.trace(v, m) == beta:
            return v
    raise AssertionError("trace onto a subfield is surjective")


def trace_indicator(F: ExtensionField, m: int, beta: FieldElement, w_idx: int, alpha: tuple | None = None) -> complex:
    """(1/q^m) sum_{d in F_{q^m}} chi_d(w) chi_d(alpha)^(-1), Tr(alpha) = beta."""
    tab = field_tables(F)
    if alpha is None:
        alpha = _trace_preimage(F, m, beta.coords)
    ai = F.index(alpha)
    zp = _roots_of_unity(F.p)
    total = 0j
    for d in _subfield_indices(F, m):
        total += zp[(tab.abs_trace[tab.mul_index(d, w_idx)] - tab.abs_trace[tab.mul_index(d, ai)]) % F.p]
    return total / F.q**m


@lru_cache(maxsize=64)
def _subfield_indices_cached(F: ExtensionField, m: int) -> tuple[int, ...]:
    return tuple(F.index(v) for v in F.subfield_elements(m))


def _subfield_indices(F: ExtensionField, m: int) -> tuple[int, ...]:
    return _subfield_indices_cached(F, m)


def _check_subfield(F: ExtensionField, m: int, beta: FieldElement) -> None:
    if F.n % m:
        raise NotADivisor(f"{m} does not divide n={F.n}")
    if not F.in_subfield(beta.coords, m):
        raise PreconditionViolated(f"beta is not in F_(q^{m})")


def trace_indicator_cross_check(F: ExtensionField, m: int, beta: FieldElement, tol: float = TOLERANCE) -> bool:
    _check_subfield(F, m, beta)
    field_tables(F)
    alpha = _trace_preimage(F, m, beta.coords)
    for i in range(F.size):
        exact = 1.0 if F.trace(F.from_index(i), m) == beta.coords else 0.0
        if abs(trace_indicator(F, m, beta, i, alpha) - exact) > tol:
            return False
    return True


# -- the counting identity for N(f, m, beta) --------------------------------


@dataclass(frozen=True)
class CountIdentityReport:
    count: int
    exact_expression: float
    exact_imag: float
    simplified_expression: float
    lower_bound_rhs: float
    hypotheses_hold: bool

    @property
    def identity_holds(self) -> bool:
        return abs(self.count - self.exact_expression) < 1e-3 and abs(self.exact_imag) < 1e-3

    @property
    def inequality_holds(self) -> bool:
        """count/(theta Theta) > q^(n-m) - 2 q^(n/2) W W, vacuous when the right side is not positive."""
        return self.lower_bound_rhs <= 0 or self.count > self.lower_bound_rhs

    def to_record(self) -> dict:
        return {
            "count": self.count,
            "exact_expression": self.exact_expression,
            "simplified_expression": self.simplified_expression,
            "lower_bound_rhs": self.lower_bound_rhs,
            "identity_holds": self.identity_holds,
            "inequality_holds": self.inequality_holds,
            "hypotheses_hold": self.hypotheses_hold,
        }


def count_identity(F: ExtensionField, f: FqPolynomial, m: int, beta: FieldElement) -> CountIdentityReport:
    """Compare the enumerated N(f, m, beta) with its character-sum expansion.

    The exact expansion multiplies omega(w) Omega_f(w^2) T_{m,beta}(w^2) out
    over w in F_{q^n}^*; its Gauss sums therefore run over w != 0.  The
    simplified form keeps only the d != 1 sums plus q^n, which drops the
    quadratic Gauss sums G_2(eta_1, chi_c), c != 0; it is reported for
    comparison and does not match the count in general.
    """
    structure.check_count_n_preconditions(F, f, m, beta)
    tab = field_tables(F)
    count = structure.count_N(f, m, beta)
    alpha = F.index(_trace_preimage(F, m, beta.coords))
    zp = _roots_of_unity(F.p)
    classes = tab.delta_classes()
    mult = []  # (weight, character)
    for d in intarith.divisors(F.order_factored):
        mu = intarith.mobius(d)
        if mu:
            for eta in characters_of_order(F, d):
                mult.append((mu / intarith.euler_phi(d), eta))
    add = []  # (weight, delta index, D is trivial)
    for D in structure.xn_minus_one_divisors(F):
        if not D.divides(f):
            continue
        mu = poly_mobius(D)
        if mu:
            for delta in classes[D]:
                add.append((mu / poly_phi(D), delta, D.degree == 0))
    exact = 0j
    simplified = 0j
    g2cache: dict[tuple, complex] = {}

    def g2(eta, idx, include_zero):
        key = (eta.order_d, eta.index, idx, include_zero)
        if key not in g2cache:
            g2cache[key] = _g2_indices(tab, eta, idx, include_zero)
        return g2cache[key]

    for c in _subfield_indices(F, m):
        a_c = zp[(-tab.abs_trace[tab.mul_index(c, alpha)]) % F.p]
        for wm, eta in mult:
            for wa, delta, d_trivial in add:
                shift = F.index(F.add(F.from_index(delta), F.from_index(c)))
                exact += a_c * wm * wa * g2(eta, shift, False)
                if not eta.is_trivial and (not d_trivial or c != 0):
                    simplified += a_c * wm * wa * g2(eta, shift, True)
    th = float(intarith.theta(F.order_factored))
    Th = poly_phi(f) / F.q**f.degree
    exact *= th * Th / F.q**m
    simplified = th * Th / F.q**m * (F.size + simplified)
    rhs_norm = F.q ** (F.n - m) - 2 * F.q ** (F.n / 2) * intarith.big_w_int(F.order_factored) * big_w_poly(f)
    return CountIdentityReport(
        count=count,
        exact_expression=exact.real,
        exact_imag=exact.imag,
        simplified_expression=simplified.real,
        lower_bound_rhs=th * Th * rhs_norm,
        hypotheses_hold=structure.count_n_hypotheses_hold(F, f, m),
    )


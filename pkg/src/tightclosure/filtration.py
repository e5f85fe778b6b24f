"""Analysis of the tight filtration {(J^n)*}.

Tight Hilbert function and its polynomial coefficients (fitted exactly in
the signed binomial basis and, independently, summed via colength terms of
the filtration), the Valabrega-Valla / intersection / Buchsbaum identity
suites, reduction numbers, and the Rees-algebra Cohen-Macaulay verdict.

All identities are decided exactly.  Equality of an intersection Aw B with
a candidate C is established by containment of C in both sides plus the
per-degree dimension identity dim(A w B)_t = dim A_t + dim B_t -
dim(A+B)_t, which avoids elimination orders on the hot path; the
tag-variable intersection route remains available and the two are
cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .rings import (
    RIdeal,
    hilbert_function,
    hilbert_table,
    length_of_quotient,
    maximal_ideal_power,
)
from .tight import HsopIdeal, closed_form_tight_closure

R_STAR_INTERPRETATION_NOTE = (
    "tight reduction number r*(J) read as: least n0 with J(J^n)* = (J^(n+1))* "
    "for all n >= n0, verified up to a cap (interpretation)"
)


@dataclass(frozen=True)
class IdentityCheckReport:
    """Per-power verdicts for one displayed ideal identity."""

    name: str
    results: tuple[tuple[int, bool], ...]
    overall: bool
    applicable: bool = True
    note: str | None = None


@dataclass(frozen=True)
class TightHilbertSeries:
    """Lengths of R/(J^n)* with the exact binomial-basis fit."""

    values: tuple[tuple[int, int], ...]
    coefficients: tuple[int, ...]
    fit_window: tuple[int, int]
    validated_at: int
    stabilized: bool


@dataclass(frozen=True)
class ReesVerdict:
    cohen_macaulay: bool
    r_star: int
    sufficient_condition_fired: bool
    rationale: str


@dataclass(frozen=True)
class ReductionData:
    r_j_me: int
    closed_form_value: int
    r_star: int
    r_star_bound: int
    rees: ReesVerdict


# -- memoised building blocks ---------------------------------------------


@lru_cache(maxsize=None)
def tight_closure_power(J: HsopIdeal, n: int) -> RIdeal:
    """(J^n)* via the licensed closed form (n = 0 gives the unit ideal)."""
    return closed_form_tight_closure(J, n).ideal


@lru_cache(maxsize=None)
def _j_power(J: HsopIdeal, n: int) -> RIdeal:
    return J.ideal.power(n)


@lru_cache(maxsize=None)
def _j_times_closure(J: HsopIdeal, n: int) -> RIdeal:
    return J.ideal.times(tight_closure_power(J, n))


@lru_cache(maxsize=None)
def _m_power(J: HsopIdeal, k: int) -> RIdeal:
    return maximal_ideal_power(J.ring, k)


def _floor_term(J: HsopIdeal) -> int:
    """floor((r - 1 - d) / e); integer floor also for negative numerators."""
    r, d, e = J.ring.fermat_exponent, J.ring.dim, J.degree_e
    return (r - 1 - d) // e


def closed_form_reduction_number(J: HsopIdeal) -> int:
    """floor((r-1-d)/e) + d, the predicted reduction number of m^e w.r.t. J."""
    return _floor_term(J) + J.ring.dim


def r_star_bound(J: HsopIdeal) -> int:
    """floor((r-1-d)/e) + 1, the predicted bound on the tight reduction
    number; a bound <= 0 means every power is tightly closed."""
    return _floor_term(J) + 1


# -- tight Hilbert function and coefficients --------------------------------


def tight_hilbert_function(J: HsopIdeal, n: int) -> int:
    """Length of R/(J^n)*."""
    if n < 1:
        raise ValueError("tight Hilbert function is defined for n >= 1")
    return length_of_quotient(tight_closure_power(J, n))


def hilbert_polynomial_value(coefficients: Sequence[int], dim: int, n: int) -> int:
    """Evaluate e0*C(n+d-1,d) - e1*C(n+d-2,d-1) + ... +/- ed."""
    return sum(
        (-1) ** i * coefficients[i] * comb(n + dim - 1 - i, dim - i)
        for i in range(dim + 1)
    )


def fit_tight_coefficients(values: Sequence[tuple[int, int]], dim: int) -> tuple[int, ...]:
    """Solve for the d+1 coefficients from consecutive (n, length) values.

    The first dim+1 points give an exact square system in the signed
    binomial basis; every remaining point validates the fit.  A mismatch
    means the window starts before the polynomial regime."""
    if len(values) < dim + 2:
        raise ValueError(f"need at least {dim + 2} consecutive values, got {len(values)}")
    ns = [n for n, _ in values]
    if ns != list(range(ns[0], ns[0] + len(ns))):
        raise ValueError("values must have consecutive n")
    rows = []
    for n, h in values[: dim + 1]:
        rows.append(
            [Fraction((-1) ** i * comb(n + dim - 1 - i, dim - i)) for i in range(dim + 1)]
            + [Fraction(h)]
        )
    coeffs = _solve_exact(rows)
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ValueError("polynomial regime not reached; increase window")
        out.append(int(c))
    for n, h in values[dim + 1 :]:
        if hilbert_polynomial_value(out, dim, n) != h:
            raise ValueError("polynomial regime not reached; increase window")
    return tuple(out)


def _solve_exact(rows: list[list[Fraction]]) -> list[Fraction]:
    """Gaussian elimination over the rationals for a square system."""
    n = len(rows)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c]), None)
        if pivot is None:
            raise ValueError("singular fit system")
        rows[c], rows[pivot] = rows[pivot], rows[c]
        inv = 1 / rows[c][c]
        rows[c] = [x * inv for x in rows[c]]
        for i in range(n):
            if i != c and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return [rows[i][n] for i in range(n)]


def tight_hilbert_series(J: HsopIdeal) -> TightHilbertSeries:
    """Fit the tight Hilbert polynomial on the default stabilized window.

    Window n in [r*+1, r*+d+2] with one further validation point at
    r*+d+3, the smallest range guaranteed past the reduction number."""
    d = J.ring.dim
    rs = tight_reduction_number(J)
    lo = max(rs + 1, 1)
    hi = lo + d + 1
    validate = hi + 1
    values = tuple((n, tight_hilbert_function(J, n)) for n in range(1, validate + 1))
    window = values[lo - 1 : validate]
    coeffs = fit_tight_coefficients(window, d)
    return TightHilbertSeries(values, coeffs, (lo, hi), validate, True)


def huckaba_marley_coefficient(J: HsopIdeal, j: int, cap: int | None = None) -> int:
    """Sum of C(n-1, j-1) * length((J^n)*/J(J^(n-1))*) over n >= j.

    Terms vanish once the tight filtration becomes a reduction, which on
    licensed rings persists past the predicted bound; the hard cap guards
    the summation regardless."""
    d = J.ring.dim
    if not 1 <= j <= d:
        raise ValueError(f"coefficient index must be in 1..{d}")
    bound = r_star_bound(J)
    if cap is None:
        cap = max(bound + 3, j + 2)
    total = 0
    term = None
    for n in range(j, cap + 1):
        term = length_of_quotient(_j_times_closure(J, n - 1)) - length_of_quotient(
            tight_closure_power(J, n)
        )
        total += comb(n - 1, j - 1) * term
        if term == 0 and n > bound:
            return total
    if term != 0:
        raise ValueError(f"cap {cap} reached without a vanishing term; partial sum {total}")
    return total


# -- identity suites --------------------------------------------------------


def _support_weights(X: RIdeal) -> int:
    """Number of nonzero rows of the quotient Hilbert table."""
    return len(hilbert_table(X).values)


def intersection_equals(A: RIdeal, B: RIdeal, C: RIdeal) -> bool:
    """Decide A w B = C exactly for homogeneous m-primary ideals.

    C must sit inside both A and B; equality then reduces to the graded
    dimension count dim C_t = dim A_t + dim B_t - dim (A+B)_t for every t
    up to the largest quotient support (beyond it all four components are
    the full graded piece)."""
    if not (A.contains_ideal(C) and B.contains_ideal(C)):
        return False
    S = A.plus(B)
    ring = A.ring
    e = ring.var_degree
    top = max(_support_weights(X) for X in (A, B, C, S))
    for w in range(top + 1):
        t = w * e
        dim_r = ring.graded_dim(t)
        dim_a = dim_r - hilbert_function(A, t)
        dim_b = dim_r - hilbert_function(B, t)
        dim_s = dim_r - hilbert_function(S, t)
        dim_c = dim_r - hilbert_function(C, t)
        if dim_c != dim_a + dim_b - dim_s:
            return False
    return True


def intersection_equals_gb(A: RIdeal, B: RIdeal, C: RIdeal) -> bool:
    """Same predicate through the tag-variable intersection (cross-check)."""
    return A.intersection(B).equals(C)


def vv_check(J: HsopIdeal, n_max: int) -> IdentityCheckReport:
    """J w (J^(n+1))* = J (J^n)* for n = 0..n_max.

    Overall truth is the Valabrega-Valla criterion for the tight
    filtration up to n_max: the initial forms of J behave regularly, the
    computational content of the associated graded ring being
    Cohen-Macaulay."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    results = []
    for n in range(0, n_max + 1):
        ok = intersection_equals(
            J.ideal, tight_closure_power(J, n + 1), _j_times_closure(J, n)
        )
        results.append((n, ok))
    return IdentityCheckReport("vv", tuple(results), all(ok for _, ok in results))


def itoh_check(J: HsopIdeal, n_max: int) -> IdentityCheckReport:
    """J^n w (J^(n+1))* = J^n J* for n = 0..n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    closure1 = tight_closure_power(J, 1)
    results = []
    for n in range(0, n_max + 1):
        jn = _j_power(J, n)
        ok = intersection_equals(jn, tight_closure_power(J, n + 1), jn.times(closure1))
        results.append((n, ok))
    return IdentityCheckReport("itoh", tuple(results), all(ok for _, ok in results))


@lru_cache(maxsize=None)
def _squares_ideal(J: HsopIdeal) -> RIdeal:
    return RIdeal.of(J.ring, [g * g for g in J.ideal.gens])


def buchsbaum_check(J: HsopIdeal, n_max: int) -> IdentityCheckReport:
    """(a1^2..ad^2) w (J^n)* = (a1^2..ad^2)(J^(n-2))* for n = 3..n_max."""
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    squares = _squares_ideal(J)
    results = []
    for n in range(3, n_max + 1):
        ok = intersection_equals(
            squares,
            tight_closure_power(J, n),
            squares.times(tight_closure_power(J, n - 2)),
        )
        results.append((n, ok))
    return IdentityCheckReport("buchsbaum", tuple(results), all(ok for _, ok in results))


def tightly_closed_powers_check(J: HsopIdeal, n_max: int) -> IdentityCheckReport:
    """When J itself is tightly closed, every power should be: check
    (J^n)* = J^n for n = 2..n_max; otherwise report not applicable."""
    if not tight_closure_power(J, 1).equals(J.ideal):
        return IdentityCheckReport(
            "tightly_closed_powers", (), False, applicable=False,
            note="hypothesis not met: J is not tightly closed",
        )
    results = []
    for n in range(2, n_max + 1):
        results.append((n, tight_closure_power(J, n).equals(_j_power(J, n))))
    return IdentityCheckReport(
        "tightly_closed_powers", tuple(results), all(ok for _, ok in results)
    )


# -- reduction numbers ------------------------------------------------------


def reduction_number_me(J: HsopIdeal) -> int:
    """Least n with J (m^e)^n = (m^e)^(n+1), searched up to the closed
    form + 3 and checked against it by the caller."""
    e = J.degree_e
    cf = closed_form_reduction_number(J)
    for n in range(0, max(cf, 0) + 4):
        lhs = J.ideal.times(_m_power(J, e * n))
        rhs = _m_power(J, e * (n + 1))
        if lhs.equals(rhs):
            return n
    raise RuntimeError(
        f"no reduction of m^{e} found up to {max(cf, 0) + 3}; "
        f"inconsistent with the closed form {cf}"
    )


def tight_reduction_number(J: HsopIdeal, cap: int | None = None) -> int:
    """Least n0 with J (J^n)* = (J^(n+1))* for every n in [n0, cap].

    Verified against the predicted bound; a failing identity at the cap
    means persistence cannot be certified from this window."""
    bound = r_star_bound(J)
    if cap is None:
        cap = max(bound + 3, 2)
    flags = [
        _j_times_closure(J, n).equals(tight_closure_power(J, n + 1))
        for n in range(0, cap + 1)
    ]
    if not flags[-1]:
        raise ValueError(f"cap {cap} too small to certify persistence of the reduction")
    n0 = cap
    while n0 > 0 and flags[n0 - 1]:
        n0 -= 1
    if n0 > max(bound, 0):
        raise RuntimeError(
            f"tight reduction number {n0} exceeds the predicted bound {bound}"
        )
    return n0


def rees_cm_verdict(J: HsopIdeal) -> ReesVerdict:
    """Cohen-Macaulayness of the Rees algebra of the tight filtration.

    With R and the associated graded ring of the filtration both
    Cohen-Macaulay, the Rees algebra is Cohen-Macaulay iff r*(J) <= d-1;
    the inequality floor((r-1-d)/e) <= d-2 is the sufficient condition
    that forces it."""
    d = J.ring.dim
    rs = tight_reduction_number(J)
    fired = _floor_term(J) <= d - 2
    cm = rs <= d - 1
    if fired:
        rationale = (
            f"sufficient condition fired: floor((r-1-d)/e) = {_floor_term(J)} <= d-2 = {d - 2}; "
            f"computed r* = {rs} <= d-1 = {d - 1}"
        )
    elif cm:
        rationale = f"computed r* = {rs} <= d-1 = {d - 1}"
    else:
        rationale = f"computed r* = {rs} > d-1 = {d - 1}"
    return ReesVerdict(cm, rs, fired, rationale)


def reduction_data(J: HsopIdeal) -> ReductionData:
    """Aggregate reduction-number results for reporting."""
    computed = reduction_number_me(J)
    cf = closed_form_reduction_number(J)
    rees = rees_cm_verdict(J)
    return ReductionData(computed, cf, rees.r_star, r_star_bound(J), rees)

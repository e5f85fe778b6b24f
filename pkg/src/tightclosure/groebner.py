"""Buchberger engine and ideal calculus in F_p[x0..xd].

Everything downstream (ring membership, lengths, identity checks) is
decided through reduced Groebner bases computed here.  The implementation
is the classic Buchberger loop with the product and chain criteria and a
deterministic normal pair-selection strategy, so a given generator list
always yields the same reduced basis, term by term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .ffpoly import (
    GREVLEX,
    Exps,
    MonomialOrder,
    Poly,
    PrimeField,
    exps_add,
    exps_divides,
    exps_lcm,
    exps_sub,
    frobenius_pow,
)


def lead_term(poly: Poly, order: MonomialOrder) -> tuple[Exps, int]:
    if poly.is_zero:
        raise ValueError("zero polynomial has no leading term")
    if order.n_elim == 0:
        return poly.terms[0]
    return max(poly.terms, key=lambda t: order.key(t[0]))


def normal_form(f: Poly, basis: Sequence[Poly], order: MonomialOrder = GREVLEX) -> Poly:
    """Fully reduced remainder of f modulo the basis.

    Each step rewrites the largest unprocessed term using the first basis
    element (in stored order) whose leading term divides it; terms with no
    divisor move to the remainder.  f - result lies in the ideal generated
    by the basis.
    """
    if f.is_zero or not basis:
        return f
    p = f.p
    field = PrimeField(p)
    info = []
    for g in basis:
        if g.is_zero:
            continue
        lt, lc = lead_term(g, order)
        info.append((lt, field.inv(lc), g.terms))
    if not info:
        return f
    key = order.key
    work = dict(f.terms)
    rem: dict[Exps, int] = {}
    while work:
        m = max(work, key=key)
        c = work[m]
        hit = None
        for lt, lc_inv, terms in info:
            if exps_divides(lt, m):
                hit = (lt, lc_inv, terms)
                break
        if hit is None:
            rem[m] = c
            del work[m]
            continue
        lt, lc_inv, terms = hit
        shift = exps_sub(m, lt)
        factor = (c * lc_inv) % p
        for e2, c2 in terms:
            e = exps_add(e2, shift)
            v = (work.get(e, 0) - factor * c2) % p
            if v:
                work[e] = v
            else:
                work.pop(e, None)
    return Poly.from_dict(p, f.nvars, rem)


def s_polynomial(f: Poly, g: Poly, order: MonomialOrder = GREVLEX) -> Poly:
    field = PrimeField(f.p)
    lt_f, lc_f = lead_term(f, order)
    lt_g, lc_g = lead_term(g, order)
    lcm = exps_lcm(lt_f, lt_g)
    a = f.term_mul(exps_sub(lcm, lt_f), field.inv(lc_f))
    b = g.term_mul(exps_sub(lcm, lt_g), field.inv(lc_g))
    return a - b


def buchberger(
    gens: Sequence[Poly],
    order: MonomialOrder = GREVLEX,
    step_limit: int | None = None,
) -> tuple[Poly, ...]:
    """The unique reduced Groebner basis of the ideal generated by gens.

    Pair selection is the normal strategy: smallest lcm in the order,
    ties broken by generator position.  The product criterion (coprime
    leading terms) and the chain criterion prune useless pairs.
    step_limit bounds the number of S-polynomial reductions (used by
    tests as a termination ceiling).
    """
    basis = _dedupe([g for g in gens if not g.is_zero])
    if not basis:
        return ()
    basis = [g.monic() for g in basis]
    key = order.key
    lts = [lead_term(g, order)[0] for g in basis]

    pairs: set[tuple[int, int]] = set()
    for i, j in itertools.combinations(range(len(basis)), 2):
        pairs.add((i, j))

    steps = 0
    while pairs:
        i, j = min(pairs, key=lambda ij: (key(exps_lcm(lts[ij[0]], lts[ij[1]])), ij))
        pairs.discard((i, j))
        lcm = exps_lcm(lts[i], lts[j])
        # product criterion: coprime leading terms reduce to zero
        if lcm == exps_add(lts[i], lts[j]):
            continue
        # chain criterion: a third element divides the lcm and both its
        # pairs with i and j are already handled
        if any(
            k != i and k != j
            and exps_divides(lts[k], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        if basis[i].is_monomial and basis[j].is_monomial:
            continue
        steps += 1
        if step_limit is not None and steps > step_limit:
            raise RuntimeError(f"step limit {step_limit} exceeded")
        h = normal_form(s_polynomial(basis[i], basis[j], order), basis, order)
        if h.is_zero:
            continue
        h = h.monic()
        basis.append(h)
        lts.append(lead_term(h, order)[0])
        new = len(basis) - 1
        for k in range(new):
            pairs.add((k, new))
    return _reduce_basis(basis, order)


def _dedupe(polys: Sequence[Poly]) -> list[Poly]:
    seen = set()
    out = []
    for g in polys:
        if g.terms not in seen:
            seen.add(g.terms)
            out.append(g)
    return out


def _reduce_basis(basis: list[Poly], order: MonomialOrder) -> tuple[Poly, ...]:
    key = order.key
    lts = [lead_term(g, order)[0] for g in basis]
    # minimal: a leading term divisible by another element's leading term
    # makes that element redundant; equal leading terms keep the earliest
    keep = [
        i
        for i in range(len(basis))
        if not any(
            j != i and exps_divides(lts[j], lts[i]) and (lts[j] != lts[i] or j < i)
            for j in range(len(basis))
        )
    ]
    minimal = [basis[i] for i in keep]
    # inter-reduce tails until stable
    while True:
        changed = False
        for i in range(len(minimal)):
            others = minimal[:i] + minimal[i + 1 :]
            h = normal_form(minimal[i], others, order)
            if h.terms != minimal[i].terms:
                minimal[i] = h.monic()
                changed = True
        minimal = [g for g in minimal if not g.is_zero]
        if not changed:
            break
    minimal.sort(key=lambda g: key(lead_term(g, order)[0]), reverse=True)
    return tuple(minimal)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis: monic, inter-reduced, sorted by leading
    monomial descending.  Deterministic for a given generator list."""

    polys: tuple[Poly, ...]
    order: MonomialOrder = GREVLEX

    @staticmethod
    def of(gens: Sequence[Poly], order: MonomialOrder = GREVLEX) -> "GroebnerBasis":
        return GroebnerBasis(buchberger(gens, order), order)

    @property
    def is_zero_ideal(self) -> bool:
        return not self.polys

    @property
    def is_unit_ideal(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].total_degree() == 0

    def leading_exps(self) -> tuple[Exps, ...]:
        return tuple(lead_term(g, self.order)[0] for g in self.polys)

    def normal_form(self, f: Poly) -> Poly:
        return normal_form(f, self.polys, self.order)

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero


def member(f: Poly, gb: GroebnerBasis) -> bool:
    """True iff f lies in the ideal presented by gb."""
    return gb.contains(f)


# -- ideal-level operations on generator lists ---------------------------


def normalize_gens(gens: Sequence[Poly]) -> tuple[Poly, ...]:
    """Drop zeros and exact duplicates, preserving first occurrence."""
    return tuple(_dedupe([g for g in gens if not g.is_zero]))


def ideal_sum(a: Sequence[Poly], b: Sequence[Poly]) -> tuple[Poly, ...]:
    return normalize_gens(list(a) + list(b))


def ideal_product(a: Sequence[Poly], b: Sequence[Poly]) -> tuple[Poly, ...]:
    return normalize_gens([f * g for f in a for g in b])


def ideal_power(a: Sequence[Poly], n: int) -> tuple[Poly, ...]:
    """All degree-n products of generators; n = 0 gives the unit ideal."""
    if n < 0:
        raise ValueError("ideal power requires n >= 0")
    a = normalize_gens(a)
    if not a:
        if n == 0:
            raise ValueError("unit power of the zero ideal needs a ring context")
        return ()
    p, nvars = a[0].p, a[0].nvars
    if n == 0:
        return (Poly.const(p, nvars, 1),)
    out = []
    for combo in itertools.combinations_with_replacement(a, n):
        prod = combo[0]
        for g in combo[1:]:
            prod = prod * g
        out.append(prod)
    return normalize_gens(out)


def bracket_power(a: Sequence[Poly], q: int) -> tuple[Poly, ...]:
    """Generator-wise q-th Frobenius power (q a power of p)."""
    return normalize_gens([frobenius_pow(g, q) for g in a])


def _tag_lift(poly: Poly, tag_exp: int) -> Poly:
    terms = tuple(((tag_exp,) + e, c) for e, c in poly.terms)
    return Poly(poly.p, poly.nvars + 1, terms)


def _drop_tag(poly: Poly) -> Poly:
    terms = tuple((e[1:], c) for e, c in poly.terms)
    return Poly.from_dict(poly.p, poly.nvars - 1, dict(terms))


def intersect(a: Sequence[Poly], b: Sequence[Poly]) -> tuple[Poly, ...]:
    """Ideal intersection via a tag variable: eliminate t from t*a + (1-t)*b."""
    a = normalize_gens(a)
    b = normalize_gens(b)
    if not a or not b:
        return ()
    p, nvars = a[0].p, a[0].nvars
    one = Poly.const(p, nvars + 1, 1)
    lifted = [_tag_lift(g, 1) for g in a]
    lifted += [(one - _tag_lift(Poly.const(p, nvars, 1), 1)) * _tag_lift(g, 0) for g in b]
    gb = buchberger(lifted, MonomialOrder(n_elim=1))
    out = []
    for g in gb:
        if all(e[0] == 0 for e, _ in g.terms):
            out.append(_drop_tag(g))
    assert all(len(g.terms[0][0]) == nvars for g in out if not g.is_zero)
    return normalize_gens(out)


def exact_divide(f: Poly, g: Poly) -> Poly:
    """Quotient f / g; raises if the division is not exact."""
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    field = PrimeField(f.p)
    lt_g, lc_g = lead_term(g, GREVLEX)
    inv = field.inv(lc_g)
    work = dict(f.terms)
    quot: dict[Exps, int] = {}
    while work:
        m = max(work, key=GREVLEX.key)
        c = work[m]
        if not exps_divides(lt_g, m):
            raise ArithmeticError("division not exact")
        shift = exps_sub(m, lt_g)
        factor = (c * inv) % f.p
        quot[shift] = factor
        for e2, c2 in g.terms:
            e = exps_add(e2, shift)
            v = (work.get(e, 0) - factor * c2) % f.p
            if v:
                work[e] = v
            else:
                work.pop(e, None)
    return Poly.from_dict(f.p, f.nvars, quot)


def colon(a: Sequence[Poly], b: Sequence[Poly]) -> tuple[Poly, ...]:
    """Ideal quotient (a : b) = intersection over generators g of (a : g)."""
    a = normalize_gens(a)
    b = normalize_gens(b)
    if not b:
        raise ValueError("colon by the zero ideal")
    result: tuple[Poly, ...] | None = None
    for g in b:
        if g.total_degree() == 0:
            part = a  # colon by a unit
        else:
            meet = intersect(a, [g])
            part = normalize_gens([exact_divide(h, g) for h in meet])
        result = part if result is None else intersect(result, part)
    assert result is not None
    return result


def ideal_equal(a: Sequence[Poly], b: Sequence[Poly]) -> bool:
    """True iff the two generator lists present the same ideal."""
    a = normalize_gens(a)
    b = normalize_gens(b)
    gb_a = GroebnerBasis.of(a)
    gb_b = GroebnerBasis.of(b)
    return all(gb_b.contains(g) for g in a) and all(gb_a.contains(g) for g in b)

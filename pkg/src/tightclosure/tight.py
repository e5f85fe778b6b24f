"""Tight-closure engine for hypersurface rings.

Three complementary routes to (J^n)*:

* the closed form J^n + m^((n-1)e + de), valid for Fermat hypersurfaces
  under the licensing inequality p > (d-1)r - d;
* Frobenius membership certificates c*z^q in K^[q], which refute
  membership definitively at a witness q and otherwise accumulate
  bounded evidence;
* a degree-sliced linear-algebra approximation that intersects the
  kernels of z -> c*z^q over a range of q.

Membership of tight closure is never claimed proved by a finite q-scan;
verdicts are three-valued (refuted / evidence / formula-licensed).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import linalg
from .ffpoly import Exps, Poly, check_prime_power, exps_divides, frobenius_pow
from .groebner import bracket_power, normalize_gens
from .rings import GradedRing, RIdeal, hilbert_function, maximal_ideal_power

DEFAULT_TEST_ELEMENT_NOTE = (
    "default test element x0^(r-1): unit multiple of a Jacobian generator of the "
    "defining relation; assumed to be a test element (standard for hypersurfaces "
    "smooth away from the irrelevant ideal)"
)


class LicenseError(ValueError):
    """Closed-form closure requested outside its proven hypotheses."""


@dataclass(frozen=True)
class HsopIdeal:
    """m-primary ideal generated by a homogeneous system of parameters,
    all of the same degree."""

    ideal: RIdeal
    degree_e: int

    @property
    def ring(self) -> GradedRing:
        return self.ideal.ring


def validate_hsop(J: RIdeal) -> HsopIdeal:
    """Check the system-of-parameters conditions and tag the degree.

    Requires exactly dim R generators, all homogeneous of one degree, and
    finite length of R/J (m-primarity)."""
    ring = J.ring
    d = ring.dim
    if len(J.gens) != d:
        raise ValueError(f"expected {d} generators (dim R), got {len(J.gens)}")
    degs = []
    for g in J.gens:
        if not g.is_homogeneous():
            raise ValueError(f"generator {ring.poly_str(g)} is not homogeneous")
        degs.append(g.total_degree())
    if len(set(degs)) != 1:
        raise ValueError(f"generators have mixed degrees {sorted(set(degs))}")
    missing = J.m_primary_missing_var()
    if missing is not None:
        raise ValueError(
            f"not m-primary: no pure power of {missing} in the leading terms"
        )
    return HsopIdeal(J, degs[0])


@dataclass(frozen=True)
class ClosureResult:
    """Generators of a computed (J^n)* together with how they were obtained."""

    power: int
    ideal: RIdeal
    method: str  # "closed_form" | "slice_approximation"
    licensed: bool
    conjectural: bool = False


def closed_form_tight_closure(J: HsopIdeal, n: int, force: bool = False) -> ClosureResult:
    """(J^n)* = J^n + m^((n-1)e + de) on licensed Fermat rings.

    Outside the licensing inequality the formula is unproven; ``force``
    emits it anyway, tagged conjectural.  n = 0 gives the unit ideal.
    """
    if n < 0:
        raise ValueError("power must be >= 0")
    ring = J.ring
    licensed = ring.formula_licensed
    if not licensed and not force:
        if not ring.is_fermat:
            raise LicenseError("closed form applies to Fermat rings x0^r+...+xd^r only")
        r, d = ring.fermat_exponent, ring.dim
        raise LicenseError(
            f"closed form not licensed: requires p > (d-1)*r - d, "
            f"but {ring.p} <= {(d - 1) * r - d}"
        )
    if n == 0:
        return ClosureResult(0, ring.unit_ideal(), "closed_form", licensed, not licensed)
    e, d = J.degree_e, ring.dim
    power = J.ideal.power(n)
    cap = maximal_ideal_power(ring, (n - 1) * e + d * e)
    return ClosureResult(n, power.plus(cap), "closed_form", licensed, not licensed)


@dataclass(frozen=True)
class TestElement:
    poly: Poly
    note: str


def default_test_element(ring: GradedRing) -> TestElement:
    """x0^(r-1), a unit multiple of the x0-partial of the Fermat relation."""
    if not ring.is_fermat:
        raise ValueError("default test element is defined for Fermat rings")
    r = ring.fermat_exponent
    c = Poly.monomial(ring.p, ring.nvars, (r - 1,) + (0,) * (ring.nvars - 1))
    return TestElement(c, DEFAULT_TEST_ELEMENT_NOTE)


def make_test_element(ring: GradedRing, poly: Poly, note: str = "user override") -> TestElement:
    """Wrap a caller-supplied candidate; must be nonzero in R."""
    if ring.relation_gb.contains(poly):
        raise ValueError("test element must be nonzero in the ring")
    return TestElement(poly, note)


# -- Frobenius membership -------------------------------------------------


def _q_range(p: int, q_max: int) -> list[int]:
    if q_max < p:
        raise ValueError(f"q_max must be at least p = {p}")
    qs = []
    q = p
    while q <= q_max:
        qs.append(q)
        q *= p
    return qs


@lru_cache(maxsize=None)
def _neg_tail_power(ring: GradedRing, j: int) -> Poly:
    """(-tail)^j for the relation x_v^r + tail; memoised per ring."""
    split = ring.split_relation()
    assert split is not None
    _, _, tail = split
    if j == 0:
        return ring.one()
    return _neg_tail_power(ring, j - 1) * (-tail)


@dataclass(frozen=True)
class _MonomialContext:
    """Fast membership context: relation x_v^r + tail (tail free of x_v)
    and a monomial ideal generated away from x_v.

    Modulo the relation, R is free over the subring in the remaining
    variables with basis 1, x_v, ..., x_v^(r-1), and membership in the
    extension of a monomial ideal T reduces to per-term divisibility after
    rewriting x_v^r -> -tail and pruning T-divisible terms.
    """

    ring: GradedRing
    v: int
    r: int
    t_gens: tuple[Exps, ...]

    def reduce(self, w: Poly) -> Poly:
        """Canonical representative modulo (T + relation): x_v-degree < r
        and no term divisible by a T generator."""
        out: dict[Exps, int] = {}
        p = self.ring.p
        for exps, c in w.terms:
            a = exps[self.v]
            if a < self.r:
                reduced = ((exps, c),)
            else:
                base = list(exps)
                base[self.v] = a % self.r
                shifted = _neg_tail_power(self.ring, a // self.r).term_mul(tuple(base), c)
                reduced = shifted.terms
            for e, k in reduced:
                if any(exps_divides(t, e) for t in self.t_gens):
                    continue
                v2 = (out.get(e, 0) + k) % p
                if v2:
                    out[e] = v2
                else:
                    out.pop(e, None)
        return Poly.from_dict(p, self.ring.nvars, out)


def _monomial_context(K: RIdeal) -> _MonomialContext | None:
    split = K.ring.split_relation()
    if split is None:
        return None
    v, r, _ = split
    exps = []
    for g in K.gens:
        if not g.is_monomial or g.terms[0][0][v]:
            return None
        exps.append(g.terms[0][0])
    # prune generators divisible by other generators
    minimal = [
        e
        for i, e in enumerate(exps)
        if not any(j != i and exps_divides(f, e) and (f != e or j < i) for j, f in enumerate(exps))
    ]
    return _MonomialContext(K.ring, v, r, tuple(minimal))


def _bracket_ideal(K: RIdeal, q: int) -> RIdeal:
    return RIdeal.of(K.ring, bracket_power(K.gens, q))


def _member_in_bracket(w: Poly, K: RIdeal, q: int) -> bool:
    """w in K^[q] (as an ideal of R), via the monomial fast path when the
    shape allows it, otherwise through the Groebner basis."""
    bracket = _bracket_ideal(K, q)
    ctx = _monomial_context(bracket)
    if ctx is not None:
        return ctx.reduce(w).is_zero
    return bracket.contains(w)


def frobenius_certificate(z: Poly, K: RIdeal, c: TestElement, q: int) -> bool:
    """True iff c * z^q lies in K^[q] in R."""
    check_prime_power(q, K.ring.p)
    return _member_in_bracket(c.poly * frobenius_pow(z, q), K, q)


@dataclass(frozen=True)
class Certificate:
    """Outcome of a Frobenius membership scan.

    NOT_IN_TIGHT_CLOSURE carries a witness q with c*z^q outside K^[q]
    (definitive, modulo the recorded test-element assumption);
    EVIDENCE_IN means every scanned q passed;
    FROBENIUS_CLOSURE_MEMBER carries the least q with z^q in K^[q];
    EVIDENCE_NOT_IN_FROBENIUS_CLOSURE means no scanned q succeeded.
    """

    element: Poly
    verdict: str
    q_witness: int | None = None
    q_max_checked: int | None = None
    assumption: str | None = None


def certify_non_membership(z: Poly, K: RIdeal, c: TestElement, q_max: int) -> Certificate:
    """Scan q = p, p^2, ... <= q_max against the test element.

    A single failure refutes membership in the tight closure (the test
    element must witness every large q, and certificate failure at q
    propagates upward); passing every scanned q is evidence only."""
    for q in _q_range(K.ring.p, q_max):
        if not frobenius_certificate(z, K, c, q):
            return Certificate(z, "NOT_IN_TIGHT_CLOSURE", q_witness=q, assumption=c.note)
    return Certificate(z, "EVIDENCE_IN", q_max_checked=q_max, assumption=c.note)


def frobenius_closure_member(z: Poly, K: RIdeal, q_max: int) -> Certificate:
    """Least q <= q_max with z^q in K^[q], if any (no multiplier)."""
    for q in _q_range(K.ring.p, q_max):
        if _member_in_bracket(frobenius_pow(z, q), K, q):
            return Certificate(z, "FROBENIUS_CLOSURE_MEMBER", q_witness=q)
    return Certificate(z, "EVIDENCE_NOT_IN_FROBENIUS_CLOSURE", q_max_checked=q_max)


# -- degree-sliced approximation ------------------------------------------


@dataclass(frozen=True)
class SliceResult:
    """Basis of {z in R_t : c z^q in K^[q] for all scanned q}.

    Over-approximates the degree-t slice of K* (equality in the limit for
    a genuine test element); dims_by_q records the non-increasing kernel
    dimensions as q grows."""

    degree: int
    basis: tuple[Poly, ...]
    dims_by_q: tuple[tuple[int, int], ...]


def tight_closure_degree_slice(K: RIdeal, t: int, c: TestElement, q_max: int) -> SliceResult:
    """Intersect the kernels of the F_p-linear maps z -> nf(c z^q) on R_t.

    In characteristic p the map is additive and scalar-compatible, so the
    passing set is a subspace; its matrix over the standard monomial basis
    of R_t is reduced exactly over F_p with deterministic pivoting."""
    if t < 0:
        raise ValueError("degree must be >= 0")
    ring = K.ring
    basis_exps = ring.weight_basis(t)
    nz = len(basis_exps)
    if nz == 0:
        return SliceResult(t, (), tuple((q, 0) for q in _q_range(ring.p, q_max)))
    rows: list[list[int]] = []
    dims = []
    for q in _q_range(ring.p, q_max):
        bracket = _bracket_ideal(K, q)
        ctx = _monomial_context(bracket)
        images = []
        for exps in basis_exps:
            z = Poly.monomial(ring.p, ring.nvars, exps)
            w = c.poly * frobenius_pow(z, q)
            if ctx is not None:
                images.append(ctx.reduce(w))
            else:
                images.append(bracket.gb.normal_form(w))
        cols = sorted({e for img in images for e, _ in img.terms})
        col_index = {e: i for i, e in enumerate(cols)}
        for row_mono in cols:
            rows.append([0] * nz)
        base = len(rows) - len(cols)
        for zi, img in enumerate(images):
            for e, coeff in img.terms:
                rows[base + col_index[e]][zi] = coeff
        kernel = linalg.nullspace(rows, nz, ring.p)
        dims.append((q, len(kernel)))
    kernel = linalg.nullspace(rows, nz, ring.p)
    # canonical basis polynomials from the canonical kernel vectors
    polys = []
    for v in kernel:
        coeffs = {basis_exps[i]: x for i, x in enumerate(v) if x}
        polys.append(Poly.from_dict(ring.p, ring.nvars, coeffs))
    return SliceResult(t, tuple(polys), tuple(dims))


def slice_matches_ideal_dim(K_slice: SliceResult, ideal: RIdeal) -> bool:
    """Compare the slice dimension with dim (ideal)_t inside R_t."""
    t = K_slice.degree
    ring = ideal.ring
    ideal_dim = ring.graded_dim(t) - hilbert_function(ideal, t)
    return len(K_slice.basis) == ideal_dim

"""Graded quotient rings R = F_p[x0..xd]/(f) and their ideals.

Ideals of R are represented by ambient lifts with the defining relation
always adjoined before any Groebner computation, so one engine serves the
polynomial ring and the quotient.  Hilbert functions count standard
monomials of the leading-term staircase; lengths, socle degrees and the
resolution-twist inference are built on top of them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .ffpoly import Exps, Poly, PrimeField, exps_divides, parse_poly, poly_to_str
from . import groebner
from .groebner import GroebnerBasis


@dataclass(frozen=True)
class GradedRing:
    """F_p[vars]/(relation), standard-graded with a uniform variable degree.

    relation = None gives the plain polynomial ring (used for socle and
    twist computations in parameter subrings).  ``fermat_exponent`` is set
    when the relation is x0^r + ... + xd^r; the closed-form tight-closure
    operations are gated on it.
    """

    field: PrimeField
    var_names: tuple[str, ...]
    relation: Poly | None
    var_degree: int = 1
    fermat_exponent: int | None = None

    def __post_init__(self):
        if self.var_degree < 1:
            raise ValueError("variable degree must be positive")
        if self.relation is not None:
            if self.relation.is_zero:
                raise ValueError("defining relation must be nonzero")
            if not self.relation.is_homogeneous():
                raise ValueError("defining relation must be homogeneous")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.var_names)

    @property
    def dim(self) -> int:
        """Krull dimension: one less than the variable count for a
        hypersurface, the variable count for a polynomial ring."""
        return self.nvars - (1 if self.relation is not None else 0)

    @property
    def is_fermat(self) -> bool:
        return self.fermat_exponent is not None

    @property
    def formula_licensed(self) -> bool:
        """True when p > (d-1)*r - d for the Fermat relation x0^r+...+xd^r,
        the hypothesis under which the closed-form closure applies."""
        if not self.is_fermat:
            return False
        r, d = self.fermat_exponent, self.dim
        return self.p > (d - 1) * r - d

    # -- construction of elements and ideals -----------------------------

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self.var_names, self.field)

    def poly_str(self, poly: Poly) -> str:
        return poly_to_str(poly, self.var_names)

    def zero(self) -> Poly:
        return Poly.zero(self.p, self.nvars)

    def one(self) -> Poly:
        return Poly.const(self.p, self.nvars, 1)

    def variable(self, i: int) -> Poly:
        return Poly.variable(self.p, self.nvars, i)

    def ideal(self, gens: Iterable[Poly | str]) -> "RIdeal":
        polys = [self.parse(g) if isinstance(g, str) else g for g in gens]
        return RIdeal.of(self, polys)

    def unit_ideal(self) -> "RIdeal":
        return RIdeal.of(self, [self.one()])

    def zero_ideal(self) -> "RIdeal":
        return RIdeal.of(self, [])

    @cached_property
    def relation_gb(self) -> GroebnerBasis:
        if self.relation is None:
            return GroebnerBasis(())
        return GroebnerBasis((self.relation.monic(),))

    def graded_dim(self, t: int) -> int:
        """Vector-space dimension of R_t."""
        return _staircase_count(self.relation_gb.leading_exps(), self.nvars, t, self.var_degree)

    def weight_basis(self, w: int) -> tuple[Exps, ...]:
        """Standard monomials of exponent weight w (graded degree w*var_degree)."""
        return _staircase_monomials(self.relation_gb.leading_exps(), self.nvars, w)

    def split_relation(self) -> tuple[int, int, Poly] | None:
        """Decompose the relation as x_v^r + tail with tail free of x_v.

        Returns (v, r, tail) when the leading term is a pure power of one
        variable that appears nowhere else in the relation; this shape
        admits fast membership tests for ideals generated away from x_v.
        """
        if self.relation is None:
            return None
        rel = self.relation.monic()
        lt = rel.leading_exps()
        support = [i for i, e in enumerate(lt) if e]
        if len(support) != 1:
            return None
        v = support[0]
        r = lt[v]
        tail = rel - Poly.monomial(self.p, self.nvars, lt)
        if any(e[v] for e, _ in tail.terms):
            return None
        return (v, r, tail)


def fermat_ring(p: int, r: int, d: int) -> GradedRing:
    """The hypersurface F_p[x0..xd]/(x0^r + ... + xd^r).

    Requires p prime, p not dividing r, and r, d >= 2.
    """
    field = PrimeField(p)
    if r < 2 or d < 2:
        raise ValueError("fermat ring requires r >= 2 and d >= 2")
    if r % p == 0:
        raise ValueError(f"p divides r: {p} | {r}")
    names = tuple(f"x{i}" for i in range(d + 1))
    coeffs = {}
    for i in range(d + 1):
        exps = tuple(r if j == i else 0 for j in range(d + 1))
        coeffs[exps] = 1
    relation = Poly.from_dict(p, d + 1, coeffs)
    return GradedRing(field, names, relation, 1, r)


def general_ring(p: int, var_names: Sequence[str], relation: str | Poly) -> GradedRing:
    """Hypersurface ring with an arbitrary homogeneous relation."""
    field = PrimeField(p)
    names = tuple(var_names)
    rel = parse_poly(relation, names, field) if isinstance(relation, str) else relation
    return GradedRing(field, names, rel, 1, None)


def polynomial_ring(p: int, var_names: Sequence[str], var_degree: int = 1) -> GradedRing:
    """Plain polynomial ring, all variables of the same degree."""
    return GradedRing(PrimeField(p), tuple(var_names), None, var_degree, None)


@dataclass(frozen=True)
class RIdeal:
    """Ideal of R given by ambient generator lifts (relation implicit)."""

    ring: GradedRing
    gens: tuple[Poly, ...]

    @staticmethod
    def of(ring: GradedRing, gens: Sequence[Poly]) -> "RIdeal":
        for g in gens:
            if g.nvars != ring.nvars or g.p != ring.p:
                raise ValueError("generator not in the ring's ambient polynomial ring")
        return RIdeal(ring, groebner.normalize_gens(gens))

    @property
    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    @cached_property
    def gb(self) -> GroebnerBasis:
        gens = list(self.gens)
        if self.ring.relation is not None:
            gens.append(self.ring.relation)
        return GroebnerBasis.of(gens)

    def contains(self, f: Poly) -> bool:
        return self.gb.contains(f)

    def contains_ideal(self, other: "RIdeal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "RIdeal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    @property
    def is_unit(self) -> bool:
        return self.gb.is_unit_ideal

    # -- ideal arithmetic (results are again ideals of R) ----------------

    def plus(self, other: "RIdeal") -> "RIdeal":
        return RIdeal.of(self.ring, groebner.ideal_sum(self.gens, other.gens))

    def times(self, other: "RIdeal") -> "RIdeal":
        return RIdeal.of(self.ring, groebner.ideal_product(self.gens, other.gens))

    def power(self, n: int) -> "RIdeal":
        if n == 0:
            return self.ring.unit_ideal()
        return RIdeal.of(self.ring, groebner.ideal_power(self.gens, n))

    def bracket(self, q: int) -> "RIdeal":
        return RIdeal.of(self.ring, groebner.bracket_power(self.gens, q))

    def intersection(self, other: "RIdeal") -> "RIdeal":
        lifted_a = self._with_relation()
        lifted_b = other._with_relation()
        return RIdeal.of(self.ring, groebner.intersect(lifted_a, lifted_b))

    def colon_by(self, other: "RIdeal") -> "RIdeal":
        return RIdeal.of(self.ring, groebner.colon(self._with_relation(), other.gens))

    def _with_relation(self) -> tuple[Poly, ...]:
        if self.ring.relation is None:
            return self.gens
        return groebner.ideal_sum(self.gens, [self.ring.relation])

    # -- finite-length structure -----------------------------------------

    def m_primary_missing_var(self) -> str | None:
        """Name of a variable with no pure-power leading term, or None.

        A homogeneous ideal is m-primary exactly when every variable has
        some pure power among the staircase generators.
        """
        lts = self.gb.leading_exps()
        for i, name in enumerate(self.ring.var_names):
            if not any(all(e == 0 for j, e in enumerate(lt) if j != i) for lt in lts):
                return name
        return None

    @property
    def is_m_primary(self) -> bool:
        return self.m_primary_missing_var() is None


def maximal_ideal_power(ring: GradedRing, n: int) -> RIdeal:
    """The n-th power of the maximal homogeneous ideal: all monomials of
    exponent weight n.  n = 0 gives the unit ideal."""
    if n < 0:
        raise ValueError("power must be >= 0")
    gens = [
        Poly.monomial(ring.p, ring.nvars, exps)
        for exps in _compositions(n, ring.nvars)
    ]
    return RIdeal.of(ring, gens)


def hilbert_function(K: RIdeal, t: int) -> int:
    """dim over F_p of (R/K)_t, counting standard monomials of degree t."""
    if not K.is_homogeneous:
        raise ValueError("Hilbert function requires a homogeneous ideal")
    if t < 0:
        return 0
    e = K.ring.var_degree
    if t % e:
        return 0
    return _staircase_count(K.gb.leading_exps(), K.ring.nvars, t, e)


@dataclass(frozen=True)
class HilbertTable:
    """Finitely supported Hilbert function of an m-primary quotient."""

    ideal: RIdeal
    values: tuple[tuple[int, int], ...]  # (graded degree, dimension)
    total_length: int


def hilbert_table(K: RIdeal) -> HilbertTable:
    """Tabulate dim (R/K)_t until the function vanishes.

    Standard monomials of an m-primary leading-term ideal are closed under
    taking divisors, so their degrees form an interval starting at 0 and
    the first zero row ends the table; see the module notes in README.
    """
    missing = K.m_primary_missing_var()
    if missing is not None:
        raise ValueError(f"not m-primary: no pure power of {missing} in the leading terms")
    lts = K.gb.leading_exps()
    e = K.ring.var_degree
    rows = []
    total = 0
    w = 0
    while True:
        dim = _staircase_count(lts, K.ring.nvars, w * e, e)
        if dim == 0:
            break
        rows.append((w * e, dim))
        total += dim
        w += 1
    return HilbertTable(K, tuple(rows), total)


def length_of_quotient(K: RIdeal) -> int:
    """Length of R/K over F_p (requires K m-primary)."""
    return hilbert_table(K).total_length


def socle_degrees(K: RIdeal) -> tuple[int, ...]:
    """Graded degrees (with multiplicity) of the socle of R/K.

    The socle (K : m)/K has dimension dim(K:m)_t - dim K_t in degree t,
    which the two quotient Hilbert functions compute.  The multiset size
    is the Cohen-Macaulay type of R/K.
    """
    if not K.is_homogeneous:
        raise ValueError("socle degrees require a homogeneous ideal")
    missing = K.m_primary_missing_var()
    if missing is not None:
        raise ValueError(f"not m-primary: no pure power of {missing} in the leading terms")
    ring = K.ring
    m_gens = [ring.variable(i) for i in range(ring.nvars)]
    saturated = K.colon_by(RIdeal.of(ring, m_gens))
    e = ring.var_degree
    out: list[int] = []
    w = 0
    while True:
        dim_k = hilbert_function(K, w * e)
        if dim_k == 0:
            break
        mult = dim_k - hilbert_function(saturated, w * e)
        out.extend([w * e] * mult)
        w += 1
    return tuple(out)


def infer_last_twists(K: RIdeal, d: int, e: int) -> tuple[int, ...]:
    """Final twists of a minimal free resolution read off the socle.

    For an Artinian quotient of a polynomial ring in d variables of degree
    e, the last free module is a sum of S(-b_i) with b_i = (socle degree)
    + d*e.
    """
    return tuple(sorted(t + d * e for t in socle_degrees(K)))


# -- monomial staircase helpers -------------------------------------------


def _compositions(total: int, parts: int) -> Iterable[Exps]:
    """All tuples of ``parts`` non-negative ints summing to ``total``,
    in a fixed deterministic order."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


@lru_cache(maxsize=None)
def _staircase_cached(lts: tuple[Exps, ...], nvars: int, w: int) -> tuple[Exps, ...]:
    return tuple(
        exps
        for exps in _compositions(w, nvars)
        if not any(exps_divides(lt, exps) for lt in lts)
    )


def _staircase_monomials(lts: tuple[Exps, ...], nvars: int, w: int) -> tuple[Exps, ...]:
    return _staircase_cached(lts, nvars, w)


def _staircase_count(lts: tuple[Exps, ...], nvars: int, t: int, var_degree: int) -> int:
    if t < 0 or t % var_degree:
        return 0
    return len(_staircase_cached(lts, nvars, t // var_degree))

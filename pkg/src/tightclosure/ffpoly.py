"""Exact multivariate polynomial arithmetic over prime fields F_p.

A polynomial is an immutable list of (exponent tuple, coefficient) terms,
sorted descending in the graded reverse lexicographic order.  Coefficients
are canonical integers in [0, p); zero coefficients are never stored, and
the zero polynomial has an empty term list.  This canonical form makes
equality, hashing and printing reliable, which everything downstream
(Groebner bases, ideal identities, report snapshots) depends on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

Exps = tuple[int, ...]
Term = tuple[Exps, int]


class PolyParseError(ValueError):
    """Malformed polynomial text; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


def is_prime(n: int) -> bool:
    """Trial-division primality test; inputs here are desk-scale."""
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p.  Scalars are canonical ints in [0, p)."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a prime field")
        return pow(a, self.p - 2, self.p)


def grevlex_key(exps: Exps) -> tuple:
    """Sort key under which max() picks the grevlex-largest monomial.

    Higher total degree wins; ties are broken at the last position where
    the exponents differ, smaller exponent winning.
    """
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class MonomialOrder:
    """Graded reverse lexicographic order, x0 > x1 > ... > xd.

    ``n_elim`` leading variables form an elimination block compared first
    (used for tag variables in intersection computations); the block never
    appears in user-facing polynomials.
    """

    n_elim: int = 0

    def key(self, exps: Exps) -> tuple:
        if self.n_elim:
            return (grevlex_key(exps[: self.n_elim]), grevlex_key(exps[self.n_elim :]))
        return grevlex_key(exps)


GREVLEX = MonomialOrder()


def compare_monomials(a: Exps, b: Exps, order: MonomialOrder = GREVLEX) -> int:
    """Return -1, 0 or 1 as a <, =, > b in the given order."""
    if len(a) != len(b):
        raise ValueError(f"exponent length mismatch: {len(a)} vs {len(b)}")
    ka, kb = order.key(a), order.key(b)
    if ka < kb:
        return -1
    return 1 if ka > kb else 0


def exps_add(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def exps_sub(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


def exps_lcm(a: Exps, b: Exps) -> Exps:
    return tuple(max(x, y) for x, y in zip(a, b))


def exps_divides(a: Exps, b: Exps) -> bool:
    """True iff the monomial with exponents a divides the one with b."""
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Poly:
    """Immutable polynomial over F_p in ``nvars`` variables."""

    p: int
    nvars: int
    terms: tuple[Term, ...]

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_dict(p: int, nvars: int, coeffs: Mapping[Exps, int]) -> "Poly":
        terms = []
        for exps, c in coeffs.items():
            c %= p
            if c:
                terms.append((exps, c))
        terms.sort(key=lambda t: grevlex_key(t[0]), reverse=True)
        return Poly(p, nvars, tuple(terms))

    @staticmethod
    def zero(p: int, nvars: int) -> "Poly":
        return Poly(p, nvars, ())

    @staticmethod
    def const(p: int, nvars: int, value: int) -> "Poly":
        value %= p
        if not value:
            return Poly.zero(p, nvars)
        return Poly(p, nvars, (((0,) * nvars, value),))

    @staticmethod
    def variable(p: int, nvars: int, index: int) -> "Poly":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return Poly(p, nvars, ((exps, 1),))

    @staticmethod
    def monomial(p: int, nvars: int, exps: Exps, coeff: int = 1) -> "Poly":
        if len(exps) != nvars:
            raise ValueError("exponent length does not match variable count")
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent")
        coeff %= p
        if not coeff:
            return Poly.zero(p, nvars)
        return Poly(p, nvars, ((tuple(exps), coeff),))

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        """Maximal term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        degs = {sum(e) for e, _ in self.terms}
        return len(degs) == 1

    def leading_exps(self) -> Exps:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0][0]

    def leading_coeff(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0][1]

    def _check_compatible(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"mismatched variable count: {self.nvars} vs {other.nvars}")
        if self.p != other.p:
            raise ValueError(f"mismatched characteristic: {self.p} vs {other.p}")

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        self._check_compatible(other)
        out = dict(self.terms)
        for exps, c in other.terms:
            v = (out.get(exps, 0) + c) % self.p
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return Poly.from_dict(self.p, self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.p, self.nvars, tuple((e, self.p - c) for e, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check_compatible(other)
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = exps_add(e1, e2)
                out[e] = (out.get(e, 0) + c1 * c2) % self.p
        return Poly.from_dict(self.p, self.nvars, out)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.p, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scaled(self, c: int) -> "Poly":
        c %= self.p
        if not c:
            return Poly.zero(self.p, self.nvars)
        return Poly(self.p, self.nvars, tuple((e, (k * c) % self.p) for e, k in self.terms))

    def term_mul(self, exps: Exps, coeff: int = 1) -> "Poly":
        """Multiply by the single term coeff * x^exps."""
        coeff %= self.p
        if not coeff:
            return Poly.zero(self.p, self.nvars)
        return Poly(
            self.p,
            self.nvars,
            tuple((exps_add(e, exps), (c * coeff) % self.p) for e, c in self.terms),
        )

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self.scaled(PrimeField(self.p).inv(lc))

    def __str__(self) -> str:
        return poly_to_str(self, None)


def frobenius_pow(a: Poly, q: int) -> Poly:
    """Raise to the q-th power for q a power of the characteristic.

    Term-wise in characteristic p: exponents scale by q and coefficients
    are raised to the q-th power.  Equals repeated multiplication.
    """
    check_prime_power(q, a.p)
    terms = tuple(
        (tuple(e * q for e in exps), pow(c, q, a.p)) for exps, c in a.terms
    )
    return Poly(a.p, a.nvars, terms)


def check_prime_power(q: int, p: int) -> int:
    """Verify q = p^k (k >= 0) and return k."""
    if q < 1:
        raise ValueError(f"{q} is not a power of {p}")
    k = 0
    while q > 1:
        if q % p:
            raise ValueError(f"{q} is not a power of {p}")
        q //= p
        k += 1
    return k


# -- text format ---------------------------------------------------------
#
# poly  := ['+'|'-'] term (('+'|'-') term)*
# term  := factor ('*'? factor)*
# factor:= uint | var ('^' uint)? | '(' poly ')' ('^' uint)?
# var   := [A-Za-z][A-Za-z0-9_]*
#
# Whitespace is insignificant; '*' between a coefficient and a variable may
# be omitted.  Integer literals are reduced mod p.


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        pos = self.pos
        text = self.text
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return ("eof", "", pos)
        ch = text[pos]
        if ch.isdigit():
            end = pos
            while end < len(text) and text[end].isdigit():
                end += 1
            return ("int", text[pos:end], pos)
        if ch.isalpha():
            end = pos
            while end < len(text) and (text[end].isalnum() or text[end] == "_"):
                end += 1
            return ("name", text[pos:end], pos)
        if ch in "+-*^()":
            return (ch, ch, pos)
        raise PolyParseError(f"unexpected character {ch!r}", pos)

    def take(self) -> tuple[str, str, int]:
        kind, value, pos = self.peek()
        self.pos = pos + len(value) if kind != "eof" else pos
        return (kind, value, pos)


class _Parser:
    def __init__(self, text: str, var_names: Sequence[str], field: PrimeField):
        self.toks = _Tokenizer(text)
        self.field = field
        self.nvars = len(var_names)
        self.index = {name: i for i, name in enumerate(var_names)}

    def parse(self) -> Poly:
        poly = self._sum()
        kind, value, pos = self.toks.peek()
        if kind != "eof":
            raise PolyParseError(f"unexpected {value!r}", pos)
        return poly

    def _sum(self) -> Poly:
        sign = 1
        kind, _, _ = self.toks.peek()
        if kind in "+-":
            self.toks.take()
            sign = -1 if kind == "-" else 1
        poly = self._product().scaled(sign % self.field.p)
        while True:
            kind, _, _ = self.toks.peek()
            if kind not in "+-":
                return poly
            self.toks.take()
            rhs = self._product()
            poly = poly + rhs if kind == "+" else poly - rhs

    def _product(self) -> Poly:
        poly = self._factor()
        while True:
            kind, _, _ = self.toks.peek()
            if kind == "*":
                self.toks.take()
                poly = poly * self._factor()
            elif kind in ("int", "name", "("):
                poly = poly * self._factor()
            else:
                return poly

    def _factor(self) -> Poly:
        kind, value, pos = self.toks.take()
        if kind == "int":
            return Poly.const(self.field.p, self.nvars, int(value))
        if kind == "name":
            if value not in self.index:
                raise PolyParseError(f"unknown variable {value!r}", pos)
            base = Poly.variable(self.field.p, self.nvars, self.index[value])
            return base ** self._optional_exponent()
        if kind == "(":
            inner = self._sum()
            kind2, _, pos2 = self.toks.take()
            if kind2 != ")":
                raise PolyParseError("expected ')'", pos2)
            return inner ** self._optional_exponent()
        raise PolyParseError(f"expected a term, found {value!r}" if value else "unexpected end of input", pos)

    def _optional_exponent(self) -> int:
        kind, _, _ = self.toks.peek()
        if kind != "^":
            return 1
        self.toks.take()
        kind, value, pos = self.toks.take()
        if kind == "-":
            raise PolyParseError("negative exponent", pos)
        if kind != "int":
            raise PolyParseError("expected an integer exponent", pos)
        return int(value)


def parse_poly(text: str, var_names: Sequence[str], field: PrimeField) -> Poly:
    """Parse polynomial text over the given variables, reducing mod p."""
    return _Parser(text, var_names, field).parse()


def poly_to_str(poly: Poly, var_names: Sequence[str] | None) -> str:
    """Canonical text form; parse_poly inverts it exactly."""
    if poly.is_zero:
        return "0"
    if var_names is None:
        var_names = [f"x{i}" for i in range(poly.nvars)]
    parts = []
    for exps, coeff in poly.terms:
        factors = [f"{var_names[i]}^{e}" if e > 1 else var_names[i] for i, e in enumerate(exps) if e]
        if coeff != 1 or not factors:
            factors.insert(0, str(coeff))
        parts.append("*".join(factors))
    return " + ".join(parts)

"""Exact sparse multivariate polynomial arithmetic over the rationals.

Polynomials are immutable and hashable: a ring is an ordered tuple of
variable names, terms map exponent tuples to nonzero ``Fraction``
coefficients.  All arithmetic is exact; nothing here ever rounds.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, ParseError, RingMismatchError

Monomial = tuple  # exponent tuple, one entry per ring variable


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True iff a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomial_degree(a: Monomial) -> int:
    return sum(a)


class Polynomial:
    """A polynomial with exact rational coefficients.

    The zero polynomial has an empty term map.  Two polynomials are equal
    iff their rings and term maps coincide.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping[Monomial, Fraction] | Iterable = ()):
        ring = tuple(ring)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Monomial, Fraction] = {}
        n = len(ring)
        for mono, coeff in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise DomainError(f"monomial arity {len(mono)} != ring size {n}")
            if any(e < 0 for e in mono):
                raise DomainError("negative exponent in monomial")
            coeff = Fraction(coeff)
            if coeff:
                prev = acc.get(mono)
                if prev is None:
                    acc[mono] = coeff
                else:
                    s = prev + coeff
                    if s:
                        acc[mono] = s
                    else:
                        del acc[mono]
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", acc)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(ring: Sequence[str]) -> "Polynomial":
        return Polynomial(ring)

    @staticmethod
    def constant(ring: Sequence[str], value) -> "Polynomial":
        return Polynomial(ring, {(0,) * len(ring): Fraction(value)})

    @staticmethod
    def variable(ring: Sequence[str], index: int) -> "Polynomial":
        n = len(ring)
        if not 0 <= index < n:
            raise DomainError(f"variable index {index} out of range for ring of size {n}")
        mono = tuple(1 if i == index else 0 for i in range(n))
        return Polynomial(ring, {mono: Fraction(1)})

    @staticmethod
    def monomial(ring: Sequence[str], mono: Monomial, coeff=1) -> "Polynomial":
        return Polynomial(ring, {tuple(mono): Fraction(coeff)})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(monomial_degree(m) == 0 for m in self.terms)

    def constant_value(self) -> Fraction:
        """Coefficient of the constant monomial."""
        return self.terms.get((0,) * len(self.ring), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(monomial_degree(m) for m in self.terms)

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(m[index] for m in self.terms)

    def variables_used(self) -> set:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic ----------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"ring {self.ring} != ring {other.ring}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            s = acc.get(m, Fraction(0)) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return self._raw(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Polynomial(self.ring)
            return self._raw(self.ring, {m: k * c for m, k in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_ring(other)
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                s = acc.get(m, Fraction(0)) + c1 * c2
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        return self._raw(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative polynomial power")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    @classmethod
    def _raw(cls, ring, terms: dict) -> "Polynomial":
        """Internal: build from an already-normalized term dict."""
        p = cls.__new__(cls)
        object.__setattr__(p, "ring", ring)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    # -- calculus and evaluation ----------------------------------------

    def derive(self, index: int) -> "Polynomial":
        """Formal partial derivative with respect to the given variable."""
        n = len(self.ring)
        if not 0 <= index < n:
            raise DomainError(f"variable index {index} out of range for ring of size {n}")
        acc: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[index]
            if e:
                dm = m[:index] + (e - 1,) + m[index + 1:]
                acc[dm] = acc.get(dm, Fraction(0)) + c * e
        return Polynomial._raw(self.ring, {m: c for m, c in acc.items() if c})

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != len(self.ring):
            raise DomainError("point arity does not match ring")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def compose(self, targets: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute targets[i] for variable i.  Targets share one ring."""
        if len(targets) != len(self.ring):
            raise DomainError("substitution arity does not match ring")
        if not targets:
            raise DomainError("empty ring")
        out_ring = targets[0].ring
        result = Polynomial.zero(out_ring)
        for m, c in self.terms.items():
            term = Polynomial.constant(out_ring, c)
            for t, e in zip(targets, m):
                if e:
                    term = term * (t ** e)
            result = result + term
        return result

    def map_ring(self, new_ring: Sequence[str], var_map: Sequence[int]) -> "Polynomial":
        """Reinterpret in a larger ring: variable i becomes new_ring[var_map[i]]."""
        new_ring = tuple(new_ring)
        n = len(new_ring)
        acc = {}
        for m, c in self.terms.items():
            nm = [0] * n
            for i, e in enumerate(m):
                nm[var_map[i]] += e
            acc[tuple(nm)] = c
        return Polynomial._raw(new_ring, acc)

    # -- printing --------------------------------------------------------

    def sorted_terms(self):
        """Terms sorted degrevlex-descending for deterministic output."""
        def key(item):
            m, _ = item
            return (monomial_degree(m), tuple(-e for e in reversed(m)))
        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = _fmt_coeff(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = _fmt_coeff(abs(c)) + "*" + "*".join(factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self.ring!r}, {str(self)!r})"


def _fmt_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character at position {pos}: {text[pos:pos+10]!r}")
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    """Recursive descent over `+ - * ^`, parentheses, rational literals and
    variable names.  No implicit multiplication."""

    def __init__(self, tokens, ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = tuple(ring)
        self.index = {name: i for i, name in enumerate(self.ring)}

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def parse(self) -> Polynomial:
        p = self.expr()
        kind, val = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input at token {val!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                q = self.term()
                p = p + q if val == "+" else p - q
            else:
                return p

    def term(self) -> Polynomial:
        p = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                p = p * self.factor()
            else:
                return p

    def factor(self) -> Polynomial:
        sign = 1
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                if val == "-":
                    sign = -sign
            else:
                break
        p = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, expo = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer")
            p = p ** expo
        return p if sign > 0 else -p

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "int":
            num = val
            kind2, nxt = self.peek()
            if kind2 == "op" and nxt == "/":
                self.take()
                kind3, den = self.take()
                if kind3 != "int" or den == 0:
                    raise ParseError("malformed rational literal")
                return Polynomial.constant(self.ring, Fraction(num, den))
            return Polynomial.constant(self.ring, num)
        if kind == "name":
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r} in ring {self.ring}")
            return Polynomial.variable(self.ring, self.index[val])
        if kind == "op" and val == "(":
            p = self.expr()
            self.expect_op(")")
            return p
        raise ParseError(f"unexpected token {val!r}")


def parse_polynomial(text: str, ring: Sequence[str]) -> Polynomial:
    """Parse the canonical text syntax.  Round-trips with str() exactly."""
    return _Parser(_tokenize(text), ring).parse()


# -- gcd and squarefree machinery ------------------------------------------
#
# Multivariate gcd by primitive-part/content recursion on the last active
# variable, with subresultant-style integer gcd at the univariate base.
# Adequate for desk-scale degrees; exactness is the only requirement.


def _as_univariate(p: Polynomial, index: int) -> dict[int, Polynomial]:
    """View p as a polynomial in variable `index`; coefficients keep the ring
    (with exponent 0 in that variable)."""
    coeffs: dict[int, dict] = {}
    for m, c in p.terms.items():
        e = m[index]
        rest = m[:index] + (0,) + m[index + 1:]
        coeffs.setdefault(e, {})[rest] = c
    return {e: Polynomial._raw(p.ring, t) for e, t in coeffs.items()}


def _from_univariate(ring, index: int, coeffs: dict[int, Polynomial]) -> Polynomial:
    acc = {}
    for e, q in coeffs.items():
        for m, c in q.terms.items():
            nm = m[:index] + (e,) + m[index + 1:]
            acc[nm] = c
    return Polynomial._raw(tuple(ring), acc)


def leading_coeff_in(p: Polynomial, index: int) -> Polynomial:
    d = p.degree_in(index)
    uni = _as_univariate(p, index)
    return uni.get(d, Polynomial.zero(p.ring))


def pseudo_rem(a: Polynomial, b: Polynomial, index: int) -> Polynomial:
    """Pseudo-remainder of a by b in variable `index` (b nonzero there)."""
    db = b.degree_in(index)
    lb = leading_coeff_in(b, index)
    r = a
    while not r.is_zero() and r.degree_in(index) >= db:
        dr = r.degree_in(index)
        lr = leading_coeff_in(r, index)
        shift = Polynomial.monomial(a.ring, tuple(dr - db if i == index else 0
                                                  for i in range(len(a.ring))))
        r = r * lb - b * lr * shift
    return r


def exact_divide(a: Polynomial, b: Polynomial) -> Polynomial:
    """Quotient a/b when the division is exact; DomainError otherwise."""
    if b.is_zero():
        raise DomainError("division by zero polynomial")
    if a.is_zero():
        return a
    a._check_ring(b)
    # divide leading terms under degrevlex until nothing is left
    def drl_key(m):
        return (monomial_degree(m), tuple(-e for e in reversed(m)))
    bm, bc = max(b.terms.items(), key=lambda t: drl_key(t[0]))
    q_terms: dict[Monomial, Fraction] = {}
    r = a
    while not r.is_zero():
        rm, rc = max(r.terms.items(), key=lambda t: drl_key(t[0]))
        if not monomial_divides(bm, rm):
            raise DomainError("inexact polynomial division")
        qm = monomial_div(rm, bm)
        qc = rc / bc
        q_terms[qm] = q_terms.get(qm, Fraction(0)) + qc
        r = r - b * Polynomial.monomial(a.ring, qm, qc)
    return Polynomial(a.ring, q_terms)


def _content_wrt(p: Polynomial, index: int) -> Polynomial:
    """gcd of the coefficients of p viewed in variable `index`."""
    uni = _as_univariate(p, index)
    cont = Polynomial.zero(p.ring)
    for e in sorted(uni):
        cont = gcd(cont, uni[e])
        if cont.is_constant() and not cont.is_zero():
            break
    return cont


def _int_content(p: Polynomial) -> Fraction:
    """Positive rational c with p/c integer-coefficient and primitive."""
    from math import gcd as igcd
    num = 0
    den = 1
    for c in p.terms.values():
        num = igcd(num, abs(c.numerator))
        den = den * c.denominator // igcd(den, c.denominator)
    if num == 0:
        return Fraction(1)
    return Fraction(num, den)


def normalize_leading(p: Polynomial) -> Polynomial:
    """Scale so the degrevlex leading coefficient is 1."""
    if p.is_zero():
        return p
    def drl_key(m):
        return (monomial_degree(m), tuple(-e for e in reversed(m)))
    _, lc = max(p.terms.items(), key=lambda t: drl_key(t[0]))
    return p * (Fraction(1) / lc)


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """A gcd of a and b, normalized to leading coefficient 1 (degrevlex).

    gcd(a, 0) is normalized a; gcd(0, 0) = 0.
    """
    if a.ring != b.ring:
        raise RingMismatchError(f"ring {a.ring} != ring {b.ring}")
    if a.is_zero():
        return normalize_leading(b)
    if b.is_zero():
        return normalize_leading(a)
    used = a.variables_used() | b.variables_used()
    if not used:
        return Polynomial.constant(a.ring, 1)
    index = max(used)
    if a.degree_in(index) == 0 or b.degree_in(index) == 0:
        # one argument is free of the main variable: gcd divides contents
        ca = _content_wrt(a, index) if a.degree_in(index) > 0 else a
        cb = _content_wrt(b, index) if b.degree_in(index) > 0 else b
        return gcd(ca, cb)
    ca = _content_wrt(a, index)
    cb = _content_wrt(b, index)
    pa = exact_divide(a, ca)
    pb = exact_divide(b, cb)
    # primitive PRS in the main variable
    f, g = pa, pb
    if f.degree_in(index) < g.degree_in(index):
        f, g = g, f
    while True:
        r = pseudo_rem(f, g, index)
        if r.is_zero():
            if g.degree_in(index) > 0:
                g = exact_divide(g, _content_wrt(g, index))
            break
        if r.degree_in(index) == 0:
            g = Polynomial.constant(a.ring, 1)
            break
        r = exact_divide(r, _content_wrt(r, index))
        r = r * (Fraction(1) / _int_content(r))
        f, g = g, r
    result = gcd(ca, cb) * g
    return normalize_leading(result)


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors of p, leading coeff 1.

    Computed as p / gcd(p, dp/dx_1, ..., dp/dx_n); valid over Q (char 0).
    """
    if p.is_zero():
        raise DomainError("squarefree_part of the zero polynomial")
    if p.is_constant():
        return Polynomial.constant(p.ring, 1)
    g = p
    for i in sorted(p.variables_used()):
        g = gcd(g, p.derive(i))
        if g.is_constant():
            break
    if g.is_constant():
        return normalize_leading(p)
    return normalize_leading(exact_divide(p, g))

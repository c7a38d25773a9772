"""Truncated bivariate power series in leaf coordinates (t1, t2).

A Jet2 stores exact coefficients up to a total order, plus an optional
producer: a pure function that re-emits the same germ truncated to any
higher order.  Arithmetic composes producers, so every derived jet can be
regenerated on demand; that is what stabilization loops rely on.

Jets that are exact polynomials (terminating series) carry the polynomial
on their producer; arithmetic preserves the tag, and germ-level code uses
it to take truncation-free paths.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Optional

from .errors import DomainError, InconclusiveError
from .poly import Polynomial

LEAF_RING = ("t1", "t2")


def cached_producer(fn: Callable[[int], "Jet2"]) -> Callable[[int], "Jet2"]:
    cache: dict[int, Jet2] = {}

    def produce(order: int) -> "Jet2":
        hit = cache.get(order)
        if hit is None:
            hit = fn(order)
            cache[order] = hit
        return hit

    return produce


def _poly_producer(p: Polynomial):
    def produce(n: int) -> "Jet2":
        return Jet2.from_polynomial(p, n)

    produce.exact_polynomial = p
    return produce


class Jet2:
    __slots__ = ("order", "coeffs", "producer")

    def __init__(self, order: int, coeffs: Mapping, producer: Optional[Callable] = None):
        if order < 0:
            raise DomainError("jet order must be >= 0")
        clean = {}
        for (a, b), c in coeffs.items():
            if a < 0 or b < 0:
                raise DomainError("negative exponent in jet")
            if a + b > order:
                continue
            c = Fraction(c)
            if c:
                clean[(a, b)] = c
        self.order = order
        self.coeffs = clean
        self.producer = producer

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_polynomial(p: Polynomial, order: int) -> "Jet2":
        """Exact jet of a two-variable polynomial; regenerable to any order."""
        if len(p.ring) != 2:
            raise DomainError("from_polynomial expects a two-variable polynomial")
        return Jet2(order, dict(p.terms), producer=_poly_producer(p))

    @staticmethod
    def zero(order: int) -> "Jet2":
        return Jet2.from_polynomial(Polynomial.zero(LEAF_RING), order)

    @staticmethod
    def constant(value, order: int) -> "Jet2":
        return Jet2.from_polynomial(Polynomial.constant(LEAF_RING, value), order)

    @staticmethod
    def variable(index: int, order: int) -> "Jet2":
        return Jet2.from_polynomial(Polynomial.variable(LEAF_RING, index), order)

    # -- queries ----------------------------------------------------------

    def coefficient(self, a: int, b: int) -> Fraction:
        return self.coeffs.get((a, b), Fraction(0))

    def value_at_origin(self) -> Fraction:
        return self.coefficient(0, 0)

    def is_zero(self) -> bool:
        """Zero as far as knowable: exact-polynomial jets answer for the
        germ, others for the stored truncation."""
        p = self.as_exact_polynomial()
        if p is not None:
            return p.is_zero()
        return not self.coeffs

    def is_zero_up_to(self, order: int) -> bool:
        return all(a + b > order for (a, b) in self.coeffs)

    def is_unit(self) -> bool:
        return bool(self.coefficient(0, 0))

    def vanishing_order(self):
        """Least total degree with a nonzero coefficient; None for the zero jet."""
        if not self.coeffs:
            return None
        return min(a + b for (a, b) in self.coeffs)

    def as_exact_polynomial(self) -> Optional[Polynomial]:
        """The underlying polynomial when this jet is a terminating series."""
        return getattr(self.producer, "exact_polynomial", None)

    def to_polynomial(self, ring=LEAF_RING) -> Polynomial:
        """The truncation as a polynomial (forgets the producer)."""
        return Polynomial(ring, dict(self.coeffs))

    # -- regeneration -----------------------------------------------------

    def truncate(self, order: int) -> "Jet2":
        if order >= self.order:
            return self
        return Jet2(order, self.coeffs, self.producer)

    def regenerate(self, order: int) -> "Jet2":
        if order <= self.order:
            return self.truncate(order)
        if self.producer is None:
            raise InconclusiveError(
                f"jet stored at order {self.order} has no producer; cannot reach order {order}")
        out = self.producer(order)
        if out.order < order:
            raise InconclusiveError("producer emitted a lower order than requested")
        return out.truncate(order)

    def can_regenerate(self) -> bool:
        return self.producer is not None

    # -- arithmetic ---------------------------------------------------------

    def _exact_with(self, other: "Jet2"):
        pa = self.as_exact_polynomial()
        pb = other.as_exact_polynomial()
        if pa is not None and pb is not None:
            return pa, pb
        return None

    def _combine_producer(self, other: "Jet2", op):
        if self.producer is None or other.producer is None:
            return None
        a, b = self, other

        def produce(n: int) -> Jet2:
            return op(a.regenerate(n), b.regenerate(n))

        return cached_producer(produce)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Jet2.constant(other, self.order)
        if not isinstance(other, Jet2):
            return NotImplemented
        order = min(self.order, other.order)
        exact = self._exact_with(other)
        if exact is not None:
            return Jet2.from_polynomial(exact[0] + exact[1], order)
        acc = dict(self.truncate(order).coeffs)
        for k, c in other.coeffs.items():
            if k[0] + k[1] > order:
                continue
            s = acc.get(k, Fraction(0)) + c
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return Jet2(order, acc, self._combine_producer(other, lambda x, y: x + y))

    __radd__ = __add__

    def __neg__(self):
        p = self.as_exact_polynomial()
        if p is not None:
            return Jet2.from_polynomial(-p, self.order)
        prod = None
        if self.producer is not None:
            prod = cached_producer(lambda n: -self.regenerate(n))
        return Jet2(self.order, {k: -c for k, c in self.coeffs.items()}, prod)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Jet2.constant(other, self.order)
        if not isinstance(other, Jet2):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Jet2.constant(other, self.order)
        if not isinstance(other, Jet2):
            return NotImplemented
        order = min(self.order, other.order)
        exact = self._exact_with(other)
        if exact is not None:
            return Jet2.from_polynomial(exact[0] * exact[1], order)
        acc: dict = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                a, b = a1 + a2, b1 + b2
                if a + b > order:
                    continue
                k = (a, b)
                s = acc.get(k, Fraction(0)) + c1 * c2
                if s:
                    acc[k] = s
                else:
                    acc.pop(k, None)
        return Jet2(order, acc, self._combine_producer(other, lambda x, y: x * y))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative jet power")
        p = self.as_exact_polynomial()
        if p is not None:
            return Jet2.from_polynomial(p ** n, self.order)
        result = Jet2.constant(1, self.order)
        for _ in range(n):
            result = result * self
        return result

    def derivative(self, index: int) -> "Jet2":
        """d/dt_index; the order drops by one."""
        if index not in (0, 1):
            raise DomainError("jet variable index must be 0 or 1")
        p = self.as_exact_polynomial()
        if p is not None:
            return Jet2.from_polynomial(p.derive(index), max(self.order - 1, 0))
        acc = {}
        for (a, b), c in self.coeffs.items():
            e = a if index == 0 else b
            if e:
                k = (a - 1, b) if index == 0 else (a, b - 1)
                acc[k] = c * e
        prod = None
        if self.producer is not None:
            prod = cached_producer(lambda n: self.regenerate(n + 1).derivative(index))
        return Jet2(max(self.order - 1, 0), acc, prod)

    def substitute_linear(self, matrix) -> "Jet2":
        """Exact linear change of leaf coordinates:
        new t1 = m00*t1 + m01*t2, new t2 = m10*t1 + m11*t2 substituted in."""
        (m00, m01), (m10, m11) = matrix
        n1 = Polynomial(LEAF_RING, {(1, 0): Fraction(m00), (0, 1): Fraction(m01)})
        n2 = Polynomial(LEAF_RING, {(1, 0): Fraction(m10), (0, 1): Fraction(m11)})
        p = self.as_exact_polynomial()
        if p is not None:
            return Jet2.from_polynomial(p.compose([n1, n2]), self.order)
        acc: dict = {}
        pow1: list[Polynomial] = [Polynomial.constant(LEAF_RING, 1)]
        pow2: list[Polynomial] = [Polynomial.constant(LEAF_RING, 1)]
        for (a, b), c in self.coeffs.items():
            while len(pow1) <= a:
                pow1.append(pow1[-1] * n1)
            while len(pow2) <= b:
                pow2.append(pow2[-1] * n2)
            term = pow1[a] * pow2[b]
            for m, k in term.terms.items():
                if sum(m) > self.order:
                    continue
                key = (m[0], m[1])
                s = acc.get(key, Fraction(0)) + c * k
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        prod = None
        if self.producer is not None:
            prod = cached_producer(lambda n: self.regenerate(n).substitute_linear(matrix))
        return Jet2(self.order, acc, prod)

    def swap_variables(self) -> "Jet2":
        return self.substitute_linear(((0, 1), (1, 0)))

    # -- comparison (producers excluded) ----------------------------------

    def __eq__(self, other):
        if not isinstance(other, Jet2):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, frozenset(self.coeffs.items())))

    def __str__(self):
        return f"{self.to_polynomial()} + O({self.order + 1})"

    def __repr__(self):
        return f"Jet2(order={self.order}, {self.to_polynomial()!s})"


def jet_arith(a: Jet2, b: Jet2, kind: str) -> Jet2:
    """add | mul on jets; result order is the min of the input orders."""
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    raise DomainError(f"unknown jet operation {kind!r}")

"""Exact Laurent polynomials with integer coefficients.

:class:`LaurentPoly` models ``Z[L, L^-1]`` where ``L`` is the class of the
affine line.  The same type doubles as the integer (Laurent) polynomial
ring ``Z[t, t^-1]`` used by the toric combinatorics; only the rendering
variable changes.
"""

from __future__ import annotations

from fractions import Fraction
from collections.abc import Mapping
from typing import Iterable, Union

Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    """Immutable element of ``Z[L, L^-1]``.

    Stored as a sorted tuple of ``(exponent, coefficient)`` pairs with no
    zero coefficients, so equality and hashing are structural.

    >>> L = LaurentPoly.var()
    >>> (L - 1) * (L + 1)
    LaurentPoly('L^2 - 1')
    >>> (L + 1).bar()
    LaurentPoly('1 + L^-1')
    """

    __slots__ = ("_items", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        acc: dict[int, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, (dict, Mapping)) else terms
            for e, c in items:
                if c:
                    acc[e] = acc.get(e, 0) + c
        self._items = tuple(sorted((int(e), int(c)) for e, c in acc.items() if c))
        self._hash = None

    @classmethod
    def _raw(cls, items: tuple) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj._items = items
        obj._hash = None
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "LaurentPoly":
        return cls({e: c})

    @classmethod
    def var(cls) -> "LaurentPoly":
        return cls({1: 1})

    @classmethod
    def coerce(cls, x: Scalar) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls({0: x})
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection --------------------------------------------------------

    def items(self) -> tuple[tuple[int, int], ...]:
        """Pairs ``(exponent, coefficient)`` in ascending exponent order."""
        return self._items

    def as_dict(self) -> dict[int, int]:
        return dict(self._items)

    def coeff(self, e: int) -> int:
        for k, c in self._items:
            if k == e:
                return c
        return 0

    def is_zero(self) -> bool:
        return not self._items

    def is_monomial(self) -> bool:
        return len(self._items) == 1

    @property
    def degree(self) -> int:
        if not self._items:
            raise ValueError("degree of the zero polynomial")
        return self._items[-1][0]

    @property
    def low_degree(self) -> int:
        if not self._items:
            raise ValueError("low degree of the zero polynomial")
        return self._items[0][0]

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: Scalar) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._items)
        for e, c in other._items:
            acc[e] = acc.get(e, 0) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(tuple((e, -c) for e, c in self._items))

    def __sub__(self, other: Scalar) -> "LaurentPoly":
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: Scalar) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly((e, c * other) for e, c in self._items)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        acc: dict[int, int] = {}
        for e1, c1 in self._items:
            for e2, c2 in other._items:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(acc)

    def __rmul__(self, other: Scalar) -> "LaurentPoly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_monomial() or abs(self._items[0][1]) != 1:
                raise ArithmeticError(f"{self} is not a unit in Z[L, L^-1]")
            (e, c), = self._items
            return LaurentPoly({e * k: c ** (-k)})
        out = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``L^k``."""
        return LaurentPoly._raw(tuple((e + k, c) for e, c in self._items))

    def bar(self) -> "LaurentPoly":
        """The involution ``L -> L^-1``."""
        return LaurentPoly._raw(tuple((-e, c) for e, c in reversed(self._items)))

    def __call__(self, x) -> Fraction:
        """Evaluate at a rational (or integer) value of the variable."""
        x = Fraction(x)
        if x == 0 and self._items and self._items[0][0] < 0:
            raise ZeroDivisionError("negative power evaluated at 0")
        return sum((c * x ** e for e, c in self._items), Fraction(0))

    def is_palindromic(self, center_twice: int) -> bool:
        """True iff ``p(t^-1) == t^(-center_twice) * p(t)``."""
        return self.bar() == self.shift(-center_twice)

    # -- rendering ---------------------------------------------------------

    def to_str(self, var: str = "L", ascending: bool = False, compact: bool = False) -> str:
        if not self._items:
            return "0"
        items = self._items if ascending else tuple(reversed(self._items))
        parts: list[str] = []
        for i, (e, c) in enumerate(items):
            if e == 0:
                mono = ""
            elif e == 1:
                mono = var
            else:
                mono = f"{var}^{e}"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                sep = "-" if c < 0 else "+"
                parts.append(sep + body if compact else f" {sep} {body}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_str()!r})"


L = LaurentPoly.var()
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()


def lp_arith(a: Scalar, b: Scalar, op: str) -> LaurentPoly:
    """Dispatch ``add``/``sub``/``mul`` on two Laurent polynomials."""
    a, b = LaurentPoly.coerce(a), LaurentPoly.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def lp_bar(a: Scalar) -> LaurentPoly:
    return LaurentPoly.coerce(a).bar()


def projective_space(n: int) -> LaurentPoly:
    """Class of ``P^n``: ``1 + L + ... + L^n``."""
    return LaurentPoly({e: 1 for e in range(n + 1)})

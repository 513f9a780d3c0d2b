"""Formal Grothendieck classes over a base, with duality and induction.

Stratum symbols form a free basis of a ``Z[L, L^-1]``-module.  No scissor
or projective-bundle relations are imposed; identities are checked in a
basis where they reduce to linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from collections.abc import Mapping
from typing import Callable, Iterable, Iterator, Optional, Union

from .errors import (
    DualityUndefined,
    InputError,
    MissingCount,
    NonIntegralSpecialization,
    SymbolConflict,
    UnknownSymbol,
)
from .laurent import ONE, LaurentPoly, Scalar


@dataclass(frozen=True)
class StratumSymbol:
    """A generator ``[X]_S`` of the free module of classes.

    Identity is ``(id, base, mu_order, group_tags)``; ``dim`` and
    ``proper_smooth`` are data that must agree between equal symbols.
    """

    id: str
    base: str = "pt"
    dim: Optional[int] = None
    proper_smooth: bool = False
    mu_order: int = 1
    group_tags: tuple[str, ...] = ()
    _key: tuple = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.mu_order < 1:
            raise InputError(f"mu_order must be >= 1, got {self.mu_order}")
        if self.dim is not None and self.dim < 0:
            raise InputError(f"negative dimension for {self.id}")
        if not isinstance(self.group_tags, tuple):
            object.__setattr__(self, "group_tags", tuple(self.group_tags))
        key = (self.id, self.base, self.mu_order, self.group_tags)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    @property
    def key(self) -> tuple:
        return self._key

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, StratumSymbol):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "StratumSymbol") -> bool:
        return self.key < other.key

    def duality_eligible(self) -> bool:
        return self.proper_smooth and self.dim is not None

    def __str__(self) -> str:
        extra = []
        if self.mu_order > 1:
            extra.append(f"mu{self.mu_order}")
        if self.group_tags:
            extra.append(",".join(self.group_tags))
        return f"[{self.id}{'|' + '|'.join(extra) if extra else ''}]"


POINT = StratumSymbol("pt", base="pt", dim=0, proper_smooth=True)


def _check_consistent(a: StratumSymbol, b: StratumSymbol) -> None:
    if a.dim != b.dim or a.proper_smooth != b.proper_smooth:
        raise SymbolConflict(f"symbol {a} used with inconsistent data: {a!r} vs {b!r}")


class GrothClass:
    """Finite ``Z[L, L^-1]``-combination of stratum symbols."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[StratumSymbol, Scalar] | Iterable[tuple[StratumSymbol, Scalar]] | None = None):
        acc: dict[StratumSymbol, LaurentPoly] = {}
        canon: dict[StratumSymbol, StratumSymbol] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, (dict, Mapping)) else terms
            for sym, c in items:
                c = LaurentPoly.coerce(c)
                if sym in canon:
                    _check_consistent(canon[sym], sym)
                    sym = canon[sym]
                else:
                    canon[sym] = sym
                acc[sym] = acc.get(sym, LaurentPoly()) + c
        self._terms = {s: c for s, c in acc.items() if c}

    @classmethod
    def of(cls, sym: StratumSymbol, coeff: Scalar = 1) -> "GrothClass":
        return cls({sym: coeff})

    @classmethod
    def scalar(cls, c: Scalar) -> "GrothClass":
        """``c`` times the class of the point."""
        return cls({POINT: c})

    # -- inspection --------------------------------------------------------

    def symbols(self) -> list[StratumSymbol]:
        return sorted(self._terms)

    def items(self) -> list[tuple[StratumSymbol, LaurentPoly]]:
        return [(s, self._terms[s]) for s in sorted(self._terms)]

    def coeff(self, sym: StratumSymbol) -> LaurentPoly:
        return self._terms.get(sym, LaurentPoly())

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        return all(s == POINT for s in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, GrothClass):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    # -- module arithmetic -------------------------------------------------

    def __add__(self, other: "GrothClass") -> "GrothClass":
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, GrothClass):
            return NotImplemented
        return GrothClass(list(self._terms.items()) + list(other._terms.items()))

    def __radd__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        return NotImplemented

    def __neg__(self) -> "GrothClass":
        return GrothClass({s: -c for s, c in self._terms.items()})

    def __sub__(self, other: "GrothClass") -> "GrothClass":
        if not isinstance(other, GrothClass):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Scalar) -> "GrothClass":
        c = LaurentPoly.coerce(c)
        if not c:
            return GrothClass()
        return GrothClass({s: c * v for s, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        if isinstance(other, GrothClass):
            # Only products with a multiple of the point class are defined.
            if other.is_scalar():
                return self.scale(other.coeff(POINT))
            if self.is_scalar():
                return other.scale(self.coeff(POINT))
            raise TypeError("product of two non-scalar classes is not modelled")
        return NotImplemented

    __rmul__ = __mul__

    def map_symbols(self, fn: Callable[[StratumSymbol], StratumSymbol]) -> "GrothClass":
        return GrothClass((fn(s), c) for s, c in self._terms.items())

    def __str__(self) -> str:
        return render_class(self)

    def __repr__(self) -> str:
        return f"GrothClass({render_class(self)!r})"


def _coeff_text(c: LaurentPoly) -> str:
    if c == ONE:
        return ""
    if c.is_monomial():
        return c.to_str(compact=True) + "*"
    return "(" + c.to_str(compact=True) + ")*"


def render_class(a: GrothClass) -> str:
    """Canonical text, e.g. ``(L-1)*[E_1_o] - L*[E_2_o]``."""
    if a.is_zero():
        return "0"
    parts = []
    for i, (sym, c) in enumerate(a.items()):
        neg = c.items()[-1][1] < 0
        body = _coeff_text(-c if neg else c) + str(sym)
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def class_arith(a: GrothClass, b: GrothClass, op: str) -> GrothClass:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    raise ValueError(f"unknown operation {op!r}")


def class_scale(c: Scalar, a: GrothClass) -> GrothClass:
    return a.scale(c)


def dualize(a: GrothClass) -> GrothClass:
    """``D(sum c_g g) = sum bar(c_g) L^(-dim g) g`` on smooth proper symbols."""
    out = []
    for sym, c in a.items():
        if not sym.duality_eligible():
            raise DualityUndefined(sym)
        out.append((sym, c.bar().shift(-sym.dim)))
    return GrothClass(out)


def induce_m(a: GrothClass, m: int) -> GrothClass:
    """Induction from ``mu_n`` to ``mu_(n m)`` on every symbol."""
    if m < 1:
        raise InputError(f"induction index must be >= 1, got {m}")
    if m == 1:
        return a
    return a.map_symbols(lambda s: replace(s, mu_order=s.mu_order * m))


def evaluate(a: GrothClass, value, oracle: Mapping[StratumSymbol, int] | Callable[[StratumSymbol], int]) -> Fraction:
    """``sum c_g(value) * oracle(g)`` as an exact rational."""
    total = Fraction(0)
    for sym, c in a.items():
        if callable(oracle):
            count = oracle(sym)
        else:
            try:
                count = oracle[sym]
            except KeyError:
                raise MissingCount(sym) from None
        if count is None:
            raise MissingCount(sym)
        total += c(value) * count
    return total


def specialize_count(a: GrothClass, q: int, oracle) -> int:
    """Point-count realization at ``L = q`` given counts for each symbol.

    Group actions and tags are forgotten.  The result must be an integer.
    """
    if q < 2:
        raise InputError(f"q must be >= 2, got {q}")
    val = evaluate(a, q, oracle)
    if val.denominator != 1:
        raise NonIntegralSpecialization(f"specialization at L={q} is {val}")
    return val.numerator


# -- stratum bases ------------------------------------------------------------


def subsets(indices, *, min_size: int = 0, max_size: Optional[int] = None) -> Iterator[frozenset]:
    idx = sorted(indices)
    top = len(idx) if max_size is None else min(max_size, len(idx))
    for r in range(min_size, top + 1):
        for c in combinations(idx, r):
            yield frozenset(c)


@dataclass
class BasisContext:
    """Paired open/complete stratum symbols indexed by subsets of components.

    ``open(I)`` is the open stratum (``E_I^o`` or its cover) and
    ``complete(I)`` its closure, which is smooth and proper of dimension
    ``d - |I|``.  Subsets larger than ``d`` index empty strata of a simple
    normal crossings divisor and are omitted, as are subsets larger than
    ``max_depth`` when it is given.
    """

    d: int
    labels: tuple[str, ...]
    base: str = "X"
    prefix: str = "E"
    include_empty: bool = True
    mu_orders: Optional[Callable[[frozenset], int]] = None
    group_tags: tuple[str, ...] = ()
    max_depth: Optional[int] = None
    _open: dict = field(init=False, repr=False)
    _complete: dict = field(init=False, repr=False)
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._open, self._complete, self._index = {}, {}, {}
        n = len(self.labels)
        depth = self.d if self.max_depth is None else min(self.d, self.max_depth)
        for I in subsets(range(n), min_size=0 if self.include_empty else 1, max_size=depth):
            name = "_".join(self.labels[i] for i in sorted(I)) if I else "empty"
            mu = self.mu_orders(I) if (self.mu_orders and I) else 1
            common = dict(base=self.base, dim=self.d - len(I), mu_order=mu, group_tags=tuple(self.group_tags))
            o = StratumSymbol(f"{self.prefix}_{name}_o", proper_smooth=False, **common)
            c = StratumSymbol(f"{self.prefix}_{name}", proper_smooth=True, **common)
            self._open[I], self._complete[I] = o, c
            self._index[o] = ("open", I)
            self._index[c] = ("complete", I)

    def subsets(self) -> list[frozenset]:
        return list(self._open)

    def open(self, I) -> StratumSymbol:
        return self._open[frozenset(I)]

    def complete(self, I) -> StratumSymbol:
        return self._complete[frozenset(I)]

    def locate(self, sym: StratumSymbol) -> tuple[str, frozenset]:
        try:
            return self._index[sym]
        except KeyError:
            raise UnknownSymbol(sym) from None

    def supersets(self, I: frozenset) -> Iterator[frozenset]:
        for J in self._open:
            if I <= J:
                yield J

    def to_complete_basis(self, a: GrothClass) -> GrothClass:
        """``[open(I)] = sum_{J >= I} (-1)^(|J|-|I|) [complete(J)]``."""
        out = []
        for sym, c in a.items():
            kind, I = self.locate(sym)
            if kind == "complete":
                out.append((sym, c))
                continue
            for J in self.supersets(I):
                sign = -1 if (len(J) - len(I)) % 2 else 1
                out.append((self._complete[J], c * sign))
        return GrothClass(out)

    def to_open_basis(self, a: GrothClass) -> GrothClass:
        """``[complete(I)] = sum_{J >= I} [open(J)]``."""
        out = []
        for sym, c in a.items():
            kind, I = self.locate(sym)
            if kind == "open":
                out.append((sym, c))
                continue
            for J in self.supersets(I):
                out.append((self._open[J], c))
        return GrothClass(out)


def to_complete_basis(a: GrothClass, ctx: BasisContext) -> GrothClass:
    return ctx.to_complete_basis(a)


def to_open_basis(a: GrothClass, ctx: BasisContext) -> GrothClass:
    return ctx.to_open_basis(a)

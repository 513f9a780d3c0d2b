"""Rational functions in ``T`` with denominators ``T^-m L^n - 1``.

An element of ``M[T, T^-1, (T^-m L^n - 1)^-1]`` is held as a sum of terms
``coeff * T^e / prod(T^-m_k L^n_k - 1)``.  Equality is semantic: two values
are equal when the numerator of their difference over a common denominator
vanishes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .errors import InputError, NotExpandable, NotRegularAtInfinity
from .grothring import GrothClass, dualize, induce_m
from .laurent import LaurentPoly, Scalar


@dataclass(frozen=True, order=True)
class DenomFactor:
    """The factor ``T^-m L^n - 1``."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise InputError(f"denominator factor needs m, n >= 1, got ({self.m}, {self.n})")

    def __str__(self) -> str:
        return f"(T^-{self.m} L^{self.n} - 1)"


Denom = tuple  # sorted tuple of DenomFactor


def _denom(factors: Iterable) -> Denom:
    out = []
    for f in factors:
        out.append(f if isinstance(f, DenomFactor) else DenomFactor(*f))
    return tuple(sorted(out))


def _coerce_class(c) -> GrothClass:
    if isinstance(c, GrothClass):
        return c
    return GrothClass.scalar(c)


class TRational:
    """Sum of terms ``coeff * T^t_exp / prod(denom)``.

    Terms sharing the same ``(t_exp, denom)`` are merged on construction;
    nothing else is cancelled until :meth:`normalize` is called.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple] | None = None):
        acc: dict[tuple[int, Denom], GrothClass] = {}
        for coeff, e, denom in terms or ():
            key = (int(e), _denom(denom))
            coeff = _coerce_class(coeff)
            acc[key] = acc[key] + coeff if key in acc else coeff
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def zero(cls) -> "TRational":
        return cls()

    @classmethod
    def term(cls, coeff, t_exp: int = 0, denom: Iterable = ()) -> "TRational":
        return cls([(coeff, t_exp, denom)])

    @classmethod
    def scalar(cls, c: Scalar, t_exp: int = 0, denom: Iterable = ()) -> "TRational":
        return cls([(GrothClass.scalar(c), t_exp, denom)])

    @classmethod
    def inverse_factor(cls, m: int, n: int) -> "TRational":
        """``1 / (T^-m L^n - 1)``."""
        return cls.scalar(1, 0, [(m, n)])

    # -- inspection --------------------------------------------------------

    def terms(self) -> list[tuple[GrothClass, int, Denom]]:
        return [(self._terms[k], k[0], k[1]) for k in sorted(self._terms)]

    def is_zero(self) -> bool:
        return not self._terms

    def denominator_factors(self) -> Counter:
        """Least common multiple of all term denominators, as a multiset."""
        common: Counter = Counter()
        for _, denom in self._terms:
            for f, k in Counter(denom).items():
                common[f] = max(common[f], k)
        return common

    # -- ring arithmetic ---------------------------------------------------

    def __add__(self, other) -> "TRational":
        other = _coerce_tr(other)
        if other is None:
            return NotImplemented
        return TRational([(c, e, d) for c, e, d in self.terms()] + [(c, e, d) for c, e, d in other.terms()])

    __radd__ = __add__

    def __neg__(self) -> "TRational":
        return TRational([(-c, e, d) for c, e, d in self.terms()])

    def __sub__(self, other) -> "TRational":
        other = _coerce_tr(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "TRational":
        return _coerce_tr(other) - self

    def __mul__(self, other) -> "TRational":
        if isinstance(other, (int, LaurentPoly)):
            return TRational([(c.scale(other), e, d) for c, e, d in self.terms()])
        other = _coerce_tr(other)
        if other is None:
            return NotImplemented
        out = []
        for c1, e1, d1 in self.terms():
            for c2, e2, d2 in other.terms():
                out.append((c1 * c2, e1 + e2, d1 + d2))
        return TRational(out)

    __rmul__ = __mul__

    def shift_t(self, k: int) -> "TRational":
        """Multiply by ``T^k``."""
        return TRational([(c, e + k, d) for c, e, d in self.terms()])

    def map_coefficients(self, fn: Callable[[GrothClass], GrothClass]) -> "TRational":
        return TRational([(fn(c), e, d) for c, e, d in self.terms()])

    # -- normal form and equality -----------------------------------------

    def _common_numerator(self) -> tuple[Counter, dict[int, GrothClass]]:
        common = self.denominator_factors()
        numer: dict[int, GrothClass] = {}
        for (e, denom), coeff in self._terms.items():
            poly = {e: coeff}
            missing = common - Counter(denom)
            for f, k in missing.items():
                for _ in range(k):
                    poly = _mul_factor(poly, f)
            for k, v in poly.items():
                numer[k] = numer[k] + v if k in numer else v
        return common, {k: v for k, v in numer.items() if v}

    def normalize(self) -> "TRational":
        """Single fraction over the lcm of the denominators, with every
        denominator factor that exactly divides the numerator cancelled."""
        common, numer = self._common_numerator()
        if not numer:
            return TRational()
        factors = sorted(common.elements())
        kept = []
        for f in factors:
            q = _divide_by_factor(numer, f)
            if q is None:
                kept.append(f)
            else:
                numer = q
        return TRational([(c, e, kept) for e, c in numer.items()])

    def _flat_numerator(self) -> dict[tuple, int]:
        """Common numerator as ``(symbol index, T-exp, L-exp) -> int``.

        Same content as :meth:`_common_numerator` but on plain integers,
        which keeps equality tests cheap.
        """
        common = self.denominator_factors()
        index: dict = {}
        acc: dict[tuple, int] = {}
        for (e, denom), coeff in self._terms.items():
            poly: dict[tuple, int] = {}
            for sym, lp in coeff._terms.items():
                i = index.setdefault(sym, len(index))
                for l, c in lp.items():
                    poly[(i, e, l)] = c
            for f, k in (common - Counter(denom)).items():
                for _ in range(k):
                    nxt: dict[tuple, int] = {}
                    for (i, te, le), c in poly.items():
                        key = (i, te - f.m, le + f.n)
                        nxt[key] = nxt.get(key, 0) + c
                        nxt[(i, te, le)] = nxt.get((i, te, le), 0) - c
                    poly = nxt
            for key, c in poly.items():
                acc[key] = acc.get(key, 0) + c
        return {k: v for k, v in acc.items() if v}

    def equals(self, other) -> bool:
        other = _coerce_tr(other)
        return not (self - other)._flat_numerator()

    def __eq__(self, other) -> bool:
        other = _coerce_tr(other)
        if other is None:
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    # -- duality, substitution, evaluation --------------------------------

    def dualize_P(self) -> "TRational":
        """Dualize coefficients, send ``T -> T^-1`` and rewrite each factor via
        ``T^m L^-n - 1 = -L^-n T^m (T^-m L^n - 1)``."""
        out = []
        for c, e, denom in self.terms():
            lpow = sum(f.n for f in denom)
            tpow = sum(f.m for f in denom)
            sign = -1 if len(denom) % 2 else 1
            coeff = dualize(c).scale(LaurentPoly.monomial(lpow, sign))
            out.append((coeff, -e - tpow, denom))
        return TRational(out)

    def substitute_Tm(self, m: int) -> "TRational":
        if m < 1:
            raise InputError(f"substitution power must be >= 1, got {m}")
        return TRational([(c, m * e, [DenomFactor(m * f.m, f.n) for f in d]) for c, e, d in self.terms()])

    def induce(self, m: int) -> "TRational":
        return self.map_coefficients(lambda c: induce_m(c, m))

    def eval_at_infinity(self) -> GrothClass:
        """Value at ``T = infinity``.

        Terms with a denominator and ``e > 0`` are rewritten with
        ``T^e / D = -T^e + L^n T^(e-m) / D`` until every such term has
        ``e <= 0``; then ``1/D -> -1`` and ``T^e -> 0`` for ``e < 0``.
        """
        pending = dict(self._terms)
        poly: dict[int, GrothClass] = {}
        value = GrothClass()
        while pending:
            nxt: dict[tuple[int, Denom], GrothClass] = {}

            def put(key, c):
                if c:
                    nxt[key] = nxt[key] + c if key in nxt else c

            for (e, denom), c in pending.items():
                if not denom:
                    poly[e] = poly[e] + c if e in poly else c
                elif e <= 0:
                    if e == 0:
                        value = value + (c if len(denom) % 2 == 0 else -c)
                else:
                    f, rest = denom[0], denom[1:]
                    put((e, rest), -c)
                    put((e - f.m, denom), c.scale(LaurentPoly.monomial(f.n)))
            pending = {k: v for k, v in nxt.items() if v}
        bad = sorted(e for e, c in poly.items() if e > 0 and c)
        if bad:
            raise NotRegularAtInfinity(f"pole of order {bad[-1]} at T = infinity")
        if 0 in poly:
            value = value + poly[0]
        return value

    def _laurent_coefficient(self, order: int) -> GrothClass:
        out = GrothClass()
        for (e, denom), c in self._terms.items():
            lp = _geometric_coefficient(denom, order - e)
            if lp:
                out = out + c.scale(lp)
        return out

    def lowest_order(self) -> int:
        """Lowest power of ``T`` that can appear in the expansion at 0."""
        if not self._terms:
            return 0
        return min(e + sum(f.m for f in denom) for e, denom in self._terms)

    def series_coefficient(self, n: int) -> GrothClass:
        """Coefficient of ``T^n`` in the power series expansion at ``T = 0``,
        using ``1/(T^-m L^k - 1) = sum_{s>=1} T^(m s) L^(-k s)``."""
        if n < 0:
            raise InputError("series coefficient index must be >= 0")
        for k in range(self.lowest_order(), 0):
            if self._laurent_coefficient(k):
                raise NotExpandable(f"nonzero coefficient of T^{k}")
        return self._laurent_coefficient(n)

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        return render_trational(self)

    def __repr__(self) -> str:
        return f"TRational({render_trational(self)!r})"


def _coerce_tr(x):
    if isinstance(x, TRational):
        return x
    if isinstance(x, GrothClass):
        return TRational.term(x)
    if isinstance(x, (int, LaurentPoly)):
        return TRational.scalar(x)
    return None


def _mul_factor(poly: Mapping[int, GrothClass], f: DenomFactor) -> dict[int, GrothClass]:
    """Multiply a ``T``-polynomial by ``L^n T^-m - 1``."""
    out: dict[int, GrothClass] = {}
    lpow = LaurentPoly.monomial(f.n)
    for e, c in poly.items():
        for k, v in ((e - f.m, c.scale(lpow)), (e, -c)):
            out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v}


def _divide_by_factor(numer: Mapping[int, GrothClass], f: DenomFactor):
    """Exact quotient by ``L^n T^-m - 1`` or ``None`` when not divisible.

    Long division in ``u = T^-1`` from the top degree; the leading
    coefficient ``L^n`` is a unit.
    """
    rem = {-e: c for e, c in numer.items()}  # keyed by u-degree
    lo = min(rem)
    inv = LaurentPoly.monomial(-f.n)
    quot: dict[int, GrothClass] = {}
    while rem:
        top = max(rem)
        if top - f.m < lo:
            return None
        c = rem.pop(top).scale(inv)
        quot[top - f.m] = c
        k = top - f.m
        v = rem.get(k, GrothClass()) + c
        if v:
            rem[k] = v
        else:
            rem.pop(k, None)
    return {-u: c for u, c in quot.items()}


def _geometric_coefficient(denom: Denom, order: int) -> LaurentPoly:
    """Coefficient of ``T^order`` in ``prod_k sum_{s>=1} T^(m_k s) L^(-n_k s)``."""
    dist: dict[int, LaurentPoly] = {0: LaurentPoly.const(1)}
    for f in denom:
        nxt: dict[int, LaurentPoly] = {}
        for o, lp in dist.items():
            s = 1
            while o + f.m * s <= order:
                k = o + f.m * s
                v = lp.shift(-f.n * s)
                nxt[k] = nxt[k] + v if k in nxt else v
                s += 1
        dist = nxt
    return dist.get(order, LaurentPoly())


def render_trational(a: TRational) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for c, e, denom in a.terms():
        txt = str(c)
        if len(c) > 1 and (e or denom):
            txt = f"({txt})"
        if e:
            txt += f"*T^{e}"
        if denom:
            txt += "/(" + " ".join(str(f) for f in denom) + ")"
        parts.append(txt)
    return " + ".join(parts)


def tr_arith(a: TRational, b: TRational, op: str) -> TRational:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def normalize(a: TRational) -> TRational:
    return a.normalize()


def eq(a: TRational, b: TRational) -> bool:
    return a.equals(b)


def dualize_P(a: TRational) -> TRational:
    return a.dualize_P()


def substitute_Tm(a: TRational, m: int) -> TRational:
    return a.substitute_Tm(m)


def eval_at_infinity(a: TRational) -> GrothClass:
    return a.eval_at_infinity()


def series_coefficient(a: TRational, n: int) -> GrothClass:
    return a.series_coefficient(n)

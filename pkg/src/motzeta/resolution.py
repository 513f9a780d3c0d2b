"""Zeta functions and nearby fibers from simple normal crossings data.

A resolution is described combinatorially: the ambient dimension ``d`` and,
for every irreducible component ``E_i`` of the pulled-back zero divisor,
its multiplicity ``m_i`` and the integer ``n_i`` (``n_i - 1`` is the order
of the Jacobian along ``E_i``).  Strata classes ``[E_I^o]``, ``[E_I]`` and
their covers are opaque symbols.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence

from .covers import gcd_cover_order
from .errors import DualityUndefined, InputError, MissingTag
from .grothring import BasisContext, GrothClass, StratumSymbol, dualize, induce_m, render_class, subsets
from .laurent import L, LaurentPoly, Scalar
from .ratfunc import DenomFactor, TRational


@dataclass(frozen=True)
class Component:
    id: str
    m: int
    n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        if self.m < 1:
            raise InputError(f"component {self.id}: multiplicity must be >= 1, got {self.m}")
        if self.n < 1:
            raise InputError(f"component {self.id}: n must be >= 1, got {self.n}")


@dataclass(frozen=True)
class ResolutionData:
    """Combinatorial simple normal crossings resolution of ``f = 0``.

    ``base`` labels the ambient variety; the zero locus is ``base + "0"``.
    ``group_tags`` are attached to every stratum symbol (free group actions
    on the base, see :func:`quotient_relabel`).  ``max_depth`` caps the size
    of nonempty intersections below ``d``; it is set by
    :func:`smooth_pullback` so the pulled-back strata match the original.
    """

    d: int
    components: tuple[Component, ...] = ()
    base: str = "X"
    group_tags: tuple[str, ...] = ()
    max_depth: Optional[int] = None

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Component) else Component(*c) for c in self.components)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "group_tags", tuple(self.group_tags))
        if self.d < 1:
            raise InputError(f"ambient dimension must be >= 1, got {self.d}")
        ids = [c.id for c in comps]
        if len(set(ids)) != len(ids):
            raise InputError(f"duplicate component ids in {ids}")

    @classmethod
    def from_pairs(cls, d: int, pairs: Iterable[tuple[int, int]], ids: Optional[Sequence[str]] = None, **kw) -> "ResolutionData":
        pairs = list(pairs)
        ids = ids or [str(i + 1) for i in range(len(pairs))]
        return cls(d, tuple(Component(i, m, n) for i, (m, n) in zip(ids, pairs)), **kw)

    @property
    def zero_locus(self) -> str:
        return self.base + "0"

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(c.m for c in self.components)

    def m_I(self, I) -> int:
        return gcd_cover_order(self.multiplicities, I).m_I

    def factor(self, i: int) -> DenomFactor:
        c = self.components[i]
        return DenomFactor(c.m, c.n)

    @cached_property
    def naive_basis(self) -> BasisContext:
        """Strata ``E_I^o``, ``E_I`` over ``X``, including ``I = {}``."""
        return BasisContext(
            self.d,
            tuple(c.id for c in self.components),
            base=self.base,
            prefix="E",
            include_empty=True,
            group_tags=self.group_tags,
            max_depth=self.max_depth,
        )

    @cached_property
    def equivariant_basis(self) -> BasisContext:
        """Covers ``~E_I^o``, ``~E_I`` over ``X_0`` with ``mu_(m_I)``-actions."""
        return BasisContext(
            self.d,
            tuple(c.id for c in self.components),
            base=self.zero_locus,
            prefix="Et",
            include_empty=False,
            mu_orders=self.m_I,
            group_tags=self.group_tags,
            max_depth=self.max_depth,
        )


def _product_factors(data: ResolutionData, I) -> list[DenomFactor]:
    return [data.factor(i) for i in sorted(I)]


# -- zeta functions -----------------------------------------------------------


def naive_zeta(data: ResolutionData) -> TRational:
    """``sum_I [E_I^o] prod_{i in I} (L-1)/(T^-m_i L^n_i - 1)``, constant term kept."""
    ctx = data.naive_basis
    terms = []
    for I in ctx.subsets():
        coeff = GrothClass.of(ctx.open(I), (L - 1) ** len(I))
        terms.append((coeff, 0, _product_factors(data, I)))
    return TRational(terms)


def equivariant_zeta(data: ResolutionData) -> TRational:
    """``sum_{I != {}} (L-1)^(|I|-1) [~E_I^o] prod_{i in I} 1/(T^-m_i L^n_i - 1)``."""
    ctx = data.equivariant_basis
    terms = []
    for I in ctx.subsets():
        coeff = GrothClass.of(ctx.open(I), (L - 1) ** (len(I) - 1))
        terms.append((coeff, 0, _product_factors(data, I)))
    return TRational(terms)


def nearby_fiber_direct(data: ResolutionData) -> GrothClass:
    """``sum_{I != {}} (1-L)^(|I|-1) [~E_I^o]``."""
    ctx = data.equivariant_basis
    return GrothClass((ctx.open(I), (1 - L) ** (len(I) - 1)) for I in ctx.subsets())


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


def nearby_fiber(data: ResolutionData) -> GrothClass:
    """``psi_f = -S(f)(infinity)``, cross-checked against the closed formula."""
    via_limit = -equivariant_zeta(data).eval_at_infinity()
    direct = nearby_fiber_direct(data)
    if via_limit != direct:
        raise ConsistencyError(f"-S(f)(inf) = {via_limit} but closed formula gives {direct}")
    return via_limit


def s_prime(data: ResolutionData) -> TRational:
    """``(L-1) S(f)(T) + sum_{J != {}} (-1)^|J| [~E_J]`` in the complete basis."""
    ctx = data.equivariant_basis
    zeta = equivariant_zeta(data).map_coefficients(ctx.to_complete_basis)
    extra = GrothClass((ctx.complete(J), (-1) ** len(J)) for J in ctx.subsets())
    return zeta * (L - 1) + TRational.term(extra)


def s_prime_expanded(data: ResolutionData) -> TRational:
    """``sum_{J != {}} [~E_J] sum_{I <= J} (-1)^(|J|-|I|) prod_{i in I} (L-1)/D_i``."""
    ctx = data.equivariant_basis
    terms = []
    for J in ctx.subsets():
        sym = ctx.complete(J)
        for I in subsets(J):
            sign = (-1) ** (len(J) - len(I))
            terms.append((GrothClass.of(sym, (L - 1) ** len(I) * sign), 0, _product_factors(data, I)))
    return TRational(terms)


def b_factor(f: DenomFactor) -> TRational:
    """``B = (L-1)/(T^-m L^n - 1) - 1 = (L - T^-m L^n)/(T^-m L^n - 1)``."""
    return TRational([(GrothClass.scalar(L), 0, [f]), (GrothClass.scalar(-L ** f.n), -f.m, [f])])


def naive_zeta_complete(data: ResolutionData) -> TRational:
    """``sum_J [E_J] prod_{j in J} B_j``."""
    ctx = data.naive_basis
    out = TRational()
    for J in ctx.subsets():
        t = TRational.term(GrothClass.of(ctx.complete(J)))
        for j in sorted(J):
            t = t * b_factor(data.factor(j))
        out = out + t
    return out


# -- identity reports ---------------------------------------------------------


@dataclass
class IdentityReport:
    name: str
    passed: bool
    lhs: str
    rhs: str
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {"identity": self.name, "passed": self.passed, "lhs": self.lhs, "rhs": self.rhs, **self.details}

    def render(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {mark}\n  lhs = {self.lhs}\n  rhs = {self.rhs}"


def check_self_duality(data: ResolutionData) -> IdentityReport:
    """``D psi_f = L^(1-d) psi_f``, computed through the complete basis."""
    ctx = data.equivariant_basis
    psi = nearby_fiber(data)
    lhs = ctx.to_open_basis(dualize(ctx.to_complete_basis(psi)))
    rhs = psi.scale(L ** (1 - data.d))
    return IdentityReport("selfdual", lhs == rhs, str(lhs), str(rhs))


def check_functional_naive(data: ResolutionData) -> IdentityReport:
    """``D^P S_naive(f) = L^-d S_naive(f)``."""
    ctx = data.naive_basis
    zeta = naive_zeta(data).map_coefficients(ctx.to_complete_basis)
    rewritten = naive_zeta_complete(data)
    lhs = zeta.dualize_P()
    rhs = zeta * L ** (-data.d)
    rewrite_ok = zeta.equals(rewritten)
    return IdentityReport("naive-feq", rewrite_ok and lhs.equals(rhs), str(lhs), str(rhs), {"B-rewrite agrees": rewrite_ok})


def check_functional_sprime(data: ResolutionData) -> IdentityReport:
    """``D^P S'(f) = L^-d S'(f)``."""
    sp = s_prime(data)
    expanded = s_prime_expanded(data)
    lhs = sp.dualize_P()
    rhs = sp * L ** (-data.d)
    expanded_ok = sp.equals(expanded)
    return IdentityReport("sprime-feq", expanded_ok and lhs.equals(rhs), str(lhs), str(rhs), {"expanded form agrees": expanded_ok})


def power_transform(data: ResolutionData, m: int) -> ResolutionData:
    """Resolution data of ``f^m``: multiplicities scale, ``n_i`` unchanged."""
    if m < 1:
        raise InputError(f"power must be >= 1, got {m}")
    return replace(data, components=tuple(replace(c, m=c.m * m) for c in data.components))


def check_power_rule(data: ResolutionData, m: int) -> IdentityReport:
    """``S(f^m)(T) = Ind^(m) S(f)(T^m)``."""
    lhs = equivariant_zeta(power_transform(data, m))
    rhs = equivariant_zeta(data).induce(m).substitute_Tm(m)
    psi_ok = nearby_fiber(power_transform(data, m)) == induce_m(nearby_fiber(data), m)
    return IdentityReport(f"power:{m}", lhs.equals(rhs) and psi_ok, str(lhs), str(rhs), {"psi rule": psi_ok})


def smooth_pullback(data: ResolutionData, k: int) -> ResolutionData:
    """Data of ``f o pr`` for the projection ``X x A^k -> X``."""
    depth = data.d if data.max_depth is None else min(data.d, data.max_depth)
    return replace(data, d=data.d + k, base=f"{data.base}xA{k}", max_depth=depth)


def pullback_class(a: GrothClass, k: int, base: str) -> GrothClass:
    """``pr_0^*``: rename the base and raise dimensions by ``k``."""
    return a.map_symbols(lambda s: replace(s, base=base, dim=None if s.dim is None else s.dim + k))


def check_smooth_pullback(data: ResolutionData, k: int) -> IdentityReport:
    """``S(f pr)(T) = pr_0^* S(f)(T)`` for the trivial ``A^k`` bundle, where
    ``pr_0^*`` renames the base and raises dimensions by ``k``."""
    pulled = smooth_pullback(data, k)
    lhs = equivariant_zeta(pulled)
    rhs = equivariant_zeta(data).map_coefficients(lambda c: pullback_class(c, k, pulled.zero_locus))
    psi_ok = nearby_fiber(pulled) == pullback_class(nearby_fiber(data), k, pulled.zero_locus)
    return IdentityReport(f"pullback:{k}", lhs.equals(rhs) and psi_ok, str(lhs), str(rhs), {"psi rule": psi_ok})


# -- nearby cycle morphism ------------------------------------------------------


@dataclass(frozen=True)
class ResolvedGenerator:
    """A proper map ``p: Y -> X`` from a smooth connected ``Y`` together with
    resolution data for ``f o p``.  ``pushforward`` renames the strata of
    ``Y_0`` into ``X_0``; unnamed strata get ``"<label>:<id>"``."""

    label: str
    data: ResolutionData
    target_base: str = "X0"
    pushforward: tuple[tuple[str, str], ...] = ()

    @property
    def dim(self) -> int:
        return self.data.d

    def relabel(self, sym: StratumSymbol) -> StratumSymbol:
        names = dict(self.pushforward)
        return replace(sym, id=names.get(sym.id, f"{self.label}:{sym.id}"), base=self.target_base)

    def push(self, a: GrothClass) -> GrothClass:
        return a.map_symbols(self.relabel)


NearbyInput = Sequence[tuple[Scalar, ResolvedGenerator]]


def apply_nearby_morphism(inputs: NearbyInput) -> GrothClass:
    """``Psi_f(sum c_Y [Y]) = sum c_Y p_0!(psi_(f p))``."""
    out = GrothClass()
    for c, gen in inputs:
        out = out + gen.push(nearby_fiber(gen.data)).scale(c)
    return out


def _nearby_complete(inputs: NearbyInput) -> GrothClass:
    out = GrothClass()
    for c, gen in inputs:
        psi = gen.data.equivariant_basis.to_complete_basis(nearby_fiber(gen.data))
        out = out + gen.push(psi).scale(c)
    return out


def dualize_input(inputs: NearbyInput) -> list[tuple[LaurentPoly, ResolvedGenerator]]:
    """``D_X`` on generators: ``c [Y] -> bar(c) L^(-dim Y) [Y]``."""
    return [(LaurentPoly.coerce(c).bar().shift(-gen.dim), gen) for c, gen in inputs]


def check_morphism_duality(inputs: NearbyInput) -> IdentityReport:
    """``D Psi_f = L Psi_f D_X`` on trivially tagged inputs."""
    for _, gen in inputs:
        if gen.data.group_tags:
            raise DualityUndefined(f"generator {gen.label} carries group tags {gen.data.group_tags}")
    lhs = dualize(_nearby_complete(inputs))
    rhs = _nearby_complete(dualize_input(inputs)).scale(L)
    return IdentityReport("morphism-duality", lhs == rhs, render_class(lhs), render_class(rhs))


def quotient_relabel(a, h_tag: str):
    """``A -> A-bar``: drop the free group ``h_tag`` and pass to ``h_tag\\base``.

    Works on classes and, coefficientwise with ``T -> T``, on
    :class:`TRational` values.
    """
    if isinstance(a, TRational):
        return a.map_coefficients(lambda c: quotient_relabel(c, h_tag))

    def fn(s: StratumSymbol) -> StratumSymbol:
        if h_tag not in s.group_tags:
            raise MissingTag(f"{s} does not carry tag {h_tag!r}")
        tags = tuple(t for t in s.group_tags if t != h_tag)
        return replace(s, group_tags=tags, base=f"{h_tag}\\{s.base}")

    return a.map_symbols(fn)


# -- grids ------------------------------------------------------------------------


def exhaustive_grid(max_d: int = 3, max_components: int = 3, max_m: int = 3, max_n: int = 3):
    """Every ``ResolutionData`` with ``d <= max_d``, at most ``max_components``
    components and ``m_i, n_i`` in ``1..max``."""
    pairs = list(product(range(1, max_m + 1), range(1, max_n + 1)))
    for d in range(1, max_d + 1):
        for k in range(max_components + 1):
            for combo in product(pairs, repeat=k):
                yield ResolutionData.from_pairs(d, combo)


def random_resolution(rng: random.Random, max_components: int = 5, max_m: int = 9, max_n: int = 9, max_d: int = 5) -> ResolutionData:
    k = rng.randint(1, max_components)
    d = rng.randint(1, max_d)
    return ResolutionData.from_pairs(d, [(rng.randint(1, max_m), rng.randint(1, max_n)) for _ in range(k)])

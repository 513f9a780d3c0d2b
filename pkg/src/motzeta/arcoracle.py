"""Counting truncated arcs and strata over small finite fields.

Arcs of order ``n`` on ``A^d`` are ``d``-tuples of jets
``a_0 + a_1 t + ... + a_n t^n`` over ``F_q``.  For a monomial
``f = x_1^m_1 ... x_k^m_k`` the counts here are independent of the zeta
formulas and serve as their oracle.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, InputError, PreconditionError
from .grothring import GrothClass, StratumSymbol, specialize_count
from .laurent import L
from .resolution import ResolutionData, equivariant_zeta, naive_zeta

BUDGET = 10**9
# Field sizes accepted for arc enumeration.
FIELD_SIZES = (2, 3, 4, 5, 7, 8, 9)
# Largest field built for strata counts (table arithmetic, degree <= 3).
MAX_FIELD = 64


def _prime_power(q: int) -> tuple[int, int]:
    if 2 <= q <= MAX_FIELD:
        p = next(d for d in range(2, q + 1) if q % d == 0)
        k, r = 0, q
        while r % p == 0:
            r //= p
            k += 1
        if r == 1 and k <= 3:
            return p, k
    raise InputError(f"q = {q} is not a supported prime power (p^k <= {MAX_FIELD} with k <= 3)")


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Product in ``F_p[x] / modulus`` (coefficients ascending, modulus monic)."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for top in range(len(prod) - 1, k - 1, -1):
        c = prod[top]
        if c:
            for j in range(k + 1):
                prod[top - k + j] = (prod[top - k + j] - c * modulus[j]) % p
    return (prod + [0] * k)[:k]


def _irreducible(p: int, k: int) -> list[int]:
    """First monic polynomial of degree ``k <= 3`` over ``F_p`` without roots."""
    for tail in itertools.product(range(p), repeat=k):
        poly = list(tail) + [1]
        if all(sum(c * x**i for i, c in enumerate(poly)) % p for x in range(p)):
            return poly
    raise AssertionError("no irreducible polynomial found")


class FiniteField:
    """``F_q`` for ``q = p^k <= MAX_FIELD``, ``k <= 3``, with table arithmetic.

    Elements are integers ``0..q-1``; for ``q = p^k`` the base-``p`` digits
    are coefficients of a polynomial modulo a fixed irreducible one.
    """

    def __init__(self, q: int):
        self.q = q
        self.p, self.k = _prime_power(q)
        p, k = self.p, self.k
        if k == 1:
            idx = np.arange(q)
            self.add = (idx[:, None] + idx[None, :]) % q
            self.mul = (idx[:, None] * idx[None, :]) % q
        else:
            self.modulus = _irreducible(p, k)
            digits = [[(x // p**i) % p for i in range(k)] for x in range(q)]
            enc = lambda ds: sum(d * p**i for i, d in enumerate(ds))
            self.add = np.array([[enc([(a + b) % p for a, b in zip(digits[x], digits[y])]) for y in range(q)] for x in range(q)])
            self.mul = np.array([[enc(_poly_mulmod(digits[x], digits[y], self.modulus, p)) for y in range(q)] for x in range(q)])
        self.neg = np.array([int(np.nonzero(self.add[x] == 0)[0][0]) for x in range(q)])
        self.inv = np.zeros(q, dtype=int)
        for x in range(1, q):
            self.inv[x] = int(np.nonzero(self.mul[x] == 1)[0][0])

    def from_int(self, c: int) -> int:
        """Image of an integer under ``Z -> F_p -> F_q``."""
        c %= self.p
        return c  # prime-field elements are the constant polynomials

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def power(self, x: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = int(self.mul[out, x])
        return out

    def is_square(self, x: int) -> bool:
        return any(int(self.mul[y, y]) == x for y in range(self.q))


# -- arc enumeration ----------------------------------------------------------


@dataclass(frozen=True)
class MonomialFunction:
    """``f = x_1^m_1 ... x_k^m_k`` on ``A^d``."""

    d: int
    exps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(int(m) for m in self.exps))
        if self.d < 1 or len(self.exps) > self.d:
            raise InputError(f"need 1 <= k <= d, got d={self.d}, exps={self.exps}")
        if any(m < 1 for m in self.exps):
            raise InputError(f"exponents must be >= 1, got {self.exps}")

    @property
    def k(self) -> int:
        return len(self.exps)

    def resolution(self) -> ResolutionData:
        """The identity resolution: coordinate hyperplanes with ``(m_i, 1)``."""
        return ResolutionData.from_pairs(self.d, [(m, 1) for m in self.exps])

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        names = "xyzwuv" if self.d <= 6 else None
        parts = []
        for i, m in enumerate(self.exps):
            v = names[i] if names else f"x{i + 1}"
            parts.append(v if m == 1 else f"{v}^{m}")
        return "*".join(parts)


MODES = ("ord", "monic")


@dataclass(frozen=True)
class ArcCountTask:
    q: int
    n: int
    mode: str
    function: MonomialFunction

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n < 0:
            raise InputError("truncation order must be >= 0")
        if self.q not in FIELD_SIZES:
            raise InputError(f"arc enumeration needs q in {FIELD_SIZES}, got {self.q}")

    @property
    def size(self) -> int:
        return self.q ** (self.function.d * (self.n + 1))

    def check_budget(self, budget: int = BUDGET) -> None:
        if self.size > budget:
            raise BudgetExceeded(f"q^(d(n+1)) = {self.size} exceeds the budget {budget}")


def _jets(F: FiniteField, n: int, start: int, stop: int) -> np.ndarray:
    """Rows ``start..stop-1`` of all jets, coefficient ``j`` in column ``j``."""
    idx = np.arange(start, stop, dtype=np.int64)
    cols = []
    for _ in range(n + 1):
        cols.append(idx % F.q)
        idx = idx // F.q
    return np.stack(cols, axis=1)


def _jet_mul(F: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise product of jets modulo ``t^(n+1)``."""
    n1 = a.shape[1]
    out = np.zeros_like(a)
    for i in range(n1):
        for j in range(n1 - i):
            out[:, i + j] = F.add[out[:, i + j], F.mul[a[:, i], b[:, j]]]
    return out


def power_jet_profile(F: FiniteField, n: int, m: int, chunk: int = 1 << 18) -> Counter:
    """Histogram of ``(order, leading coefficient)`` of ``x^m mod t^(n+1)``
    over all jets ``x``; the zero jet is reported as ``(n+1, 0)``."""
    total = F.q ** (n + 1)
    hist: Counter = Counter()
    for start in range(0, total, chunk):
        x = _jets(F, n, start, min(total, start + chunk))
        y = x.copy()
        for _ in range(m - 1):
            y = _jet_mul(F, y, x)
        nz = y != 0
        order = np.where(nz.any(axis=1), nz.argmax(axis=1), n + 1)
        lead = np.where(order <= n, y[np.arange(len(y)), np.minimum(order, n)], 0)
        key = order * F.q + lead
        vals, counts = np.unique(key, return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            hist[(v // F.q, v % F.q)] += c
    return hist


def enumerate_arcs(task: ArcCountTask, budget: int = BUDGET) -> int:
    """Exact number of arcs with ``ord_t f(gamma) = n`` (``ord``) or
    ``f(gamma) = t^n mod t^(n+1)`` (``monic``).

    Each coordinate's power jets are enumerated in full; since ``F_q[[t]]``
    is a domain, order and leading coefficient of a product are the sum and
    product of those of the factors, which lets the coordinates be combined
    through their ``(order, lead)`` histograms without losing exactness.
    """
    task.check_budget(budget)
    F, n, f = FiniteField(task.q), task.n, task.function
    zero = n + 1
    acc: Counter = Counter({(0, 1): 1})
    for m in f.exps:
        prof = power_jet_profile(F, n, m)
        nxt: Counter = Counter()
        for (o1, l1), c1 in acc.items():
            for (o2, l2), c2 in prof.items():
                o = o1 + o2
                if o > n:
                    nxt[(zero, 0)] += c1 * c2
                else:
                    nxt[(o, int(F.mul[l1, l2]))] += c1 * c2
        acc = nxt
    free = task.q ** ((f.d - f.k) * (n + 1))
    if task.mode == "ord":
        hits = sum(c for (o, l), c in acc.items() if o == n and l != 0)
    else:
        hits = acc.get((n, 1), 0)
    return hits * free


def enumerate_arcs_naive(task: ArcCountTask, limit: int = 2 * 10**5) -> int:
    """Plain iteration over every coefficient tuple; for small cross-checks."""
    if task.size > limit:
        raise BudgetExceeded(f"{task.size} arcs exceed the naive limit {limit}")
    F, n, f = FiniteField(task.q), task.n, task.function
    add, mul = F.add.tolist(), F.mul.tolist()

    def jmul(a, b):
        out = [0] * (n + 1)
        for i in range(n + 1):
            for j in range(n + 1 - i):
                out[i + j] = add[out[i + j]][mul[a[i]][b[j]]]
        return out

    jets = list(itertools.product(range(F.q), repeat=n + 1))
    count = 0
    for gamma in itertools.product(jets, repeat=f.d):
        val = [1] + [0] * n
        for x, m in zip(gamma, f.exps):
            for _ in range(m):
                val = jmul(val, x)
        if any(val[:n]):
            continue
        if (task.mode == "ord" and val[n]) or (task.mode == "monic" and val[n] == 1):
            count += 1
    return count


# -- strata ---------------------------------------------------------------------


def strata_counts(q: int, f: MonomialFunction, budget: int = 10**7) -> dict[StratumSymbol, int]:
    """Point counts of the strata symbols of the identity resolution of ``f``.

    Open strata ``E_I^o``: ``x_i = 0`` for ``i in I`` and ``x_j != 0`` for the
    other ``j <= k``.  Closures ``E_I``: ``x_i = 0`` for ``i in I``.  Covers
    ``~E_I^o``: pairs ``(z, x)`` with ``x in E_I^o`` and
    ``z^m_I prod_{j not in I} x_j^m_j = 1``.
    """
    if q ** (f.d + 1) > budget:
        raise BudgetExceeded(f"q^(d+1) = {q ** (f.d + 1)} exceeds the budget {budget}")
    F = FiniteField(q)
    data = f.resolution()
    naive, equi = data.naive_basis, data.equivariant_basis
    open_n: Counter = Counter()
    closed_n: Counter = Counter()
    cover: Counter = Counter()
    pw = [[F.power(x, e) for x in range(q)] for e in range(max(f.exps, default=1) + 1)]
    for x in itertools.product(range(q), repeat=f.d):
        I = frozenset(i for i in range(f.k) if x[i] == 0)
        open_n[I] += 1
        for J in naive.subsets():
            if J <= I:
                closed_n[J] += 1
        if not I:
            continue
        rest = 1
        for j in range(f.k):
            if j not in I:
                rest = int(F.mul[rest, pw[f.exps[j]][x[j]]])
        mI = data.m_I(I)
        cover[I] += sum(1 for z in range(1, q) if int(F.mul[F.power(z, mI), rest]) == 1)
    out: dict[StratumSymbol, int] = {}
    for I in naive.subsets():
        out[naive.open(I)] = open_n[I]
        out[naive.complete(I)] = closed_n[I]
    for I in equi.subsets():
        out[equi.open(I)] = cover[I]
    return out


# -- comparison -----------------------------------------------------------------


@dataclass
class ComparisonRow:
    n: int
    mode: str
    lhs: Optional[int]
    rhs: Optional[int]
    ok: Optional[bool]
    note: str = ""

    def to_dict(self) -> dict:
        return {"n": self.n, "mode": self.mode, "lhs": self.lhs, "rhs": self.rhs, "ok": self.ok, "note": self.note}


@dataclass
class ComparisonReport:
    q: int
    function: MonomialFunction
    rows: list[ComparisonRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows if r.ok is not None)

    @property
    def checked(self) -> int:
        return sum(1 for r in self.rows if r.ok is not None)

    def render(self) -> str:
        lines = [f"f = {self.function} on A^{self.function.d}, q = {self.q}", f"{'n':>3} {'mode':<6} {'formula':>14} {'arcs':>14}  ok"]
        for r in self.rows:
            if r.ok is None:
                lines.append(f"{r.n:>3} {r.mode:<6} {'-':>14} {'-':>14}  skipped ({r.note})")
            else:
                lines.append(f"{r.n:>3} {r.mode:<6} {r.lhs:>14} {r.rhs:>14}  {'yes' if r.ok else 'NO'}")
        lines.append(f"all match: {'yes' if self.passed else 'no'}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"q": self.q, "function": str(self.function), "d": self.function.d, "passed": self.passed, "rows": [r.to_dict() for r in self.rows]}


def formula_count(zeta, n: int, d: int, q: int, counts) -> int:
    """``q^(nd)`` times the specialised ``T^n`` coefficient."""
    coeff = zeta.series_coefficient(n).scale(L ** (n * d))
    return specialize_count(coeff, q, counts)


def compare_zeta(q: int, n_max: int, f: MonomialFunction, budget: int = BUDGET, modes: Iterable[str] = MODES) -> ComparisonReport:
    """Compare both zeta formulas with enumerated arc counts for ``n <= n_max``.

    ``monic`` rows start at ``n = 1``; rows over budget are skipped.
    """
    data = f.resolution()
    counts = strata_counts(q, f)
    zetas = {"ord": naive_zeta(data), "monic": equivariant_zeta(data)}
    report = ComparisonReport(q, f)
    for n in range(n_max + 1):
        for mode in modes:
            if mode == "monic" and n == 0:
                continue
            task = ArcCountTask(q, n, mode, f)
            if task.size > budget:
                report.rows.append(ComparisonRow(n, mode, None, None, None, "over budget"))
                continue
            lhs = formula_count(zetas[mode], n, f.d, q, counts)
            rhs = enumerate_arcs(task, budget)
            report.rows.append(ComparisonRow(n, mode, lhs, rhs, lhs == rhs))
    return report


# -- unit twist -------------------------------------------------------------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_mod(F: FiniteField, a: list[int], b: list[int]) -> list[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = int(F.inv[b[-1]])
    while len(a) >= len(b):
        c = int(F.mul[a[-1], inv_lead])
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] = int(F.add[a[shift + i], F.neg[F.mul[c, y]]])
        a = _poly_trim(a)
    return a


def _poly_gcd_degree(F: FiniteField, a: list[int], b: list[int]) -> int:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_mod(F, a, b)
    return len(a) - 1


@dataclass
class UnitTwistReport:
    q: int
    g: tuple[int, ...]
    untwisted: int
    twisted: int

    @property
    def differ(self) -> bool:
        return self.untwisted != self.twisted

    def render(self) -> str:
        verdict = "differ" if self.differ else "equal at this q"
        return f"q = {self.q}: 2*#U = {self.untwisted}, #{{t^2 = g(x), x in U}} = {self.twisted} -> {verdict}"

    def to_dict(self) -> dict:
        return {"q": self.q, "g": list(self.g), "untwisted": self.untwisted, "twisted": self.twisted, "differ": self.differ}


def unit_twist_experiment(q: int, g: Sequence[int]) -> UnitTwistReport:
    """Count ``psi_{y^2} = mu_2 x U`` against ``{t^2 = g(x)}`` over ``U``,
    where ``U = {g != 0}`` and ``g`` has integer coefficients listed from the
    leading one down."""
    F = FiniteField(q)
    if F.p == 2:
        raise PreconditionError("q must be odd")
    coeffs = [F.from_int(c) for c in reversed(list(g))]  # ascending
    if not _poly_trim(coeffs) or len(_poly_trim(coeffs)) < 2:
        raise PreconditionError("g must be nonconstant over F_q")
    deriv = [F.from_int(i * c) for i, c in enumerate(reversed(list(g)))][1:]
    if _poly_trim(deriv) and _poly_gcd_degree(F, coeffs, deriv) > 0:
        raise PreconditionError(f"g = {list(g)} is not squarefree over F_{q}")

    def value(x: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = int(F.add[F.mul[acc, x], c])
        return acc

    U = [x for x in F.elements() if value(x) != 0]
    if not U:
        raise PreconditionError("g vanishes on all of F_q, so U is empty")
    squares = Counter(int(F.mul[y, y]) for y in F.elements())
    twisted = sum(squares[value(x)] for x in U)
    return UnitTwistReport(q, tuple(g), 2 * len(U), twisted)


def unit_twist_sweep(g: Sequence[int], qs: Iterable[int] = (3, 5, 7, 9)) -> list[UnitTwistReport]:
    out = []
    for q in qs:
        try:
            out.append(unit_twist_experiment(q, g))
        except PreconditionError:
            continue
    return out

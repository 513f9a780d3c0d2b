"""Lattice models of the cyclic covers ``s^d = x_1^p_1 ... x_k^p_k``.

The normalization of such a cover is the toric variety of the monoid
``M ∩ R_{>=0}^k`` with ``M = Z^k + Z (p/d)``.  Lattices are stored in
``d``-scaled integer coordinates in Hermite normal form, so equality is
structural after the scale is reduced.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Sequence

from .errors import EmptySubset, InputError, NotCoprime, RankTooLarge

Matrix = list[list[int]]


# -- integer linear algebra ---------------------------------------------------


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def gcd_all(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def hnf_with_transform(rows: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ rows == H``.  ``H`` is
    upper echelon, pivots positive, entries above each pivot reduced into
    ``[0, pivot)``; zero rows sit at the bottom.
    """
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    ncols = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            # [[x, y], [-b/g, a/g]] has determinant 1.
            A[r], A[i] = (
                [x * u + y * v for u, v in zip(A[r], A[i])],
                [-bg * u + ag * v for u, v in zip(A[r], A[i])],
            )
            U[r], U[i] = (
                [x * u + y * v for u, v in zip(U[r], U[i])],
                [-bg * u + ag * v for u, v in zip(U[r], U[i])],
            )
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
            U[r] = [-v for v in U[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [u - q * v for u, v in zip(A[i], A[r])]
                U[i] = [u - q * v for u, v in zip(U[i], U[r])]
        r += 1
    return A, U


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Nonzero rows of the Hermite normal form."""
    H, _ = hnf_with_transform(rows)
    return [row for row in H if any(row)]


def det(M: Sequence[Sequence]) -> int | Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    A = [[Fraction(v) for v in row] for row in M]
    n = len(A)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            out = -out
        out *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [u - f * v for u, v in zip(A[i], A[c])]
    return int(out) if out.denominator == 1 else out


def solve(M: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve ``x @ M = b`` for square invertible ``M`` (rows are generators)."""
    n = len(M)
    # Transpose so we solve M^T x = b by Gauss-Jordan.
    A = [[Fraction(M[j][i]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return None
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [v / pv for v in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [u - f * v for u, v in zip(A[i], A[c])]
    return [A[i][n] for i in range(n)]


# -- cover specifications -----------------------------------------------------


@dataclass(frozen=True)
class CoverSpec:
    """The cover ``s^d = x_1^p_1 ... x_k^p_k``."""

    d: int
    p: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(v) for v in self.p))
        if self.d < 1 or any(v < 1 for v in self.p):
            raise InputError(f"cover needs d >= 1 and p_i >= 1, got {self}")

    @property
    def k(self) -> int:
        return len(self.p)

    def __str__(self) -> str:
        return f"({self.d}; {','.join(map(str, self.p))})"


_SPEC_RE = re.compile(r"^\s*\(\s*(\d+)\s*;\s*([\d\s,]*)\)\s*$")


def parse_cover_spec(text: str) -> CoverSpec:
    """Parse ``"(d; p1,...,pk)"``."""
    m = _SPEC_RE.match(text)
    if not m:
        raise InputError(f"cannot parse cover spec {text!r}")
    ps = [int(v) for v in m.group(2).replace(" ", "").split(",") if v]
    return CoverSpec(int(m.group(1)), tuple(ps))


@dataclass(frozen=True)
class LatticeModel:
    """Full-rank lattice in ``(1/scale) Z^k``; ``basis`` rows are the HNF of
    the scaled generators.  Construct through :meth:`from_generators` to get
    the canonical form."""

    scale: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @classmethod
    def from_generators(cls, scale: int, gens: Sequence[Sequence[int]], rank: int) -> "LatticeModel":
        H = hnf(gens) if gens else []
        if len(H) != rank:
            raise InputError(f"generators span rank {len(H)}, expected {rank}")
        g = gcd_all([scale] + [v for row in H for v in row])
        return cls(scale // g, tuple(tuple(v // g for v in row) for row in H))

    def rational_basis(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(v, self.scale) for v in row) for row in self.basis]

    def index_over_integers(self) -> Fraction:
        """``[M : Z^k]`` (for lattices containing ``Z^k``)."""
        if not self.basis:
            return Fraction(1)
        return Fraction(self.scale ** self.rank, abs(det(self.basis)))

    def contains(self, v: Sequence) -> bool:
        """Membership of a rational vector."""
        scaled = [Fraction(x) * self.scale for x in v]
        if any(s.denominator != 1 for s in scaled):
            return False
        x = [int(s) for s in scaled]
        # Upper-triangular HNF: peel off one pivot column at a time.
        for row in self.basis:
            c = next(i for i, val in enumerate(row) if val)
            if x[c] % row[c]:
                return False
            f = x[c] // row[c]
            x = [a - f * b for a, b in zip(x, row)]
        return not any(x)

    def rows_text(self) -> list[str]:
        return [" ".join(str(Fraction(v, self.scale)) for v in row) for row in self.basis]


@lru_cache(maxsize=None)
def _lattice_of_cover(d: int, p: tuple[int, ...]) -> LatticeModel:
    k = len(p)
    gens = [[d if i == j else 0 for j in range(k)] for i in range(k)] + [list(p)]
    return LatticeModel.from_generators(d, gens, k)


def lattice_of_cover(spec: CoverSpec) -> LatticeModel:
    """HNF basis of ``Z^k + Z (p_1/d, ..., p_k/d)``."""
    return _lattice_of_cover(spec.d, spec.p)


def _column_kernel_transform(col: Sequence[int]) -> Matrix:
    """Unimodular ``U`` with ``U @ col = (g, 0, ..., 0)``."""
    H, U = hnf_with_transform([[v] for v in col])
    return U


def restrict_lattice(M: LatticeModel, axis: int) -> LatticeModel:
    """``{a in M : a_axis = 0}`` with the ``axis`` coordinate deleted.

    ``axis`` is 1-based.
    """
    k = M.rank
    if not 1 <= axis <= k:
        raise InputError(f"axis {axis} out of range 1..{k}")
    a = axis - 1
    U = _column_kernel_transform([row[a] for row in M.basis])
    rows = []
    for u in U[1:]:
        v = [sum(ui * row[j] for ui, row in zip(u, M.basis)) for j in range(k)]
        assert v[a] == 0
        rows.append(v[:a] + v[a + 1:])
    if k == 1:
        return LatticeModel(1, ())
    return LatticeModel.from_generators(M.scale, rows, k - 1)


def reduced_restriction_spec(spec: CoverSpec, axis: int) -> CoverSpec:
    """Spec of the restriction to ``x_axis = 0``: ``d' = gcd(d, p_axis)``."""
    a = axis - 1
    dp = gcd(spec.d, spec.p[a])
    return CoverSpec(dp, spec.p[:a] + spec.p[a + 1:])


@dataclass(frozen=True)
class ComponentDecomposition:
    c: int
    e: int
    reduced: CoverSpec


def component_decomposition(spec: CoverSpec) -> ComponentDecomposition:
    """``c = gcd(p, d)`` components, each a copy of the cover of degree
    ``e = d/c`` with exponents ``p/c``."""
    c = gcd_all((spec.d,) + spec.p)
    return ComponentDecomposition(c, spec.d // c, CoverSpec(spec.d // c, tuple(v // c for v in spec.p)))


@dataclass(frozen=True)
class CoverOrder:
    m_I: int
    alpha: tuple[int, ...]
    c_I: int


def gcd_cover_order(m: Sequence[int], I) -> CoverOrder:
    """``m_I = gcd(m_i : i in I)``, ``alpha_i = m_i / m_I`` and
    ``c_I = sum m_i``.  ``I`` holds 0-based indices into ``m``."""
    idx = sorted(I)
    if not idx:
        raise EmptySubset("gcd_cover_order needs a nonempty subset")
    vals = [m[i] for i in idx]
    g = gcd_all(vals)
    return CoverOrder(g, tuple(v // g for v in vals), sum(vals))


def unimodular_completion(alpha: Sequence[int]) -> Matrix:
    """Square integer matrix with first row ``alpha`` and determinant 1."""
    alpha = [int(v) for v in alpha]
    r = len(alpha)
    if r == 0 or gcd_all(alpha) != 1:
        raise NotCoprime(f"{alpha} is not a primitive vector")
    if alpha == [-1]:
        raise InputError("the 1x1 matrix [-1] has determinant -1")
    # U @ alpha^T = e_1  =>  alpha^T = U^{-1} e_1, so U^{-1} has first column alpha.
    U = _column_kernel_transform(alpha)
    V = _inverse_unimodular(U)
    out = [list(row) for row in zip(*V)]
    d = det(out)
    if d == -1 and r > 1:
        out[-1] = [-v for v in out[-1]]
    # Size-reduce the completing rows against alpha for readability.
    if r > 1:
        n2 = sum(v * v for v in alpha)
        for i in range(1, r):
            t = round(Fraction(sum(a * b for a, b in zip(out[i], alpha)), n2))
            if t:
                out[i] = [a - t * b for a, b in zip(out[i], alpha)]
    return out


def _inverse_unimodular(U: Matrix) -> Matrix:
    n = len(U)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        pv = A[c][c]
        A[c] = [v / pv for v in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [u - f * v for u, v in zip(A[i], A[c])]
    inv = [[int(v) for v in row[n:]] for row in A]
    return inv


def hilbert_basis(M: LatticeModel) -> list[tuple[Fraction, ...]]:
    """Minimal generators of ``M ∩ R_{>=0}^k`` for lattices containing ``Z^k``.

    Every element is a nonnegative integer combination of the unit vectors
    plus a point of the unit box, so irreducibles lie in ``[0, 1]^k``; they
    are found by enumerating the box.
    """
    k = M.rank
    if k > 3:
        raise RankTooLarge(f"hilbert_basis supports rank <= 3, got {k}")
    s = M.scale
    pts = []
    for x in product(range(s + 1), repeat=k):
        if any(x) and M.contains([Fraction(v, s) for v in x]):
            pts.append(x)
    pset = set(pts)
    irreducible = []
    for x in pts:
        reducible = False
        for y in pts:
            if y == x or any(a > b for a, b in zip(y, x)):
                continue
            z = tuple(a - b for a, b in zip(x, y))
            if any(z) and z in pset:
                reducible = True
                break
        if not reducible:
            irreducible.append(x)
    return sorted(tuple(Fraction(v, s) for v in x) for x in irreducible)


@dataclass(frozen=True)
class RestrictionAction:
    """``mu_d -> mu_d'``, ``zeta -> zeta^exponent`` with ``exponent = d/d'``;
    ``s' = s^(d/d') x^(-p_axis/d')``."""

    d: int
    d_prime: int
    exponent: int
    p_exponent: int


def restriction_action(spec: CoverSpec, axis: int) -> RestrictionAction:
    a = axis - 1
    if not 0 <= a < spec.k:
        raise InputError(f"axis {axis} out of range")
    dp = gcd(spec.d, spec.p[a])
    if spec.d % dp or spec.p[a] % dp:
        raise AssertionError("d' must divide d and p_axis")
    return RestrictionAction(spec.d, dp, spec.d // dp, spec.p[a] // dp)

"""Finite-rank obstruction calculus for 2x2 circle symbols.

Products and commutators of the block operators built in
:mod:`hardyops.operators` fail to stay inside their class by a finite-rank
defect: every defect is a signed sum of outer products of *stacked vectors*,
pairs of co-analytic coefficient tails read off the four symbol entries.
This module builds those vectors, assembles the (finite) coefficient matrix
of a signed outer-product sum, and computes its exact rank, which is what
the theorem-level classifiers in :mod:`hardyops.decisions` dispatch on.

Everything here is pure coefficient bookkeeping: no operator is ever
materialized, and in exact mode no floating point number appears.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .symbols import (
    EXACT,
    NUMERIC,
    NUMERIC_EPS,
    Coefficient,
    ExactComplex,
    LaurentPoly,
    Proportionality,
    SymbolMatrix2,
    coeff_conj,
    coeff_is_zero,
    conj_fn,
    flip_tilde,
    project_minus,
    solve_proportional,
    star,
)

__all__ = [
    "StackedVector",
    "ColumnStack",
    "OuterTerm",
    "OuterCombination",
    "RankReport",
    "ZeroProductReport",
    "stack_columns",
    "stacked_proportional",
    "outer_equal",
    "rank_of",
    "skew_rank_parity_check",
    "matrix2_zero_product",
]

# Index namespace for the direct sum: the top tail lives on (0, k), the
# bottom tail on (1, k), both with k <= -1.  Tuple ordering makes the
# canonical item order "top indices ascending, then bottom".
_TOP = 0
_BOTTOM = 1


def _clean_tail(coeffs, mode: str) -> dict:
    """Validate and canonicalize a k <= -1 sparse coefficient map."""
    out = {}
    if isinstance(coeffs, LaurentPoly):
        if coeffs.mode != mode:
            raise ValueError("tail mode disagrees with vector mode")
        coeffs = coeffs.coeffs
    for k, c in coeffs.items():
        k = int(k)
        if k > -1:
            raise ValueError(f"stacked-vector tails live on k <= -1, got index {k}")
        if not coeff_is_zero(c):
            out[k] = c
    return out


class StackedVector:
    """Two co-analytic coefficient tails glued into one column vector.

    ``top`` and ``bottom`` are sparse maps over frequencies k <= -1
    (pure negative-frequency tails), kept on disjoint index namespaces so
    the pair behaves as a vector in a direct sum, not as a pointwise sum.
    """

    __slots__ = ("top", "bottom", "mode")

    def __init__(self, top: Mapping = (), bottom: Mapping = (), mode: str = EXACT):
        if mode not in (EXACT, NUMERIC):
            raise ValueError(f"unknown arithmetic mode {mode!r}")
        object.__setattr__(self, "top", _clean_tail(dict(top) if top else {}, mode))
        object.__setattr__(self, "bottom", _clean_tail(dict(bottom) if bottom else {}, mode))
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("StackedVector is immutable")

    @classmethod
    def from_tails(cls, top: LaurentPoly, bottom: LaurentPoly) -> "StackedVector":
        """Build from two symbols whose support already lies in k <= -1."""
        if top.mode != bottom.mode:
            raise ValueError("mixed arithmetic modes in stacked vector")
        return cls(top.coeffs, bottom.coeffs, top.mode)

    # -- vector structure ---------------------------------------------------

    def items(self) -> list[tuple[tuple[int, int], Coefficient]]:
        """Canonically ordered ((component, k), coefficient) pairs."""
        out = [((_TOP, k), c) for k, c in sorted(self.top.items())]
        out += [((_BOTTOM, k), c) for k, c in sorted(self.bottom.items())]
        return out

    def as_map(self) -> dict[tuple[int, int], Coefficient]:
        return dict(self.items())

    def support(self) -> list[tuple[int, int]]:
        return [key for key, _ in self.items()]

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol <= 0.0:
            return not self.top and not self.bottom
        vals = list(self.top.values()) + list(self.bottom.values())
        return all(coeff_is_zero(c, tol) for c in vals)

    def __bool__(self) -> bool:
        return not self.is_zero()

    # -- linear operations --------------------------------------------------

    def _check_mode(self, other: "StackedVector"):
        if self.mode != other.mode:
            raise ValueError(f"mixed arithmetic modes: {self.mode} vs {other.mode}")

    def __add__(self, other):
        if not isinstance(other, StackedVector):
            return NotImplemented
        self._check_mode(other)
        top = dict(self.top)
        for k, c in other.top.items():
            top[k] = (top[k] + c) if k in top else c
        bottom = dict(self.bottom)
        for k, c in other.bottom.items():
            bottom[k] = (bottom[k] + c) if k in bottom else c
        return StackedVector(top, bottom, self.mode)

    def __sub__(self, other):
        if not isinstance(other, StackedVector):
            return NotImplemented
        return self + other.scale(-1)

    def scale(self, c) -> "StackedVector":
        if self.mode == EXACT and not isinstance(c, ExactComplex):
            c = ExactComplex(c)
        return StackedVector(
            {k: c * v for k, v in self.top.items()},
            {k: c * v for k, v in self.bottom.items()},
            self.mode,
        )

    def conjugated(self) -> "StackedVector":
        """Entrywise complex conjugate (same index layout)."""
        return StackedVector(
            {k: coeff_conj(v) for k, v in self.top.items()},
            {k: coeff_conj(v) for k, v in self.bottom.items()},
            self.mode,
        )

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, StackedVector):
            return NotImplemented
        return self.mode == other.mode and self.top == other.top and self.bottom == other.bottom

    def __hash__(self):
        return hash((frozenset(self.top.items()), frozenset(self.bottom.items()), self.mode))

    def __repr__(self):
        def fmt(d):
            return "{" + ", ".join(f"{k}: {c}" for k, c in sorted(d.items())) + "}"

        return f"StackedVector(top={fmt(self.top)}, bottom={fmt(self.bottom)})"


class ColumnStack(NamedTuple):
    """The four stacked vectors attached to one 2x2 symbol.

    ``first_column``/``second_column`` pair the strictly-positive-frequency
    tail of a column's top entry (mirrored onto k <= -1) with the
    negative-frequency tail of its bottom entry; ``first_row``/``second_row``
    carry the conjugated tails of the rows.  Products of two block operators
    stay in class exactly when the columns of the left factor and the rows
    of the right factor satisfy an outer-product identity.
    """

    first_column: StackedVector
    second_column: StackedVector
    first_row: StackedVector
    second_row: StackedVector


def stack_columns(h: SymbolMatrix2) -> ColumnStack:
    """Read the four obstruction vectors off a 2x2 symbol.

    For ``h = [[f, u], [g, v]]`` the vectors are, written on k <= -1:

    * ``first_column``  : top k -> f[-k],        bottom k -> g[k]
    * ``second_column`` : top k -> u[-k],        bottom k -> v[k]
    * ``first_row``     : top k -> conj(f[k]),   bottom k -> conj(u[-k])
    * ``second_row``    : top k -> conj(g[k]),   bottom k -> conj(v[-k])

    i.e. columns collect what the symbol does *above* frequency zero on the
    left factor, rows what it does *below* on the right factor.
    """
    f, u, g, v = h.entries()
    return ColumnStack(
        StackedVector.from_tails(project_minus(flip_tilde(f)), project_minus(g)),
        StackedVector.from_tails(project_minus(flip_tilde(u)), project_minus(v)),
        StackedVector.from_tails(project_minus(star(f)), project_minus(conj_fn(u))),
        StackedVector.from_tails(project_minus(star(g)), project_minus(conj_fn(v))),
    )


def stacked_proportional(x: StackedVector, y: StackedVector, tol: float = 0.0) -> Optional[Proportionality]:
    """Solve ``x = lam * y`` over the joint (top ++ bottom) index space.

    Same contract as :func:`hardyops.symbols.solve_proportional`: the
    candidate comes from the first index where y is nonzero and is verified
    globally; ``(0, degenerate=True)`` when both vanish, None when unsolvable.
    """
    return solve_proportional(x.as_map(), y.as_map(), tol)


# -- signed outer-product combinations ----------------------------------------


@dataclass(frozen=True)
class OuterTerm:
    """One signed dyad: sign * (left >< right)."""

    sign: int
    left: StackedVector
    right: StackedVector

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("term sign must be +1 or -1")
        if self.left.mode != self.right.mode:
            raise ValueError("mixed arithmetic modes inside an outer term")


class OuterCombination:
    """A formal signed sum of outer products of stacked vectors.

    The combination is never materialized as an operator; its action is
    captured completely by the finite matrix over the union of the left
    supports (rows) and right supports (columns), with entries

        M[a, b] = sum_i sign_i * left_i[a] * conj(right_i[b])

    matching the convention (p >< q) x = <x, q> p.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[OuterTerm] = ()):
        terms = tuple(terms)
        modes = {t.left.mode for t in terms}
        if len(modes) > 1:
            raise ValueError("mixed arithmetic modes across outer terms")
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("OuterCombination is immutable")

    @classmethod
    def dyad(cls, left: StackedVector, right: StackedVector) -> "OuterCombination":
        return cls((OuterTerm(1, left, right),))

    @classmethod
    def difference(cls, l1, r1, l2, r2) -> "OuterCombination":
        """The two-term combination l1><r1 - l2><r2."""
        return cls((OuterTerm(1, l1, r1), OuterTerm(-1, l2, r2)))

    @property
    def mode(self) -> str:
        return self.terms[0].left.mode if self.terms else EXACT

    def minus(self, other: "OuterCombination") -> "OuterCombination":
        flipped = tuple(OuterTerm(-t.sign, t.left, t.right) for t in other.terms)
        return OuterCombination(self.terms + flipped)

    def row_keys(self) -> list[tuple[int, int]]:
        keys = set()
        for t in self.terms:
            keys.update(t.left.support())
        return sorted(keys)

    def col_keys(self) -> list[tuple[int, int]]:
        keys = set()
        for t in self.terms:
            keys.update(t.right.support())
        return sorted(keys)

    def assemble(self) -> tuple[list, list, list[list[Coefficient]]]:
        """Dense coefficient matrix over the union supports (rows, cols, M)."""
        rows, cols = self.row_keys(), self.col_keys()
        zero = ExactComplex(0) if self.mode == EXACT else 0j
        factors = [(t.sign, t.left.as_map(), t.right.as_map()) for t in self.terms]
        data = [
            [
                sum(
                    (sign * lmap.get(a, zero) * coeff_conj(rmap.get(b, zero)) for sign, lmap, rmap in factors),
                    zero,
                )
                for b in cols
            ]
            for a in rows
        ]
        return rows, cols, data

    def magnitude(self) -> float:
        m = 0.0
        for t in self.terms:
            for _, c in t.left.items() + t.right.items():
                m = max(m, abs(complex(c)))
        return m


def outer_equal(lhs: OuterCombination, rhs: OuterCombination, tol: Optional[float] = None) -> bool:
    """Exact equality of two signed outer-product sums.

    Assembles the difference over the union support and tests it entrywise;
    no rank computation is involved, so this is safe as the primitive that
    everything else (including the rank-0 dispatch) reduces to.
    """
    diff = lhs.minus(rhs)
    _, _, data = diff.assemble()
    if diff.mode == NUMERIC:
        t = NUMERIC_EPS * (1.0 + diff.magnitude()) ** 2 if tol is None else tol
    else:
        t = 0.0
    return all(coeff_is_zero(c, t) for row in data for c in row)


@dataclass(frozen=True)
class RankReport:
    """Rank of an assembled combination plus range witnesses.

    ``basis_witness`` holds the pivot columns of the assembled matrix, read
    back as stacked vectors over the row index space: they span the range.
    ``relations`` records solved proportionalities between the two left
    factors and the two right factors when the combination has exactly two
    terms (the shape every in-class/commutation defect takes).
    """

    rank: int
    basis_witness: tuple[StackedVector, ...]
    relations: dict = field(default_factory=dict)


def _bareiss_rank(data: list[list[ExactComplex]]) -> tuple[int, list[int]]:
    """Fraction-free elimination; exact over rational complex entries.

    Returns (rank, pivot column indices). Divisions are by the previous
    pivot and stay exact (Bareiss); row swaps only, columns scanned left to
    right so the pivot columns are canonical.
    """
    m = [row[:] for row in data]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    one = ExactComplex(1)
    zero = ExactComplex(0)
    denom = one
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        p = next((i for i in range(r, nr) if m[i][c]), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / denom
            m[i][c] = zero
        denom = m[r][c]
        pivots.append(c)
        r += 1
    return r, pivots


def _numeric_rank(data: list[list[complex]], tol: float) -> tuple[int, list[int]]:
    """Gaussian elimination with partial pivoting and a scale-aware cutoff."""
    m = [[complex(c) for c in row] for row in data]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        p = max(range(r, nr), key=lambda i: abs(m[i][c]))
        if abs(m[p][c]) <= tol:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        for i in range(r + 1, nr):
            factor = m[i][c] / m[r][c]
            for j in range(c, nc):
                m[i][j] -= factor * m[r][j]
        pivots.append(c)
        r += 1
    return r, pivots


def rank_of(c: OuterCombination, tol: Optional[float] = None) -> RankReport:
    """Exact rank of the assembled finite matrix, with range witnesses."""
    rows, cols, data = c.assemble()
    if not rows or not cols:
        return RankReport(0, (), _pair_relations(c, tol))
    if c.mode == EXACT:
        rank, piv = _bareiss_rank(data)
    else:
        t = NUMERIC_EPS * (1.0 + c.magnitude()) ** 2 * max(len(rows), len(cols)) if tol is None else tol
        rank, piv = _numeric_rank(data, t)
    witnesses = []
    for b in piv:
        top = {k: data[a][b] for a, (comp, k) in enumerate(rows) if comp == _TOP}
        bottom = {k: data[a][b] for a, (comp, k) in enumerate(rows) if comp == _BOTTOM}
        witnesses.append(StackedVector(top, bottom, c.mode))
    return RankReport(rank, tuple(witnesses), _pair_relations(c, tol))


def _pair_relations(c: OuterCombination, tol: Optional[float]) -> dict:
    """For a two-term combination, solve second factor = lam * first factor."""
    if len(c.terms) != 2:
        return {}
    t = 0.0
    if c.mode == NUMERIC:
        t = NUMERIC_EPS * (1.0 + c.magnitude()) if tol is None else tol
    a, b = c.terms
    out = {}
    left = stacked_proportional(b.left, a.left, t)
    if left is not None:
        out["left"] = left
    right = stacked_proportional(b.right, a.right, t)
    if right is not None:
        out["right"] = right
    return out


# -- the even-rank constraint for self-paired symbols --------------------------


def skew_rank_parity_check(h1: SymbolMatrix2, h2: SymbolMatrix2, tol: Optional[float] = None) -> bool:
    """Even-rank test for the commutation defect of diagonal-matched symbols.

    Requires both symbols to repeat their diagonal (f = v entrywise); the
    defect combination built from (h1, h2) is then conjugate-skew under the
    swap-and-reflect involution of the direct sum, provided the two
    operators actually commute (the caller is responsible for that
    precondition), and a finite-rank conjugate-skew operator has even rank.
    Returns True when the computed rank is even.
    """
    for h, name in ((h1, "first"), (h2, "second")):
        if h.f != h.v:
            raise ValueError(f"{name} symbol must repeat its diagonal (f == v) for the parity check")
    s1 = stack_columns(h1)
    s2 = stack_columns(h2)
    w = OuterCombination.difference(s1.first_column, s2.first_row, s1.second_column, s2.second_row)
    return rank_of(w, tol).rank % 2 == 0


# -- the scalar 2x2 zero-product classifier ------------------------------------


@dataclass(frozen=True)
class ZeroProductReport:
    """Which structural case makes a 2x2 scalar product AB vanish.

    ``case`` is one of ``"zero-factor"`` (A = 0 or B = 0, with
    ``zero_factor`` naming the side), ``"disjoint-support"`` (second column
    of A and first row of B both vanish), ``"proportional"`` (first column
    of A is mu times the second, second row of B is -mu times the first;
    ``mu`` is the solved constant), or None when AB != 0.
    """

    case: Optional[str]
    mu: Optional[Coefficient] = None
    zero_factor: Optional[str] = None

    def __bool__(self) -> bool:
        return self.case is not None


def _coerce_matrix(m, mode: str):
    rows = [list(r) for r in m]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError("expected a 2x2 matrix")
    if mode == EXACT:
        out = []
        for r in rows:
            out.append([c if isinstance(c, ExactComplex) else ExactComplex(c) for c in r])
        return out
    return [[complex(c) for c in r] for r in rows]


def matrix2_zero_product(a, b, tol: Optional[float] = None) -> ZeroProductReport:
    """Classify when the product of two scalar 2x2 matrices vanishes.

    AB = 0 happens in exactly three structural ways: a factor is zero; the
    second column of A and the first row of B vanish (so the surviving
    column of A only ever meets the surviving row of B through zeros); or A's
    columns are proportional with ratio mu while B's rows are proportional
    with ratio -mu, so every product entry cancels. The classification is
    complete: a report with ``case=None`` means AB != 0.
    """
    numeric = any(
        isinstance(c, (float, complex)) and not isinstance(c, bool) for row in a for c in row
    ) or any(isinstance(c, (float, complex)) and not isinstance(c, bool) for row in b for c in row)
    mode = NUMERIC if numeric else EXACT
    am = _coerce_matrix(a, mode)
    bm = _coerce_matrix(b, mode)
    if mode == NUMERIC:
        scale = max(abs(c) for m in (am, bm) for row in m for c in row)
        t = NUMERIC_EPS * (1.0 + scale) if tol is None else tol
    else:
        t = 0.0

    a_zero = all(coeff_is_zero(c, t) for row in am for c in row)
    b_zero = all(coeff_is_zero(c, t) for row in bm for c in row)
    if a_zero or b_zero:
        which = "both" if a_zero and b_zero else ("left" if a_zero else "right")
        return ZeroProductReport("zero-factor", zero_factor=which)

    col1 = {0: am[0][0], 1: am[1][0]}
    col2 = {0: am[0][1], 1: am[1][1]}
    row1 = {0: bm[0][0], 1: bm[0][1]}
    row2 = {0: bm[1][0], 1: bm[1][1]}

    if all(coeff_is_zero(c, t) for c in col2.values()):
        if all(coeff_is_zero(c, t) for c in row1.values()):
            return ZeroProductReport("disjoint-support")
        return ZeroProductReport(None)

    prop = solve_proportional(col1, col2, t)
    if prop is None:
        # columns of A independent -> A invertible -> AB = 0 forces B = 0
        return ZeroProductReport(None)
    mu = prop.lam
    if all(coeff_is_zero(row2[j] + mu * row1[j], t) for j in (0, 1)):
        return ZeroProductReport("proportional", mu=mu)
    return ZeroProductReport(None)

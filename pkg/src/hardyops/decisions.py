"""Theorem-level decision procedures for 2x2-symbol block operators.

Every question answered here has the same shape: a product or commutator of
block operators built from a 2x2 circle symbol stays inside some structured
class exactly when a short list of coefficient-support conditions holds.  The
procedures below evaluate those lists symbolically -- zero tests, analyticity
tests and proportionality solves on the stacked obstruction vectors of
:mod:`hardyops.ranktests` -- and never consult the operator engine to reach a
case verdict.  The commutation system additionally verifies its two
cross-corner operator equations through :func:`hardyops.operators.op_zero_test`,
and every classifier verdict is checked for consistency against that direct
route; a disagreement raises :class:`InconsistencyError` because it can only
mean a bug, never bad input.

Case labels ("A".."E" for products, "(1)".."(13)" with "^" for the swapped
variants at rank zero, "(1)".."(16)" at rank one) are stable strings and part
of the reporting contract surfaced by the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .operators import (
    Compose,
    DualToeplitz,
    Hankel,
    OpExpr,
    OpSum,
    Scale,
    Toeplitz,
    op_zero_test,
)
from .ranktests import (
    ColumnStack,
    OuterCombination,
    StackedVector,
    rank_of,
    outer_equal,
    stack_columns,
    stacked_proportional,
)
from .symbols import (
    EXACT,
    NUMERIC_EPS,
    Coefficient,
    ExactComplex,
    InnerMonomial,
    LaurentPoly,
    SymbolMatrix2,
    coeff_conj,
    coeff_is_zero,
    conj_fn,
    flip_tilde,
    is_analytic,
    is_coanalytic,
    is_constant,
    numeric_tolerance,
    project_minus,
    solve_affine_membership,
    solve_proportional,
)

__all__ = [
    "InconsistencyError",
    "SemiCommuteVerdict",
    "IsometryVerdict",
    "CaseMatch",
    "RankClassification",
    "CommuteVerdict",
    "ThCommuteVerdict",
    "SioProductVerdict",
    "SioCommuteVerdict",
    "SioNormalVerdict",
    "QuasinormalVerdict",
    "AdtpVerdict",
    "DttCommuteVerdict",
    "semi_commute",
    "adjoint_product_symbol",
    "isometry_check",
    "residual_dyads",
    "cross_corner_defect",
    "commute",
    "commute_classify_rank0",
    "commute_classify_rank1",
    "commute_classify_rank2",
    "th_commute",
    "sio_product",
    "sio_commute",
    "sio_normal",
    "sio_quasinormal",
    "adtp_product",
    "dtt_commute",
]


class InconsistencyError(RuntimeError):
    """The case classifier and the direct equation check disagree.

    The two routes are mathematically equivalent, so this is always an
    internal defect (or a symbol outside the banded class the engine
    supports), never a property of the input pair.
    """


# ---------------------------------------------------------------------------
# shared small helpers
# ---------------------------------------------------------------------------


def _mode_tol(*matrices: SymbolMatrix2) -> float:
    if all(m.mode == EXACT for m in matrices):
        return 0.0
    polys = [p for m in matrices for p in m.entries()]
    return numeric_tolerance(*polys)


def _vanishes(p: LaurentPoly, tol: float) -> bool:
    return all(coeff_is_zero(c, tol) for _, c in p)


def _poly_eq(a: LaurentPoly, b: LaurentPoly, tol: float) -> bool:
    return _vanishes(a - b, tol)


def _ceq(a: Coefficient, b: Coefficient, tol: float) -> bool:
    return coeff_is_zero(a - b, tol)


def _one(mode: str) -> Coefficient:
    return ExactComplex(1) if mode == EXACT else complex(1.0)


def _unimodular(c: Coefficient, tol: float) -> bool:
    if isinstance(c, ExactComplex):
        return c.abs2() == Fraction(1)
    return abs(abs(complex(c)) - 1.0) <= max(tol, NUMERIC_EPS)


def _abs2_less_than_one(c: Coefficient, tol: float) -> bool:
    if isinstance(c, ExactComplex):
        return c.abs2() < Fraction(1)
    return abs(complex(c)) < 1.0 - max(tol, NUMERIC_EPS)


def _nonconstant_part(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({k: c for k, c in p if k != 0}, p.mode)


def _stacked_eq(x: StackedVector, y: StackedVector, tol: float) -> bool:
    return (x - y).is_zero(tol)


# ---------------------------------------------------------------------------
# when is a product of two block operators again a block operator?
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemiCommuteVerdict:
    """Outcome of the stays-in-class test for a product of two block operators.

    ``case`` is one of "A".."E" when ``is_gsio`` holds: "A"-"D" are the four
    ways both residual dyads can vanish outright, "E" the coupled
    proportional collapse with its nonzero constant ``lam``.  ``product`` is
    the symbol of the product operator per the matching closed formula.
    """

    is_gsio: bool
    case: Optional[str] = None
    lam: Optional[Coefficient] = None
    product: Optional[SymbolMatrix2] = None


def semi_commute(h1: SymbolMatrix2, h2: SymbolMatrix2, tol: Optional[float] = None) -> SemiCommuteVerdict:
    """Decide whether the composition of the two block operators stays in class.

    The product fails to be a block operator by exactly one finite-rank
    defect: the difference of two outer products of stacked vectors read off
    the symbols.  The defect vanishes in five mutually classifiable ways;
    dispatch order is A, B, C, D, E (first match wins when zero patterns
    overlap).
    """
    if tol is None:
        tol = _mode_tol(h1, h2)
    s1 = stack_columns(h1)
    s2 = stack_columns(h2)
    x1, x2 = s1.first_column, s1.second_column
    y1, y2 = s2.first_row, s2.second_row
    if not outer_equal(OuterCombination.dyad(x1, y1), OuterCombination.dyad(x2, y2)):
        return SemiCommuteVerdict(False)

    f1, u1, g1, v1 = h1.entries()
    f2, u2, g2, v2 = h2.entries()
    ff, vv = f1 * f2, v1 * v2
    z1, z2, z3, z4 = (s.is_zero(tol) for s in (x1, x2, y1, y2))
    zero = LaurentPoly.zero(h1.mode)

    if z1 and z2:
        return SemiCommuteVerdict(True, "A", None, SymbolMatrix2(ff, f1 * u2, v1 * g2, vv))
    if z1 and z4:
        return SemiCommuteVerdict(True, "B", None, SymbolMatrix2(ff, f1 * u2 + u1 * v2, zero, vv))
    if z3 and z2:
        return SemiCommuteVerdict(True, "C", None, SymbolMatrix2(ff, zero, g1 * f2 + v1 * g2, vv))
    if z3 and z4:
        return SemiCommuteVerdict(True, "D", None, SymbolMatrix2(ff, u1 * v2, g1 * f2, vv))

    prop = stacked_proportional(x1, x2, tol)
    if prop is None or prop.degenerate or coeff_is_zero(prop.lam, tol):
        raise InconsistencyError("residual dyads agree but no collapse pattern applies")
    lam = prop.lam
    if not _stacked_eq(y2, y1.scale(coeff_conj(lam)), tol):
        raise InconsistencyError("coupled collapse constant fails on the row side")
    inv = _one(h1.mode) / lam
    product = SymbolMatrix2(ff, (f1 * v2).scale(inv), (v1 * f2).scale(lam), vv)
    return SemiCommuteVerdict(True, "E", lam, product)


def adjoint_product_symbol(h: SymbolMatrix2) -> SymbolMatrix2:
    """Symbol of ``S* S`` for a singular-integral shaped ``h = [[f, g], [f, g]]``.

    The adjoint-times-itself product of such an operator is always in class;
    its symbol is the Gram-like matrix [[|f|^2, conj(f) g], [f conj(g), |g|^2]].
    """
    if not h.is_sio_shaped():
        raise ValueError("adjoint_product_symbol needs a singular-integral shaped symbol")
    f, g = h.f, h.u
    return SymbolMatrix2(f * conj_fn(f), conj_fn(f) * g, f * conj_fn(g), g * conj_fn(g))


@dataclass(frozen=True)
class IsometryVerdict:
    isometry: bool
    case: Optional[str] = None  # "(a)" diagonal splitting, "(b)" unimodular pairing
    lam: Optional[Coefficient] = None


def isometry_check(h: SymbolMatrix2, tol: Optional[float] = None) -> IsometryVerdict:
    """Decide whether the block operator of ``h`` is an isometry.

    Both diagonal symbols must be unimodular as functions (f conj(f) = 1 =
    v conj(v)); on top of that either (a) the four entries split the operator
    into a shift-type direct sum (f, g analytic, u, v coanalytic), or (b) a
    unimodular constant couples the rows: f - lam*g, conj(u) - conj(lam*v)
    and f*conj(v) all analytic.
    """
    if tol is None:
        tol = _mode_tol(h)
    one = LaurentPoly.one(h.mode)
    if not (_poly_eq(h.f * conj_fn(h.f), one, tol) and _poly_eq(h.v * conj_fn(h.v), one, tol)):
        return IsometryVerdict(False)
    if (
        is_analytic(h.f, tol)
        and is_analytic(h.g, tol)
        and is_coanalytic(h.u, tol)
        and is_coanalytic(h.v, tol)
    ):
        return IsometryVerdict(True, "(a)")
    cols = stack_columns(h)
    prop = stacked_proportional(cols.first_row, cols.second_row, tol)
    if prop is not None and not prop.degenerate:
        lam = coeff_conj(prop.lam)
        if _unimodular(lam, tol) and is_analytic(h.f * conj_fn(h.v), tol):
            return IsometryVerdict(True, "(b)", lam)
    return IsometryVerdict(False)


# ---------------------------------------------------------------------------
# the commutation system: one outer identity plus two corner equations
# ---------------------------------------------------------------------------


def residual_dyads(h1: SymbolMatrix2, h2: SymbolMatrix2) -> tuple[OuterCombination, OuterCombination]:
    """The two product defects whose equality is the third commutation equation.

    The first combination is the defect of the (h1 then h2) product, the
    second of the reversed product; each is a difference of two dyads and
    therefore has rank at most two.
    """
    s1 = stack_columns(h1)
    s2 = stack_columns(h2)
    side12 = OuterCombination.difference(s1.first_column, s2.first_row, s1.second_column, s2.second_row)
    side21 = OuterCombination.difference(s2.first_column, s1.first_row, s2.second_column, s1.second_row)
    return side12, side21


def cross_corner_defect(h1: SymbolMatrix2, h2: SymbolMatrix2) -> OpExpr:
    """The lower-left corner of the commutator, as an operator expression.

    Commutation forces this analytic-to-coanalytic map to vanish; the upper
    corner equation is the same expression evaluated on the adjoint symbols.
    """
    return OpSum(
        [
            Compose(Hankel(h1.g), Toeplitz(h2.f)),
            Compose(DualToeplitz(h1.v), Hankel(h2.g)),
            Scale(-1, Compose(Hankel(h2.g), Toeplitz(h1.f))),
            Scale(-1, Compose(DualToeplitz(h2.v), Hankel(h1.g))),
        ]
    )


def _three_equations(h1: SymbolMatrix2, h2: SymbolMatrix2, tol: Optional[float] = None) -> tuple[bool, bool, bool]:
    """(outer identity, corner equation, adjoint corner equation)."""
    side12, side21 = residual_dyads(h1, h2)
    ww = outer_equal(side12, side21, tol)
    lower = op_zero_test(cross_corner_defect(h1, h2), tol=tol)
    upper = op_zero_test(cross_corner_defect(h1.adjoint_symbol(), h2.adjoint_symbol()), tol=tol)
    return ww, lower, upper


@dataclass(frozen=True)
class CaseMatch:
    """One verified classification case.

    ``cells`` lists the collapse-pattern combinations ("L3+R1", ...) that led
    to the case; several cells can map to one printed case and one pair can
    satisfy several cases, so matches are reported exhaustively rather than
    picking a winner.  ``reconstructed_side_conditions`` marks rank-one
    matches whose nonvanishing factor requirements are enforced from the
    general remark rather than from an explicit per-case list.
    """

    label: str
    cells: tuple[str, ...]
    constants: dict
    reconstructed_side_conditions: bool = False


@dataclass(frozen=True)
class RankClassification:
    rank: int
    matches: tuple[CaseMatch, ...]


@dataclass(frozen=True)
class CommuteVerdict:
    commutes: bool
    outer_match: bool
    corner_equation: bool
    conjugate_corner_equation: bool
    rank: Optional[int] = None
    classification: Optional[RankClassification] = None


def commute(h1: SymbolMatrix2, h2: SymbolMatrix2, tol: Optional[float] = None) -> CommuteVerdict:
    """Decide commutation of the two block operators, with case classification.

    Three equations characterize commutation: the outer identity between the
    two product defects, and the vanishing of the commutator's two off-diagonal
    corners.  The corners are tested directly on the operator engine; the
    outer identity is tested on the assembled coefficient matrices.  When the
    outer identity holds the common defect rank (0, 1 or 2) selects a
    classifier, whose verified cases must agree with the direct verdict in
    both directions.
    """
    if tol is None:
        tol = _mode_tol(h1, h2)
    ww, lower, upper = _three_equations(h1, h2)
    commutes = ww and lower and upper

    rank = None
    classification = None
    if ww:
        side12, _ = residual_dyads(h1, h2)
        rank = rank_of(side12).rank
        if rank == 0:
            classification = commute_classify_rank0(h1, h2, tol)
        elif rank == 1:
            classification = commute_classify_rank1(h1, h2, tol)
        else:
            classification = commute_classify_rank2(h1, h2, tol)

    matched = classification is not None and bool(classification.matches)
    if commutes and not matched:
        raise InconsistencyError("pair commutes but no classification case matched")
    if matched and not commutes:
        raise InconsistencyError(
            "classification case verified on a non-commuting pair "
            f"(outer={ww}, corner={lower}, adjoint corner={upper})"
        )
    return CommuteVerdict(commutes, ww, lower, upper, rank, classification)


# -- collapse-pattern detection shared by the rank classifiers -----------------


def _collapse_patterns(a: SymbolMatrix2, b: SymbolMatrix2, tol: float) -> dict[int, dict]:
    """All ways the forward defect of the ordered pair (a, b) vanishes.

    Returns ``{pattern index: constants}`` where indices 1..4 are the four
    zero combinations of the two column stacks of ``a`` against the two row
    stacks of ``b``, and 5 is the coupled proportional collapse carrying its
    nonzero constant under key "lam".
    """
    sa, sb = stack_columns(a), stack_columns(b)
    x1, x2 = sa.first_column, sa.second_column
    y1, y2 = sb.first_row, sb.second_row
    out: dict[int, dict] = {}
    if x1.is_zero(tol) and x2.is_zero(tol):
        out[1] = {}
    if x1.is_zero(tol) and y2.is_zero(tol):
        out[2] = {}
    if y1.is_zero(tol) and x2.is_zero(tol):
        out[3] = {}
    if y1.is_zero(tol) and y2.is_zero(tol):
        out[4] = {}
    p = stacked_proportional(x1, x2, tol)
    if p is not None and not p.degenerate and not coeff_is_zero(p.lam, tol):
        q = stacked_proportional(y2, y1, tol)
        if q is not None and not q.degenerate and _ceq(q.lam, coeff_conj(p.lam), tol):
            out[5] = {"lam": p.lam}
    return out


# -- rank zero ------------------------------------------------------------------


def _an(p: LaurentPoly, tol: float) -> bool:
    return is_analytic(p, tol if tol else None) if p.mode != EXACT else is_analytic(p)


def _co(p: LaurentPoly, tol: float) -> bool:
    return is_coanalytic(p, tol if tol else None) if p.mode != EXACT else is_coanalytic(p)


def _const(p: LaurentPoly, tol: float) -> bool:
    return is_constant(p, tol if tol else None) is not None if p.mode != EXACT else is_constant(p) is not None


def _rank0_case(label: str, p: SymbolMatrix2, q: SymbolMatrix2, tol: float, lam=None, mu=None) -> Optional[dict]:
    """Verify one printed rank-zero case on the ordered pair (p, q).

    The label names the base case; swapped variants are handled by the caller
    passing the pair in reversed order.  Returns the constants dict on
    success (possibly empty), None when any clause fails.
    """
    f1, u1, g1, v1 = p.entries()
    f2, u2, g2, v2 = q.entries()
    fb1, ub1, vb1 = conj_fn(f1), conj_fn(u1), conj_fn(v1)
    fb2, ub2, vb2 = conj_fn(f2), conj_fn(u2), conj_fn(v2)

    if label == "1":
        ok = (
            _co(f1, tol) and _co(f2, tol) and _an(g1, tol) and _an(g2, tol)
            and _co(u1, tol) and _co(u2, tol) and _an(v1, tol) and _an(v2, tol)
        )
        return {} if ok else None
    if label == "2":
        ok = (
            _co(f1, tol) and _co(f2, tol) and _an(g1, tol) and _an(g2, tol) and _co(u2, tol)
            and _an((fb2 - vb2) * ub1, tol) and _const(v2, tol)
        )
        return {} if ok else None
    if label == "3":
        ok = (
            _an(g2, tol) and _co(u1, tol) and _co(u2, tol) and _an(v1, tol) and _an(v2, tol)
            and _an((f2 - v2) * g1, tol) and _const(f2, tol)
        )
        return {} if ok else None
    if label == "4":
        ok = (
            _an(g2, tol) and _co(u2, tol)
            and _an((fb2 - vb2) * ub1, tol) and _an((f2 - v2) * g1, tol)
            and _const(f2, tol) and _const(v2, tol)
        )
        return {} if ok else None
    if label == "5":
        ok = (
            _co(f1, tol) and _co(f2, tol) and _an(g1, tol) and _an(g2, tol)
            and _co(v1, tol) and _co(v2, tol)
            and _an((fb1 - vb1) * ub2 - (fb2 - vb2) * ub1, tol)
        )
        return {} if ok else None
    if label == "6":
        ok = (
            _an(g1, tol) and _an(g2, tol) and _co(u1, tol) and _co(u2, tol)
            and _const(f2, tol) and _const(v1, tol)
        )
        return {} if ok else None
    if label == "7":
        ok = (
            _an(g1, tol) and _an(g2, tol) and _co(u2, tol) and _co(v1, tol) and _co(v2, tol)
            and _an((fb2 - vb2) * ub1, tol) and _const(f2, tol)
        )
        return {} if ok else None
    if label == "8":
        if lam is None or coeff_is_zero(lam, tol):
            return None
        lb = coeff_conj(lam)
        ok = (
            _an(g1, tol) and _an(g2, tol)
            and _an(fb1 - ub1.scale(lb), tol) and _an(vb2 - ub2.scale(lb), tol)
            and _an(fb1 * fb2 + vb1 * vb2 - fb1 * vb2, tol)
            and _const(f2, tol) and _const(v1, tol)
        )
        return {"lam": lam} if ok else None
    if label == "9":
        ok = (
            _an(f1, tol) and _an(f2, tol) and _co(u1, tol) and _co(u2, tol)
            and _an(v1, tol) and _an(v2, tol)
            and _an((f2 - v2) * g1 - (f1 - v1) * g2, tol)
        )
        return {} if ok else None
    if label == "10":
        ok = (
            _an(f1, tol) and _an(f2, tol) and _an(g2, tol) and _co(u1, tol) and _co(u2, tol)
            and _an((f2 - v2) * g1, tol) and _const(v2, tol)
        )
        return {} if ok else None
    if label == "11":
        if lam is None or coeff_is_zero(lam, tol):
            return None
        ok = (
            _co(u1, tol) and _co(u2, tol)
            and _an(g1 - v1.scale(lam), tol) and _an(g2 - f2.scale(lam), tol)
            and _an(f1 * f2 + v1 * v2 - v1 * f2, tol)
            and _const(f1, tol) and _const(v2, tol)
        )
        return {"lam": lam} if ok else None
    if label == "12":
        ok = (
            _an(f1, tol) and _an(f2, tol) and _an(g1, tol) and _an(g2, tol)
            and _co(u1, tol) and _co(u2, tol) and _co(v1, tol) and _co(v2, tol)
        )
        return {} if ok else None
    if label == "13":
        if lam is None or mu is None or coeff_is_zero(lam, tol) or coeff_is_zero(mu, tol):
            return None
        lb, mb = coeff_conj(lam), coeff_conj(mu)
        ok = (
            _an(fb1 - ub1.scale(lb), tol) and _an(g1 - v1.scale(lam), tol)
            and _an(g2 - f2.scale(lam), tol) and _an(vb2 - ub2.scale(lb), tol)
            and _an(fb2 - ub2.scale(mb), tol) and _an(g2 - v2.scale(mu), tol)
            and _an(g1 - f1.scale(mu), tol) and _an(vb1 - ub1.scale(mb), tol)
            and _const((f2 * v1).scale(lam) - (f1 * v2).scale(mu), tol)
        )
        return {"lam": lam, "mu": mu} if ok else None
    raise ValueError(f"unknown rank-zero case label {label!r}")


# (pattern on the forward side, pattern on the reversed side) -> printed case.
# A trailing "^" means the case list is evaluated with the symbols swapped
# (and its solved constant renamed from lam to mu).
_RANK0_TABLE: dict[tuple[int, int], str] = {
    (1, 1): "1", (2, 1): "2", (3, 1): "3", (4, 1): "4", (5, 1): "4",
    (1, 2): "2^", (2, 2): "5", (3, 2): "6", (4, 2): "7", (5, 2): "8",
    (1, 3): "3^", (2, 3): "6^", (3, 3): "9", (4, 3): "10", (5, 3): "11",
    (1, 4): "4^", (2, 4): "7^", (3, 4): "10^", (4, 4): "12", (5, 4): "4^",
    (1, 5): "4^", (2, 5): "8^", (3, 5): "11^", (4, 5): "4", (5, 5): "13",
}


def commute_classify_rank0(h1: SymbolMatrix2, h2: SymbolMatrix2, tol: Optional[float] = None) -> RankClassification:
    """Classify a commuting pair whose product defects both vanish.

    Every combination of collapse patterns on the two sides maps to one of
    thirteen printed case lists (or a swapped variant); the combination table
    is not disjoint, so all verified cases are reported, each with the cells
    that reached it and any solved constants.
    """
    if tol is None:
        tol = _mode_tol(h1, h2)
    side12, side21 = residual_dyads(h1, h2)
    if rank_of(side12).rank != 0 or rank_of(side21).rank != 0:
        raise ValueError("rank-0 classification requires both product defects to vanish")

    forward = _collapse_patterns(h1, h2, tol)
    backward = _collapse_patterns(h2, h1, tol)
    if not forward or not backward:
        raise InconsistencyError("vanishing defect without a collapse pattern")

    found: dict[str, dict] = {}
    cells: dict[str, list[str]] = {}
    for li, lconst in forward.items():
        for rj, rconst in backward.items():
            label = _RANK0_TABLE[(li, rj)]
            lam = lconst.get("lam")
            mu = rconst.get("lam")
            if label.endswith("^"):
                result = _rank0_case(label[:-1], h2, h1, tol, lam=mu, mu=lam)
                constants = (
                    None if result is None
                    else {("mu" if k == "lam" else "lam"): v for k, v in result.items()}
                )
            else:
                constants = _rank0_case(label, h1, h2, tol, lam=lam, mu=mu)
            if constants is None:
                continue
            if label not in found:
                found[label] = constants
                cells[label] = []
            cells[label].append(f"L{li}+R{rj}")

    def _order(lbl: str) -> tuple[int, int]:
        return int(lbl.rstrip("^")), lbl.endswith("^")

    matches = tuple(
        CaseMatch(f"({lbl})", tuple(cells[lbl]), found[lbl])
        for lbl in sorted(found, key=_order)
    )
    return RankClassification(0, matches)


# -- rank one -------------------------------------------------------------------


def _relation_constants(h1: SymbolMatrix2, h2: SymbolMatrix2, tol: float) -> dict[int, Coefficient]:
    """Solve the four single-side proportionality patterns for the ordered pair.

    Pattern 1: first column of h1 = lam * second column; 2: the reverse;
    3: first row of h2 = lam * second row; 4: the reverse.  Only patterns
    with a determined (possibly zero) constant are returned.
    """
    s1, s2 = stack_columns(h1), stack_columns(h2)
    candidates = {
        1: (s1.first_column, s1.second_column),
        2: (s1.second_column, s1.first_column),
        3: (s2.first_row, s2.second_row),
        4: (s2.second_row, s2.first_row),
    }
    out = {}
    for idx, (target, base) in candidates.items():
        prop = stacked_proportional(target, base, tol)
        if prop is not None and not prop.degenerate:
            out[idx] = prop.lam
    return out


def _rank1_factors(
    pattern: int, stacks_a: ColumnStack, stacks_b: ColumnStack, lam: Coefficient
) -> tuple[StackedVector, StackedVector]:
    """Collapse the forward defect of (a, b) into a single dyad under a pattern."""
    x1, x2 = stacks_a.first_column, stacks_a.second_column
    y1, y2 = stacks_b.first_row, stacks_b.second_row
    lb = coeff_conj(lam)
    if pattern == 1:
        return x2, y1.scale(lb) - y2
    if pattern == 2:
        return x1, y1 - y2.scale(lb)
    if pattern == 3:
        return x1.scale(lb) - x2, y2
    if pattern == 4:
        return x1 - x2.scale(lb), y1
    raise ValueError(f"unknown collapse pattern {pattern}")


def _rank1_long_clauses(
    cell: tuple[int, int],
    h1: SymbolMatrix2,
    h2: SymbolMatrix2,
    lam: Coefficient,
    mu: Coefficient,
    alpha: Coefficient,
) -> tuple[LaurentPoly, LaurentPoly]:
    """The two product-membership clauses closing each rank-one case.

    Each cell of the 4x4 pattern grid carries its own pair: one clause lives
    on the conjugated entries (it kills the upper corner of the commutator),
    the other on the plain entries (the lower corner).  Both must be analytic.
    """
    f1, u1, g1, v1 = h1.entries()
    f2, u2, g2, v2 = h2.entries()
    fb1, ub1, vb1 = conj_fn(f1), conj_fn(u1), conj_fn(v1)
    fb2, ub2, vb2 = conj_fn(f2), conj_fn(u2), conj_fn(v2)
    lb, mb, ab = coeff_conj(lam), coeff_conj(mu), coeff_conj(alpha)

    i, j = cell
    if j == 1:
        if i == 1:
            e12 = (
                ub2 * fb1 - ub1 * fb2 + (ub1 * ub2).scale(mb) - vb1 * ub2
                + (vb2 * ub2).scale(ab) - (ub2 * ub2).scale(lb * ab)
            )
            e21 = g2 * (v1 - v2.scale(alpha)) + v2 * (f2.scale(alpha * lam) - f1.scale(mu))
        elif i == 2:
            e12 = (
                ub2 * fb1 - ub1 * fb2 - (ub2 * ub2).scale(ab) + (vb2 * ub2).scale(lb * ab)
                + (ub1 * ub2).scale(mb) - vb1 * ub2
            )
            e21 = g2 * (v1 - v2.scale(lam * alpha)) + v2 * (f2.scale(alpha) - f1.scale(mu))
        elif i == 3:
            e12 = (vb2 * fb1).scale(lam) - ub1 * fb2 + ub2 * (ub1.scale(mb) - vb1) - (vb2 * ub2).scale(ab)
            e21 = g1 * f2 + g2 * v1 - (g1 * g2).scale(lb) - (f1 * v2).scale(mu) + (v2 * g2).scale(alpha)
        else:
            e12 = (
                vb2 * ub1 - ub1 * fb2 + ub2 * (fb1 - ub1.scale(lam))
                + ub2 * (ub1.scale(mb) - vb1) - (ub2 * ub2).scale(ab)
            )
            e21 = (v1 * f2).scale(lb) - (f1 * v2).scale(mu) + (v2 * f2).scale(alpha)
    elif j == 2:
        if i == 1:
            e12 = ub2 * fb1 + (fb2 * vb2).scale(ab) - (fb2 * ub2).scale(lb * ab) - (vb1 * fb2).scale(mb)
            e21 = (
                v1 * g2 - v2 * g1 + (g2 * f2).scale(alpha * lam) - (g2 * g2).scale(alpha)
                + (g1 * g2).scale(mu) - f1 * g2
            )
        elif i == 2:
            e12 = ub2 * fb1 + (vb2 * fb2).scale(ab * lb) - (ub2 * fb2).scale(ab) - (vb1 * fb2).scale(mb)
            e21 = (
                v1 * g2 - v2 * g1 + (f2 * g2).scale(alpha) - (g2 * g2).scale(lam * alpha)
                + (g1 * g2).scale(mu) - f1 * g2
            )
        elif i == 3:
            e12 = (vb2 * fb1).scale(lam) - (vb1 * fb2).scale(mb) - (vb2 * fb2).scale(ab)
            e21 = (
                g1 * f2 - v2 * g1 + (v1 - g1.scale(lb)) * g2 + g2 * (g1.scale(mu) - f1)
                + (g2 * g2).scale(alpha)
            )
        else:
            e12 = (
                vb2 * ub1 + fb1 * ub2 - (ub1 * ub2).scale(lam) - (vb1 * fb2).scale(mb)
                - (fb2 * ub2).scale(ab)
            )
            e21 = -(v2 * g1) + (v1 * f2).scale(lb) + g2 * (g1.scale(mu) - f1) + (f2 * g2).scale(alpha)
    elif j == 3:
        if i == 1:
            e12 = ub2 * fb1 - vb1 * ub2 + ((fb2.scale(mu) - ub2) * (vb2 - ub2.scale(lb))).scale(ab)
            e21 = v1 * g2 - g2 * f1 + ((g2.scale(mb) - v2) * (f2.scale(lam) - g2)).scale(alpha)
        elif i == 2:
            e12 = ub2 * fb1 - vb1 * ub2 + ((fb2.scale(mu) - ub2) * (vb2.scale(lb) - ub2)).scale(ab)
            e21 = v1 * g2 - g2 * f1 + ((g2.scale(mb) - v2) * (f2 - g2.scale(lam))).scale(alpha)
        elif i == 3:
            e12 = -(vb1 * ub2) + (vb2 * fb1).scale(lam) + (vb2 * (ub2 - fb2.scale(mu))).scale(ab)
            e21 = g1 * f2 - g2 * f1 + (v1 - g1.scale(lb)) * g2 + (g2 * (g2.scale(mb) - v2)).scale(alpha)
        else:
            e12 = (
                vb2 * ub1 - vb1 * ub2 + ub2 * (fb1 - ub1.scale(lam))
                + (ub2 * (ub2 - fb2.scale(mu))).scale(ab)
            )
            e21 = -(g2 * f1) + (v1 * f2).scale(lb) + (f2 * (g2.scale(mb) - v2)).scale(alpha)
    else:
        if i == 1:
            e12 = ub2 * fb1 - vb1 * ub2 + ((vb2 - ub2.scale(lb)) * (fb2 - ub2.scale(mu))).scale(ab)
            e21 = v1 * g2 - g2 * f1 + ((g2 - v2.scale(mb)) * (f2.scale(lam) - g2)).scale(alpha)
        elif i == 2:
            e12 = ub2 * fb1 - vb1 * ub2 + ((fb2 - ub2.scale(mu)) * (vb2.scale(lb) - ub2)).scale(ab)
            e21 = v1 * g2 - g2 * f1 + ((g2 - v2.scale(mb)) * (f2 - g2.scale(lam))).scale(alpha)
        elif i == 3:
            e12 = -(vb1 * ub2) + (vb2 * fb1).scale(lam) + (vb2 * (ub2.scale(mu) - fb2)).scale(ab)
            e21 = g1 * f2 - g2 * f1 + (v1 - g1.scale(lb)) * g2 + (g2 * (g2 - v2.scale(mb))).scale(alpha)
        else:
            e12 = (
                vb2 * ub1 - vb1 * ub2 + ub2 * (fb1 - ub1.scale(lam))
                + (ub2 * (ub2.scale(mu) - fb2)).scale(ab)
            )
            e21 = -(g2 * f1) + (v1 * f2).scale(lb) + (f2 * (g2 - v2.scale(mb))).scale(alpha)
    return e12, e21


def commute_classify_rank1(h1: SymbolMatrix2, h2: SymbolMatrix2, tol: Optional[float] = None) -> RankClassification:
    """Classify a commuting pair whose product defects have rank one.

    A rank-one defect forces a proportionality between the two column stacks
    of the left symbol or between the two row stacks of the right one — four
    patterns per side, sixteen cells.  For each holding cell the single-dyad
    factorizations of the two defects must be linked by one nonzero constant
    alpha, and the cell's two product-membership clauses must be analytic;
    all of that together certifies commutation.
    """
    if tol is None:
        tol = _mode_tol(h1, h2)
    side12, side21 = residual_dyads(h1, h2)
    if rank_of(side12).rank != 1 or rank_of(side21).rank != 1:
        raise ValueError("rank-1 classification requires both product defects to have rank one")

    s1, s2 = stack_columns(h1), stack_columns(h2)
    left_patterns = _relation_constants(h1, h2, tol)
    right_patterns = _relation_constants(h2, h1, tol)

    matches = []
    for i, lam in left_patterns.items():
        left12, right12 = _rank1_factors(i, s1, s2, lam)
        if left12.is_zero(tol) or right12.is_zero(tol):
            continue
        for j, mu in right_patterns.items():
            left21, right21 = _rank1_factors(j, s2, s1, mu)
            if left21.is_zero(tol) or right21.is_zero(tol):
                continue
            link = stacked_proportional(left12, left21, tol)
            if link is None or link.degenerate or coeff_is_zero(link.lam, tol):
                continue
            alpha = link.lam
            if not _stacked_eq(right21, right12.scale(coeff_conj(alpha)), tol):
                continue
            e12, e21 = _rank1_long_clauses((i, j), h1, h2, lam, mu, alpha)
            if not (_an(e12, tol) and _an(e21, tol)):
                continue
            case = (j - 1) * 4 + i
            matches.append(
                CaseMatch(
                    f"({case})",
                    (f"L{i}+R{j}",),
                    {"lam": lam, "mu": mu, "alpha": alpha},
                    reconstructed_side_conditions=case != 1,
                )
            )
    matches.sort(key=lambda m: int(m.label.strip("()")))
    return RankClassification(1, tuple(matches))


# -- rank two -------------------------------------------------------------------


def _solve_two_term(
    target: StackedVector, b1: StackedVector, b2: StackedVector, tol: float
) -> Optional[tuple[Coefficient, Coefficient]]:
    """Exact coordinates of ``target`` in the (independent) pair ``b1, b2``."""
    mode = target.mode
    zero = ExactComplex(0) if mode == EXACT else complex(0.0)
    m1, m2, mt = b1.as_map(), b2.as_map(), target.as_map()
    keys = sorted(set(m1) | set(m2) | set(mt))
    n = len(keys)
    for a in range(n):
        p11 = m1.get(keys[a], zero)
        p12 = m2.get(keys[a], zero)
        for b in range(a + 1, n):
            p21 = m1.get(keys[b], zero)
            p22 = m2.get(keys[b], zero)
            det = p11 * p22 - p12 * p21
            if coeff_is_zero(det, tol):
                continue
            t1 = mt.get(keys[a], zero)
            t2 = mt.get(keys[b], zero)
            x = (t1 * p22 - t2 * p12) / det
            y = (p11 * t2 - p21 * t1) / det
            if (target - b1.scale(x) - b2.scale(y)).is_zero(tol):
                return x, y
            return None  # coordinates are unique once a pivot exists
    return None


def commute_classify_rank2(h1: SymbolMatrix2, h2: SymbolMatrix2, tol: Optional[float] = None) -> RankClassification:
    """Classify a commuting pair whose product defects have full rank two.

    Rank two makes the column stacks of the second symbol independent, so the
    first symbol's stacks have unique expansion coefficients (a, b) and
    (c, d) over them.  Commutation then pins the conjugate expansions of the
    row stacks with the same four constants (sign-twisted), and requires the
    eight entry-wise memberships plus two product-membership clauses.
    """
    if tol is None:
        tol = _mode_tol(h1, h2)
    side12, side21 = residual_dyads(h1, h2)
    if rank_of(side12).rank != 2 or rank_of(side21).rank != 2:
        raise ValueError("rank-2 classification requires both product defects to have rank two")

    s1, s2 = stack_columns(h1), stack_columns(h2)
    ab = _solve_two_term(s1.first_column, s2.first_column, s2.second_column, tol)
    cd = _solve_two_term(s1.second_column, s2.first_column, s2.second_column, tol)
    if ab is None or cd is None:
        return RankClassification(2, ())
    a, b = ab
    c, d = cd
    ac, bc, cc, dc = coeff_conj(a), coeff_conj(b), coeff_conj(c), coeff_conj(d)

    if not _stacked_eq(s1.first_row, s2.first_row.scale(ac) - s2.second_row.scale(cc), tol):
        return RankClassification(2, ())
    if not _stacked_eq(s1.second_row, s2.second_row.scale(dc) - s2.first_row.scale(bc), tol):
        return RankClassification(2, ())

    f1, u1, g1, v1 = h1.entries()
    f2, u2, g2, v2 = h2.entries()
    fb1, ub1, vb1 = conj_fn(f1), conj_fn(u1), conj_fn(v1)
    fb2, ub2, vb2 = conj_fn(f2), conj_fn(u2), conj_fn(v2)
    memberships = [
        fb1 - fb2.scale(ac) - ub2.scale(bc),
        g1 - g2.scale(a) - v2.scale(b),
        ub1 - fb2.scale(cc) - ub2.scale(dc),
        v1 - g2.scale(c) - v2.scale(d),
        f1 - f2.scale(a) + g2.scale(c),
        ub1 - ub2.scale(ac) + vb2.scale(cc),
        g1 + f2.scale(b) - g2.scale(d),
        vb1 + ub2.scale(bc) - vb2.scale(dc),
    ]
    e12 = (
        ub2 * fb1 - vb1 * ub2 - (ub2 * fb2).scale(ac) - (ub2 * ub2).scale(bc)
        + (vb2 * fb2).scale(cc) + (vb2 * ub2).scale(dc)
    )
    e21 = (
        v1 * g2 - f1 * g2 + (g2 * f2).scale(a) + (v2 * f2).scale(b)
        - (g2 * g2).scale(c) - (v2 * g2).scale(d)
    )
    if all(_an(p, tol) for p in memberships) and _an(e12, tol) and _an(e21, tol):
        match = CaseMatch("(r2)", ("expansion",), {"a": a, "b": b, "c": c, "d": d})
        return RankClassification(2, (match,))
    return RankClassification(2, ())


# ---------------------------------------------------------------------------
# shift-plus-flip pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThCommuteVerdict:
    commutes: bool
    outer_match: bool
    corner_equation: bool
    conjugate_corner_equation: bool


def th_commute(
    f1: LaurentPoly, g1: LaurentPoly, f2: LaurentPoly, g2: LaurentPoly, tol: Optional[float] = None
) -> ThCommuteVerdict:
    """Simultaneous commutation of the two sum-and-difference compression pairs.

    Adding and subtracting a flipped-compression part to each analytic
    compression produces a pair of operators per symbol pair (f, g); both
    pairs commute simultaneously exactly when the block symbols
    [[f, g], [flip(g), flip(f)]] satisfy the three commutation equations,
    which are evaluated here verbatim (no case classification).
    """
    m1 = SymbolMatrix2(f1, g1, flip_tilde(g1), flip_tilde(f1))
    m2 = SymbolMatrix2(f2, g2, flip_tilde(g2), flip_tilde(f2))
    ww, lower, upper = _three_equations(m1, m2, tol)
    return ThCommuteVerdict(ww and lower and upper, ww, lower, upper)


# ---------------------------------------------------------------------------
# singular-integral pairs: fP+ + gP-
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SioProductVerdict:
    holds: bool
    cases: tuple[str, ...] = ()


def sio_product(
    f1: LaurentPoly, g1: LaurentPoly, f2: LaurentPoly, g2: LaurentPoly, tol: Optional[float] = None
) -> SioProductVerdict:
    """Does the product of two singular-integral operators multiply its symbols?

    True exactly when the left pair is untwisted (f1 = g1) or the right pair
    splits (f2 analytic and g2 coanalytic); both reasons are reported when
    they co-occur.
    """
    if tol is None:
        tol = 0.0 if f1.mode == EXACT else numeric_tolerance(f1, g1, f2, g2)
    cases = []
    if _poly_eq(f1, g1, tol):
        cases.append("(1)")
    if _an(f2, tol) and _co(g2, tol):
        cases.append("(2)")
    return SioProductVerdict(bool(cases), tuple(cases))


@dataclass(frozen=True)
class SioCommuteVerdict:
    commutes: bool
    case: Optional[str] = None
    constants: Optional[tuple[Coefficient, Coefficient, Coefficient]] = None  # (c1, c2, c3)


def sio_commute(
    f1: LaurentPoly, g1: LaurentPoly, f2: LaurentPoly, g2: LaurentPoly, tol: Optional[float] = None
) -> SioCommuteVerdict:
    """Commutation test for two singular-integral operators.

    Three disjoint-looking reasons: both pairs untwisted, all four symbols
    split analytically, or one operator is an affine image of the other
    (c1*first = c2*second + c3*identity with (c1, c2) nontrivial).  The affine
    constants are normalized so c1 is 0 or 1.
    """
    if tol is None:
        tol = 0.0 if f1.mode == EXACT else numeric_tolerance(f1, g1, f2, g2)
    mode = f1.mode
    one = _one(mode)
    zero = ExactComplex(0) if mode == EXACT else complex(0.0)
    if _poly_eq(f1, g1, tol) and _poly_eq(f2, g2, tol):
        return SioCommuteVerdict(True, "(1)")
    if _an(f1, tol) and _co(g1, tol) and _an(f2, tol) and _co(g2, tol):
        return SioCommuteVerdict(True, "(2)")

    def _joint(p: LaurentPoly, q: LaurentPoly) -> dict:
        merged = {(0, k): c for k, c in _nonconstant_part(p)}
        merged.update({(1, k): c for k, c in _nonconstant_part(q)})
        return merged

    pair1 = _joint(f1, g1)
    pair2 = _joint(f2, g2)
    prop = solve_proportional(pair1, pair2, tol)
    if prop is not None and prop.degenerate:
        # every symbol is constant; c1*f1 - c2*f2 = c3 = c1*g1 - c2*g2 is a
        # single linear condition on (c1, c2), always solvable nontrivially
        d1, d2 = f1[0] - g1[0], f2[0] - g2[0]
        if coeff_is_zero(d2, tol):
            if coeff_is_zero(d1, tol):
                return SioCommuteVerdict(True, "(3)", (one, zero, f1[0]))
            return SioCommuteVerdict(True, "(3)", (zero, one, zero - f2[0]))
        return SioCommuteVerdict(True, "(3)", (one, d1 / d2, f1[0] - (d1 / d2) * f2[0]))
    if prop is not None:
        lam = prop.lam
        c3a = is_constant(f1 - f2.scale(lam), tol if tol else None)
        c3b = is_constant(g1 - g2.scale(lam), tol if tol else None)
        if c3a is not None and c3b is not None and _ceq(c3a, c3b, tol):
            return SioCommuteVerdict(True, "(3)", (one, lam, c3a))
        return SioCommuteVerdict(False)
    if all(coeff_is_zero(c, tol) for c in pair2.values()):
        # 0*first = 1*second + c3 requires the second pair to be one constant
        if _poly_eq(f2, g2, tol) and is_constant(f2, tol if tol else None) is not None:
            return SioCommuteVerdict(True, "(3)", (zero, one, zero - f2[0]))
    return SioCommuteVerdict(False)


@dataclass(frozen=True)
class SioNormalVerdict:
    normal: bool
    case: Optional[str] = None
    lam: Optional[Coefficient] = None


def sio_normal(f: LaurentPoly, g: LaurentPoly, tol: Optional[float] = None) -> SioNormalVerdict:
    """Normality of a singular-integral operator.

    Either both symbols are constants, or a unimodular constant aligns them:
    f - lam*g constant and lam*conj(f)*g - f*conj(g) constant.  The constant
    is forced by the nonconstant parts, so there is nothing to search.
    """
    if tol is None:
        tol = 0.0 if f.mode == EXACT else numeric_tolerance(f, g)
    fc = is_constant(f, tol if tol else None)
    gc = is_constant(g, tol if tol else None)
    if fc is not None and gc is not None:
        return SioNormalVerdict(True, "(1)")
    prop = solve_proportional(_nonconstant_part(f), _nonconstant_part(g), tol)
    if prop is None or prop.degenerate:
        return SioNormalVerdict(False)
    lam = prop.lam
    if not _unimodular(lam, tol):
        return SioNormalVerdict(False)
    twist = (conj_fn(f) * g).scale(lam) - f * conj_fn(g)
    if is_constant(twist, tol if tol else None) is not None:
        return SioNormalVerdict(True, "(2)", lam)
    return SioNormalVerdict(False)


@dataclass(frozen=True)
class QuasinormalVerdict:
    quasinormal: bool
    cases: tuple[CaseMatch, ...] = ()


def sio_quasinormal(f: LaurentPoly, g: LaurentPoly, tol: Optional[float] = None) -> QuasinormalVerdict:
    """Quasinormality of a singular-integral operator.

    The operator is quasinormal when it commutes with its own adjoint-product,
    i.e. the block pair (Gram symbol, operator symbol) satisfies the three
    commutation equations.  The classification has three direct symbol cases
    plus a coupled family "(4a)".."(4d)" that rides the rank-one commutation
    cells — the left pattern there is always the row proportionality with
    constant 1, and the sub-case letter tracks the right-side pattern.
    """
    if tol is None:
        tol = 0.0 if f.mode == EXACT else numeric_tolerance(f, g)
    s = SymbolMatrix2.sio(f, g)
    gram = adjoint_product_symbol(s)
    ww, lower, upper = _three_equations(gram, s)
    quasinormal = ww and lower and upper

    ctol = tol if tol else None
    ff = f * conj_fn(f)
    gg = g * conj_fn(g)
    fg = f * conj_fn(g)
    matches: list[CaseMatch] = []
    if (
        is_constant(ff, ctol) is not None
        and is_constant(gg, ctol) is not None
        and _an(f, tol)
        and _co(g, tol)
    ):
        matches.append(CaseMatch("(1)", (), {}))
    if is_constant(ff, ctol) is not None and _poly_eq(ff, gg, tol) and _an(fg, tol):
        matches.append(CaseMatch("(2)", (), {}))
    if (
        is_constant(f - g, ctol) is not None
        and is_constant(f * gg - g * ff, ctol) is not None
        and _poly_eq(project_minus(ff), project_minus(gg), tol)
        and _poly_eq(project_minus(gg), project_minus(fg), tol)
    ):
        matches.append(CaseMatch("(3)", (), {}))
    if ww:
        side12, _ = residual_dyads(gram, s)
        if rank_of(side12).rank == 1:
            letters = {1: "a", 2: "b", 3: "c", 4: "d"}
            for m in commute_classify_rank1(gram, s, tol).matches:
                cell = m.cells[0]
                if not cell.startswith("L3"):
                    continue
                j = int(cell.split("+R")[1])
                constants = {"mu": m.constants["mu"], "alpha": m.constants["alpha"]}
                matches.append(CaseMatch(f"(4{letters[j]})", m.cells, constants, True))

    if quasinormal and not matches:
        raise InconsistencyError("quasinormal operator missed by every classification case")
    if matches and not quasinormal:
        raise InconsistencyError("classification case verified on a non-quasinormal operator")
    return QuasinormalVerdict(quasinormal, tuple(matches))


# ---------------------------------------------------------------------------
# compressions between co-invariant complements (monomial inner functions)
# ---------------------------------------------------------------------------


def _require_exact(*polys: LaurentPoly) -> None:
    if any(p.mode != EXACT for p in polys):
        raise ValueError("inner-compression decisions run in exact mode only")


@dataclass(frozen=True)
class AdtpVerdict:
    holds: bool
    case: Optional[str] = None
    lam: Optional[Coefficient] = None
    sigma: Optional[LaurentPoly] = None


def adtp_product(
    psi: LaurentPoly,
    phi: LaurentPoly,
    alpha: InnerMonomial,
    beta: InnerMonomial,
    theta: InnerMonomial,
) -> AdtpVerdict:
    """Is a composition of two cross-space compressions again one compression?

    The first factor compresses multiplication by ``phi`` between the
    complements for ``theta`` and ``alpha``, the second multiplication by
    ``psi`` between those for ``alpha`` and ``beta``; the composition is a
    single such compression exactly when one of four membership lists holds,
    and then its symbol is always ``phi * psi``.  Cases (3)/(4) carry a
    coupling constant of modulus strictly below one; candidates are solved
    from whichever clause pins them, a modulus-one solution is rejected, and
    a modulus above one simply means the mirrored case is the right one.
    """
    _require_exact(psi, phi)
    a, b, t = alpha.power, beta.power, theta.power
    mono = lambda k: LaurentPoly.monomial(k)  # noqa: E731 - tiny local alias
    psib, phib = conj_fn(psi), conj_fn(phi)
    sigma = phi * psi

    if is_analytic(psi) and is_analytic(mono(b - a) * psib):
        return AdtpVerdict(True, "(1)", None, sigma)
    if is_analytic(phib) and is_analytic(mono(t - a) * phi):
        return AdtpVerdict(True, "(2)", None, sigma)

    def _solve(pairs) -> Optional[Coefficient]:
        """First determined constant from (target, base, conjugate?) clauses."""
        for target, base, conjugated in pairs:
            prop = solve_affine_membership(target, base)
            if prop is None:
                return None
            if not prop.degenerate:
                return coeff_conj(prop.lam) if conjugated else prop.lam
        return ExactComplex(0)

    lam3 = _solve(
        [
            (mono(a) * psi, psi, False),
            (mono(b - a) * psib, mono(b) * psib, True),
            (mono(t) * phi, mono(t - a) * phi, False),
        ]
    )
    if lam3 is not None and _abs2_less_than_one(lam3, 0.0):
        clauses = [
            phib,
            mono(t) * phi - (mono(t - a) * phi).scale(lam3),
            mono(b - a) * psib - (mono(b) * psib).scale(coeff_conj(lam3)),
            mono(a) * psi - psi.scale(lam3),
            mono(t) * sigma - (mono(t - a) * sigma).scale(lam3),
        ]
        if all(is_analytic(c) for c in clauses):
            return AdtpVerdict(True, "(3)", lam3, sigma)

    lam4 = _solve(
        [
            (mono(a) * phib, phib, False),
            (mono(t - a) * phi, mono(t) * phi, True),
            (mono(b) * psib, mono(b - a) * psib, False),
        ]
    )
    if lam4 is not None and _abs2_less_than_one(lam4, 0.0):
        clauses = [
            psi,
            mono(b) * psib - (mono(b - a) * psib).scale(lam4),
            mono(t - a) * phi - (mono(t) * phi).scale(coeff_conj(lam4)),
            mono(a) * phib - phib.scale(lam4),
            mono(b) * phib * psib - (mono(b - a) * phib * psib).scale(lam4),
        ]
        if all(is_analytic(c) for c in clauses):
            return AdtpVerdict(True, "(4)", lam4, sigma)
    return AdtpVerdict(False)


@dataclass(frozen=True)
class DttCommuteVerdict:
    commutes: bool
    matches: tuple[CaseMatch, ...] = ()


def dtt_commute(phi: LaurentPoly, psi: LaurentPoly, theta: InnerMonomial) -> DttCommuteVerdict:
    """Commutation of two compressions on the same co-invariant complement.

    Requires both multiplier symbols non-constant (constants commute with
    everything and are excluded by contract).  Three reasons to commute: both
    analytic with their conjugates aligned by one constant of modulus below
    one against the inner monomial; the conjugate mirror of that; or some
    nontrivial linear combination of the two multipliers being constant.
    """
    _require_exact(phi, psi)
    if is_constant(phi) is not None or is_constant(psi) is not None:
        raise ValueError("dtt_commute requires non-constant multiplier symbols")
    th = theta.poly()
    phib, psib = conj_fn(phi), conj_fn(psi)
    matches: list[CaseMatch] = []

    if is_analytic(phi) and is_analytic(psi):
        prop = solve_affine_membership(th * phib, phib)
        if prop is not None and not prop.degenerate and _abs2_less_than_one(prop.lam, 0.0):
            lam = prop.lam
            if is_analytic(th * psib - psib.scale(lam)):
                matches.append(CaseMatch("(1)", (), {"lam": lam}))
    if is_analytic(phib) and is_analytic(psib):
        prop = solve_affine_membership(th * phi, phi)
        if prop is not None and not prop.degenerate and _abs2_less_than_one(prop.lam, 0.0):
            lam = prop.lam
            if is_analytic(th * psi - psi.scale(lam)):
                matches.append(CaseMatch("(2)", (), {"lam": lam}))
    prop = solve_proportional(_nonconstant_part(phi), _nonconstant_part(psi))
    if prop is not None and not prop.degenerate:
        matches.append(CaseMatch("(3)", (), {"kappa": prop.lam}))
    return DttCommuteVerdict(bool(matches), tuple(matches))

"""Primitive circle operators as exact expression trees.

The leaves are the compression-type operators acting between the analytic
half H2 (frequencies k >= 0), its complement H2perp (k <= -1) and the full
space L2: analytic compressions (Toeplitz), the two off-diagonal corners
(Hankel and its adjoint), coanalytic compressions (dual Toeplitz), plain
multiplication, the two Riesz projections, and the 2x2-symbol block operator
that combines all four corners. Interior nodes close the algebra under
composition, sums, scalars and adjoints.

Trees are applied exactly to finite Fourier expansions. Nothing here
simplifies algebraically: identities between operators are *tested* (via
``op_zero_test`` on finitely many monomials, which suffices for banded
symbols), never rewritten, so this layer can serve as an independent oracle
for the symbol-side decision procedures.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .symbols import (
    EXACT,
    NUMERIC,
    NUMERIC_EPS,
    Coefficient,
    ExactComplex,
    LaurentPoly,
    ParseError,
    SymbolMatrix2,
    coeff_conj,
    conj_fn,
    parse_coefficient,
    parse_symbol,
    format_coefficient,
    project_minus,
    project_plus,
)

__all__ = [
    "H2",
    "H2PERP",
    "L2",
    "FourierVector",
    "v_apply",
    "OpExpr",
    "Toeplitz",
    "Hankel",
    "HankelAdj",
    "DualToeplitz",
    "Mult",
    "RieszPlus",
    "RieszMinus",
    "Gsio",
    "Identity",
    "Zero",
    "Compose",
    "OpSum",
    "Scale",
    "Adjoint",
    "Corner",
    "SignatureError",
    "apply",
    "adjoint_normalize",
    "span_bound",
    "op_zero_test",
    "op_equal",
    "is_toeplitz",
    "is_dual_toeplitz",
    "is_hankel",
    "is_gsio",
    "mult_identities_check",
    "to_text",
    "parse_expr",
]

H2 = "H2"
H2PERP = "H2perp"
L2 = "L2"

_TAGS = (H2, H2PERP, L2)


class SignatureError(ValueError):
    """Domain/codomain mismatch in an operator expression or application."""


class FourierVector:
    """A finite Fourier expansion tagged with the subspace it lives in."""

    __slots__ = ("poly", "tag")

    def __init__(self, poly: LaurentPoly, tag: str):
        if tag not in _TAGS:
            raise SignatureError(f"unknown domain tag {tag!r}")
        if tag == H2 and poly.min_deg() < 0 and poly:
            raise SignatureError("H2 vector has negative-frequency support")
        if tag == H2PERP and poly.max_deg() >= 0 and poly:
            raise SignatureError("H2perp vector has nonnegative-frequency support")
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "tag", tag)

    def __setattr__(self, name, value):
        raise AttributeError("FourierVector is immutable")

    @classmethod
    def basis(cls, k: int, tag: str, mode: str = EXACT) -> "FourierVector":
        return cls(LaurentPoly.monomial(k, 1 if mode == EXACT else 1.0, mode), tag)

    @property
    def mode(self) -> str:
        return self.poly.mode

    def __getitem__(self, k: int) -> Coefficient:
        return self.poly[k]

    def __add__(self, other: "FourierVector") -> "FourierVector":
        if self.tag != other.tag:
            raise SignatureError(f"adding vectors from {self.tag} and {other.tag}")
        return FourierVector(self.poly + other.poly, self.tag)

    def __sub__(self, other: "FourierVector") -> "FourierVector":
        return self + other.scale(-1)

    def scale(self, c) -> "FourierVector":
        return FourierVector(self.poly.scale(c), self.tag)

    def retag(self, tag: str) -> "FourierVector":
        return FourierVector(self.poly, tag)

    def inner(self, other: "FourierVector") -> Coefficient:
        """The L2 pairing sum_k x_k * conj(y_k)."""
        acc = None
        for k, c in self.poly.coeffs.items():
            term = c * coeff_conj(other.poly[k])
            acc = term if acc is None else acc + term
        if acc is None:
            return ExactComplex(0) if self.mode == EXACT else 0j
        return acc

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return self.poly.is_zero()
        return all(abs(complex(c)) <= tol for c in self.poly.coeffs.values())

    def __eq__(self, other):
        if not isinstance(other, FourierVector):
            return NotImplemented
        return self.tag == other.tag and self.poly == other.poly

    def __repr__(self):
        return f"FourierVector({self.poly.literal()!r}, {self.tag})"


def v_apply(x: FourierVector) -> FourierVector:
    """The anti-unitary involution on vectors: (Vx)_j = conj(x_{-j-1}).

    Swaps the H2 and H2perp halves and fixes L2; conjugate-linear, so it
    lives outside the (linear) expression-tree algebra and is applied
    directly to vectors.
    """
    from .symbols import v_transform

    swap = {H2: H2PERP, H2PERP: H2, L2: L2}
    return FourierVector(v_transform(x.poly), swap[x.tag])


# ---------------------------------------------------------------------------
# expression trees
# ---------------------------------------------------------------------------


class OpExpr:
    """Base class; subclasses define domain/codomain tags and exact action."""

    __slots__ = ()

    domain: str
    codomain: str

    def apply(self, x: FourierVector) -> FourierVector:
        raise NotImplementedError

    def children(self) -> tuple["OpExpr", ...]:
        return ()

    # -- convenience algebra (sugar used by tests and oracles only) -------

    def __matmul__(self, other: "OpExpr") -> "OpExpr":
        return Compose(self, other)

    def __add__(self, other: "OpExpr") -> "OpExpr":
        return OpSum([self, other])

    def __sub__(self, other: "OpExpr") -> "OpExpr":
        return OpSum([self, Scale(-1, other)])

    def __rmul__(self, c) -> "OpExpr":
        return Scale(c, self)

    def adjoint(self) -> "OpExpr":
        return Adjoint(self)

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return self.children()

    def __repr__(self):
        return to_text(self)


def _check_vec(expr: OpExpr, x: FourierVector):
    if x.tag != expr.domain:
        raise SignatureError(
            f"applying {type(expr).__name__} with domain {expr.domain} to a {x.tag} vector"
        )


class _SymbolLeaf(OpExpr):
    __slots__ = ("symbol",)

    def __init__(self, symbol: LaurentPoly):
        object.__setattr__(self, "symbol", symbol)

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def _key(self):
        return (self.symbol,)


class Toeplitz(_SymbolLeaf):
    """Analytic compression of multiplication: x -> P+(symbol * x) on H2."""

    __slots__ = ()
    domain = H2
    codomain = H2

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return FourierVector(project_plus(self.symbol * x.poly), H2)


class Hankel(_SymbolLeaf):
    """The analytic-to-coanalytic corner: x -> P-(symbol * x)."""

    __slots__ = ()
    domain = H2
    codomain = H2PERP

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return FourierVector(project_minus(self.symbol * x.poly), H2PERP)


class HankelAdj(_SymbolLeaf):
    """The coanalytic-to-analytic corner: y -> P+(symbol * y).

    This is the adjoint of ``Hankel(conj_fn(symbol))``; with symbol u it is
    the upper-right block of the 2x2 operator with that u entry.
    """

    __slots__ = ()
    domain = H2PERP
    codomain = H2

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return FourierVector(project_plus(self.symbol * x.poly), H2)


class DualToeplitz(_SymbolLeaf):
    """Coanalytic compression of multiplication: y -> P-(symbol * y) on H2perp."""

    __slots__ = ()
    domain = H2PERP
    codomain = H2PERP

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return FourierVector(project_minus(self.symbol * x.poly), H2PERP)


class Mult(_SymbolLeaf):
    """Plain multiplication by the symbol on all of L2."""

    __slots__ = ()
    domain = L2
    codomain = L2

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return FourierVector(self.symbol * x.poly, L2)


class RieszPlus(OpExpr):
    """Projection of L2 onto the analytic half (as an L2 endomorphism)."""

    __slots__ = ()
    domain = L2
    codomain = L2

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return FourierVector(project_plus(x.poly), L2)

    def _key(self):
        return ()


class RieszMinus(OpExpr):
    """Complementary projection of L2 onto the coanalytic half."""

    __slots__ = ()
    domain = L2
    codomain = L2

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return FourierVector(project_minus(x.poly), L2)

    def _key(self):
        return ()


class Gsio(OpExpr):
    """The 2x2-symbol block operator on L2.

    With symbol matrix [[f, u], [g, v]] it acts as
    P+ f P+  +  P- g P+  +  P+ u P-  +  P- v P-,
    i.e. blockwise [[Toeplitz(f), HankelAdj(u)], [Hankel(g), DualToeplitz(v)]]
    with respect to L2 = H2 (+) H2perp.
    """

    __slots__ = ("h",)
    domain = L2
    codomain = L2

    def __init__(self, h: SymbolMatrix2):
        object.__setattr__(self, "h", h)

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        xp = project_plus(x.poly)
        xm = project_minus(x.poly)
        out = (
            project_plus(self.h.f * xp)
            + project_minus(self.h.g * xp)
            + project_plus(self.h.u * xm)
            + project_minus(self.h.v * xm)
        )
        return FourierVector(out, L2)

    def _key(self):
        return (self.h,)


class Identity(OpExpr):
    __slots__ = ("domain", "codomain")

    def __init__(self, tag: str):
        if tag not in _TAGS:
            raise SignatureError(f"unknown domain tag {tag!r}")
        object.__setattr__(self, "domain", tag)
        object.__setattr__(self, "codomain", tag)

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return x

    def _key(self):
        return (self.domain,)


class Zero(OpExpr):
    __slots__ = ("domain", "codomain")

    def __init__(self, domain: str, codomain: str):
        for t in (domain, codomain):
            if t not in _TAGS:
                raise SignatureError(f"unknown domain tag {t!r}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        return FourierVector(LaurentPoly.zero(x.mode), self.codomain)

    def _key(self):
        return (self.domain, self.codomain)


class Compose(OpExpr):
    """Operator product a*b: apply ``b`` first, then ``a``."""

    __slots__ = ("a", "b", "domain", "codomain")

    def __init__(self, a: OpExpr, b: OpExpr):
        if a.domain != b.codomain:
            raise SignatureError(
                f"composition mismatch: {type(a).__name__} expects {a.domain}, "
                f"{type(b).__name__} produces {b.codomain}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "domain", b.domain)
        object.__setattr__(self, "codomain", a.codomain)

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def apply(self, x: FourierVector) -> FourierVector:
        return self.a.apply(self.b.apply(x))

    def children(self):
        return (self.a, self.b)


class OpSum(OpExpr):
    __slots__ = ("terms", "domain", "codomain")

    def __init__(self, terms: Sequence[OpExpr]):
        terms = tuple(terms)
        if not terms:
            raise SignatureError("empty operator sum")
        sig = (terms[0].domain, terms[0].codomain)
        for t in terms[1:]:
            if (t.domain, t.codomain) != sig:
                raise SignatureError("summands must share one signature")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "domain", sig[0])
        object.__setattr__(self, "codomain", sig[1])

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def apply(self, x: FourierVector) -> FourierVector:
        out = self.terms[0].apply(x)
        for t in self.terms[1:]:
            out = out + t.apply(x)
        return out

    def children(self):
        return self.terms


class Scale(OpExpr):
    __slots__ = ("c", "child", "domain", "codomain")

    def __init__(self, c, child: OpExpr):
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "domain", child.domain)
        object.__setattr__(self, "codomain", child.codomain)

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def apply(self, x: FourierVector) -> FourierVector:
        return self.child.apply(x).scale(self.c)

    def children(self):
        return (self.child,)

    def _key(self):
        c = self.c
        if isinstance(c, (int, Fraction)):
            c = ExactComplex(c)
        return (c, self.child)


class Adjoint(OpExpr):
    """Formal adjoint; applied by first normalizing down to the leaves."""

    __slots__ = ("child", "domain", "codomain")

    def __init__(self, child: OpExpr):
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "domain", child.codomain)
        object.__setattr__(self, "codomain", child.domain)

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def apply(self, x: FourierVector) -> FourierVector:
        return adjoint_normalize(self).apply(x)

    def children(self):
        return (self.child,)


class Corner(OpExpr):
    """A corner compression of an L2 endomorphism (internal plumbing).

    ``which`` picks the block: "pp" = analytic-to-analytic, "mp" =
    analytic-to-coanalytic, "pm" = coanalytic-to-analytic, "mm" =
    coanalytic-to-coanalytic. Used by the 2x2 recognizer to hand each block
    to the matching structural test.
    """

    __slots__ = ("child", "which", "domain", "codomain")

    _SIG = {"pp": (H2, H2), "mp": (H2, H2PERP), "pm": (H2PERP, H2), "mm": (H2PERP, H2PERP)}

    def __init__(self, child: OpExpr, which: str):
        if child.domain != L2 or child.codomain != L2:
            raise SignatureError("corner compression needs an L2 endomorphism")
        if which not in self._SIG:
            raise SignatureError(f"unknown corner {which!r}")
        dom, cod = self._SIG[which]
        object.__setattr__(self, "child", child)
        object.__setattr__(self, "which", which)
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "codomain", cod)

    def __setattr__(self, name, value):
        raise AttributeError("operator expressions are immutable")

    def apply(self, x: FourierVector) -> FourierVector:
        _check_vec(self, x)
        y = self.child.apply(x.retag(L2))
        if self.codomain == H2:
            return FourierVector(project_plus(y.poly), H2)
        return FourierVector(project_minus(y.poly), H2PERP)

    def children(self):
        return (self.child,)

    def _key(self):
        return (self.child, self.which)


def apply(expr: OpExpr, x: FourierVector) -> FourierVector:
    """Apply an expression tree exactly to a finite expansion."""
    return expr.apply(x)


# ---------------------------------------------------------------------------
# adjoint normalization
# ---------------------------------------------------------------------------

_CORNER_ADJ = {"pp": "pp", "mm": "mm", "pm": "mp", "mp": "pm"}


def adjoint_normalize(expr: OpExpr) -> OpExpr:
    """Rewrite all Adjoint nodes down to the leaves, returning an Adjoint-free tree."""
    if isinstance(expr, Adjoint):
        return _adj(expr.child)
    if isinstance(expr, Compose):
        return Compose(adjoint_normalize(expr.a), adjoint_normalize(expr.b))
    if isinstance(expr, OpSum):
        return OpSum([adjoint_normalize(t) for t in expr.terms])
    if isinstance(expr, Scale):
        return Scale(expr.c, adjoint_normalize(expr.child))
    if isinstance(expr, Corner):
        return Corner(adjoint_normalize(expr.child), expr.which)
    return expr


def _adj(expr: OpExpr) -> OpExpr:
    """The adjoint of ``expr``, normalized."""
    if isinstance(expr, Toeplitz):
        return Toeplitz(conj_fn(expr.symbol))
    if isinstance(expr, Hankel):
        return HankelAdj(conj_fn(expr.symbol))
    if isinstance(expr, HankelAdj):
        return Hankel(conj_fn(expr.symbol))
    if isinstance(expr, DualToeplitz):
        return DualToeplitz(conj_fn(expr.symbol))
    if isinstance(expr, Mult):
        return Mult(conj_fn(expr.symbol))
    if isinstance(expr, (RieszPlus, RieszMinus, Identity)):
        return expr
    if isinstance(expr, Zero):
        return Zero(expr.codomain, expr.domain)
    if isinstance(expr, Gsio):
        h = expr.h
        return Gsio(SymbolMatrix2(conj_fn(h.f), conj_fn(h.g), conj_fn(h.u), conj_fn(h.v)))
    if isinstance(expr, Compose):
        return Compose(_adj(expr.b), _adj(expr.a))
    if isinstance(expr, OpSum):
        return OpSum([_adj(t) for t in expr.terms])
    if isinstance(expr, Scale):
        c = expr.c
        if isinstance(c, ExactComplex):
            cc = c.conjugate()
        elif isinstance(c, complex):
            cc = c.conjugate()
        else:
            cc = c  # real scalar
        return Scale(cc, _adj(expr.child))
    if isinstance(expr, Adjoint):
        return adjoint_normalize(expr.child)
    if isinstance(expr, Corner):
        return Corner(_adj(expr.child), _CORNER_ADJ[expr.which])
    raise TypeError(f"cannot take adjoint of {type(expr).__name__}")


# ---------------------------------------------------------------------------
# zero testing on monomials
# ---------------------------------------------------------------------------


def _reach(p: LaurentPoly) -> int:
    """Largest |frequency shift| multiplication by p can produce.

    This is what bounds both the truncation boundary of a compression and
    the padding a finite section needs; note it differs from the window
    width whenever the support window is not centered (z^-2 alone has
    width 0 but reach 2).
    """
    return max(abs(p.min_deg()), abs(p.max_deg()))


def span_bound(expr: OpExpr) -> int:
    """Frequency-reach budget D: reaches add along composition chains,
    diverge (max) across sums, and are unchanged by scaling/adjoints."""
    if isinstance(expr, _SymbolLeaf):
        return _reach(expr.symbol)
    if isinstance(expr, Gsio):
        return max(_reach(p) for p in expr.h.entries())
    if isinstance(expr, (RieszPlus, RieszMinus, Identity, Zero)):
        return 0
    if isinstance(expr, Compose):
        return span_bound(expr.a) + span_bound(expr.b)
    if isinstance(expr, OpSum):
        return max(span_bound(t) for t in expr.terms)
    if isinstance(expr, (Scale, Adjoint, Corner)):
        return span_bound(expr.children()[0])
    raise TypeError(f"no span bound for {type(expr).__name__}")


def _expr_mode(expr: OpExpr) -> str:
    if isinstance(expr, _SymbolLeaf):
        return expr.symbol.mode
    if isinstance(expr, Gsio):
        return expr.h.mode
    for c in expr.children():
        m = _expr_mode(c)
        if m is not None:
            return m
    return None  # type: ignore[return-value]


def _domain_monomials(tag: str, bound: int) -> Iterable[int]:
    if tag == H2:
        return range(0, bound + 1)
    if tag == H2PERP:
        return range(-bound, 0)
    return range(-bound, bound + 1)


def op_zero_test(expr: OpExpr, debug: bool = False, tol: Optional[float] = None) -> bool:
    """Exact zero test: apply to every domain monomial with |frequency| <= D+1.

    For banded symbols the action becomes translation-covariant beyond the
    combined degree span D, so vanishing on this finite set forces the
    operator to vanish; ``debug=True`` widens the check to D+6.
    """
    mode = _expr_mode(expr) or EXACT
    if tol is None:
        tol = 0.0
        if mode == NUMERIC:
            m = max((abs(complex(c)) for c in _all_leaf_coeffs(expr)), default=0.0)
            tol = NUMERIC_EPS * (1.0 + m)
    d = span_bound(expr) + (6 if debug else 1)
    for k in _domain_monomials(expr.domain, d):
        if not expr.apply(FourierVector.basis(k, expr.domain, mode)).is_zero(tol):
            return False
    return True


def _all_leaf_coeffs(expr: OpExpr):
    if isinstance(expr, _SymbolLeaf):
        yield from expr.symbol.coeffs.values()
    elif isinstance(expr, Gsio):
        for p in expr.h.entries():
            yield from p.coeffs.values()
    else:
        for c in expr.children():
            yield from _all_leaf_coeffs(c)


def op_equal(a: OpExpr, b: OpExpr, debug: bool = False, tol: Optional[float] = None) -> bool:
    """Test a = b via op_zero_test(a - b)."""
    return op_zero_test(OpSum([a, Scale(-1, b)]), debug=debug, tol=tol)


# ---------------------------------------------------------------------------
# structural recognizers
# ---------------------------------------------------------------------------


def _shift_invariance_test(expr: OpExpr, mode: str) -> OpExpr:
    z = LaurentPoly.monomial(1, 1 if mode == EXACT else 1.0, mode)
    zbar = LaurentPoly.monomial(-1, 1 if mode == EXACT else 1.0, mode)
    if expr.domain == H2:
        shifted = Compose(Toeplitz(zbar), Compose(expr, Toeplitz(z)))
    else:
        shifted = Compose(DualToeplitz(z), Compose(expr, DualToeplitz(zbar)))
    return OpSum([shifted, Scale(-1, expr)])


def is_toeplitz(expr: OpExpr) -> Optional[LaurentPoly]:
    """Recognize an analytic compression by its shift-compression identity.

    A banded H2 endomorphism T satisfies T_z̄ T T_z = T exactly when its
    matrix is constant along diagonals; on success the symbol is read off
    the first column and first row.
    """
    if (expr.domain, expr.codomain) != (H2, H2):
        raise SignatureError("toeplitz recognizer needs an H2 endomorphism")
    mode = _expr_mode(expr) or EXACT
    if not op_zero_test(_shift_invariance_test(expr, mode)):
        return None
    b = span_bound(expr)
    col0 = expr.apply(FourierVector.basis(0, H2, mode))
    coeffs = dict(col0.poly.coeffs)
    for j in range(1, b + 1):
        img = expr.apply(FourierVector.basis(j, H2, mode))
        c = img[0]
        coeffs[-j] = c
    return LaurentPoly(coeffs, mode)


def is_dual_toeplitz(expr: OpExpr) -> Optional[LaurentPoly]:
    """Mirror recognizer on the coanalytic side (T̃_z A T̃_z̄ = A)."""
    if (expr.domain, expr.codomain) != (H2PERP, H2PERP):
        raise SignatureError("dual-toeplitz recognizer needs an H2perp endomorphism")
    mode = _expr_mode(expr) or EXACT
    if not op_zero_test(_shift_invariance_test(expr, mode)):
        return None
    b = span_bound(expr)
    img1 = expr.apply(FourierVector.basis(-1, H2PERP, mode))
    coeffs = {}
    for k, c in img1.poly.coeffs.items():
        coeffs[k + 1] = c  # entry (j,1) = v_{1-j}, image index -j
    for m in range(1, b + 1):
        img = expr.apply(FourierVector.basis(-(m + 1), H2PERP, mode))
        coeffs[m] = img[-1]
    return LaurentPoly(coeffs, mode)


def is_hankel(expr: OpExpr) -> Optional[LaurentPoly]:
    """Recognize a Hankel corner by its intertwining identity T̃_z R = R T_z.

    Returns the coanalytic part of the symbol; the symbol is only ever
    determined modulo analytic summands (which act by zero), so the
    coanalytic representative is the class representative.
    """
    if (expr.domain, expr.codomain) != (H2, H2PERP):
        raise SignatureError("hankel recognizer needs an H2 -> H2perp map")
    mode = _expr_mode(expr) or EXACT
    z = LaurentPoly.monomial(1, 1 if mode == EXACT else 1.0, mode)
    test = OpSum([Compose(DualToeplitz(z), expr), Scale(-1, Compose(expr, Toeplitz(z)))])
    if not op_zero_test(test):
        return None
    img = expr.apply(FourierVector.basis(0, H2, mode))
    return LaurentPoly(dict(img.poly.coeffs), mode)


def is_gsio(expr: OpExpr) -> Optional[SymbolMatrix2]:
    """Recognize a 2x2-symbol block operator from its four corners.

    Each corner must pass its own structural test. The analytic and
    coanalytic diagonal symbols are recovered exactly; the corner symbols
    are recovered as class representatives: the lower-left one modulo
    analytic symbols (coanalytic representative), the upper-right one modulo
    coanalytic symbols (the representative supported on k >= 1, recovered
    through the adjoint corner).
    """
    if (expr.domain, expr.codomain) != (L2, L2):
        raise SignatureError("block recognizer needs an L2 endomorphism")
    f = is_toeplitz(Corner(expr, "pp"))
    if f is None:
        return None
    g = is_hankel(Corner(expr, "mp"))
    if g is None:
        return None
    v = is_dual_toeplitz(Corner(expr, "mm"))
    if v is None:
        return None
    adj = adjoint_normalize(Adjoint(expr))
    ubar_minus = is_hankel(Corner(adj, "mp"))
    if ubar_minus is None:
        return None
    u = conj_fn(ubar_minus)
    return SymbolMatrix2(f, u, g, v)


def mult_identities_check(f: LaurentPoly, g: LaurentPoly) -> bool:
    """Verify the four corner identities of multiplication-operator products.

    The product of two multiplication operators is itself a multiplication
    operator; written blockwise this is equivalent to the four identities
    (analytic corner, the two mixed corners, coanalytic corner) tested here
    exactly. Always true — used as an engine self-test.
    """
    fg = f * g
    checks = [
        # analytic corner: T_{fg} = T_f T_g + (mult-by-f P+ corner)(Hankel g)
        OpSum(
            [
                Toeplitz(fg),
                Scale(-1, Compose(Toeplitz(f), Toeplitz(g))),
                Scale(-1, Compose(HankelAdj(f), Hankel(g))),
            ]
        ),
        # analytic-to-coanalytic corner: H_{fg} = H_f T_g + T̃_f H_g
        OpSum(
            [
                Hankel(fg),
                Scale(-1, Compose(Hankel(f), Toeplitz(g))),
                Scale(-1, Compose(DualToeplitz(f), Hankel(g))),
            ]
        ),
        # coanalytic-to-analytic corner: (fg corner) = T_f (g corner) + (f corner) T̃_g
        OpSum(
            [
                HankelAdj(fg),
                Scale(-1, Compose(Toeplitz(f), HankelAdj(g))),
                Scale(-1, Compose(HankelAdj(f), DualToeplitz(g))),
            ]
        ),
        # coanalytic corner: T̃_{fg} = T̃_f T̃_g + H_f (ḡ-adjoint corner)
        OpSum(
            [
                DualToeplitz(fg),
                Scale(-1, Compose(DualToeplitz(f), DualToeplitz(g))),
                Scale(-1, Compose(Hankel(f), HankelAdj(g))),
            ]
        ),
    ]
    return all(op_zero_test(c) for c in checks)


# ---------------------------------------------------------------------------
# serialization (parenthesized prefix text, round-trip exact)
# ---------------------------------------------------------------------------


def to_text(expr: OpExpr) -> str:
    if isinstance(expr, Toeplitz):
        return f'(toeplitz "{expr.symbol.literal()}")'
    if isinstance(expr, Hankel):
        return f'(hankel "{expr.symbol.literal()}")'
    if isinstance(expr, HankelAdj):
        return f'(hankel-adj "{expr.symbol.literal()}")'
    if isinstance(expr, DualToeplitz):
        return f'(dual-toeplitz "{expr.symbol.literal()}")'
    if isinstance(expr, Mult):
        return f'(mult "{expr.symbol.literal()}")'
    if isinstance(expr, RieszPlus):
        return "(riesz-plus)"
    if isinstance(expr, RieszMinus):
        return "(riesz-minus)"
    if isinstance(expr, Gsio):
        h = expr.h
        return (
            f'(gsio "{h.f.literal()}" "{h.u.literal()}" "{h.g.literal()}" "{h.v.literal()}")'
        )
    if isinstance(expr, Identity):
        return f"(identity {expr.domain})"
    if isinstance(expr, Zero):
        return f"(zero {expr.domain} {expr.codomain})"
    if isinstance(expr, Compose):
        return f"(compose {to_text(expr.a)} {to_text(expr.b)})"
    if isinstance(expr, OpSum):
        return "(sum " + " ".join(to_text(t) for t in expr.terms) + ")"
    if isinstance(expr, Scale):
        c = expr.c
        if isinstance(c, (int, Fraction)):
            c = ExactComplex(c)
        return f'(scale "{format_coefficient(c)}" {to_text(expr.child)})'
    if isinstance(expr, Adjoint):
        return f"(adjoint {to_text(expr.child)})"
    raise TypeError(f"cannot serialize {type(expr).__name__}")


class _ExprScanner:
    def __init__(self, text: str, mode: str):
        self.text = text
        self.pos = 0
        self.mode = mode

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, min(self.pos, max(len(self.text) - 1, 0)))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def word(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.peek() and (self.peek().isalnum() or self.peek() in "-_"):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a word")
        return self.text[start : self.pos]

    def quoted(self) -> str:
        self.skip_ws()
        if self.peek() != '"':
            raise self.error('expected a quoted literal')
        self.pos += 1
        start = self.pos
        while self.peek() and self.peek() != '"':
            self.pos += 1
        if self.peek() != '"':
            raise self.error("unterminated quoted literal")
        s = self.text[start : self.pos]
        self.pos += 1
        return s


def parse_expr(text: str, mode: str = EXACT) -> OpExpr:
    """Parse the parenthesized prefix serialization produced by to_text."""
    sc = _ExprScanner(text, mode)
    expr = _parse_node(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise sc.error("trailing input after expression")
    return expr


def _parse_node(sc: _ExprScanner) -> OpExpr:
    sc.expect("(")
    head = sc.word()
    out: OpExpr
    if head in ("toeplitz", "hankel", "hankel-adj", "dual-toeplitz", "mult"):
        sym = parse_symbol(sc.quoted(), sc.mode)
        cls = {
            "toeplitz": Toeplitz,
            "hankel": Hankel,
            "hankel-adj": HankelAdj,
            "dual-toeplitz": DualToeplitz,
            "mult": Mult,
        }[head]
        out = cls(sym)
    elif head == "riesz-plus":
        out = RieszPlus()
    elif head == "riesz-minus":
        out = RieszMinus()
    elif head == "gsio":
        f = parse_symbol(sc.quoted(), sc.mode)
        u = parse_symbol(sc.quoted(), sc.mode)
        g = parse_symbol(sc.quoted(), sc.mode)
        v = parse_symbol(sc.quoted(), sc.mode)
        out = Gsio(SymbolMatrix2(f, u, g, v))
    elif head == "identity":
        out = Identity(sc.word())
    elif head == "zero":
        out = Zero(sc.word(), sc.word())
    elif head == "compose":
        a = _parse_node(sc)
        b = _parse_node(sc)
        out = Compose(a, b)
    elif head == "sum":
        terms = []
        while True:
            sc.skip_ws()
            if sc.peek() == ")":
                break
            terms.append(_parse_node(sc))
        out = OpSum(terms)
    elif head == "scale":
        c = parse_coefficient(sc.quoted(), sc.mode)
        out = Scale(c, _parse_node(sc))
    elif head == "adjoint":
        out = Adjoint(_parse_node(sc))
    else:
        raise sc.error(f"unknown operator head {head!r}")
    sc.expect(")")
    return out

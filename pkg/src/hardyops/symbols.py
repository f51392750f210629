"""Exact arithmetic on Laurent-polynomial symbols of the unit circle.

Symbols are finitely supported Fourier expansions sum_k c_k z^k with exact
complex-rational coefficients (default) or complex doubles (numeric mode).
This module provides the Riesz projections onto the analytic/coanalytic
halves, the conjugation-type involutions the operator identities are built
from, and the small solving utilities (proportionality, analytic-membership)
every higher-level decision procedure relies on.

Everything here is immutable and pure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Union

__all__ = [
    "ExactComplex",
    "LaurentPoly",
    "SymbolMatrix2",
    "InnerMonomial",
    "Proportionality",
    "project_plus",
    "project_minus",
    "conj_fn",
    "v_transform",
    "flip_tilde",
    "star",
    "is_analytic",
    "is_coanalytic",
    "is_constant",
    "solve_proportional",
    "solve_affine_membership",
    "parse_symbol",
    "parse_coefficient",
    "format_coefficient",
    "numeric_tolerance",
    "coeff_is_zero",
    "coeff_conj",
    "EXACT",
    "NUMERIC",
    "ParseError",
]

EXACT = "exact"
NUMERIC = "numeric"

#: scale-aware zero threshold for numeric mode: |c| <= EPS * (1 + max magnitude)
NUMERIC_EPS = 1e-10


class ParseError(ValueError):
    """Raised on malformed symbol literals, with position information."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.text = text
        self.pos = pos


class ExactComplex:
    """A complex number with exact rational real and imaginary parts.

    Closed under +, -, *, / (division by nonzero); hashable; conversion to
    ``complex`` is the only lossy operation.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):  # immutability
        raise AttributeError("ExactComplex is immutable")

    # -- ring operations -------------------------------------------------

    @staticmethod
    def _coerce(x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactComplex(x)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ExactComplex(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero ExactComplex")
        return ExactComplex(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|self|^2 as an exact rational (used for exact |λ| < 1 tests)."""
        return self.re * self.re + self.im * self.im

    # -- comparisons / conversions ---------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        return f"ExactComplex({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_coefficient(self)


Coefficient = Union[ExactComplex, complex]

ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I = ExactComplex(0, 1)


def coeff_conj(c: Coefficient) -> Coefficient:
    """Complex conjugate, for either coefficient mode."""
    if isinstance(c, ExactComplex):
        return c.conjugate()
    return c.conjugate()


def coeff_is_zero(c: Coefficient, tol: float = 0.0) -> bool:
    if isinstance(c, ExactComplex):
        return not c
    return abs(c) <= tol


def _mode_zero(mode: str) -> Coefficient:
    return ZERO if mode == EXACT else 0j


def _coerce_coeff(c, mode: str) -> Coefficient:
    if mode == EXACT:
        if isinstance(c, ExactComplex):
            return c
        if isinstance(c, (int, Fraction)):
            return ExactComplex(c)
        raise TypeError(f"exact-mode coefficient must be rational, got {type(c).__name__}")
    return complex(c)


def numeric_tolerance(*polys: "LaurentPoly") -> float:
    """Scale-aware numeric zero threshold: EPS * (1 + max input magnitude)."""
    m = 0.0
    for p in polys:
        for c in p.coeffs.values():
            a = abs(complex(c))
            if a > m:
                m = a
    return NUMERIC_EPS * (1.0 + m)


class LaurentPoly:
    """A Laurent polynomial sum_k c_k z^k in canonical form (no stored zeros).

    ``coeffs`` maps integer frequency -> coefficient. Addition and
    multiplication agree with the pointwise function algebra on the circle
    (multiplication is coefficient convolution). Instances are immutable
    and hashable; the ``mode`` tag ("exact" or "numeric") must agree between
    operands of any binary operation.
    """

    __slots__ = ("coeffs", "mode", "_hash")

    def __init__(self, coeffs=None, mode: str = EXACT):
        if mode not in (EXACT, NUMERIC):
            raise ValueError(f"unknown arithmetic mode {mode!r}")
        clean = {}
        if coeffs:
            for k, c in coeffs.items():
                c = _coerce_coeff(c, mode)
                if not coeff_is_zero(c):
                    clean[int(k)] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, mode: str = EXACT) -> "LaurentPoly":
        return cls({}, mode)

    @classmethod
    def one(cls, mode: str = EXACT) -> "LaurentPoly":
        return cls({0: 1 if mode == EXACT else 1.0}, mode)

    @classmethod
    def monomial(cls, k: int, c=1, mode: str = EXACT) -> "LaurentPoly":
        return cls({k: c}, mode)

    # -- structure --------------------------------------------------------

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_deg(self) -> int:
        """Lowest frequency with a nonzero coefficient (0 for the zero symbol)."""
        return min(self.coeffs) if self.coeffs else 0

    def max_deg(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def span(self) -> int:
        """Degree span max-min; the bandwidth the operator layer budgets for."""
        if not self.coeffs:
            return 0
        return max(self.coeffs) - min(self.coeffs)

    def __getitem__(self, k: int) -> Coefficient:
        return self.coeffs.get(k, _mode_zero(self.mode))

    def __iter__(self) -> Iterator[tuple[int, Coefficient]]:
        return iter(sorted(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring operations ---------------------------------------------------

    def _check_mode(self, other: "LaurentPoly"):
        if self.mode != other.mode:
            raise ValueError(f"mixed arithmetic modes: {self.mode} vs {other.mode}")

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_mode(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, _mode_zero(self.mode)) + c
        return LaurentPoly(out, self.mode)

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.coeffs.items()}, self.mode)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ExactComplex, complex)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check_mode(other)
        out: dict[int, Coefficient] = {}
        zero = _mode_zero(self.mode)
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                k = k1 + k2
                out[k] = out.get(k, zero) + c1 * c2
        return LaurentPoly(out, self.mode)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ExactComplex, complex)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "LaurentPoly":
        c = _coerce_coeff(c, self.mode)
        return LaurentPoly({k: v * c for k, v in self.coeffs.items()}, self.mode)

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = LaurentPoly.one(self.mode)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- equality ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.mode == other.mode and self.coeffs == other.coeffs

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            items = tuple(sorted(self.coeffs.items(), key=lambda kv: kv[0]))
            h = hash((self.mode,) + tuple((k, hash(c)) for k, c in items))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"LaurentPoly({self.literal()!r})"

    # -- printing ----------------------------------------------------------

    def literal(self) -> str:
        """Canonical symbol literal; parse_symbol(literal(p)) == p exactly."""
        if not self.coeffs:
            return "0"
        pieces: list[str] = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if isinstance(c, ExactComplex):
                parts = []
                if c.re:
                    parts.append((_frac_str(c.re), False))
                if c.im:
                    parts.append((_frac_str(c.im), True))
            else:
                parts = []
                if c.real:
                    parts.append((repr(c.real), False))
                if c.imag:
                    parts.append((repr(c.imag), True))
            for text, imag in parts:
                term = text + ("i" if imag else "")
                if k != 0:
                    term += f"*z^{k}"
                pieces.append(term)
        out = pieces[0]
        for term in pieces[1:]:
            if term.startswith("-"):
                out += " - " + term[1:]
            else:
                out += " + " + term
        return out


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- the projections and involutions ---------------------------------------


def project_plus(f: LaurentPoly) -> LaurentPoly:
    """Riesz projection onto the analytic half: keep frequencies k >= 0."""
    return LaurentPoly({k: c for k, c in f.coeffs.items() if k >= 0}, f.mode)


def project_minus(f: LaurentPoly) -> LaurentPoly:
    """Complementary projection: keep frequencies k <= -1."""
    return LaurentPoly({k: c for k, c in f.coeffs.items() if k < 0}, f.mode)


def conj_fn(f: LaurentPoly) -> LaurentPoly:
    """Pointwise complex conjugate on the circle: coefficient k -> conj(f_{-k})."""
    return LaurentPoly({-k: coeff_conj(c) for k, c in f.coeffs.items()}, f.mode)


def v_transform(f: LaurentPoly) -> LaurentPoly:
    """The anti-unitary z̄·conj involution: (Vf)_j = conj(f_{-j-1}).

    V is additive-conjugate-linear, an involution, and swaps the analytic and
    coanalytic halves: project_plus(V f) = V(project_minus f).
    """
    return LaurentPoly({-k - 1: coeff_conj(c) for k, c in f.coeffs.items()}, f.mode)


def flip_tilde(f: LaurentPoly) -> LaurentPoly:
    """Frequency flip f(z) -> f(z̄): coefficient k -> f_{-k}."""
    return LaurentPoly({-k: c for k, c in f.coeffs.items()}, f.mode)


def star(f: LaurentPoly) -> LaurentPoly:
    """Coefficientwise conjugate, i.e. z -> conj(f(z̄)): coefficient k -> conj(f_k)."""
    return LaurentPoly({k: coeff_conj(c) for k, c in f.coeffs.items()}, f.mode)


def is_analytic(f: LaurentPoly, tol: Optional[float] = None) -> bool:
    """True when f has no coanalytic part (bounded-analytic membership)."""
    if f.mode == EXACT:
        return all(k >= 0 for k in f.coeffs)
    t = numeric_tolerance(f) if tol is None else tol
    return all(coeff_is_zero(c, t) for k, c in f.coeffs.items() if k < 0)


def is_coanalytic(f: LaurentPoly, tol: Optional[float] = None) -> bool:
    """True when conj_fn(f) is analytic, i.e. support lies in k <= 0."""
    if f.mode == EXACT:
        return all(k <= 0 for k in f.coeffs)
    t = numeric_tolerance(f) if tol is None else tol
    return all(coeff_is_zero(c, t) for k, c in f.coeffs.items() if k > 0)


def is_constant(f: LaurentPoly, tol: Optional[float] = None) -> Optional[Coefficient]:
    """The constant value (possibly 0) when support is {0} or empty, else None."""
    if f.mode == EXACT:
        if all(k == 0 for k in f.coeffs):
            return f[0]
        return None
    t = numeric_tolerance(f) if tol is None else tol
    if all(coeff_is_zero(c, t) for k, c in f.coeffs.items() if k != 0):
        return f[0]
    return None


# -- solving utilities -------------------------------------------------------


class Proportionality(NamedTuple):
    """Result of solve_proportional: u = lam * v, possibly degenerately (0 = λ·0)."""

    lam: Coefficient
    degenerate: bool


def _as_items(vec) -> tuple[list[tuple], str]:
    """Accept a LaurentPoly or a plain index->coefficient mapping."""
    if isinstance(vec, LaurentPoly):
        return sorted(vec.coeffs.items()), vec.mode
    items = sorted(vec.items())
    mode = EXACT
    for _, c in items:
        if not isinstance(c, ExactComplex):
            mode = NUMERIC
        break
    return items, mode


def solve_proportional(u, v, tol: float = 0.0) -> Optional[Proportionality]:
    """Solve u = lam*v over sparse coefficient vectors.

    The candidate lam comes from the first index (in increasing index order)
    where v is nonzero, and is then verified on the whole union support.
    v = u = 0 yields the degenerate lam = 0; v = 0 != u yields None.
    """
    u_items, u_mode = _as_items(u)
    v_items, v_mode = _as_items(v)
    # An empty side carries no mode information; trust whichever side has one.
    mode = NUMERIC if NUMERIC in (u_mode, v_mode) else EXACT
    u_map = dict(u_items)
    v_map = dict(v_items)
    zero = ZERO if mode == EXACT else 0j

    pivot = None
    for k, c in v_items:
        if not coeff_is_zero(c, tol):
            pivot = k
            break
    if pivot is None:
        if all(coeff_is_zero(c, tol) for _, c in u_items):
            return Proportionality(zero, True)
        return None

    lam = u_map.get(pivot, zero) / v_map[pivot]
    for k in set(u_map) | set(v_map):
        if not coeff_is_zero(u_map.get(k, zero) - lam * v_map.get(k, zero), tol):
            return None
    return Proportionality(lam, False)


def solve_affine_membership(a: LaurentPoly, b: LaurentPoly, tol: float = 0.0) -> Optional[Proportionality]:
    """Find lam with a - lam*b analytic, by matching the coanalytic parts."""
    return solve_proportional(project_minus(a), project_minus(b), tol)


# -- aggregate types ---------------------------------------------------------


class SymbolMatrix2:
    """The 2x2 symbol [[f, u], [g, v]] of a generalized singular integral operator.

    The row-major order matches the operator block structure: f drives the
    analytic-to-analytic corner, u the coanalytic-to-analytic corner, g the
    analytic-to-coanalytic corner, v the coanalytic-to-coanalytic corner.
    """

    __slots__ = ("f", "u", "g", "v")

    def __init__(self, f: LaurentPoly, u: LaurentPoly, g: LaurentPoly, v: LaurentPoly):
        mode = f.mode
        for p in (u, g, v):
            if p.mode != mode:
                raise ValueError("symbol matrix entries must share one arithmetic mode")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolMatrix2 is immutable")

    @property
    def mode(self) -> str:
        return self.f.mode

    def entries(self) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly, LaurentPoly]:
        return (self.f, self.u, self.g, self.v)

    def adjoint_symbol(self) -> "SymbolMatrix2":
        """Symbol of the adjoint operator: [[f̄, ḡ], [ū, v̄]]."""
        return SymbolMatrix2(conj_fn(self.f), conj_fn(self.g), conj_fn(self.u), conj_fn(self.v))

    @classmethod
    def sio(cls, f: LaurentPoly, g: LaurentPoly) -> "SymbolMatrix2":
        """The singular-integral shape [[f, g], [f, g]] (f on P+, g on P-)."""
        return cls(f, g, f, g)

    def is_sio_shaped(self) -> bool:
        return self.f == self.g and self.u == self.v

    def __eq__(self, other):
        if not isinstance(other, SymbolMatrix2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return (
            f"SymbolMatrix2(f={self.f.literal()!r}, u={self.u.literal()!r}, "
            f"g={self.g.literal()!r}, v={self.v.literal()!r})"
        )


class InnerMonomial:
    """The inner function z^power with power >= 1 (non-constant)."""

    __slots__ = ("power",)

    def __init__(self, power: int):
        if not isinstance(power, int) or power < 1:
            raise ValueError("inner monomial power must be an integer >= 1")
        object.__setattr__(self, "power", power)

    def __setattr__(self, name, value):
        raise AttributeError("InnerMonomial is immutable")

    def poly(self, mode: str = EXACT) -> LaurentPoly:
        return LaurentPoly.monomial(self.power, 1 if mode == EXACT else 1.0, mode)

    def __eq__(self, other):
        if not isinstance(other, InnerMonomial):
            return NotImplemented
        return self.power == other.power

    def __hash__(self):
        return hash(("InnerMonomial", self.power))

    def __repr__(self):
        return f"InnerMonomial({self.power})"


# -- parsing ------------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def done(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, min(self.pos, len(self.text) - 1) if self.text else 0)

    def take_int(self, signed: bool = True) -> int:
        self.skip_ws()
        start = self.pos
        if signed and self.peek() in ("+", "-"):
            self.pos += 1
        if not self.peek().isdigit():
            self.pos = start
            raise self.error("expected integer")
        while self.peek().isdigit():
            self.pos += 1
        return int(self.text[start : self.pos])

    def take_power(self) -> int:
        """Exponent after a consumed 'z': `^k` when present, else 1."""
        if self.peek() == "^":
            self.pos += 1
            return self.take_int()
        return 1

    def take_number(self, mode: str):
        """A rational p[/q] (exact) or decimal (numeric mode only); unsigned."""
        self.skip_ws()
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected number")
        if self.peek() in (".", "e", "E"):
            if mode != NUMERIC:
                raise self.error("decimal literals are only valid in numeric mode")
            if self.peek() == ".":
                self.pos += 1
                while self.peek().isdigit():
                    self.pos += 1
            if self.peek() in ("e", "E"):
                self.pos += 1
                if self.peek() in ("+", "-"):
                    self.pos += 1
                if not self.peek().isdigit():
                    raise self.error("malformed exponent")
                while self.peek().isdigit():
                    self.pos += 1
            return float(self.text[start : self.pos])
        num = int(self.text[start : self.pos])
        if self.peek() == "/":
            self.pos += 1
            dstart = self.pos
            while self.peek().isdigit():
                self.pos += 1
            if self.pos == dstart:
                raise self.error("expected denominator")
            den = int(self.text[dstart : self.pos])
            if den == 0:
                raise self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num) if mode == EXACT else float(num)


def parse_coefficient(text: str, mode: str = EXACT) -> Coefficient:
    """Parse a standalone coefficient literal `p/q[+r/s i]` (or `p/qi`)."""
    sc = _Scanner(text)
    c = _parse_coeff(sc, mode, leading_sign=True)
    if not sc.done():
        raise sc.error("trailing input after coefficient")
    return c


def format_coefficient(c: Coefficient) -> str:
    """Exact serialization `p/q[+r/s i]`; numeric coefficients use repr floats."""
    if isinstance(c, ExactComplex):
        if not c.im:
            return _frac_str(c.re)
        if not c.re:
            return _frac_str(c.im) + "i"
        im = _frac_str(c.im)
        return _frac_str(c.re) + ("+" + im if not im.startswith("-") else im) + "i"
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return repr(c.imag) + "i"
    return repr(c.real) + ("+" if c.imag >= 0 else "") + repr(c.imag) + "i"


def _parse_coeff(sc: _Scanner, mode: str, leading_sign: bool):
    """coeff := [sign] number ['i'] [ (+|-) number 'i' ]"""
    sc.skip_ws()
    sign = 1
    if leading_sign and sc.peek() in ("+", "-"):
        if sc.peek() == "-":
            sign = -1
        sc.pos += 1
        sc.skip_ws()
    first = sc.take_number(mode)
    if sc.peek() == "i":
        sc.pos += 1
        re, im = 0, sign * first
    else:
        re, im = sign * first, 0
        # optional attached imaginary part: only when followed by `<number>i`
        save = sc.pos
        sc.skip_ws()
        if sc.peek() in ("+", "-"):
            s2 = -1 if sc.peek() == "-" else 1
            sc.pos += 1
            try:
                second = sc.take_number(mode)
            except ParseError:
                sc.pos = save
            else:
                if sc.peek() == "i":
                    sc.pos += 1
                    im = s2 * second
                else:
                    sc.pos = save
    if mode == EXACT:
        return ExactComplex(re, im)
    return complex(re, im)


def _parse_term(sc: _Scanner, mode: str) -> tuple[int, Coefficient]:
    """term := coeff ['*'] 'z' ['^' int] | ['-'] 'z' ['^' int]"""
    sc.skip_ws()
    # bare z / z^k (coefficient 1) and their negations are accepted
    sign = 1
    save = sc.pos
    if sc.peek() == "-":
        sc.pos += 1
        sc.skip_ws()
        if sc.peek() == "z":
            sign = -1
        else:
            sc.pos = save
    if sc.peek() == "z":
        sc.pos += 1
        one = ExactComplex(sign) if mode == EXACT else complex(sign)
        return sc.take_power(), one
    c = _parse_coeff(sc, mode, leading_sign=True)
    sc.skip_ws()
    if sc.peek() == "*":
        sc.pos += 1
        sc.skip_ws()
        if sc.peek() != "z":
            raise sc.error("expected z after *")
    if sc.peek() == "z":
        sc.pos += 1
        return sc.take_power(), c
    return 0, c


def parse_symbol(text: str, mode: str = EXACT) -> LaurentPoly:
    """Parse a symbol literal: a sum of `coeff*z^k` terms (whitespace-insensitive).

    Terms with the same power accumulate, so the printer's split of a mixed
    complex coefficient into two simple terms round-trips exactly.
    """
    sc = _Scanner(text)
    sc.skip_ws()
    if sc.done():
        raise sc.error("empty symbol literal")
    coeffs: dict[int, Coefficient] = {}
    zero = _mode_zero(mode)
    first = True
    while not sc.done():
        if not first:
            op = sc.peek()
            if op not in ("+", "-"):
                raise sc.error("expected + or - between terms")
            sc.pos += 1
            k, c = _parse_term(sc, mode)
            if op == "-":
                c = -c
        else:
            k, c = _parse_term(sc, mode)
            first = False
        coeffs[k] = coeffs.get(k, zero) + c
    return LaurentPoly(coeffs, mode)

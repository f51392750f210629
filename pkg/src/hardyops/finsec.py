"""Finite-section numeric oracle: dense truncations, FFT matvec, verification.

This is the package's second, independent route to every operator identity:
truncate each primitive to an n x n (or 2n x 2n) matrix in the Fourier
basis, combine the matrices the way the expression combines operators, and
compare.  Products of truncations only agree with truncations of products
away from the section boundary, so identity checks are run on a padded
section and compared on the low-frequency corner block only.

Nothing in here feeds back into the exact engine or the theorem
classifiers; a disagreement between the two routes is a bug by definition,
never a fallback.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from . import operators as ops
from .symbols import EXACT, NUMERIC, LaurentPoly, SymbolMatrix2

__all__ = [
    "DenseMatrix",
    "SectionSpec",
    "BlaschkeExpansion",
    "toeplitz_matrix",
    "hankel_matrix",
    "hankel_adj_matrix",
    "dual_toeplitz_matrix",
    "gsio_matrix",
    "mult_matrix",
    "section_matrix",
    "section_spec_for",
    "fft_toeplitz_matvec",
    "numeric_defect",
    "numeric_verify",
    "blaschke_fourier",
    "benchmark_fft",
    "format_benchmark_csv",
    "TOL_APPLY",
    "TOL_IDENTITY_PER_N",
    "TOL_BLASCHKE",
]

# Tolerance tiers: single matrix application / composed identities (scaled
# by section size) / truncated infinite expansions.
TOL_APPLY = 1e-12
TOL_IDENTITY_PER_N = 1e-9
TOL_BLASCHKE = 1e-8


class DenseMatrix:
    """A finite complex matrix that refuses NaN/Inf entries."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.ascontiguousarray(np.asarray(data, dtype=np.complex128))
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got ndim={arr.ndim}")
        if not np.isfinite(arr).all():
            raise ValueError("matrix contains non-finite entries")
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("DenseMatrix is immutable")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def entry(self, j: int, k: int) -> complex:
        return complex(self.data[j, k])

    def __matmul__(self, other):
        if isinstance(other, DenseMatrix):
            return DenseMatrix(self.data @ other.data)
        return self.data @ np.asarray(other, dtype=np.complex128)

    def conj_transpose(self) -> "DenseMatrix":
        return DenseMatrix(self.data.conj().T)

    def __repr__(self):
        return f"DenseMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class SectionSpec:
    """Comparison block size ``n`` plus boundary padding ``pad``.

    Identities are evaluated on sections of size n + 2*pad and compared on
    the lowest n frequencies of each half, so ``pad`` must absorb the whole
    bandwidth of the expression; n > 2*pad keeps the clean block dominant.
    """

    n: int
    pad: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("section size must be positive")
        if self.pad < 0:
            raise ValueError("padding must be non-negative")
        if self.n <= 2 * self.pad:
            raise ValueError(f"section size {self.n} must exceed twice the padding {self.pad}")

    @property
    def padded(self) -> int:
        return self.n + 2 * self.pad


def section_spec_for(n: int, *exprs: "ops.OpExpr") -> SectionSpec:
    """A SectionSpec whose padding covers the bandwidth of every expression."""
    pad = max((ops.span_bound(e) for e in exprs), default=0)
    return SectionSpec(n, pad)


# -- primitive sections --------------------------------------------------------
#
# Bases: H2 is sampled on z^0..z^{n-1}; its complement on zbar^1..zbar^n.
# Row/column order everywhere below follows those lists, and L2 sections
# stack the analytic block on top of the coanalytic one.


def _coeff_items(f: LaurentPoly) -> list[tuple[int, complex]]:
    return [(k, complex(c)) for k, c in f.coeffs.items()]


def toeplitz_matrix(f: LaurentPoly, n: int) -> DenseMatrix:
    """Entries <P+(f z^k), z^j> = f[j-k]: constant along diagonals."""
    if n < 1:
        raise ValueError("section size must be positive")
    m = np.zeros((n, n), dtype=np.complex128)
    for d, c in _coeff_items(f):
        if -n < d < n:
            np.fill_diagonal(m[max(d, 0):, max(-d, 0):], c)
    return DenseMatrix(m)


def hankel_matrix(g: LaurentPoly, n: int) -> DenseMatrix:
    """Entries <P-(g z^k), zbar^j> = g[-j-k] (rows j = 1..n): anti-diagonals."""
    if n < 1:
        raise ValueError("section size must be positive")
    m = np.zeros((n, n), dtype=np.complex128)
    for d, c in _coeff_items(g):
        s = -d - 1  # row0-based anti-diagonal r + k = s carries g[d], d <= -1
        if 0 <= s <= 2 * n - 2:
            r = np.arange(max(0, s - (n - 1)), min(n - 1, s) + 1)
            m[r, s - r] = c
    return DenseMatrix(m)


def hankel_adj_matrix(u: LaurentPoly, n: int) -> DenseMatrix:
    """Entries <P+(u zbar^k), z^j> = u[j+k] (columns k = 1..n)."""
    if n < 1:
        raise ValueError("section size must be positive")
    m = np.zeros((n, n), dtype=np.complex128)
    for d, c in _coeff_items(u):
        s = d - 1  # anti-diagonal j + (k-1) = s carries u[d], d >= 1
        if 0 <= s <= 2 * n - 2:
            r = np.arange(max(0, s - (n - 1)), min(n - 1, s) + 1)
            m[r, s - r] = c
    return DenseMatrix(m)


def dual_toeplitz_matrix(v: LaurentPoly, n: int) -> DenseMatrix:
    """Entries <P-(v zbar^k), zbar^j> = v[k-j] on the conjugate basis."""
    if n < 1:
        raise ValueError("section size must be positive")
    m = np.zeros((n, n), dtype=np.complex128)
    for d, c in _coeff_items(v):
        if -n < d < n:
            np.fill_diagonal(m[max(-d, 0):, max(d, 0):], c)
    return DenseMatrix(m)


def gsio_matrix(h: SymbolMatrix2, n: int) -> DenseMatrix:
    """The 2n x 2n block section [[T(f), HA(u)], [H(g), DT(v)]]."""
    return DenseMatrix(
        np.block(
            [
                [toeplitz_matrix(h.f, n).data, hankel_adj_matrix(h.u, n).data],
                [hankel_matrix(h.g, n).data, dual_toeplitz_matrix(h.v, n).data],
            ]
        )
    )


def mult_matrix(f: LaurentPoly, n: int) -> DenseMatrix:
    """Section of plain multiplication: the block symbol repeats f four times."""
    return gsio_matrix(SymbolMatrix2(f, f, f, f), n)


def _tag_size(tag: str, n: int) -> int:
    return 2 * n if tag == ops.L2 else n


def section_matrix(expr: "ops.OpExpr", n: int) -> DenseMatrix:
    """Finite section of an arbitrary operator expression.

    Compositions multiply the children's sections, so away from the
    boundary this matches the section of the composed operator but near it
    it does not; callers comparing expressions must pad (see numeric_verify).
    Adjoint and corner extraction commute with sectioning exactly.
    """
    return DenseMatrix(_section(expr, n))


def _section(expr: "ops.OpExpr", n: int) -> np.ndarray:
    if isinstance(expr, ops.Toeplitz):
        return toeplitz_matrix(expr.symbol, n).data
    if isinstance(expr, ops.Hankel):
        return hankel_matrix(expr.symbol, n).data
    if isinstance(expr, ops.HankelAdj):
        return hankel_adj_matrix(expr.symbol, n).data
    if isinstance(expr, ops.DualToeplitz):
        return dual_toeplitz_matrix(expr.symbol, n).data
    if isinstance(expr, ops.Mult):
        return mult_matrix(expr.symbol, n).data
    if isinstance(expr, ops.Gsio):
        return gsio_matrix(expr.h, n).data
    if isinstance(expr, ops.RieszPlus):
        m = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        m[:n, :n] = np.eye(n)
        return m
    if isinstance(expr, ops.RieszMinus):
        m = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        m[n:, n:] = np.eye(n)
        return m
    if isinstance(expr, ops.Identity):
        return np.eye(_tag_size(expr.domain, n), dtype=np.complex128)
    if isinstance(expr, ops.Zero):
        return np.zeros((_tag_size(expr.codomain, n), _tag_size(expr.domain, n)), dtype=np.complex128)
    if isinstance(expr, ops.Compose):
        a, b = expr.children()
        return _section(a, n) @ _section(b, n)
    if isinstance(expr, ops.OpSum):
        parts = [_section(t, n) for t in expr.children()]
        return sum(parts[1:], parts[0])
    if isinstance(expr, ops.Scale):
        return complex(expr.c) * _section(expr.children()[0], n)
    if isinstance(expr, ops.Adjoint):
        return _section(expr.children()[0], n).conj().T
    if isinstance(expr, ops.Corner):
        block = _section(expr.children()[0], n)
        r = slice(0, n) if expr.which[0] == "p" else slice(n, 2 * n)
        c = slice(0, n) if expr.which[1] == "p" else slice(n, 2 * n)
        return block[r, c]
    raise TypeError(f"no finite section rule for {type(expr).__name__}")


# -- fast structured matvec ----------------------------------------------------


def fft_toeplitz_matvec(f: LaurentPoly, x) -> np.ndarray:
    """Multiply the n x n section of T(f) by x via circulant embedding.

    The section only sees diagonals |d| < n, so the symbol is truncated to
    that band, embedded in a circulant of power-of-two size >= 2n, and the
    product reduces to three FFTs: O(n log n) against the dense O(n^2).
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[0]
    if n == 0:
        return x.copy()
    size = 1
    while size < 2 * n:
        size *= 2
    col = np.zeros(size, dtype=np.complex128)
    for d, c in _coeff_items(f):
        if 0 <= d < n:
            col[d] = c
        elif -n < d < 0:
            col[size + d] = c
    xp = np.zeros(size, dtype=np.complex128)
    xp[:n] = x
    y = np.fft.ifft(np.fft.fft(col) * np.fft.fft(xp))
    return y[:n]


# -- padded identity verification ----------------------------------------------


def _clean_indices(tag: str, spec: SectionSpec) -> np.ndarray:
    if tag == ops.L2:
        m = spec.padded
        return np.concatenate([np.arange(spec.n), np.arange(m, m + spec.n)])
    return np.arange(spec.n)


def numeric_defect(lhs: "ops.OpExpr", rhs: "ops.OpExpr", spec: SectionSpec) -> float:
    """Max |entry| of the padded-section difference on the clean corner block.

    Sections are built at size n + 2*pad; only the lowest n frequencies of
    each half are compared, because that corner of a product section is
    exact whenever pad covers the bandwidth of every factor.
    """
    if lhs.domain != rhs.domain or lhs.codomain != rhs.codomain:
        raise ops.SignatureError(
            f"comparing maps {lhs.domain}->{lhs.codomain} and {rhs.domain}->{rhs.codomain}"
        )
    diff = _section(lhs, spec.padded) - _section(rhs, spec.padded)
    rows = _clean_indices(lhs.codomain, spec)
    cols = _clean_indices(lhs.domain, spec)
    core = diff[np.ix_(rows, cols)]
    return float(np.abs(core).max()) if core.size else 0.0


def numeric_verify(lhs: "ops.OpExpr", rhs: "ops.OpExpr", spec: SectionSpec, tol: Optional[float] = None) -> bool:
    """Double-precision equality verdict for two operator expressions."""
    t = TOL_IDENTITY_PER_N * spec.n if tol is None else tol
    return numeric_defect(lhs, rhs, spec) <= t


# -- truncated expansions of non-polynomial inner symbols -----------------------


class BlaschkeExpansion(NamedTuple):
    """Truncated Fourier expansion of a finite Blaschke product.

    ``tail_bound`` is the measured sup-norm distance between the truncation
    and the true boundary values on a dense sampling grid.
    """

    poly: LaurentPoly
    tail_bound: float


def blaschke_fourier(zeros: Sequence[complex], degree: int) -> BlaschkeExpansion:
    """Fourier coefficients (through z^degree) of the Blaschke product with
    the given zeros.

    Each zero a contributes the disk automorphism factor (|a|/a)(a-z)/(1-conj(a)z)
    (plain z when a = 0); the product is analytic, so only non-negative
    frequencies appear and they decay like max|a|^k. Coefficients are read
    off by FFT on an oversampled boundary grid; numeric mode only.
    """
    if degree < 0:
        raise ValueError("truncation degree must be non-negative")
    zs = [complex(a) for a in zeros]
    for a in zs:
        if abs(a) >= 1.0:
            raise ValueError(f"Blaschke zero must lie inside the open disk, got |a| = {abs(a)}")

    if all(a == 0 for a in zs):
        # pure shift: z^m with no truncation error (when it fits the budget)
        m = len(zs)
        if m <= degree:
            return BlaschkeExpansion(LaurentPoly({m: 1.0}, NUMERIC), 0.0)
        return BlaschkeExpansion(LaurentPoly({}, NUMERIC), 1.0)

    grid = 1
    while grid < max(4 * (degree + 1), 512):
        grid *= 2
    theta = 2.0 * np.pi * np.arange(grid) / grid
    w = np.exp(1j * theta)
    vals = np.ones(grid, dtype=np.complex128)
    for a in zs:
        if a == 0:
            vals *= w
        else:
            vals *= (abs(a) / a) * (a - w) / (1.0 - np.conj(a) * w)
    hats = np.fft.fft(vals) / grid  # hats[k] ~= coefficient of z^k for 0 <= k <= grid/2
    coeffs = {k: complex(hats[k]) for k in range(min(degree, grid - 1) + 1)}
    poly = LaurentPoly(coeffs, NUMERIC)

    # measured truncation error on the sampling grid
    approx = np.zeros(grid, dtype=np.complex128)
    for k, c in coeffs.items():
        approx += c * w**k
    tail = float(np.abs(vals - approx).max())
    return BlaschkeExpansion(poly, tail)


# -- benchmark harness -----------------------------------------------------------


class BenchRow(NamedTuple):
    n: int
    method: str
    nanos: int


def benchmark_fft(sizes: Iterable[int] = (64, 512, 4096), repeats: int = 3, seed: int = 0) -> list[BenchRow]:
    """Time dense vs FFT Toeplitz matvec; smallest-of-repeats per method."""
    rng = np.random.default_rng(seed)
    rows: list[BenchRow] = []
    for n in sizes:
        ks = range(-4, 5)
        f = LaurentPoly({k: complex(rng.standard_normal() + 1j * rng.standard_normal()) for k in ks}, NUMERIC)
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        dense = toeplitz_matrix(f, n)
        best = {"dense": None, "fft": None}
        for _ in range(repeats):
            t0 = time.perf_counter_ns()
            dense @ x
            t1 = time.perf_counter_ns()
            fft_toeplitz_matvec(f, x)
            t2 = time.perf_counter_ns()
            for method, dt in (("dense", t1 - t0), ("fft", t2 - t1)):
                if best[method] is None or dt < best[method]:
                    best[method] = dt
        rows.append(BenchRow(n, "dense", best["dense"]))
        rows.append(BenchRow(n, "fft", best["fft"]))
    return rows


def format_benchmark_csv(rows: Iterable[BenchRow]) -> str:
    lines = ["n,method,nanos"]
    lines += [f"{r.n},{r.method},{r.nanos}" for r in rows]
    return "\n".join(lines) + "\n"

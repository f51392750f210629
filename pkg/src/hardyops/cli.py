"""Command-line front end: one decision job per invocation, deterministic output.

Every checking command runs the symbolic decision procedure and then, as an
independent cross-check, the direct operator-engine computation of the same
question; the report carries both.  Output is built in full before anything is
written, JSON output is byte-identical for identical inputs, and the optional
timing line is opt-in (``--timing``, text format only) so default output stays
reproducible.

Exit codes: 0 when the job was decided (whatever the verdict), 2 for input
errors (bad flags, malformed symbols, contract violations), 3 when the
decision procedure and the operator engine disagree — an internal defect.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import finsec
from . import operators as ops
from .decisions import (
    InconsistencyError,
    adtp_product,
    commute,
    dtt_commute,
    isometry_check,
    semi_commute,
    sio_normal,
    sio_quasinormal,
)
from .symbols import (
    EXACT,
    NUMERIC,
    InnerMonomial,
    LaurentPoly,
    ParseError,
    SymbolMatrix2,
    format_coefficient,
    numeric_tolerance,
    parse_symbol,
    project_minus,
    project_plus,
)

GSIO_SLOTS = ("f", "u", "g", "v")


def parse_symbols(text: str, slots: tuple[str, ...], mode: str, flag: str) -> dict[str, LaurentPoly]:
    """Parse `name=symbol;name=symbol` assignments for the given slot names."""
    out: dict[str, LaurentPoly] = {}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        name, eq, value = chunk.partition("=")
        name = name.strip()
        if not eq:
            raise ParseError(f"expected name=symbol in {flag}", chunk, 0)
        if name not in slots:
            raise ParseError(f"unknown slot {name!r} in {flag} (expected {', '.join(slots)})", chunk, 0)
        if name in out:
            raise ParseError(f"slot {name!r} assigned twice in {flag}", chunk, 0)
        out[name] = parse_symbol(value, mode)
    for name in slots:
        if name not in out:
            raise ParseError(f"missing symbol {name!r} in {flag}", text, 0)
    return out


def _matrix_arg(text: str, mode: str, flag: str) -> SymbolMatrix2:
    slots = parse_symbols(text, GSIO_SLOTS, mode, flag)
    return SymbolMatrix2(slots["f"], slots["u"], slots["g"], slots["v"])


def _matrix_str(h: SymbolMatrix2) -> str:
    return ";".join(f"{name}={poly.literal()}" for name, poly in zip(GSIO_SLOTS, h.entries()))


def _constants_str(constants: Optional[dict]) -> Optional[dict[str, str]]:
    if constants is None:
        return None
    return {name: format_coefficient(value) for name, value in sorted(constants.items())}


@dataclass
class VerdictReport:
    """Everything one job reports; rendering picks the fields a format shows."""

    command: str
    verdict: Optional[bool] = None
    case: Optional[str] = None
    constants: Optional[dict] = field(default=None)
    product: Optional[str] = None
    oracle_agree: Optional[bool] = None
    tolerance: Optional[float] = None
    elapsed_ms: Optional[float] = None


def report_emit(report: VerdictReport, fmt: str, timing: bool) -> str:
    if fmt == "json":
        payload = {
            "command": report.command,
            "verdict": report.verdict,
            "case": report.case,
            "constants": _constants_str(report.constants),
            "product": report.product,
            "oracle_agree": report.oracle_agree,
        }
        if report.tolerance is not None:
            payload["tolerance"] = report.tolerance
        return json.dumps(payload, sort_keys=True) + "\n"

    lines = [f"command: {report.command}"]
    if report.verdict is not None:
        lines.append(f"verdict: {'true' if report.verdict else 'false'}")
    if report.case is not None:
        lines.append(f"case: {report.case}")
    constants = _constants_str(report.constants)
    if constants:
        lines.append("constants: " + " ".join(f"{k}={v}" for k, v in constants.items()))
    if report.product is not None:
        lines.append(f"product: {report.product}")
    if report.oracle_agree is not None:
        lines.append(f"oracle: {'agree' if report.oracle_agree else 'DISAGREE'}")
    if report.tolerance is not None:
        lines.append(f"tolerance: {report.tolerance!r}")
    if timing and report.elapsed_ms is not None:
        lines.append(f"elapsed: {report.elapsed_ms:.1f} ms")
    return "\n".join(lines) + "\n"


def _commutator(a: ops.OpExpr, b: ops.OpExpr) -> ops.OpExpr:
    return ops.OpSum([ops.Compose(a, b), ops.Scale(-1, ops.Compose(b, a))])


def _tolerance_for(mode: str, *polys: LaurentPoly) -> Optional[float]:
    if mode != NUMERIC:
        return None
    return numeric_tolerance(*polys)


# -- command handlers ---------------------------------------------------------


def _cmd_project(args) -> VerdictReport:
    f = parse_symbol(args.symbol, args.mode)
    out = project_plus(f) if args.part == "plus" else project_minus(f)
    return VerdictReport("project", product=out.literal())


def _cmd_apply(args) -> VerdictReport:
    expr = ops.parse_expr(args.expr, args.mode)
    tag = {"plus": ops.H2, "minus": ops.H2PERP, "full": ops.L2}[args.space]
    vec = ops.FourierVector(parse_symbol(args.input, args.mode), tag)
    result = ops.apply(expr, vec)
    return VerdictReport("apply", product=result.poly.literal())


def _cmd_check_product(args) -> VerdictReport:
    h1 = _matrix_arg(args.H1, args.mode, "--H1")
    h2 = _matrix_arg(args.H2, args.mode, "--H2")
    verdict = semi_commute(h1, h2)

    comp = ops.Compose(ops.Gsio(h1), ops.Gsio(h2))
    recovered = ops.is_gsio(comp)
    agree = verdict.is_gsio == (recovered is not None)
    if agree and verdict.is_gsio:
        agree = ops.op_equal(ops.Gsio(verdict.product), comp)
    if not agree:
        raise InconsistencyError("product classifier and operator recovery disagree")

    constants = None if verdict.lam is None else {"lam": verdict.lam}
    return VerdictReport(
        "check-product",
        verdict=verdict.is_gsio,
        case=verdict.case,
        constants=constants,
        product=None if verdict.product is None else _matrix_str(verdict.product),
        oracle_agree=agree,
        tolerance=_tolerance_for(args.mode, *h1.entries(), *h2.entries()),
    )


def _commute_report(args, command: str, full_cases: bool) -> VerdictReport:
    h1 = _matrix_arg(args.H1, args.mode, "--H1")
    h2 = _matrix_arg(args.H2, args.mode, "--H2")
    verdict = commute(h1, h2)

    direct = ops.op_zero_test(_commutator(ops.Gsio(h1), ops.Gsio(h2)))
    agree = direct == verdict.commutes
    if not agree:
        raise InconsistencyError("commutation classifier and operator commutator disagree")

    case = None
    constants = None
    if verdict.classification is not None and verdict.classification.matches:
        matches = verdict.classification.matches
        labels = ",".join(m.label for m in matches) if full_cases else matches[0].label
        case = f"rank{verdict.rank}:{labels}"
        constants = matches[0].constants or None
    elif verdict.rank is not None:
        case = f"rank{verdict.rank}:"
    return VerdictReport(
        command,
        verdict=verdict.commutes,
        case=case,
        constants=constants,
        oracle_agree=agree,
        tolerance=_tolerance_for(args.mode, *h1.entries(), *h2.entries()),
    )


def _cmd_check_commute(args) -> VerdictReport:
    return _commute_report(args, "check-commute", full_cases=False)


def _cmd_classify_commute(args) -> VerdictReport:
    return _commute_report(args, "classify-commute", full_cases=True)


def _cmd_check_isometry(args) -> VerdictReport:
    h = _matrix_arg(args.H, args.mode, "--H")
    verdict = isometry_check(h)

    g = ops.Gsio(h)
    defect = ops.OpSum(
        [ops.Compose(ops.Adjoint(g), g), ops.Scale(-1, ops.Identity(ops.L2))]
    )
    agree = ops.op_zero_test(defect) == verdict.isometry
    if not agree:
        raise InconsistencyError("isometry classifier and operator defect disagree")

    constants = None if verdict.lam is None else {"lam": verdict.lam}
    return VerdictReport(
        "check-isometry",
        verdict=verdict.isometry,
        case=verdict.case,
        constants=constants,
        oracle_agree=agree,
        tolerance=_tolerance_for(args.mode, *h.entries()),
    )


def _sio_pair(args) -> tuple[LaurentPoly, LaurentPoly]:
    return parse_symbol(args.f, args.mode), parse_symbol(args.g, args.mode)


def _cmd_check_normal(args) -> VerdictReport:
    f, g = _sio_pair(args)
    verdict = sio_normal(f, g)

    s = ops.Gsio(SymbolMatrix2.sio(f, g))
    defect = ops.OpSum(
        [
            ops.Compose(ops.Adjoint(s), s),
            ops.Scale(-1, ops.Compose(s, ops.Adjoint(s))),
        ]
    )
    agree = ops.op_zero_test(defect) == verdict.normal
    if not agree:
        raise InconsistencyError("normality classifier and operator defect disagree")

    constants = None if verdict.lam is None else {"lam": verdict.lam}
    return VerdictReport(
        "check-normal",
        verdict=verdict.normal,
        case=verdict.case,
        constants=constants,
        oracle_agree=agree,
        tolerance=_tolerance_for(args.mode, f, g),
    )


def _cmd_check_quasinormal(args) -> VerdictReport:
    f, g = _sio_pair(args)
    verdict = sio_quasinormal(f, g)

    s = ops.Gsio(SymbolMatrix2.sio(f, g))
    star_then = ops.Compose(ops.Adjoint(s), ops.Compose(s, s))
    then_star = ops.Compose(s, ops.Compose(ops.Adjoint(s), s))
    agree = ops.op_zero_test(ops.OpSum([star_then, ops.Scale(-1, then_star)])) == verdict.quasinormal
    if not agree:
        raise InconsistencyError("quasinormality classifier and operator defect disagree")

    first = verdict.cases[0] if verdict.cases else None
    return VerdictReport(
        "check-quasinormal",
        verdict=verdict.quasinormal,
        case=None if first is None else first.label,
        constants=None if first is None else (first.constants or None),
        oracle_agree=agree,
        tolerance=_tolerance_for(args.mode, f, g),
    )


def _adtp_matrices(
    psi: LaurentPoly, phi: LaurentPoly, a: int, b: int, t: int
) -> tuple[SymbolMatrix2, SymbolMatrix2]:
    mode = psi.mode
    mono = lambda k: LaurentPoly.monomial(k, 1, mode)  # noqa: E731
    first = SymbolMatrix2(mono(a - b) * psi, mono(-b) * psi, mono(a) * psi, psi)
    second = SymbolMatrix2(mono(t - a) * phi, mono(-a) * phi, mono(t) * phi, phi)
    return first, second


def _cmd_check_adtp(args) -> VerdictReport:
    psi = parse_symbol(args.psi, args.mode)
    phi = parse_symbol(args.phi, args.mode)
    for name, power in (("a", args.a), ("b", args.b), ("t", args.t)):
        if power < 1:
            raise ValueError(f"inner power {name} must be >= 1 (got {power})")
    verdict = adtp_product(psi, phi, InnerMonomial(args.a), InnerMonomial(args.b), InnerMonomial(args.t))

    first, second = _adtp_matrices(psi, phi, args.a, args.b, args.t)
    comp = ops.Compose(ops.Gsio(first), ops.Gsio(second))
    recovered = ops.is_gsio(comp)
    agree = verdict.holds == (recovered is not None)
    if agree and verdict.holds:
        mono = lambda k: LaurentPoly.monomial(k, 1, psi.mode)  # noqa: E731
        sigma = verdict.sigma
        block = SymbolMatrix2(
            mono(args.t - args.b) * sigma, mono(-args.b) * sigma, mono(args.t) * sigma, sigma
        )
        agree = ops.op_equal(ops.Gsio(block), comp)
    if not agree:
        raise InconsistencyError("compression-product classifier and operator recovery disagree")

    constants = None if verdict.lam is None else {"lam": verdict.lam}
    return VerdictReport(
        "check-adtp",
        verdict=verdict.holds,
        case=verdict.case,
        constants=constants,
        product=None if verdict.sigma is None else verdict.sigma.literal(),
        oracle_agree=agree,
    )


def _cmd_check_dtt_commute(args) -> VerdictReport:
    phi = parse_symbol(args.phi, args.mode)
    psi = parse_symbol(args.psi, args.mode)
    if args.t < 1:
        raise ValueError(f"inner power t must be >= 1 (got {args.t})")
    verdict = dtt_commute(phi, psi, InnerMonomial(args.t))

    mode = phi.mode
    mono = lambda k: LaurentPoly.monomial(k, 1, mode)  # noqa: E731

    def block(p: LaurentPoly) -> ops.OpExpr:
        return ops.Gsio(SymbolMatrix2(p, mono(-args.t) * p, mono(args.t) * p, p))

    agree = ops.op_zero_test(_commutator(block(phi), block(psi))) == verdict.commutes
    if not agree:
        raise InconsistencyError("compression commutation classifier and operator commutator disagree")

    first = verdict.matches[0] if verdict.matches else None
    return VerdictReport(
        "check-dtt-commute",
        verdict=verdict.commutes,
        case=None if first is None else ",".join(m.label for m in verdict.matches),
        constants=None if first is None else (first.constants or None),
        oracle_agree=agree,
    )


def _cmd_verify_numeric(args) -> VerdictReport:
    lhs = ops.parse_expr(args.lhs, args.mode)
    rhs = ops.parse_expr(args.rhs, args.mode)
    spec = finsec.section_spec_for(args.n, lhs, rhs)
    ok = finsec.numeric_verify(lhs, rhs, spec)
    return VerdictReport(
        "verify-numeric",
        verdict=ok,
        tolerance=finsec.TOL_IDENTITY_PER_N * args.n,
    )


def _cmd_bench_fft(args) -> str:
    sizes = tuple(int(s) for s in args.sizes.split(","))
    rows = finsec.benchmark_fft(sizes, repeats=args.repeats, seed=args.seed)
    return finsec.format_benchmark_csv(rows)


# -- parser and entry point ---------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardyops",
        description="Decision procedures for block operators on the circle Hardy space.",
    )
    parser.add_argument(
        "--mode",
        choices=(EXACT, NUMERIC),
        default=os.environ.get("HARDYOPS_MODE", EXACT),
        help="coefficient arithmetic (default: HARDYOPS_MODE env var, else exact)",
    )
    parser.add_argument("--format", choices=("json", "text"), default="json", help="report format")
    parser.add_argument("--timing", action="store_true", help="append a timing line (text format)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", help="apply the analytic or coanalytic projection to a symbol")
    p.add_argument("--symbol", required=True)
    p.add_argument("--part", choices=("plus", "minus"), required=True)
    p.set_defaults(handler=_cmd_project)

    p = sub.add_parser("apply", help="apply an operator expression to a finite vector")
    p.add_argument("--expr", required=True, help='operator expression, e.g. (toeplitz "z^1")')
    p.add_argument("--input", required=True, help="vector as a symbol literal")
    p.add_argument("--space", choices=("plus", "minus", "full"), default="plus")
    p.set_defaults(handler=_cmd_apply)

    p = sub.add_parser("check-product", help="is the product of two block operators again one?")
    p.add_argument("--H1", required=True, help="first symbol matrix: f=..;u=..;g=..;v=..")
    p.add_argument("--H2", required=True, help="second symbol matrix")
    p.set_defaults(handler=_cmd_check_product)

    p = sub.add_parser("check-commute", help="do two block operators commute?")
    p.add_argument("--H1", required=True)
    p.add_argument("--H2", required=True)
    p.set_defaults(handler=_cmd_check_commute)

    p = sub.add_parser("classify-commute", help="commutation verdict with every matching case")
    p.add_argument("--H1", required=True)
    p.add_argument("--H2", required=True)
    p.set_defaults(handler=_cmd_classify_commute)

    p = sub.add_parser("check-isometry", help="is the block operator an isometry?")
    p.add_argument("--H", required=True)
    p.set_defaults(handler=_cmd_check_isometry)

    p = sub.add_parser("check-normal", help="is the singular-integral operator normal?")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(handler=_cmd_check_normal)

    p = sub.add_parser("check-quasinormal", help="is the singular-integral operator quasinormal?")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(handler=_cmd_check_quasinormal)

    p = sub.add_parser("check-adtp", help="is a composition of two cross-space compressions one compression?")
    p.add_argument("--psi", required=True, help="multiplier of the left factor")
    p.add_argument("--phi", required=True, help="multiplier of the right factor")
    p.add_argument("--a", type=int, required=True, help="shared inner power")
    p.add_argument("--b", type=int, required=True, help="target inner power")
    p.add_argument("--t", type=int, required=True, help="source inner power")
    p.set_defaults(handler=_cmd_check_adtp)

    p = sub.add_parser("check-dtt-commute", help="do two same-space compressions commute?")
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--t", type=int, required=True, help="inner power of the common corner")
    p.set_defaults(handler=_cmd_check_dtt_commute)

    p = sub.add_parser("verify-numeric", help="finite-section comparison of two operator expressions")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_verify_numeric)

    p = sub.add_parser("bench-fft", help="CSV timing table: FFT vs dense Toeplitz apply")
    p.add_argument("--sizes", default="64,512,4096")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_bench_fft)

    return parser


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return 0 if code == 0 else 2
    if args.mode not in (EXACT, NUMERIC):  # a bad HARDYOPS_MODE bypasses choices=
        sys.stderr.write(f"error: invalid mode {args.mode!r} (use exact or numeric)\n")
        return 2

    start = time.perf_counter()
    try:
        result = args.handler(args)
    except InconsistencyError as exc:
        sys.stderr.write(f"internal inconsistency: {exc}\n")
        return 3
    except (ParseError, ops.SignatureError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2

    if isinstance(result, str):  # bench-fft emits CSV directly
        sys.stdout.write(result)
        return 0
    result.elapsed_ms = (time.perf_counter() - start) * 1e3
    sys.stdout.write(report_emit(result, args.format, args.timing))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

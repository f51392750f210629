"""Acceptance gate: the ten release criteria, one test per criterion.

Tolerances are pinned here and nowhere else: symbolic criteria run at zero
tolerance in exact arithmetic; the numeric oracle runs at 1e-9 * n; section
columns match exact application to 1e-12; the FFT path to 1e-10 relative.
Each test records a one-line verdict that the terminal summary reprints.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

import conftest
import support as sp
from hardyops import decisions as D
from hardyops.finsec import (
    TOL_APPLY,
    SectionSpec,
    benchmark_fft,
    fft_toeplitz_matvec,
    gsio_matrix,
    numeric_verify,
    toeplitz_matrix,
)
from hardyops.operators import (
    Adjoint,
    Compose,
    DualToeplitz,
    FourierVector,
    Gsio,
    H2,
    Hankel,
    L2,
    OpSum,
    Toeplitz,
    apply,
    is_dual_toeplitz,
    is_gsio,
    is_hankel,
    is_toeplitz,
    mult_identities_check,
    op_equal,
    op_zero_test,
)
from hardyops.ranktests import (
    OuterCombination,
    OuterTerm,
    StackedVector,
    matrix2_zero_product,
    rank_of,
    skew_rank_parity_check,
)
from hardyops.symbols import (
    NUMERIC,
    ExactComplex,
    InnerMonomial,
    LaurentPoly,
    SymbolMatrix2,
    is_analytic,
    is_coanalytic,
    project_minus,
)


def _tail(p: LaurentPoly) -> StackedVector:
    return StackedVector.from_tails(project_minus(p), LaurentPoly.zero(p.mode))


def _numeric_twin(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({k: complex(c) for k, c in p.coeffs.items()}, NUMERIC)


# ---------------------------------------------------------------------------


def test_criterion_01_multiplication_identities():
    conftest.start(1)
    rng = random.Random(101)
    t0 = time.perf_counter()
    failures = 0
    for _ in range(500):
        f = sp.rand_poly(rng, span=5, bound=9)
        g = sp.rand_poly(rng, span=5, bound=9)
        if not mult_identities_check(f, g):
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 30.0
    conftest.record(1, ok, f"500 pairs, {failures} failures, {elapsed:.1f}s (budget 30s)")
    assert failures == 0
    assert elapsed < 30.0


def test_criterion_02_structural_lemmas():
    conftest.start(2)
    rng = random.Random(202)
    bad = []

    # (a) products of analytic compressions collapse exactly when one factor
    # is one-sided
    for i in range(300):
        f = sp.rand_poly(rng, 3)
        g = sp.rand_poly(rng, 3)
        if i % 3 == 0:
            f = sp.rand_coanalytic(rng, 3)
        elif i % 3 == 1:
            g = sp.rand_analytic(rng, 3)
        got = is_toeplitz(Compose(Toeplitz(f), Toeplitz(g)))
        want = is_coanalytic(f) or is_analytic(g)
        if (got is not None) != want or (want and got != f * g):
            bad.append(("collapse", i))

    # (b) five-way equivalence for sums of adjoint-compression products
    def family(r):
        n = r.randint(1, 3)
        fam = [(sp.rand_poly(r, 3), sp.rand_poly(r, 3)) for _ in range(n)]
        roll = r.random()
        if roll < 0.25 and n >= 1:
            f, g = fam[0]
            fam = fam[1:] + [(f, g), (f, g.scale(-1))]
        elif roll < 0.4:
            fam = [(sp.rand_analytic(r, 3), g) for _, g in fam]
        return fam

    for i in range(300):
        fam = family(rng)
        total = OpSum([Compose(Adjoint(Hankel(f)), Hankel(g)) for f, g in fam])
        mirror = OpSum([Compose(Hankel(f), Adjoint(Hankel(g))) for f, g in fam])
        facets = (
            op_zero_test(total),
            is_toeplitz(total) is not None,
            rank_of(OuterCombination([OuterTerm(1, _tail(g), _tail(f)) for f, g in fam])).rank == 0,
            op_zero_test(mirror),
            is_dual_toeplitz(mirror) is not None,
        )
        if len(set(facets)) != 1:
            bad.append(("five-way", i, facets))

    # (c) mixed compression sums are flip compressions exactly when the
    # signed dyad combination cancels
    for i in range(300):
        n = rng.randint(1, 3)
        quads = [
            (sp.rand_poly(rng, 2), sp.rand_poly(rng, 2), sp.rand_poly(rng, 2), sp.rand_poly(rng, 2))
            for _ in range(n)
        ]
        roll = rng.random()
        if roll < 0.25:
            quads = [(a, b, a, b) for a, b, _, _ in quads]
        elif roll < 0.4:
            quads = [(sp.rand_analytic(rng, 2), b, c, sp.rand_analytic(rng, 2)) for _, b, c, _ in quads]
        total = OpSum(
            [Compose(Hankel(a), Toeplitz(b)) for a, b, _, _ in quads]
            + [Compose(DualToeplitz(c), Hankel(d)) for _, _, c, d in quads]
        )
        terms = []
        for a, b, c, d in quads:
            terms.append(OuterTerm(1, _tail(a), _tail(b)))
            terms.append(OuterTerm(-1, _tail(c), _tail(d)))
        want = rank_of(OuterCombination(terms)).rank == 0
        if (is_hankel(total) is not None) != want:
            bad.append(("mixed", i))

    conftest.record(2, not bad, f"900 families checked, {len(bad)} disagreements")
    assert not bad, bad[:5]


def test_criterion_03_product_in_class_equivalence():
    conftest.start(3)
    rng = random.Random(303)
    disagree = 0
    checked = 0
    pairs = [sp.SEMI_CASES[k] for k in sorted(sp.SEMI_CASES)] + [sp.SEMI_E_UNIT, sp.SEMI_NEG]
    while len(pairs) < 1007:
        pairs.append((sp.rand_matrix(rng, 3), sp.rand_matrix(rng, 3)))
    for h1, h2 in pairs:
        pr = D.semi_commute(h1, h2)
        rec = is_gsio(Compose(Gsio(h1), Gsio(h2)))
        checked += 1
        if pr.is_gsio != (rec is not None):
            disagree += 1
        elif rec is not None and not sp.blocks_match_mod_kernels(pr.product, rec):
            disagree += 1
    conftest.record(3, disagree == 0, f"{checked} pairs (incl. cases A-E), {disagree} disagreements")
    assert disagree == 0


def test_criterion_04_commutation_classifier_vs_direct():
    conftest.start(4)
    bad = []

    # constructed instances: the eleven polynomial-realizable coupling-free
    # cases, their mirrored variants, and per-case single-clause perturbations
    for label, (h1, h2) in sp.RANK0_EXACT.items():
        v = D.commute(h1, h2)
        if not (v.commutes and any(m.label == label for m in v.classification.matches)):
            bad.append(("rank0", label))
        if not sp.commutator_vanishes(h1, h2):
            bad.append(("rank0-direct", label))
        mirror = label[:-1] + "^)" if label in sp.RANK0_HATTED else label
        if not any(m.label == mirror for m in D.commute(h2, h1).classification.matches):
            bad.append(("rank0-mirror", label))
        side, slot, delta = sp.RANK0_PERTURB[label]
        pair = [h1, h2]
        pair[side] = sp.bump(pair[side], slot, delta)
        if sp.commutator_vanishes(*pair):
            bad.append(("rank0-perturb", label))

    # the two coupling cases only exist for genuinely rational symbols;
    # truncated expansions realize them numerically
    for builder, label in ((sp.rank0_numeric_case8, "(8)"), (sp.rank0_numeric_case11, "(11)")):
        h1, h2 = builder()
        v = D.commute(h1, h2, tol=sp.NUM_TOL)
        if not (v.commutes and any(m.label == label for m in v.classification.matches)):
            bad.append(("rank0-num", label))
        if sp.commutator_vanishes(sp.bump(h1, "f", "0.5z^-2"), h2, tol=sp.NUM_TOL):
            bad.append(("rank0-num-perturb", label))

    v = D.commute(*sp.rank1_pair())
    if not (v.commutes and len(v.classification.matches) == 16):
        bad.append(("rank1",))
    for case in range(1, 17):
        if sp.commutator_vanishes(*sp.rank1_perturbed_pair(case)):
            bad.append(("rank1-perturb", case))

    for name, pair, tol in (
        ("scaled", (sp.RANK2_DENSE, sp.RANK2_SCALED), None),
        ("blocks", sp.RANK2_DTT, None),
        ("full", sp.rank2_numeric_1234(), sp.NUM_TOL),
    ):
        v = D.commute(*pair, tol=tol)
        if not (v.commutes and v.rank == 2):
            bad.append(("rank2", name))
    if sp.commutator_vanishes(sp.bump(sp.RANK2_DENSE, "f", "3z^2"), sp.RANK2_SCALED):
        bad.append(("rank2-perturb",))

    # 1000 random pairs: classifier vs the direct finite commutator test,
    # with enough structured commuting pairs to exercise every rank branch
    rng = random.Random(404)
    parity_checked = 0
    for i in range(1000):
        if i % 10 == 0:
            h1, h2 = sp.rand_fv_pair(rng)
        elif i % 4 == 0:
            h1, h2 = sp.rand_commuting_pair(rng)
        else:
            h1, h2 = sp.rand_matrix(rng, 3), sp.rand_matrix(rng, 3)
        v = D.commute(h1, h2)
        direct = sp.commutator_vanishes(h1, h2)
        if v.commutes != direct:
            bad.append(("random", i))
        if v.commutes and h1.f == h1.v and h2.f == h2.v:
            parity_checked += 1
            if not skew_rank_parity_check(h1, h2):
                bad.append(("parity", i))

    ok = not bad
    conftest.record(
        4, ok, f"all cases + perturbations + 1000 pairs, parity on {parity_checked} pairs, {len(bad)} failures"
    )
    assert ok, bad[:5]


def test_criterion_05_singular_integral_suite():
    conftest.start(5)
    rng = random.Random(505)
    bad = []

    def seeded_pair(i):
        if i % 10 == 0:
            f1, g1, f2, g2, *_ = sp.SIO_COMMUTE_CASES[(i // 10) % len(sp.SIO_COMMUTE_CASES)]
            c = sp.rand_coeff(rng, 4) or ExactComplex(2)
            return sp.ex(f1).scale(c), sp.ex(g1).scale(c), sp.ex(f2), sp.ex(g2)
        return (
            sp.rand_poly(rng, 2),
            sp.rand_poly(rng, 2),
            sp.rand_poly(rng, 2),
            sp.rand_poly(rng, 2),
        )

    normals = [(sp.ex(f), sp.ex(g)) for f, g, want, _ in sp.SIO_NORMAL_CASES if want]
    for i in range(500):
        f1, g1, f2, g2 = seeded_pair(i)
        s1, s2 = sp.sio_op(f1, g1), sp.sio_op(f2, g2)

        p = D.sio_product(f1, g1, f2, g2)
        want = op_equal(Compose(s1, s2), Gsio(SymbolMatrix2.sio(f1 * f2, g1 * g2)))
        if p.holds != want:
            bad.append(("product", i))

        c = D.sio_commute(f1, g1, f2, g2)
        if c.commutes != op_zero_test(Compose(s1, s2) - Compose(s2, s1)):
            bad.append(("commute", i))

        n = D.sio_normal(f1, g1)
        if n.normal != op_zero_test(Compose(Adjoint(s1), s1) - Compose(s1, Adjoint(s1))):
            bad.append(("normal", i))
        if n.normal:
            normals.append((f1, g1))

        q = D.sio_quasinormal(f2, g2)
        ss = Compose(Adjoint(s2), s2)
        if q.quasinormal != op_zero_test(Compose(ss, s2) - Compose(s2, ss)):
            bad.append(("quasinormal", i))

    for f, g in normals:
        if not D.sio_quasinormal(f, g).quasinormal:
            bad.append(("normal=>quasinormal", str(f)))

    conftest.record(
        5, not bad, f"500 pairs x 4 equations, {len(normals)} normal instances, {len(bad)} failures"
    )
    assert not bad, bad[:5]


def test_criterion_06_compression_composition_suite():
    conftest.start(6)
    rng = random.Random(606)
    bad = []
    positives = 0

    pool = [
        (sp.ex(psi), sp.ex(phi))
        for psi, phi, *_ in sp.ADTP_CASES
    ] + [(sp.rand_poly(rng, 2), sp.rand_poly(rng, 2)) for _ in range(4)]

    for a in (1, 2, 3):
        for b in (1, 2, 3):
            for t in (1, 2, 3):
                for psi, phi in pool:
                    v = D.adtp_product(psi, phi, InnerMonomial(a), InnerMonomial(b), InnerMonomial(t))
                    comp, block = sp.adtp_blocks(psi, phi, a, b, t, sigma=psi * phi)
                    direct = op_equal(comp, block)
                    if v.holds != direct:
                        bad.append(("adtp", a, b, t, str(psi), str(phi)))
                    if v.holds:
                        positives += 1
                        if v.sigma != psi * phi:
                            bad.append(("sigma", a, b, t))

    for t in (1, 2, 3):
        cases = [(sp.ex(phi), sp.ex(psi)) for phi, psi, tt, want, _ in sp.DTT_CASES if tt == t]
        cases += [(sp.rand_poly(rng, 2), sp.rand_poly(rng, 2)) for _ in range(10)]
        for phi, psi in cases:
            try:
                v = D.dtt_commute(phi, psi, InnerMonomial(t))
            except ValueError:
                continue  # constant multipliers are out of scope by contract
            direct = sp.commutator_vanishes(sp.dtt_block(phi, t), sp.dtt_block(psi, t))
            if v.commutes != direct:
                bad.append(("dtt", t, str(phi), str(psi)))

    conftest.record(6, not bad, f"27 power triples, {positives} positive compositions, {len(bad)} failures")
    assert not bad, bad[:5]


def test_criterion_07_scalar_zero_products():
    conftest.start(7)
    rng = random.Random(707)

    def frac():
        return ExactComplex(
            Fraction(rng.randint(-4, 4), rng.randint(1, 4)),
            Fraction(rng.randint(-4, 4), rng.randint(1, 4)) if rng.random() < 0.3 else Fraction(0),
        )

    def rand_m():
        return ((frac(), frac()), (frac(), frac()))

    disagree = 0
    for i in range(10000):
        roll = i % 5
        if roll == 0:
            a, b = rand_m(), rand_m()
        elif roll == 1:  # zero factor
            z = ((ExactComplex(0), ExactComplex(0)), (ExactComplex(0), ExactComplex(0)))
            a, b = (z, rand_m()) if i % 2 else (rand_m(), z)
        elif roll == 2:  # disjoint support
            a = ((frac(), ExactComplex(0)), (frac(), ExactComplex(0)))
            b = ((ExactComplex(0), ExactComplex(0)), (frac(), frac()))
        elif roll == 3:  # proportional columns / rows
            mu = frac()
            c1 = (frac(), frac())
            r1 = (frac(), frac())
            a = ((c1[0] * mu, c1[0]), (c1[1] * mu, c1[1]))
            b = ((r1[0], r1[1]), (ExactComplex(0) - mu * r1[0], ExactComplex(0) - mu * r1[1]))
        else:
            a, b = rand_m(), rand_m()
        rep = matrix2_zero_product(a, b)
        prod_zero = all(
            not (a[r][0] * b[0][c] + a[r][1] * b[1][c]) for r in (0, 1) for c in (0, 1)
        )
        if bool(rep) != prod_zero:
            disagree += 1
    conftest.record(7, disagree == 0, f"10000 matrices, {disagree} disagreements")
    assert disagree == 0


def test_criterion_08_numeric_oracle_concordance():
    conftest.start(8)
    rng = random.Random(808)
    n = 32
    disagree = 0
    for i in range(500):
        f = sp.rand_poly(rng, 3)
        g = sp.rand_poly(rng, 3) if i % 2 else sp.rand_analytic(rng, 3)
        lhs = Compose(Toeplitz(f), Toeplitz(g))
        rhs = Toeplitz(f * g)
        exact = op_equal(lhs, rhs)
        pad = max(p.span() for p in (f, g, f * g))
        numeric = numeric_verify(lhs, rhs, SectionSpec(n, pad))  # tol defaults to 1e-9*n
        if exact != numeric:
            disagree += 1

    worst = 0.0
    for size in (8, 16, 32, 64):
        h = SymbolMatrix2(*(_numeric_twin(sp.rand_poly(rng, 3)) for _ in range(4)))
        gm = gsio_matrix(h, size)
        for k in list(range(size)) + [-(j + 1) for j in range(size)]:
            col = k if k >= 0 else size + (-k - 1)
            img = apply(Gsio(h), FourierVector.basis(k, L2, NUMERIC))
            want = np.array(
                [complex(img.poly.coeffs.get(j, 0)) for j in range(size)]
                + [complex(img.poly.coeffs.get(-(j + 1), 0)) for j in range(size)]
            )
            worst = max(worst, float(np.max(np.abs(gm.data[:, col] - want))))

    ok = disagree == 0 and worst <= TOL_APPLY
    conftest.record(
        8, ok, f"500 identities at n=32, {disagree} disagreements; column defect {worst:.2e} (tol 1e-12)"
    )
    assert disagree == 0
    assert worst <= TOL_APPLY


def test_criterion_09_fft_path():
    conftest.start(9)
    rng = random.Random(909)
    worst = 0.0
    for n in (64, 512, 4096):
        f = LaurentPoly(
            {k: complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for k in range(-6, 7)}, NUMERIC
        )
        x = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)])
        dense = toeplitz_matrix(f, n) @ x
        fast = fft_toeplitz_matvec(f, x)
        rel = float(np.linalg.norm(fast - dense) / max(1.0, np.linalg.norm(dense)))
        worst = max(worst, rel)

    rows = {(r.n, r.method): r.nanos for r in benchmark_fft(sizes=(4096,), repeats=3, seed=1)}
    fft_ns, dense_ns = rows[(4096, "fft")], rows[(4096, "dense")]
    ok = worst <= 1e-10 and fft_ns < dense_ns
    conftest.record(
        9,
        ok,
        f"relative error {worst:.2e} (tol 1e-10); 4096 matvec fft {fft_ns/1e6:.2f}ms vs dense {dense_ns/1e6:.2f}ms",
    )
    assert worst <= 1e-10
    assert fft_ns < dense_ns


def test_criterion_10_cli_contract():
    conftest.start(10)
    golden = [
        ["check-product", "--H1", "f=z;u=z;g=z;v=z", "--H2", "f=z^-1;u=z^-1;g=z^-1;v=z^-1"],
        ["check-quasinormal", "--f", "z", "--g", "z"],
        ["check-normal", "--f", "z+1", "--g", "z"],
    ]
    bad = []
    for argv in golden:
        runs = [
            subprocess.run([sys.executable, "-m", "hardyops.cli", *argv], capture_output=True)
            for _ in range(2)
        ]
        if any(r.returncode != 0 for r in runs) or runs[0].stdout != runs[1].stdout:
            bad.append(argv[0])

    contract = [
        (["check-normal", "--f", "z+", "--g", "z"], 2),
        (["check-product", "--H1", "f=z", "--H2", "f=z;u=z;g=z;v=z"], 2),
        (["no-such-command"], 2),
        (["check-normal", "--f", "z", "--g", "z"], 0),
    ]
    for argv, want in contract:
        got = subprocess.run(
            [sys.executable, "-m", "hardyops.cli", *argv], capture_output=True
        ).returncode
        if got != want:
            bad.append((argv[0], got))

    conftest.record(10, not bad, f"3 golden runs byte-identical, exit codes honored; {len(bad)} failures")
    assert not bad, bad

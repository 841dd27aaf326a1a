"""The acceptance suite: every exit criterion as a callable check.

Each criterion returns a CriterionResult whose detail dict is fully
deterministic (decimal strings, no timing), so a selftest report built from
them is byte-reproducible for a fixed seed, independent of worker count.
Wall-clock times are carried separately for console display only.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from mpmath import mp, mpf

from . import __version__
from .bruteforce import brute_force_ls
from .conjecture import (
    bk_character_sum,
    character_expansion_check,
    factorial_ratio_identity_holds,
    lr_relation_check,
    partial_coefficient_check,
    splitmix64,
    verify_conjecture,
)
from .integrals import SuperEigenvalues, bk_closed_form, ls_closed_form
from .partitions import (
    assemble,
    hook_product,
    partitions_of,
    sigma_coefficient,
    sigma_decomposition_factor,
    super_diagrams,
)
from .precision import BigComplex, Precision
from .schur import super_schur_tableaux, supercharacter_amu

DEFAULT_SEED = 42


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    runtime_s: float = 0.0  # console display only, never in the canonical report


def _fraction(seed: int, counter: int, span: int = 40, positive: bool = False) -> Fraction:
    v = splitmix64(seed, counter)
    num = (v % (2 * span + 1)) - span
    if positive:
        num = (v % span) + 1
    den = ((v >> 32) % 37) + 2
    return Fraction(num, den)


def _nonzero_fraction(seed, counter, span=40):
    f = _fraction(seed, counter, span)
    return f if f != 0 else Fraction(1, 7)


# -- criteria ----------------------------------------------------------------


def criterion_hook_length(seed, prec) -> CriterionResult:
    """sigma(t) * hook_product(t) = |t|! for every diagram with at most 12 boxes."""
    checked = 0
    for boxes in range(13):
        for t in partitions_of(boxes):
            if sigma_coefficient(t) * hook_product(t) != factorial(boxes):
                return CriterionResult(1, "hook-length identity", False, {"failed_at": repr(t)})
            checked += 1
    return CriterionResult(1, "hook-length identity", True, {"diagrams": checked})


def criterion_sigma_decomposition(seed, prec) -> CriterionResult:
    """Block decomposition of sigma_t/|t|! over all diagrams, m,n <= 3, |t| <= 10."""
    checked = 0
    for m in range(1, 4):
        for n in range(1, 4):
            for sd in super_diagrams(m, n, 10):
                t = assemble(sd)
                lhs = Fraction(sigma_coefficient(t), factorial(t.size))
                rhs = (
                    Fraction(sigma_coefficient(sd.p), factorial(sd.p.size))
                    * Fraction(sigma_coefficient(sd.q), factorial(sd.q.size))
                    * sigma_decomposition_factor(sd)
                )
                if lhs != rhs:
                    return CriterionResult(
                        2, "sigma block decomposition", False, {"failed_at": repr(sd)}
                    )
                checked += 1
    return CriterionResult(2, "sigma block decomposition", True, {"diagrams": checked})


def criterion_supercharacter(seed, prec) -> CriterionResult:
    """Product form equals the signed tableaux sum, m,n <= 2, |t| <= 6, 5 samples."""
    checked = 0
    for m in (1, 2):
        for n in (1, 2):
            diagrams = list(super_diagrams(m, n, 6))
            for sample in range(5):
                base = 1000 * (10 * m + n) + 100 * sample
                bos = [_nonzero_fraction(seed, base + i) for i in range(m)]
                ferm = [_nonzero_fraction(seed, base + 50 + i) for i in range(n)]
                for sd in diagrams:
                    want = super_schur_tableaux(assemble(sd), bos, ferm)
                    got = supercharacter_amu(sd, bos, ferm)
                    if got != want:
                        return CriterionResult(
                            3,
                            "supercharacter consistency",
                            False,
                            {"failed_at": repr(sd), "sample": sample},
                        )
                    checked += 1
    return CriterionResult(3, "supercharacter consistency", True, {"evaluations": checked})


def criterion_supertrace_expansion(seed, prec) -> CriterionResult:
    """Powers of the supertrace expand exactly into sigma-weighted supercharacters."""
    for m in (1, 2):
        for n in (1, 2):
            base = 7000 + 100 * (10 * m + n)
            bos = [_nonzero_fraction(seed, base + i) for i in range(m)]
            ferm = [_nonzero_fraction(seed, base + 50 + i) for i in range(n)]
            if not character_expansion_check(m, n, 6, bos, ferm):
                return CriterionResult(
                    4, "supertrace power expansion", False, {"failed_at": f"(m,n)=({m},{n})"}
                )
    return CriterionResult(4, "supertrace power expansion", True, {"blocks": "m,n in {1,2}, 6 boxes"})


def _conjecture_cell(args):
    N, m, seed, samples, radius, bits, guard, cap, depth = args
    prec = Precision(bits=bits, guard_bits=guard, truncation_cap=cap)
    report = verify_conjecture(N, m, samples, radius, seed, prec, depth)
    with mp.workprec(prec.work_bits):
        return {
            "N": N,
            "m": m,
            "pass": report.passed,
            "max_rel_diff": mp.nstr(mpf(report.max_rel_diff), 10),
            "tolerance": mp.nstr(mpf(report.tolerance), 10),
            "below_1e-40": bool(report.max_rel_diff < mpf(10) ** -40),
        }


def criterion_conjecture_grid(seed, prec, jobs: int = 1) -> CriterionResult:
    """Antisymmetric vs split series on the full desk-scale grid.

    N = 2..8, every m, 10 seeded samples of radius 2, depth 64; relative
    differences must stay below the computed tail bound and below 1e-40.
    """
    cells = [
        (N, m, seed, 10, 2, prec.bits, prec.guard_bits, prec.truncation_cap, 64)
        for N in range(2, 9)
        for m in range(1, N + 1)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_conjecture_cell, cells))
    else:
        rows = [_conjecture_cell(c) for c in cells]
    ok = all(r["pass"] and r["below_1e-40"] for r in rows)
    return CriterionResult(5, "series identity grid", ok, {"cells": rows})


def criterion_lr_relation(seed, prec) -> CriterionResult:
    """Exact rational recursion for the block-coupling coefficients, |p|+|q| <= 8."""
    pairs = 0
    for m, n in ((1, 1), (2, 1), (2, 2)):
        for total in range(9):
            for psize in range(total + 1):
                for p in partitions_of(psize, max_rows=m):
                    for q in partitions_of(total - psize, max_rows=n):
                        ok, residual = lr_relation_check(p, q, m, n)
                        if not ok:
                            return CriterionResult(
                                6,
                                "coefficient recursion sweep",
                                False,
                                {"failed_at": f"(m,n)=({m},{n}) p={p!r} q={q!r}", "residual": str(residual)},
                            )
                        pairs += 1
    return CriterionResult(6, "coefficient recursion sweep", True, {"pairs": pairs})


def criterion_partial_coefficients(seed, prec) -> CriterionResult:
    """Closed product prefactor matches the extracted coefficients, N <= 4, k <= 4."""
    checked = 0
    for N in range(2, 5):
        for m in range(1, N):
            km0, kn0 = m - 1, N - m - 1
            if not partial_coefficient_check(km0 + 4, kn0 + 4, m, N):
                return CriterionResult(
                    7, "extreme-pattern coefficients", False, {"failed_at": f"N={N} m={m}"}
                )
            checked += 1
    return CriterionResult(7, "extreme-pattern coefficients", True, {"grids": checked})


def _brute_force_points(seed, prec, m, n, count, tol_exp):
    beta = BigComplex(Fraction(1, 2), bits=prec.bits)
    rows = []
    ok = True
    with mp.workprec(prec.work_bits):
        tol = mpf(2) ** tol_exp
        for s in range(count):
            base = 3_000_000 + 1000 * s + 100 * (10 * m + n)
            while True:
                a = [_fraction(seed, base + i, positive=True) for i in range(m + n)]
                b = [_fraction(seed, base + 50 + i, positive=True) for i in range(m + n)]
                prods = [a[i] * b[i] for i in range(m + n)]
                if len(set(prods)) == m + n:
                    break
                base += 10_000  # re-draw on coinciding products
            bf = brute_force_ls(m, n, a, b, beta, prec)
            ev = SuperEigenvalues(tuple(prods[:m]), tuple(prods[m:]), beta)
            cf = ls_closed_form(ev, prec).value
            rel = abs(bf.to_mpc() - cf.to_mpc()) / abs(cf.to_mpc())
            rows.append({"point": s, "rel_diff": mp.nstr(rel, 8)})
            if not rel <= tol:
                ok = False
    return ok, rows


def criterion_haar_11(seed, prec) -> CriterionResult:
    """Explicit (1|1) Haar-parametrized integration equals the closed form."""
    ok, rows = _brute_force_points(seed, prec, 1, 1, 10, -200)
    return CriterionResult(8, "explicit (1|1) integration", ok, {"points": rows})


def criterion_haar_21(seed, prec) -> CriterionResult:
    """Explicit (2|1) Haar-parametrized integration equals the closed form."""
    ok, rows = _brute_force_points(seed, prec, 2, 1, 5, -200)
    return CriterionResult(9, "explicit (2|1) integration", ok, {"points": rows})


def criterion_confluent_limits(seed, prec) -> CriterionResult:
    """Generic branch converges linearly to the confluent branch as values merge."""
    beta = BigComplex(Fraction(1, 2), bits=prec.bits)
    x, y = Fraction(3, 5), Fraction(1, 7)
    detail = {}
    ok = True
    with mp.workprec(prec.work_bits):
        # one-source, repeated bosonic value at (2,1)
        conf = ls_closed_form(SuperEigenvalues((x, x), (y,), beta), prec).value.to_mpc()
        slopes = []
        for e in (4, 6, 8):
            eps = Fraction(1, 10**e)
            gen = ls_closed_form(SuperEigenvalues((x, x + eps), (y,), beta), prec).value.to_mpc()
            rel = abs(gen - conf) / abs(conf)
            slopes.append(rel * 10**e)
            if e == 6 and not rel <= mpf(100) * mpf(10) ** -6:
                ok = False
        if max(slopes) > 50 * min(slopes):
            ok = False
        detail["one_source_slopes"] = [mp.nstr(s, 6) for s in slopes]
        # two-source, repeated bosonic value in the first set at (2,1)
        mu = SuperEigenvalues((Fraction(2, 5), Fraction(1, 4)), (Fraction(5, 9),), beta)
        conf = bk_closed_form(SuperEigenvalues((x, x), (y,), beta), mu, prec).value.to_mpc()
        slopes = []
        for e in (4, 6, 8):
            eps = Fraction(1, 10**e)
            gen = bk_closed_form(
                SuperEigenvalues((x, x + eps), (y,), beta), mu, prec
            ).value.to_mpc()
            rel = abs(gen - conf) / abs(conf)
            slopes.append(rel * 10**e)
            if e == 6 and not rel <= mpf(100) * mpf(10) ** -6:
                ok = False
        if max(slopes) > 50 * min(slopes):
            ok = False
        detail["two_source_slopes"] = [mp.nstr(s, 6) for s in slopes]
    return CriterionResult(10, "confluent limits scale linearly", ok, detail)


def criterion_bk_factorization(seed, prec) -> CriterionResult:
    """Two-source closed form equals its truncated diagram expansion at (1|1)."""
    beta = Fraction(1, 2)
    rows = []
    ok = True
    with mp.workprec(prec.work_bits):
        for s in range(3):
            base = 9_000_000 + 1000 * s
            vals = []
            counter = 0
            while len(vals) < 4:
                f = _fraction(seed, base + counter, span=60)
                counter += 1
                if f != 0 and abs(f) <= 1 and f not in vals:
                    vals.append(f)
            lam = SuperEigenvalues((vals[0],), (vals[1],), BigComplex(beta, bits=prec.bits))
            mu = SuperEigenvalues((vals[2],), (vals[3],), BigComplex(beta, bits=prec.bits))
            closed = bk_closed_form(lam, mu, prec).value.to_mpc()
            partial, shells = bk_character_sum(
                [vals[0]], [vals[1]], [vals[2]], [vals[3]], beta, 20
            )
            partial_v = mpf(partial.numerator) / mpf(partial.denominator)
            tail = sum(
                abs(mpf(shells[b].numerator) / mpf(shells[b].denominator))
                for b in (19, 20)
                if b in shells
            )
            bound = 100 * tail + mpf(2) ** (-(prec.bits - 48))
            diff = abs(closed - partial_v)
            rows.append({"sample": s, "diff": mp.nstr(diff, 6), "bound": mp.nstr(bound, 6)})
            if not diff <= bound:
                ok = False
    return CriterionResult(11, "two-source factorization vs expansion", ok, {"samples": rows})


def criterion_factorial_ratio(seed, prec) -> CriterionResult:
    """Factorial-ratio determinant identity for 50 seeded partitions, N <= 6."""
    for s in range(50):
        N = splitmix64(seed, 5000 + 2 * s) % 6 + 1
        size = splitmix64(seed, 5001 + 2 * s) % 13
        pool = list(partitions_of(size, max_rows=N))
        t = pool[splitmix64(seed, 5002 + 2 * s) % len(pool)]
        if not factorial_ratio_identity_holds(t, N):
            return CriterionResult(
                12, "factorial-ratio determinant identity", False, {"failed_at": f"N={N} t={t!r}"}
            )
    return CriterionResult(12, "factorial-ratio determinant identity", True, {"partitions": 50})


CRITERIA_1_12 = [
    criterion_hook_length,
    criterion_sigma_decomposition,
    criterion_supercharacter,
    criterion_supertrace_expansion,
    criterion_conjecture_grid,
    criterion_lr_relation,
    criterion_partial_coefficients,
    criterion_haar_11,
    criterion_haar_21,
    criterion_confluent_limits,
    criterion_bk_factorization,
    criterion_factorial_ratio,
]


def run_criteria_1_12(prec: Precision, seed: int, jobs: int = 1):
    results = []
    for fn in CRITERIA_1_12:
        start = time.monotonic()
        if fn is criterion_conjecture_grid:
            res = fn(seed, prec, jobs=jobs)
        else:
            res = fn(seed, prec)
        res.runtime_s = time.monotonic() - start
        results.append(res)
    return results


def canonical_report(results, prec: Precision, seed: int) -> bytes:
    """Deterministic JSON payload: no timing, no worker counts."""
    doc = {
        "schema": "superint-selftest/1",
        "tool": {"name": "superint", "version": __version__},
        "seed": seed,
        "precision_bits": prec.bits,
        "guard_bits": prec.guard_bits,
        "truncation_cap": prec.truncation_cap,
        "criteria": [
            {"index": r.index, "name": r.name, "pass": r.passed, "detail": r.detail}
            for r in results
        ],
    }
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()


def criterion_determinism(prec: Precision, seed: int, reference: bytes) -> CriterionResult:
    """Reruns of the suite yield byte-identical reports, independent of workers."""
    rerun_serial = canonical_report(run_criteria_1_12(prec, seed, jobs=1), prec, seed)
    rerun_parallel = canonical_report(run_criteria_1_12(prec, seed, jobs=2), prec, seed)
    same = reference == rerun_serial == rerun_parallel
    return CriterionResult(
        13,
        "byte-identical reports",
        same,
        {
            "sha256": hashlib.sha256(reference).hexdigest(),
            "serial_rerun_equal": reference == rerun_serial,
            "parallel_rerun_equal": reference == rerun_parallel,
        },
    )


def run_all(prec: Precision, seed: int = DEFAULT_SEED, jobs: int = 1, with_determinism: bool = True):
    """Run the full suite; returns (results, canonical report bytes of criteria 1-12)."""
    results = run_criteria_1_12(prec, seed, jobs)
    reference = canonical_report(results, prec, seed)
    if with_determinism:
        start = time.monotonic()
        det = criterion_determinism(prec, seed, reference)
        det.runtime_s = time.monotonic() - start
        results.append(det)
    return results, reference

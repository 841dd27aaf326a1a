"""Command-line driver: evaluators and verification suites with JSON reports.

Exit codes: 0 success/pass, 1 verification mismatch, 2 usage or input error,
3 numerical failure (series truncation cap exceeded).  Reports are
deterministic for a fixed seed; wall-clock time goes to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .acceptance import (
    DEFAULT_SEED,
    criterion_haar_11,
    criterion_haar_21,
    run_all,
)
from .conjecture import theorem_c_checks, verify_conjecture
from .errors import InputFormatError, SuperintError, TruncationCapExceeded
from .integrals import SuperEigenvalues, bk_closed_form, ls_closed_form
from .partitions import partitions_of
from .conjecture import character_expansion_check, lr_relation_check
from .precision import DEFAULT_BITS, Precision

EXIT_PASS = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

COMMANDS = (
    "ls-eval",
    "bk-eval",
    "conjecture-verify",
    "lr-check",
    "strninxi-check",
    "appendix-e-verify",
    "theorems-check",
    "selftest",
)


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: command, numeric settings, input and output."""

    command: str
    precision_bits: int = DEFAULT_BITS
    truncation_cap: int = 512
    seed: int = DEFAULT_SEED
    jobs: int = 1
    input_path: str | None = None
    input_inline: str | None = None
    json_out: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.precision_bits < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        known = {"command", "prec_bits", "trunc_cap", "seed", "jobs", "input", "input_json", "json_out"}
        options = {k: v for k, v in vars(args).items() if k not in known}
        return cls(
            command=args.command,
            precision_bits=args.prec_bits,
            truncation_cap=args.trunc_cap,
            seed=args.seed,
            jobs=getattr(args, "jobs", 1),
            input_path=getattr(args, "input", None),
            input_inline=getattr(args, "input_json", None),
            json_out=args.json_out,
            options=options,
        )

    @property
    def precision(self) -> Precision:
        return Precision(bits=self.precision_bits, truncation_cap=self.truncation_cap)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superint",
        description="Closed-form supergroup integrals and their verification suites.",
    )
    parser.add_argument("--version", action="version", version=f"superint {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples=None, radius=None):
        env_bits = os.environ.get("SUPERGROUP_PREC_BITS")
        p.add_argument("--prec-bits", type=int, default=int(env_bits) if env_bits else DEFAULT_BITS)
        p.add_argument("--trunc-cap", type=int, default=512)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--json-out", type=str, default=None, help="report path (default: stdout)")
        if samples is not None:
            p.add_argument("--samples", type=int, default=samples)
        if radius is not None:
            p.add_argument("--radius", type=str, default=radius)

    p = sub.add_parser("ls-eval", help="evaluate the one-source integral from JSON input")
    p.add_argument("--input", type=str, default=None, help="path to the input document")
    p.add_argument("--input-json", type=str, default=None, help="inline input document")
    common(p)

    p = sub.add_parser("bk-eval", help="evaluate the two-source integral from JSON input")
    p.add_argument("--input", type=str, default=None)
    p.add_argument("--input-json", type=str, default=None)
    common(p)

    p = sub.add_parser("conjecture-verify", help="seeded antisymmetric-vs-split series check")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, default=None, help="block size (default: every m)")
    common(p, samples=10, radius="2")

    p = sub.add_parser("lr-check", help="exact coefficient recursion sweep")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-boxes", type=int, default=8)
    common(p)

    p = sub.add_parser("strninxi-check", help="supertrace power expansion check")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-boxes", type=int, default=6)
    common(p)

    p = sub.add_parser("appendix-e-verify", help="explicit Haar integration vs closed form")
    common(p, samples=None)

    p = sub.add_parser("theorems-check", help="rearrangement/determinant identity checks")
    p.add_argument("--N", type=int, default=5)
    common(p)

    p = sub.add_parser("selftest", help="run the full acceptance suite")
    common(p)
    return parser


def _load_input(config: RunConfig) -> dict:
    if config.input_inline is not None:
        text = config.input_inline
    elif config.input_path is not None:
        try:
            with open(config.input_path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputFormatError(f"cannot read input file: {exc}") from exc
    else:
        raise InputFormatError("one of --input or --input-json is required")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"input is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputFormatError("input document must be a JSON object")
    return doc


def _emit(report: dict, config: RunConfig, status_pass: bool) -> int:
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if config.json_out:
        with open(config.json_out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_PASS if status_pass else EXIT_MISMATCH


def _base_report(config: RunConfig, config_extra: dict) -> dict:
    echo = {
        "precision_bits": config.precision_bits,
        "truncation_cap": config.truncation_cap,
        "seed": config.seed,
    }
    echo.update(config_extra)
    return {
        "schema": "superint-report/1",
        "tool": {"name": "superint", "version": __version__},
        "command": config.command,
        "config": echo,
    }


def _cmd_ls_eval(config: RunConfig) -> int:
    doc = _load_input(config)
    try:
        ev = SuperEigenvalues.from_json(doc)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputFormatError(f"bad eigenvalue document: {exc}") from exc
    result = ls_closed_form(ev, config.precision)
    report = _base_report(config, {"input": ev.to_json()})
    report["result"] = result.to_json()
    return _emit(report, config, True)


def _cmd_bk_eval(config: RunConfig) -> int:
    doc = _load_input(config)
    try:
        beta = doc["beta"]
        lam = SuperEigenvalues.from_json({**doc["lambda"], "beta": beta})
        mu = SuperEigenvalues.from_json({**doc["mu"], "beta": beta})
    except (KeyError, ValueError, TypeError) as exc:
        raise InputFormatError(f"bad eigenvalue document: {exc}") from exc
    result = bk_closed_form(lam, mu, config.precision)
    report = _base_report(config, {"input": {"lambda": lam.to_json(), "mu": mu.to_json()}})
    report["result"] = result.to_json()
    return _emit(report, config, True)


def _conjecture_job(payload):
    N, m, samples, radius, seed, bits, cap = payload
    prec = Precision(bits=bits, truncation_cap=cap)
    report = verify_conjecture(N, m, samples, Fraction(radius), seed, prec, K=64)
    return report.to_json()


def _cmd_conjecture(config: RunConfig) -> int:
    n_vars = config.options["N"]
    m_opt = config.options.get("m")
    samples = config.options["samples"]
    radius = config.options["radius"]
    ms = [m_opt] if m_opt is not None else list(range(1, n_vars + 1))
    payload = [
        (n_vars, m, samples, radius, config.seed, config.precision_bits, config.truncation_cap)
        for m in ms
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(_conjecture_job, payload))
    else:
        reports = [_conjecture_job(p) for p in payload]
    ok = all(r["pass"] for r in reports)
    report = _base_report(
        config,
        {"N": n_vars, "m": ms, "samples": samples, "radius": radius, "depth": 64},
    )
    report["results"] = reports
    report["status"] = "pass" if ok else "fail"
    return _emit(report, config, ok)


def _cmd_lr_check(config: RunConfig) -> int:
    m, n = config.options["m"], config.options["n"]
    max_boxes = config.options["max_boxes"]
    rows = []
    ok = True
    for total in range(max_boxes + 1):
        for psize in range(total + 1):
            for p in partitions_of(psize, max_rows=m):
                for q in partitions_of(total - psize, max_rows=n):
                    good, residual = lr_relation_check(p, q, m, n)
                    rows.append(
                        {"p": list(p.rows), "q": list(q.rows), "residual": str(residual)}
                    )
                    ok = ok and good
    report = _base_report(config, {"m": m, "n": n, "max_boxes": max_boxes})
    report["results"] = rows
    report["status"] = "pass" if ok else "fail"
    return _emit(report, config, ok)


def _cmd_strninxi(config: RunConfig) -> int:
    from .acceptance import _nonzero_fraction

    m, n = config.options["m"], config.options["n"]
    max_boxes = config.options["max_boxes"]
    bos = [_nonzero_fraction(config.seed, 100 + i) for i in range(m)]
    ferm = [_nonzero_fraction(config.seed, 200 + i) for i in range(n)]
    ok = character_expansion_check(m, n, max_boxes, bos, ferm)
    report = _base_report(
        config,
        {
            "m": m,
            "n": n,
            "max_boxes": max_boxes,
            "bosonic": [str(v) for v in bos],
            "fermionic": [str(v) for v in ferm],
        },
    )
    report["status"] = "pass" if ok else "fail"
    return _emit(report, config, ok)


def _cmd_appendix_e(config: RunConfig) -> int:
    prec = config.precision
    r11 = criterion_haar_11(config.seed, prec)
    r21 = criterion_haar_21(config.seed, prec)
    ok = r11.passed and r21.passed
    report = _base_report(config, {})
    report["results"] = {
        "block_1_1": {"pass": r11.passed, **r11.detail},
        "block_2_1": {"pass": r21.passed, **r21.detail},
    }
    report["status"] = "pass" if ok else "fail"
    return _emit(report, config, ok)


def _cmd_theorems(config: RunConfig) -> int:
    ok = theorem_c_checks(config.options["N"], seed=config.seed)
    report = _base_report(config, {"N": config.options["N"]})
    report["status"] = "pass" if ok else "fail"
    return _emit(report, config, ok)


def _cmd_selftest(config: RunConfig) -> int:
    results, _reference = run_all(config.precision, seed=config.seed, jobs=config.jobs)
    width = max(len(r.name) for r in results)
    for r in results:
        line = f"  [{r.index:2d}] {r.name:<{width}}  {'PASS' if r.passed else 'FAIL'}  ({r.runtime_s:.1f}s)"
        print(line, file=sys.stderr)
    ok = all(r.passed for r in results)
    report = _base_report(config, {})
    report["criteria"] = [
        {"index": r.index, "name": r.name, "pass": r.passed, "detail": r.detail}
        for r in results
    ]
    report["status"] = "pass" if ok else "fail"
    return _emit(report, config, ok)


_COMMANDS = {
    "ls-eval": _cmd_ls_eval,
    "bk-eval": _cmd_bk_eval,
    "conjecture-verify": _cmd_conjecture,
    "lr-check": _cmd_lr_check,
    "strninxi-check": _cmd_strninxi,
    "appendix-e-verify": _cmd_appendix_e,
    "theorems-check": _cmd_theorems,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors already
        return exc.code if exc.code is not None else EXIT_USAGE
    start = time.monotonic()
    try:
        config = RunConfig.from_args(args)
        code = _COMMANDS[config.command](config)
    except TruncationCapExceeded as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InputFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SuperintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    print(f"wall-time: {time.monotonic() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

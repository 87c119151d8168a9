"""Command-line front end.

Reports are JSON lines (one record per check) written to --output or stdout.
Exit codes: 0 when every check passes, 1 on a failed check or a modular
error, 2 when an input cannot be parsed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import formats
from .block_factor import (
    BlockOperator,
    assemble_T_u,
    block_cyclic_separating,
    block_trace,
    block_trace_condition,
    reconstruct,
    truncation_study,
)
from .errors import InvalidSpectralData, ModularError, ShapeMismatch
from .finite_factor import AntilinearMap, FactorContext, hermitian_function
from .modular_engine import modular_objects, polar_decompose
from .sampling import random_finite_spectral, random_invertible, random_kappa
from .spectral_classifier import (
    DEFAULT_CUTOFF,
    DeltaSpectrum,
    EnumerationBounds,
    FactorType,
    cross_check_finite,
    delta_spectrum,
    enumerate_classes,
    equivalent,
    is_admissible,
)
from .verification import Check, condition_number, modular_checks

DEFAULT_SEED = 20240101
PARSE_ERRORS = (ValueError, OSError, KeyError, TypeError)


class Report:
    def __init__(self):
        self.records: list[dict] = []
        self.failed: list[str] = []

    def add(self, record: dict):
        self.records.append(record)

    def check(self, check: Check, **extra):
        rec = check.to_dict()
        rec.update(extra)
        self.add(rec)
        if not check.passed:
            self.failed.append(f"{check.invariant}: residual {check.residual:.3e} > {check.tolerance:.3e}")

    def fail(self, message: str):
        self.failed.append(message)

    def dumps(self) -> str:
        return "".join(json.dumps(_jsonable(r), sort_keys=True) + "\n" for r in self.records)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _context(args, n: int) -> FactorContext:
    return FactorContext(n=n, tol=args.tol)


def _one_input(args) -> str | None:
    if not args.input:
        return None
    if len(args.input) > 1:
        raise formats.FormatError(f"{args.verb} takes a single --input, got {len(args.input)}")
    return args.input[0]


def _sorted_real(values) -> list[float]:
    return sorted(float(v) for v in np.real(values))


def cmd_modobj(args, report: Report):
    path = _one_input(args)
    t = formats.read_matrix(path) if path else np.eye(args.n or 2, dtype=complex)
    n = t.shape[0]
    ctx = _context(args, n)
    mo = modular_objects(t, ctx)
    kappa = condition_number(t)
    tol2 = 1e-8 * kappa**2
    h, v = polar_decompose(t, ctx)
    report.add({"object": "H0", "eigenvalues": _sorted_real(np.linalg.eigvalsh(mo.H0))})
    report.add({"object": "Delta0", "eigenvalues": _sorted_real(np.linalg.eigvalsh(0.5 * (mo.Delta0 + mo.Delta0.conj().T)))})
    report.add({"object": "V", "matrix": formats.matrix_to_obj(mo.V)})
    report.add({"object": "T", "condition_number": kappa})
    eye = np.eye(n * n)
    report.check(Check("polar_product", float(np.linalg.norm(h @ v - t, 2)), ctx.tol * float(np.linalg.norm(t, 2))))
    report.check(Check("V_unitary", float(np.linalg.norm(v.conj().T @ v - np.eye(n), 2)), ctx.tol * max(1, n)))
    report.check(Check("J_involution", float(np.linalg.norm(mo.J0.compose(mo.J0) - eye, 2)), tol2))
    u = t.reshape(-1)
    report.check(Check("delta_fixes_u0", float(np.linalg.norm(mo.Delta0 @ u - u) / math.sqrt(n)), tol2))
    report.check(Check("J_fixes_u0", float(np.linalg.norm(mo.J0.apply_vec(u) - u) / math.sqrt(n)), tol2))
    report.check(Check("S_equals_J_delta_half", mo.S.distance(_j_delta_half(mo.J0, mo.Delta0)), tol2))


def _j_delta_half(j0: AntilinearMap, delta: np.ndarray) -> AntilinearMap:
    return j0.after(hermitian_function(delta, np.sqrt))


def cmd_verify(args, report: Report):
    rng = np.random.default_rng(args.seed)
    path = _one_input(args)
    if path:
        t = formats.read_matrix(path)
    else:
        n = args.n or 3
        t = random_invertible(n, random_kappa(rng), rng)
    ctx = _context(args, t.shape[0])
    for check in modular_checks(t, ctx, rng):
        report.check(check)


def cmd_blocks(args, report: Report):
    n = args.n or 2
    ctx = _context(args, n)
    path = _one_input(args)
    if path:
        u = formats.read_block_vector(path)
        ctx = _context(args, u.n)
        t = assemble_T_u(u, ctx)
        scale = max(1.0, u.total_norm_sq)
        resid = float(np.sqrt(np.sum(np.abs(reconstruct(t, ctx).blocks - u.blocks) ** 2)))
        report.check(Check("reconstruction", resid, ctx.tol * math.sqrt(scale)))
        a, b, c = block_trace_condition(u, ctx)
        report.check(Check("trace_condition", max(abs(a - c), abs(b - c)), ctx.tol * scale))
        cyc, sep = block_cyclic_separating(u, ctx)
        report.add({"N": u.N, "n": u.n, "cyclic": cyc, "separating": sep})
        return
    big_n = args.N or 16
    sizes = [2**k for k in range(1, int(math.log2(big_n)) + 1)] or [1]
    rows = truncation_study(ctx, sizes=tuple(sizes))
    for row in rows:
        rec = dict(row.__dict__)
        rec["record"] = "truncation"
        report.add(rec)
        scale = max(1.0, row.norm_sq)
        report.check(Check("reconstruction", row.reconstruction_residual, ctx.tol * math.sqrt(scale)), N=row.N)
        report.check(
            Check("trace_condition", max(abs(row.tr_TsT - row.norm_sq), abs(row.tr_TTs - row.norm_sq)), ctx.tol * scale),
            N=row.N,
        )
        report.check(Check("block_identity_trace", abs(row.tr_identity - row.N), ctx.tol * row.N), N=row.N)
        if not (row.cyclic and row.separating):
            report.fail(f"weighted vector not cyclic/separating at N={row.N}")
    diffs = [r.cauchy_diff for r in rows if r.cauchy_diff is not None]
    decreasing = all(b <= a for a, b in zip(diffs, diffs[1:]))
    report.add({"record": "cauchy", "differences": diffs, "decreasing": decreasing})
    if not decreasing:
        report.fail("Cauchy differences of the norms are not decreasing")
    # the block trace itself, both formulas, on the largest identity
    block_trace(BlockOperator.identity(n, sizes[-1]), ctx)


def _infer_target(first, cutoff: int) -> DeltaSpectrum:
    """Lattice target from tail-bearing data, explicit ratio spectrum otherwise."""
    spec = delta_spectrum(first, cutoff)
    if first.tail is None:
        return spec
    above = [lam for lam, _ in spec.entries if lam > 1.0 + 1e-9]
    return DeltaSpectrum.lattice(min(above))


def _summary_word(flags: list[bool]) -> str:
    if all(flags):
        return "both" if len(flags) == 2 else "all"
    if not any(flags):
        return "none"
    return ",".join(str(i) for i, f in enumerate(flags) if f)


def cmd_classify(args, report: Report):
    if not args.input:
        raise formats.FormatError("classify needs at least one --input spectrum file")
    data = [formats.read_spectrum(p) for p in args.input]
    cutoff = args.cutoff
    target = formats.read_target(args.target) if args.target else _infer_target(data[0], cutoff)
    report.add({"record": "target", "target": target.to_dict()})
    flags = []
    for path, s in zip(args.input, data):
        rep = is_admissible(s, target, cutoff)
        flags.append(rep.admissible)
        rec = rep.to_dict()
        rec.update({"record": "admissibility", "input": Path(path).name})
        report.add(rec)
        if not rep.admissible:
            report.fail(f"{Path(path).name}: not admissible ({', '.join(rep.failures)})")
    eq_any = False
    for (i, a), (j, b) in itertools.combinations(enumerate(data), 2):
        eq = equivalent(a, b)
        eq_any = eq_any or eq
        report.add({"record": "equivalence", "pair": [i, j], "equivalent": eq})
    summary = f"admissible: {_summary_word(flags)}"
    if len(data) > 1:
        summary += f"; equivalent: {str(eq_any).lower()}"
    report.add({"record": "summary", "summary": summary})
    print(summary, file=sys.stderr)


def _grid(text: str | None):
    if not text:
        return None
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise formats.FormatError(f"bad --grid value: {exc}") from exc


def cmd_enumerate(args, report: Report):
    if args.target:
        target = formats.read_target(args.target)
    elif args.base:
        target = DeltaSpectrum.lattice(args.base)
    else:
        raise formats.FormatError("enumerate needs --target or --base")
    ft = FactorType(args.type or "TypeII_inf")
    bounds = EnumerationBounds(
        max_head=args.max_head,
        window=args.window,
        multiplicities=tuple(range(1, args.max_mult + 1)),
        mu_grid=_grid(args.grid),
        cutoff=args.cutoff,
    )
    classes = enumerate_classes(target, ft, bounds)
    for i, s in enumerate(classes):
        rec = s.to_dict()
        rec.update({"record": "class", "index": i})
        report.add(rec)
    report.add({"record": "summary", "classes": len(classes)})


def cmd_crosscheck(args, report: Report):
    if args.input:
        data = [formats.read_spectrum(p) for p in args.input]
    else:
        rng = np.random.default_rng(args.seed)
        data = [random_finite_spectral(rng) for _ in range(args.count)]
    for i, s in enumerate(data):
        rep = cross_check_finite(s, FactorContext(n=1, tol=args.tol))
        rec = rep.to_dict()
        rec.update({"record": "crosscheck", "index": i, "data": s.to_dict()})
        report.add(rec)
        if not rep.passed:
            report.fail(f"crosscheck {i}: eigenvalue error {rep.max_rel_error:.3e}, multiplicities match {rep.multiplicities_match}")


COMMANDS = {
    "modobj": cmd_modobj,
    "verify": cmd_verify,
    "blocks": cmd_blocks,
    "classify": cmd_classify,
    "enumerate": cmd_enumerate,
    "crosscheck": cmd_crosscheck,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tomita", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", help="input file (repeatable)")
    common.add_argument("--output", help="report path; stdout when omitted")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, help="tail terms expanded")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--n", type=int, help="matrix dimension")
    common.add_argument("--N", type=int, help="largest block truncation size")
    common.add_argument("--type", choices=[f.value for f in FactorType])
    helps = {
        "modobj": "modular objects of a matrix",
        "verify": "formula-vs-oracle invariant suite",
        "blocks": "block model checks and truncation study",
        "classify": "admissibility and equivalence of spectrum files",
        "enumerate": "list inequivalent admissible classes",
        "crosscheck": "ratio spectrum vs matrix model",
    }
    for verb, text in helps.items():
        p = sub.add_parser(verb, parents=[common], help=text)
        if verb in ("classify", "enumerate"):
            p.add_argument("--target", help="target spectrum JSON")
        if verb == "enumerate":
            p.add_argument("--base", type=float, help="lattice target base**Z")
            p.add_argument("--max-head", type=int, default=3)
            p.add_argument("--window", type=int, default=8)
            p.add_argument("--max-mult", type=int, default=1)
            p.add_argument("--grid", help="comma-separated mu grid")
        if verb == "crosscheck":
            p.add_argument("--count", type=int, default=20, help="random cases without --input")
    return parser


def _report_error(report: Report, exc: Exception):
    name = type(exc).__name__
    message = str(exc)
    if message.startswith(name + ":"):
        message = message[len(name) + 1 :].strip()
    report.add({"error": name, "message": message})
    print(f"error: {name}: {message}", file=sys.stderr)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = Report()
    try:
        if args.tol <= 0:
            raise formats.FormatError("--tol must be positive")
        COMMANDS[args.verb](args, report)
        code = 1 if report.failed else 0
    except ModularError as exc:
        code = 2 if isinstance(exc, (InvalidSpectralData, ShapeMismatch)) else 1
        _report_error(report, exc)
    except PARSE_ERRORS as exc:
        code = 2
        _report_error(report, exc)
    for msg in report.failed:
        print(f"FAIL {msg}", file=sys.stderr)
    text = report.dumps()
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

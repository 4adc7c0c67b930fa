"""Command-line front end tying the exact and numerical layers together.

Every run is fully determined by its RunConfig (command, parameters,
seed, limits); JSON reports embed that config so results are replayable
byte-for-byte.  Exit codes: 0 success / certification passed, 1 usage or
validation error, 2 certification or verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import golomb as golomb_mod
from . import schemes, simulator, transform, turnpike
from .spectrum import GeneratorGrid, contiguous_k, degeneracy, spectrum_of_grid

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERTIFICATION = 2

DEFAULT_MAX_SPECTRUM_ELEMENTS = 10**7
DEFAULT_MAX_EXHAUSTIVE_D = 8

__all__ = ["RunConfig", "run", "main", "entrypoint"]


class UsageError(Exception):
    pass


class CertificationFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    output: str = "text"
    threads: int = 1
    max_spectrum_elements: int = DEFAULT_MAX_SPECTRUM_ELEMENTS
    max_exhaustive_d: int = DEFAULT_MAX_EXHAUSTIVE_D

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "output": self.output,
            "threads": self.threads,
            "limits": {
                "max_spectrum_elements": self.max_spectrum_elements,
                "max_exhaustive_d": self.max_exhaustive_d,
            },
        }


def _parse_marks(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse value list {text!r}: {exc}") from None


def _parse_shape(text: str) -> tuple[int, int]:
    try:
        rows, cols = text.lower().split("x")
        return int(rows), int(cols)
    except ValueError:
        raise UsageError(f"shape must look like '2x3', got {text!r}") from None


def _load_grid(path: str, limit: int) -> GeneratorGrid:
    try:
        with open(path, encoding="utf-8") as fh:
            grid = GeneratorGrid.from_json(json.load(fh))
    except OSError as exc:
        raise UsageError(f"cannot read grid file: {exc}") from None
    except (KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"malformed grid file {path!r}: {exc}") from None
    _check_limit(grid, limit)
    return grid


def _check_limit(grid: GeneratorGrid, limit: int):
    bound = grid.max_spectrum_size()
    if bound > limit:
        raise UsageError(
            f"spectrum may reach {bound} elements, above the configured limit {limit}; "
            "raise --max-spectrum-elements to proceed"
        )


# -- command handlers ------------------------------------------------------
# Each returns (result_dict, (csv_header, csv_rows) | None, text_lines).


def _cmd_spectrum(config: RunConfig):
    grid = _load_grid(config.params["grid"], config.max_spectrum_elements)
    spec = spectrum_of_grid(grid)
    result = {
        "spectrum": spec.to_json(),
        "size": len(spec),
        "contiguous_k": contiguous_k(spec),
    }
    lines = [f"size: {result['size']}", f"contiguous_k: {result['contiguous_k']}"]
    omega = config.params.get("degeneracy")
    if omega is not None:
        deg = degeneracy(grid, Fraction(omega))
        result["degeneracy"] = {omega: deg}
        lines.append(f"degeneracy({omega}): {deg}")
    lines.append("elements: " + ", ".join(str(e) for e in spec))
    return result, None, lines


def _report_csv(reports):
    return schemes.CSV_HEADER, [r.csv_row() for r in reports]


def _cmd_construct(config: RunConfig):
    p = config.params
    kind = schemes.SchemeKind.parse(p["kind"])
    base = _parse_marks(p["base"]) if p.get("base") else None
    grid = schemes.build_scheme(kind, p["R"], p["L"], base, p["q"])
    _check_limit(grid, config.max_spectrum_elements)
    try:
        report = schemes.certify(kind, p["R"], p["L"], base, p["q"])
    except schemes.CertificationError as exc:
        raise CertificationFailure(str(exc)) from None
    lines = [
        f"{kind.value} R={report.R} L={report.L} q={report.q}",
        f"predicted: {report.predicted}",
        f"size: {report.size}  contiguous_k: {report.k_contig}  maximal: {report.maximal_label()}",
    ]
    return report.to_json(), _report_csv([report]), lines


def _cmd_turnpike(config: RunConfig):
    p = config.params
    d = p["d"]
    if p["exhaustive"] and d > config.max_exhaustive_d:
        raise UsageError(
            f"exhaustive search is limited to d <= {config.max_exhaustive_d}; "
            "drop --exhaustive for a single optimal witness"
        )
    solution = turnpike.solve(
        d,
        exhaustive=p["exhaustive"],
        workers=config.threads,
        checkpoint_path=p.get("checkpoint"),
        checkpoint_every=p.get("checkpoint_every") or 10**8,
    )
    rows = [
        [solution.d, " ".join(map(str, solution.example)), solution.best_k,
         solution.solution_count, solution.candidate_space_size]
    ]
    lines = [
        f"d={solution.d}: best K = {solution.best_k}, example {solution.example}",
        f"solutions: {solution.solution_count} (exhaustive={solution.exhaustive})",
    ]
    return solution.to_json(), (["d", "example", "k", "solutions", "candidates"], rows), lines


def _cmd_golomb(config: RunConfig):
    p = config.params
    if p.get("check"):
        marks = _parse_marks(p["check"])
        if not golomb_mod.is_golomb(marks):
            result = {"marks": [str(m) for m in marks], "golomb": False}
            return result, None, ["not a Golomb ruler"]
        stats = golomb_mod.ruler_stats(marks)
        result = {"marks": [str(m) for m in marks], "golomb": True, **stats}
        return result, None, [f"Golomb ruler: order {stats['order']}, length {stats['length']}, "
                              f"perfect={stats['perfect']}"]
    order = p["order"]
    cap = p.get("cap") or order * order
    rulers = golomb_mod.search_optimal(order, cap)
    result = {
        "order": order,
        "length_cap": cap,
        "minimal_length": rulers[0].length if rulers else None,
        "rulers": [r.to_json() for r in rulers],
    }
    if not rulers:
        return result, None, [f"no Golomb ruler of order {order} within length {cap}"]
    lines = [f"minimal length {rulers[0].length}:"] + [
        "  " + ",".join(map(str, r.marks)) for r in rulers
    ]
    return result, None, lines


def _cmd_verify(config: RunConfig):
    p = config.params
    kind = schemes.SchemeKind.parse(p["scheme"])
    base = _parse_marks(p["base"]) if p.get("base") else None
    grid = schemes.build_scheme(kind, p["R"], p["L"], base, p["q"])
    _check_limit(grid, config.max_spectrum_elements)
    exact = spectrum_of_grid(grid)
    radius = int(exact.radius())
    max_leak = 0.0
    attained: set[int] = set()
    all_passed = True
    for offset in range(p["seeds"]):
        model = simulator.random_model(grid, config.seed + offset)
        report = simulator.verify_support(model, exact, tol=p["tol"])
        max_leak = max(max_leak, report.max_leak)
        attained |= report.attained
        all_passed &= report.passed
    result = {
        "scheme": kind.value,
        "shape": {"R": p["R"], "L": p["L"], "q": p["q"]},
        "exact_radius": radius,
        "max_leak": max_leak,
        "attained_fraction": len(attained) / len(exact),
        "pass": all_passed,
        "seeds": p["seeds"],
        "tol": p["tol"],
    }
    lines = [
        f"{kind.value} R={p['R']} L={p['L']}: exact radius {radius}",
        f"max leak {max_leak:.3e} over {p['seeds']} seeds "
        f"(tol {p['tol']:g}); attained {len(attained)}/{len(exact)}",
        "PASS" if all_passed else "FAIL",
    ]
    if not all_passed:
        raise CertificationFailure(
            f"support leak {max_leak:.3e} above tolerance {p['tol']:g}"
        )
    return result, None, lines


def _cmd_invariance(config: RunConfig):
    p = config.params
    grid = _load_grid(p["grid"], config.max_spectrum_elements)
    target = _parse_shape(p["target"])
    if p.get("bijection"):
        with open(p["bijection"], encoding="utf-8") as fh:
            bijection = transform.GridBijection.from_json(json.load(fh))
        transformed = transform.apply(grid, bijection)
        spec = spectrum_of_grid(grid)
        equal = spec == spectrum_of_grid(transformed)
        report = {"spectra_equal": equal, "spectrum": spec, "transformed": transformed}
    else:
        report = transform.invariance_report(grid, target)
    result = {
        "spectra_equal": report["spectra_equal"],
        "spectrum": report["spectrum"].to_json(),
        "size": len(report["spectrum"]),
        "target": list(target),
    }
    lines = [
        f"target shape {target[0]}x{target[1]}: spectra_equal={report['spectra_equal']}",
        f"size: {len(report['spectrum'])}",
    ]
    if not report["spectra_equal"]:
        raise CertificationFailure("spectra differ under the requested rearrangement")
    return result, None, lines


def _cmd_table1(config: RunConfig):
    p = config.params
    try:
        reports = schemes.scheme_table(p["max_r"], p["max_l"])
    except schemes.CertificationError as exc:
        raise CertificationFailure(str(exc)) from None
    result = {"reports": [r.to_json() for r in reports]}
    lines = [
        f"{r.kind.value:24s} R={r.R} L={r.L} q={r.q} size={r.size} "
        f"K={r.k_contig} maximal={r.maximal_label()}"
        for r in reports
    ]
    return result, _report_csv(reports), lines


def _cmd_table2(config: RunConfig):
    p = config.params
    max_d = p["max_d"]
    if max_d > config.max_exhaustive_d:
        raise UsageError(f"exhaustive verification is limited to d <= {config.max_exhaustive_d}")
    try:
        rows = turnpike.verify_reference(max_d, workers=config.threads)
    except turnpike.TableMismatchError as exc:
        raise CertificationFailure(str(exc)) from None
    csv_rows = [
        [d, " ".join(map(str, turnpike.KNOWN_OPTIMA[d][2])), best_k, count,
         comb(d, 2) ** (d - 1)]
        for d, best_k, count in rows
    ]
    result = {
        "rows": [
            {"d": d, "best_k": k, "solution_count": c,
             "example": list(turnpike.KNOWN_OPTIMA[d][2])}
            for d, k, c in rows
        ]
    }
    lines = [f"d={d}: K={k}, solutions={c}" for d, k, c in rows] + ["all rows verified"]
    return result, (["d", "example", "k", "solutions", "candidates"], csv_rows), lines


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "construct": _cmd_construct,
    "turnpike": _cmd_turnpike,
    "golomb": _cmd_golomb,
    "verify": _cmd_verify,
    "invariance": _cmd_invariance,
    "table1": _cmd_table1,
    "table2": _cmd_table2,
}


def _render(config: RunConfig, result: dict, csv_data, lines) -> str:
    if config.output == "json":
        return json.dumps({"config": config.to_json(), "result": result}, sort_keys=True) + "\n"
    if config.output == "csv":
        if csv_data is None:
            raise UsageError(f"command {config.command!r} has no CSV form; use --output json")
        header, rows = csv_data
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    return "\n".join(lines) + "\n"


def _render_error(config: RunConfig, code: str, message: str) -> str:
    if config.output == "json":
        payload = {"config": config.to_json(), "error": {"code": code, "message": message}}
        return json.dumps(payload, sort_keys=True) + "\n"
    return f"error[{code}]: {message}\n"


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one config; returns (exit_code, report_text)."""
    handler = _HANDLERS.get(config.command)
    if handler is None:
        return EXIT_USAGE, _render_error(config, "usage", f"unknown command {config.command!r}")
    try:
        result, csv_data, lines = handler(config)
        return EXIT_OK, _render(config, result, csv_data, lines)
    except CertificationFailure as exc:
        return EXIT_CERTIFICATION, _render_error(config, "certification", str(exc))
    except (UsageError, ValueError) as exc:
        return EXIT_USAGE, _render_error(config, "usage", str(exc))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qnn-spectra", description=__doc__)
    parser.add_argument("--output", choices=["json", "csv", "text"], default="text")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=None,
                        help="worker processes (falls back to QNN_SPECTRA_THREADS, then 1)")
    parser.add_argument("--max-spectrum-elements", type=int, default=DEFAULT_MAX_SPECTRUM_ELEMENTS)
    parser.add_argument("--max-exhaustive-d", type=int, default=DEFAULT_MAX_EXHAUSTIVE_D)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="exact spectrum of a grid JSON file")
    p.add_argument("--grid", required=True)
    p.add_argument("--degeneracy", default=None, metavar="OMEGA")

    p = sub.add_parser("construct", help="build and certify an encoding scheme")
    p.add_argument("--kind", required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--base", default=None, help="comma-separated eigenvalues, e.g. 0,1")

    p = sub.add_parser("turnpike", help="solve the relaxed turnpike problem")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--checkpoint-every", type=int, default=10**8)

    p = sub.add_parser("golomb", help="check a ruler or search optimal ones")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--search", action="store_true")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--check", default=None, metavar="MARKS")

    p = sub.add_parser("verify", help="numerical support check of a scheme")
    p.add_argument("--scheme", required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--base", default=None)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("invariance", help="area-preserving rearrangement check")
    p.add_argument("--grid", required=True)
    p.add_argument("--target", required=True, help="target shape, e.g. 1x6 (rows x layers)")
    p.add_argument("--bijection", default=None, help="JSON file with explicit cell pairs")

    p = sub.add_parser("table1", help="certified overview of all schemes")
    p.add_argument("--max-R", dest="max_r", type=int, default=2)
    p.add_argument("--max-L", dest="max_l", type=int, default=2)

    p = sub.add_parser("table2", help="verified relaxed-turnpike optima")
    p.add_argument("--max-d", dest="max_d", type=int, default=6)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("QNN_SPECTRA_THREADS", "1"))
    if threads < 1:
        raise UsageError("threads must be >= 1")
    params = {
        k: v
        for k, v in vars(args).items()
        if k not in {"command", "output", "seed", "threads",
                     "max_spectrum_elements", "max_exhaustive_d"}
    }
    return RunConfig(
        command=args.command,
        params=params,
        seed=args.seed,
        output=args.output,
        threads=threads,
        max_spectrum_elements=args.max_spectrum_elements,
        max_exhaustive_d=args.max_exhaustive_d,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
    except UsageError as exc:
        sys.stdout.write(f"error[usage]: {exc}\n")
        return EXIT_USAGE
    if config.command == "golomb" and not config.params.get("check") \
            and config.params.get("order") is None:
        sys.stdout.write("error[usage]: golomb needs --order (search) or --check MARKS\n")
        return EXIT_USAGE
    code, text = run(config)
    sys.stdout.write(text)
    return code


def entrypoint():
    sys.exit(main())

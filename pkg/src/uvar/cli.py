"""``uvar`` command line: CSV in, JSON (or plain text) out.

Subcommands: variance, qp, oracle, estimate. Exit status is 0 on success,
2 for bad input, 1 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace

from . import exact, qp
from .errors import InvariantViolation, KTooLargeForGrid, ParseError, UvarError, ValidationError
from .estimate import SampleTable, estimate_groups, estimate_moments
from .exact import Pair
from .model import MomentEntry, MomentSet, build_moment_set
from .oracle import OracleConfig, minimax_oracle, simplex_grid

COMMANDS = ("variance", "qp", "oracle", "estimate")
KINDS = ("moments", "moments-variance", "samples")
HEADERS = {
    "moments": ["label", "mean", "second_moment"],
    "moments-variance": ["label", "mean", "variance"],
    "samples": ["label", "value"],
}
ENV_MAX_K_GRID = "UVAR_MAX_K_GRID"


@dataclass
class RunRequest:
    command: str
    input_path: str = "-"
    input_kind: str = "moments-variance"
    tolerances: OracleConfig = field(default_factory=OracleConfig)
    output: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.input_kind not in KINDS:
            raise ValidationError(f"unknown input kind {self.input_kind!r}")
        if self.output not in ("json", "plain"):
            raise ValidationError(f"unknown output format {self.output!r}")
        if self.command == "qp" and self.input_kind == "samples":
            raise ValidationError("qp accepts only moments or moments-variance input")
        if self.command == "estimate" and self.input_kind != "samples":
            raise ValidationError("estimate needs --kind samples")


# -- input -------------------------------------------------------------------


def read_text(path: str, stdin=None) -> str:
    if path == "-":
        stdin = stdin if stdin is not None else sys.stdin
        raw = stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read()
    else:
        with open(path, "rb") as fh:
            raw = fh.read()
    if isinstance(raw, str):
        return raw
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(0, f"input is not valid UTF-8 (byte offset {exc.start})") from None


def _float(cell: str, line: int, column: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(line, f"{column}: not a number: {cell!r}") from None


def parse_rows(text: str, kind: str) -> list[tuple[int, list[str]]]:
    """Check the header for ``kind`` and return (line number, cells) per data row."""
    reader = csv.reader(io.StringIO(text.lstrip("\ufeff")))
    header = None
    rows = []
    for cells in reader:
        line = reader.line_num
        if not cells or all(not c.strip() for c in cells):
            continue
        cells = [c.strip() for c in cells]
        if header is None:
            header = cells
            if header != HEADERS[kind]:
                raise ParseError(
                    line, f"expected header {','.join(HEADERS[kind])!r}, got {','.join(header)!r}"
                )
            continue
        if len(cells) != len(header):
            raise ParseError(line, f"expected {len(header)} fields, got {len(cells)}")
        if not cells[0]:
            raise ParseError(line, "empty label")
        rows.append((line, cells))
    if header is None:
        raise ParseError(1, "missing header")
    return rows


def load_moment_set(text: str, kind: str) -> MomentSet:
    if kind == "samples":
        return estimate_moments(load_samples(text))
    entries = []
    for line, (label, mean, second) in parse_rows(text, kind):
        mu = _float(mean, line, "mean")
        x = _float(second, line, HEADERS[kind][2])
        if kind == "moments-variance":
            entries.append(MomentEntry.from_variance(label, mu, x))
        else:
            entries.append(MomentEntry(label, mu, x))
    return build_moment_set(entries)


def load_samples(text: str) -> SampleTable:
    rows = [(label, _float(v, line, "value")) for line, (label, v) in parse_rows(text, "samples")]
    return SampleTable.from_pairs(rows)


# -- output ------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise InvariantViolation(f"non-finite value in report: {x!r}")
    text = format(x, ".17g")
    # keep whole numbers recognisably floating point ("4.0", not "4")
    return text if any(c in text for c in ".en") else text + ".0"


def dump_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats written at 17 significant digits, dict order kept."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {dump_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dump_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _witness_dict(kind: str, labels) -> dict:
    # labels run from smaller to larger mean
    return {"kind": kind, "labels": list(labels)}


def variance_payload(report: exact.VarianceReport) -> dict:
    ms = report.moment_set
    inputs = ms.input_entries()
    lam = report.lambda_input_order()
    kind = "pair" if isinstance(report.witness, Pair) else "single"
    return {
        "upper_variance": report.upper_variance,
        "lower_variance": report.lower_variance,
        "mu_star": report.mu_star,
        "lambda_star": [{"label": e.label, "weight": w} for e, w in zip(inputs, lam)],
        "witness": _witness_dict(kind, [inputs[i].label for i in report.witness_input_indices()]),
        "shift_applied": 0.0,
    }


def qp_payload(ms: MomentSet) -> dict:
    inputs = ms.input_entries()
    inst = qp.QpInstance(tuple(e.mean for e in inputs), tuple(e.second_moment for e in inputs))
    sol = qp.solve(inst)
    kind = "pair" if isinstance(sol.witness, Pair) else "single"
    by_mean = sorted(sol.witness.indices, key=lambda i: (inputs[i].mean, i))
    return {
        "upper_variance": sol.value,
        "lower_variance": min(e.variance for e in inputs),
        "mu_star": sol.mu_star,
        "lambda_star": [{"label": e.label, "weight": w} for e, w in zip(inputs, sol.lambda_star)],
        "witness": _witness_dict(kind, [inputs[i].label for i in by_mean]),
        "shift_applied": sol.shift_applied,
    }


def oracle_payload(ms: MomentSet, cfg: OracleConfig) -> dict:
    mm = minimax_oracle(ms, cfg)
    inputs = ms.input_entries()
    inst = qp.QpInstance(tuple(e.mean for e in inputs), tuple(e.second_moment for e in inputs))
    try:
        g = simplex_grid(inst, cfg)
    except KTooLargeForGrid as exc:
        print(f"uvar: grid oracle skipped: {exc}", file=sys.stderr)
        grid = None
    else:
        grid = {
            "value": g.value,
            "grid_n": cfg.grid_n,
            "lipschitz_bound": g.lipschitz,
            "max_gap": g.lipschitz / cfg.grid_n,
            "lambda": [{"label": e.label, "weight": w} for e, w in zip(inputs, g.weights)],
        }
    return {
        "upper_variance": mm.value,
        "mu_star": mm.mu_star,
        "tol_mu": cfg.tol_mu,
        "grid": grid,
    }


def estimate_payload(table: SampleTable) -> dict:
    groups = estimate_groups(table)
    ms = build_moment_set(
        MomentEntry(g.label, g.mean, g.variance + g.mean * g.mean) for g in groups
    )
    by_label = {g.label: g for g in groups}
    return {
        "moments": [
            {
                "label": e.label,
                "n": by_label[e.label].n,
                "mean": e.mean,
                "variance": by_label[e.label].variance,
                "second_moment": e.second_moment,
            }
            for e in ms.entries
        ]
    }


def _plain(payload: dict, prefix: str = "") -> list[str]:
    lines = []
    for key, val in payload.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            lines.extend(_plain(val, name + "."))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            for item in val:
                if "label" in item:
                    rest = " ".join(
                        f"{k}={_fmt_float(v) if isinstance(v, float) else v}"
                        for k, v in item.items() if k != "label"
                    )
                    lines.append(f"{name}[{item['label']}] {rest}")
        elif isinstance(val, list):
            lines.append(f"{name}: {' '.join(map(str, val))}")
        elif isinstance(val, float):
            lines.append(f"{name}: {_fmt_float(val)}")
        else:
            lines.append(f"{name}: {val}")
    return lines


def render(payload: dict, output: str) -> str:
    if output == "plain":
        return "\n".join(_plain(payload)) + "\n"
    return dump_json(payload) + "\n"


# -- driver ------------------------------------------------------------------


def execute(req: RunRequest, stdin=None) -> dict:
    text = read_text(req.input_path, stdin)
    if req.command == "estimate":
        return estimate_payload(load_samples(text))
    ms = load_moment_set(text, req.input_kind)
    if req.command == "variance":
        return variance_payload(exact.upper_variance(ms))
    if req.command == "qp":
        return qp_payload(ms)
    return oracle_payload(ms, req.tolerances)


def run(req: RunRequest, stdout=None, stderr=None, stdin=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        payload = execute(req, stdin)
    except InvariantViolation as exc:
        print(f"uvar: internal error: {exc}", file=stderr)
        return 1
    except (UvarError, OSError) as exc:
        print(f"uvar: {exc}", file=stderr)
        return 2
    stdout.write(render(payload, req.output))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uvar", description="Upper/lower variance under finitely many probability measures."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "variance": "closed-form upper and lower variance",
        "qp": "exact simplex QP max lambda.kappa - (lambda.mu)^2 (any kappa)",
        "oracle": "brute-force cross-check (ternary search + simplex grid)",
        "estimate": "per-label sample moments from long-format samples",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--input", default="-", help="CSV path, or - for stdin (default)")
        p.add_argument(
            "--kind",
            choices=KINDS,
            default="samples" if name == "estimate" else "moments-variance",
        )
        p.add_argument("--output", choices=("json", "plain"), default="json")
        p.add_argument("--grid-n", type=int, default=None)
        p.add_argument("--tol-mu", type=float, default=None)
    return parser


def config_from_args(args, environ=None) -> OracleConfig:
    environ = os.environ if environ is None else environ
    cfg = OracleConfig()
    overrides = {}
    if args.grid_n is not None:
        overrides["grid_n"] = args.grid_n
    if args.tol_mu is not None:
        overrides["tol_mu"] = args.tol_mu
    env = environ.get(ENV_MAX_K_GRID)
    if env:
        try:
            overrides["max_k_grid"] = int(env)
        except ValueError:
            raise ValidationError(f"{ENV_MAX_K_GRID} must be an integer, got {env!r}") from None
    return replace(cfg, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        req = RunRequest(
            command=args.command,
            input_path=args.input,
            input_kind=args.kind,
            tolerances=config_from_args(args),
            output=args.output,
        )
    except ValidationError as exc:
        print(f"uvar: {exc}", file=sys.stderr)
        return 2
    return run(req)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad input or arguments,
3 parameters outside the stable range m >= 2k without ``--force-unstable``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .clifford import CliffordError, build_spinor_frame
from .decomp import StableRangeError, fischer_decompose, verify_theorem1
from .exactla import LinAlgError
from .operators import relation_suite
from .poly import ClPoly, PolyError
from .repdim import graded_dim_identities

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_UNSTABLE = 3

COMMANDS = ("verify", "decompose", "dims", "relations", "spinor-info")


@dataclass
class RunConfig:
    command: str
    m: int | None = None
    k: int = 1
    min_degree: int = 0
    max_degree: int = 2
    input: str | None = None
    output: str | None = None
    reassembled_output: str | None = None
    force_unstable: bool = False
    fmt: str = "json"
    relations_max_degree: int | None = None
    timing: bool = True

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.command != "decompose":
            if self.m is None or self.m <= 2:
                raise ValueError("--m must be an integer > 2")
        if self.k < 1:
            raise ValueError("--k must be >= 1")
        if self.min_degree < 0 or self.max_degree < self.min_degree:
            raise ValueError("degrees must satisfy 0 <= degree <= max-degree")
        if self.relations_max_degree is not None and self.relations_max_degree < 0:
            raise ValueError("--relations-max-degree must be >= 0")
        if self.fmt not in ("json", "text"):
            raise ValueError("--format is json or text")


class InputError(Exception):
    pass


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "elapsed"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _degrees(cfg: RunConfig) -> range:
    return range(cfg.min_degree, cfg.max_degree + 1)


def _relations(cfg: RunConfig, degree: int) -> dict:
    reps = [r.to_json() for r in relation_suite(cfg.m, cfg.k, degree)]
    return {
        "m": cfg.m,
        "k": cfg.k,
        "max_degree": degree,
        "relations": reps,
        "pass": all(r["pass"] for r in reps),
    }


def _cmd_verify(cfg: RunConfig) -> dict:
    cells = [verify_theorem1(cfg.m, cfg.k, d, force=cfg.force_unstable) for d in _degrees(cfg)]
    report = {"command": "verify", "m": cfg.m, "k": cfg.k, "cells": cells}
    ok = all(c["pass"] for c in cells)
    if cfg.relations_max_degree is not None:
        rel = _relations(cfg, cfg.relations_max_degree)
        report["relations"] = rel
        ok = ok and rel["pass"]
    report["pass"] = ok
    return report


def _cmd_dims(cfg: RunConfig) -> dict:
    rows = [graded_dim_identities(cfg.m, cfg.k, d, force=cfg.force_unstable) for d in _degrees(cfg)]
    return {"command": "dims", "m": cfg.m, "k": cfg.k, "rows": rows,
            "pass": all(r["pass"] for r in rows)}


def _cmd_relations(cfg: RunConfig) -> dict:
    degree = 3 if cfg.relations_max_degree is None else cfg.relations_max_degree
    report = {"command": "relations"}
    report.update(_relations(cfg, degree))
    return report


def _cmd_spinor_info(cfg: RunConfig) -> dict:
    report = {"command": "spinor-info"}
    report.update(build_spinor_frame(cfg.m).describe())
    report["pass"] = True
    return report


def _read_poly(path: str) -> ClPoly:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return ClPoly.loads(text)
    except PolyError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _cmd_decompose(cfg: RunConfig) -> dict:
    if not cfg.input:
        raise InputError("decompose needs --input")
    P = _read_poly(cfg.input)
    if cfg.m is not None and cfg.m != P.m:
        raise InputError(f"{cfg.input}: file has m={P.m}, --m says {cfg.m}")
    if P.m <= 2:
        raise InputError(f"{cfg.input}: spinor values need m > 2 (got m={P.m})")
    try:
        res = fischer_decompose(P, force=cfg.force_unstable)
    except (CliffordError, LinAlgError) as exc:
        raise InputError(f"{cfg.input}: polynomial is not spinor-valued ({exc})") from exc
    report = {"command": "decompose", "input": cfg.input}
    report.update(res.to_json())
    report["pass"] = res.residual.is_zero()
    if cfg.reassembled_output:
        Path(cfg.reassembled_output).write_text(res.reassemble().dumps())
    return report


_HANDLERS = {
    "verify": _cmd_verify,
    "decompose": _cmd_decompose,
    "dims": _cmd_dims,
    "relations": _cmd_relations,
    "spinor-info": _cmd_spinor_info,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit status, report)."""
    try:
        cfg.validate()
    except ValueError as exc:
        return EXIT_INPUT, {"command": cfg.command, "error": str(exc), "pass": False}
    try:
        report = _HANDLERS[cfg.command](cfg)
    except StableRangeError as exc:
        return EXIT_UNSTABLE, {"command": cfg.command, "error": str(exc), "pass": False}
    except InputError as exc:
        return EXIT_INPUT, {"command": cfg.command, "error": str(exc), "pass": False}
    if not cfg.timing:
        report = _strip_timing(report)
    return (EXIT_OK if report["pass"] else EXIT_FAIL), report


# ---------------------------------------------------------------------------
# text rendering


def _mark(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _table(header: list[str], rows: list[list]) -> list[str]:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]


def render_text(report: dict) -> str:
    cmd = report.get("command")
    if "error" in report:
        return f"error: {report['error']}"
    lines: list[str] = []
    if cmd == "verify":
        for c in report["cells"]:
            dims = " + ".join(str(s["dim"]) for s in c["summands"])
            lines.append(
                f"{_mark(c['pass'])} m={c['m']} k={c['k']} degree={c['degree']}: "
                f"{dims} = {c['total_dim']} (ambient {c['ambient_dim']}, rank {c['rank']})"
            )
        if "relations" in report:
            rel = report["relations"]
            bad = sum(1 for r in rel["relations"] if not r["pass"])
            lines.append(f"{_mark(rel['pass'])} relations: {len(rel['relations'])} brackets, {bad} failing")
    elif cmd == "dims":
        rows = []
        for r in report["rows"]:
            for name, c in r["checks"].items():
                rows.append([r["degree"], name, c["lhs"], c["rhs"], _mark(c["pass"])])
        lines += _table(["degree", "identity", "lhs", "rhs", "status"], rows)
    elif cmd == "relations":
        rows = []
        for r in report["relations"]:
            const = ", ".join(f"{g}: {v}" for g, v in r["constant_found"].items()) or "0"
            rows.append([r["relation"], const, _mark(r["pass"])])
        lines += _table(["bracket", "expansion", "status"], rows)
    elif cmd == "decompose":
        for c in report["components"]:
            lines.append(f"J={c['J']} n={[x for x in c['n'] if x[2]]} t={c['t']}: "
                         f"{len(c['monogenic']['terms'])} monogenic terms")
        lines.append(f"{_mark(report['pass'])} residual zero: {report['residual_zero']}")
    elif cmd == "spinor-info":
        lines.append(f"m={report['m']} n={report['n']} dim S={report['dim']}")
        lines += _table(
            ["index", "key blade", "norm", "chirality"],
            [
                [t, "e" + "".join(map(str, b)) if b else "1", report["norms"][t][0],
                 "-" if report["chirality"] is None else report["chirality"][t]]
                for t, b in enumerate(report["basis_blades"])
            ],
        )
    lines.append(f"overall: {_mark(report['pass'])}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monofischer",
        description="Exact verification of monogenic Fischer decompositions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_m=True, degrees=True):
        p.add_argument("--m", type=int, required=needs_m, help="dimension of each vector variable")
        p.add_argument("--k", type=int, default=1, help="number of vector variables")
        if degrees:
            p.add_argument("--degree", type=int, help="single degree to check")
            p.add_argument("--max-degree", type=int, default=2, help="check degrees 0..N")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")
        p.add_argument("--force-unstable", action="store_true",
                       help="run even when m < 2k (no uniqueness claims)")
        p.add_argument("--no-timing", action="store_true", help="omit elapsed times from reports")

    p = sub.add_parser("verify", help="check the decomposition is direct and spanning")
    common(p)
    p.add_argument("--relations-max-degree", type=int, help="also run the bracket suite")
    common(sub.add_parser("dims", help="dimension identity table"))
    p = sub.add_parser("relations", help="bracket relations of the generators")
    common(p, degrees=False)
    p.add_argument("--relations-max-degree", type=int, default=3)
    common(sub.add_parser("spinor-info", help="describe the spinor frame"), degrees=False)
    p = sub.add_parser("decompose", help="decompose a polynomial file")
    common(p, needs_m=False, degrees=False)
    p.add_argument("--input", required=True, help="polynomial JSON file")
    p.add_argument("--reassembled-output", help="write the reassembled polynomial here")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=ns.command,
        m=ns.m,
        k=ns.k,
        output=ns.output,
        fmt=ns.fmt,
        force_unstable=ns.force_unstable,
        timing=not ns.no_timing,
        input=getattr(ns, "input", None),
        reassembled_output=getattr(ns, "reassembled_output", None),
        relations_max_degree=getattr(ns, "relations_max_degree", None),
    )
    if hasattr(ns, "max_degree"):
        if ns.degree is not None:
            cfg.min_degree = cfg.max_degree = ns.degree
        else:
            cfg.max_degree = ns.max_degree
    return cfg


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    status, report = run(cfg)
    if cfg.fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = render_text(report) + "\n"
    if "error" in report:
        print(f"monofischer {cfg.command}: {report['error']}", file=sys.stderr)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end: JSON family files in, JSON reports out."""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from . import kodaira
from .errors import MonodromyError, ParseError
from .exact import DEFAULT_PRECISION, parse_bivariate
from .family import (TOOL_VERSION, FamilySpec, TwistSpec, monodromy_group, quartic_monodromy,
                     quartic_pencil_family, verify_twist_relation)
from .hyperell import HyperellFamilySpec, mod2_monodromy_order, universal_slice
from .subgroup import DEFAULT_MAX_COSETS

COMMANDS = ("analyze", "twist", "kodaira", "hyperell", "quartic", "selftest")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    precision_bits: int = DEFAULT_PRECISION
    max_cosets: int = DEFAULT_MAX_COSETS
    seed: int = 0
    verbosity: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.precision_bits < 53:
            raise ValueError("precision must be at least 53 bits")
        if self.max_cosets < 1:
            raise ValueError("max_cosets must be positive")

    def to_json(self):
        return {"command": self.command, "precision": self.precision_bits,
                "max_cosets": self.max_cosets, "seed": self.seed}


def load_family_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", path=str(path)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg}", path=str(path),
                         line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("a family file holds a JSON object", path=str(path))
    return data


def _family(data: dict) -> FamilySpec:
    if "p" not in data or "q" not in data:
        raise ParseError("family file needs string fields 'p' and 'q'")
    return FamilySpec.from_strings(str(data["p"]), str(data["q"]), data.get("label", ""))


def _hyperell_family(data: dict, seed: int) -> HyperellFamilySpec:
    if "universal_slice" in data:
        opts = data["universal_slice"]
        return universal_slice(int(opts.get("g", 3)), int(opts.get("seed", seed)))
    if "f" not in data or "g" not in data:
        raise ParseError("hyperelliptic file needs 'f' and 'g' (or 'universal_slice')")
    return HyperellFamilySpec(parse_bivariate(str(data["f"])), int(data["g"]),
                              data.get("label", ""))


def _base(data: dict):
    if "base" not in data:
        return None
    try:
        x, y = (Fraction(str(v)) for v in data["base"])
    except (ValueError, TypeError, ZeroDivisionError):
        raise ParseError("'base' must be a pair of rationals") from None
    return x, y


def compute(cfg: RunConfig, data: dict) -> dict:
    """The report for one command on one parsed family file."""
    common = dict(precision=cfg.precision_bits, seed=cfg.seed, workers=cfg.workers)
    if cfg.command == "analyze":
        rep = monodromy_group(_family(data), cfg.max_cosets, **common).to_json()
    elif cfg.command == "twist":
        if "twist_d" not in data:
            raise ParseError("twist needs a 'twist_d' field")
        tw = TwistSpec.from_string(str(data["twist_d"]))
        rep = verify_twist_relation(_family(data), tw, cfg.max_cosets, **common).to_json()
    elif cfg.command == "kodaira":
        rep = kodaira.report_json(_family(data))
    elif cfg.command == "hyperell":
        rep = mod2_monodromy_order(_hyperell_family(data, cfg.seed), **common).to_json()
    elif cfg.command == "quartic":
        if "quartic" not in data:
            raise ParseError("quartic needs a 'quartic' field")
        pencil = quartic_pencil_family(str(data["quartic"]), seed=cfg.seed, base=_base(data),
                                       label=data.get("label", ""))
        rep = quartic_monodromy(pencil, cfg.max_cosets, **common).to_json()
    else:
        raise ValueError(f"compute does not handle {cfg.command!r}")
    rep["tool_version"] = TOOL_VERSION
    rep["run_config"] = cfg.to_json()
    return rep


def dump(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def lookup(report, dotted: str):
    node = report
    for part in dotted.split("."):
        if isinstance(node, list):
            node = node[int(part)]
        else:
            node = node[part]
    return node


def corpus_files():
    root = resources.files("monodromy") / "corpus"
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


def selftest(cfg: RunConfig, out=None) -> dict:
    out = sys.stdout if out is None else out
    rows = []
    for path in corpus_files():
        data = json.loads(path.read_text(encoding="utf-8"))
        sub = RunConfig(data.get("command", "analyze"), precision_bits=cfg.precision_bits,
                        max_cosets=cfg.max_cosets, seed=cfg.seed, workers=cfg.workers)
        start = time.perf_counter()
        try:
            rep = compute(sub, data)
            failed = [k for k, v in data.get("expect", {}).items() if lookup(rep, k) != v]
            error = None
        except MonodromyError as exc:
            failed, error = ["<error>"], exc.to_json()
        elapsed = time.perf_counter() - start
        rows.append({"file": path.name, "command": sub.command, "passed": not failed,
                     "mismatches": failed, "error": error})
        if cfg.verbosity:
            mark = "PASS" if not failed else "FAIL"
            print(f"{mark}  {path.name:32s} {sub.command:9s} {elapsed:7.2f}s"
                  + (f"  mismatched: {', '.join(failed)}" if failed else ""), file=out)
    return {"tool_version": TOOL_VERSION, "results": rows,
            "passed": all(r["passed"] for r in rows)}


def _summary(cfg: RunConfig, rep: dict) -> str:
    if cfg.command in ("analyze", "quartic"):
        sg = rep["subgroup"]
        return (f"{rep.get('label') or cfg.command}: sl_index {sg['sl_index']}, "
                f"psl_index {sg['psl_index']}, -I in group {sg['contains_minus_I']}")
    if cfg.command == "twist":
        return f"twist: {rep['classification']}; checks {rep['checks']}"
    if cfg.command == "kodaira":
        types = ", ".join(p["type"] for p in rep["places"])
        return f"kodaira: {types}; sum_e {rep.get('sum_e')}, bound {rep.get('bound')}"
    if cfg.command == "hyperell":
        return (f"hyperell g={rep['g']}: order {rep['group_order']}, index {rep['index']}, "
                f"bound {rep['bound']}")
    return ""


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        if cfg.command == "selftest":
            rep = selftest(cfg, err if cfg.output is None else out)
            status = 0 if rep["passed"] else 1
        else:
            if cfg.input is None:
                raise ParseError("--input is required for this command")
            rep = compute(cfg, load_family_file(cfg.input))
            status = 0
            if cfg.verbosity:
                print(_summary(cfg, rep), file=err)
    except MonodromyError as exc:
        print(dump(exc.to_json()), end="", file=err)
        return exc.exit_status
    text = dump(rep)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    elif cfg.command != "selftest" or cfg.verbosity == 0:
        out.write(text)
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="monodromy",
                                 description="Monodromy groups of families of curves.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", "-i")
    ap.add_argument("--output", "-o")
    ap.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    ap.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--quiet", "-q", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.input, args.output, args.precision,
                        args.max_cosets, args.seed, 0 if args.quiet else 1, args.workers)
    except ValueError as exc:
        err = ParseError(str(exc))
        print(dump(err.to_json()), end="", file=sys.stderr)
        return err.exit_status
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

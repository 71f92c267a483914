"""Command-line interface: ``vknot <command> ...``.

Exit codes: 0 success, 1 failed check or counterexample, 2 usage or parse
error.  ``--json`` switches every command to structured output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import CorpusError
from .diagram import (
    DiagramError,
    SignedGaussDiagram,
    SingularVirtualString,
    glue,
    kink_glued,
    parse_knot,
    parse_string,
    read_lines,
    serialize_link,
    serialize_string,
    shadow,
    smooth,
)
from .invariants import (
    compare_sums,
    fingerprint_hex,
    intersection_index,
    pt,
    pt_mod2,
    value_of,
)
from .matrix import (
    MatrixError,
    fingerprint_flat,
    fingerprint_singular,
    from_singular_string,
    from_string,
    reduce_primitive,
    reduce_primitive_sbm,
)
from .moves import normalize

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: list
    seed: int
    results: list = field(default_factory=list)
    ok: bool = True
    elapsed: float = 0.0

    def to_json(self):
        return {
            "command": self.command,
            "inputs": self.inputs,
            "seed": self.seed,
            "ok": self.ok,
            "results": self.results,
            "elapsed": round(self.elapsed, 6),
        }


# --- input helpers ------------------------------------------------------------


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _diagrams(path, parse):
    return [(lineno, parse(body, lineno)) for lineno, body in read_lines(_read(path))]


def _source(args, path):
    """Text of an input given as a file path, or literally with ``--text``."""
    return path if getattr(args, "text", False) else _read(path)


def _one(args, path, parse):
    for lineno, body in read_lines(_source(args, path)):
        return parse(body, lineno)
    raise UsageError(f"no diagram in {path}")


def _matrix_json(m):
    return {"labels": [str(x) for x in m.labels], "rows": m.b.tolist(), "size": m.size}


def _matrix_text(m):
    return m.to_text()


# --- commands --------------------------------------------------------------------


def cmd_pt(args, report):
    for lineno, k in _diagrams(args.file, parse_knot):
        value = pt_mod2(k) if args.mod2 else pt(k)
        report.results.append({"line": lineno, "polynomial": value.to_json()})
        yield str(value)


def cmd_sbm(args, report):
    for lineno, s in _diagrams(args.file, parse_string):
        if not isinstance(s, SingularVirtualString):
            raise UsageError(f"line {lineno}: no preferred arrow (mark one with '*')")
        m = from_singular_string(s)
        entry = {"line": lineno, "matrix": _matrix_json(m)}
        out = [_matrix_text(m)]
        if args.reduce:
            p = reduce_primitive_sbm(m)
            entry["primitive"] = _matrix_json(p)
            out += ["# primitive", _matrix_text(p)]
        report.results.append(entry)
        yield "\n".join(out) + "\n"


def cmd_basedmatrix(args, report):
    for lineno, s in _diagrams(args.file, parse_string):
        m = from_string(s)
        entry = {"line": lineno, "matrix": _matrix_json(m)}
        out = [_matrix_text(m)]
        if args.reduce:
            p = reduce_primitive(m)
            entry["primitive"] = _matrix_json(p)
            out += [f"# primitive, #(G) = {p.size}", _matrix_text(p)]
        report.results.append(entry)
        yield "\n".join(out) + "\n"


def _arrow_id(raw):
    return int(raw) if raw.isdigit() else raw


def cmd_smooth(args, report):
    arrow = _arrow_id(args.arrow)
    for lineno, s in _diagrams(args.file, parse_string):
        if isinstance(s, SingularVirtualString):
            s = s.base
        try:
            link = smooth(s, arrow)
        except DiagramError as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
        if args.normalize:
            link = normalize(link)
        i = intersection_index(link)
        report.results.append({"line": lineno, "link": serialize_link(link), "index": i})
        yield f"{serialize_link(link)}    # index {i}"


def cmd_glue(args, report):
    if (args.crossing is None) == (not args.kink):
        raise UsageError("give exactly one of --crossing or --kink")
    for lineno, k in _diagrams(args.file, parse_knot):
        try:
            s = kink_glued(k) if args.kink else glue(k, _arrow_id(args.crossing))
        except DiagramError as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
        report.results.append({"line": lineno, "string": serialize_string(s)})
        yield serialize_string(s)


_LEVELS = ("pt", "mod2", "S", "G", "flat", "singular")


def _as_string(d):
    return shadow(d) if isinstance(d, SignedGaussDiagram) else d


def _compare_values(level, a, b):
    """(verdict, evidence) for two parsed inputs at ``level``."""
    if level in ("pt", "mod2", "S", "G"):
        for d in (a, b):
            if not isinstance(d, SignedGaussDiagram):
                raise UsageError(f"level {level} needs knot diagrams")
        va, vb = value_of(level, a), value_of(level, b)
        if level in ("pt", "mod2"):
            verdict = compare_sums(va, vb)
            return verdict, {"a": str(va), "b": str(vb)}
        diff = va - vb
        return compare_sums(va, vb), {"a": va.to_json(), "b": vb.to_json(), "a-b": diff.to_json()}
    if level == "flat":
        sa, sb = _as_string(a), _as_string(b)
        if isinstance(sa, SingularVirtualString) or isinstance(sb, SingularVirtualString):
            raise UsageError("level flat needs strings without a preferred arrow")
        fa, fb = fingerprint_flat(sa), fingerprint_flat(sb)
    else:
        if not (isinstance(a, SingularVirtualString) and isinstance(b, SingularVirtualString)):
            raise UsageError("level singular needs singular strings")
        fa, fb = fingerprint_singular(a), fingerprint_singular(b)
    verdict = compare_sums(fa, fb)
    return verdict, {"a": fingerprint_hex(fa), "b": fingerprint_hex(fb)}


def _parse_any(body, lineno):
    first = body.split()[0] if body.split() else ""
    if first[:1] in ("O", "U", "D"):
        return parse_knot(body, lineno)
    return parse_string(body, lineno)


def cmd_compare(args, report):
    a = _one(args, args.a, _parse_any)
    b = _one(args, args.b, _parse_any)
    verdict, evidence = _compare_values(args.level, a, b)
    report.results.append({"level": args.level, "verdict": str(verdict), "evidence": evidence})
    if args.expect and args.expect.lower() != str(verdict).lower():
        report.ok = False
    yield str(verdict)
    if args.level in ("S", "G") and not args.json:
        for side in ("a", "b"):
            va = value_of(args.level, a if side == "a" else b)
            yield f"# {args.level}({side}):"
            yield str(va)


def cmd_fuzz(args, report):
    from .fuzz import SUITES, run_suite

    if args.trials < 0 or args.moves < 0:
        raise UsageError("--trials and --moves must be non-negative")
    suites = SUITES if args.suite == "all" else (args.suite,)
    for suite in suites:
        r = run_suite(suite, args.trials, args.moves, report.seed)
        report.results.append(r.to_json())
        if not r.ok:
            report.ok = False
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            for n, cx in enumerate(r.counterexamples):
                path = out / f"{suite}-seed{report.seed}-{n}.txt"
                lines = [f"# suite {suite} seed {report.seed} trial {cx['trial']}"]
                lines += [v for k, v in cx.items() if k in ("start", "end", "diagram")]
                path.write_text("\n".join(lines) + "\n")
        status = "pass" if r.ok else f"FAIL ({len(r.counterexamples)} counterexamples)"
        yield (
            f"{suite}: {status}; {r.trials} trials, {r.applications} moves applied, "
            f"{r.checks} checks"
        )


def cmd_demo(args, report):
    from .example import run_checks

    try:
        checks = run_checks(args.corpus)
    except (CorpusError, DiagramError, MatrixError) as exc:
        raise UsageError(str(exc)) from None
    for c in checks:
        report.results.append(c.to_json())
        if not c.passed:
            report.ok = False
        mark = "ok  " if c.passed else "FAIL"
        yield f"{mark} {c.name}" + (f"  ({c.detail})" if c.detail else "")


COMMANDS = {
    "pt": cmd_pt,
    "sbm": cmd_sbm,
    "basedmatrix": cmd_basedmatrix,
    "smooth": cmd_smooth,
    "glue": cmd_glue,
    "compare": cmd_compare,
    "fuzz": cmd_fuzz,
    "demo": cmd_demo,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="structured output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="master random seed (default 0)")

    parser = argparse.ArgumentParser(
        prog="vknot", description="Degree-one invariants of virtual knots.", parents=[common]
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("pt", parents=[common], help="p_t polynomial of each knot in a file")
    p.add_argument("file", help="Gauss codes, one per line ('-' for stdin)")
    p.add_argument("--mod2", action="store_true", help="reduce coefficients mod 2")

    p = sub.add_parser("sbm", parents=[common], help="singular based matrix of each string")
    p.add_argument("file")
    p.add_argument("--reduce", action="store_true", help="also print the primitive SBM")

    p = sub.add_parser("basedmatrix", parents=[common], help="based matrix of each string")
    p.add_argument("file")
    p.add_argument("--reduce", action="store_true", help="also print the primitive matrix")

    p = sub.add_parser("smooth", parents=[common], help="smooth each string at an arrow")
    p.add_argument("file")
    p.add_argument("--arrow", required=True)
    p.add_argument("--normalize", action="store_true", help="cancel kinks and bigons")

    p = sub.add_parser("glue", parents=[common], help="glue a crossing into a double-point")
    p.add_argument("file")
    p.add_argument("--crossing")
    p.add_argument("--kink", action="store_true", help="glue a fresh kink at the basepoint")

    p = sub.add_parser("compare", parents=[common], help="compare two diagrams")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--level", choices=_LEVELS, default="G")
    p.add_argument("--text", action="store_true", help="A and B are diagrams, not file paths")
    p.add_argument("--expect", choices=("distinct", "equalatfingerprint"),
                   help="exit 1 unless the verdict matches")

    p = sub.add_parser("fuzz", parents=[common], help="run an invariance suite")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--moves", type=int, default=30)
    p.add_argument("--suite", choices=("pt", "mod2", "flat", "singular", "degree1", "all"),
                   default="pt")
    p.add_argument("--out", default="fuzz-counterexamples",
                   help="directory for replayable counterexamples")

    p = sub.add_parser("demo", parents=[common], help="recompute the K1/K2 worked example")
    p.add_argument("--corpus", help="directory with replacement corpus files")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    inputs = [v for k in ("file", "a", "b", "corpus") if (v := getattr(args, k, None))]
    report = RunReport(args.command, inputs, args.seed)
    start = time.perf_counter()
    lines = []
    try:
        for line in COMMANDS[args.command](args, report):
            lines.append(line)
            if not args.json:
                print(line, flush=True)
    except (UsageError, DiagramError, MatrixError) as exc:
        print(f"vknot {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK if report.ok else EXIT_CHECK
    report.elapsed = time.perf_counter() - start
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK if report.ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())

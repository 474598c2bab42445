"""Command-line front end.

Exit codes: 0 success/Yes/Certified, 1 No/Refuted, 2 Unknown/consistent so
far, 64 usage errors, 65 bad input data.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence

from . import serialize as ser
from .classify import PROPERTIES, check_equivalence, classify
from .complexes import InvalidStep, validate
from .exactgeom import GeometryError
from .mcnfun import (MalformedTerm, PLFunc, PreconditionFailed, dominance_witness, ideal_member,
                     term_to_plfunc)
from .regular import Verdict, canonical_realization, unit_cube, mark_validated, to_mesh, validate_geometric
from .sequences import (ConstantW, EffrosShen, InsufficientDigits, LexZ2, SimplicialWeights,
                        StellarSequence, constant_segment, default_realization, family_sequence, orbit)
from .zhomeo import Unknown

EXIT_OK, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA = 64, 65

VERDICT_EXIT = {Verdict.YES: EXIT_OK, Verdict.NO: EXIT_NO, Verdict.UNKNOWN: EXIT_UNKNOWN}
EQUIV_EXIT = {"certified": EXIT_OK, "refuted": EXIT_NO, "consistent": EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _cf_list(text: str):
    if text in ("golden", "silver"):
        return text
    try:
        digits = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated positive integers") from None
    if not digits or any(a < 1 for a in digits):
        raise argparse.ArgumentTypeError("digits must be positive integers")
    return digits


def build_parser() -> argparse.ArgumentParser:
    base = _Parser(add_help=False)
    base.add_argument("--depth", type=_nonneg, default=32)
    base.add_argument("--max-blowups", type=_nonneg, default=64)
    base.add_argument("--seed", type=int, default=0,
                      help="accepted for reproducibility; the core searches are deterministic")
    base.add_argument("--json", dest="format", action="store_const", const="json",
                      help="JSON output (the default)")
    common = _Parser(add_help=False, parents=[base])
    common.add_argument("--format", choices=("json", "text"), default="json")

    p = _Parser(prog="stellar", description="Stellar sequences of weighted simplicial complexes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check a complex, sequence or function file")
    s.add_argument("file")

    s = sub.add_parser("realize", parents=[common], help="canonical realization of a weighted complex")
    s.add_argument("file")
    s.add_argument("--order", choices=("lex", "given"), default="lex")

    s = sub.add_parser("orbit", parents=[common], help="orbit supports of a sequence")
    s.add_argument("file")

    s = sub.add_parser("classify", parents=[common], help="property report for a sequence")
    s.add_argument("file")
    s.add_argument("--property", choices=PROPERTIES,
                   help="set the exit code from this property's verdict")

    s = sub.add_parser("equiv", parents=[common], help="isomorphism check between two sequences")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--pivot", type=_nonneg, help="fix the pivot index in the first sequence")

    s = sub.add_parser("member", parents=[common], help="ideal membership of a function")
    s.add_argument("--func", required=True)
    s.add_argument("--seq", required=True)

    s = sub.add_parser("dominate", parents=[common], help="least m with m*g >= f")
    s.add_argument("--f", required=True, dest="f")
    s.add_argument("--g", required=True, dest="g")

    s = sub.add_parser("family", parents=[common], help="write a built-in family as a sequence file")
    s.add_argument("name", choices=ser.FAMILY_NAMES[:3] + ("constant-segment",))
    s.add_argument("--cf", type=_cf_list, help="digits a1,a2,... or golden/silver (effros-shen)")
    s.add_argument("--n", type=int, help="weight of the two initial vertices (lex-z2)")
    s.add_argument("--weights", help="comma-separated weights (simplicial)")
    s.add_argument("--steps", type=_nonneg, default=0,
                   help="check that this many steps can be generated")
    s.add_argument("--out", required=True)

    s = sub.add_parser("export", parents=[base], help="export a complex as JSON or mesh text")
    s.add_argument("file")
    s.add_argument("--format", dest="export_format", choices=("json", "mesh"), default="json")
    s.add_argument("--index", type=_nonneg, help="orbit index when the file holds a sequence")
    return p


# --- helpers -------------------------------------------------------------------


def _text(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out.extend(_text(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {v}")
        return out
    if isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            return [pad + ", ".join(str(x) for x in obj)]
        out = []
        for x in obj:
            out.extend(_text(x, indent))
            out.append(pad + "-")
        return out[:-1]
    return [f"{pad}{obj}"]


def _emit(args, payload: Any, out) -> None:
    if args.format == "text":
        out.write("\n".join(_text(ser.to_jsonable(payload))) + "\n")
    else:
        out.write(ser.dumps(payload) + "\n")


def _kind(d: Any) -> str:
    if isinstance(d, dict):
        if "provider" in d:
            return "sequence"
        if "maximal_faces" in d:
            return "weighted"
        if "maximal_simplexes" in d:
            return "geometric"
        if "term" in d or "carrier" in d:
            return "function"
    raise ser.DataError("$", "cannot tell what this file holds (expected a sequence, complex or function)")


def _load_sequence(path: str):
    d = ser.load_json(path)
    if _kind(d) == "weighted":
        return StellarSequence(ser.weighted_from_json(d), ConstantW()), None
    return ser.sequence_from_json(d), ser.realization_order(d)


def _realization(seq, order):
    if order is not None:
        return canonical_realization(seq.initial, order)
    return default_realization(seq)


def _load_function(path: str, dim: int | None, max_blowups: int) -> PLFunc:
    f, term_dim = ser.plfunc_from_json(ser.load_json(path))
    if isinstance(f, PLFunc):
        return f
    ambient = unit_cube(term_dim or dim) if (term_dim or dim) else None
    res = term_to_plfunc(f, ambient, max_blowups)
    if isinstance(res, Unknown):
        raise _UnknownResult(res.reason)
    return res


class _UnknownResult(Exception):
    pass


# --- commands ----------------------------------------------------------------


def cmd_validate(args, out) -> int:
    d = ser.load_json(args.file)
    kind = _kind(d)
    report: dict = {"kind": kind}
    if kind == "weighted":
        problems = validate(ser.weighted_from_json(d))
        report["violations"] = [{"kind": v.kind, "witness": v.witness, "message": v.message} for v in problems]
    elif kind == "geometric":
        cx = ser.complex_from_json(d)
        report["violations"] = [{"kind": "overlap", "witness": [list(o.first), list(o.second), o.witness],
                                 "message": "simplexes meet outside a common face"}
                                for o in validate_geometric(cx)]
    elif kind == "sequence":
        seq = ser.sequence_from_json(d)
        problems = validate(seq.initial)
        report["violations"] = [{"kind": v.kind, "witness": v.witness, "message": v.message} for v in problems]
        report["tail_start"] = seq.tail_start()
    else:
        _load_function(args.file, None, args.max_blowups)
        report["violations"] = []
    report["valid"] = not report["violations"]
    _emit(args, report, out)
    return EXIT_OK if report["valid"] else EXIT_DATA


def cmd_realize(args, out) -> int:
    d = ser.load_json(args.file)
    if _kind(d) == "sequence":
        seq = ser.sequence_from_json(d)
        w = seq.initial
    else:
        w = ser.weighted_from_json(d)
    order = list(w.vertices) if args.order == "given" else None
    r = canonical_realization(w, order)
    _emit(args, {"complex": r.geometric, "vertex_map": dict(sorted(r.vertex_map.items()))}, out)
    return EXIT_OK


def cmd_orbit(args, out) -> int:
    seq, order = _load_sequence(args.file)
    o = orbit(seq, _realization(seq, order), 0)
    stopped = None
    try:
        o.extend(args.depth)
    except InvalidStep as exc:
        if not isinstance(exc.__cause__, InsufficientDigits):
            raise
        stopped = str(exc)
    payload = {
        "depth": len(o.realizations) - 1,
        "tail": {"eventually_constant": o.tail_start is not None, "constant_from": o.tail_start},
        "supports": [r.geometric for r in o.realizations],
        "skeletons": [r.weighted for r in o.realizations],
    }
    if stopped:
        payload["stopped"] = stopped
    _emit(args, payload, out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    seq, order = _load_sequence(args.file)
    rep = classify(seq, args.depth, realization=_realization(seq, order), max_blowups=args.max_blowups)
    payload = {"depth": rep.depth, "properties": {
        k: {"status": v.status, "certificate_kind": v.certificate_kind, "witness": v.witness}
        for k, v in rep.results.items()}}
    _emit(args, payload, out)
    return VERDICT_EXIT[rep.status(args.property)] if args.property else EXIT_OK


def cmd_equiv(args, out) -> int:
    a, oa = _load_sequence(args.a)
    b, ob = _load_sequence(args.b)
    pivot = (args.pivot,) if args.pivot is not None else None
    v = check_equivalence(a, b, pivot, args.depth, rA=_realization(a, oa), rB=_realization(b, ob),
                          max_blowups=args.max_blowups)
    payload = {"status": v.status, "depth": v.depth, "witness": v.witness,
               "pivot": None if v.pivot is None else {"a_index": v.pivot[0], "b_index": v.pivot[1],
                                                      "isomorphism": dict(sorted(v.pivot[2].items()))},
               "transport": v.transport}
    _emit(args, payload, out)
    return EQUIV_EXIT[v.status]


def cmd_member(args, out) -> int:
    seq, order = _load_sequence(args.seq)
    r0 = _realization(seq, order)
    f = _load_function(args.func, r0.geometric.ambient_dim, args.max_blowups)
    o = orbit(seq, r0, 0)
    try:
        o.extend(args.depth)
    except InvalidStep as exc:
        if not isinstance(exc.__cause__, InsufficientDigits):
            raise
    supports = [r.geometric for r in o.realizations]
    tail = seq.tail_start()
    declared = tail is not None and tail < len(supports)
    if declared:
        supports = supports[:tail + 1]
    m = ideal_member(f, supports, args.depth, eventually_constant=declared, max_blowups=args.max_blowups)
    _emit(args, {"status": m.status, "index": m.index, "witness": m.witness, "value": m.value}, out)
    return VERDICT_EXIT[m.status]


def cmd_dominate(args, out) -> int:
    f = _load_function(args.f, None, args.max_blowups)
    g = _load_function(args.g, f.carrier.ambient_dim, args.max_blowups)
    m = dominance_witness(f, g, args.max_blowups)
    if isinstance(m, Unknown):
        _emit(args, {"status": Verdict.UNKNOWN, "reason": m.reason}, out)
        return EXIT_UNKNOWN
    _emit(args, {"status": Verdict.YES, "m": m}, out)
    return EXIT_OK


def cmd_family(args, out) -> int:
    if args.name == "effros-shen":
        if args.cf is None:
            raise UsageError("family effros-shen needs --cf")
        seq = family_sequence(EffrosShen(args.cf))
    elif args.name == "lex-z2":
        if args.n is None or args.n < 1:
            raise UsageError("family lex-z2 needs --n with a positive integer")
        seq = family_sequence(LexZ2(args.n))
    elif args.name == "simplicial":
        try:
            ws = [int(x) for x in (args.weights or "").split(",") if x.strip()]
            seq = family_sequence(SimplicialWeights(*ws))
        except ValueError as exc:
            raise UsageError(f"family simplicial needs --weights: {exc}") from None
    else:
        seq = constant_segment()
    # make sure the requested prefix can actually be generated
    o = orbit(seq, default_realization(seq), 0)
    try:
        o.extend(args.steps)
    except InvalidStep as exc:
        raise ser.DataError("--steps", str(exc)) from exc
    d = ser.sequence_to_json(seq)
    if args.name == "constant-segment":
        d["provider"] = {"kind": "family", "name": "constant-segment"}
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(ser.dumps(d) + "\n")
    _emit(args, {"written": args.out, "steps_checked": args.steps,
                 "support": o.realizations[-1].geometric}, out)
    return EXIT_OK


def cmd_export(args, out) -> int:
    d = ser.load_json(args.file)
    kind = _kind(d)
    if kind == "geometric":
        cx = ser.complex_from_json(d)
    elif kind in ("sequence", "weighted"):
        seq, order = _load_sequence(args.file)
        idx = args.index if args.index is not None else (seq.tail_start() or 0)
        cx = orbit(seq, _realization(seq, order), idx).complex(idx)
    else:
        raise ser.DataError("$", "export needs a complex or a sequence")
    if args.export_format == "mesh":
        out.write(to_mesh(mark_validated(cx)))
        return EXIT_OK
    out.write(ser.dumps(cx) + "\n")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate, "realize": cmd_realize, "orbit": cmd_orbit, "classify": cmd_classify,
    "equiv": cmd_equiv, "member": cmd_member, "dominate": cmd_dominate, "family": cmd_family,
    "export": cmd_export,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except _UnknownResult as exc:
        err.write(f"unknown: {exc}\n")
        return EXIT_UNKNOWN
    except PreconditionFailed as exc:
        w = "" if exc.witness is None else f" (witness {ser.point_to_json(exc.witness)})"
        err.write(f"precondition failed: {exc}{w}\n")
        return EXIT_DATA
    except (ser.DataError, InvalidStep, GeometryError, MalformedTerm, ValueError) as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(run())

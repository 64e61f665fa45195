"""``corkcalc`` command line.

Exit codes: 0 success, 1 invalid input, 2 negative mathematical result,
3 undecided (enriched tail too short or critical endpoint).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .core import InvolutiveComplex, StructuralError, validate
from .filt import fmt_filt, parse_filt
from .io import ComplexFormatError, complex_to_dict, dumps, load_complex, map_to_dict, save_complex

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_UNDECIDED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _filt_arg(text: str):
    try:
        return parse_filt(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _emit(args, text: str, data) -> None:
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_validate(args) -> int:
    c = load_complex(args.file)
    rep = validate(c)
    data = {
        "ok": rep.ok,
        "checks": [{"name": ch.name, "ok": ch.ok, "detail": ch.detail} for ch in rep.checks],
        "witness_level": None if rep.witness_level is None else fmt_filt(rep.witness_level),
        "notes": list(rep.notes),
    }
    _emit(args, "\n".join(rep.lines()), data)
    return EXIT_OK if rep.ok else EXIT_INPUT


def cmd_rs(args) -> int:
    from .rs import rs_function, rs_value

    c = load_complex(args.file)
    if args.involutive and not isinstance(c, InvolutiveComplex):
        raise UsageError("--involutive needs a complex with a tau field")
    if args.function or args.tsv:
        f = rs_function(c, equivariant=args.involutive)
        tsv = f.to_tsv().rstrip("\n")
        if args.tsv:
            Path(args.tsv).write_text(tsv + "\n", encoding="utf-8")
        _emit(args, tsv, {"involutive": args.involutive, "pieces": f.to_rows()})
    else:
        v = rs_value(c, args.s, equivariant=args.involutive)
        _emit(args, fmt_filt(v), {"s": fmt_filt(args.s), "involutive": args.involutive, "value": fmt_filt(v)})
    return EXIT_OK


def cmd_localmap(args) -> int:
    from .morphism import find_local_map

    a, b = load_complex(args.source), load_complex(args.target)
    if args.equivariant and not (isinstance(a, InvolutiveComplex) and isinstance(b, InvolutiveComplex)):
        raise UsageError("--equivariant needs two involutive complexes")
    w = find_local_map(a, b, args.level, equivariant=args.equivariant)
    if w is None:
        print("none")
        return EXIT_NEGATIVE
    if args.output:
        Path(args.output).write_text(dumps(map_to_dict(w.f, w.h)) + "\n", encoding="utf-8")
    print("\n".join(w.describe()))
    return EXIT_OK


def cmd_tensor(args) -> int:
    from .algebra import tensor

    c = tensor(load_complex(args.a), load_complex(args.b))
    save_complex(c, args.output)
    print(f"wrote {args.output} ({len(c.generators)} generators)")
    return EXIT_OK


def cmd_dual(args) -> int:
    from .algebra import dualize

    c = dualize(load_complex(args.file))
    save_complex(c, args.output)
    print(f"wrote {args.output} ({len(c.generators)} generators)")
    return EXIT_OK


def cmd_csineq(args) -> int:
    from .algebra import check_connected_sum_inequality

    a, b = load_complex(args.a), load_complex(args.b)
    eq = isinstance(a, InvolutiveComplex) and isinstance(b, InvolutiveComplex)
    rep = check_connected_sum_inequality(a, b, args.s, args.s2, equivariant=eq)
    data = {
        "s": fmt_filt(rep.s),
        "s2": fmt_filt(rep.s2),
        "lhs": fmt_filt(rep.lhs),
        "r_a": fmt_filt(rep.r_a),
        "r_b": fmt_filt(rep.r_b),
        "bound": fmt_filt(rep.bound),
        "holds": rep.holds,
    }
    _emit(args, "\n".join(rep.lines()), data)
    return EXIT_OK if rep.holds else EXIT_NEGATIVE


def cmd_enriched_rs(args) -> int:
    from .enriched import EnrichedError, enriched_rs, load_manifest, validate_enriched

    e = load_manifest(args.manifest)
    rep = validate_enriched(e)
    if not rep.ok:
        print("\n".join(rep.problems), file=sys.stderr)
        return EXIT_INPUT
    try:
        v = enriched_rs(e, args.s)
    except EnrichedError as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    lines = [fmt_filt(v.value)]
    if v.critical:
        lines.append(f"critical: left {fmt_filt(v.left)}, right {'n/a' if v.right is None else fmt_filt(v.right)}")
        lines.extend(v.notes)
    data = {
        "s": fmt_filt(v.s),
        "value": fmt_filt(v.value),
        "critical": v.critical,
        "left": None if v.left is None else fmt_filt(v.left),
        "right": None if v.right is None else fmt_filt(v.right),
    }
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


def cmd_catalog(args) -> int:
    from .catalog import CATALOG, emit

    if args.action == "list":
        for name, entry in CATALOG.items():
            params = ", ".join(entry.params) or "-"
            print(f"{name}\t{entry.summary}\t{params}")
        return EXIT_OK
    if not args.name:
        raise UsageError("catalog emit needs a name")
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects k=v, got {item!r}")
        params[key] = value
    c = emit(args.name, params)
    text = dumps(complex_to_dict(c))
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import brute_theta_cycle
    from .rs import find_theta_cycle

    c = load_complex(args.file)
    if args.involutive and not isinstance(c, InvolutiveComplex):
        raise UsageError("--involutive needs a complex with a tau field")
    brute = brute_theta_cycle(c, args.r, args.s, args.involutive)
    solver = find_theta_cycle(c, args.r, args.s, args.involutive)
    agree = (brute is None) == (solver is None)
    cx = c.complex if isinstance(c, InvolutiveComplex) else c
    lines = [
        f"window ({fmt_filt(args.r)}, {fmt_filt(args.s)}], {'equivariant' if args.involutive else 'plain'}",
        f"enumeration: {'none' if brute is None else cx.format_chain(brute)}",
        f"solver: {'none' if solver is None else solver.describe(c)}",
        "agree" if agree else "DISAGREE",
    ]
    data = {"r": fmt_filt(args.r), "s": fmt_filt(args.s), "brute": brute is not None, "solver": solver is not None, "agree": agree}
    _emit(args, "\n".join(lines), data)
    return EXIT_OK if agree else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corkcalc", description="Filtered instanton-type complexes over GF(2)[y, 1/y].")
    p.add_argument("-v", "--verbose", action="store_true", help="log derivation steps to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a complex file")
    v.add_argument("file")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("rs", help="r_s value or step function")
    r.add_argument("file")
    r.add_argument("--involutive", action="store_true")
    r.add_argument("--s", type=_filt_arg, default=parse_filt(0))
    r.add_argument("--function", action="store_true")
    r.add_argument("--tsv", metavar="OUT")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_rs)

    m = sub.add_parser("localmap", help="search for a local map")
    m.add_argument("source")
    m.add_argument("target")
    m.add_argument("--level", type=_filt_arg, default=parse_filt(0))
    m.add_argument("--equivariant", action="store_true")
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_localmap)

    t = sub.add_parser("tensor", help="tensor product")
    t.add_argument("a")
    t.add_argument("b")
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_tensor)

    d = sub.add_parser("dual", help="dual complex")
    d.add_argument("file")
    d.add_argument("-o", "--output", required=True)
    d.set_defaults(func=cmd_dual)

    cs = sub.add_parser("csineq", help="connected-sum inequality")
    cs.add_argument("a")
    cs.add_argument("b")
    cs.add_argument("--s", type=_filt_arg, required=True)
    cs.add_argument("--s2", type=_filt_arg, required=True)
    cs.add_argument("--json", action="store_true")
    cs.set_defaults(func=cmd_csineq)

    e = sub.add_parser("enriched-rs", help="r_s of an enriched sequence")
    e.add_argument("manifest")
    e.add_argument("--s", type=_filt_arg, required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_enriched_rs)

    c = sub.add_parser("catalog", help="list or emit built-in complexes")
    c.add_argument("action", choices=("list", "emit"))
    c.add_argument("name", nargs="?")
    c.add_argument("--param", action="append", default=[], metavar="K=V")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_catalog)

    o = sub.add_parser("oracle", help="brute-force cross-check on a small window")
    o.add_argument("file")
    o.add_argument("--r", type=_filt_arg, required=True)
    o.add_argument("--s", type=_filt_arg, required=True)
    o.add_argument("--involutive", action="store_true")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_oracle)
    return p


VALUE_OPTIONS = ("--s", "--s2", "--r", "--level")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--s -1/4`` into ``--s=-1/4``; argparse reads ``-1/4`` as a flag otherwise."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ComplexFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (StructuralError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit status: 0 on success, 1 when the answer is a domain-level "no" or
failure, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .errors import (ConditionUndefined, DimensionMismatch, ExpDegError, MultipleLimits,
                     NoIntegralRoom, NoLimit, SchemaError, ValidationError)
from .fibres import build_fibre, delta_membership, fibres_isomorphic
from .limits import associated_pairs, audit_condition, stable_extensions, unique_limit
from .pairs import is_unbroken
from .smoothing import enumerate_slides, smoothing_targets
from .stability import get_condition
from .strata import strata_equivalent
from .tropical import check_unbroken_subdivision

OK, NO, BAD = 0, 1, 2


class InputError(Exception):
    pass


def _read(args):
    try:
        if args.input and args.input != "-":
            with open(args.input) as fh:
                return json.load(fh)
        return json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON input: {exc}") from exc


def _write(args, text: str) -> None:
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit(args, obj) -> None:
    _write(args, io.dumps(obj) + "\n")


def cmd_check_unbroken(args):
    obj = _read(args)
    if isinstance(obj, dict) and "A" in obj:
        p = obj
        io.validate(p, "pair")
        result = is_unbroken(p["A"], p["B"], p["n"])
    else:
        result = check_unbroken_subdivision(io.decode(obj, "subdivision"))
    _emit(args, {"unbroken": result})
    return OK if result else NO


def cmd_fibre(args):
    s = io.decode(_read(args), "stratum")
    f = build_fibre(s)
    out = io.encode(f)
    comps = {}
    for k in range(1, len(f.type1_levels) + 1):
        comps[f"D1({k})"] = _members(delta_membership(f, (1, k)))
    for j in range(1, len(f.type2_levels) + 1):
        comps[f"D2({j})"] = _members(delta_membership(f, (2, j)))
    _emit(args, {"fibre": out, "components": comps})
    return OK


def _members(ms):
    return sorted((m if isinstance(m, str) else list(m) for m in ms), key=str)


def cmd_iso(args):
    left, right = io.decode(_read(args), "stratum-pair")
    result = fibres_isomorphic(build_fibre(left), build_fibre(right))
    _emit(args, {"isomorphic": result})
    return OK if result else NO


def cmd_equiv(args):
    left, right = io.decode(_read(args), "stratum-pair")
    res = strata_equivalent(left, right)
    _emit(args, {"equivalent": res.equivalent, "chain": [c.to_json() for c in res.chain]})
    return OK if res else NO


def cmd_limits(args):
    cfg = io.decode(_read(args), "configuration")
    if args.filter:
        pairs = stable_extensions(cfg, args.filter, args.mode, args.max_n)
    else:
        pairs = associated_pairs(cfg, args.mode)
    _emit(args, {"configuration": cfg.to_json(), "mode": args.mode, "filter": args.filter,
                 "pairs": [p.to_json() for p in pairs]})
    return OK if pairs else NO


def _condition(name: str):
    if name.endswith(".json"):
        try:
            with open(name) as fh:
                return io.decode(json.load(fh), "condition")
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read condition: {exc}") from exc
    return get_condition(name)


def cmd_unique_limit(args):
    cfg = io.decode(_read(args), "configuration")
    cond = _condition(args.condition)
    try:
        pair = unique_limit(cfg, cond, args.filter or "lw", args.max_n)
    except MultipleLimits as exc:
        _emit(args, {"error": "multiple-limits", "message": str(exc),
                     "witnesses": [p.to_json() for p in exc.witnesses]})
        return NO
    except (NoLimit, ConditionUndefined) as exc:
        _emit(args, {"error": type(exc).__name__, "message": str(exc)})
        return NO
    _emit(args, pair.to_json())
    return OK


def cmd_audit(args):
    cond = _condition(args.condition)
    report = audit_condition(cond, args.max_h, args.max_m, args.filter or "lw",
                             args.workers, args.max_n)
    if args.format == "text":
        _write(args, report.to_text() + "\n")
    else:
        _emit(args, report.to_json())
    return OK if report.almost_proper and report.compatibility else NO


def cmd_smoothings(args):
    p = io.decode(_read(args), "smoothing-problem")
    try:
        res = smoothing_targets(p)
        slides = enumerate_slides(p)
    except NoIntegralRoom as exc:
        _emit(args, {"error": "no-integral-room", "message": str(exc)})
        return NO
    out = res.to_json()
    out["slides"] = [s.to_json() for s in slides]
    _emit(args, out)
    return OK


def cmd_render(args):
    obj = _read(args)
    if not (isinstance(obj, dict) and "object" in obj):
        obj = {"object": obj}
    target, support, base = io.decode(obj, "render")
    if args.dot:
        _write(args, io.render_dot(target))
    else:
        _write(args, io.render_svg(target, support, base))
    return OK


def cmd_run(args):
    m = io.decode(_read(args), "manifest")
    argv = [m.command]
    for key, val in sorted(m.options.items()):
        flag = "--" + key.replace("_", "-")
        if val is True:
            argv.append(flag)
        elif val is not False and val is not None:
            argv += [flag, str(val)]
    argv += ["--seed", str(m.seed)]
    if m.inputs:
        src = m.inputs[0]
        if isinstance(src, str):
            argv += ["--in", src]
        else:
            import tempfile
            with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
                json.dump(src, fh)
            argv += ["--in", fh.name]
    if args.out:
        argv += ["--out", args.out]
    return main(argv)


COMMANDS = {
    "check-unbroken": (cmd_check_unbroken, "test a pair or a subdivision for unbrokenness"),
    "fibre": (cmd_fibre, "build the expanded fibre over a stratum"),
    "iso": (cmd_iso, "structural isomorphism of the fibres over two strata"),
    "equiv": (cmd_equiv, "equivalence of two strata, with a witness chain"),
    "limits": (cmd_limits, "associated pairs or stable extensions of a configuration"),
    "unique-limit": (cmd_unique_limit, "the single limit a condition selects"),
    "audit": (cmd_audit, "almost-properness and compatibility audit of a condition"),
    "smoothings": (cmd_smoothings, "smoothing targets of a bubble"),
    "render": (cmd_render, "SVG (or DOT) drawing of a subdivision or fibre"),
    "run": (cmd_run, "execute a manifest file"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expdeg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--in", dest="input", help="input JSON file (default: stdin)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0, help="seed recorded for reproducibility")
        if name in ("limits", "unique-limit", "audit"):
            p.add_argument("--filter", choices=("lw", "sws"))
            p.add_argument("--max-n", type=int, default=None)
        if name == "limits":
            p.add_argument("--mode", choices=("minimal", "paired"), default="minimal")
        if name in ("unique-limit", "audit"):
            p.add_argument("--condition", default="ct-canonical",
                           help="built-in condition name or path to a condition JSON file")
        if name == "audit":
            p.add_argument("--max-h", type=int, default=4)
            p.add_argument("--max-m", type=int, default=3)
            p.add_argument("--workers", type=int, default=None,
                           help="worker processes (default: $EXPDEG_WORKERS or 1)")
            p.add_argument("--format", choices=("json", "text"), default="json")
        if name == "render":
            p.add_argument("--dot", action="store_true", help="emit the adjacency graph as DOT")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, SchemaError, ValidationError, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD
    except ExpDegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NO


if __name__ == "__main__":
    sys.exit(main())

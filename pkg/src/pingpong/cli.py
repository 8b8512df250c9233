"""Command-line interface.

Exit codes: 0 success, 1 malformed input, 2 hypothesis violation (the family
fails non-incidence, a search is exhausted, a trace fails, a rank target is
missed), 3 certificate integrity failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .certify import (certify, dump_certificate, load_family, recheck, search_h,
                      verify_free_up_to)
from .errors import Exhausted, PingPongError, WordSyntaxError
from .exact import Matrix
from .groups import (Cocharacter, Element, GroupSpec, default_cocharacter, element_to_json,
                     membership, random_torus_conjugate)
from .projective import ProjPointC
from .repspan import RankExperiment, span_rank
from .syntax import parse_word
from .words import FreeProductWord, decompose_basic, evaluate, normalize_word

DEFAULT_SEED = 42

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_INTEGRITY = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_json(path: str):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _group(text: str | None) -> GroupSpec:
    if text is None:
        raise InputError("--group is required")
    p = Path(text)
    try:
        if p.is_file():
            return GroupSpec.from_json(_read_json(text))
        return GroupSpec.parse(text)
    except (ValueError, KeyError) as exc:
        raise InputError(f"bad group {text!r}: {exc}")


def _element(spec: GroupSpec, obj, what: str) -> Element:
    try:
        m = Matrix.from_json(obj)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: {exc}")
    if m.n != spec.dim:
        raise InputError(f"{what}: expected a {spec.dim}x{spec.dim} matrix")
    ok, why = membership(spec, m)
    if not ok:
        raise InputError(f"{what} is not in {spec.name()}: {why}")
    return Element(spec, m)


def _gammas(spec: GroupSpec, source: str | None, seed: int) -> list[Element]:
    if source is None:
        raise InputError("--gammas is required")
    if source.startswith("torus:"):
        try:
            r = int(source.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad torus count in {source!r}")
        if r < 1:
            raise InputError("torus count must be >= 1")
        rng = random.Random(seed)
        out: list[Element] = []
        while len(out) < r:
            g, _, _ = random_torus_conjugate(spec, rng)
            if all(g != o for o in out):
                out.append(g)
        return out
    obj = _read_json(source)
    if isinstance(obj, dict):
        obj = obj.get("gammas")
    if not isinstance(obj, list) or not obj:
        raise InputError(f"{source}: expected a non-empty list of matrices")
    return [_element(spec, m, f"gamma_{k}") for k, m in enumerate(obj, 1)]


def _exponents(spec: GroupSpec, text: str | None) -> tuple[int, ...]:
    if text is None:
        return default_cocharacter(spec).exponents
    try:
        exps = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--exponents must be comma-separated integers, got {text!r}")
    try:
        Cocharacter(exps).validate(spec)
    except PingPongError as exc:
        raise InputError(str(exc))
    return exps


# commands ---------------------------------------------------------------------

def cmd_certify(args) -> int:
    spec = _group(args.group)
    gammas = _gammas(spec, args.gammas, args.seed)
    exps = _exponents(spec, args.exponents)
    if args.h in (None, "identity"):
        h = Element.identity(spec)
        res = certify(gammas, h, exps, args.max_len, args.jobs, seed=args.seed)
    elif args.h == "search":
        try:
            h, res = search_h(gammas, spec, args.budget, args.seed, exps)
        except Exhausted as exc:
            _write(_dump({"exhausted": str(exc), "attempts": exc.attempts}), args.out)
            return EXIT_VIOLATION
        if args.max_len > 0:
            res.verification = verify_free_up_to(res.family, exps, args.max_len, res.z, args.jobs)
    else:
        obj = _read_json(args.h)
        if isinstance(obj, dict):
            obj = obj.get("h")
        h = _element(spec, obj, "h")
        res = certify(gammas, h, exps, args.max_len, args.jobs, seed=args.seed)
    if not res.ok:
        _write(_dump({"violation": res.to_json()}), args.out)
        for line in res.describe():
            print(line, file=sys.stderr)
        return EXIT_VIOLATION
    _write(dump_certificate(res), args.out)
    if res.verification is not None and not res.verification.ok:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_search_h(args) -> int:
    args.h = "search"
    return cmd_certify(args)


def cmd_recheck(args) -> int:
    obj = _read_json(args.certificate)
    res = recheck(obj)
    for p in res.problems:
        print(p, file=sys.stderr)
    print("recheck: ok" if res.ok else f"recheck: FAILED ({len(res.problems)} problems)")
    return EXIT_OK if res.ok else EXIT_INTEGRITY


def cmd_verify(args) -> int:
    obj = _read_json(args.certificate)
    res = recheck(obj)
    if not res.ok:
        for p in res.problems:
            print(p, file=sys.stderr)
        return EXIT_INTEGRITY
    family, exps = load_family(obj)
    z = ProjPointC.from_json(obj["z"])
    summary = verify_free_up_to(family, exps, args.max_len, z, args.jobs)
    _write(_dump(summary.to_json()), args.out)
    return EXIT_OK if summary.ok else EXIT_VIOLATION


def _named_constants(spec: GroupSpec, path: str | None) -> dict[str, Element]:
    if path is None:
        return {}
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected an object mapping names to matrices")
    return {name: _element(spec, m, f"constant {name}") for name, m in obj.items()}


def _assignment(spec: GroupSpec, path: str | None) -> list[Element] | None:
    if path is None:
        return None
    obj = _read_json(path)
    if isinstance(obj, dict):
        try:
            idx = sorted(int(k.lstrip("x")) for k in obj)
        except ValueError:
            raise InputError(f"{path}: keys must be x1, x2, ...")
        if idx != list(range(1, len(idx) + 1)):
            raise InputError(f"{path}: variables must be x1..x{len(idx)}")
        obj = [obj.get(f"x{i}", obj.get(str(i))) for i in idx]
    return [_element(spec, m, f"x{k}") for k, m in enumerate(obj, 1)]


def cmd_word(args) -> int:
    spec = _group(args.group)
    constants = _named_constants(spec, args.constants)
    try:
        raw = parse_word(args.word, constants)
    except WordSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        print(f"  {args.word}\n  {' ' * (exc.position - 1)}^", file=sys.stderr)
        return EXIT_INPUT
    names = {e.matrix: n for n, e in constants.items()}
    names.update({e.inverse().matrix: f"{n}^-1" for n, e in constants.items()})
    w = FreeProductWord(raw)
    nw = normalize_word(w, spec)
    basic = decompose_basic(nw, spec)
    out = {
        "reduced": w.format(names),
        "normalized": nw.format(names),
        "basic_words": [
            {"coefficient": element_to_json(b.coefficient), "index": b.index,
             "sign": "+" if b.sign > 0 else "-"} for b in basic
        ],
    }
    assignment = _assignment(spec, args.assign)
    if assignment is not None:
        out["evaluation"] = element_to_json(evaluate(w, assignment, spec))
    _write(_dump(out), args.out)
    return EXIT_OK


def cmd_rank(args) -> int:
    spec = _group(args.group)
    if args.samples is not None and args.samples < 1:
        raise InputError("--samples must be >= 1")
    exp = RankExperiment(spec, args.samples, args.seed, args.covector)
    report = span_rank(exp)
    _write(_dump(report.to_json()), args.out)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pingpong", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, group=True):
        if group:
            sp.add_argument("--group", help='e.g. SL3, SO5, G2 or {"family":"SL","n":3}')
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--jobs", type=int, default=1)

    for name, fn in (("certify", cmd_certify), ("search-h", cmd_search_h)):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--gammas", help="JSON file with matrices, or torus:R for R seeded torus conjugates")
        if name == "certify":
            sp.add_argument("--h", help="JSON file, 'identity' (default) or 'search'")
        sp.add_argument("--exponents", help="cocharacter exponents a,b,...")
        sp.add_argument("--max-len", type=int, default=0)
        sp.add_argument("--budget", type=int, default=50)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("verify")
    common(sp, group=False)
    sp.add_argument("certificate")
    sp.add_argument("--max-len", type=int, default=6)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("recheck")
    sp.add_argument("certificate")
    sp.set_defaults(func=cmd_recheck)

    sp = sub.add_parser("word")
    common(sp)
    sp.add_argument("--word", required=True)
    sp.add_argument("--constants", help="JSON object mapping constant names to matrices")
    sp.add_argument("--assign", help="JSON object {x1: matrix, ...} or list of matrices")
    sp.set_defaults(func=cmd_word)

    sp = sub.add_parser("rank")
    common(sp)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--covector", choices=("vstar", "wstar"), default="vstar")
    sp.set_defaults(func=cmd_rank)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if getattr(args, "max_len", 0) is not None and getattr(args, "max_len", 0) < 0:
        print("error: --max-len must be >= 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PingPongError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

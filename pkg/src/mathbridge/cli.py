"""Command-line front end: ``mathbridge translate|desugar|check|eval``.

Exit codes: 0 success, 2 parse error, 3 translation or printing error,
4 extension error, 5 sort error, 6 oracle error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import ast, extensions, omxml, oracle, popcorn, smtlib, sorts, translate
from .ast import Term
from .errors import (
    ExtensionError, InvalidModel, MathBridgeError, OracleError, ParseError, PrintError,
    SortError, TranslationError,
)

FORMATS = ("omxml", "popcorn", "smt2")

EXIT_CODES = [
    (ParseError, 2),
    (TranslationError, 3),
    (PrintError, 3),
    (ExtensionError, 4),
    (SortError, 5),
    (OracleError, 6),
    (InvalidModel, 6),
]


def exit_code(exc: MathBridgeError) -> int:
    for cls, code in EXIT_CODES:
        if isinstance(exc, cls):
            return code
    return 1


def detect_format(path: str) -> str:
    name = path.lower()
    if name.endswith(".om.xml") or name.endswith(".xml") or name.endswith(".om"):
        return "omxml"
    if name.endswith(".pop") or name.endswith(".popcorn"):
        return "popcorn"
    if name.endswith(".smt2") or name.endswith(".smt"):
        return "smt2"
    raise ParseError(f"cannot tell the format of {path}; pass --from")


class Input:
    """A parsed input file: an OpenMath term, an SMT-LIB term or an SMT-LIB script."""

    def __init__(self, fmt: str, term: Term | None = None, script: smtlib.Script | None = None,
                 doc: omxml.OmDocument | None = None):
        self.fmt = fmt
        self.term = term
        self.script = script
        self.doc = doc

    @property
    def is_om(self) -> bool:
        return self.fmt in ("omxml", "popcorn")


def _popcorn_cfg(args) -> popcorn.PopcornConfig:
    return popcorn.QUALIFIED if getattr(args, "qualified", False) else popcorn.SUGARED


def read_input(path: str, fmt: str | None, args) -> Input:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    fmt = fmt or detect_format(path)
    if fmt == "omxml":
        doc = omxml.parse_om_xml(text)
        return Input(fmt, doc.root, doc=doc)
    if fmt == "popcorn":
        return Input(fmt, popcorn.parse_popcorn(text, _popcorn_cfg(args)))
    if smtlib.looks_like_script(text):
        return Input(fmt, script=smtlib.parse_script(text))
    return Input(fmt, smtlib.parse_term(text))


def symbol_map(args) -> translate.SymbolMap:
    base = translate.SymbolMap.default(times=args.times)
    path = args.map or os.environ.get("MATHBRIDGE_MAP")
    if path:
        return translate.load_symbol_map(Path(path).read_text(encoding="utf-8"), base)
    return base


def _sort_decls(items) -> dict[str, ast.Sort]:
    out = {}
    for item in items or ():
        name, eq, sort = item.partition("=")
        if not eq or not name or not sort:
            raise ParseError(f"--declare expects NAME=SORT, got {item!r}")
        out[name.strip()] = ast.Sort(sort.strip())
    return out


def signature_table(args, script: smtlib.Script | None = None) -> sorts.SignatureTable:
    table = sorts.SignatureTable.standard()
    if getattr(args, "profile", None):
        table.profile = sorts.load_profile(Path(args.profile).read_text(encoding="utf-8"))
    for p in getattr(args, "sts", None) or ():
        cd = Path(p).name.split(".")[0]
        table.add(sorts.load_sts(Path(p).read_text(encoding="utf-8"), cd))
    table.var_sorts.update(_sort_decls(getattr(args, "declare", None)))
    if script is not None:
        table.declare(script)
    return table


def strategy(args) -> extensions.DesugarStrategy:
    return extensions.DesugarStrategy(
        extensions.ExistsUnique(args.exists_unique), extensions.MaxForm(args.max_form))


def render_term(t: Term, fmt: str, args) -> str:
    if fmt == "omxml":
        return omxml.print_om_xml(t)
    if fmt == "popcorn":
        return popcorn.print_popcorn(t, _popcorn_cfg(args)) + "\n"
    return smtlib.print_smt(t) + "\n"


# -- subcommands -----------------------------------------------------------


def cmd_translate(args, inp: Input) -> str:
    to = args.to or ("smt2" if inp.is_om else "omxml")
    m = symbol_map(args)
    if inp.is_om:
        if to == "smt2":
            table = signature_table(args)
            return render_term(translate.om_to_smt(inp.term, m, table), to, args)
        if to == "omxml" and inp.doc is not None:
            return omxml.print_om_xml(inp.doc)
        return render_term(inp.term, to, args)
    if inp.script is not None:
        if to == "smt2":
            return smtlib.print_smt(inp.script)
        return "".join(render_term(t, to, args) for t in translate.om_script_terms(inp.script, m))
    if to == "smt2":
        return render_term(inp.term, to, args)
    return render_term(translate.smt_to_om(inp.term, m), to, args)


def cmd_desugar(args, inp: Input) -> str:
    if inp.script is not None:
        return smtlib.print_smt(inp.script)
    t = inp.term
    if not inp.is_om:
        t = translate.smt_to_om(t, symbol_map(args))
    if isinstance(t, ast.Bind) and t.binder == ast.ARGMAXONE:
        goal, cons = extensions.argmaxone_goal(t)
        return smtlib.print_smt(extensions.lower_argmaxone_to_script(goal, cons))
    if args.lift_max:
        lowered = extensions.resugar_max(t, strategy(args))
    else:
        lowered = extensions.desugar(t, strategy(args))
    to = args.to or inp.fmt
    if to == "smt2":
        lowered = translate.om_to_smt(lowered, symbol_map(args), signature_table(args))
    return render_term(lowered, to, args)


def cmd_check(args, inp: Input) -> str:
    if inp.script is not None:
        table = signature_table(args, inp.script)
        out = []
        for c in inp.script.commands:
            if isinstance(c, smtlib.Assert):
                s = sorts.check_sorts(c.term, table)
                if s != ast.BOOL:
                    raise sorts.SortMismatch(f"assertion has sort {s}, expected Bool", (), ast.BOOL, s)
                out.append(str(s))
        return "".join(line + "\n" for line in out)
    return str(sorts.check_sorts(inp.term, signature_table(args))) + "\n"


def cmd_eval(args, inp: Input) -> str:
    interp = oracle.Interpretation()
    if args.interp:
        interp = oracle.load_interpretation(Path(args.interp).read_text(encoding="utf-8"))
    if inp.script is not None:
        return smtlib.print_smt(oracle.eval_script(inp.script, interp))
    t = inp.term
    if inp.is_om:
        t = extensions.desugar(t, strategy(args), keep_argmaxone=True)
    return oracle.format_value(oracle.eval_term(t, interp)) + "\n"


COMMANDS = {"translate": cmd_translate, "desugar": cmd_desugar, "check": cmd_check, "eval": cmd_eval}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mathbridge", description="OpenMath / SMT-LIB bridge")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="input file, or - for stdin")
    common.add_argument("--from", dest="source", choices=FORMATS, help="input format (default: by extension)")
    common.add_argument("--to", choices=FORMATS, help="output format")
    common.add_argument("-o", "--output", help="write output here instead of stdout")
    common.add_argument("--qualified", action="store_true", help="POPCORN without infix sugar")
    common.add_argument("--map", help="symbol map file (default: $MATHBRIDGE_MAP or built in)")
    common.add_argument("--times", choices=("arith1", "arith2"), default="arith1",
                        help="which times symbol pairs with SMT-LIB *")
    common.add_argument("--sts", action="append", help="STS signature file; CD taken from the file name")
    common.add_argument("--profile", help="theory profile file")
    common.add_argument("--declare", action="append", metavar="NAME=SORT", help="sort of a free variable")
    common.add_argument("--exists-unique", choices=("eq1", "eq2"), default="eq1",
                        help="eq1: alternation form, eq2: two-quantifier form")
    common.add_argument("--max-form", choices=("sf", "binder"), default="binder",
                        help="target form for --lift-max")
    common.add_argument("--lift-max", action="store_true",
                        help="desugar: rewrite max(map(f, S)) idioms into the --max-form construct instead")
    common.add_argument("--interp", help="interpretation file for eval")
    for name, help_text in [
        ("translate", "translate between OpenMath XML, POPCORN and SMT-LIB"),
        ("desugar", "lower extension constructs"),
        ("check", "sort-check a term or script"),
        ("eval", "evaluate with the brute-force oracle"),
    ]:
        sub.add_parser(name, parents=[common], help=help_text)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    filename = args.input
    try:
        inp = read_input(args.input, args.source, args)
        out = COMMANDS[args.command](args, inp)
    except MathBridgeError as exc:
        print(exc.render(filename), file=sys.stderr)
        return exit_code(exc)
    except OSError as exc:
        print(f"{filename}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

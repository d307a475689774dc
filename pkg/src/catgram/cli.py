"""Command-line front end: prove sequents, parse and interpret sentences.

Exit status depends only on the class of outcome: 0 success, 1 negative
result (not derivable, no parse, failing lexicon entries), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, TextIO

from . import montague as mg
from . import systemf as sf
from .categories import (CategorySyntaxError, format_category, group_check,
                         group_image, parse_category, product_image)
from .lambda_core import TermSyntaxError, TypeMismatch, format_term
from .prover import (SearchConfig, SearchLimitExceeded, parse_sequent, prove,
                     render, to_json)

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2
MODES = ("prove", "parse", "semantics", "check-lexicon", "fictive")
FORMATS = ("text", "json", "latex")


class InputError(Exception):
    """Bad input: unreadable file, syntax error, unknown word."""


@dataclass(frozen=True)
class RunConfig:
    mode: str
    output: str
    lexicon: str | None
    search: SearchConfig
    all: bool
    goal: str


# --- formula rendering -----------------------------------------------------

_LATEX_OPS = {mg.And: "\\land", mg.Or: "\\lor", mg.Implies: "\\supset"}
_LATEX_Q = {mg.Exists: "\\exists", mg.Forall: "\\forall"}


def _latex_name(name: str) -> str:
    return name.replace("_", "\\_")


def formula_latex(f: mg.Formula) -> str:
    if isinstance(f, mg.Sym):
        return f"\\mathit{{{_latex_name(f.name)}}}"
    if isinstance(f, (mg.Pred, mg.Fn)):
        args = ",".join(formula_latex(a) for a in f.args)
        return f"\\mathit{{{_latex_name(f.name)}}}" + (f"({args})" if args else "")
    if isinstance(f, mg.Lam):
        return f"\\lambda {f.var}{{:}}{f.sort}.\\,{formula_latex(f.body)}"
    if type(f) in _LATEX_Q:
        return f"{_LATEX_Q[type(f)]} {f.var}{{:}}{f.sort}.\\,{formula_latex(f.body)}"
    op = _LATEX_OPS[type(f)]
    return f"({formula_latex(f.left)} {op} {formula_latex(f.right)})"


def _escape_latex(s: str) -> str:
    return s.replace("\\", "\\backslash ").replace("_", "\\_")


# --- commands --------------------------------------------------------------

def cmd_prove(text: str, cfg: RunConfig, out: TextIO) -> int:
    try:
        seq = parse_sequent(text)
        derivations = prove(seq, cfg.search)
    except (CategorySyntaxError, SearchLimitExceeded) as exc:
        raise InputError(str(exc)) from None
    shown = derivations if cfg.all else derivations[:1]
    verdict = group_check(seq.antecedent, seq.goal)
    if cfg.output == "json":
        out.write(json.dumps({
            "sequent": str(seq),
            "derivable": bool(derivations),
            "group_check": verdict,
            "derivations": [to_json(d) for d in shown],
        }, ensure_ascii=False) + "\n")
    elif derivations:
        for d in shown:
            out.write(render(d, cfg.output, cfg.search) + "\n")
    if derivations:
        return OK
    if not seq.antecedent and not cfg.search.allow_empty_antecedent:
        reason = "empty antecedent (rerun with --allow-empty)"
    elif not verdict:
        reason = (f"free-group check failed: {product_image(seq.antecedent)} "
                  f"!= {group_image(seq.goal)}")
    else:
        reason = "free-group check passed, but no derivation exists"
    print(f"not derivable: {seq}: {reason}", file=sys.stderr)
    return NEGATIVE


def _lexicon(cfg: RunConfig, default: str) -> mg.Lexicon:
    source = cfg.lexicon or default
    try:
        return mg.read_lexicon(source)
    except OSError as exc:
        raise InputError(f"cannot read lexicon {source}: {exc.strerror or exc}") from None
    except (mg.LexiconError, mg.UnmappedAtom) as exc:
        raise InputError(f"bad lexicon {source}: {exc}") from None


def _goal(cfg: RunConfig):
    try:
        return parse_category(cfg.goal)
    except CategorySyntaxError as exc:
        raise InputError(f"bad goal category: {exc}") from None


def cmd_parse(sentence: str, cfg: RunConfig, out: TextIO) -> int:
    lex = _lexicon(cfg, "sosta")
    try:
        parses = mg.parse(sentence, lex, cfg.search, _goal(cfg))
    except mg.UnknownWord as exc:
        raise InputError(f"unknown word: {exc.word}") from None
    except SearchLimitExceeded as exc:
        raise InputError(str(exc)) from None
    if not parses:
        print(f"no parse: {sentence}", file=sys.stderr)
        return NEGATIVE
    for p in parses if cfg.all else parses[:1]:
        if cfg.output == "json":
            out.write(json.dumps({
                "words": [e.word for e in p.entries],
                "categories": [format_category(e.category) for e in p.entries],
                "derivation": to_json(p.derivation),
            }, ensure_ascii=False) + "\n")
        else:
            out.write(render(p.derivation, cfg.output, cfg.search) + "\n")
    return OK


def cmd_semantics(sentence: str, cfg: RunConfig, out: TextIO) -> int:
    lex = _lexicon(cfg, "sosta")
    try:
        readings = mg.analyze(sentence, lex, cfg.search, _goal(cfg))
    except mg.UnknownWord as exc:
        raise InputError(f"unknown word: {exc.word}") from None
    except (mg.LexiconError, TypeMismatch, SearchLimitExceeded) as exc:
        raise InputError(str(exc)) from None
    if not readings:
        print(f"no parse: {sentence}", file=sys.stderr)
        return NEGATIVE
    for r in readings if cfg.all else readings[:1]:
        text = format_term(r.term) if r.formula is None else mg.format_formula(r.formula)
        if cfg.output == "json":
            out.write(json.dumps(r.to_json(), ensure_ascii=False) + "\n")
        elif cfg.output == "latex":
            out.write(render(r.derivation, "latex", cfg.search) + "\n")
            body = (formula_latex(r.formula) if r.formula is not None
                    else f"\\texttt{{{_escape_latex(text)}}}")
            out.write(f"$${body}$$\n")
        else:
            out.write(text + "\n")
    return OK


def _f_lexicon_text(text: str) -> bool:
    return any(line.split(" ", 1)[0] in ("sort", "coerce")
               for _, line in mg.records(text))


def cmd_check_lexicon(path: str, cfg: RunConfig, out: TextIO) -> int:
    source = path or cfg.lexicon
    if not source:
        raise InputError("check-lexicon needs a lexicon file")
    try:
        if source in mg.BUNDLED or source in sf.F_BUNDLED:
            text = mg.bundled_text(source)
        else:
            text = Path(source).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read lexicon {source}: {exc}") from None
    if _f_lexicon_text(text):
        results = _check_f_lexicon(text)
    else:
        _, results = mg.check_lexicon(text)
    if not results:
        print(f"warning: {source} has no entries", file=sys.stderr)
    failed = 0
    for r in results:
        failed += not r.ok
        if cfg.output == "json":
            out.write(json.dumps({"line": r.line, "word": r.word, "ok": r.ok,
                                  "message": r.message}, ensure_ascii=False) + "\n")
        else:
            status = "OK" if r.ok else "FAIL"
            detail = f": {r.message}" if r.message else ""
            out.write(f"{status} line {r.line} {r.word}{detail}\n")
    return NEGATIVE if failed else OK


def _check_f_lexicon(text: str) -> list[mg.CheckResult]:
    lex = sf.FLexicon()
    report = []
    for number, line in mg.records(text):
        try:
            kind, added = sf._read_f_record(lex, line)
        except (TermSyntaxError, sf.FTypeError, ValueError) as exc:
            word = line.split("::", 1)[0] if "::" in line else line.split(":", 1)[0]
            report.append(mg.CheckResult(number, word.strip(), False, str(exc)))
            continue
        if kind == "coerce":
            report.append(mg.CheckResult(number, f"{added.word} ({added.name})", True,
                                         str(added.type)))
        elif kind == "entry":
            word, term = added
            report.append(mg.CheckResult(number, word, True, str(sf.f_type_of(term))))
    return report


def cmd_fictive(sentence: str, cfg: RunConfig, out: TextIO) -> int:
    try:
        lex = sf.read_f_lexicon(cfg.lexicon or "fictive")
    except OSError as exc:
        raise InputError(f"cannot read lexicon: {exc}") from None
    except mg.LexiconError as exc:
        raise InputError(f"bad lexicon: {exc}") from None
    words = sentence.split()
    if len(words) != 3:
        raise InputError("fictive mode expects 'DETERMINER NOUN VERB'")
    try:
        trace = sf.fictive_motion_trace(lex, sentence)
    except mg.UnknownWord as exc:
        raise InputError(f"unknown word: {exc.word}") from None
    except (sf.MissingCoercion, sf.FTypeError, ValueError) as exc:
        print(f"no reading: {exc}", file=sys.stderr)
        return NEGATIVE
    formula = sf.f_term_to_formula(trace.normal)
    stages = [("subject", trace.subject_steps[0]), ("subject normal", trace.subject_steps[-1]),
              ("raised", trace.raised_subject),
              (f"coerced by {trace.coercion.name}", trace.coerced_normal),
              ("sentence", trace.sentence), ("normal", trace.normal)]
    if cfg.output == "json":
        out.write(json.dumps({
            "stages": {k: str(t) for k, t in stages},
            "term": str(trace.normal),
            "type": str(sf.f_type_of(trace.normal)),
            "formula": mg.formula_to_json(formula),
            "formula_text": mg.format_formula(formula),
        }, ensure_ascii=False) + "\n")
    elif cfg.output == "latex":
        out.write(f"$${formula_latex(formula)}$$\n")
    else:
        for label, t in stages:
            out.write(f"{label}: {t} : {sf.f_type_of(t)}\n")
        out.write(mg.format_formula(formula) + "\n")
    return OK


COMMANDS: dict[str, Callable[[str, RunConfig, TextIO], int]] = {
    "prove": cmd_prove,
    "parse": cmd_parse,
    "semantics": cmd_semantics,
    "check-lexicon": cmd_check_lexicon,
    "fictive": cmd_fictive,
}


# --- entry point -----------------------------------------------------------

def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="catgram",
        description="Lambek-calculus prover, categorial parser and Montague semantics.")
    p.add_argument("input", nargs="?",
                   help="sequent, sentence or lexicon path; read one per line from "
                        "standard input when omitted")
    p.add_argument("--mode", choices=MODES, default="prove")
    p.add_argument("--lexicon", metavar="PATH",
                   help="lexicon file or bundled name (sosta, italian, aime, tres, "
                        "fictive, livre)")
    p.add_argument("--output", choices=FORMATS, default="text")
    p.add_argument("--max-derivations", type=_positive, default=16, metavar="N")
    p.add_argument("--max-category-size", type=_positive, default=32, metavar="N")
    p.add_argument("--allow-empty", action="store_true",
                   help="allow introduction rules to discharge the last hypothesis")
    p.add_argument("--all", action="store_true",
                   help="print every derivation or reading instead of the first")
    p.add_argument("--goal", default="S", help="goal category for parse/semantics")
    return p


def run(argv: Sequence[str] | None = None, stdin: TextIO | None = None,
        stdout: TextIO | None = None) -> int:
    args = build_parser().parse_args(argv)
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    cfg = RunConfig(
        mode=args.mode, output=args.output, lexicon=args.lexicon,
        search=SearchConfig(args.max_category_size, args.max_derivations, args.allow_empty),
        all=args.all, goal=args.goal)
    command = COMMANDS[args.mode]
    if args.input is not None:
        items = [args.input]
    elif args.mode == "check-lexicon" and args.lexicon:
        items = [args.lexicon]
    else:
        items = [line.strip() for line in stdin if line.strip() and not line.startswith("#")]
    status = OK
    for item in items:
        try:
            result = command(item, cfg, stdout)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            result = INPUT_ERROR
        status = max(status, result)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Montague-style semantics on top of Lambek derivations.

A lexicon pairs each word with categories and lambda-terms whose types are
the image of the category under the category-to-type map.  A derivation is
turned into a term by putting the lexical terms at the leaves, reading
eliminations as applications and introductions as abstractions; the
beta-normal form of a term of type ``t`` is a logical formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .categories import Atom, Category, CategorySyntaxError, parse_category
from .lambda_core import (E, T, Abs, App, Arrow, Const, SemType, Signature,
                          Term, TermSyntaxError, TypeMismatch, Var, alpha_key,
                          beta_normalize, format_term, free_vars, infer_constants,
                          parse_term, parse_type, type_of)
from .prover import (DEFAULT_CONFIG, Derivation, Rule, SearchConfig, Sequent,
                     prove)
from .prover import to_json as derivation_to_json

S = Atom("S")
DEFAULT_ATOMS: dict[str, SemType] = {"S": T, "np": E, "n": Arrow(E, T)}


class UnmappedAtom(ValueError):
    def __init__(self, atom: str):
        super().__init__(f"no semantic type for atom {atom!r}")
        self.atom = atom


def cat_to_type(c: Category, atom_map: Mapping[str, SemType] | None = None) -> SemType:
    """``S -> t``, ``np -> e``, ``n -> e -> t``; both slashes become arrows."""
    atom_map = DEFAULT_ATOMS if atom_map is None else atom_map
    if isinstance(c, Atom):
        try:
            return atom_map[c.name]
        except KeyError:
            raise UnmappedAtom(c.name) from None
    return Arrow(cat_to_type(c.arg, atom_map), cat_to_type(c.result, atom_map))


# --- lexicon ---------------------------------------------------------------

@dataclass(frozen=True)
class LexiconEntry:
    word: str
    category: Category
    semantics: Term | None = None

    def __str__(self):
        out = f"{self.word} :: {self.category}"
        return out if self.semantics is None else f"{out} :: {self.semantics}"


class LexiconError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class LexiconTypeError(LexiconError):
    def __init__(self, word: str, expected: SemType, actual: str, line: int | None = None):
        super().__init__(f"{word}: expected type {expected}, got {actual}", line)
        self.word = word
        self.expected = expected
        self.actual = actual


class UnknownWord(LookupError):
    def __init__(self, word: str):
        super().__init__(f"word not in lexicon: {word!r}")
        self.word = word


@dataclass
class Lexicon:
    entries: dict[str, list[LexiconEntry]] = field(default_factory=dict)
    signature: Signature = field(default_factory=Signature.default)
    atom_map: dict[str, SemType] = field(default_factory=lambda: dict(DEFAULT_ATOMS))

    def add(self, entry: LexiconEntry):
        self.entries.setdefault(entry.word, []).append(entry)

    def lookup(self, word: str) -> list[LexiconEntry]:
        try:
            return self.entries[word]
        except KeyError:
            raise UnknownWord(word) from None

    def __iter__(self) -> Iterator[LexiconEntry]:
        for group in self.entries.values():
            yield from group

    def __len__(self):
        return sum(len(g) for g in self.entries.values())


def records(text: str) -> Iterator[tuple[int, str]]:
    """Non-blank lines with ``#`` comments stripped, numbered from 1."""
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield number, line


def _read_entry(lex: Lexicon, number: int, line: str) -> LexiconEntry:
    parts = [p.strip() for p in line.split("::")]
    if len(parts) not in (2, 3) or not parts[0]:
        raise LexiconError(f"expected 'word :: category :: term', got {line!r}", number)
    word = parts[0]
    try:
        category = parse_category(parts[1])
    except CategorySyntaxError as exc:
        raise LexiconError(str(exc), number) from None
    if len(parts) == 2:
        return LexiconEntry(word, category)
    try:
        expected = cat_to_type(category, lex.atom_map)
    except UnmappedAtom as exc:
        raise LexiconError(f"{word}: {exc}", number) from None
    try:
        raw = parse_term(parts[2], lex.signature, infer={})
    except TermSyntaxError as exc:
        raise LexiconError(str(exc), number) from None
    if free_vars(raw):
        raise LexiconError(f"{word}: free variables {sorted(free_vars(raw))}", number)
    try:
        term, inferred = infer_constants(raw, expected)
    except TypeMismatch as exc:
        msg = str(exc)
        actual = msg.split(", got ", 1)[1] if msg.startswith("expected ") else msg
        raise LexiconTypeError(word, expected, actual, number) from None
    lex.signature.update(inferred)
    return LexiconEntry(word, category, term)


def _read_directive(lex: Lexicon, number: int, line: str) -> bool:
    keyword = line.split(None, 1)[0]
    rest = line[len(keyword):].strip()
    try:
        if keyword == "atom":
            name, _, ty = rest.partition("=")
            if not ty:
                raise LexiconError(f"expected 'atom NAME = TYPE', got {line!r}", number)
            lex.atom_map[name.strip()] = parse_type(ty)
            return True
        if keyword == "const":
            name, _, ty = rest.partition(":")
            if not ty:
                raise LexiconError(f"expected 'const NAME : TYPE', got {line!r}", number)
            lex.signature[name.strip()] = parse_type(ty)
            return True
    except TermSyntaxError as exc:
        raise LexiconError(str(exc), number) from None
    return False


@dataclass(frozen=True)
class CheckResult:
    line: int
    word: str
    ok: bool
    message: str = ""


def check_lexicon(text: str) -> tuple[Lexicon, list[CheckResult]]:
    """Load what can be loaded and report every entry as OK or failing."""
    lex = Lexicon()
    report = []
    for number, line in records(text):
        try:
            if "::" not in line and _read_directive(lex, number, line):
                continue
            entry = _read_entry(lex, number, line)
        except LexiconError as exc:
            word = getattr(exc, "word", line.split("::", 1)[0].strip())
            report.append(CheckResult(number, word, False, str(exc)))
            continue
        lex.add(entry)
        detail = "" if entry.semantics is None else str(type_of(entry.semantics))
        report.append(CheckResult(number, entry.word, True, detail))
    return lex, report


def load_lexicon(text: str) -> Lexicon:
    """Parse lexicon text; every entry is type-checked against its category.

    Record forms: ``word :: category :: term`` (or ``word :: category`` for a
    syntax-only entry), ``atom NAME = TYPE`` and ``const NAME : TYPE``.
    """
    lex = Lexicon()
    for number, line in records(text):
        if "::" not in line and _read_directive(lex, number, line):
            continue
        lex.add(_read_entry(lex, number, line))
    return lex


BUNDLED = ("sosta", "italian", "aime", "tres")


def bundled_text(name: str) -> str:
    return resources.files("catgram.data").joinpath(f"{name}.lex").read_text(encoding="utf-8")


def read_lexicon(source: str | Path) -> Lexicon:
    """Load a lexicon file, or a bundled one by name (``"sosta"``, ...)."""
    if isinstance(source, str) and source in BUNDLED:
        return load_lexicon(bundled_text(source))
    return load_lexicon(Path(source).read_text(encoding="utf-8"))


# --- formulas --------------------------------------------------------------

class Formula:
    __slots__ = ()

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Sym(Formula):
    """A variable or constant in argument position."""

    name: str


@dataclass(frozen=True)
class Fn(Formula):
    """A non-propositional function application, e.g. ``f_phys(livre)``."""

    name: str
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Lam(Formula):
    """A property in argument position, e.g. the argument of a choice operator."""

    var: str
    sort: str
    body: Formula


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple[Formula, ...] = ()


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    sort: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    sort: str
    body: Formula


CONNECTIVES = {"and": And, "or": Or, "implies": Implies}
QUANTIFIERS = {"exists": Exists, "forall": Forall}
_INFIX = {And: "/\\", Or: "\\/", Implies: "->"}
_KEYWORD = {Exists: "exists", Forall: "forall"}


def format_formula(f: Formula) -> str:
    if isinstance(f, Sym):
        return f.name
    if isinstance(f, (Pred, Fn)):
        return f"{f.name}({','.join(format_formula(a) for a in f.args)})" if f.args else f.name
    if isinstance(f, Lam):
        return f"\\{f.var}:{f.sort}. {format_formula(f.body)}"
    if isinstance(f, (Exists, Forall)):
        return f"{_KEYWORD[type(f)]} {f.var}:{f.sort}. {format_formula(f.body)}"
    return f"({format_formula(f.left)} {_INFIX[type(f)]} {format_formula(f.right)})"


def formula_to_json(f: Formula) -> dict:
    if isinstance(f, Sym):
        return {"op": "sym", "name": f.name}
    if isinstance(f, (Pred, Fn)):
        return {"op": "pred" if isinstance(f, Pred) else "fn", "name": f.name,
                "args": [formula_to_json(a) for a in f.args]}
    if isinstance(f, (Lam, Exists, Forall)):
        op = {Lam: "lambda", Exists: "exists", Forall: "forall"}[type(f)]
        return {"op": op, "var": f.var, "sort": f.sort, "body": formula_to_json(f.body)}
    op = {And: "and", Or: "or", Implies: "implies"}[type(f)]
    return {"op": op, "left": formula_to_json(f.left), "right": formula_to_json(f.right)}


def formula_from_json(obj: dict) -> Formula:
    op = obj["op"]
    if op == "sym":
        return Sym(obj["name"])
    if op in ("pred", "fn"):
        cls = Pred if op == "pred" else Fn
        return cls(obj["name"], tuple(formula_from_json(a) for a in obj["args"]))
    if op in ("lambda", "exists", "forall"):
        cls = {"lambda": Lam, "exists": Exists, "forall": Forall}[op]
        return cls(obj["var"], obj["sort"], formula_from_json(obj["body"]))
    cls = CONNECTIVES[op]
    return cls(formula_from_json(obj["left"]), formula_from_json(obj["right"]))


class NotAFormula(ValueError):
    pass


class _Names:
    """Bound-variable naming: keep source names, suffix a number on clashes."""

    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)

    def bind(self, name: str) -> str:
        if name not in self.taken:
            self.taken.add(name)
            return name
        base = name.rstrip("'")
        for i in itertools.count():
            cand = f"{base}{i}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand


def _spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, args[::-1]


def term_to_formula(t: Term) -> Formula:
    """Read a beta-normal term of type ``t`` as a first-order formula."""
    if type_of(t) != T:
        raise NotAFormula(f"{t} has type {type_of(t)}, not t")
    return _prop(t, {}, _Names(free_vars(t)))


def _prop(t: Term, env: dict[str, str], names: _Names) -> Formula:
    head, args = _spine(t)
    if isinstance(head, Var):
        raise NotAFormula(f"proposition {t} is headed by the variable {head.name}")
    if isinstance(head, Abs):
        raise NotAFormula(f"{t} is not beta-normal")
    if head.name in CONNECTIVES:
        if len(args) != 2:
            raise NotAFormula(f"connective {head.name} is not saturated in {t}")
        return CONNECTIVES[head.name](*(_prop(a, env, names) for a in args))
    if head.name in QUANTIFIERS:
        if len(args) != 1:
            raise NotAFormula(f"quantifier {head.name} is not saturated in {t}")
        return _quantify(QUANTIFIERS[head.name], args[0], env, names)
    if type_of(t) != T:
        raise NotAFormula(f"{head.name} is not saturated in {t}")
    return Pred(head.name, tuple(_individual(a, env, names) for a in args))


def _quantify(cls, body: Term, env, names) -> Formula:
    if not isinstance(body, Abs):
        # quantified property given by name: read as exists x. P(x)
        ty = type_of(body)
        v = Var(names.bind("x"), ty.dom)
        name = v.name
        return cls(name, str(v.type), _prop(App(body, v), {**env, name: name}, names))
    name = names.bind(body.var.name)
    return cls(name, str(body.var.type), _prop(body.body, {**env, body.var.name: name}, names))


def _individual(t: Term, env, names) -> Formula:
    if isinstance(t, Var):
        return Sym(env.get(t.name, t.name))
    if isinstance(t, Const):
        return Sym(t.name)
    if isinstance(t, Abs):
        name = names.bind(t.var.name)
        inner = {**env, t.var.name: name}
        if type_of(t.body) == T:
            return Lam(name, str(t.var.type), _prop(t.body, inner, names))
        return Lam(name, str(t.var.type), _individual(t.body, inner, names))
    head, args = _spine(t)
    if isinstance(head, Const):
        return Fn(head.name, tuple(_individual(a, env, names) for a in args))
    raise NotAFormula(f"cannot read {t} as an individual")


# --- composition -----------------------------------------------------------

class _Fresh:
    def __init__(self, prefix: str = "h"):
        self.prefix = prefix
        self.n = 0

    def __call__(self) -> str:
        name = f"{self.prefix}{self.n}"
        self.n += 1
        return name


def _compose(d: Derivation, terms: Sequence[Term], atom_map, fresh: _Fresh,
             normalize_below: int) -> Term:
    if d.height <= normalize_below:
        return beta_normalize(_compose(d, terms, atom_map, fresh, -1))
    if d.rule is Rule.AXIOM:
        (only,) = terms
        return only
    if d.rule is Rule.UNDER_ELIM:
        minor, major = d.premises
        n = len(minor.conclusion.antecedent)
        return App(_compose(major, terms[n:], atom_map, fresh, normalize_below),
                   _compose(minor, terms[:n], atom_map, fresh, normalize_below))
    if d.rule is Rule.OVER_ELIM:
        major, minor = d.premises
        n = len(major.conclusion.antecedent)
        return App(_compose(major, terms[:n], atom_map, fresh, normalize_below),
                   _compose(minor, terms[n:], atom_map, fresh, normalize_below))
    (premise,) = d.premises
    goal = d.conclusion.goal
    x = Var(fresh(), cat_to_type(goal.arg, atom_map))
    extended = [x, *terms] if d.rule is Rule.UNDER_INTRO else [*terms, x]
    return Abs(x, _compose(premise, extended, atom_map, fresh, normalize_below))


def compose(d: Derivation, terms: Sequence[Term],
            atom_map: Mapping[str, SemType] | None = None) -> Term:
    """The (unreduced) term of ``d`` with ``terms`` at the antecedent positions.

    Eliminations apply the slash-bearing premise to the other one;
    introductions abstract over a fresh variable for the discharged
    hypothesis.
    """
    atom_map = DEFAULT_ATOMS if atom_map is None else atom_map
    if len(terms) != len(d.conclusion.antecedent):
        raise ValueError("one term per antecedent category is required")
    return _compose(d, list(terms), atom_map, _Fresh(), -1)


def composition_stages(d: Derivation, terms: Sequence[Term],
                       atom_map: Mapping[str, SemType] | None = None) -> list[Term]:
    """Terms obtained by normalizing every subproof of height <= k, k = 0..height.

    Stage 0 is the raw composition, the last stage its normal form.
    """
    atom_map = DEFAULT_ATOMS if atom_map is None else atom_map
    return [_compose(d, list(terms), atom_map, _Fresh(), k) for k in range(d.height + 1)]


# --- analysis --------------------------------------------------------------

@dataclass(frozen=True)
class Parse:
    entries: tuple[LexiconEntry, ...]
    derivation: Derivation


@dataclass(frozen=True)
class Reading:
    entries: tuple[LexiconEntry, ...]
    derivation: Derivation
    composed: Term
    term: Term
    formula: Formula | None

    def to_json(self) -> dict:
        return {
            "derivation": derivation_to_json(self.derivation),
            "term": format_term(self.term),
            "type": str(type_of(self.term)),
            "formula": None if self.formula is None else formula_to_json(self.formula),
            "formula_text": None if self.formula is None else format_formula(self.formula),
        }


def parse(sentence: Sequence[str] | str, lexicon: Lexicon,
          cfg: SearchConfig = DEFAULT_CONFIG, goal: Category = S) -> list[Parse]:
    """Every choice of lexical entries with every derivation of ``goal``."""
    words = sentence.split() if isinstance(sentence, str) else list(sentence)
    choices = [lexicon.lookup(w) for w in words]
    out = []
    for entries in itertools.product(*choices):
        seq = Sequent(tuple(e.category for e in entries), goal)
        for d in prove(seq, cfg):
            out.append(Parse(entries, d))
    return out


def analyze(sentence: Sequence[str] | str, lexicon: Lexicon,
            cfg: SearchConfig = DEFAULT_CONFIG, goal: Category = S) -> list[Reading]:
    """Semantic readings of ``sentence``, deduplicated up to alpha-equivalence.

    An empty list means there is no derivation.  Readings whose normal form
    has type ``t`` carry a formula.
    """
    seen: dict = {}
    expected = cat_to_type(goal, lexicon.atom_map)
    for p in parse(sentence, lexicon, cfg, goal):
        missing = [e.word for e in p.entries if e.semantics is None]
        if missing:
            raise LexiconError(f"no semantics for {', '.join(missing)}")
        composed = compose(p.derivation, [e.semantics for e in p.entries], lexicon.atom_map)
        if type_of(composed) != expected:
            raise TypeMismatch(f"composed term {composed} does not have type {expected}")
        normal = beta_normalize(composed)
        key = alpha_key(normal)
        if key in seen:
            continue
        formula = term_to_formula(normal) if expected == T else None
        seen[key] = Reading(p.entries, p.derivation, composed, normal, formula)
    return list(seen.values())

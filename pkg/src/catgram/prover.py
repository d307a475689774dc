"""Proof search for the product-free Lambek calculus.

Derivations are natural-deduction trees in sequent form.  The search is
goal directed over beta-normal, eta-long proofs (introductions for complex
goals, elimination spines ending in an atom), which makes it finite; each
proof found is then eta-contracted so that hypotheses may appear as axioms
at complex categories, as in hand-written derivations.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterator

from .categories import (
    Atom,
    Category,
    Over,
    Under,
    connectives,
    format_category,
    group_check,
    parse_category,
    subcategories,
)


class Rule(enum.Enum):
    AXIOM = "ax"
    UNDER_ELIM = "\\e"
    OVER_ELIM = "/e"
    UNDER_INTRO = "\\i"
    OVER_INTRO = "/i"

    @property
    def arity(self) -> int:
        if self is Rule.AXIOM:
            return 0
        return 2 if self in (Rule.UNDER_ELIM, Rule.OVER_ELIM) else 1


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[Category, ...]
    goal: Category

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(self.antecedent))

    def categories(self) -> tuple[Category, ...]:
        return self.antecedent + (self.goal,)

    @property
    def size(self) -> int:
        return sum(connectives(c) for c in self.categories())

    def __str__(self):
        ant = ", ".join(format_category(c) for c in self.antecedent)
        return f"{ant} ⊢ {format_category(self.goal)}".lstrip()


def parse_sequent(text: str) -> Sequent:
    """Parse ``"cat1, cat2, ... => cat"``; the antecedent may be empty."""
    if "=>" not in text:
        raise ValueError(f"missing '=>' in sequent {text!r}")
    left, right = text.split("=>", 1)
    ant = tuple(parse_category(part) for part in left.split(",")) if left.strip() else ()
    return Sequent(ant, parse_category(right))


@dataclass(frozen=True)
class SearchConfig:
    max_category_size: int = 32
    max_derivations: int = 16
    allow_empty_antecedent: bool = False

    def __post_init__(self):
        if self.max_category_size < 1 or self.max_derivations < 1:
            raise ValueError("search limits must be >= 1")


DEFAULT_CONFIG = SearchConfig()


class SearchLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Derivation:
    rule: Rule
    conclusion: Sequent
    premises: tuple[Derivation, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def nodes(self) -> Iterator[Derivation]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    @property
    def height(self) -> int:
        return 1 + max((p.height for p in self.premises), default=-1)

    def rule_shape(self) -> str:
        """Rules of the non-axiom nodes, e.g. ``/e(/e(/e))``."""
        inner = [p.rule_shape() for p in self.premises if p.rule is not Rule.AXIOM]
        if self.rule is Rule.AXIOM:
            return "ax"
        return self.rule.value + (f"({', '.join(inner)})" if inner else "")


def axiom(c: Category) -> Derivation:
    return Derivation(Rule.AXIOM, Sequent((c,), c))


# --- checking --------------------------------------------------------------

def _check_node(d: Derivation, allow_empty: bool) -> bool:
    s = d.conclusion
    if len(d.premises) != d.rule.arity:
        return False
    if not s.antecedent and not allow_empty:
        return False
    if d.rule is Rule.AXIOM:
        return s.antecedent == (s.goal,)
    if d.rule in (Rule.UNDER_ELIM, Rule.OVER_ELIM):
        first, second = (p.conclusion for p in d.premises)
        if first.antecedent + second.antecedent != s.antecedent:
            return False
        if d.rule is Rule.UNDER_ELIM:
            # Gamma |- A   Delta |- A\B   =>   Gamma, Delta |- B
            return second.goal == Under(first.goal, s.goal)
        # Delta |- B/A   Gamma |- A   =>   Delta, Gamma |- B
        return first.goal == Over(s.goal, second.goal)
    prem = d.premises[0].conclusion
    if not s.antecedent and not allow_empty:
        return False
    if d.rule is Rule.UNDER_INTRO:
        return (isinstance(s.goal, Under) and prem.goal == s.goal.right
                and prem.antecedent == (s.goal.left,) + s.antecedent)
    return (isinstance(s.goal, Over) and prem.goal == s.goal.left
            and prem.antecedent == s.antecedent + (s.goal.right,))


def check_derivation(d: Derivation, cfg: SearchConfig = DEFAULT_CONFIG) -> bool:
    """True iff every node of ``d`` is an instance of its rule."""
    return all(_check_node(n, cfg.allow_empty_antecedent) for n in d.nodes())


# --- search ----------------------------------------------------------------

def _spine(head: Category, target: Atom) -> list[tuple[str, Category]] | None:
    """Arguments peeled off ``head`` until ``target`` is reached, outermost first."""
    args = []
    c = head
    while not isinstance(c, Atom):
        if isinstance(c, Under):
            args.append(("left", c.left))
        else:
            args.append(("right", c.right))
        c = c.result
    return args if c == target else None


class _Search:
    def __init__(self, cfg: SearchConfig):
        self.cfg = cfg
        self.cap = cfg.max_derivations
        self.memo: dict[tuple[tuple[Category, ...], Category], list[Derivation]] = {}

    def solve(self, ant: tuple[Category, ...], goal: Category) -> list[Derivation]:
        key = (ant, goal)
        found = self.memo.get(key)
        if found is None:
            found = self._solve(ant, goal) if group_check(ant, goal) else []
            self.memo[key] = found
        return found

    def _solve(self, ant, goal):
        empty_ok = self.cfg.allow_empty_antecedent
        if isinstance(goal, Under):
            if not ant and not empty_ok:
                return []
            return [Derivation(Rule.UNDER_INTRO, Sequent(ant, goal), (p,))
                    for p in self.solve((goal.left,) + ant, goal.right)]
        if isinstance(goal, Over):
            if not ant and not empty_ok:
                return []
            return [Derivation(Rule.OVER_INTRO, Sequent(ant, goal), (p,))
                    for p in self.solve(ant + (goal.right,), goal.left)]
        out: list[Derivation] = []
        for i, head in enumerate(ant):
            args = _spine(head, goal)
            if args is None:
                continue
            for d in self._spines(ant, i, i + 1, axiom(head), args):
                out.append(d)
                if len(out) >= self.cap:
                    return out
        return out

    def _spines(self, ant, lo, hi, major: Derivation, args) -> Iterator[Derivation]:
        """Apply the remaining spine ``args`` to ``major`` covering ``ant[lo:hi]``."""
        if not args:
            if lo == 0 and hi == len(ant):
                yield major
            return
        min_len = 0 if self.cfg.allow_empty_antecedent else 1
        (side, arg), rest = args[0], args[1:]
        result = major.conclusion.goal.result
        if side == "left":
            for start in range(lo - min_len, -1, -1):
                seg = ant[start:lo]
                for minor in self.solve(seg, arg):
                    node = Derivation(Rule.UNDER_ELIM,
                                      Sequent(ant[start:hi], result), (minor, major))
                    yield from self._spines(ant, start, hi, node, rest)
        else:
            for end in range(hi + min_len, len(ant) + 1):
                seg = ant[hi:end]
                for minor in self.solve(seg, arg):
                    node = Derivation(Rule.OVER_ELIM,
                                      Sequent(ant[lo:end], result), (major, minor))
                    yield from self._spines(ant, lo, end, node, rest)


def eta_contract(d: Derivation) -> Derivation:
    """Remove introductions that merely re-abstract a hypothesis just applied."""
    if not d.premises:
        return d
    premises = tuple(eta_contract(p) for p in d.premises)
    if d.rule in (Rule.UNDER_INTRO, Rule.OVER_INTRO):
        (p,) = premises
        if d.rule is Rule.UNDER_INTRO and p.rule is Rule.UNDER_ELIM:
            minor, major = p.premises
            if minor.rule is Rule.AXIOM and major.conclusion == d.conclusion:
                return major
        if d.rule is Rule.OVER_INTRO and p.rule is Rule.OVER_ELIM:
            major, minor = p.premises
            if minor.rule is Rule.AXIOM and major.conclusion == d.conclusion:
                return major
    return Derivation(d.rule, d.conclusion, premises)


def prove(s: Sequent, cfg: SearchConfig = DEFAULT_CONFIG) -> list[Derivation]:
    """All normal derivations of ``s`` (at most ``cfg.max_derivations``).

    An empty list means ``s`` is not derivable.  Subgoals failing the
    free-group check are pruned.
    """
    for c in s.categories():
        if connectives(c) > cfg.max_category_size:
            raise SearchLimitExceeded(
                f"category {format_category(c)} has {connectives(c)} connectives, "
                f"limit is {cfg.max_category_size}")
    if not s.antecedent and not cfg.allow_empty_antecedent:
        return []
    found = _Search(cfg).solve(s.antecedent, s.goal)
    out = dict.fromkeys(eta_contract(d) for d in found)
    return list(out)[: cfg.max_derivations]


def is_derivable(s: Sequent, cfg: SearchConfig = DEFAULT_CONFIG) -> bool:
    return bool(prove(s, SearchConfig(cfg.max_category_size, 1, cfg.allow_empty_antecedent)))


def subformula_violations(d: Derivation) -> list[Category]:
    """Categories in ``d`` that are not subcategories of its end-sequent."""
    allowed = set()
    for c in d.conclusion.categories():
        allowed |= subcategories(c)
    seen = {c for n in d.nodes() for c in n.conclusion.categories()}
    return sorted((c for c in seen if c not in allowed), key=format_category)


# --- rendering -------------------------------------------------------------

class InvalidDerivation(ValueError):
    pass


def _text(d: Derivation, depth: int) -> Iterator[str]:
    yield f"{'  ' * depth}{d.conclusion}   [{d.rule.value}]"
    for p in d.premises:
        yield from _text(p, depth + 1)


def _latex_sequent(s: Sequent) -> str:
    def cat(c: Category) -> str:
        return format_category(c).replace("\\", "\\backslash ")

    return ", ".join(cat(c) for c in s.antecedent) + " \\vdash " + cat(s.goal)


def _latex(d: Derivation) -> str:
    label = d.rule.value.replace("\\", "\\backslash ")
    if d.rule is Rule.AXIOM:
        return f"\\infer[{label}]{{{_latex_sequent(d.conclusion)}}}{{}}"
    prem = " & ".join(_latex(p) for p in d.premises)
    return f"\\infer[{label}]{{{_latex_sequent(d.conclusion)}}}{{{prem}}}"


def to_json(d: Derivation) -> dict:
    return {
        "rule": d.rule.value,
        "conclusion": {
            "antecedent": [format_category(c) for c in d.conclusion.antecedent],
            "goal": format_category(d.conclusion.goal),
        },
        "premises": [to_json(p) for p in d.premises],
    }


def from_json(obj: dict) -> Derivation:
    concl = obj["conclusion"]
    seq = Sequent(tuple(parse_category(c) for c in concl["antecedent"]),
                  parse_category(concl["goal"]))
    return Derivation(Rule(obj["rule"]), seq, tuple(from_json(p) for p in obj["premises"]))


def render(d: Derivation, format: str = "text", cfg: SearchConfig | None = None) -> str:
    """Render as an indented tree (``text``), ``\\infer`` macros (``latex``) or ``json``."""
    if cfg is None:
        cfg = SearchConfig(allow_empty_antecedent=True)
    if not check_derivation(d, cfg):
        raise InvalidDerivation("refusing to render an invalid derivation")
    if format == "text":
        return "\n".join(_text(d, 0))
    if format == "latex":
        return _latex(d)
    if format == "json":
        return json.dumps(to_json(d), ensure_ascii=False)
    raise ValueError(f"unknown format {format!r}")

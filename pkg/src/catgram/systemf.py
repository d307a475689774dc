"""Second-order lambda calculus over a many-sorted ontology.

Base types are sorts (``voie``, ``hum``, ...) plus ``t`` (propositions) and
``v`` (events); ``tt`` abbreviates ``v -> t``.  Terms add type abstraction
``/\\a. t`` and type application ``t{T}`` to the simply typed constructs.
Lexicon entries may carry optional coercion terms that repair a type
mismatch between a predicate and its argument: facets of a word for
copredication, or a path turned into its fictive traveller.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator, Mapping

from . import montague as mg
from .lambda_core import TermSyntaxError, _Tokens

log = logging.getLogger(__name__)


# --- types -----------------------------------------------------------------

class FType:
    __slots__ = ()

    def __str__(self):
        return format_ftype(self)


@dataclass(frozen=True, repr=False)
class Base(FType):
    name: str

    def __repr__(self):
        return f"Base({self.name!r})"


@dataclass(frozen=True, repr=False)
class TVar(FType):
    name: str

    def __repr__(self):
        return f"TVar({self.name!r})"


@dataclass(frozen=True, repr=False)
class Arrow(FType):
    dom: FType
    cod: FType

    def __repr__(self):
        return f"Arrow({self.dom!r}, {self.cod!r})"


@dataclass(frozen=True, repr=False)
class Forall(FType):
    var: str
    body: FType

    def __repr__(self):
        return f"Forall({self.var!r}, {self.body!r})"


PROP = Base("t")
EVENT = Base("v")
TT = Arrow(EVENT, PROP)


def arrows(*types: FType) -> FType:
    out = types[-1]
    for ty in reversed(types[:-1]):
        out = Arrow(ty, out)
    return out


def foralls(names: str, body: FType) -> FType:
    for name in reversed(names.split()):
        body = Forall(name, body)
    return body


def format_ftype(ty: FType) -> str:
    if isinstance(ty, (Base, TVar)):
        return ty.name
    if isinstance(ty, Forall):
        return f"forall {ty.var}. {format_ftype(ty.body)}"
    dom = format_ftype(ty.dom)
    if isinstance(ty.dom, (Arrow, Forall)):
        dom = f"({dom})"
    return f"{dom} -> {format_ftype(ty.cod)}"


def ftv(ty: FType) -> set[str]:
    if isinstance(ty, TVar):
        return {ty.name}
    if isinstance(ty, Arrow):
        return ftv(ty.dom) | ftv(ty.cod)
    if isinstance(ty, Forall):
        return ftv(ty.body) - {ty.var}
    return set()


def _type_names(ty: FType) -> set[str]:
    if isinstance(ty, TVar):
        return {ty.name}
    if isinstance(ty, Arrow):
        return _type_names(ty.dom) | _type_names(ty.cod)
    if isinstance(ty, Forall):
        return _type_names(ty.body) | {ty.var}
    return set()


def _fresh(base: str, avoid: set[str]) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def subst_type(ty: FType, var: str, u: FType) -> FType:
    """Capture-avoiding ``ty[u/var]``."""
    if isinstance(ty, TVar):
        return u if ty.name == var else ty
    if isinstance(ty, Arrow):
        return Arrow(subst_type(ty.dom, var, u), subst_type(ty.cod, var, u))
    if isinstance(ty, Forall):
        if ty.var == var or var not in ftv(ty.body):
            return ty
        if ty.var in ftv(u):
            new = _fresh(ty.var, ftv(u) | _type_names(ty.body) | {var})
            return Forall(new, subst_type(subst_type(ty.body, ty.var, TVar(new)), var, u))
        return Forall(ty.var, subst_type(ty.body, var, u))
    return ty


def type_key(ty: FType, bound: tuple[str, ...] = ()):
    if isinstance(ty, TVar):
        for i, name in enumerate(reversed(bound)):
            if name == ty.name:
                return ("b", i)
        return ("v", ty.name)
    if isinstance(ty, Base):
        return ("s", ty.name)
    if isinstance(ty, Arrow):
        return ("->", type_key(ty.dom, bound), type_key(ty.cod, bound))
    return ("∀", type_key(ty.body, bound + (ty.var,)))


def types_equal(a: FType, b: FType) -> bool:
    return type_key(a) == type_key(b)


# --- terms -----------------------------------------------------------------

class FTerm:
    __slots__ = ()

    def __str__(self):
        return format_fterm(self)


@dataclass(frozen=True)
class Var(FTerm):
    name: str
    type: FType


@dataclass(frozen=True)
class Const(FTerm):
    name: str
    type: FType


@dataclass(frozen=True)
class App(FTerm):
    fun: FTerm
    arg: FTerm


@dataclass(frozen=True)
class Abs(FTerm):
    var: Var
    body: FTerm


@dataclass(frozen=True)
class TyApp(FTerm):
    term: FTerm
    type: FType


@dataclass(frozen=True)
class TyAbs(FTerm):
    var: str
    body: FTerm


def apply(fun: FTerm, *args: FTerm | FType) -> FTerm:
    """Apply to terms and types in order; types become type applications."""
    for a in args:
        fun = TyApp(fun, a) if isinstance(a, FType) else App(fun, a)
    return fun


def size(t: FTerm) -> int:
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    if isinstance(t, (Abs, TyAbs)):
        return 1 + size(t.body)
    if isinstance(t, TyApp):
        return 1 + size(t.term)
    return 1


class FTypeError(TypeError):
    pass


def f_type_of(t: FTerm, ctx: Mapping[str, FType] | None = None) -> FType:
    """Type of ``t`` under the System F rules."""
    ctx = ctx or {}
    if isinstance(t, Var):
        bound = ctx.get(t.name)
        if bound is not None and not types_equal(bound, t.type):
            raise FTypeError(f"variable {t.name} used at {t.type}, bound at {bound}")
        return t.type
    if isinstance(t, Const):
        return t.type
    if isinstance(t, Abs):
        return Arrow(t.var.type, f_type_of(t.body, {**ctx, t.var.name: t.var.type}))
    if isinstance(t, App):
        fun_ty = f_type_of(t.fun, ctx)
        arg_ty = f_type_of(t.arg, ctx)
        if not isinstance(fun_ty, Arrow):
            raise FTypeError(f"in ({t}): {t.fun} has type {fun_ty}, not a function type")
        if not types_equal(fun_ty.dom, arg_ty):
            raise FTypeError(
                f"in ({t}): {t.fun} expects {fun_ty.dom} but {t.arg} has type {arg_ty}")
        return fun_ty.cod
    if isinstance(t, TyApp):
        poly = f_type_of(t.term, ctx)
        if not isinstance(poly, Forall):
            raise FTypeError(f"in ({t}): {t.term} has type {poly}, not a universal type")
        return subst_type(poly.body, poly.var, t.type)
    for name in free_term_vars(t.body):
        ty = ctx.get(name) or _free_var_type(t.body, name)
        if t.var in ftv(ty):
            raise FTypeError(
                f"cannot abstract over {t.var}: free variable {name} has type {ty}")
    return Forall(t.var, f_type_of(t.body, ctx))


def _free_var_type(t: FTerm, name: str) -> FType:
    for v in _var_occurrences(t, frozenset()):
        if v.name == name:
            return v.type
    raise KeyError(name)


def _var_occurrences(t: FTerm, bound: frozenset) -> Iterator[Var]:
    if isinstance(t, Var):
        if t.name not in bound:
            yield t
    elif isinstance(t, App):
        yield from _var_occurrences(t.fun, bound)
        yield from _var_occurrences(t.arg, bound)
    elif isinstance(t, Abs):
        yield from _var_occurrences(t.body, bound | {t.var.name})
    elif isinstance(t, (TyApp, TyAbs)):
        yield from _var_occurrences(t.term if isinstance(t, TyApp) else t.body, bound)


def free_term_vars(t: FTerm) -> set[str]:
    return {v.name for v in _var_occurrences(t, frozenset())}


def _term_names(t: FTerm) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return _term_names(t.fun) | _term_names(t.arg)
    if isinstance(t, Abs):
        return _term_names(t.body) | {t.var.name}
    if isinstance(t, TyApp):
        return _term_names(t.term)
    if isinstance(t, TyAbs):
        return _term_names(t.body)
    return set()


def free_type_vars(t: FTerm) -> set[str]:
    """Type variables occurring free in the annotations of ``t``."""
    if isinstance(t, (Var, Const)):
        return ftv(t.type)
    if isinstance(t, App):
        return free_type_vars(t.fun) | free_type_vars(t.arg)
    if isinstance(t, Abs):
        return ftv(t.var.type) | free_type_vars(t.body)
    if isinstance(t, TyApp):
        return free_type_vars(t.term) | ftv(t.type)
    return free_type_vars(t.body) - {t.var}


def _all_type_names(t: FTerm) -> set[str]:
    if isinstance(t, (Var, Const)):
        return _type_names(t.type)
    if isinstance(t, App):
        return _all_type_names(t.fun) | _all_type_names(t.arg)
    if isinstance(t, Abs):
        return _type_names(t.var.type) | _all_type_names(t.body)
    if isinstance(t, TyApp):
        return _all_type_names(t.term) | _type_names(t.type)
    return _all_type_names(t.body) | {t.var}


def subst_type_in_term(t: FTerm, var: str, u: FType) -> FTerm:
    """``t`` with the free type variable ``var`` replaced by ``u``."""
    if isinstance(t, Var):
        return Var(t.name, subst_type(t.type, var, u))
    if isinstance(t, Const):
        return Const(t.name, subst_type(t.type, var, u))
    if isinstance(t, App):
        return App(subst_type_in_term(t.fun, var, u), subst_type_in_term(t.arg, var, u))
    if isinstance(t, Abs):
        v = Var(t.var.name, subst_type(t.var.type, var, u))
        return Abs(v, subst_type_in_term(t.body, var, u))
    if isinstance(t, TyApp):
        return TyApp(subst_type_in_term(t.term, var, u), subst_type(t.type, var, u))
    if t.var == var or var not in free_type_vars(t.body):
        return t
    if t.var in ftv(u):
        new = _fresh(t.var, ftv(u) | _all_type_names(t.body) | {var})
        body = subst_type_in_term(t.body, t.var, TVar(new))
        return TyAbs(new, subst_type_in_term(body, var, u))
    return TyAbs(t.var, subst_type_in_term(t.body, var, u))


def _subst(t: FTerm, x: str, u: FTerm, fv_u: set[str], ftv_u: set[str]) -> FTerm:
    if isinstance(t, Var):
        return u if t.name == x else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(_subst(t.fun, x, u, fv_u, ftv_u), _subst(t.arg, x, u, fv_u, ftv_u))
    if isinstance(t, TyApp):
        return TyApp(_subst(t.term, x, u, fv_u, ftv_u), t.type)
    if x not in free_term_vars(t):
        return t
    if isinstance(t, TyAbs):
        if t.var in ftv_u:
            new = _fresh(t.var, ftv_u | _all_type_names(t.body))
            return TyAbs(new, _subst(subst_type_in_term(t.body, t.var, TVar(new)),
                                     x, u, fv_u, ftv_u))
        return TyAbs(t.var, _subst(t.body, x, u, fv_u, ftv_u))
    v, body = t.var, t.body
    if v.name in fv_u:
        new = Var(_fresh(v.name, fv_u | _term_names(body) | {x}), v.type)
        body = _subst(body, v.name, new, {new.name}, ftv(new.type))
        v = new
    return Abs(v, _subst(body, x, u, fv_u, ftv_u))


def f_substitute(t: FTerm, x: Var, u: FTerm) -> FTerm:
    """Capture-avoiding ``t[x := u]`` (renames term and type binders as needed)."""
    return _subst(t, x.name, u, free_term_vars(u), free_type_vars(u))


# --- reduction -------------------------------------------------------------

def _contract(t: FTerm) -> FTerm | None:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        f = t.fun
        return _subst(f.body, f.var.name, t.arg, free_term_vars(t.arg), free_type_vars(t.arg))
    if isinstance(t, TyApp) and isinstance(t.term, TyAbs):
        return subst_type_in_term(t.term.body, t.term.var, t.type)
    return None


def _children(t: FTerm) -> list[tuple[FTerm, Callable[[FTerm], FTerm]]]:
    if isinstance(t, App):
        return [(t.fun, lambda c: App(c, t.arg)), (t.arg, lambda c: App(t.fun, c))]
    if isinstance(t, Abs):
        return [(t.body, lambda c: Abs(t.var, c))]
    if isinstance(t, TyApp):
        return [(t.term, lambda c: TyApp(c, t.type))]
    if isinstance(t, TyAbs):
        return [(t.body, lambda c: TyAbs(t.var, c))]
    return []


def _step(t: FTerm, outer: bool, left: bool, kinds: frozenset) -> FTerm | None:
    def here():
        if _redex_kind(t) in kinds:
            return _contract(t)
        return None

    if outer:
        r = here()
        if r is not None:
            return r
    kids = _children(t)
    for child, rebuild in (kids if left else reversed(kids)):
        r = _step(child, outer, left, kinds)
        if r is not None:
            return rebuild(r)
    return None if outer else here()


def _redex_kind(t: FTerm) -> str | None:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return "term"
    if isinstance(t, TyApp) and isinstance(t.term, TyAbs):
        return "type"
    return None


BOTH = frozenset({"term", "type"})


def step_leftmost_outermost(t: FTerm) -> FTerm | None:
    return _step(t, True, True, BOTH)


def step_rightmost_innermost(t: FTerm) -> FTerm | None:
    return _step(t, False, False, BOTH)


def _types_first(t: FTerm) -> FTerm | None:
    r = _step(t, True, True, frozenset({"type"}))
    return r if r is not None else _step(t, True, True, BOTH)


def _terms_first(t: FTerm) -> FTerm | None:
    r = _step(t, False, False, frozenset({"term"}))
    return r if r is not None else _step(t, False, False, BOTH)


STRATEGIES: dict[str, Callable[[FTerm], FTerm | None]] = {
    "leftmost-outermost": step_leftmost_outermost,
    "rightmost-innermost": step_rightmost_innermost,
    "types-first": _types_first,
    "terms-first": _terms_first,
}


class StepBudgetExceeded(RuntimeError):
    pass


def f_reduction_sequence(t: FTerm, strategy: str = "leftmost-outermost",
                         max_steps: int | None = None) -> Iterator[FTerm]:
    step = STRATEGIES[strategy]
    n = 0
    while t is not None:
        yield t
        t = step(t)
        n += 1
        if max_steps is not None and n > max_steps and t is not None:
            raise StepBudgetExceeded(f"no normal form within {max_steps} steps")


def f_normalize(t: FTerm, strategy: str = "leftmost-outermost",
                max_steps: int | None = None) -> FTerm:
    """Normal form under term beta and type beta ``(/\\a. t){U} -> t[U/a]``."""
    for t in f_reduction_sequence(t, strategy, max_steps):
        pass
    return t


def f_alpha_key(t: FTerm, terms: tuple[str, ...] = (), types: tuple[str, ...] = ()):
    if isinstance(t, Var):
        for i, name in enumerate(reversed(terms)):
            if name == t.name:
                return ("b", i)
        return ("f", t.name, type_key(t.type, types))
    if isinstance(t, Const):
        return ("c", t.name, type_key(t.type, types))
    if isinstance(t, App):
        return ("@", f_alpha_key(t.fun, terms, types), f_alpha_key(t.arg, terms, types))
    if isinstance(t, Abs):
        return ("λ", type_key(t.var.type, types),
                f_alpha_key(t.body, terms + (t.var.name,), types))
    if isinstance(t, TyApp):
        return ("{}", f_alpha_key(t.term, terms, types), type_key(t.type, types))
    return ("Λ", f_alpha_key(t.body, terms, types + (t.var,)))


def f_alpha_eq(t: FTerm, u: FTerm) -> bool:
    return f_alpha_key(t) == f_alpha_key(u)


# --- surface syntax --------------------------------------------------------

_FORALL_WORDS = ("forall", "∀")
_TYABS = ("/\\", "Λ")


def _parse_ftype(toks: _Tokens, sorts: set[str], tvars: frozenset) -> FType:
    tok = toks.peek()
    if tok in _FORALL_WORDS:
        toks.next()
        name = toks.next()
        toks.expect(".")
        return Forall(name, _parse_ftype(toks, sorts, tvars | {name}))
    tok = toks.next()
    if tok == "(":
        left = _parse_ftype(toks, sorts, tvars)
        toks.expect(")")
    elif tok in tvars:
        left = TVar(tok)
    elif tok == "tt":
        left = TT
    elif tok in sorts:
        left = Base(tok)
    else:
        raise TermSyntaxError(f"unknown sort or type variable {tok!r} in {toks.text!r}")
    if toks.peek() == "->":
        toks.next()
        return Arrow(left, _parse_ftype(toks, sorts, tvars))
    return left


BUILTIN_SORTS = frozenset({"t", "v", "e"})


def parse_ftype(text: str, sorts: set[str] | frozenset = BUILTIN_SORTS,
                tvars: frozenset = frozenset()) -> FType:
    """Parse ``forall a. (a -> t) -> a``; ``tt`` stands for ``v -> t``."""
    toks = _Tokens(text)
    ty = _parse_ftype(toks, set(sorts) | BUILTIN_SORTS, frozenset(tvars))
    toks.done()
    return ty


def default_signature() -> dict[str, FType]:
    prop = arrows(PROP, PROP, PROP)
    quant = Forall("a", Arrow(Arrow(TVar("a"), PROP), PROP))
    return {"and": prop, "or": prop, "implies": prop, "forall": quant, "exists": quant}


def parse_fterm(text: str, signature: Mapping[str, FType] | None = None,
                sorts: set[str] | frozenset = BUILTIN_SORTS) -> FTerm:
    """Parse System F terms: ``\\x:T. t``, ``/\\a. t`` (or ``Λa. t``), ``t{T}``."""
    signature = default_signature() if signature is None else signature
    sorts = set(sorts) | BUILTIN_SORTS
    toks = _Tokens(text)
    symbols = {"∧": "and", "∨": "or", "⊃": "implies", "∃": "exists", "∀": "forall"}

    def ident(name: str, scope, tvars) -> FTerm:
        name = symbols.get(name, name)
        if name in scope:
            return Var(name, scope[name])
        if name in signature:
            return Const(name, signature[name])
        raise TermSyntaxError(f"unknown constant {name!r} in {text!r}")

    def term(scope, tvars) -> FTerm:
        head = None
        while True:
            tok = toks.peek()
            if tok == "\\":
                toks.next()
                name = toks.next()
                toks.expect(":")
                ty = _parse_ftype(toks, sorts, tvars)
                toks.expect(".")
                arg = Abs(Var(name, ty), term({**scope, name: ty}, tvars))
            elif tok in _TYABS:
                toks.next()
                name = toks.next()
                toks.expect(".")
                arg = TyAbs(name, term(scope, tvars | {name}))
            elif tok == "(":
                toks.next()
                arg = term(scope, tvars)
                toks.expect(")")
            elif tok is not None and (tok[0].isalpha() or tok[0] == "_" or tok in symbols):
                toks.next()
                arg = ident(tok, scope, tvars)
            else:
                break
            while toks.peek() == "{":
                toks.next()
                arg = TyApp(arg, _parse_ftype(toks, sorts, tvars))
                toks.expect("}")
            head = arg if head is None else App(head, arg)
        if head is None:
            raise TermSyntaxError(f"expected a term at {toks.peek()!r} in {text!r}")
        return head

    t = term({}, frozenset())
    toks.done()
    return t


def format_fterm(t: FTerm) -> str:
    def atomic(x: FTerm) -> str:
        s = format_fterm(x)
        return s if isinstance(x, (Var, Const, TyApp)) else f"({s})"

    def binder_type(ty: FType) -> str:
        s = format_ftype(ty)
        return f"({s})" if isinstance(ty, (Arrow, Forall)) else s

    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Abs):
        return f"\\{t.var.name}:{binder_type(t.var.type)}. {format_fterm(t.body)}"
    if isinstance(t, TyAbs):
        return f"/\\{t.var}. {format_fterm(t.body)}"
    if isinstance(t, TyApp):
        inner = format_fterm(t.term)
        if not isinstance(t.term, (Var, Const, TyApp)):
            inner = f"({inner})"
        return f"{inner}{{{format_ftype(t.type)}}}"
    head, args = t, []
    while isinstance(head, App):
        args.append(head.arg)
        head = head.fun
    parts = [atomic(head)] + [atomic(a) for a in reversed(args[1:])]
    last = args[0]
    parts.append(format_fterm(last) if isinstance(last, (Abs, TyAbs)) else atomic(last))
    return " ".join(parts)


# --- formulas --------------------------------------------------------------

def _fspine(t: FTerm) -> tuple[FTerm, list[FTerm | FType]]:
    args: list[FTerm | FType] = []
    while isinstance(t, (App, TyApp)):
        if isinstance(t, App):
            args.append(t.arg)
            t = t.fun
        else:
            args.append(t.type)
            t = t.term
    return t, args[::-1]


def f_term_to_formula(t: FTerm) -> mg.Formula:
    """Read a normal term of type ``t`` (or a property) as a many-sorted formula.

    ``forall{s} (\\x:s. body)`` becomes a quantifier over sort ``s``.
    """
    ty = f_type_of(t)
    names = mg._Names(free_term_vars(t))
    if types_equal(ty, PROP):
        return _fprop(t, {}, names)
    while isinstance(ty, Arrow):
        ty = ty.cod
    if not types_equal(ty, PROP):
        raise mg.NotAFormula(f"{t} has type {f_type_of(t)}, not a proposition or property")
    return _find(t, {}, names)


def _fprop(t: FTerm, env, names) -> mg.Formula:
    head, args = _fspine(t)
    terms = [a for a in args if isinstance(a, FTerm)]
    if isinstance(head, Var):
        raise mg.NotAFormula(f"proposition {t} is headed by the variable {head.name}")
    if not isinstance(head, Const):
        raise mg.NotAFormula(f"{t} is not normal")
    if head.name in mg.CONNECTIVES:
        if len(terms) != 2:
            raise mg.NotAFormula(f"connective {head.name} is not saturated in {t}")
        return mg.CONNECTIVES[head.name](*(_fprop(a, env, names) for a in terms))
    if head.name in mg.QUANTIFIERS:
        types = [a for a in args if isinstance(a, FType)]
        if len(terms) != 1 or len(types) != 1:
            raise mg.NotAFormula(f"quantifier {head.name} is not saturated in {t}")
        (body,) = terms
        cls = mg.QUANTIFIERS[head.name]
        sort = format_ftype(types[0])
        if isinstance(body, Abs):
            name = names.bind(body.var.name)
            return cls(name, sort, _fprop(body.body, {**env, body.var.name: name}, names))
        v = Var(names.bind("x"), types[0])
        return cls(v.name, sort, _fprop(App(body, v), env, names))
    return mg.Pred(head.name, tuple(_find(a, env, names) for a in terms))


def _find(t: FTerm, env, names) -> mg.Formula:
    if isinstance(t, Var):
        return mg.Sym(env.get(t.name, t.name))
    if isinstance(t, Const):
        return mg.Sym(t.name)
    if isinstance(t, Abs):
        name = names.bind(t.var.name)
        inner = {**env, t.var.name: name}
        sort = format_ftype(t.var.type)
        if types_equal(f_type_of(t.body), PROP):
            return mg.Lam(name, sort, _fprop(t.body, inner, names))
        return mg.Lam(name, sort, _find(t.body, inner, names))
    head, args = _fspine(t)
    if isinstance(head, Const):
        return mg.Fn(head.name, tuple(_find(a, env, names) for a in args if isinstance(a, FTerm)))
    raise mg.NotAFormula(f"cannot read {t} as an individual")


# --- lexicon with coercions ------------------------------------------------

@dataclass(frozen=True)
class Coercion:
    word: str
    name: str
    term: FTerm
    source: FType
    target: FType
    exclusive: bool = False

    @property
    def type(self) -> FType:
        return Arrow(self.source, self.target)


@dataclass
class FLexicon:
    sorts: set[str] = field(default_factory=set)
    signature: dict[str, FType] = field(default_factory=default_signature)
    entries: dict[str, list[FTerm]] = field(default_factory=dict)
    coercions: dict[str, list[Coercion]] = field(default_factory=dict)

    def term(self, word: str) -> FTerm:
        try:
            return self.entries[word][0]
        except KeyError:
            raise mg.UnknownWord(word) from None

    def coercions_for(self, *words: str) -> list[Coercion]:
        out = []
        for w in words:
            out.extend(self.coercions.get(w, ()))
        return out

    def find_coercion(self, name: str) -> Coercion:
        for c in itertools.chain.from_iterable(self.coercions.values()):
            if c.name == name:
                return c
        raise KeyError(name)

    def parse_type(self, text: str) -> FType:
        return parse_ftype(text, self.sorts)

    def parse_term(self, text: str) -> FTerm:
        return parse_fterm(text, self.signature, self.sorts)


def load_f_lexicon(text: str) -> FLexicon:
    """Read ``sort``, ``const``, ``word :: term`` and ``coerce`` records.

    Coercions are written ``coerce WORD [NAME] : SRC -> TGT := TERM [exclusive|compatible]``.
    """
    lex = FLexicon()
    for number, line in mg.records(text):
        try:
            _read_f_record(lex, line)
        except (TermSyntaxError, FTypeError) as exc:
            raise mg.LexiconError(str(exc), number) from None
        except ValueError as exc:
            raise mg.LexiconError(str(exc), number) from None
    return lex


def _read_f_record(lex: FLexicon, line: str) -> tuple[str, object]:
    """Add one record to ``lex``; return its kind and what was added."""
    keyword, _, rest = line.partition(" ")
    rest = rest.strip()
    if keyword == "sort" and "::" not in line:
        lex.sorts.add(rest)
        return "sort", rest
    elif keyword == "const" and "::" not in line:
        name, _, ty = rest.partition(":")
        lex.signature[name.strip()] = lex.parse_type(ty)
        return "const", name.strip()
    elif keyword == "coerce" and "::" not in line:
        head, sep, body = rest.partition(":=")
        if not sep:
            raise ValueError(f"expected ':=' in {line!r}")
        names, _, ty_text = head.partition(":")
        word, *label = names.split()
        ty = lex.parse_type(ty_text)
        if not isinstance(ty, Arrow):
            raise ValueError(f"coercion type must be SRC -> TGT, got {ty}")
        flag = "compatible"
        body = body.strip()
        for f in ("exclusive", "compatible"):
            if body.endswith(" " + f):
                flag, body = f, body[: -len(f)].strip()
        term = lex.parse_term(body)
        actual = f_type_of(term)
        if not types_equal(actual, ty):
            raise FTypeError(f"coercion for {word}: declared {ty}, term has type {actual}")
        n = len(lex.coercions.get(word, ()))
        name = label[0] if label else f"{word}#{n}"
        coercion = Coercion(word, name, term, ty.dom, ty.cod, flag == "exclusive")
        lex.coercions.setdefault(word, []).append(coercion)
        return "coerce", coercion
    else:
        word, sep, body = line.partition("::")
        if not sep:
            raise ValueError(f"unrecognized record {line!r}")
        term = lex.parse_term(body.strip())
        f_type_of(term)
        lex.entries.setdefault(word.strip(), []).append(term)
        return "entry", (word.strip(), term)


F_BUNDLED = ("fictive", "livre")


def read_f_lexicon(source: str | Path) -> FLexicon:
    if isinstance(source, str) and source in F_BUNDLED:
        text = resources.files("catgram.data").joinpath(f"{source}.lex").read_text("utf-8")
        return load_f_lexicon(text)
    return load_f_lexicon(Path(source).read_text(encoding="utf-8"))


# --- polymorphic conjunction and copredication -----------------------------

def polymorphic_and() -> FTerm:
    """``/\\a /\\b \\P \\Q /\\x \\x \\f \\g. and (P (f x)) (Q (g x))``."""
    a, b, xi = TVar("a"), TVar("b"), TVar("xi")
    P = Var("P", Arrow(a, PROP))
    Q = Var("Q", Arrow(b, PROP))
    x = Var("x", xi)
    f = Var("f", Arrow(xi, a))
    g = Var("g", Arrow(xi, b))
    conj = Const("and", arrows(PROP, PROP, PROP))
    body = apply(conj, App(P, App(f, x)), App(Q, App(g, x)))
    inner = Abs(x, Abs(f, Abs(g, body)))
    return TyAbs("a", TyAbs("b", Abs(P, Abs(Q, TyAbs("xi", inner)))))


class MissingCoercion(LookupError):
    pass


class ExclusivityConflict(ValueError):
    pass


def _identity(ty: FType) -> FTerm:
    x = Var("x", ty)
    return Abs(x, x)


def _candidates(lex: FLexicon, words, source: FType, target: FType) -> list[Coercion | None]:
    if types_equal(source, target):
        return [None]
    found = [c for c in lex.coercions_for(*words)
             if types_equal(c.source, source) and types_equal(c.target, target)]
    if not found:
        raise MissingCoercion(f"no coercion from {source} to {target} for {', '.join(words)}")
    return found


def copredicate(x_word: str, p_word: str, q_word: str, lex: FLexicon) -> list[mg.Formula]:
    """Conjoin two predicates on possibly different facets of one object."""
    x = lex.term(x_word)
    P, Q = lex.term(p_word), lex.term(q_word)
    xi = f_type_of(x)
    p_ty, q_ty = f_type_of(P), f_type_of(Q)
    for word, ty in ((p_word, p_ty), (q_word, q_ty)):
        if not (isinstance(ty, Arrow) and types_equal(ty.cod, PROP)):
            raise FTypeError(f"{word} has type {ty}, not a predicate")
    alpha, beta = p_ty.dom, q_ty.dom
    fs = _candidates(lex, (x_word, p_word), xi, alpha)
    gs = _candidates(lex, (x_word, q_word), xi, beta)
    out: dict = {}
    conflicts = []
    for f, g in itertools.product(fs, gs):
        if f is not None and g is not None and f != g and f.exclusive and g.exclusive:
            conflicts.append((f.name, g.name))
            continue
        fterm = _identity(xi) if f is None else f.term
        gterm = _identity(xi) if g is None else g.term
        t = apply(polymorphic_and(), alpha, beta, P, Q, xi, x, fterm, gterm)
        normal = f_normalize(t)
        out.setdefault(f_alpha_key(normal), f_term_to_formula(normal))
    if not out:
        a, b = conflicts[0]
        raise ExclusivityConflict(f"coercions {a} and {b} exclude each other")
    return list(out.values())


# --- type raising and fictive motion ---------------------------------------

def raised(ty: FType) -> FType:
    """``s`` raised over event-dependent propositions: ``(s -> tt) -> tt``."""
    return Arrow(Arrow(ty, TT), TT)


def type_raise(u: FTerm) -> FTerm:
    """``u : s`` becomes ``\\P:s->tt. \\e:v. P u e``.

    Not a reduction: an explicit coercion step, logged whenever applied.
    """
    ty = f_type_of(u)
    avoid = free_term_vars(u)
    P = Var(_fresh("P", avoid) if "P" in avoid else "P", Arrow(ty, TT))
    e = Var(_fresh("e", avoid) if "e" in avoid else "e", EVENT)
    log.info("type raising %s : %s to %s", u, ty, raised(ty))
    return Abs(P, Abs(e, apply(P, u, e)))


def _match(pattern: FType, actual: FType, var: str) -> FType | None:
    """Find ``U`` with ``pattern[U/var] == actual``."""
    found: dict[str, FType] = {}

    def go(p: FType, a: FType) -> bool:
        if isinstance(p, TVar) and p.name == var:
            if var in found:
                return types_equal(found[var], a)
            found[var] = a
            return True
        if isinstance(p, Arrow) and isinstance(a, Arrow):
            return go(p.dom, a.dom) and go(p.cod, a.cod)
        return types_equal(p, a) if not isinstance(p, (Arrow, Forall)) else False

    return found.get(var) if go(pattern, actual) else None


def instantiate(fun: FTerm, arg: FTerm) -> FTerm:
    """Apply a possibly polymorphic ``fun`` to ``arg``, inferring type arguments."""
    ty = f_type_of(fun)
    arg_ty = f_type_of(arg)
    while isinstance(ty, Forall):
        if not isinstance(ty.body, Arrow):
            break
        u = _match(ty.body.dom, arg_ty, ty.var)
        if u is None:
            raise FTypeError(f"cannot instantiate {fun} : {ty} for argument of type {arg_ty}")
        fun = TyApp(fun, u)
        ty = subst_type(ty.body, ty.var, u)
    return App(fun, arg)


@dataclass(frozen=True)
class FictiveTrace:
    """Every intermediate of the path-to-traveller derivation."""

    subject: FTerm           # (le{s} noun)
    subject_steps: tuple[FTerm, ...]
    raised_subject: FTerm
    coercion: Coercion
    coerced: FTerm           # (h raised_subject)
    coerced_normal: FTerm
    sentence: FTerm          # ((h raised_subject) verb)
    normal: FTerm


def fictive_motion_trace(lex: FLexicon, sentence: str = "le chemin monte") -> FictiveTrace:
    det, noun, verb = sentence.split()
    subject = instantiate(lex.term(det), lex.term(noun))
    steps = tuple(f_reduction_sequence(subject))
    u = steps[-1]
    pred = lex.term(verb)
    sort, pred_ty = f_type_of(u), f_type_of(pred)
    if not isinstance(pred_ty, Arrow):
        raise FTypeError(f"{verb} has type {pred_ty}, not a predicate")
    if types_equal(pred_ty.dom, sort):
        raise ValueError(f"{verb} applies to {noun} directly; no coercion needed")
    lifted = type_raise(u)
    wanted = Arrow(raised(sort), raised(pred_ty.dom))
    found = [c for c in lex.coercions_for(noun, verb) if types_equal(c.type, wanted)]
    if not found:
        raise MissingCoercion(f"no coercion {wanted} for {noun} or {verb}")
    h = found[0]
    coerced = App(h.term, lifted)
    coerced_normal = f_normalize(coerced)
    whole = App(coerced_normal, pred)
    return FictiveTrace(subject, steps, lifted, h, coerced, coerced_normal, whole,
                        f_normalize(whole))


def fictive_motion(lex: FLexicon, sentence: str = "le chemin monte") -> FTerm:
    """Normal form of ``((h (le chemin)) monte)`` with the raising step inserted."""
    return fictive_motion_trace(lex, sentence).normal

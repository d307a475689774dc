"""Simply typed lambda calculus with typed constants.

Terms are named (Church style: every variable carries its type) and are
compared up to alpha-equivalence through a nameless key.  Reduction is
beta only; there is no eta rule.

>>> sig = Signature.default()
>>> sig["dort"] = parse_type("e -> t")
>>> t = parse_term(r"\\x:e. dort x", sig)
>>> print(type_of(t))
e -> t
>>> print(beta_normalize(parse_term(r"(\\x:e. x) c", {"c": E})))
c
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, MutableMapping


# --- types -----------------------------------------------------------------

class SemType:
    __slots__ = ()

    def __str__(self):
        return format_type(self)


@dataclass(frozen=True, repr=False)
class Base(SemType):
    name: str

    def __repr__(self):
        return f"Base({self.name!r})"


@dataclass(frozen=True, repr=False)
class Arrow(SemType):
    dom: SemType
    cod: SemType

    def __repr__(self):
        return f"Arrow({self.dom!r}, {self.cod!r})"


@dataclass(frozen=True, repr=False)
class TypeMeta(SemType):
    """Placeholder for the not yet known type of an undeclared constant."""

    id: int

    def __repr__(self):
        return f"TypeMeta({self.id})"


E = Base("e")
T = Base("t")
V = Base("v")
BASE_TYPES = {"e": E, "t": T, "v": V}


def arrows(*types: SemType) -> SemType:
    """``arrows(a, b, c)`` is ``a -> (b -> c)``."""
    out = types[-1]
    for ty in reversed(types[:-1]):
        out = Arrow(ty, out)
    return out


def format_type(ty: SemType) -> str:
    if isinstance(ty, Base):
        return ty.name
    if isinstance(ty, TypeMeta):
        return f"?{ty.id}"
    dom = format_type(ty.dom)
    if isinstance(ty.dom, Arrow):
        dom = f"({dom})"
    return f"{dom} -> {format_type(ty.cod)}"


# --- terms -----------------------------------------------------------------

class Term:
    __slots__ = ()

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class Var(Term):
    name: str
    type: SemType


@dataclass(frozen=True)
class Const(Term):
    name: str
    type: SemType


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Abs(Term):
    var: Var
    body: Term


def apply(fun: Term, *args: Term) -> Term:
    for a in args:
        fun = App(fun, a)
    return fun


def lam(var: Var, *rest) -> Term:
    """``lam(x, y, body)`` is ``\\x. \\y. body``."""
    *more, body = rest
    for v in reversed(more):
        body = Abs(v, body)
    return Abs(var, body)


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + size(t.fun) + size(t.arg)
    if isinstance(t, Abs):
        return 1 + size(t.body)
    return 1


class Signature(dict):
    """Constant name -> type.  ``default()`` holds the logical constants."""

    @classmethod
    def default(cls) -> Signature:
        prop = arrows(T, T, T)
        quant = Arrow(Arrow(E, T), T)
        return cls({"and": prop, "or": prop, "implies": prop,
                    "exists": quant, "forall": quant})


LOGICAL_CONSTANTS = frozenset(Signature.default())


# --- typing ----------------------------------------------------------------

class TypeMismatch(TypeError):
    pass


def type_of(t: Term, ctx: Mapping[str, SemType] | None = None) -> SemType:
    """The type of ``t``; raises :class:`TypeMismatch` on ill-typed terms."""
    ctx = ctx or {}
    if isinstance(t, Var):
        bound = ctx.get(t.name)
        if bound is not None and bound != t.type:
            raise TypeMismatch(f"variable {t.name} used at {t.type}, bound at {bound}")
        return t.type
    if isinstance(t, Const):
        return t.type
    if isinstance(t, Abs):
        return Arrow(t.var.type, type_of(t.body, {**ctx, t.var.name: t.var.type}))
    fun_ty = type_of(t.fun, ctx)
    arg_ty = type_of(t.arg, ctx)
    if not isinstance(fun_ty, Arrow):
        raise TypeMismatch(f"in ({t}): {t.fun} has type {fun_ty}, not a function type")
    if fun_ty.dom != arg_ty:
        raise TypeMismatch(
            f"in ({t}): {t.fun} expects {fun_ty.dom} but {t.arg} has type {arg_ty}")
    return fun_ty.cod


# --- substitution ----------------------------------------------------------

def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return free_vars(t.fun) | free_vars(t.arg)
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.var.name}
    return set()


def all_names(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return all_names(t.fun) | all_names(t.arg)
    if isinstance(t, Abs):
        return all_names(t.body) | {t.var.name}
    return set()


def fresh_name(base: str, avoid: set[str]) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def _subst(t: Term, x: str, u: Term, fv_u: set[str]) -> Term:
    if isinstance(t, Var):
        return u if t.name == x else t
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(_subst(t.fun, x, u, fv_u), _subst(t.arg, x, u, fv_u))
    v = t.var
    if v.name == x:
        return t
    body = t.body
    if v.name in fv_u and x in free_vars(body):
        new = Var(fresh_name(v.name, fv_u | all_names(body) | {x}), v.type)
        body = _subst(body, v.name, new, {new.name})
        v = new
    return Abs(v, _subst(body, x, u, fv_u))


def substitute(t: Term, x: Var, u: Term) -> Term:
    """Capture-avoiding ``t[x := u]``."""
    if type_of(u) != x.type:
        raise TypeMismatch(f"cannot substitute {u} : {type_of(u)} for {x.name} : {x.type}")
    return _subst(t, x.name, u, free_vars(u))


# --- reduction -------------------------------------------------------------

class StepBudgetExceeded(RuntimeError):
    pass


def _contract(t: App) -> Term:
    f = t.fun
    return _subst(f.body, f.var.name, t.arg, free_vars(t.arg))


def _is_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Abs)


def step_leftmost_outermost(t: Term) -> Term | None:
    if _is_redex(t):
        return _contract(t)
    if isinstance(t, App):
        f = step_leftmost_outermost(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = step_leftmost_outermost(t.arg)
        return None if a is None else App(t.fun, a)
    if isinstance(t, Abs):
        b = step_leftmost_outermost(t.body)
        return None if b is None else Abs(t.var, b)
    return None


def step_rightmost_innermost(t: Term) -> Term | None:
    if isinstance(t, App):
        a = step_rightmost_innermost(t.arg)
        if a is not None:
            return App(t.fun, a)
        f = step_rightmost_innermost(t.fun)
        if f is not None:
            return App(f, t.arg)
        return _contract(t) if _is_redex(t) else None
    if isinstance(t, Abs):
        b = step_rightmost_innermost(t.body)
        return None if b is None else Abs(t.var, b)
    return None


STRATEGIES: dict[str, Callable[[Term], Term | None]] = {
    "leftmost-outermost": step_leftmost_outermost,
    "rightmost-innermost": step_rightmost_innermost,
}


def reduction_sequence(t: Term, strategy: str = "leftmost-outermost",
                       max_steps: int | None = None) -> Iterator[Term]:
    """Yield ``t`` and every term reached by single beta steps."""
    step = STRATEGIES[strategy]
    n = 0
    while t is not None:
        yield t
        t = step(t)
        n += 1
        if max_steps is not None and n > max_steps and t is not None:
            raise StepBudgetExceeded(f"no normal form within {max_steps} steps")


def beta_normalize(t: Term, strategy: str = "leftmost-outermost",
                   max_steps: int | None = None) -> Term:
    for t in reduction_sequence(t, strategy, max_steps):
        pass
    return t


def is_normal(t: Term) -> bool:
    return step_leftmost_outermost(t) is None


# --- alpha-equivalence -----------------------------------------------------

def alpha_key(t: Term, _bound: tuple[str, ...] = ()):
    """Nameless (de Bruijn) rendering of ``t``; equal keys iff alpha-equal."""
    if isinstance(t, Var):
        for i, name in enumerate(reversed(_bound)):
            if name == t.name:
                return ("b", i)
        return ("f", t.name, t.type)
    if isinstance(t, Const):
        return ("c", t.name, t.type)
    if isinstance(t, App):
        return ("@", alpha_key(t.fun, _bound), alpha_key(t.arg, _bound))
    return ("λ", t.var.type, alpha_key(t.body, _bound + (t.var.name,)))


def alpha_eq(t: Term, u: Term) -> bool:
    return alpha_key(t) == alpha_key(u)


# --- surface syntax --------------------------------------------------------

class TermSyntaxError(ValueError):
    pass


_SYMBOLS = {"∧": "and", "∨": "or", "⊃": "implies", "∃": "exists", "∀": "forall"}
_TOKEN = re.compile(r"""\s*(?:
    (?P<arrow>->|→)
  | (?P<lam>\\+|λ)
  | (?P<sym>[:.(){}]|/\\|[∧∨⊃∃∀Λ])
  | (?P<ident>[^\W\d][\w']*)
)""", re.VERBOSE)


def tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r} "
                                  f"at position {pos} in {text!r}")
        kind = m.lastgroup
        tokens.append({"arrow": "->", "lam": "\\"}.get(kind, m.group(kind)))
        pos = m.end()
    return tokens


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items = tokenize(text)
        self.pos = 0

    def peek(self) -> str | None:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise TermSyntaxError(f"unexpected end of input in {self.text!r}")
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.next()
        if got != tok:
            raise TermSyntaxError(f"expected {tok!r}, got {got!r} in {self.text!r}")

    def done(self):
        if self.peek() is not None:
            raise TermSyntaxError(f"unexpected {self.peek()!r} in {self.text!r}")


def _parse_type(toks: _Tokens, base: Mapping[str, SemType]) -> SemType:
    tok = toks.next()
    if tok == "(":
        left = _parse_type(toks, base)
        toks.expect(")")
    elif tok in base:
        left = base[tok]
    else:
        raise TermSyntaxError(f"unknown type {tok!r} in {toks.text!r}")
    if toks.peek() == "->":
        toks.next()
        return Arrow(left, _parse_type(toks, base))
    return left


def parse_type(text: str) -> SemType:
    """Parse ``e -> (e -> t)``; arrows associate to the right."""
    toks = _Tokens(text)
    ty = _parse_type(toks, BASE_TYPES)
    toks.done()
    return ty


class UnknownConstant(TermSyntaxError):
    pass


def parse_term(text: str, signature: Mapping[str, SemType] | None = None,
               infer: MutableMapping[str, TypeMeta] | None = None) -> Term:
    """Parse ``\\x:e. body`` / ``λx:e. body`` with left-associative application.

    Identifiers that are not bound variables are constants looked up in
    ``signature``.  When ``infer`` is a dict, unknown constants get a
    :class:`TypeMeta` recorded there instead of raising.
    """
    signature = Signature.default() if signature is None else signature
    toks = _Tokens(text)
    counter = [len(infer) if infer is not None else 0]

    def ident(name: str, scope: Mapping[str, SemType]) -> Term:
        name = _SYMBOLS.get(name, name)
        if name in scope:
            return Var(name, scope[name])
        if name in signature:
            return Const(name, signature[name])
        if infer is not None:
            if name not in infer:
                infer[name] = TypeMeta(counter[0])
                counter[0] += 1
            return Const(name, infer[name])
        raise UnknownConstant(f"unknown constant {name!r} in {text!r}")

    def term(scope) -> Term:
        head = None
        while True:
            tok = toks.peek()
            if tok == "\\":
                toks.next()
                name = toks.next()
                toks.expect(":")
                ty = _parse_type(toks, BASE_TYPES)
                toks.expect(".")
                v = Var(name, ty)
                arg = Abs(v, term({**scope, name: ty}))
            elif tok == "(":
                toks.next()
                arg = term(scope)
                toks.expect(")")
            elif tok is not None and (tok[0].isalpha() or tok[0] == "_" or tok in _SYMBOLS):
                toks.next()
                arg = ident(tok, scope)
            else:
                break
            head = arg if head is None else App(head, arg)
        if head is None:
            raise TermSyntaxError(f"expected a term at {toks.peek()!r} in {text!r}")
        return head

    t = term({})
    toks.done()
    return t


def format_term(t: Term, unicode: bool = False) -> str:
    lam_sym = "λ" if unicode else "\\"

    def atomic(x: Term) -> str:
        s = format_term(x, unicode)
        return s if isinstance(x, (Var, Const)) else f"({s})"

    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Abs):
        ty = format_type(t.var.type)
        if isinstance(t.var.type, Arrow):
            ty = f"({ty})"
        return f"{lam_sym}{t.var.name}:{ty}. {format_term(t.body, unicode)}"
    head, args = t, []
    while isinstance(head, App):
        args.append(head.arg)
        head = head.fun
    parts = [atomic(head)]
    for a in reversed(args[1:]):
        parts.append(atomic(a))
    last = args[0]
    parts.append(format_term(last, unicode) if isinstance(last, Abs) else atomic(last))
    return " ".join(parts)


# --- inference of undeclared constant types --------------------------------

class _Unifier:
    def __init__(self):
        self.sub: dict[int, SemType] = {}
        # parser metas are >= 0, result metas are negative
        self.next_id = 0

    def resolve(self, ty: SemType) -> SemType:
        if isinstance(ty, TypeMeta):
            if ty.id in self.sub:
                r = self.resolve(self.sub[ty.id])
                self.sub[ty.id] = r
                return r
            return ty
        if isinstance(ty, Arrow):
            return Arrow(self.resolve(ty.dom), self.resolve(ty.cod))
        return ty

    def _occurs(self, m: int, ty: SemType) -> bool:
        if isinstance(ty, TypeMeta):
            return ty.id == m
        if isinstance(ty, Arrow):
            return self._occurs(m, ty.dom) or self._occurs(m, ty.cod)
        return False

    def unify(self, a: SemType, b: SemType) -> bool:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return True
        if isinstance(a, TypeMeta) or isinstance(b, TypeMeta):
            m, other = (a, b) if isinstance(a, TypeMeta) else (b, a)
            if self._occurs(m.id, other):
                return False
            self.sub[m.id] = other
            return True
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            return self.unify(a.dom, b.dom) and self.unify(a.cod, b.cod)
        return False

    def infer(self, t: Term, ctx: Mapping[str, SemType]) -> SemType:
        if isinstance(t, Var):
            return ctx.get(t.name, t.type)
        if isinstance(t, Const):
            return t.type
        if isinstance(t, Abs):
            return Arrow(t.var.type, self.infer(t.body, {**ctx, t.var.name: t.var.type}))
        f = self.infer(t.fun, ctx)
        a = self.infer(t.arg, ctx)
        self.next_id -= 1
        res = TypeMeta(self.next_id)
        if not self.unify(f, Arrow(a, res)):
            raise TypeMismatch(f"in ({t}): {t.fun} : {self.resolve(f)} "
                               f"cannot take {t.arg} : {self.resolve(a)}")
        return res


def _resolve_consts(t: Term, u: _Unifier) -> Term:
    if isinstance(t, Const):
        return Const(t.name, u.resolve(t.type))
    if isinstance(t, App):
        return App(_resolve_consts(t.fun, u), _resolve_consts(t.arg, u))
    if isinstance(t, Abs):
        return Abs(t.var, _resolve_consts(t.body, u))
    return t


def _has_meta(ty: SemType) -> bool:
    if isinstance(ty, TypeMeta):
        return True
    return isinstance(ty, Arrow) and (_has_meta(ty.dom) or _has_meta(ty.cod))


def infer_constants(t: Term, expected: SemType) -> tuple[Term, dict[str, SemType]]:
    """Resolve :class:`TypeMeta` constant types in ``t`` so that it has type ``expected``.

    Returns the resolved term and the inferred constant types.  Raises
    :class:`TypeMismatch` when no assignment exists or a type stays unknown.
    """
    u = _Unifier()
    actual = u.infer(t, {})
    if not u.unify(actual, expected):
        raise TypeMismatch(f"expected {expected}, got {u.resolve(actual)}")
    out = _resolve_consts(t, u)
    inferred = {}
    for c in constants(out):
        if _has_meta(c.type):
            raise TypeMismatch(f"cannot determine the type of constant {c.name}")
        inferred[c.name] = c.type
    type_of(out)
    return out, inferred


def constants(t: Term) -> Iterator[Const]:
    if isinstance(t, Const):
        yield t
    elif isinstance(t, App):
        yield from constants(t.fun)
        yield from constants(t.arg)
    elif isinstance(t, Abs):
        yield from constants(t.body)

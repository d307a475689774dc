"""Independent reference implementations used by the tests.

* a forward-chaining derivability oracle for the product-free Lambek
  calculus, written against the cut-free sequent calculus (left and right
  rules) rather than the natural-deduction rules the prover searches;
* a de Bruijn-index substitution and normalizer for the simply typed
  lambda calculus, sharing no code with the named implementation;
* type-directed generators of random well-typed terms.
"""

from __future__ import annotations

import itertools
import random

from catgram.categories import Atom, Category, Over, Under, connectives


# --- Lambek calculus ---------------------------------------------------------

def categories_by_size(atoms: tuple[str, ...], max_conn: int) -> list[list[Category]]:
    """``out[k]`` lists every category with exactly ``k`` connectives."""
    out: list[list[Category]] = [[Atom(a) for a in atoms]]
    for k in range(1, max_conn + 1):
        level = []
        for i in range(k):
            for left in out[i]:
                for right in out[k - 1 - i]:
                    level.append(Under(left, right))
                    level.append(Over(left, right))
        out.append(level)
    return out


def target_sequents(atoms=("a", "b"), max_len=3, max_conn=4):
    """Every sequent with 1..max_len antecedent categories, at most max_conn connectives."""
    cats = categories_by_size(atoms, max_conn)
    for n in range(1, max_len + 1):
        for sizes in itertools.product(range(max_conn + 1), repeat=n + 1):
            if sum(sizes) > max_conn:
                continue
            for combo in itertools.product(*(cats[s] for s in sizes)):
                yield combo[:-1], combo[-1]


class LambekOracle:
    """All derivable sequents of a size-bounded universe, by saturation.

    The universe is: non-empty antecedent, at most ``max_conn`` connectives,
    and ``length + connectives <= bound``.  Every rule of the cut-free
    sequent calculus adds exactly one connective and never decreases
    ``length + connectives`` from premise to conclusion, so the universe is
    closed under premises and a stratified pass by connective count is
    exhaustive:

        p |- p
        A, G |- B    =>  G |- A\\B        (G non-empty)
        G, A |- B    =>  G |- B/A         (G non-empty)
        D |- A   and  G, B, T |- C   =>  G, D, A\\B, T |- C
        D |- A   and  G, B, T |- C   =>  G, B/A, D, T |- C
    """

    def __init__(self, atoms=("a", "b"), max_conn=4, bound=7):
        self.max_conn = max_conn
        self.bound = bound
        self.derivable: set[tuple[tuple[Category, ...], Category]] = set()
        by_k: list[list[tuple[tuple[Category, ...], Category]]] = [[] for _ in range(max_conn + 1)]
        for a in atoms:
            by_k[0].append(((Atom(a),), Atom(a)))
        for k in range(1, max_conn + 1):
            new = set()
            for ant, goal in by_k[k - 1]:
                if len(ant) >= 2:
                    new.add((ant[1:], Under(ant[0], goal)))
                    new.add((ant[:-1], Over(goal, ant[-1])))
            for k1 in range(k):
                k2 = k - 1 - k1
                # right premises indexed by the category occurring at each position
                for d_ant, a in by_k[k1]:
                    for g_ant, c in by_k[k2]:
                        n = len(d_ant) + len(g_ant)
                        if n + k > bound:
                            continue
                        for i, b in enumerate(g_ant):
                            left, right = g_ant[:i], g_ant[i + 1:]
                            new.add((left + d_ant + (Under(a, b),) + right, c))
                            new.add((left + (Over(b, a),) + d_ant + right, c))
            by_k[k] = [s for s in new if self._in_universe(s, k)]
        for level in by_k:
            self.derivable.update(level)

    def _in_universe(self, seq, k) -> bool:
        ant, _ = seq
        return 1 <= len(ant) and len(ant) + k <= self.bound

    def __contains__(self, seq) -> bool:
        ant, goal = seq
        k = sum(connectives(c) for c in ant) + connectives(goal)
        if k > self.max_conn or len(ant) + k > self.bound or not ant:
            raise ValueError("sequent outside the oracle's universe")
        return (tuple(ant), goal) in self.derivable


# --- simply typed lambda calculus, nameless ------------------------------------

# de Bruijn terms: ("var", i) | ("const", name) | ("app", f, a) | ("lam", body)

def to_debruijn(t, bound=()):
    from catgram.lambda_core import Abs, App, Const, Var
    if isinstance(t, Var):
        if t.name in bound:
            return ("var", len(bound) - 1 - max(i for i, n in enumerate(bound) if n == t.name))
        return ("free", t.name)
    if isinstance(t, Const):
        return ("const", t.name)
    if isinstance(t, App):
        return ("app", to_debruijn(t.fun, bound), to_debruijn(t.arg, bound))
    if isinstance(t, Abs):
        return ("lam", to_debruijn(t.body, bound + (t.var.name,)))
    raise TypeError(t)


def shift(t, d, cutoff=0):
    tag = t[0]
    if tag == "var":
        return ("var", t[1] + d) if t[1] >= cutoff else t
    if tag == "app":
        return ("app", shift(t[1], d, cutoff), shift(t[2], d, cutoff))
    if tag == "lam":
        return ("lam", shift(t[1], d, cutoff + 1))
    return t


def db_subst(t, j, s):
    """``t[j := s]`` on de Bruijn terms."""
    tag = t[0]
    if tag == "var":
        return s if t[1] == j else t
    if tag == "app":
        return ("app", db_subst(t[1], j, s), db_subst(t[2], j, s))
    if tag == "lam":
        return ("lam", db_subst(t[1], j + 1, shift(s, 1)))
    return t


def db_beta(body, arg):
    return shift(db_subst(body, 0, shift(arg, 1)), -1)


def db_subst_free(t, name, s, depth=0):
    """Replace the free variable ``name`` by the closed-over term ``s``."""
    tag = t[0]
    if tag == "free":
        return shift(s, depth) if t[1] == name else t
    if tag == "app":
        return ("app", db_subst_free(t[1], name, s, depth), db_subst_free(t[2], name, s, depth))
    if tag == "lam":
        return ("lam", db_subst_free(t[1], name, s, depth + 1))
    return t


def db_normalize(t):
    """Normal-order normalization on de Bruijn terms."""
    tag = t[0]
    if tag == "lam":
        return ("lam", db_normalize(t[1]))
    if tag == "app":
        f = db_whnf(t[1])
        if f[0] == "lam":
            return db_normalize(db_beta(f[1], t[2]))
        return ("app", db_normalize(f), db_normalize(t[2]))
    return t


def db_whnf(t):
    while t[0] == "app":
        f = db_whnf(t[1])
        if f[0] != "lam":
            return ("app", f, t[2])
        t = db_beta(f[1], t[2])
    return t


# --- random well-typed terms ---------------------------------------------------

class STLCGenerator:
    """Type-directed random terms with deliberately planted redexes."""

    def __init__(self, rng: random.Random, max_nodes: int = 30):
        from catgram import lambda_core as lc
        self.lc = lc
        self.rng = rng
        self.max_nodes = max_nodes
        e, t = lc.E, lc.T
        self.types = [e, t, lc.Arrow(e, t), lc.Arrow(e, e), lc.Arrow(t, t),
                      lc.Arrow(lc.Arrow(e, t), t), lc.Arrow(e, lc.Arrow(e, t))]
        self.consts = {ty: [lc.Const(f"c{j}_{i}", ty) for i in range(2)]
                       for j, ty in enumerate(self.types)}
        self.names = itertools.count()

    def term(self, ty=None):
        ty = ty or self.rng.choice(self.types)
        for _ in range(100):
            t = self._gen(ty, {}, self.rng.randint(2, 5))
            if self.lc.size(t) <= self.max_nodes:
                return t
        return self.consts[ty][0]

    def _fresh(self):
        return f"x{next(self.names) % 4}"

    def _gen(self, ty, ctx, depth):
        lc, rng = self.lc, self.rng
        leaves = [lc.Var(n, v) for n, v in ctx.items() if v == ty]
        leaves += self.consts.get(ty, [])
        if depth <= 0 or rng.random() < 0.2:
            if leaves:
                return rng.choice(leaves)
            if isinstance(ty, lc.Arrow):
                return self._abs(ty, ctx, 0)
            return lc.Const(f"k_{lc.format_type(ty)}", ty)
        choice = rng.random()
        if choice < 0.35:
            # planted redex: (\x:A. body) arg
            a = rng.choice(self.types)
            x = lc.Var(self._fresh(), a)
            body = self._gen(ty, {**ctx, x.name: a}, depth - 1)
            return lc.App(lc.Abs(x, body), self._gen(a, ctx, depth - 1))
        if choice < 0.6 and isinstance(ty, lc.Arrow):
            return self._abs(ty, ctx, depth)
        if choice < 0.9:
            a = rng.choice(self.types)
            return lc.App(self._gen(lc.Arrow(a, ty), ctx, depth - 1), self._gen(a, ctx, depth - 1))
        return rng.choice(leaves) if leaves else self._gen(ty, ctx, 0)

    def _abs(self, ty, ctx, depth):
        x = self.lc.Var(self._fresh(), ty.dom)
        return self.lc.Abs(x, self._gen(ty.cod, {**ctx, x.name: ty.dom}, depth - 1))


class FGenerator:
    """Random well-typed System F terms, with term and type redexes."""

    def __init__(self, rng: random.Random, max_nodes: int = 25):
        from catgram import systemf as sf
        self.sf = sf
        self.rng = rng
        self.max_nodes = max_nodes
        voie, hum, t = sf.Base("voie"), sf.Base("hum"), sf.PROP
        self.bases = [voie, hum, t]
        self.types = self.bases + [sf.Arrow(voie, t), sf.Arrow(hum, t), sf.Arrow(voie, hum),
                                   sf.Arrow(sf.Arrow(hum, t), t)]
        a = sf.TVar("a")
        self.poly = [
            sf.Const("tau", sf.Forall("a", sf.Arrow(sf.Arrow(a, t), a))),
            sf.Const("forall", sf.Forall("a", sf.Arrow(sf.Arrow(a, t), t))),
            sf.Const("id", sf.Forall("a", sf.Arrow(a, a))),
        ]
        self.names = itertools.count()

    def term(self, ty=None):
        ty = ty or self.rng.choice(self.types)
        for _ in range(100):
            t = self._gen(ty, {}, self.rng.randint(2, 5))
            if self.sf.size(t) <= self.max_nodes:
                return t
        return self.sf.Const("k", ty)

    def _gen(self, ty, ctx, depth):
        sf, rng = self.sf, self.rng
        leaves = [sf.Var(n, v) for n, v in ctx.items() if sf.types_equal(v, ty)]
        if depth <= 0 or rng.random() < 0.15:
            if leaves:
                return rng.choice(leaves)
            if isinstance(ty, sf.Arrow):
                return self._abs(ty, ctx, 0)
            return sf.Const(f"c_{sf.format_ftype(ty)}", ty)
        choice = rng.random()
        if choice < 0.2:
            a = rng.choice(self.types)
            x = sf.Var(f"x{next(self.names) % 4}", a)
            return sf.App(sf.Abs(x, self._gen(ty, {**ctx, x.name: a}, depth - 1)),
                          self._gen(a, ctx, depth - 1))
        if choice < 0.4:
            return self._type_redex(ty, ctx, depth)
        if choice < 0.55:
            return self._poly_use(ty, ctx, depth)
        if choice < 0.7 and isinstance(ty, sf.Arrow):
            return self._abs(ty, ctx, depth)
        a = rng.choice(self.types)
        return sf.App(self._gen(sf.Arrow(a, ty), ctx, depth - 1), self._gen(a, ctx, depth - 1))

    def _abs(self, ty, ctx, depth):
        x = self.sf.Var(f"x{next(self.names) % 4}", ty.dom)
        return self.sf.Abs(x, self._gen(ty.cod, {**ctx, x.name: ty.dom}, depth - 1))

    def _type_redex(self, ty, ctx, depth):
        # (/\a. \y:a. body){U} arg  where the body ignores or returns y
        sf, rng = self.sf, self.rng
        u = rng.choice(self.types)
        y = sf.Var(f"y{next(self.names) % 3}", sf.TVar("a"))
        if sf.types_equal(ty, u) and rng.random() < 0.5:
            body = y
        else:
            body = self._gen(ty, {k: v for k, v in ctx.items() if k != y.name}, depth - 1)
            if "a" in sf.free_type_vars(body) or y.name in ctx:
                body = sf.Const(f"c_{sf.format_ftype(ty)}", ty)
        fun = sf.TyAbs("a", sf.Abs(y, body))
        return sf.App(sf.TyApp(fun, u), self._gen(u, ctx, depth - 1))

    def _poly_use(self, ty, ctx, depth):
        sf, rng = self.sf, self.rng
        if sf.types_equal(ty, sf.PROP):
            u = rng.choice(self.types)
            return sf.App(sf.TyApp(self.poly[1], u), self._gen(sf.Arrow(u, sf.PROP), ctx, depth - 1))
        if rng.random() < 0.5 and ty in self.bases:
            return sf.App(sf.TyApp(self.poly[0], ty), self._gen(sf.Arrow(ty, sf.PROP), ctx, depth - 1))
        return sf.App(sf.TyApp(self.poly[2], ty), self._gen(ty, ctx, depth - 1))




__all__ = ["LambekOracle", "target_sequents", "categories_by_size", "to_debruijn",
           "db_subst", "db_subst_free", "db_beta", "db_normalize", "STLCGenerator",
           "FGenerator"]

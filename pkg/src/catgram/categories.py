r"""Lambek categories: representation, surface syntax and the free-group image.

A category is an atom, ``A\B`` (looks for an ``A`` on its left to give a
``B``) or ``B/A`` (looks for an ``A`` on its right to give a ``B``).

>>> c = parse_category(r"(np\S)/np")
>>> c
Over(Under(Atom('np'), Atom('S')), Atom('np'))
>>> print(c)
(np\S)/np
>>> group_image(c)
GroupWord('np^-1 S np^-1')
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class Category:
    """Base class of syntactic categories."""

    __slots__ = ()

    @property
    def size(self) -> int:
        """Number of slash connectives."""
        return connectives(self)

    def __str__(self) -> str:
        return format_category(self)


def _memo_hash(self) -> int:
    # categories are hashed constantly during proof search; compute once
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__, self.left, self.right))
        object.__setattr__(self, "_hash", h)
    return h


@dataclass(frozen=True, repr=False)
class Atom(Category):
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("atom name must be non-empty")

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Under(Category):
    """``left\\right``: argument ``left`` on the left, result ``right``."""

    left: Category
    right: Category

    @property
    def arg(self) -> Category:
        return self.left

    @property
    def result(self) -> Category:
        return self.right

    __hash__ = _memo_hash

    def __repr__(self):
        return f"Under({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Over(Category):
    """``left/right``: result ``left``, argument ``right`` on the right."""

    left: Category
    right: Category

    @property
    def arg(self) -> Category:
        return self.right

    @property
    def result(self) -> Category:
        return self.left

    __hash__ = _memo_hash

    def __repr__(self):
        return f"Over({self.left!r}, {self.right!r})"


@lru_cache(maxsize=None)
def connectives(c: Category) -> int:
    if isinstance(c, Atom):
        return 0
    return 1 + connectives(c.left) + connectives(c.right)


def subcategories(c: Category) -> set[Category]:
    """All subcategories of ``c``, ``c`` included."""
    out = {c}
    if not isinstance(c, Atom):
        out |= subcategories(c.left)
        out |= subcategories(c.right)
    return out


def atoms(c: Category) -> Iterator[str]:
    if isinstance(c, Atom):
        yield c.name
    else:
        yield from atoms(c.left)
        yield from atoms(c.right)


# --- surface syntax --------------------------------------------------------

class CategorySyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_]*)|([\\/()])|(\S)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.group(3):
            raise CategorySyntaxError(f"unexpected character {m.group(3)!r}", text, m.start())
        tokens.append((m.group(0), m.start()))
    return tokens


def parse_category(text: str) -> Category:
    """Parse the surface notation of a category.

    Slashes are non-associative: an unparenthesized chain such as ``a\\b/c``
    is rejected rather than guessed.
    """
    tokens = _tokenize(text)
    tokens.append(("", len(text)))
    pos = 0

    def peek():
        return tokens[pos]

    def operand() -> Category:
        nonlocal pos
        tok, at = tokens[pos]
        if tok == "(":
            pos += 1
            inner = expr()
            tok, at = tokens[pos]
            if tok != ")":
                raise CategorySyntaxError("expected ')'", text, at)
            pos += 1
            return inner
        if tok and (tok[0].isalpha()):
            pos += 1
            return Atom(tok)
        if tok == "":
            raise CategorySyntaxError("unexpected end of input", text, at)
        raise CategorySyntaxError(f"unexpected {tok!r}", text, at)

    def expr() -> Category:
        nonlocal pos
        left = operand()
        tok, at = peek()
        if tok not in ("\\", "/"):
            return left
        pos += 1
        right = operand()
        nxt, nat = peek()
        if nxt in ("\\", "/"):
            raise CategorySyntaxError("ambiguous slash sequence, add parentheses", text, nat)
        return Under(left, right) if tok == "\\" else Over(left, right)

    result = expr()
    tok, at = peek()
    if tok != "":
        raise CategorySyntaxError(f"unexpected {tok!r}", text, at)
    return result


def format_category(c: Category) -> str:
    def wrap(x: Category) -> str:
        return x.name if isinstance(x, Atom) else f"({format_category(x)})"

    if isinstance(c, Atom):
        return c.name
    op = "\\" if isinstance(c, Under) else "/"
    return f"{wrap(c.left)}{op}{wrap(c.right)}"


# --- free group ------------------------------------------------------------

Letter = tuple[str, int]


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for name, exp in letters:
        if stack and stack[-1][0] == name and stack[-1][1] == -exp:
            stack.pop()
        else:
            stack.append((name, exp))
    return tuple(stack)


class GroupWord:
    """A freely reduced word over atoms and their inverses.

    Reduction happens on construction, so equality is plain tuple equality.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = _reduce(letters)

    @classmethod
    def generator(cls, name: str) -> GroupWord:
        return cls(((name, 1),))

    def inverse(self) -> GroupWord:
        return GroupWord((n, -e) for n, e in reversed(self.letters))

    def __mul__(self, other: GroupWord) -> GroupWord:
        return GroupWord(self.letters + other.letters)

    def __eq__(self, other):
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(n if e == 1 else f"{n}^-1" for n, e in self.letters)

    def __repr__(self):
        return f"GroupWord({str(self)!r})"


@lru_cache(maxsize=None)
def group_image(c: Category) -> GroupWord:
    """Image of ``c`` in the free group: ``A\\B -> A^-1 B``, ``B/A -> B A^-1``."""
    if isinstance(c, Atom):
        return GroupWord.generator(c.name)
    if isinstance(c, Under):
        return group_image(c.left).inverse() * group_image(c.right)
    return group_image(c.left) * group_image(c.right).inverse()


def product_image(cats: Sequence[Category]) -> GroupWord:
    letters: list[Letter] = []
    for c in cats:
        letters.extend(group_image(c).letters)
    return GroupWord(letters)


def group_check(antecedent: Sequence[Category], goal: Category) -> bool:
    """Necessary condition for derivability of ``antecedent |- goal``.

    ``False`` proves the sequent underivable; ``True`` proves nothing, the
    free group being an incomplete model.
    """
    return product_image(antecedent) == group_image(goal)

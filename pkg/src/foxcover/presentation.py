"""Free-group words in syllable form and finite group presentations.

A word is a tuple of ``(generator index, exponent)`` syllables.  Adjacent
syllables never share a generator and no exponent is zero, so ``a^2 t a^-1``
is ``((0, 2), (1, 1), (0, -1))`` when ``a`` is generator 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (MalformedExponent, NotCyclicallyReduced,
                     PresentationSyntaxError, UnknownGenerator)
from .intlinalg import IntMatrix

Syllable = tuple[int, int]


@dataclass(frozen=True, order=True)
class Word:
    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self):
        prev = None
        for g, e in self.syllables:
            if e == 0:
                raise ValueError("zero exponent in a reduced word")
            if g == prev:
                raise ValueError("adjacent syllables share a generator; use free_reduce")
            prev = g

    @classmethod
    def gen(cls, index: int, exponent: int = 1) -> Word:
        return cls(((index, exponent),)) if exponent else IDENTITY

    def __len__(self) -> int:
        return len(self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __mul__(self, other: Word) -> Word:
        return word_multiply(self, other)

    def __pow__(self, k: int) -> Word:
        return word_power(self, k)

    def inverse(self) -> Word:
        return word_inverse(self)

    def letter_length(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def generators(self) -> set[int]:
        return {g for g, _ in self.syllables}


IDENTITY = Word()


def free_reduce(raw: Iterable[Syllable]) -> Word:
    stack: list[list[int]] = []
    for g, e in raw:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return Word(tuple((g, e) for g, e in stack))


def word_multiply(u: Word, v: Word) -> Word:
    if not u.syllables:
        return v
    if not v.syllables:
        return u
    a, b = list(u.syllables), v.syllables
    j = 0
    while a and j < len(b) and a[-1][0] == b[j][0]:
        e = a[-1][1] + b[j][1]
        if e:
            a[-1] = (a[-1][0], e)
            j += 1
            break
        a.pop()
        j += 1
    return Word(tuple(a) + b[j:])


def word_inverse(u: Word) -> Word:
    return Word(tuple((g, -e) for g, e in reversed(u.syllables)))


def word_power(u: Word, k: int) -> Word:
    if k < 0:
        u, k = word_inverse(u), -k
    if k == 0 or not u:
        return IDENTITY
    if len(u) == 1:
        g, e = u.syllables[0]
        return Word(((g, e * k),))
    return free_reduce(u.syllables * k)


def _sign(x: int) -> int:
    return 1 if x > 0 else -1


def is_cyclically_reduced(w: Word) -> bool:
    s = w.syllables
    if len(s) < 2:
        return True
    return not (s[0][0] == s[-1][0] and _sign(s[0][1]) != _sign(s[-1][1]))


def cyclically_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w == conjugator * core * conjugator^-1``."""
    s = list(w.syllables)
    conj: list[Syllable] = []
    while len(s) >= 2 and s[0][0] == s[-1][0] and _sign(s[0][1]) != _sign(s[-1][1]):
        g, e1 = s[0]
        e2 = s[-1][1]
        c = min(abs(e1), abs(e2)) * _sign(e1)
        conj.append((g, c))
        s[0] = (g, e1 - c)
        s[-1] = (g, e2 + c)
        if s[-1][1] == 0:
            s.pop()
        if s and s[0][1] == 0:
            s.pop(0)
    return Word(tuple(s)), free_reduce(conj)


def _cyclic_syllables(w: Word) -> list[Syllable]:
    s = list(w.syllables)
    if len(s) >= 2 and s[0][0] == s[-1][0]:
        g, e = s.pop()
        s[0] = (g, s[0][1] + e)
    return s


def _letter_prefix(w: Word, n_letters: int) -> Word:
    out = []
    left = n_letters
    for g, e in w.syllables:
        if left == 0:
            break
        take = min(abs(e), left)
        out.append((g, take * _sign(e)))
        left -= take
    return Word(tuple(out))


def is_proper_power(w: Word) -> tuple[Word, int] | None:
    """Maximal ``(root, k)`` with ``w == root^k`` and ``k >= 2``, else ``None``.

    For a cyclically reduced word, ``w == u^k`` holds iff the cyclic letter
    sequence is invariant under rotation by ``|w| / k``; that symmetry is read
    off the minimal period of the cyclic syllable sequence.
    """
    if not is_cyclically_reduced(w):
        raise NotCyclicallyReduced("proper-power detection needs a cyclically reduced word")
    if not w:
        return None
    cyc = _cyclic_syllables(w)
    L = len(cyc)
    if L == 1:
        g, e = cyc[0]
        return (Word.gen(g, _sign(e)), abs(e)) if abs(e) >= 2 else None
    doubled = cyc + cyc
    period = next(p for p in range(1, L + 1) if doubled[p:p + L] == cyc)
    k = L // period
    if k < 2:
        return None
    return _letter_prefix(w, w.letter_length() // k), k


def exponent_sum(w: Word, i: int) -> int:
    return sum(e for g, e in w.syllables if g == i)


@dataclass(frozen=True)
class Generator:
    name: str
    index: int


@dataclass(frozen=True)
class Presentation:
    generators: tuple[Generator, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names: {names}")
        if any(g.index != i for i, g in enumerate(self.generators)):
            raise ValueError("generator indices must be 0..n-1 in order")
        n = len(self.generators)
        for r in self.relators:
            if any(not 0 <= g < n for g, _ in r.syllables):
                raise ValueError("relator references a generator out of range")

    @classmethod
    def from_names(cls, names: Sequence[str], relators: Iterable[Word] = ()) -> Presentation:
        return cls(tuple(Generator(n, i) for i, n in enumerate(names)), tuple(relators))

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def n_relators(self) -> int:
        return len(self.relators)

    def __str__(self) -> str:
        return format_presentation(self)


def abelianized_relator_matrix(p: Presentation) -> IntMatrix:
    """Exponent sums: rows are generators, columns are relators."""
    n, m = p.n_generators, p.n_relators
    cols = []
    for r in p.relators:
        col = [0] * n
        for g, e in r.syllables:
            col[g] += e
        cols.append(col)
    return IntMatrix.from_rows([[cols[j][i] for j in range(m)] for i in range(n)], cols=m)


def relator_warnings(p: Presentation) -> list[str]:
    """Human-readable notes about relators that are proper powers."""
    out = []
    for j, r in enumerate(p.relators):
        core, _ = cyclically_reduce(r)
        pw = is_proper_power(core)
        if pw is not None:
            root, k = pw
            out.append(f"relator {j} ({format_word(r, p.names)}) is a proper power "
                       f"({format_word(root, p.names)})^{k}; the group has torsion")
    return out


def format_word(w: Word, names: Sequence[str], sep: str = " ") -> str:
    if not w:
        return "1"
    return sep.join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in w.syllables)


def format_presentation(p: Presentation) -> str:
    rels = ", ".join(format_word(r, p.names) for r in p.relators)
    return f"< {', '.join(p.names)} | {rels} >" if rels else f"< {', '.join(p.names)} | >"


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[+-]?\d+)
  | (?P<punct>[<>|,^])
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            nl = value.count("\n")
            if nl:
                line += nl
                line_start = pos + value.rfind("\n") + 1
        else:
            yield kind, value, line, col
        pos = m.end()
    yield "end", "", line, pos - line_start + 1


class _Parser:
    def __init__(self, text: str):
        self.tokens = list(_tokenize(text))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, line, col = self.take()
        if v != value or kind == "end":
            found = "end of input" if kind == "end" else repr(v)
            raise PresentationSyntaxError(f"expected {value!r}, found {found}", line, col)

    def parse(self) -> Presentation:
        self.expect("<")
        names: list[str] = []
        if self.peek()[1] != "|":
            while True:
                kind, v, line, col = self.take()
                if kind != "ident":
                    raise PresentationSyntaxError(f"expected generator name, found {v!r}", line, col)
                if v in names:
                    raise PresentationSyntaxError(f"duplicate generator {v!r}", line, col)
                names.append(v)
                if self.peek()[1] != ",":
                    break
                self.take()
        self.expect("|")
        index = {n: i for i, n in enumerate(names)}
        relators = []
        if self.peek()[1] != ">":
            while True:
                relators.append(self.word(index))
                if self.peek()[1] != ",":
                    break
                self.take()
        self.expect(">")
        kind, v, line, col = self.peek()
        if kind != "end":
            raise PresentationSyntaxError(f"trailing input {v!r}", line, col)
        return Presentation.from_names(names, relators)

    def word(self, index: dict[str, int]) -> Word:
        raw = []
        while self.peek()[0] == "ident":
            _, name, line, col = self.take()
            if name not in index:
                raise UnknownGenerator(f"generator {name!r} is not declared", line, col)
            e = 1
            if self.peek()[1] == "^":
                self.take()
                kind, v, line, col = self.take()
                if kind != "int":
                    raise MalformedExponent(f"exponent must be an integer, found {v!r}", line, col)
                e = int(v)
                if e == 0:
                    raise MalformedExponent("exponent 0 is not allowed", line, col)
            raw.append((index[name], e))
        if not raw:
            kind, v, line, col = self.peek()
            found = "end of input" if kind == "end" else repr(v)
            raise PresentationSyntaxError(f"expected a relator word, found {found}", line, col)
        return free_reduce(raw)


def parse_presentation(text: str) -> Presentation:
    """Parse ``"< a, t | t a^2 t^-1 a^-4 >"`` into a :class:`Presentation`."""
    return _Parser(text).parse()


def parse_word(text: str, names: Sequence[str]) -> Word:
    p = _Parser(text)
    w = p.word({n: i for i, n in enumerate(names)})
    kind, v, line, col = p.peek()
    if kind != "end":
        raise PresentationSyntaxError(f"trailing input {v!r}", line, col)
    return w

"""The integral group ring of a free group and Fox derivatives."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .presentation import IDENTITY, Presentation, Word, format_word, word_multiply


class GroupRingElement:
    """A finite Z-linear combination of reduced words.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        acc: dict[Word, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            acc[w] = acc.get(w, 0) + c
        self._terms = MappingProxyType({w: c for w, c in acc.items() if c})

    @property
    def terms(self) -> Mapping[Word, int]:
        return self._terms

    def items(self):
        return sorted(self._terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"GroupRingElement({dict(self.items())!r})"

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        return gr_add(self, other)

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return gr_add(self, gr_scale(-1, other))

    def __neg__(self) -> GroupRingElement:
        return gr_scale(-1, self)

    def __mul__(self, other) -> GroupRingElement:
        if isinstance(other, int):
            return gr_scale(other, self)
        return gr_mul(self, other)

    def __rmul__(self, c: int) -> GroupRingElement:
        return gr_scale(c, self)


ZERO = GroupRingElement()
ONE = GroupRingElement({IDENTITY: 1})


def gr_of_word(w: Word) -> GroupRingElement:
    return GroupRingElement({w: 1})


def gr_add(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    return GroupRingElement(list(x.terms.items()) + list(y.terms.items()))


def gr_scale(c: int, x: GroupRingElement) -> GroupRingElement:
    return GroupRingElement({w: c * k for w, k in x.terms.items()})


def gr_mul(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    return GroupRingElement([(word_multiply(u, v), a * b)
                             for u, a in x.terms.items() for v, b in y.terms.items()])


def augmentation(x: GroupRingElement) -> int:
    return sum(x.terms.values())


def _derivative_terms(w: Word, i: int):
    prefix: list[tuple[int, int]] = []
    for g, e in w.syllables:
        if g == i:
            # prefix never ends in generator i, so appending s_i^j stays reduced
            base = tuple(prefix)
            if e > 0:
                yield Word(base), 1
                for j in range(1, e):
                    yield Word(base + ((i, j),)), 1
            else:
                for j in range(1, -e + 1):
                    yield Word(base + ((i, -j),)), -1
        prefix.append((g, e))


def fox_derivative(w: Word, i: int) -> GroupRingElement:
    """Fox derivative of ``w`` with respect to generator ``i``.

    Uses the product rule over syllables with
    d(s^e)/ds = 1 + s + ... + s^(e-1) for e > 0 and
    d(s^e)/ds = -(s^-1 + ... + s^e) for e < 0.
    """
    return GroupRingElement(_derivative_terms(w, i))


@dataclass(frozen=True)
class Jacobian:
    presentation: Presentation
    entries: tuple[tuple[GroupRingElement, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.presentation.n_relators, self.presentation.n_generators

    def __getitem__(self, ij: tuple[int, int]) -> GroupRingElement:
        i, j = ij
        return self.entries[i][j]


def fox_jacobian(p: Presentation) -> Jacobian:
    return Jacobian(p, tuple(tuple(fox_derivative(r, j) for j in range(p.n_generators))
                             for r in p.relators))


def _format_coeff_term(c: int, body: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    if body == "1":
        text = str(mag)
    else:
        text = body if mag == 1 else f"{mag}*{body}"
    if first:
        return f"-{text}" if c < 0 else text
    return f" {sign} {text}"


def format_element(x: GroupRingElement, names: Sequence[str], collect: int | None = None) -> str:
    """Render like ``t^2*(1 + a + a^2) - (1 + a)``.

    With ``collect`` set to a generator index, terms are grouped by the
    prefix left after stripping a trailing power of that generator.
    """
    if not x:
        return "0"
    if collect is None:
        out = ""
        for k, (w, c) in enumerate(x.items()):
            out += _format_coeff_term(c, format_word(w, names, sep="*"), k == 0)
        return out

    groups: dict[Word, list[tuple[Word, int]]] = {}
    for w, c in x.items():
        s = w.syllables
        if s and s[-1][0] == collect:
            prefix, tail = Word(s[:-1]), Word(s[-1:])
        else:
            prefix, tail = w, IDENTITY
        groups.setdefault(prefix, []).append((tail, c))

    # positive groups first so the leading sign is usually "+"
    ordered = sorted(groups.items(), key=lambda kv: all(c < 0 for _, c in kv[1]))
    out = ""
    for k, (prefix, tails) in enumerate(ordered):
        tails.sort(key=lambda tc: abs(tc[0].syllables[0][1]) if tc[0] else 0)
        factor = -1 if all(c < 0 for _, c in tails) else 1
        inner = ""
        for j, (tail, c) in enumerate(tails):
            inner += _format_coeff_term(factor * c, format_word(tail, names, sep="*"), j == 0)
        if len(tails) == 1:
            tail, c = tails[0]
            body = _format_coeff_term(factor * c, format_word(word_multiply(prefix, tail), names, sep="*"), True)
        else:
            if len(groups) == 1 and not prefix and factor == 1:
                return inner
            pre = format_word(prefix, names, sep="*") + "*" if prefix else ""
            body = f"{pre}({inner})"
        if k == 0:
            out = f"-{body}" if factor < 0 else body
        else:
            out += f" - {body}" if factor < 0 else f" + {body}"
    return out

"""Permutation representations and the homology of finite covers.

Permutations act on the right: ``i * (s t) == (i * s) * t``.  Points are
0-based internally; every text format is 1-based.

Three independent routes compute ``H_1`` of the subgroup ``theta^-1(Stab(1))``:

* :func:`subgroup_h1_fox` -- the Fox-Hempel matrix ``theta(J)``, which
  presents ``H_1 + Z^(q-1)``;
* :func:`subgroup_h1_rs` -- abelianize a Reidemeister-Schreier presentation;
* :func:`cover_chain_h1` -- ``ker d1 / im d2`` in the lifted 2-complex.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import NotTransitive, ParseError, RelatorNotKilled, UnknownGenerator
from .foxcalc import GroupRingElement, fox_derivative
from .intlinalg import (AbelianGroup, IntMatrix, abelian_group_from_presentation_matrix,
                        block_matrix, is_two_avoiding, smith_normal_form, subtract_free_rank,
                        unimodular_inverse)
from .presentation import (Presentation, Word, abelianized_relator_matrix, format_word,
                           free_reduce)


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")
        if not self.images:
            raise ValueError("degree must be at least 1")

    @classmethod
    def identity(cls, q: int) -> Permutation:
        return cls(tuple(range(q)))

    @classmethod
    def swap(cls) -> Permutation:
        return cls((1, 0))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int) -> Permutation:
        """Build from 1-based cycles, e.g. ``[(1, 2, 3)]``."""
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            pts = [x - 1 for x in cyc]
            if any(not 0 <= x < degree for x in pts) or seen & set(pts) or len(set(pts)) != len(pts):
                raise ValueError(f"invalid cycle {tuple(cyc)} for degree {degree}")
            seen.update(pts)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        """``self`` first, then ``other``."""
        return Permutation(tuple(other.images[x] for x in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """All cycles including fixed points, 0-based, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if not seen[i]:
                cyc = []
                j = i
                while not seen[j]:
                    seen[j] = True
                    cyc.append(j)
                    j = self.images[j]
                out.append(tuple(cyc))
        return out

    def __pow__(self, e: int) -> Permutation:
        img = [0] * self.degree
        for cyc in self.cycles():
            L = len(cyc)
            for k, x in enumerate(cyc):
                img[x] = cyc[(k + e) % L]
        return Permutation(tuple(img))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def format(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return "id"
        return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cyc)


class _CycleIndex:
    """Position of every point on its cycle, for O(1) powers of one permutation."""

    def __init__(self, perm: Permutation):
        self.cycle_of = [()] * perm.degree
        self.pos = [0] * perm.degree
        for cyc in perm.cycles():
            for k, x in enumerate(cyc):
                self.cycle_of[x] = cyc
                self.pos[x] = k

    def step(self, i: int, e: int) -> int:
        cyc = self.cycle_of[i]
        return cyc[(self.pos[i] + e) % len(cyc)]


def perm_matrix(s: Permutation) -> IntMatrix:
    """``P[i][j] = 1`` iff ``i * s == j``; so ``perm_matrix(s * t) == P_s @ P_t``."""
    q = s.degree
    return IntMatrix.from_rows([[int(s.images[i] == j) for j in range(q)] for i in range(q)], cols=q)


@dataclass(frozen=True)
class PermRep:
    """A transitive homomorphism from the presented group to ``S_q``."""

    presentation: Presentation
    perms: tuple[Permutation, ...]

    def __post_init__(self):
        p = self.presentation
        if len(self.perms) != p.n_generators:
            raise ValueError(f"need {p.n_generators} permutations, got {len(self.perms)}")
        if len({s.degree for s in self.perms}) > 1:
            raise ValueError("permutations have different degrees")
        object.__setattr__(self, "_index", [_CycleIndex(s) for s in self.perms])
        for j, r in enumerate(p.relators):
            if not self.evaluate(r).is_identity():
                raise RelatorNotKilled(j, format_word(r, p.names))
        if len(self._orbit(0)) != self.degree:
            raise NotTransitive(f"generated permutation group is not transitive on {self.degree} points")

    @property
    def degree(self) -> int:
        return self.perms[0].degree if self.perms else 1

    def _orbit(self, start: int) -> set[int]:
        seen = {start}
        todo = [start]
        while todo:
            i = todo.pop()
            for s in self.perms:
                j = s.images[i]
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return seen

    def act(self, i: int, w: Word) -> int:
        """The point ``i * theta(w)``."""
        idx = self._index
        for g, e in w.syllables:
            i = idx[g].step(i, e)
        return i

    def evaluate(self, w: Word) -> Permutation:
        return Permutation(tuple(self.act(i, w) for i in range(self.degree)))

    def format(self) -> str:
        return format_rep(self)

    def __str__(self) -> str:
        return format_rep(self)


def validate_rep(p: Presentation, assignment: Sequence[Permutation]) -> PermRep:
    return PermRep(p, tuple(assignment))


def trivial_rep(p: Presentation) -> PermRep:
    return PermRep(p, tuple(Permutation.identity(1) for _ in range(p.n_generators)))


def theta_eval(x: GroupRingElement, rep: PermRep) -> IntMatrix:
    """Sum of ``coefficient * perm_matrix(theta(word))`` over the terms of ``x``."""
    q = rep.degree
    m = [[0] * q for _ in range(q)]
    for w, c in x.terms.items():
        for i in range(q):
            m[i][rep.act(i, w)] += c
    return IntMatrix.from_rows(m, cols=q)


def fox_hempel_matrix(p: Presentation, rep: PermRep) -> IntMatrix:
    """``theta(J)`` laid out with generator rows and relator columns.

    Row ``j*q + c`` is the lift of generator ``j`` starting on sheet ``c``;
    column ``i*q + r`` is the lift of relator ``i`` based at sheet ``r``.
    Row ``r`` of ``theta(dr_i/ds_j)`` records the edges crossed by lift ``r``,
    so each block is that matrix transposed.
    """
    q = rep.degree
    blocks = [[theta_eval(fox_derivative(r, j), rep).transpose() for r in p.relators]
              for j in range(p.n_generators)]
    return block_matrix(blocks, q, q)


def subgroup_h1_fox(p: Presentation, rep: PermRep) -> AbelianGroup:
    g = abelian_group_from_presentation_matrix(fox_hempel_matrix(p, rep))
    return subtract_free_rank(g, rep.degree - 1)


def enumerate_index2_reps(p: Presentation) -> list[PermRep]:
    """Every surjection onto ``S_2``, ordered by the bitmask ``sum(2^i)`` over swapped generators."""
    n = p.n_generators
    sums = abelianized_relator_matrix(p).entries
    swap, ident = Permutation.swap(), Permutation.identity(2)
    out = []
    for mask in range(1, 1 << n):
        bits = [(mask >> i) & 1 for i in range(n)]
        if all(sum(bits[i] * sums[i][j] for i in range(n)) % 2 == 0 for j in range(p.n_relators)):
            out.append(PermRep(p, tuple(swap if b else ident for b in bits)))
    return out


@dataclass(frozen=True)
class SchreierData:
    transversal: tuple[Word, ...]
    tree_edges: frozenset[tuple[int, int]]
    generator_of_edge: dict
    names: tuple[str, ...]


def schreier_transversal(rep: PermRep) -> SchreierData:
    """Breadth-first spanning tree of the coset graph.

    Cosets are visited from coset 1; at each coset generators are taken in
    presentation order with the positive direction before the negative one.
    An edge ``(c, g)`` joins coset ``c`` to ``c * g``.
    """
    p = rep.presentation
    q = rep.degree
    transversal: dict[int, Word] = {0: Word()}
    tree: set[tuple[int, int]] = set()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for g, s in enumerate(rep.perms):
            d = s.images[c]
            if d not in transversal:
                transversal[d] = transversal[c] * Word.gen(g)
                tree.add((c, g))
                queue.append(d)
            d = rep._index[g].step(c, -1)
            if d not in transversal:
                transversal[d] = transversal[c] * Word.gen(g, -1)
                tree.add((d, g))
                queue.append(d)
    gen_of_edge = {}
    names = []
    for c in range(q):
        for g in range(p.n_generators):
            if (c, g) not in tree:
                gen_of_edge[(c, g)] = len(names)
                names.append(f"{p.names[g]}_{c + 1}")
    return SchreierData(tuple(transversal[c] for c in range(q)), frozenset(tree),
                        gen_of_edge, tuple(names))


def _trace_edges(rep: PermRep, w: Word, start: int) -> Iterator[tuple[int, int, int]]:
    """Yield ``(coset, generator, sign)`` for each edge crossed by the lift of ``w`` from ``start``."""
    c = start
    for g, e in w.syllables:
        s = rep.perms[g]
        if e > 0:
            for _ in range(e):
                yield c, g, 1
                c = s.images[c]
        else:
            step = rep._index[g]
            for _ in range(-e):
                c = step.step(c, -1)
                yield c, g, -1


def reidemeister_schreier(p: Presentation, rep: PermRep) -> Presentation:
    """Presentation of ``theta^-1(Stab(1))`` on the non-tree Schreier generators.

    Relators are the lifts of each relator at every coset, relator-major.
    """
    sd = schreier_transversal(rep)
    rels = []
    for r in p.relators:
        for c in range(rep.degree):
            raw = [(sd.generator_of_edge[(d, g)], sign)
                   for d, g, sign in _trace_edges(rep, r, c) if (d, g) in sd.generator_of_edge]
            rels.append(free_reduce(raw))
    return Presentation.from_names(sd.names, rels)


def subgroup_h1_rs(p: Presentation, rep: PermRep) -> AbelianGroup:
    return abelian_group_from_presentation_matrix(abelianized_relator_matrix(reidemeister_schreier(p, rep)))


def _lift_tally(rep: PermRep, w: Word, start: int, n: int) -> list[int]:
    """Signed count of each edge ``(g, c)`` (index ``g*q + c``) crossed by one lift of ``w``."""
    q = rep.degree
    tally = [0] * (n * q)
    c = start
    for g, e in w.syllables:
        idx = rep._index[g]
        cyc = idx.cycle_of[c]
        L = len(cyc)
        pos = idx.pos[c]
        reps, extra = divmod(abs(e), L)
        if e > 0:
            for k in range(min(e, L)):
                tally[g * q + cyc[(pos + k) % L]] += reps + (k < extra)
        else:
            for k in range(min(-e, L)):
                tally[g * q + cyc[(pos - 1 - k) % L]] -= reps + (k < extra)
        c = cyc[(pos + e) % L]
    if c != start:
        raise AssertionError("relator lift does not close up")
    return tally


def cover_chain_boundaries(p: Presentation, rep: PermRep) -> tuple[IntMatrix, IntMatrix]:
    """Cellular ``d1`` (vertices x edges) and ``d2`` (edges x 2-cells) of the cover."""
    q, n = rep.degree, p.n_generators
    d1 = [[0] * (n * q) for _ in range(q)]
    for g, s in enumerate(rep.perms):
        for c in range(q):
            d1[s.images[c]][g * q + c] += 1
            d1[c][g * q + c] -= 1
    cols = [_lift_tally(rep, r, c, n) for r in p.relators for c in range(q)]
    d2 = [[col[i] for col in cols] for i in range(n * q)]
    return IntMatrix.from_rows(d1, cols=n * q), IntMatrix.from_rows(d2, cols=len(cols))


def cover_chain_h1(p: Presentation, rep: PermRep) -> AbelianGroup:
    """``ker d1 / im d2`` of the lifted presentation complex."""
    d1, d2 = cover_chain_boundaries(p, rep)
    snf = smith_normal_form(d1)
    r = snf.rank
    # columns r.. of Q span ker d1; rows r.. of Q^-1 give coordinates in that basis
    coords = (unimodular_inverse(snf.Q) @ d2).entries
    if any(any(row) for row in coords[:r]):
        raise AssertionError("d1 * d2 != 0")
    return abelian_group_from_presentation_matrix(IntMatrix.from_rows(coords[r:], cols=d2.cols))


def find_two_avoiding_index2(p: Presentation) -> tuple[PermRep, AbelianGroup] | None:
    for rep in enumerate_index2_reps(p):
        h = subgroup_h1_fox(p, rep)
        if is_two_avoiding(h):
            return rep, h
    return None


def format_rep(rep: PermRep) -> str:
    names = rep.presentation.names
    body = ", ".join(f"{n}:{s.format()}" for n, s in zip(names, rep.perms))
    moved = max((x + 1 for s in rep.perms for x, y in enumerate(s.images) if x != y), default=1)
    if moved < rep.degree:
        body = f"{body}, deg={rep.degree}" if body else f"deg={rep.degree}"
    return body


_CYCLE = re.compile(r"\(([^()]*)\)")


def _split_top_level(text: str) -> list[tuple[str, int]]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", 1, i + 1)
        elif ch == "," and depth == 0:
            parts.append((text[start:i], start))
            start = i + 1
    if depth:
        raise ParseError("unbalanced '('", 1, len(text))
    parts.append((text[start:], start))
    return parts


def parse_rep(text: str, p: Presentation) -> PermRep:
    """Parse ``"a:(1 2), t:id"`` (optionally ``deg=q``) and validate it against ``p``."""
    assigned: dict[int, list[list[int]]] = {}
    degree = None
    index = {n: i for i, n in enumerate(p.names)}
    for chunk, offset in _split_top_level(text):
        item = chunk.strip()
        col = offset + len(chunk) - len(chunk.lstrip()) + 1
        if not item:
            continue
        if item.startswith("deg"):
            key, _, val = item.partition("=")
            if key.strip() != "deg" or not val.strip().isdigit() or int(val) < 1:
                raise ParseError(f"malformed degree {item!r}", 1, col)
            degree = int(val)
            continue
        name, sep, body = item.partition(":")
        name = name.strip()
        if not sep:
            raise ParseError(f"expected 'generator:cycles', found {item!r}", 1, col)
        if name not in index:
            raise UnknownGenerator(f"generator {name!r} is not declared", 1, col)
        if index[name] in assigned:
            raise ParseError(f"generator {name!r} assigned twice", 1, col)
        body = body.strip()
        cycles: list[list[int]] = []
        if body != "id":
            rest = _CYCLE.sub("", body).strip()
            if rest or not body:
                raise ParseError(f"malformed cycle notation {body!r}", 1, col)
            for inner in _CYCLE.findall(body):
                toks = inner.replace(",", " ").split()
                if not toks or not all(t.isdigit() and int(t) >= 1 for t in toks):
                    raise ParseError(f"malformed cycle ({inner})", 1, col)
                cycles.append([int(t) for t in toks])
        assigned[index[name]] = cycles
    moved = max((x for cycs in assigned.values() for c in cycs for x in c), default=1)
    if degree is None:
        degree = moved
    elif degree < moved:
        raise ParseError(f"deg={degree} is smaller than moved point {moved}")
    try:
        perms = [Permutation.from_cycles(assigned.get(g, []), degree) for g in range(p.n_generators)]
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return validate_rep(p, perms)

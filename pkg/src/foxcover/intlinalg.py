"""Exact integer matrices, Smith normal form and finitely generated abelian groups.

Presentation matrices follow one orientation everywhere in the package:
rows index generators, columns index relations.  The abelian group
presented by ``A`` is ``Z^rows / (column span of A)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InsufficientFreeRank, ParseError, TooLarge

# When set, every smith_normal_form call re-multiplies P*A*Q and checks
# the witnesses are unimodular.  The test suite switches this on.
VERIFY_SNF = False

MINOR_ORACLE_MAX_DIM = 6


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entry grid does not match dimensions")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(
            tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(x * y for x, y in zip(row, col)) for col in cols_b)
            for row in self.entries))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return IntMatrix(self.rows, self.cols, tuple(
            tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> IntMatrix:
        return self.scale(-1)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(tuple(c * x for x in r) for r in self.entries))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def __str__(self) -> str:
        return format_matrix(self)


def block_matrix(blocks: Sequence[Sequence[IntMatrix]], block_rows: int, block_cols: int) -> IntMatrix:
    """Assemble a grid of equally sized blocks."""
    out = []
    for brow in blocks:
        for i in range(block_rows):
            line = []
            for b in brow:
                line.extend(b.entries[i])
            out.append(line)
    ncols = (len(blocks[0]) if blocks else 0) * block_cols
    return IntMatrix.from_rows(out, cols=ncols)


def parse_matrix(text: str) -> IntMatrix:
    """Parse ``"1,2;3,4"`` (rows split by ``;``, entries by ``,``)."""
    text = text.strip()
    if not text:
        return IntMatrix.zeros(0, 0)
    rows = []
    for r, chunk in enumerate(text.split(";"), start=1):
        try:
            rows.append([int(x) for x in chunk.split(",")])
        except ValueError:
            raise ParseError(f"matrix row {r} is not a comma-separated list of integers: {chunk!r}") from None
    if len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows have unequal lengths")
    return IntMatrix.from_rows(rows)


def format_matrix(a: IntMatrix) -> str:
    return ";".join(",".join(str(x) for x in r) for r in a.entries)


def determinant(a: IntMatrix) -> int:
    """Bareiss fraction-free elimination; exact for any integer matrix."""
    n = a.rows
    if n != a.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = a.to_lists()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    """Exact inverse of a matrix with determinant +-1."""
    n = a.rows
    if n != a.cols:
        raise ValueError("inverse of a non-square matrix")
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a.entries)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = []
    for row in m:
        right = row[n:]
        if any(x.denominator != 1 for x in right):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in right])
    return IntMatrix.from_rows(out, cols=n)


@dataclass(frozen=True)
class SmithDecomposition:
    """``P * A * Q == D`` where ``D`` carries ``diagonal`` then zeros."""

    P: IntMatrix
    Q: IntMatrix
    diagonal: tuple[int, ...]
    rows: int
    cols: int

    def __post_init__(self):
        if any(d < 1 for d in self.diagonal):
            raise ValueError(f"invariant factors must be positive: {self.diagonal}")
        for x, y in zip(self.diagonal, self.diagonal[1:]):
            if y % x:
                raise ValueError(f"divisibility chain broken: {self.diagonal}")
        if (self.P.rows, self.P.cols) != (self.rows, self.rows):
            raise ValueError("P has wrong shape")
        if (self.Q.rows, self.Q.cols) != (self.cols, self.cols):
            raise ValueError("Q has wrong shape")

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def diagonal_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[self.diagonal[i] if i == j and i < self.rank else 0 for j in range(self.cols)]
             for i in range(self.rows)], cols=self.cols)

    def verify(self, a: IntMatrix) -> None:
        if self.P @ a @ self.Q != self.diagonal_matrix():
            raise AssertionError("P*A*Q does not equal the Smith form")
        if abs(determinant(self.P)) != 1 or abs(determinant(self.Q)) != 1:
            raise AssertionError("Smith witnesses are not unimodular")


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, k):
    # row[dst] += k * row[src]
    rd, rs = m[dst], m[src]
    for c, x in enumerate(rs):
        if x:
            rd[c] += k * x


def _add_col(m, dst, src, k):
    for row in m:
        x = row[src]
        if x:
            row[dst] += k * x


def _min_nonzero(a, t, rows, cols):
    best = None
    best_val = 0
    for i in rows:
        row = a[i]
        for j in cols:
            x = row[j]
            if x and (best is None or abs(x) < best_val):
                best, best_val = (i, j), abs(x)
                if best_val == 1:
                    return best
    return best


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form by elementary operations with unimodular witnesses.

    The pivot is always a nonzero entry of least absolute value; when the
    pivot fails to divide some entry of the trailing block, that entry's
    row is added to the pivot row and the reduction resumes.
    """
    m, n = a.rows, a.cols
    A = a.to_lists()
    P = IntMatrix.identity(m).to_lists()
    Q = IntMatrix.identity(n).to_lists()
    diagonal = []
    t = 0
    while t < min(m, n):
        piv = _min_nonzero(A, t, range(t, m), range(t, n))
        if piv is None:
            break
        while True:
            i, j = piv
            if i != t:
                _swap_rows(A, t, i)
                _swap_rows(P, t, i)
            if j != t:
                _swap_cols(A, t, j)
                _swap_cols(Q, t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    q = x // p
                    _add_row(A, i, t, -q)
                    _add_row(P, i, t, -q)
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                x = A[t][j]
                if x:
                    q = x // p
                    _add_col(A, j, t, -q)
                    _add_col(Q, j, t, -q)
                    if A[t][j]:
                        clean = False
            if not clean:
                piv = _min_nonzero(A, t, range(t, m), range(t, n))
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            _add_row(A, t, bad, 1)
            _add_row(P, t, bad, 1)
            piv = (t, t)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            P[t] = [-x for x in P[t]]
        diagonal.append(A[t][t])
        t += 1
    dec = SmithDecomposition(IntMatrix.from_rows(P, cols=m), IntMatrix.from_rows(Q, cols=n),
                             tuple(diagonal), m, n)
    if VERIFY_SNF:
        dec.verify(a)
    return dec


def invariant_factors_via_minors(a: IntMatrix) -> list[int]:
    """Invariant factors as ratios of successive gcds of i x i minors.

    Exponential in the dimension; a cross-check for small matrices only.
    """
    if min(a.rows, a.cols) > MINOR_ORACLE_MAX_DIM:
        raise TooLarge(f"minor enumeration limited to min(rows, cols) <= {MINOR_ORACLE_MAX_DIM}")
    factors = []
    prev = 1
    for size in range(1, min(a.rows, a.cols) + 1):
        g = 0
        for rs in itertools.combinations(range(a.rows), size):
            for cs in itertools.combinations(range(a.cols), size):
                sub = IntMatrix.from_rows([[a.entries[r][c] for c in cs] for r in rs], cols=size)
                g = math.gcd(g, determinant(sub))
                if g == prev:
                    break
            if g == prev:
                break
        if g == 0:
            break
        factors.append(g // prev)
        prev = g
    return factors


@dataclass(frozen=True)
class AbelianGroup:
    """``Z^free_rank + Z_{n_1} + ... + Z_{n_k}`` with ``n_1 | n_2 | ... | n_k``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(x) for x in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")
        if any(x < 2 for x in self.torsion):
            raise ValueError(f"torsion coefficients must be >= 2: {self.torsion}")
        for x, y in zip(self.torsion, self.torsion[1:]):
            if y % x:
                raise ValueError(f"torsion is not a divisibility chain: {self.torsion}")

    @classmethod
    def from_dict(cls, d: dict) -> AbelianGroup:
        return cls(int(d["free_rank"]), tuple(d.get("torsion", ())))

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{n}" for n in self.torsion)
        return " + ".join(parts) if parts else "0"


def abelian_group_from_presentation_matrix(a: IntMatrix) -> AbelianGroup:
    diag = smith_normal_form(a).diagonal
    return AbelianGroup(a.rows - len(diag), tuple(d for d in diag if d > 1))


def is_two_avoiding(g: AbelianGroup) -> bool:
    """True when ``g`` has no Z_2 direct summand.

    Z_n splits off a Z_2 exactly when the 2-part of n is 2, so with the
    divisibility chain this is a check for any n_i = 2 (mod 4).
    """
    return all(n % 4 != 2 for n in g.torsion)


def subtract_free_rank(g: AbelianGroup, k: int) -> AbelianGroup:
    if k < 0:
        raise ValueError("k must be non-negative")
    if g.free_rank < k:
        raise InsufficientFreeRank(
            f"cannot remove Z^{k} from {g}: free rank is only {g.free_rank}")
    return AbelianGroup(g.free_rank - k, g.torsion)


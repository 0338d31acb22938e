"""The four one-relator families and parameter sweeps over them.

``bs`` (Baumslag-Solitar)  ``t a^m t^-1 a^-n``
``bstrebel``               ``t^k a^m t^-k a^-n``
``bgersten``               ``t a t^-1 a^m t a^-1 t^-1 a^-n``
``meskin``                 ``s_1^k_1 ... s_n^k_n``
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .covers import (PermRep, Permutation, cover_chain_h1, find_two_avoiding_index2,
                     format_rep, subgroup_h1_fox, subgroup_h1_rs, validate_rep)
from .errors import DegenerateParameters, NotOneRelator, PreconditionFailed, TooLarge
from .intlinalg import AbelianGroup, is_two_avoiding
from .presentation import Presentation, abelianized_relator_matrix, free_reduce, relator_warnings

FAMILIES = ("bs", "bstrebel", "bgersten", "meskin")

DEFAULT_MAX_EXPONENT = 10_000


@dataclass(frozen=True)
class FamilyInstance:
    family: str
    m: int | None = None
    n: int | None = None
    k: int | None = None
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if self.family not in FAMILIES:
            raise DegenerateParameters(f"unknown family {self.family!r}")
        if self.family == "meskin":
            if len(self.exponents) < 2 or any(x < 1 for x in self.exponents):
                raise DegenerateParameters("meskin needs at least two exponents, all >= 1")
            return
        if self.m is None or self.n is None or self.m == 0 or self.n == 0:
            raise DegenerateParameters(f"{self.family} needs nonzero m and n")
        if self.family == "bstrebel" and (self.k is None or self.k < 1):
            raise DegenerateParameters("bstrebel needs k >= 1")

    @classmethod
    def bs(cls, m: int, n: int) -> FamilyInstance:
        return cls("bs", m, n)

    @classmethod
    def bstrebel(cls, m: int, n: int, k: int) -> FamilyInstance:
        return cls("bstrebel", m, n, k)

    @classmethod
    def bgersten(cls, m: int, n: int) -> FamilyInstance:
        return cls("bgersten", m, n)

    @classmethod
    def meskin(cls, *exponents: int) -> FamilyInstance:
        return cls("meskin", exponents=exponents)

    def params(self) -> dict:
        if self.family == "meskin":
            return {"exponents": list(self.exponents)}
        d = {"m": self.m, "n": self.n}
        if self.family == "bstrebel":
            d["k"] = self.k
        return d

    def sort_key(self) -> tuple:
        if self.family == "meskin":
            return (len(self.exponents), self.exponents)
        return (self.m, self.n, self.k or 0)

    def max_exponent(self) -> int:
        if self.family == "meskin":
            return max(self.exponents)
        return max(abs(self.m), abs(self.n), self.k or 0)

    def __str__(self) -> str:
        if self.family == "meskin":
            return f"meskin({','.join(map(str, self.exponents))})"
        if self.family == "bstrebel":
            return f"bstrebel({self.m},{self.n},{self.k})"
        return f"{self.family}({self.m},{self.n})"


def build(f: FamilyInstance) -> Presentation:
    if f.family == "meskin":
        names = [f"s{i + 1}" for i in range(len(f.exponents))]
        return Presentation.from_names(names, [free_reduce(enumerate(f.exponents))])
    a, t = 0, 1
    m, n = f.m, f.n
    if f.family == "bs":
        raw = [(t, 1), (a, m), (t, -1), (a, -n)]
    elif f.family == "bstrebel":
        raw = [(t, f.k), (a, m), (t, -f.k), (a, -n)]
    else:
        raw = [(t, 1), (a, 1), (t, -1), (a, m), (t, 1), (a, -1), (t, -1), (a, -n)]
    return Presentation.from_names(["a", "t"], [free_reduce(raw)])


def bs_h1_closed_form(m: int, n: int) -> AbelianGroup:
    if m == 0 or n == 0:
        raise DegenerateParameters("m and n must be nonzero")
    d = abs(m - n)
    if d == 0:
        return AbelianGroup(2)
    return AbelianGroup(1, (d,) if d >= 2 else ())


def one_relator_h1(p: Presentation) -> AbelianGroup:
    """``Z^n / (k_1, ..., k_n) Z`` read off the gcd of the exponent sums."""
    if p.n_relators != 1:
        raise NotOneRelator(f"expected one relator, got {p.n_relators}")
    n = p.n_generators
    sums = [row[0] for row in abelianized_relator_matrix(p).entries]
    d = math.gcd(*sums) if sums else 0
    if d == 0:
        return AbelianGroup(n)
    return AbelianGroup(n - 1, (d,) if d >= 2 else ())


def _exponent_gcd(f: FamilyInstance) -> int:
    if f.family == "meskin":
        return math.gcd(*f.exponents)
    return abs(f.m - f.n)


def is_non_avoidable(f: FamilyInstance) -> bool:
    """``H_1`` has a Z_2 summand: the relevant gcd is 2 mod 4."""
    return _exponent_gcd(f) % 4 == 2


def _paper_case(f: FamilyInstance) -> bool:
    if f.family == "meskin":
        return _exponent_gcd(f) == 2
    return abs(f.m - f.n) == 2


def paper_theta(f: FamilyInstance) -> PermRep:
    """The index-2 representation chosen for ``f`` in the case analysis.

    Defined when ``|m - n| == 2`` (resp. ``gcd(k_i) == 2``).
    """
    if not _paper_case(f):
        raise PreconditionFailed(f"no case-analysis representation for {f}")
    p = build(f)
    swap, ident = Permutation.swap(), Permutation.identity(2)
    if f.family == "meskin":
        return validate_rep(p, [swap] * len(f.exponents))
    if f.family == "bgersten":
        return validate_rep(p, [swap, swap])
    if f.n % 2 == 0 or (f.family == "bstrebel" and f.k % 2 == 0):
        return validate_rep(p, [swap, ident])
    return validate_rep(p, [ident, swap])


def paper_claim(f: FamilyInstance) -> AbelianGroup | None:
    """Kernel homology as stated for the chosen representation, where one is stated.

    Only the orientations written out explicitly carry a claim: ``B(n, n+2)``,
    ``G_{n,n+2,k}``, ``BG(n+2, n)`` and Meskin groups with ``gcd(k_i) = 2``.
    """
    if not _paper_case(f):
        return None
    if f.family == "meskin":
        return AbelianGroup(2)
    m, n = f.m, f.n
    if f.family == "bgersten":
        if m != n + 2:
            return None
        return AbelianGroup(1) if n % 2 == 0 else AbelianGroup(1, (4,))
    if n != m + 2:
        return None
    odd_case = m % 2 == 1 and (f.family == "bs" or f.k % 2 == 1)
    if not odd_case:
        return AbelianGroup(1)
    torsion = abs(4 * (m + 1))
    return AbelianGroup(1, (torsion,)) if torsion >= 2 else None


def hypothesis_violation(f: FamilyInstance) -> bool:
    """``gcd(mn, k) != 1`` for Baumslag-Strebel groups."""
    return f.family == "bstrebel" and math.gcd(f.m * f.n, f.k) != 1


@dataclass(frozen=True)
class ScanRow:
    instance: FamilyInstance
    h1: AbelianGroup
    two_avoiding: bool
    non_avoidable: bool
    theta: str | None
    theta_source: str | None
    kernel_h1: dict
    agreement: bool | None
    kernel_two_avoiding: bool | None
    paper_claim: AbelianGroup | None
    matches_paper: str
    hypothesis_violation: bool
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "family": self.instance.family,
            "params": self.instance.params(),
            "h1": self.h1.to_dict(),
            "two_avoiding": self.two_avoiding,
            "non_avoidable": self.non_avoidable,
            "theta": self.theta,
            "theta_source": self.theta_source,
            "kernel_h1": {k: v.to_dict() for k, v in self.kernel_h1.items()},
            "agreement": self.agreement,
            "kernel_two_avoiding": self.kernel_two_avoiding,
            "paper_claim": self.paper_claim.to_dict() if self.paper_claim else None,
            "matches_paper": self.matches_paper,
            "hypothesis_violation": self.hypothesis_violation,
            "warnings": list(self.warnings),
        }


TSV_COLUMNS = ("family", "params", "h1", "two_avoiding", "theta", "theta_source",
               "kernel_fox", "kernel_rs", "kernel_chain", "agreement", "kernel_two_avoiding",
               "paper_claim", "matches_paper", "hypothesis_violation")


def row_to_tsv(row: ScanRow) -> str:
    params = ",".join(f"{k}={v}" if not isinstance(v, list) else f"{k}={'/'.join(map(str, v))}"
                      for k, v in row.instance.params().items())
    kh = row.kernel_h1
    cells = [row.instance.family, params, str(row.h1), row.two_avoiding, row.theta or "",
             row.theta_source or "", kh.get("fox", ""), kh.get("rs", ""), kh.get("chain", ""),
             row.agreement, row.kernel_two_avoiding, row.paper_claim or "", row.matches_paper,
             row.hypothesis_violation]
    return "\t".join("" if c is None else str(c) for c in cells)


def _compare(claim: AbelianGroup | None, got: AbelianGroup | None) -> str:
    if claim is None or got is None:
        return "not-stated"
    if claim == got:
        return "yes"
    if is_two_avoiding(claim) == is_two_avoiding(got):
        return "no-but-avoidability-agrees"
    return "no"


def scan_row(f: FamilyInstance) -> ScanRow:
    p = build(f)
    h1 = one_relator_h1(p)
    warnings = relator_warnings(p)
    if hypothesis_violation(f):
        warnings.append(f"gcd(mn, k) = {math.gcd(f.m * f.n, f.k)} != 1")
    rep, source = None, None
    if _paper_case(f):
        rep, source = paper_theta(f), "paper_theta"
    else:
        found = find_two_avoiding_index2(p)
        if found is not None:
            rep, source = found[0], "search"
    kernel: dict[str, AbelianGroup] = {}
    agreement = kernel_ok = None
    if rep is not None:
        kernel = {"fox": subgroup_h1_fox(p, rep), "rs": subgroup_h1_rs(p, rep),
                  "chain": cover_chain_h1(p, rep)}
        agreement = kernel["fox"] == kernel["rs"] == kernel["chain"]
        kernel_ok = all(is_two_avoiding(g) for g in kernel.values())
    claim = paper_claim(f) if source == "paper_theta" else None
    matches = _compare(claim, kernel.get("fox"))
    if matches in ("no", "no-but-avoidability-agrees"):
        warnings.append(f"kernel H1 {kernel['fox']} differs from the stated {claim}")
    return ScanRow(f, h1, is_two_avoiding(h1), is_non_avoidable(f),
                   format_rep(rep) if rep else None, source, kernel, agreement, kernel_ok,
                   claim, matches, hypothesis_violation(f), tuple(warnings))


def family_instances(family: str, m: Iterable[int] = (), n: Iterable[int] = (), k: Iterable[int] = (1,),
                     lengths: Iterable[int] = (), exponent_values: Iterable[int] = (),
                     where: Callable[[FamilyInstance], bool] | None = None) -> list[FamilyInstance]:
    """All valid instances in the product of the given ranges, in parameter order.

    Degenerate parameter combinations (m or n zero) are skipped.
    """
    out = []
    if family == "meskin":
        vals = sorted(set(exponent_values))
        for length in sorted(set(lengths)):
            for ks in itertools.product(vals, repeat=length):
                try:
                    out.append(FamilyInstance.meskin(*ks))
                except DegenerateParameters:
                    continue
    else:
        ks = sorted(set(k)) if family == "bstrebel" else [None]
        for mm, nn, kk in itertools.product(sorted(set(m)), sorted(set(n)), ks):
            try:
                out.append(FamilyInstance(family, mm, nn, kk))
            except DegenerateParameters:
                continue
    if where is not None:
        out = [f for f in out if where(f)]
    return sorted(out, key=FamilyInstance.sort_key)


def scan_family(instances: Sequence[FamilyInstance], max_exponent: int = DEFAULT_MAX_EXPONENT,
                workers: int = 1) -> list[ScanRow]:
    """One :class:`ScanRow` per instance, in the order given.

    With ``workers > 1`` rows are computed in a process pool; output order
    does not depend on completion order.
    """
    for f in instances:
        if f.max_exponent() > max_exponent:
            raise TooLarge(f"{f} exceeds the exponent cap {max_exponent}")
    if workers > 1 and len(instances) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(scan_row, instances, chunksize=max(1, len(instances) // (4 * workers))))
    return [scan_row(f) for f in instances]

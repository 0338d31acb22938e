"""Command-line interface.

Results go to stdout as one JSON envelope (or TSV for ``scan --format tsv``);
warnings are repeated on stderr.  Exit status: 0 ok, 1 domain error,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import functools
import json
import math
import sys
from typing import Sequence

from . import covers, families
from .errors import DomainError, FoxCoverError, ParseError
from .foxcalc import fox_derivative, format_element
from .intlinalg import (abelian_group_from_presentation_matrix, format_matrix, is_two_avoiding,
                        parse_matrix, smith_normal_form)
from .presentation import (abelianized_relator_matrix, format_presentation, parse_presentation,
                           relator_warnings)


class UsageError(FoxCoverError):
    pass


def parse_int_range(text: str) -> list[int]:
    """``"4"``, ``"2,4,6"``, ``"2..10"`` or ``"2..10:2"`` (inclusive)."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, _, rest = part.partition("..")
                hi, _, step = rest.partition(":")
                s = int(step) if step else 1
                if s < 1:
                    raise ValueError
                out.extend(range(int(lo), int(hi) + 1, s))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from None
    return out


def _single(values: list[int] | None, flag: str) -> int | None:
    if values is None:
        return None
    if len(values) != 1:
        raise UsageError(f"{flag} must be a single integer here")
    return values[0]


def _family_instance(args) -> families.FamilyInstance:
    fam = args.family
    if fam == "meskin":
        if not args.exponents:
            raise UsageError("--family meskin needs --exponents")
        return families.FamilyInstance.meskin(*args.exponents)
    return families.FamilyInstance(fam, _single(args.m, "--m"), _single(args.n, "--n"),
                                   _single(args.k, "--k") if fam == "bstrebel" else None)


def _load(args):
    """Resolve the presentation from positional text or family flags."""
    warnings: list[str] = []
    if args.presentation is not None:
        if args.family:
            raise UsageError("give either a presentation or --family, not both")
        p = parse_presentation(args.presentation)
    elif args.family:
        f = _family_instance(args)
        if f.max_exponent() > args.max_exponent:
            raise UsageError(f"{f} exceeds --max-exponent {args.max_exponent}")
        p = families.build(f)
        if families.hypothesis_violation(f):
            warnings.append(f"gcd(mn, k) = {math.gcd(f.m * f.n, f.k)} != 1")
    else:
        raise UsageError("a presentation or --family is required")
    return p, relator_warnings(p) + warnings


def _h1_of(p):
    if p.n_relators == 1:
        return families.one_relator_h1(p)
    return abelian_group_from_presentation_matrix(abelianized_relator_matrix(p))


def _group_verdict(g) -> dict:
    d = g.to_dict()
    d["two_avoiding"] = is_two_avoiding(g)
    return d


def cmd_h1(args):
    p, warnings = _load(args)
    return _group_verdict(_h1_of(p)), warnings


def cmd_fox(args):
    p, warnings = _load(args)
    if not 0 <= args.relator < p.n_relators:
        raise UsageError(f"relator index {args.relator} out of range 0..{p.n_relators - 1}")
    r = p.relators[args.relator]
    gens = range(p.n_generators)
    if args.generator is not None:
        if args.generator not in p.names:
            raise UsageError(f"unknown generator {args.generator!r}")
        gens = [p.names.index(args.generator)]
    derivs = []
    for j in gens:
        d = fox_derivative(r, j)
        derivs.append({"generator": p.names[j], "derivative": format_element(d, p.names),
                       "collected": format_element(d, p.names, collect=j)})
    return {"presentation": format_presentation(p), "relator": args.relator, "derivatives": derivs}, warnings


def cmd_snf(args):
    a = parse_matrix(args.matrix)
    dec = smith_normal_form(a)
    out = {"rows": a.rows, "cols": a.cols, "diagonal": list(dec.diagonal),
           "group": abelian_group_from_presentation_matrix(a).to_dict()}
    if args.witnesses:
        out["P"] = format_matrix(dec.P)
        out["Q"] = format_matrix(dec.Q)
    return out, []


_METHODS = {"fox": covers.subgroup_h1_fox, "rs": covers.subgroup_h1_rs, "chain": covers.cover_chain_h1}


def cmd_cover(args):
    p, warnings = _load(args)
    rep = covers.parse_rep(args.rep, p)
    names = list(_METHODS) if args.method == "all" else [args.method]
    groups = {m: _METHODS[m](p, rep) for m in names}
    out = {"rep": covers.format_rep(rep), "degree": rep.degree,
           "h1": {m: g.to_dict() for m, g in groups.items()},
           "two_avoiding": all(is_two_avoiding(g) for g in groups.values())}
    if len(groups) > 1:
        out["agreement"] = len(set(groups.values())) == 1
    return out, warnings


def cmd_enumerate(args):
    p, warnings = _load(args)
    reps = []
    for rep in covers.enumerate_index2_reps(p):
        g = covers.subgroup_h1_fox(p, rep)
        reps.append({"rep": covers.format_rep(rep), "h1": g.to_dict(), "two_avoiding": is_two_avoiding(g)})
    return {"presentation": format_presentation(p), "reps": reps}, warnings


def cmd_avoid(args):
    p, warnings = _load(args)
    found = covers.find_two_avoiding_index2(p)
    if found is None:
        return {"found": False, "rep": None, "h1": None}, warnings
    rep, g = found
    return {"found": True, "rep": covers.format_rep(rep), "h1": g.to_dict()}, warnings


def _scan_instances(args) -> list[families.FamilyInstance]:
    fam = args.family
    if not fam:
        raise UsageError("scan needs --family")
    if fam == "meskin":
        if args.exponents:
            insts = [families.FamilyInstance.meskin(*args.exponents)]
        else:
            if not args.lengths or not args.exponent_values:
                raise UsageError("meskin scans need --exponents or --lengths with --exponent-values")
            insts = families.family_instances(fam, lengths=args.lengths,
                                              exponent_values=[v for v in args.exponent_values if v >= 1])
        if args.gcd is not None:
            insts = [f for f in insts if math.gcd(*f.exponents) == args.gcd]
        return insts
    if args.m is None or args.n is None:
        raise UsageError("scan needs --m and --n ranges")
    if fam == "bstrebel" and args.k is None:
        raise UsageError("bstrebel scans need --k")
    where = None
    if args.diff is not None:
        where = lambda f: abs(f.m - f.n) == args.diff  # noqa: E731
    return families.family_instances(fam, args.m, args.n, args.k or (1,), where=where)


def cmd_scan(args):
    insts = _scan_instances(args)
    rows = families.scan_family(insts, max_exponent=args.max_exponent, workers=args.workers)
    warnings = [f"{r.instance}: {w}" for r in rows for w in r.warnings]
    return rows, warnings


def _add_presentation_args(sp):
    sp.add_argument("presentation", nargs="?", help='e.g. "< a, t | t a^2 t^-1 a^-4 >"')
    _add_family_args(sp)


def _add_family_args(sp):
    sp.add_argument("--family", choices=families.FAMILIES)
    sp.add_argument("--m", type=parse_int_range)
    sp.add_argument("--n", type=parse_int_range)
    sp.add_argument("--k", type=parse_int_range)
    sp.add_argument("--exponents", type=parse_int_range, help="meskin exponents, e.g. 2,4,6")
    sp.add_argument("--max-exponent", type=int, default=families.DEFAULT_MAX_EXPONENT)


@functools.lru_cache(maxsize=None)
def build_parser() -> argparse.ArgumentParser:
    # cached: construction dominates the cost of a small command
    ap = argparse.ArgumentParser(prog="foxcover", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("h1", help="first homology of the presented group")
    _add_presentation_args(sp)
    sp.set_defaults(func=cmd_h1)

    sp = sub.add_parser("fox", help="Fox derivatives of one relator")
    _add_presentation_args(sp)
    sp.add_argument("--relator", type=int, default=0)
    sp.add_argument("--generator")
    sp.set_defaults(func=cmd_fox)

    sp = sub.add_parser("snf", help="Smith normal form of an integer matrix")
    sp.add_argument("matrix", help='rows split by ";", entries by ",", e.g. "0,0;-1,-1"')
    sp.add_argument("--witnesses", action="store_true")
    sp.set_defaults(func=cmd_snf)

    sp = sub.add_parser("cover", help="H1 of the subgroup fixed by a permutation representation")
    _add_presentation_args(sp)
    sp.add_argument("--rep", required=True, help='e.g. "a:(1 2), t:id"')
    sp.add_argument("--method", choices=["fox", "rs", "chain", "all"], default="all")
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("enumerate", help="all index-2 representations and their kernels")
    _add_presentation_args(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("avoid", help="first index-2 subgroup with no Z_2 summand")
    _add_presentation_args(sp)
    sp.set_defaults(func=cmd_avoid)

    sp = sub.add_parser("scan", help="sweep a family over parameter ranges")
    _add_family_args(sp)
    sp.add_argument("--diff", type=int, help="keep only |m - n| == DIFF")
    sp.add_argument("--gcd", type=int, help="meskin: keep only gcd(k_i) == GCD")
    sp.add_argument("--lengths", type=parse_int_range, help="meskin: numbers of generators")
    sp.add_argument("--exponent-values", type=parse_int_range, help="meskin: values for each k_i")
    sp.add_argument("--format", choices=["json", "tsv"], default="json")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_scan)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    envelope = {"command": argv, "result": None, "warnings": [], "status": 0}
    try:
        result, warnings = args.func(args)
    except (ParseError, UsageError) as exc:
        envelope.update(status=2, error={"type": type(exc).__name__, "message": str(exc)})
    except DomainError as exc:
        envelope.update(status=1, error={"type": type(exc).__name__, "message": str(exc)})
    else:
        envelope["warnings"] = warnings
        if args.command == "scan":
            if args.format == "tsv":
                for w in warnings:
                    print(f"warning: {w}", file=sys.stderr)
                print("\t".join(families.TSV_COLUMNS))
                for row in result:
                    print(families.row_to_tsv(row))
                return 0
            result = [row.to_dict() for row in result]
        envelope["result"] = result
    for w in envelope["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    if envelope["status"]:
        print(f"error: {envelope['error']['message']}", file=sys.stderr)
    print(json.dumps(envelope, indent=2))
    return envelope["status"]


if __name__ == "__main__":
    sys.exit(main())

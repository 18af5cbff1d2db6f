"""Command-line front end.

Four subcommands: ``induce`` runs the full pipeline on one triple,
``sieve`` scores a parameter grid of a family and fully processes the
best slice, ``verify`` re-derives the bundled record claims, and
``dataset`` dumps the bundled records.  Machine output is JSON Lines
with a version field and all rationals as strings; given the same
command and configuration the bytes are identical run to run, whatever
the worker count.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence, TextIO

from .descent import naive_point_search, rank_lower_bound
from .errors import (DatasetCorrupt, DegenerateParameter, DegenerateTriple,
                     DiocurvesError, NotDiophantine, ParseError)
from .factoring import DEFAULT_BUDGET
from .families import (FAMILY_CONSTRUCTORS, dataset_record, paper_dataset,
                       make_family_member)
from .rationals import QQ, format_rational, parse_rational
from .sieve import mestre_nagao_sum
from .torsion import torsion_subgroup
from .triples import (Triple, canonical_points, extend_to_quadruple,
                      induced_curves, make_triple)
from .verify import RANK_DISCLAIMER, run_scope
from .weierstrass import CurveQ, clear_denominators, map_point, minimal_model

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_USAGE = 64

JSONL_VERSION = 1


@dataclass(frozen=True)
class Config:
    """Pipeline knobs; every default is part of the output contract."""

    N: int = 1000                 # sieve sum depth
    keep: float = 0.01            # fraction of scored candidates kept
    primes: int = 20              # reduction primes for the torsion bound
    eps: float = 1e-3             # canonical height accuracy
    height_bound: float = 5.0     # naive point search cutoff
    factor_budget: int = DEFAULT_BUDGET
    jobs: int = 1
    out: Optional[str] = None

    def validated(self) -> "Config":
        if (self.N <= 0 or not 0 < self.keep <= 1 or self.primes <= 0
                or self.eps <= 0 or self.height_bound < 0
                or self.factor_budget <= 0 or self.jobs <= 0):
            raise ValueError("configuration values out of range")
        return self


class _Parser(argparse.ArgumentParser):
    def error(self, message):       # argparse default exits with 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_config_file(path: str) -> dict:
    """Flat key=value file, # comments; same keys as the flags."""
    values: dict = {}
    names = {f: f for f in ("N", "keep", "primes", "eps", "height_bound",
                            "factor_budget", "jobs", "out")}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"line {lineno}: expected key=value")
                key, val = (part.strip() for part in line.split("=", 1))
                key = key.replace("-", "_")
                if key not in names:
                    raise ValueError(f"line {lineno}: unknown key {key!r}")
                values[key] = val
    except OSError as exc:
        raise ValueError(str(exc)) from exc
    return values


def _build_config(args) -> Config:
    cfg = Config()
    if args.config:
        raw = _read_config_file(args.config)
        casts = {"N": int, "keep": float, "primes": int, "eps": float,
                 "height_bound": float, "factor_budget": int, "jobs": int,
                 "out": str}
        cfg = replace(cfg, **{k: casts[k](v) for k, v in raw.items()})
    overrides = {}
    for field, attr in (("N", "N"), ("keep", "keep"), ("primes", "primes"),
                        ("eps", "eps"), ("height_bound", "height_bound"),
                        ("factor_budget", "factor_budget"),
                        ("jobs", "jobs"), ("out", "out")):
        val = getattr(args, attr, None)
        if val is not None:
            overrides[field] = val
    return replace(cfg, **overrides).validated()


# --------------------------------------------------------------------------
# Record construction
# --------------------------------------------------------------------------

def _parse_triple_text(text: str) -> Triple:
    inner = text.strip()
    if inner.startswith("{") and inner.endswith("}"):
        inner = inner[1:-1]
    parts = [p.strip() for p in inner.split(",")]
    if len(parts) != 3:
        raise ParseError(f"expected three comma-separated rationals, "
                         f"got {len(parts)}")
    return make_triple(*(parse_rational(p) for p in parts))


def _point_json(P) -> list[str]:
    return [format_rational(P.x), format_rational(P.y)]


def _curve_json(E: CurveQ) -> list[str]:
    return [format_rational(a) for a in (E.a1, E.a2, E.a3, E.a4, E.a6)]


def _search_record(triple: Triple, cfg: Config,
                   family_id: Optional[str] = None,
                   parameters: Sequence[QQ] = (),
                   with_extension: bool = False) -> dict:
    """Run the whole pipeline on one triple and collect the outcome.

    The working model is the cleared-denominator companion curve when no
    minimal model is reachable within the factor budget, otherwise the
    minimal model; all emitted points live on the emitted curve.
    """
    ic = induced_curves(triple)
    cp = canonical_points(triple, ic)
    try:
        mm = minimal_model(ic.curve, budget=cfg.factor_budget)
        E, to_E, minimal = mm.curve, mm.map, mm.complete
    except DiocurvesError:
        E, to_E = clear_denominators(ic.curve)
        minimal = False

    stock = [map_point(ic.curve, to_E, P)
             for P in (cp.x_zero, cp.x_one, cp.half_x_one)]
    found = naive_point_search(E, cfg.height_bound)
    candidates = sorted(set(found) | set(stock), key=lambda P: (P.x, P.y))

    score = mestre_nagao_sum(E, cfg.N)
    tors = torsion_subgroup(E, prime_count=cfg.primes)
    rank = rank_lower_bound(E, candidates, eps=cfg.eps,
                            budget=cfg.factor_budget)

    record = {
        "version": JSONL_VERSION,
        "kind": "search",
        "family": family_id,
        "parameters": [format_rational(p) for p in parameters],
        "triple": [format_rational(v) for v in triple.elements],
        "curve": _curve_json(E),
        "curve_minimal": minimal,
        "score": {"N": cfg.N, "value": score.value,
                  "primes_used": score.primes_used,
                  "primes_skipped": score.primes_skipped},
        "torsion": {"shape": list(tors.invariants), "order": tors.order,
                    "exact": tors.exact},
        "rank": {"lower_bound": rank.bound, "method": rank.method,
                 "certificate": list(rank.certificate_indices)},
        "points": [_point_json(P) for P in candidates],
    }
    if with_extension:
        ext = extend_to_quadruple(triple)
        record["quadruple_extension"] = {
            "values": sorted(format_rational(v)
                             for v in (ext.plus_branch, ext.minus_branch)),
            "usable": [format_rational(v) for v in ext.usable()],
        }
    return record


def _emit(lines: Iterable[str], out_path: Optional[str]) -> None:
    if out_path is None:
        for line in lines:
            print(line)
        return
    with open(out_path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_induce(triple_text: str, cfg: Config) -> int:
    try:
        triple = _parse_triple_text(triple_text)
    except (ParseError, NotDiophantine, DegenerateTriple) as exc:
        print(f"invalid triple: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    record = _search_record(triple, cfg, with_extension=True)
    _emit([_dumps(record)], cfg.out)
    tors = record["torsion"]
    print(f"triple {{{', '.join(record['triple'])}}}: "
          f"torsion {tuple(tors['shape'])}"
          f"{' exact' if tors['exact'] else ''}, "
          f"rank >= {record['rank']['lower_bound']} "
          f"({record['rank']['method']}), "
          f"score S({cfg.N}) = {record['score']['value']:.4f}",
          file=sys.stderr)
    return EXIT_OK


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"expected LO:HI, got {text!r}")
    return int(lo), int(hi)


def _grid(numerators: tuple[int, int],
          denominators: tuple[int, int]) -> list[QQ]:
    """Reduced fractions in the box, smallest max(|num|, den) first."""
    seen = set()
    items = []
    for num in range(numerators[0], numerators[1] + 1):
        for den in range(denominators[0], denominators[1] + 1):
            if den == 0:
                continue
            q = QQ(num, den)
            if (q.numerator, q.denominator) != (num, den) or q in seen:
                continue
            seen.add(q)
            items.append(q)
    items.sort(key=lambda q: (max(abs(q.numerator), q.denominator),
                              q.numerator, q.denominator))
    return items


def _sieve_worker(payload) -> str:
    family_id, params, cfg_fields = payload
    cfg = Config(**cfg_fields)
    member = make_family_member(family_id, *params)
    record = _search_record(member.triple, cfg, family_id=family_id,
                            parameters=member.parameters)
    return _dumps(record)


def cmd_sieve(family_id: str, numerators: tuple[int, int],
              denominators: tuple[int, int], cfg: Config) -> int:
    ctor = FAMILY_CONSTRUCTORS[family_id]
    lines: list[str] = []
    scored: list[tuple[float, QQ]] = []
    for q in _grid(numerators, denominators):
        try:
            triple = ctor(q)
        except (DegenerateParameter, NotDiophantine, DegenerateTriple) as exc:
            lines.append(_dumps({
                "version": JSONL_VERSION, "kind": "skip",
                "family": family_id,
                "parameters": [format_rational(q)],
                "error": type(exc).__name__, "message": str(exc)}))
            continue
        score = mestre_nagao_sum(
            clear_denominators(induced_curves(triple).curve)[0], cfg.N)
        scored.append((score.value, q))

    kept_n = min(len(scored), max(1, math.ceil(cfg.keep * len(scored)))) \
        if scored else 0
    scored.sort(key=lambda sq: (-sq[0], max(abs(sq[1].numerator),
                                            sq[1].denominator),
                                sq[1].numerator, sq[1].denominator))
    kept = [q for _, q in scored[:kept_n]]

    payloads = [(family_id, (format_rational(q),),
                 {"N": cfg.N, "keep": cfg.keep, "primes": cfg.primes,
                  "eps": cfg.eps, "height_bound": cfg.height_bound,
                  "factor_budget": cfg.factor_budget}) for q in kept]
    if cfg.jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            lines.extend(pool.map(_sieve_worker, payloads))
    else:
        lines.extend(_sieve_worker(p) for p in payloads)

    _emit(lines, cfg.out)
    print(f"{family_id}: scored {len(scored)} parameters, kept {kept_n}, "
          f"skipped {len(lines) - kept_n} degenerate", file=sys.stderr)
    return EXIT_OK


def cmd_verify(scope: str, long: bool, cfg: Config,
               stream: Optional[TextIO] = None) -> int:
    stream = sys.stdout if stream is None else stream
    scope = scope.replace("§", "s")
    results = run_scope(scope, long=long,
                        sink=lambda r: print(r.line(),
                                             file=stream, flush=True))
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed, scope {scope}"
          f"{' (long)' if long else ''}", file=stream)
    print(RANK_DISCLAIMER, file=stream)
    return EXIT_OK if passed == len(results) else EXIT_VERIFY_FAILED


def _record_json(rec, full: bool) -> dict:
    obj = {
        "version": JSONL_VERSION,
        "kind": "record",
        "id": rec.record_id,
        "section": rec.section,
        "torsion_shape": list(rec.torsion_shape),
        "claimed_rank": rec.claimed_rank,
        "family": None if rec.family is None else {
            "id": rec.family.family_id,
            "parameters": [format_rational(p)
                           for p in rec.family.parameters]},
        "triple": [format_rational(v) for v in rec.triple.elements],
        "has_curve": rec.curve is not None,
        "torsion_point_count": len(rec.torsion_points),
        "point_count": len(rec.points),
        "notes": rec.notes,
    }
    if full:
        if rec.curve is not None:
            obj["curve"] = _curve_json(rec.curve)
            obj["torsion_points"] = [_point_json(P)
                                     for P in rec.torsion_points]
            obj["points"] = [_point_json(P) for P in rec.points]
        if rec.printed_triple is not None:
            obj["printed_triple"] = [format_rational(v)
                                     for v in rec.printed_triple]
            obj["printed_triple_valid"] = rec.printed_triple_valid
    return obj


def cmd_dataset(record_id: Optional[str], cfg: Config) -> int:
    if record_id is None:
        _emit([_dumps(_record_json(rec, full=False))
               for rec in paper_dataset()], cfg.out)
        return EXIT_OK
    try:
        rec = dataset_record(record_id.replace("§", "s"))
    except KeyError:
        print(f"unknown record id: {record_id}", file=sys.stderr)
        return EXIT_USAGE
    _emit([_dumps(_record_json(rec, full=True))], cfg.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--N", type=int, default=None,
                     help="sieve sum depth (default 1000)")
    sub.add_argument("--keep", type=float, default=None,
                     help="kept fraction of scored candidates (default 0.01)")
    sub.add_argument("--primes", type=int, default=None,
                     help="reduction primes for the torsion bound")
    sub.add_argument("--eps", type=float, default=None,
                     help="canonical height accuracy")
    sub.add_argument("--height-bound", dest="height_bound", type=float,
                     default=None, help="naive point search cutoff")
    sub.add_argument("--factor-budget", dest="factor_budget", type=int,
                     default=None, help="factoring effort cap")
    sub.add_argument("--jobs", type=int, default=None,
                     help="worker processes (sieve only)")
    sub.add_argument("--out", default=None,
                     help="write JSON lines here instead of stdout")
    sub.add_argument("--config", default=None,
                     help="key=value file with the same keys as the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="diocurves",
                     description="Elliptic curves induced by rational "
                                 "Diophantine triples: construction, "
                                 "sieving and record verification.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_induce = subs.add_parser("induce", help="full pipeline on one triple")
    p_induce.add_argument("triple", help='e.g. "{1,3,8}" or "1,3,8"')
    _add_common(p_induce)

    p_sieve = subs.add_parser("sieve", help="score a family parameter grid")
    p_sieve.add_argument("family", choices=sorted(FAMILY_CONSTRUCTORS))
    p_sieve.add_argument("--numerators", required=True,
                         help="numerator range LO:HI")
    p_sieve.add_argument("--denominators", required=True,
                         help="denominator range LO:HI")
    _add_common(p_sieve)

    p_verify = subs.add_parser("verify", help="re-derive record claims")
    p_verify.add_argument("scope", nargs="?", default="all",
                          help="all, a section tag s1..s6, or a record id")
    p_verify.add_argument("--long", action="store_true",
                          help="include the slowest certifications")
    _add_common(p_verify)

    p_dataset = subs.add_parser("dataset", help="dump the bundled records")
    p_dataset.add_argument("record_id", nargs="?", default=None)
    _add_common(p_dataset)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _build_config(args)
    except (ValueError, TypeError) as exc:
        print(f"bad configuration: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "induce":
            return cmd_induce(args.triple, cfg)
        if args.command == "sieve":
            try:
                nums = _parse_range(args.numerators)
                dens = _parse_range(args.denominators)
            except ValueError as exc:
                print(f"bad range: {exc}", file=sys.stderr)
                return EXIT_USAGE
            return cmd_sieve(args.family, nums, dens, cfg)
        if args.command == "verify":
            try:
                return cmd_verify(args.scope, args.long, cfg)
            except KeyError:
                print(f"unknown scope: {args.scope}", file=sys.stderr)
                return EXIT_USAGE
        if args.command == "dataset":
            return cmd_dataset(args.record_id, cfg)
    except DatasetCorrupt as exc:
        print(f"dataset corrupt: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except DiocurvesError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: compute, approximate, tables, verify."""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from dataclasses import dataclass

from . import approximation as ap
from . import evaluations as ev
from . import invariants as inv
from .algebra import DEFAULT_PRECISION, HalfGridLaurent, mp_context
from .notation import (
    BraidWord,
    CorpusEntry,
    PresentationError,
    components,
    find_entry,
    load_corpus,
    parse_braid,
    parse_pd,
)

ENV_PREFIX = "KNOTAPPROX_"
EXIT_OK, EXIT_CHECK_FAILED, EXIT_ERROR = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    precision: int = DEFAULT_PRECISION
    tolerance: object = None
    fmt: str = "csv"
    corpus: str | None = None
    max_crossings: int = inv.MAX_CROSSINGS
    max_strands: int = inv.MAX_STRANDS
    max_word: int = inv.MAX_WORD
    out: str | None = None

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if min(self.max_crossings, self.max_strands, self.max_word) < 1:
            raise ValueError("engine limits must be positive")

    @property
    def tol(self):
        return ev.default_tolerance(self.precision) if self.tolerance is None else self.tolerance


class CliError(Exception):
    pass


def _parse_tolerance(text: str, precision: int):
    ctx = mp_context(precision)
    m = re.fullmatch(r"\s*2\^(-?\d+)\s*", text)
    if m:
        return ctx.ldexp(1, int(m.group(1)))
    try:
        value = ctx.mpf(text)
    except (ValueError, TypeError):
        raise CliError(f"bad tolerance {text!r}") from None
    if value <= 0:
        raise CliError("tolerance must be positive")
    return value


def _setting(args, name: str, default, cast=str):
    value = getattr(args, name, None)
    if value is None:
        env = os.environ.get(ENV_PREFIX + name.upper())
        if env is not None:
            try:
                value = cast(env)
            except ValueError:
                raise CliError(f"bad value for {ENV_PREFIX + name.upper()}: {env!r}") from None
    return default if value is None else value


def build_config(args) -> RunConfig:
    precision = _setting(args, "precision", DEFAULT_PRECISION, int)
    tol_text = _setting(args, "tolerance", None)
    try:
        return RunConfig(
            precision=precision,
            tolerance=None if tol_text is None else _parse_tolerance(str(tol_text), precision),
            fmt=_setting(args, "format", "csv"),
            corpus=_setting(args, "corpus", None),
            max_crossings=_setting(args, "max_crossings", inv.MAX_CROSSINGS, int),
            max_strands=_setting(args, "max_strands", inv.MAX_STRANDS, int),
            max_word=_setting(args, "max_word", inv.MAX_WORD, int),
            out=_setting(args, "out", None),
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None


# ---------------------------------------------------------------------------
# Link references


def resolve_link(ref: str, cfg: RunConfig) -> CorpusEntry:
    """A corpus name, or an inline ``pd:X(...)...`` / ``braid:n; w...`` presentation."""
    if ref.startswith("pd:"):
        pd = parse_pd(ref[3:])
        return CorpusEntry("inline", components(pd), pd=pd)
    if ref.startswith("braid:"):
        braid = parse_braid(ref[6:])
        return CorpusEntry("inline", components(braid), braid=braid)
    try:
        return find_entry(load_corpus(cfg.corpus), ref)
    except KeyError:
        raise CliError(f"unknown link {ref!r}") from None


def _jones(entry: CorpusEntry, cfg: RunConfig) -> inv.JonesPolynomial:
    return inv.jones(entry.diagram(), cfg.max_crossings)


def _homfly(entry: CorpusEntry, cfg: RunConfig) -> inv.HomflyPolynomial:
    if entry.braid is None:
        raise CliError(f"link {entry.name!r} has no braid presentation; HOMFLY needs one")
    return inv.homfly(entry.braid, cfg.max_strands, cfg.max_word)


def _source_polynomial(entry: CorpusEntry, source: str, cfg: RunConfig) -> HalfGridLaurent:
    if source == "jones":
        return _jones(entry, cfg).poly
    m = re.fullmatch(r"homfly:(-?\d+)", source)
    if m:
        return inv.homfly_specialize(_homfly(entry, cfg), int(m.group(1)))
    m = re.fullmatch(r"kauffman:(-?\d+)", source)
    if m:
        return inv.kauffman_specialize(entry.kauffman_F, int(m.group(1)))
    raise CliError(f"unknown source {source!r}; use jones, homfly:N or kauffman:N")


# ---------------------------------------------------------------------------
# Commands


def cmd_compute(args, cfg: RunConfig, out) -> int:
    entry = resolve_link(args.link, cfg)
    which = args.which
    if which == "jones":
        data = _jones(entry, cfg).poly.to_json()
    elif which == "bracket":
        data = inv.kauffman_bracket(entry.diagram(), cfg.max_crossings).to_json()
    elif which == "homfly":
        data = _homfly(entry, cfg).poly.to_json()
    elif which == "alexander":
        data = inv.alexander(_homfly(entry, cfg)).to_json()
    elif which == "qpoly":
        if entry.kauffman_F is None:
            raise CliError(f"link {entry.name!r} has no kauffman_F field; Q needs ingested Kauffman data")
        data = inv.q_polynomial(entry.kauffman_F, entry.components).to_json()
    else:
        raise CliError(f"unknown invariant {which!r}")
    out.write(json.dumps(data, separators=(",", ":")) + "\n")
    return EXIT_OK


def cmd_approximate(args, cfg: RunConfig, out) -> int:
    entry = resolve_link(args.link, cfg)
    poly = _source_polynomial(entry, args.source, cfg)
    grid = args.grid or ("integer" if poly.is_knot_grade else "half")
    ctx = mp_context(cfg.precision)
    if args.mode == "finite":
        d = args.d if args.d is not None else ap.vassiliev_from_laurent(poly, 0, grid).degree()
        if not -d <= args.n <= d:
            raise CliError(f"--n {args.n} outside -{d}..{d}")
        v = ap.vassiliev_from_laurent(poly, 2 * d, grid)
        value = ap.reconstruct_finite(v, d, args.n)
        reference = v.coefficient(args.n)
        err = abs(value - reference)
        if cfg.fmt == "json":
            out.write(json.dumps({"link": entry.name, "n": args.n, "d": d, "grid": grid,
                                  "value": str(value), "reference": str(reference), "abs_error": str(err)}) + "\n")
        else:
            out.write("order,partial_sum_re,partial_sum_im,abs_error\n")
            out.write(f"{2 * d},{value},0,{err}\n")
        return EXIT_OK if err == 0 else EXIT_CHECK_FAILED
    order = args.order if args.order is not None else 200
    v = ap.vassiliev_from_laurent(poly, order, grid)
    report = ap.reconstruct_infinite(v, args.n, order, cfg.precision)
    if cfg.fmt == "json":
        rows = [
            {"order": i, "partial_sum_re": ctx.nstr(s.real, 30), "partial_sum_im": ctx.nstr(s.imag, 30),
             "abs_error": ctx.nstr(e, 10)}
            for i, (s, e) in enumerate(zip(report.partial_sums, report.errors))
        ]
        out.write(json.dumps({"link": entry.name, "n": args.n, "grid": grid, "rows": rows}, indent=1) + "\n")
    else:
        out.write(report.to_csv())
    series_tol = ctx.mpf(args.series_tolerance)
    return EXIT_OK if report.final_error() < series_tol else EXIT_CHECK_FAILED


def cmd_tables(args, cfg: RunConfig, out) -> int:
    if args.all == (args.link is not None):
        raise CliError("give exactly one of a link name or --all")
    entries = load_corpus(cfg.corpus) if args.all else [resolve_link(args.link, cfg)]
    reports = []
    for entry in entries:
        reports.extend(ev.corpus_reports(entry, cfg.precision, cfg.tol))
    if cfg.fmt == "json":
        out.write("[\n" + ",\n".join(r.to_json() for r in reports) + "\n]\n")
    else:
        out.write(",".join(ev.COLUMNS) + "\n")
        for r in reports:
            out.write(r.to_csv(header=False))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_CHECK_FAILED


# --- verify suites: each returns a list of (label, passed) ---------------------


def verify_kronecker(cfg: RunConfig):
    results = []
    for grid in ap.GRIDS:
        step = ap._grid_step(grid)
        ok = all(
            ap.finite_gen_fn(d, n, grid)(m * step) == (1 if m == n else 0)
            for d in range(7) for n in range(-d, d + 1) for m in range(-d, d + 1)
        )
        results.append((f"finite generating functions, {grid} grid, d <= 6", ok))
        ok = all(ap.sinc_at_grid_point(n, m, grid) == (1 if m == n else 0)
                 for n in range(-12, 13) for m in range(-12, 13))
        results.append((f"sinc generating functions, {grid} grid, |m|,|n| <= 12", ok))
    return results


def _corpus_knot_sequences(cfg: RunConfig, extra: int):
    for entry in load_corpus(cfg.corpus):
        if not entry.is_knot:
            continue
        J = _jones(entry, cfg).poly
        d = ap.vassiliev_from_laurent(J, 0, "integer").degree()
        yield entry, J, d, ap.vassiliev_from_laurent(J, 2 * (d + extra) + 1, "integer")


def verify_stability(cfg: RunConfig):
    results = []
    for entry, J, d, v in _corpus_knot_sequences(cfg, 3):
        base = ap.vandermonde_solve(v, d)
        ok = all(base[k + d] == J.coeff(2 * k) for k in range(-d, d + 1))
        for extra in range(1, 4):
            wide = ap.vandermonde_solve(v, d + extra)
            ok = ok and all(wide[k + d + extra] == base[k + d] for k in range(-d, d + 1))
            ok = ok and all(wide[i] == 0 for i in range(extra)) and all(wide[-1 - i] == 0 for i in range(extra))
        results.append((f"{entry.name}: solutions stable for d = {d}..{d + 3}", ok))
    return results


def verify_skein(cfg: RunConfig, cases: int = 100, seed: int = 0):
    rng = random.Random(seed)
    passed = 0
    for _ in range(cases):
        strands = rng.randint(2, 4)
        word = tuple(rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(rng.randint(1, 10)))
        braid = BraidWord(strands, word)
        passed += inv.skein_check(braid, rng.randrange(len(word)))
    return [(f"skein relation at {cases} random braid positions ({passed} passed)", passed == cases)]


def verify_twist(cfg: RunConfig):
    rep = ev.twist_sequence_report(6)
    return [
        ("closed form of J(T_m), m <= 6", all(rep.closed_form_ok.values())),
        ("vanishing window of a_n(T_m)", not rep.window_violations),
    ]


def verify_consistency(cfg: RunConfig):
    results = []
    for entry, J, d, v in _corpus_knot_sequences(cfg, 6):
        ok = all(ap.vassiliev_consistency(v, d, i) == v[i] for i in range(13))
        results.append((f"{entry.name}: consistency formula for i <= 12", ok))
    return results


def verify_degree(cfg: RunConfig):
    corpus = load_corpus(cfg.corpus)
    J = _jones(find_entry(corpus, "trefoil"), cfg).poly
    v = ap.vassiliev_from_laurent(J, 20)
    est = ap.degree_estimate(v, 20, cfg.precision).value.real
    results = [(f"trefoil estimate at n = 20 is {mp_context(cfg.precision).nstr(est, 8)}", abs(est - 4) < 0.04)]
    for d in (1, 2, 5):
        w = ap.vassiliev_from_laurent(HalfGridLaurent.monomial(2 * d), 12)
        ok = all(ap.degree_estimate(w, n, cfg.precision).exact == d for n in range(1, 13))
        results.append((f"t^{d} gives exactly {d} for n <= 12", ok))
    return results


SUITES = {
    "kronecker": verify_kronecker,
    "stability": verify_stability,
    "skein": verify_skein,
    "twist": verify_twist,
    "consistency": verify_consistency,
    "degree": verify_degree,
}


def cmd_verify(args, cfg: RunConfig, out) -> int:
    results = SUITES[args.suite](cfg)
    for label, ok in results:
        out.write(f"{'PASS' if ok else 'FAIL'} {args.suite}: {label}\n")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="working precision in bits (default 128)")
    common.add_argument("--tolerance", help="integer-rounding tolerance, e.g. 2^-32")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--corpus", help="corpus JSON file (default: bundled)")
    common.add_argument("--max-crossings", dest="max_crossings", type=int)
    common.add_argument("--max-strands", dest="max_strands", type=int)
    common.add_argument("--max-word", dest="max_word", type=int)
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="knotapprox", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="print a link polynomial")
    p.add_argument("link")
    p.add_argument("which", choices=["jones", "bracket", "homfly", "alexander", "qpoly"])
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("approximate", parents=[common], help="reconstruct a coefficient from the Vassiliev sequence")
    p.add_argument("link")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["finite", "infinite"], default="finite")
    p.add_argument("--d", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--grid", choices=list(ap.GRIDS))
    p.add_argument("--source", default="jones", help="jones, homfly:N or kauffman:N")
    p.add_argument("--series-tolerance", dest="series_tolerance", default="1e-6")
    p.set_defaults(func=cmd_approximate)

    p = sub.add_parser("tables", parents=[common], help="special-value tables and branched-cover identities")
    p.add_argument("link", nargs="?")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if cfg.out:
            with open(cfg.out, "w", newline="") as fh:
                return args.func(args, cfg, fh)
        return args.func(args, cfg, sys.stdout)
    except (CliError, PresentationError, inv.EngineLimitError, ValueError, ArithmeticError) as exc:
        print(f"knotapprox: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

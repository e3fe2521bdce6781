"""Command-line entry point: ``wellsum table|verify|coeffs|sample``.

Exit codes: 0 when every verdict is Pass, 2 when any is Fail, 64 for usage
or parse errors, 65 for domain and route errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import mpmath

from . import formulas, spectral, verifier
from .errors import DomainError, RangeError, RouteError, UnsupportedError
from .exactval import as_rational
from .specfun import PrecisionContext

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_USAGE = 64
EXIT_DOMAIN = 65

DEFAULT_BITS = 320
DEFAULT_TERMS = 2000

ROUTES = {
    "bessel": spectral.CoeffRoute.BESSEL_EQUAL,
    "hyper": spectral.CoeffRoute.HYPERGEOMETRIC,
    "quad": spectral.CoeffRoute.QUADRATURE,
}

# kind -> (constructor, required keys)
KINDS = {
    "odd-sq": (formulas.OddBesselSq, ("p", "e")),
    "odd-prod": (formulas.OddBesselProd, ("p", "q", "e")),
    "even-sq": (formulas.EvenBesselSq, ("p", "e")),
    "even-prod": (formulas.EvenBesselProd, ("p", "q", "e")),
    "alln-prod": (formulas.AllNBesselProd, ("p", "q", "e")),
    "hyper": (formulas.HyperSq, ("a", "b", "w")),
    "identity24": (None, ()),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_family(text: str):
    """``"odd-sq p=3 e=6"`` -> family; ``"identity24"`` -> None."""
    words = text.split()
    if not words:
        raise UsageError("empty family spec")
    kind, pairs = words[0].lower(), words[1:]
    if kind not in KINDS:
        raise UsageError(f"unknown family kind {kind!r}; expected one of {', '.join(KINDS)}")
    make, keys = KINDS[kind]
    vals = {}
    for pair in pairs:
        k, sep, v = pair.partition("=")
        if not sep or k not in keys:
            raise UsageError(f"bad key {pair!r} for {kind}; expected {', '.join(keys) or 'no keys'}")
        if k in vals:
            raise UsageError(f"key {k!r} given twice")
        try:
            vals[k] = as_rational(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad number {v!r}") from exc
    missing = [k for k in keys if k not in vals]
    if missing:
        raise UsageError(f"{kind} needs {', '.join(missing)}")
    if make is None:
        return None
    args = []
    for k in keys:
        v = vals[k]
        if k in ("a", "b"):
            args.append(v)
        elif v.denominator != 1:
            raise UsageError(f"{k} must be an integer, got {v}")
        else:
            args.append(int(v))
    return make(*args)


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _default_bits() -> int:
    env = os.environ.get("WELLSUM_BITS")
    if env is None:
        return DEFAULT_BITS
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"WELLSUM_BITS must be an integer, got {env!r}") from None


def _add_globals(p: argparse.ArgumentParser, top: bool):
    # on subcommands the defaults are suppressed so top-level values survive
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--bits", type=int, default=d(None), help="working precision in bits (default 320, or WELLSUM_BITS)")
    p.add_argument("--terms", type=int, default=d(DEFAULT_TERMS), help="terms summed per series (default 2000)")
    p.add_argument("--format", choices=("md", "json", "csv"), default=d("md"), help="report format")
    p.add_argument("--out", default=d(None), help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=d(1), help="worker processes for summation")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wellsum", description="Closed forms and certified sums of Bessel-type series.")
    _add_globals(parser, True)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    t = sub.add_parser("table", help="generate and certify one of Tables 1-7")
    t.add_argument("table_id", type=int, choices=range(1, 8), metavar="TABLE")
    t.add_argument("--emit", help="also write the generated rows (exact only) as JSON to this path")
    t.add_argument("--exact-only", action="store_true", help="skip numeric certification")
    _add_globals(t, False)

    v = sub.add_parser("verify", help="certify one series family")
    v.add_argument("family", help='e.g. "odd-sq p=3 e=6", "hyper a=5/2 b=5/2 w=6", "identity24"')
    _add_globals(v, False)

    c = sub.add_parser("coeffs", help="expansion coefficients C_n as CSV")
    c.add_argument("alpha", type=_rational_arg)
    c.add_argument("beta", type=_rational_arg)
    c.add_argument("n_max", type=int)
    c.add_argument("--route", choices=("bessel", "hyper", "quad", "all"), default="hyper")
    _add_globals(c, False)

    s = sub.add_parser("sample", help="samples of the normalized wave function as CSV")
    s.add_argument("alpha", type=_rational_arg)
    s.add_argument("beta", type=_rational_arg)
    s.add_argument("points", type=int)
    _add_globals(s, False)
    return parser


# ------------------------------------------------------------------ commands


def _row_record(row: formulas.TableRow, res) -> dict:
    d = row.to_dict()
    if res is not None:
        r = res.to_dict()
        for k in ("numeric", "difference", "terms", "tail_bound", "bound_kind", "verdict"):
            d[k] = r[k]
    notes = []
    if not row.match:
        notes.append(f"printed {row.printed} differs from generated {row.exact}")
    if not row.norm_match:
        notes.append(
            f"printed normalization C^2={row.norm_printed}, a^-{row.norm_a_power_printed}; "
            f"generated C^2={row.norm_generated}, a^-{row.state[0] + row.state[1] + Fraction(1, 2)}"
        )
    d["notes"] = notes
    return d


def _render_table(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    cols = ["row", "family", "exact_text", "paper_printed_text", "match", "numeric", "difference",
            "tail_bound", "bound_kind", "verdict", "notes"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for d in records:
            w.writerow([("; ".join(d[c]) if c == "notes" else d.get(c, "")) for c in cols])
        return buf.getvalue()
    head = ["row", "family", "generated", "printed", "match", "numeric", "|diff|", "tail bound", "bound", "verdict"]
    out = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    for d in records:
        num = d.get("numeric", "")
        cells = [d["row"], d["family"], d["exact_text"], d["paper_printed_text"], "yes" if d["match"] else "NO",
                 verifier.short_number(num) if num else "", d.get("difference") or "", d.get("tail_bound", ""),
                 d.get("bound_kind", ""), d.get("verdict", "")]
        out.append("| " + " | ".join(str(c) for c in cells) + " |")
    notes = [(d["row"], n) for d in records for n in d["notes"]]
    if notes:
        out.append("")
        out.extend(f"- row {r}: {n}" for r, n in notes)
    return "\n".join(out) + "\n"


def cmd_table(args, ctx) -> tuple[str, int]:
    rows = formulas.table(args.table_id)
    if args.emit:
        keep = ("family", "params", "exact", "paper_printed", "match")
        with open(args.emit, "w", encoding="utf-8") as fh:
            json.dump([{k: r.to_dict()[k] for k in keep} for r in rows], fh, indent=2)
            fh.write("\n")
    records, failed = [], False
    for row in rows:
        res = None
        if not args.exact_only:
            res = verifier.certify(row.family, row.exact, args.terms, ctx, workers=args.jobs, processes=args.jobs > 1)
            failed |= res.verdict == verifier.Verdict.FAIL
        records.append(_row_record(row, res))
    return _render_table(records, args.format), EXIT_FAIL if failed else EXIT_OK


def cmd_verify(args, ctx) -> tuple[str, int]:
    fam = parse_family(args.family)
    if fam is None:
        res = verifier.identity24_check(args.terms, ctx, workers=args.jobs)
    else:
        res = verifier.certify(fam, None, args.terms, ctx, workers=args.jobs, processes=args.jobs > 1)
    render = {"json": verifier.report_json, "md": verifier.report_markdown, "csv": verifier.report_csv}
    code = EXIT_FAIL if res.verdict == verifier.Verdict.FAIL else EXIT_OK
    return render[args.format]([res]), code


def _digits(ctx) -> int:
    return max(6, int(ctx.precision_bits * 0.30103) - 2)


def cmd_coeffs(args, ctx) -> tuple[str, int]:
    if args.n_max < 0:
        raise DomainError("n_max must be non-negative")
    state = spectral.WaveState(args.alpha, args.beta)
    if args.route == "all":
        routes = spectral.routes_for(state)
    else:
        routes = [ROUTES[args.route]]
        if routes[0] not in spectral.routes_for(state):
            raise RouteError(f"route {args.route} does not apply to {state}")
    names = {v: k for k, v in ROUTES.items()}
    digits = _digits(ctx)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n"] + ([f"C_n_{names[r]}" for r in routes] if len(routes) > 1 else ["C_n"]))
    worst = mpmath.mpf(0)
    for n in range(1, args.n_max + 1):
        vals = [spectral.coeff(state, n, r, ctx) for r in routes]
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                worst = max(worst, abs(vals[i] - vals[j]))
        w.writerow([n] + [spectral._fixed(v, digits) for v in vals])
    if len(routes) > 1 and args.n_max > 0:
        buf.write(f"# max_discrepancy,{mpmath.nstr(worst, 6, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)}\n")
    return buf.getvalue(), EXIT_OK


def cmd_sample(args, ctx) -> tuple[str, int]:
    state = spectral.WaveState(args.alpha, args.beta)
    samples = spectral.sample_wavefunction(state, args.points, ctx)
    return spectral.write_samples_csv(samples, ctx=ctx), EXIT_OK


COMMANDS = {"table": cmd_table, "verify": cmd_verify, "coeffs": cmd_coeffs, "sample": cmd_sample}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: table, verify, coeffs or sample")
        bits = args.bits if args.bits is not None else _default_bits()
        if bits < 64:
            raise UsageError("--bits must be at least 64")
        if args.terms < 8:
            raise UsageError("--terms must be at least 8")
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        ctx = PrecisionContext(bits)
        text, code = COMMANDS[args.command](args, ctx)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, RouteError, RangeError, UnsupportedError) as exc:
        print(f"wellsum: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

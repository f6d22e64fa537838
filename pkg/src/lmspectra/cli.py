"""Command-line front end: ``lmspectra <module> <action> [options]``.

Every command prints a JSON envelope (``--format json``, the default) with the
command echo, parsed inputs, results tagged ``exact``, ``enclosure`` or
``empirical``, and timing.  Tabular commands also support ``--format csv``.

Exit codes: 0 success, 1 failed verification, 2 usage, 3 domain error,
4 budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
import time
from fractions import Fraction

from . import boxdim, cantor, cf, lattice, markov, spectrum, verify
from .enclosure import BoundedValue
from .errors import BudgetExceeded, DomainError, InsufficientPrecision
from .surd import format_real, parse_real

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_DOMAIN, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


# -- serialization ------------------------------------------------------------------

def exact(x) -> dict:
    return {"provenance": "exact", "value": format_real(x) if not isinstance(x, int) else str(x), "float": float(x)}


def enclosure(b: BoundedValue) -> dict:
    return {
        "provenance": "enclosure",
        "lo": format_real(b.lo),
        "hi": format_real(b.hi),
        "float": float(b.mid),
        "width": float(b.width),
    }


def empirical(x: float) -> dict:
    return {"provenance": "empirical", "float": x}


def _envelope(argv, inputs: dict, result, seconds: float, budget_exhausted: bool = False) -> dict:
    return {
        "command": argv,
        "inputs": inputs,
        "result": result,
        "seconds": round(seconds, 6),
        "budget_exhausted": budget_exhausted,
    }


# -- input parsing --------------------------------------------------------------------

_DECIMAL = re.compile(r"\d\.\d|^\.\d|\d\.$")


def parse_target(text: str, as_enclosure=None):
    """An exact number, a continued-fraction prefix, or a decimal with an explicit width.

    ``"pi:[3;7,15,1]"`` (any label before the colon) and ``"[1;2,2,...]"``
    give a :class:`CFExpansion`; surd and rational strings give exact
    values.  Decimals are refused unless ``as_enclosure`` supplies a width.
    """
    text = text.strip()
    if "[" in text:
        return cf.parse_cf(text.split(":", 1)[1] if ":" in text else text)
    if _DECIMAL.search(text):
        if as_enclosure is None:
            raise UsageError(f"decimal input {text!r} needs --as-enclosure WIDTH")
        x, w = Fraction(text), Fraction(as_enclosure)
        return cf.cf_from_enclosure(x - w, x + w)
    return parse_real(text)


def _expansion(x) -> cf.CFExpansion:
    return x if isinstance(x, cf.CFExpansion) else cf.cf_expand(x)


def _word(text: str) -> tuple:
    return tuple(int(a) for a in re.split(r"[,\s.]+", text.strip()) if a)


# -- commands ---------------------------------------------------------------------------

def cmd_cf(args):
    x = parse_target(args.x, args.as_enclosure)
    expansion = _expansion(x)
    inputs = {"x": args.x, "expansion": cf.format_cf(expansion)}
    if args.action == "expand":
        terms = expansion.terms(args.terms) if expansion.is_periodic else [expansion.a0, *expansion.quotients]
        return inputs, {"expansion": cf.format_cf(expansion), "terms": terms[: args.terms]}
    if args.action == "convergents":
        pairs = [cf.convergents(expansion, k) for k in range(args.n + 1)]
        rows = [{"n": c.index, "p": c.p, "q": c.q, "value": exact(c.fraction)} for c in pairs]
        return inputs, {"convergents": rows, "last": format_real(pairs[-1].fraction)}
    if args.action == "best":
        return inputs, {"best": [format_real(f) for f in cf.best_approximations(expansion, args.Q)]}
    if args.action == "hurwitz":
        return inputs, {"witness": cf.hurwitz_witness(expansion, args.n)}
    raise UsageError(args.action)


def cmd_markov(args):
    if args.action == "tree":
        triples = markov.enumerate_tree(args.bound)
        return {"bound": args.bound}, {
            "columns": ["x", "y", "z"],
            "rows": [list(t.as_tuple()) for t in triples],
        }
    if args.action == "spectrum":
        pts = markov.spectrum_points(args.bound)
        return {"bound": args.bound}, {
            "columns": ["m", "k"],
            "rows": [[p.m, p.text] for p in pts],
            "values": [exact(p.value) for p in pts],
        }
    if args.action == "count":
        res = markov.count_markov(args.x)
        return {"x": args.x}, {
            "count": res.count,
            "fitted_c": empirical(res.fitted_c),
            "fitted_c_plain": empirical(res.fitted_c_plain),
            "reference_c": markov.ZAGIER_C,
        }
    raise UsageError(args.action)


def _perron(value: spectrum.PerronValue) -> dict:
    out = enclosure(value.value)
    if value.exact is not None:
        out["exact"] = format_real(value.exact)
    out["attained"] = value.attained
    return out


def cmd_spectrum(args):
    if args.action in ("m", "l"):
        theta = spectrum.parse_bisequence(args.seq, mirrored_left=args.mirrored)
        fn = spectrum.markov_value if args.action == "m" else spectrum.lagrange_value
        return {"seq": str(theta), "tol": args.tol}, _perron(fn(theta, Fraction(args.tol)))
    if args.action == "sup":
        words = [_word(w) for w in args.words.split(",")]
        res = spectrum.sup_markov_over_shift(words, Fraction(args.tol), args.max_nodes)
        return {"words": [list(w) for w in words]}, {"sup": enclosure(res.value), "nodes": res.nodes}
    if args.action == "hall":
        ray = spectrum.hall_ray_alpha(args.ell, args.depth)
        return {"ell": args.ell, "depth": args.depth}, {
            "c0": ray.c0,
            "a": list(ray.a),
            "b": list(ray.b),
            "alpha": cf.format_cf(ray.alpha),
            "height": enclosure(ray.height),
        }
    if args.action == "freiman":
        return {}, {"freiman_constant": exact(spectrum.freiman_constant())}
    raise UsageError(args.action)


def _bracket(b: cantor.DimensionBracket) -> dict:
    return {"provenance": "enclosure", "lower": b.lower, "upper": b.upper, "width": b.width, "depth": b.depth, "method": b.method}


def cmd_cantor(args):
    if args.action == "hensley":
        rep = cantor.hensley_check(args.A, args.depth)
        return {"A": args.A}, {"bracket": _bracket(rep.bracket), "asymptotic": empirical(rep.asymptotic), "gap": rep.gap}
    B = cantor.WordAlphabet.parse(args.alphabet)
    inputs = {"alphabet": str(B)}
    if args.action == "dim":
        return inputs, {"bracket": _bracket(cantor.dimension_bracket(B, args.depth or 8, args.method))}
    if args.action == "stab":
        B2 = cantor.WordAlphabet.parse(args.alphabet2) if args.alphabet2 else B
        x = parse_real(args.x)
        w = cantor.sumset_stab(x, B, B2, Fraction(args.tol))
        if not w:
            return inputs, {"found": False}
        return inputs, {"found": True, "first": list(w.first), "second": list(w.second), "interval": enclosure(BoundedValue(w.lo, w.hi))}
    if args.action == "hull":
        lo, hi = cantor.hull(B)
        return inputs, {"hull": enclosure(BoundedValue(lo, hi))}
    raise UsageError(args.action)


def _threshold(text: str):
    return boxdim.as_threshold(parse_real(text))


def cmd_boxdim(args):
    if args.action == "count":
        t = _threshold(args.t)
        table = boxdim.count_table(t, args.r, args.depth)
        rows = [[format_real(t), rec.r, rec.count_yes, rec.count_maybe, rec.dim_estimate] for rec in table.records]
        return {"t": args.t, "r": args.r}, {
            "columns": ["t", "r", "count_yes", "count_maybe", "estimate"],
            "rows": rows,
            "provenance": "exact counts; estimate empirical",
        }
    if args.action == "d":
        t = _threshold(args.t)
        d = boxdim.d_estimate(t, args.rmax, args.depth)
        box = d["box"]
        rows = [[format_real(t), m, box.table.record(m).count_yes, box.table.record(m).count_maybe, v]
                for m, v in enumerate(box.sequence, start=1)]
        return {"t": args.t, "rmax": args.rmax, "mode": args.mode}, {
            "d": empirical(d[args.mode]),
            "delta": empirical(d["delta_" + args.mode]),
            "columns": ["t", "r", "count_yes", "count_maybe", "estimate"],
            "rows": rows,
        }
    if args.action == "scale":
        w = _word(args.word)
        return {"word": list(w)}, {"scale": boxdim.unstable_scale(w)}
    if args.action == "feasible":
        w = _word(args.word)
        return {"word": list(w), "t": args.t}, {"status": boxdim.feasible_cylinder(w, _threshold(args.t), args.depth).value}
    if args.action == "bm":
        res = boxdim.bm_lower_bound(args.m)
        return {"m": args.m}, {
            "alphabet": str(boxdim.bm_alphabet(args.m)),
            "sup": enclosure(res.shift_sup.value),
            "threshold": format_real(res.threshold),
            "dimension": _bracket(res.dimension),
            "d_lower": res.d_lower,
            "certified": res.certified,
        }
    raise UsageError(args.action)


def cmd_lattice(args):
    if args.action == "ell":
        x = parse_target(args.alpha, args.as_enclosure)
        if isinstance(x, cf.CFExpansion):
            x = x.value()
        res = lattice.lagrange_via_lattice(x, args.qmax)
        return {"alpha": args.alpha, "qmax": args.qmax}, {
            "ell": enclosure(res.value),
            "window_max": enclosure(res.window_max),
            "q_best": res.q_best,
            "recurrences": res.recurrences,
        }
    if args.action == "systole":
        entries = [parse_real(s) for s in args.basis.split(",")]
        if len(entries) != 4:
            raise UsageError("--basis needs four entries g11,g12,g21,g22")
        s = lattice.systole(lattice.Lattice2(*entries))
        return {"basis": args.basis}, {
            "length_squared": exact(s.length_squared),
            "length": enclosure(s.length),
            "vector": list(s.vector.source),
            "steps": s.steps,
        }
    raise UsageError(args.action)


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    parser = argparse.ArgumentParser(prog="lmspectra", description="Lagrange and Markov spectra toolkit")
    sub = parser.add_subparsers(dest="module", required=True)
    add = lambda name, **kw: sub.add_parser(name, parents=[common], **kw)

    p = add("cf", help="continued fractions")
    p.add_argument("action", choices=["expand", "convergents", "best", "hurwitz"])
    p.add_argument("--x", required=True, help='surd, rational, or "pi:[3;7,15,1]"')
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--Q", type=int, default=1000)
    p.add_argument("--terms", type=int, default=20)
    p.add_argument("--as-enclosure", dest="as_enclosure", default=None, metavar="WIDTH")
    p.set_defaults(func=cmd_cf)

    p = add("markov", help="Markov triples")
    p.add_argument("action", choices=["tree", "spectrum", "count"])
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument("--x", type=lambda s: int(float(s)) if "e" in s else int(s), default=10 ** 15)
    p.set_defaults(func=cmd_markov)

    p = add("spectrum", help="Perron values")
    p.add_argument("action", choices=["m", "l", "sup", "hall", "freiman"])
    p.add_argument("--seq", default="(1)*")
    p.add_argument("--mirrored", action="store_true", help="left period written outward from the core")
    p.add_argument("--tol", default="1e-10")
    p.add_argument("--words", default="1,2")
    p.add_argument("--max-nodes", dest="max_nodes", type=int, default=2_000_000)
    p.add_argument("--ell", default="7")
    p.add_argument("--depth", type=int, default=25)
    p.set_defaults(func=cmd_spectrum)

    p = add("cantor", help="Gauss-Cantor sets")
    p.add_argument("action", choices=["dim", "stab", "hull", "hensley"])
    p.add_argument("--alphabet", default="1,2", help='words separated by commas, letters by dots: "2.1,1.1.2"')
    p.add_argument("--alphabet2", default=None)
    p.add_argument("--depth", type=int, default=None, help="default 8 for dim, automatic for hensley")
    p.add_argument("--method", choices=["transfer", "cover"], default="transfer")
    p.add_argument("--x", default="1")
    p.add_argument("--tol", default="1e-9")
    p.add_argument("--A", type=int, default=2)
    p.set_defaults(func=cmd_cantor)

    p = add("boxdim", help="unstable scales and box dimension")
    p.add_argument("action", choices=["count", "d", "scale", "feasible", "bm"])
    p.add_argument("--t", default="sqrt(12)")
    p.add_argument("--r", type=int, default=10)
    p.add_argument("--rmax", type=int, default=14)
    p.add_argument("--mode", choices=["upper", "lower"], default="upper")
    p.add_argument("--depth", type=int, default=0)
    p.add_argument("--word", default="1")
    p.add_argument("--m", type=int, default=1)
    p.set_defaults(func=cmd_boxdim)

    p = add("lattice", help="unimodular lattices")
    p.add_argument("action", choices=["ell", "systole"])
    p.add_argument("--alpha", default="(1+sqrt(5))/2")
    p.add_argument("--qmax", type=int, default=100_000)
    p.add_argument("--basis", default="1,0,0,1")
    p.add_argument("--as-enclosure", dest="as_enclosure", default=None, metavar="WIDTH")
    p.set_defaults(func=cmd_lattice)

    p = add("verify", help="run the acceptance suite")
    p.add_argument("--suite", choices=sorted(verify.SUITES), default="all")
    p.add_argument("--only", type=int, action="append", choices=sorted(verify.CRITERIA))
    p.add_argument("--seed", type=int, default=None, help="reseed the randomized criteria")
    p.set_defaults(func=None)
    return parser


def _emit(envelope: dict, fmt: str, out) -> None:
    result = envelope["result"]
    if fmt == "csv" and isinstance(result, dict) and "rows" in result:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(result["columns"])
        w.writerows(result["rows"])
    elif fmt == "text":
        for key, value in result.items():
            print(f"{key}: {value}", file=out)
    else:
        json.dump(envelope, out, indent=2, default=str)
        out.write("\n")


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.module == "verify":
        numbers = args.only or verify.SUITES[args.suite]
        results = verify.run_suite(numbers, args.seed)
        for r in results:
            print(r.report() if args.format == "text" else r.line, file=out)
        return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED
    start = time.perf_counter()
    try:
        inputs, result = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _emit(_envelope(argv, {}, {"error": str(exc)}, time.perf_counter() - start, True), "json", out)
        return EXIT_BUDGET
    except (DomainError, InsufficientPrecision, ZeroDivisionError, ValueError, IndexError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(_envelope(argv, inputs, result, time.perf_counter() - start), args.format, out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

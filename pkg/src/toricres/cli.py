"""Command line entry point: ``toricres <command> [input] [flags]``."""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .abyssal_rewrite import RewriteSystem, normal_form, valuate
from .binomial_ideals import (BinomialIdeal, jacobian_certificate, singular_locus,
                              verify_presentation, with_lattice_degrees)
from .cones_fans import DEFAULT_MAX_DIM, UnimodularChart
from .errors import ComputationError, InputError, ToricError
from .exact_linalg import det
from .ordered_groups import (DEFAULT_CF_DEPTH, DEFAULT_SEARCH_BOUND, ValueSemigroup, as_element,
                             exzar_semigroup, minimal_generators, minimal_relation)
from .perron import perron_run, presentation_stream
from .resolution import (curve_equations, principalize_monomials, resolve,
                         resolve_monomial_curve, strict_transform_binomial,
                         strict_transform_deformed)
from .serialization import (deformed_from_json, dumps, fraction, ideal_from_json, int_list,
                            load_json_arg, parse_tau, polynomial_from_json, require,
                            tails_from_json)


# ---------------------------------------------------------------- commands

def _ideal_or_semigroup(data, search_bound: int) -> BinomialIdeal:
    if isinstance(data, list) or (isinstance(data, dict) and "semigroup" in data):
        gens = int_list(data if isinstance(data, list) else data["semigroup"], "semigroup")
        eqs = curve_equations(gens, search_bound)
        return BinomialIdeal(len(gens), tuple(eqs), tuple((g,) for g in gens))
    return ideal_from_json(data)


def cmd_resolve(args) -> dict:
    ideal = _ideal_or_semigroup(load_json_arg(args.input), args.search_bound)
    report = resolve(ideal, max_dim=args.max_dim, with_transforms=not args.no_transforms)
    out = report.to_json()
    if report.center is not None:
        out["center_chart"] = [list(r) for r in report.center.cone.rays]
    return out


def cmd_transform(args) -> dict:
    data = load_json_arg(args.input)
    chart = UnimodularChart(tuple(tuple(int(x) for x in row) for row in require(data, "chart", list)))
    eq = deformed_from_json(require(data, "equation"))
    if not eq.tail and "weights" not in data:
        t = strict_transform_binomial(eq.binomial, chart)
        return {"chart": chart.to_json(), "transform": t.to_json()}
    weights = require(data, "weights", list)
    weights = [tuple(fraction(x) for x in w) if isinstance(w, list) else fraction(w) for w in weights]
    exceptional = data.get("exceptional")
    t = strict_transform_deformed(eq, chart, weights, exceptional)
    return {"chart": chart.to_json(), "transform": t.to_json()}


def cmd_principalize(args) -> dict:
    data = load_json_arg(args.input)
    monomials = [int_list(m, "monomial") for m in require(data, "monomials", list)]
    weights = [fraction(w) for w in require(data, "weights", list)]
    return principalize_monomials(monomials, weights, max_dim=args.max_dim).to_json()


def cmd_curve(args) -> dict:
    data = load_json_arg(args.input)
    if isinstance(data, list):
        gens, tails = int_list(data, "semigroup"), None
    else:
        gens = int_list(require(data, "semigroup"), "semigroup")
        tails = tails_from_json(data["tails"]) if "tails" in data else None
    report = resolve_monomial_curve(gens, tails, max_dim=args.max_dim,
                                    search_bound=args.search_bound,
                                    with_transforms=not args.no_transforms)
    return report.to_json()


def cmd_perron(args) -> dict:
    if args.presentation:
        s = int_list(args.s, "s") if args.s else []
        c = [fraction(x) for x in args.c.split(",")] if args.c else []
        stream = presentation_stream(args.presentation, args.count, d=args.d, s=s, c=c)
        return {"presentation": stream.to_json()}
    if not args.tau:
        raise InputError("missing-argument", "perron needs --tau or --presentation")
    tau = parse_tau(args.tau)
    run = perron_run(tau, args.steps, cf_depth=args.cf_depth)
    out = run.to_json()
    out["new_vectors"] = [list(v) for v in run.vectors[len(tau):]]
    out["tau"] = [t.to_json() for t in tau]
    return out


def _values(text: str) -> list:
    data = load_json_arg(text if text.strip().startswith("[") else f"[{text}]")
    if not isinstance(data, list) or not data:
        raise InputError("bad-values", "expected a nonempty list of values")
    return [as_element(fraction(x)) for x in data]


def _relations_json(sg: ValueSemigroup, search_bound: int) -> list[dict]:
    out = []
    N = len(sg.generators)
    for i in range(2, N + 1):
        rel = minimal_relation(sg, i, search_bound)
        m, n = rel.binomial_exponents(N)
        out.append({"index": i, "n": rel.n, "n_coeffs": list(rel.n_coeffs),
                    "l_coeffs": list(rel.l_coeffs), "binomial": {"m": list(m), "n": list(n)}})
    return out


def cmd_semigroup(args) -> dict:
    if args.exzar:
        s = int_list(args.exzar, "s")
        count = args.count or len(s)
        sg = exzar_semigroup(s, count)
        gens = [g.coeffs[0] for g in sg.generators]
        prod = s[0]
        recurrence = True
        for i in range(1, count):
            prod *= s[i]
            recurrence &= gens[i] == s[i - 1] * gens[i - 1] + Fraction(1, prod)
        out = {"generators": [str(g) for g in gens], "recurrence_holds": recurrence}
        if args.relations:
            out["relations"] = _relations_json(sg, args.search_bound)
        return out
    if not args.values:
        raise InputError("missing-argument", "semigroup needs values or --exzar")
    values = _values(args.values)
    if args.minimal:
        sg = minimal_generators(values, args.search_bound)
    else:
        sg = ValueSemigroup(tuple(values))
    out = {"generators": [str(g.coeffs[0]) if g.spec.kind == "rational" else g.to_json()
                          for g in sg.generators]}
    if args.relations:
        out["relations"] = _relations_json(sg, args.search_bound)
    return out


def cmd_valuate(args) -> dict:
    data = load_json_arg(args.input)
    system = RewriteSystem.from_json(require(data, "system", dict))
    p = polynomial_from_json(system.nvars, require(data, "polynomial", list))
    value = valuate(p, system)
    nf = normal_form(p, system)
    return {"valuation": value.to_json(), "variables": list(system.names),
            "normal_form": nf.to_json(), "normal_form_text": nf.format(system.names)}


def _random_unimodular(n: int, rng: random.Random, moves: int = 12) -> list[list[int]]:
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(moves):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            M[i] = [-x for x in M[i]]
            continue
        k = rng.choice([-2, -1, 1, 2])
        M[i] = [a + k * b for a, b in zip(M[i], M[j])]
    return M


def cmd_verify(args) -> dict:
    data = load_json_arg(args.input)
    ideal = _ideal_or_semigroup(data, args.search_bound)
    if ideal.degrees is None:
        ideal = with_lattice_degrees(ideal)
    cert = verify_presentation(ideal)
    out = {"presentation": cert.to_json(), "ok": cert.ok}
    if not cert.lattice_saturated:
        return out
    out["jacobian"] = jacobian_certificate(ideal).to_json()
    out["singular_locus"] = singular_locus(ideal).to_json()
    if args.chart_changes:
        rng = random.Random(args.seed)
        base = jacobian_certificate(ideal).minors_gcd
        agree = 0
        for _ in range(args.chart_changes):
            M = _random_unimodular(ideal.num_vars, rng)
            if abs(det(M)) != 1:
                raise ComputationError("not-unimodular", "random chart change lost unimodularity")
            agree += jacobian_certificate(ideal, M).minors_gcd == base
        out["chart_changes"] = {"count": args.chart_changes, "seed": args.seed,
                                "minors_gcd": base, "agreeing": agree}
    return out


COMMANDS: dict[str, Callable] = {
    "resolve": cmd_resolve, "transform": cmd_transform, "principalize": cmd_principalize,
    "curve": cmd_curve, "perron": cmd_perron, "semigroup": cmd_semigroup,
    "valuate": cmd_valuate, "verify": cmd_verify,
}


# ---------------------------------------------------------------- argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    common.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    common.add_argument("--cf-depth", type=int, default=DEFAULT_CF_DEPTH)
    common.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND)
    common.add_argument("--seed", type=int, default=0, help="seed for sampling checks")

    parser = argparse.ArgumentParser(prog="toricres", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", parents=[common], help="resolve a binomial ideal")
    p.add_argument("input", help="ideal JSON (path or inline) or a semigroup list")
    p.add_argument("--no-transforms", action="store_true")

    p = sub.add_parser("transform", parents=[common], help="strict transform in a chart")
    p.add_argument("input")

    p = sub.add_parser("principalize", parents=[common], help="principalize monomials")
    p.add_argument("input")

    p = sub.add_parser("curve", parents=[common], help="monomial curve pipeline")
    p.add_argument("input", help='semigroup list or {"semigroup": [...], "tails": {...}}')
    p.add_argument("--no-transforms", action="store_true")

    p = sub.add_parser("perron", parents=[common], help="Perron algorithm and presentations")
    p.add_argument("--tau", help='e.g. "1,[1;2,3,4,...]"')
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--presentation", choices=["lex_Zd", "cf_tau", "zariski_Q"])
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--s", help="comma-separated integers")
    p.add_argument("--c", help="comma-separated rationals")

    p = sub.add_parser("semigroup", parents=[common], help="value semigroup tools")
    p.add_argument("values", nargs="?", help='e.g. "[2,3,4,5]"')
    p.add_argument("--minimal", action="store_true", help="reduce to minimal generators")
    p.add_argument("--relations", action="store_true", help="list minimal relations")
    p.add_argument("--exzar", help="s sequence for the exzar semigroup, e.g. 2,2,2,2")
    p.add_argument("--count", type=int)

    p = sub.add_parser("valuate", parents=[common], help="valuation by rewriting")
    p.add_argument("input", help='{"system": {...}, "polynomial": [...]}')

    p = sub.add_parser("verify", parents=[common], help="certificates for an ideal")
    p.add_argument("input")
    p.add_argument("--chart-changes", type=int, default=0,
                   help="also test minors-gcd invariance under this many random charts")
    return parser


def render_pretty(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            value = obj[key]
            if isinstance(value, (dict, list)) and value and not _is_flat(value):
                lines.append(f"{pad}{key}:")
                lines.extend(render_pretty(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_flat(value)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append(f"{pad}-")
                lines.extend(render_pretty(item, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(item)}")
    else:
        lines.append(f"{pad}{_flat(obj)}")
    return lines


def _is_flat(value) -> bool:
    if isinstance(value, list):
        return all(not isinstance(x, dict) and _is_flat(x) for x in value)
    return not isinstance(value, dict)


def _flat(value) -> str:
    if isinstance(value, list):
        return "(" + ", ".join(_flat(x) for x in value) + ")"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "-"
    return str(value)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        try:
            sys.stdout.write(text)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); silence the interpreter's final flush
            devnull = os.open(os.devnull, os.O_WRONLY)
            os.dup2(devnull, sys.stdout.fileno())


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = COMMANDS[args.command](args)
    except ToricError as exc:
        sys.stdout.write(dumps(exc.to_json()))
        return exc.exit_status
    except RecursionError:
        err = ComputationError("recursion-limit", "input too deep")
        sys.stdout.write(dumps(err.to_json()))
        return err.exit_status
    payload = {"command": args.command, **payload}
    if args.pretty:
        text = "\n".join(render_pretty(payload)) + "\n"
    else:
        text = dumps(payload)
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

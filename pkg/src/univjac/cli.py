"""Command-line driver: ``univjac <command> ...``.

Exit codes: 0 success, 1 a validation or classicality expectation failed,
2 usage error, 3 a resource limit was hit.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus
from .classical import (
    MarkingVector,
    everywhere_fibre_classical,
    induce_universal,
    is_fibre_classical,
    is_universally_classical,
)
from .classify import PicRelElement, act, classify_report, enumerate_census, normal_form
from .domain import DomainConfig
from .errors import (
    NonGeneric,
    OutOfScope,
    ParseError,
    ResourceLimit,
    SeparatingEdgeModeUnsupported,
    TooLarge,
    UnivJacError,
)
from .feasibility import combine_certificate
from .graph import Graph, enumerate_stable_graphs
from .io import condition_table, dumps, graph_from_data, load_condition, read_json, write_text
from .stability import restrict, validate_universal

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class _Usage(Exception):
    pass


# input resolution -------------------------------------------------------------


def _condition(name: str, g: int | None):
    """A builtin example id, or a path to condition JSON."""
    if name in corpus.EXAMPLE_IDS:
        return corpus.example(name, g)
    if not Path(name).exists():
        raise ParseError(f"{name}: no such file or builtin example ({', '.join(corpus.EXAMPLE_IDS)})")
    return load_condition(name)


def _graph(name: str, g: int | None) -> Graph:
    if name in corpus.GRAPH_IDS:
        return corpus.figure(name, g)
    if not Path(name).exists():
        raise ParseError(f"{name}: no such file or builtin graph ({', '.join(corpus.GRAPH_IDS)})")
    return graph_from_data(read_json(name), name)


def _vertex_bound(g: int, n: int, limit: int | None):
    # trivalent graphs of type (g, n) have 2g - 2 + n vertices, the most of any stable graph
    if limit is not None and 2 * g - 2 + n > limit:
        raise ResourceLimit(f"graphs of type ({g}, {n}) have up to {2 * g - 2 + n} vertices, above --limit-vertices {limit}")


def _fmt(x: Fraction) -> str:
    return str(Fraction(x))


def _print_verdict(verdict, out):
    if verdict.classical:
        print("verdict: classical", file=out)
        for name, value in verdict.witness.values.items():
            print(f"  {name} = {_fmt(value)}", file=out)
        return
    print("verdict: not classical", file=out)
    system = verdict.system
    print("certificate (multiplier * constraint):", file=out)
    for i, mult in verdict.certificate.multipliers:
        label = system.labels[i] or f"row {i}"
        print(f"  {_fmt(mult)} * [{label}] {system.constraints[i]!r}", file=out)
    _, const, relation = combine_certificate(verdict.certificate, system)
    print(f"  sum: 0 {relation} {_fmt(-const)}", file=out)


def _verdict_json(verdict, graph: Graph | None = None) -> dict:
    out = {"classical": verdict.classical, "system": verdict.system.to_json()}
    body = (verdict.witness or verdict.certificate).to_json()
    out.update({k: v for k, v in body.items() if k != "feasible"})
    if graph is not None:
        out["graph"] = graph.to_json()
    return out


# commands -------------------------------------------------------------------------


def cmd_validate(args, out) -> int:
    m = _condition(args.input, args.g)
    violations = validate_universal(m)
    if not violations:
        print(f"valid: type ({m.cfg.g}, {m.cfg.n}), degree {m.cfg.d}, {len(m.values)} values", file=out)
        return EXIT_OK
    for v in violations:
        print(v, file=out)
    print(f"{len(violations)} violation(s)", file=out)
    return EXIT_FAIL


def _expectation(args, classical: bool) -> int:
    if args.expect is None:
        return EXIT_OK
    return EXIT_OK if classical == (args.expect == "classical") else EXIT_FAIL


def cmd_classical_check(args, out) -> int:
    m = _condition(args.input, args.g)
    cfg = m.cfg
    if args.all_trivalent:
        _vertex_bound(cfg.g, cfg.n, args.limit_vertices)
        graphs = enumerate_stable_graphs(cfg.g, cfg.n, trivalent_only=True)
        report = everywhere_fibre_classical(m, graphs, args.shared_unlabeled)
        if args.json:
            data = {
                "graphs": len(graphs),
                "all_classical": report.all_classical,
                "offending": [gr.to_json() for gr in report.offending],
            }
            out.write(dumps(data))
        else:
            bad = len(report.offending)
            print(f"{len(graphs)} trivalent graphs, {len(graphs) - bad} classical, {bad} not classical", file=out)
        return _expectation(args, report.all_classical)
    if args.graph is not None:
        graph = _graph(args.graph, cfg.g)
        if args.limit_vertices is not None and len(graph.vertices) > args.limit_vertices:
            raise ResourceLimit(f"graph has {len(graph.vertices)} vertices, above --limit-vertices")
        verdict = is_fibre_classical(graph, restrict(m, graph), args.shared_unlabeled)
    else:
        graph = None
        verdict = is_universally_classical(m)
    if args.json:
        out.write(dumps(_verdict_json(verdict, graph)))
    else:
        _print_verdict(verdict, out)
    return _expectation(args, verdict.classical)


def cmd_census(args, out) -> int:
    d = args.degree if args.degree is not None else args.d
    if d is None:
        raise _Usage("census needs a degree (positional or --degree)")
    cfg = DomainConfig(args.g, args.n, d, args.min_valence)
    if args.fibres:
        _vertex_bound(cfg.g, cfg.n, args.limit_vertices)
    report = classify_report(enumerate_census(cfg, force=args.force), args.fibres, args.shared_unlabeled)
    text = report.to_csv() if args.format == "csv" else dumps(report.to_json())
    write_text(text, args.out, out)
    classical = sum(bool(e.universally_classical) for e in report.entries)
    summary = f"{len(report)} entries, {classical} universally classical"
    if args.fibres:
        fibre_ok = sum(bool(e.everywhere_fibre_classical) for e in report.entries)
        summary += f", {fibre_ok} classical on every trivalent fibre"
    print(summary, file=sys.stderr if args.out is None else out)
    return EXIT_OK


def cmd_normalize(args, out) -> int:
    m = _condition(args.input, args.g)
    nf, L = normal_form(m)
    write_text(dumps({"condition": nf.to_json(), "element": L.to_json()}), args.out, out)
    return EXIT_OK


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise _Usage(f"expected comma-separated integers, got {text!r}") from None


def cmd_act(args, out) -> int:
    m = _condition(args.input, args.g)
    t = _int_list(args.t) if args.t else (0,) * (m.cfg.n - 1)
    if len(t) != m.cfg.n - 1:
        raise _Usage(f"--t needs {m.cfg.n - 1} entries")
    write_text(dumps(act(PicRelElement(t, args.s), m).to_json()), args.out, out)
    return EXIT_OK


def cmd_graphs(args, out) -> int:
    _vertex_bound(args.g, args.n, args.limit_vertices)
    graphs = enumerate_stable_graphs(args.g, args.n, trivalent_only=args.trivalent)
    if args.json:
        write_text(dumps([gr.to_json() for gr in graphs]), args.out, out)
    else:
        kind = "trivalent" if args.trivalent else "stable"
        print(f"{len(graphs)} {kind} graphs of type ({args.g}, {args.n})", file=out)
    return EXIT_OK


def cmd_example(args, out) -> int:
    if args.name in corpus.GRAPH_IDS:
        write_text(dumps(corpus.figure(args.name, args.g).to_json()), args.out, out)
        return EXIT_OK
    if args.name not in corpus.EXAMPLE_IDS:
        raise _Usage(f"unknown example {args.name!r}")
    m = corpus.example(args.name, args.g)
    text = condition_table(m) if args.format == "csv" else dumps(m.to_json())
    write_text(text, args.out, out)
    return EXIT_OK


def cmd_sample(args, out) -> int:
    """Induce conditions from random marking vectors and validate each one."""
    rng = random.Random(args.seed)
    cfg = DomainConfig(args.g, args.n, args.degree)
    bad = skipped = 0
    for _ in range(args.count):
        x = MarkingVector(cfg.g, cfg.n, cfg.d, [Fraction(rng.randint(-400, 400), rng.choice((7, 11, 13))) for _ in range(cfg.n)])
        try:
            m = induce_universal(x)
        except NonGeneric:
            skipped += 1
            continue
        if validate_universal(m):
            bad += 1
            print(f"invalid condition induced by x = {[str(v) for v in x.x]}", file=out)
    print(f"{args.count - skipped} sampled, {skipped} non-generic skipped, {bad} invalid", file=out)
    return EXIT_FAIL if bad else EXIT_OK


# parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="univjac", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp):
        sp.add_argument("input", help="condition JSON file or builtin example id")
        sp.add_argument("--g", type=int, help="genus for the ex_g_1 / fig4 families")

    sp = sub.add_parser("validate", help="check the complement and decomposition laws")
    with_input(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("classical-check", help="decide whether a condition comes from a divisor")
    with_input(sp)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--graph", help="graph JSON file or builtin graph id; checks that fibre only")
    group.add_argument("--all-trivalent", action="store_true", help="check every trivalent graph of the type")
    sp.add_argument("--shared-unlabeled", action="store_true", help="one weight for all unmarked genus-0 vertices")
    sp.add_argument("--expect", choices=("classical", "not-classical"), help="exit 1 unless the verdict matches")
    sp.add_argument("--limit-vertices", type=int)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_classical_check)

    sp = sub.add_parser("census", help="all normal-form conditions of a type and degree")
    sp.add_argument("g", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("d", type=int, nargs="?")
    sp.add_argument("--degree", type=int)
    sp.add_argument("--min-valence", type=int, choices=(1, 2), default=2)
    sp.add_argument("--fibres", action="store_true", help="fibre checks for entries that are not universally classical")
    sp.add_argument("--shared-unlabeled", action="store_true")
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.add_argument("--out")
    sp.add_argument("--force", action="store_true", help="run outside the default (g, n) policy")
    sp.add_argument("--limit-vertices", type=int)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("normalize", help="translate a condition to its normal form")
    with_input(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("act", help="apply a translation")
    with_input(sp)
    sp.add_argument("--t", help="comma-separated exponents for markings 2..n")
    sp.add_argument("--s", type=int, default=0, help="exponent of the canonical-class generator")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_act)

    sp = sub.add_parser("graphs", help="enumerate stable graphs up to isomorphism")
    sp.add_argument("g", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("--trivalent", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--out")
    sp.add_argument("--limit-vertices", type=int)
    sp.set_defaults(func=cmd_graphs)

    sp = sub.add_parser("example", help="emit a builtin condition or graph")
    sp.add_argument("name", choices=corpus.EXAMPLE_IDS + corpus.GRAPH_IDS)
    sp.add_argument("--g", type=int)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_example)

    sp = sub.add_parser("sample", help="validate conditions induced by random marking vectors")
    sp.add_argument("g", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("--degree", type=int, default=0)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_sample)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except _Usage as exc:
        print(f"univjac: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimit, TooLarge) as exc:
        print(f"univjac: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (OutOfScope, SeparatingEdgeModeUnsupported) as exc:
        print(f"univjac: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"univjac: parse error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UnivJacError, ValueError) as exc:
        print(f"univjac: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

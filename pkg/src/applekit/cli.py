"""Command-line interface.

Subcommands::

    applekit reason    materialize inputs and write Turtle
    applekit classify  run the verdict rules, report verdicts as JSON
    applekit query     class-expression or select queries over inputs
    applekit validate  closed/open-world consistency report as JSON
    applekit cq        run the bundled competency-question suite

Exit codes: 0 success, 1 parse or data-structure errors (and failing
competency questions), 2 configuration or rule errors, 3 query errors,
4 consistency errors (disjointness clashes, contradictory verdicts).

All commands are deterministic: given the same inputs they produce byte
identical output, and ``--seed`` is accepted for interface stability even
though no command draws random numbers.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assets import AssetError, load_assets, parse_cq_manifest
from .cq import format_cq_table, run_cq_suite
from .graph import Graph
from .materialize import materialize
from .query import QueryParseError, parse_class_expression, parse_select, retrieve_classes, retrieve_instances, select
from .rules import RuleError, VerdictConflictError, classify_actions, parse_rules
from .schema import NameCatalog, SchemaError, extract_schema
from .terms import PrefixMap, StructuralError, Term
from .turtle import TurtleParseError, parse_document, serialize_turtle
from .validate import validate_graph
from .vocab import DEFAULT_PREFIXES

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_CONFIG = 2
EXIT_QUERY = 3
EXIT_CONSISTENCY = 4


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


def _add_io_options(parser: argparse.ArgumentParser, formats: tuple[str, ...], default_format: str) -> None:
    parser.add_argument(
        "-i", "--input", action="append", default=[], metavar="FILE",
        help="Turtle input file (repeatable)",
    )
    parser.add_argument(
        "--bundled", action="store_true",
        help="include the bundled taxonomy and scenario graphs",
    )
    parser.add_argument("-o", "--output", metavar="FILE", help="write output here instead of stdout")
    parser.add_argument(
        "--format", choices=formats, default=default_format,
        help=f"output format (default: {default_format})",
    )
    parser.add_argument(
        "--seed", type=int, default=0,
        help="accepted for interface stability; all commands are deterministic",
    )


def _load_inputs(args: argparse.Namespace) -> tuple[Graph, PrefixMap]:
    """Union of the bundled graphs (if requested) and every -i file."""
    if not args.bundled and not args.input:
        raise CliError("no inputs: pass --bundled and/or -i FILE", EXIT_CONFIG)
    merged = Graph()
    prefixes = DEFAULT_PREFIXES.copy()
    if args.bundled:
        assets = load_assets()
        for triple in assets.combined():
            merged.insert(triple)
        for prefix, namespace in assets.prefixes.items():
            prefixes.bind(prefix, namespace)
    for name in args.input:
        path = Path(name)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read input file {name}: {exc}", EXIT_CONFIG) from exc
        try:
            document = parse_document(text)
        except TurtleParseError as exc:
            raise CliError(exc.diagnostic.render(str(path)), EXIT_PARSE) from exc
        for triple in document.graph:
            merged.insert(triple)
        for prefix, namespace in document.prefixes.items():
            prefixes.bind(prefix, namespace)
    return merged, prefixes


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render_term_string(value) -> str:
    if isinstance(value, Term):
        return value.value if value.is_iri() else value.n3()
    return str(value)


def _cmd_reason(args: argparse.Namespace) -> int:
    graph, prefixes = _load_inputs(args)
    schema = extract_schema(graph)
    materialized = materialize(graph, schema)
    _emit(args, serialize_turtle(materialized, prefixes))
    return EXIT_OK


def _cmd_classify(args: argparse.Namespace) -> int:
    graph, _ = _load_inputs(args)
    schema = extract_schema(graph)
    catalog = NameCatalog.from_graph(graph, schema)
    if args.rules:
        try:
            rules_text = Path(args.rules).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot read rules file {args.rules}: {exc}", EXIT_CONFIG) from exc
        rules = parse_rules(rules_text, catalog)
    elif args.bundled:
        rules = load_assets().rules
    else:
        raise CliError("classify needs --rules FILE or --bundled", EXIT_CONFIG)
    materialized = materialize(graph, schema)
    verdicts = classify_actions(materialized, rules)
    from .validate import inputs_digest

    payload = {
        "inputs_digest": inputs_digest(graph),
        "verdicts": [
            {
                "action": v.action,
                "verdict_class": v.verdict_class,
                "fired_rules": list(v.fired_rules),
                "firings": [
                    {
                        "rule": f.rule_id,
                        "bindings": {var: _render_term_string(term) for var, term in f.bindings},
                    }
                    for f in v.firings
                ],
            }
            for v in verdicts
        ],
    }
    _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_query(args: argparse.Namespace) -> int:
    graph, _ = _load_inputs(args)
    schema = extract_schema(graph)
    catalog = NameCatalog.from_graph(graph, schema)
    materialized = materialize(graph, schema)
    if args.mode == "select":
        parsed = parse_select(args.expression, catalog)
        rows = select(parsed, materialized)
        if args.format == "json":
            payload = {"variables": list(parsed.variables), "rows": [list(row) for row in rows]}
            _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            _emit(args, "".join("\t".join(row) + "\n" for row in rows))
        return EXIT_OK
    expr = parse_class_expression(args.expression, catalog)
    if args.mode == "instances":
        results = retrieve_instances(expr, materialized)
    else:
        results = retrieve_classes(expr, schema, materialized)
    if args.format == "json":
        _emit(args, json.dumps(results, indent=2, sort_keys=True) + "\n")
    else:
        _emit(args, "".join(line + "\n" for line in results))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    graph, _ = _load_inputs(args)
    schema = extract_schema(graph)
    report = validate_graph(graph, schema, mode=args.world)
    _emit(args, report.render_json())
    return EXIT_CONSISTENCY if report.error_count else EXIT_OK


def _cmd_cq(args: argparse.Namespace) -> int:
    graph, _ = _load_inputs(args)
    schema = extract_schema(graph)
    catalog = NameCatalog.from_graph(graph, schema)
    if args.manifest:
        try:
            cases = parse_cq_manifest(Path(args.manifest).read_text(encoding="utf-8"))
        except OSError as exc:
            raise CliError(f"cannot read manifest {args.manifest}: {exc}", EXIT_CONFIG) from exc
    else:
        cases = load_assets().cq_cases
    materialized = materialize(graph, schema)
    results = run_cq_suite(cases, materialized, schema, catalog)
    if args.format == "json":
        _emit(args, json.dumps([r.to_json() for r in results], indent=2, sort_keys=True) + "\n")
    else:
        _emit(args, format_cq_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_PARSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="applekit",
        description="Applied-ethics knowledge toolkit: materialize, classify, query, validate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    reason = sub.add_parser("reason", help="materialize schema entailments, write Turtle")
    _add_io_options(reason, ("turtle",), "turtle")
    reason.set_defaults(handler=_cmd_reason)

    classify = sub.add_parser("classify", help="run verdict rules, report verdicts as JSON")
    _add_io_options(classify, ("json",), "json")
    classify.add_argument("--rules", metavar="FILE", help="rule file (default: bundled rules with --bundled)")
    classify.set_defaults(handler=_cmd_classify)

    query = sub.add_parser("query", help="evaluate a class expression or select query")
    query.add_argument("expression", help="query text")
    _add_io_options(query, ("json", "tsv"), "json")
    query.add_argument(
        "--mode", choices=("instances", "classes", "select"), default="instances",
        help="retrieval mode (default: instances)",
    )
    query.set_defaults(handler=_cmd_query)

    validate = sub.add_parser("validate", help="consistency report (JSON)")
    _add_io_options(validate, ("json",), "json")
    validate.add_argument(
        "--world", choices=("open", "closed"), default="closed",
        help="closed world audits existential obligations; open world skips them",
    )
    validate.set_defaults(handler=_cmd_validate)

    cq = sub.add_parser("cq", help="run the competency-question suite")
    _add_io_options(cq, ("text", "json"), "text")
    cq.add_argument("--manifest", metavar="FILE", help="alternative competency-question manifest")
    cq.set_defaults(handler=_cmd_cq)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"applekit: {exc}", file=sys.stderr)
        return exc.code
    except TurtleParseError as exc:
        print(f"applekit: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SchemaError, StructuralError) as exc:
        print(f"applekit: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except VerdictConflictError as exc:
        print(f"applekit: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (RuleError, AssetError) as exc:
        print(f"applekit: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QueryParseError as exc:
        print(f"applekit: {exc}", file=sys.stderr)
        return EXIT_QUERY


if __name__ == "__main__":
    sys.exit(main(None))

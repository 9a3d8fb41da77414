"""Command-line surface: validate, render, tree, stats, compare, assess,
catalog-add.

Reports go to stdout, diagnostics to stderr. Exit status 0 means no
error-severity diagnostics, 1 means error diagnostics were produced, and
2 means a usage or I/O failure. NIHDL_CATALOG supplies a default catalog
path where a command takes --catalog.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import analyze, dsl, model, novelty, store
from .validate import ValidationMode, validate_document
from .diagnostics import Diagnostic, Severity
from .taxonomy import (
    PatternPath,
    InvalidNameError,
    TaxonomyError,
    render_chain,
    render_tree,
    seed_catalog,
)

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2

RULE_LINE = "-" * 72


class _UsageError(Exception):
    pass


def _print_diagnostics(diags: list[Diagnostic]) -> bool:
    """Write diagnostics to stderr; True when any is an error."""
    for diag in diags:
        print(diag.render(), file=sys.stderr)
    return any(d.severity is Severity.ERROR for d in diags)


def _catalog_path(args) -> str | None:
    return args.catalog or os.environ.get("NIHDL_CATALOG")


def _load_catalog(path: str):
    """Parse a catalog file; unreadable files are usage/I-O failures."""
    catalog, diags = store.read_catalog_file(path)
    if catalog is None:
        if any(d.code == "E007" for d in diags):
            raise _UsageError(f"cannot read catalog file {path}")
        _print_diagnostics(diags)
        return None
    return catalog


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    documents = []
    io_failure = False
    saw_errors = False
    for file_name in args.files:
        document, diags = store.read_description_file(file_name)
        if any(d.code == "E007" for d in diags):
            io_failure = True
        saw_errors |= _print_diagnostics(diags)
        if document is not None:
            documents.append(document)

    catalog = None
    catalog_path = _catalog_path(args)
    if catalog_path is not None:
        catalog = _load_catalog(catalog_path)
        if catalog is None:
            return EXIT_DIAGNOSTICS
    else:
        needs_resolution = any(
            not m.pattern.path.unassigned for doc in documents for m in doc.methods
        )
        if needs_resolution:
            raise _UsageError(
                "--catalog (or NIHDL_CATALOG) is required to resolve pattern paths"
            )
        catalog = seed_catalog()

    mode = ValidationMode.STRICT if args.strict else ValidationMode.SURVEY
    for document in documents:
        saw_errors |= _print_diagnostics(validate_document(document, catalog, mode))
    if io_failure:
        return EXIT_USAGE
    return EXIT_DIAGNOSTICS if saw_errors else EXIT_OK


# ---------------------------------------------------------------------------
# render
# ---------------------------------------------------------------------------

def _binding_text(binding: model.CarrierBinding) -> str:
    kind = binding.kind
    if kind is model.BindingKind.SINGLE_PROTOCOL:
        return f"single protocol {binding.names[0]}"
    if kind is model.BindingKind.PROTOCOL_SET:
        return "protocols " + ", ".join(binding.names)
    if kind is model.BindingKind.FEATURE_BASED:
        return "protocol features: " + ", ".join(binding.names)
    return kind.value


def _metric_lines(label: str, metric: model.ChannelCharacteristic | None) -> list[str]:
    if metric is None:
        return [f"{label}: (block missing)"]
    head = f"{label}: {metric.presence.name.lower()}"
    if metric.value is not None:
        head += f" (value: {metric.value})"
    if metric.refers_to_countermeasures:
        head += " [see countermeasures]"
    if metric.shared is not None:
        head += f" [combined: {metric.shared.label}]"
    lines = [head]
    if metric.text is not None:
        lines.append(f"  {metric.text}")
    return lines


def build_report(m: model.MethodDescription) -> str:
    lines = [f"Method: {m.name}"]
    if m.source is not None:
        lines.append(f"Source: {m.source}")
    if m.year is not None:
        lines.append(f"Year: {m.year}")

    def section(title: str) -> None:
        lines.extend(["", title, "-" * len(title)])

    section("Hiding Pattern")
    if m.pattern.path.unassigned:
        lines.append("Unassigned.")
    else:
        lines.append(render_chain(m.pattern.path))
    if m.pattern.justifications:
        lines.append("")
        for j in m.pattern.justifications:
            lines.append(f"  {j.element}: {j.rationale}")

    section("Application Scenario")
    scenario = m.scenario
    if scenario is None:
        lines.append("(not described)")
    else:
        lines.append(f"Status: {scenario.presence.name.lower()}")
        if scenario.purpose is not None:
            lines.append(f"Purpose: {scenario.purpose.value}")
        if scenario.shared is not None:
            lines.append(f"Combined with: {scenario.shared.label}")
        if scenario.text is not None:
            lines.append(scenario.text)

    section("Properties of the Carrier")
    lines.append(f"Status: {m.carrier.presence.name.lower()}")
    lines.append(f"Binding: {_binding_text(m.carrier.binding)}")
    for condition in m.carrier.conditions:
        lines.append(f"  - {condition}")
    if m.carrier.shared is not None:
        lines.append(f"Combined with: {m.carrier.shared.label}")
    if m.carrier.text is not None:
        lines.append(m.carrier.text)

    section("Sender-side Process")
    lines.append(f"Relation: {m.sender.relation.value}")
    lines.append(f"Sender location: {m.sender.location.value}")
    lines.append(f"Covert data location: {m.sender.data_location.value}")
    lines.append(f"Generates own cover traffic: {m.sender.generates_cover.value}")
    if m.sender.text is not None:
        lines.append(m.sender.text)

    section("Receiver-side Process")
    lines.append(f"Receiver location: {m.receiver.location.value}")
    if m.receiver.text is not None:
        lines.append(m.receiver.text)

    section("Covert Channel Properties")
    names = [s.value for s in model.ChannelScenario if s in m.channel.scenarios]
    lines.append(f"Scenario: {', '.join(names)}")
    directness = m.channel.directness
    if directness.kind is model.DirectnessKind.INDIRECT:
        lines.append(f"Directness: indirect ({directness.requirements})")
    else:
        lines.append(f"Directness: {directness.kind.value}")
    lines.extend(_metric_lines("Bandwidth", m.channel.bandwidth))
    lines.extend(_metric_lines("Undetectability", m.channel.undetectability))
    lines.extend(_metric_lines("Robustness", m.channel.robustness))
    lines.extend(_metric_lines("Cost", m.channel.cost))

    section("Control Protocol")
    control = m.control_protocol
    if control is None:
        lines.append("(not described)")
    else:
        lines.append(f"Status: {control.presence.name.lower()}")
        features = [f.value for f in model.ControlFeature if f in control.features]
        if features:
            lines.append(f"Features: {', '.join(features)}")
        if control.text is not None:
            lines.append(control.text)

    section("Countermeasures")
    if not m.countermeasures:
        lines.append("(no entries)")
    for entry in m.countermeasures:
        head = f"- {entry.kind.value}: {entry.applicability.value}"
        head += ", evaluated" if entry.evaluated else ", not evaluated"
        lines.append(head)
        if entry.text is not None:
            lines.append(f"    {entry.text}")
        if entry.limitations is not None:
            lines.append(f"    evaluation limitations: {entry.limitations}")
    if m.warden is not None:
        lines.append(
            f"Warden: {m.warden.placement.value} placement, "
            f"{m.warden.state.value}, {m.warden.activity.value}"
        )
    return "\n".join(lines)


def cmd_render(args) -> int:
    document, diags = store.read_description_file(args.file)
    if any(d.code == "E007" for d in diags):
        _print_diagnostics(diags)
        return EXIT_USAGE
    if document is None:
        _print_diagnostics(diags)
        return EXIT_DIAGNOSTICS
    methods = list(document.methods)
    if args.method is not None:
        methods = [m for m in methods if m.name == args.method]
        if not methods:
            print(f"unknown method: {args.method}", file=sys.stderr)
            return EXIT_DIAGNOSTICS
    reports = [build_report(model.normalize(m)) for m in methods]
    print(("\n" + RULE_LINE + "\n").join(reports))
    return EXIT_OK


# ---------------------------------------------------------------------------
# tree
# ---------------------------------------------------------------------------

def cmd_tree(args) -> int:
    catalog_path = _catalog_path(args)
    if catalog_path is None:
        catalog = seed_catalog()
    else:
        catalog = _load_catalog(catalog_path)
        if catalog is None:
            return EXIT_DIAGNOSTICS
    if catalog.is_empty:
        print("(empty catalog)", file=sys.stderr)
        return EXIT_OK
    print(render_tree(catalog))
    return EXIT_OK


# ---------------------------------------------------------------------------
# stats
# ---------------------------------------------------------------------------

def _csv_text(tables: list[list[list[str]]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for i, rows in enumerate(tables):
        if i:
            buffer.write("\n")
        writer.writerows(rows)
    return buffer.getvalue()


def cmd_stats(args) -> int:
    try:
        corpus = store.open_corpus(args.corpus)
        catalog, catalog_diags = store.load_catalog(corpus)
    except store.StoreError as exc:
        raise _UsageError(str(exc)) from None
    if catalog is None:
        _print_diagnostics(catalog_diags)
        return EXIT_DIAGNOSTICS
    documents, diags = store.load_all(corpus)
    saw_errors = _print_diagnostics(diags)
    methods = [m for doc in documents for m in doc.methods]
    stats = analyze.corpus_stats(methods, catalog)
    saw_errors |= _print_diagnostics(list(stats.diagnostics))

    combined = analyze.combined_groups(methods) if args.combined else None
    inconsistent = analyze.inconsistency_report(methods) if args.inconsistent else None

    if args.format == "json":
        payload = analyze.stats_to_dict(stats)
        if combined is not None:
            payload["combined"] = [
                {
                    "source": g.source,
                    "label": g.label,
                    "methods": list(g.members),
                    "attributes": [a.key for a in g.attributes],
                    "single_method_label": g.flagged,
                }
                for g in combined
            ]
        if inconsistent is not None:
            payload["inconsistencies"] = [
                {
                    "source": row.source,
                    "attribute": row.attribute.key,
                    "values": {name: p.name.lower() for name, p in row.presences},
                }
                for row in inconsistent
            ]
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        tables = [analyze.attribute_table_rows(stats, suffix="")]
        if args.by_year:
            tables.append(analyze.by_year_table_rows(stats, suffix=""))
        if args.patterns:
            tables.append(analyze.histogram_table_rows(stats))
        if combined is not None:
            tables.append(analyze.combined_table_rows(combined))
        if inconsistent is not None:
            tables.append(analyze.inconsistency_table_rows(inconsistent))
        print(_csv_text(tables), end="")
    else:
        blocks = [f"methods: {stats.total}"]
        blocks.append("\n".join(analyze.align_table(
            analyze.attribute_table_rows(stats), right={1, 2, 3, 4})))
        if args.by_year:
            blocks.append("by year:\n" + "\n".join(analyze.align_table(
                analyze.by_year_table_rows(stats), right=set(range(1, 8)))))
        if args.patterns:
            blocks.append("patterns:\n" + "\n".join(analyze.align_table(
                analyze.histogram_table_rows(stats), right={1})))
        if combined is not None:
            blocks.append("combined:\n" + "\n".join(analyze.align_table(
                analyze.combined_table_rows(combined))))
        if inconsistent is not None:
            blocks.append("inconsistencies:\n" + "\n".join(analyze.align_table(
                analyze.inconsistency_table_rows(inconsistent))))
        print("\n\n".join(blocks))
    return EXIT_DIAGNOSTICS if saw_errors else EXIT_OK


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def cmd_compare(args) -> int:
    methods: list[model.MethodDescription] = []
    for file_name in args.files:
        document, diags = store.read_description_file(file_name)
        if any(d.code == "E007" for d in diags):
            _print_diagnostics(diags)
            return EXIT_USAGE
        if document is None:
            _print_diagnostics(diags)
            return EXIT_DIAGNOSTICS
        methods.extend(document.methods)
    attributes = [a.strip() for a in args.attributes.split(",") if a.strip()]
    try:
        matrix = analyze.comparison_matrix(methods, attributes)
    except analyze.UnknownAttributeError as exc:
        raise _UsageError(str(exc)) from None
    rows = [["method"] + attributes]
    for method, cells in zip(methods, matrix):
        rows.append([method.name] + cells)
    if args.format == "csv":
        print(_csv_text([rows]), end="")
    else:
        print("\n".join(analyze.align_table(rows)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# assess / catalog-add
# ---------------------------------------------------------------------------

def cmd_assess(args) -> int:
    catalog_path = _catalog_path(args)
    if catalog_path is None:
        raise _UsageError("--catalog (or NIHDL_CATALOG) is required for assessment")
    catalog = _load_catalog(catalog_path)
    if catalog is None:
        return EXIT_DIAGNOSTICS
    document, diags = store.read_description_file(args.file)
    if any(d.code == "E007" for d in diags):
        _print_diagnostics(diags)
        return EXIT_USAGE
    if document is None:
        _print_diagnostics(diags)
        return EXIT_DIAGNOSTICS
    for method in document.methods:
        print(novelty.assess(method, catalog).render())
    return EXIT_OK


def cmd_catalog_add(args) -> int:
    catalog_path = _catalog_path(args)
    if catalog_path is None:
        raise _UsageError("--catalog (or NIHDL_CATALOG) is required")
    catalog = _load_catalog(catalog_path)
    if catalog is None:
        return EXIT_DIAGNOSTICS
    try:
        justification = Path(args.justification).read_text(encoding="utf-8")
    except OSError as exc:
        raise _UsageError(f"cannot read justification file: {exc}") from None
    if not justification.strip():
        raise _UsageError("the justification file is empty")
    try:
        parent = PatternPath.from_text(args.parent)
        candidate = novelty.BigCCandidate(
            parent=parent,
            proposed_name=args.name,
            justification=justification.strip(),
        )
        extended = novelty.accept_big_c(catalog, candidate)
    except InvalidNameError as exc:
        raise _UsageError(str(exc)) from None
    except TaxonomyError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    store.atomic_write_text(Path(catalog_path), dsl.serialize_catalog(extended))
    print(f'added "{args.name}" under {parent.text}')
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nihdl",
        description="Toolkit for the network information hiding description language",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate description files")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--catalog", help="pattern catalog file (.nihc)")
    p.add_argument("--strict", action="store_true",
                   help="authoring mode: unspecified values become errors")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="print a human-readable report")
    p.add_argument("file", metavar="FILE")
    p.add_argument("--method", help="render only the named method")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("tree", help="print a catalog as an ASCII tree")
    p.add_argument("--catalog", help="pattern catalog file (default: built-in seed)")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("stats", help="corpus coverage statistics")
    p.add_argument("corpus", metavar="CORPUS_DIR")
    p.add_argument("--by-year", action="store_true", dest="by_year")
    p.add_argument("--patterns", action="store_true")
    p.add_argument("--combined", action="store_true",
                   help="report combined-description groups")
    p.add_argument("--inconsistent", action="store_true",
                   help="report within-publication inconsistencies")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("compare", help="attribute comparison matrix")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument(
        "--attributes",
        default=",".join(a.key for a in model.TrackedAttribute),
        help="comma-separated attribute list",
    )
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("assess", help="novelty verdict per method")
    p.add_argument("file", metavar="FILE")
    p.add_argument("--catalog", help="pattern catalog file (.nihc)")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("catalog-add", help="accept a new pattern into a catalog")
    p.add_argument("--catalog", help="pattern catalog file to rewrite")
    p.add_argument("--parent", required=True,
                   help='parent path, e.g. "Network Covert Timing Channels"')
    p.add_argument("--name", required=True, help="name of the new pattern node")
    p.add_argument("--justification", required=True, metavar="FILE",
                   help="file holding the new-pattern justification")
    p.set_defaults(func=cmd_catalog_add)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

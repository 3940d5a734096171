"""Loading and integrity-checking of the bundled knowledge assets.

The package ships four data files: the vocabulary/taxonomy graph, the
bioethics scenario graph, the moral-verdict rule file, and the competency
question manifest.  A fifth file records the frozen triple counts of the
two graphs; a mismatch at load time means the assets were corrupted, and
loading fails rather than producing quietly wrong answers.

Set the ``APPLE_ASSET_DIR`` environment variable to point all bundled-asset
loading at a different directory (the files must keep their names).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .graph import Graph
from .rules import Rule, parse_rules
from .schema import NameCatalog, SchemaIndex, extract_schema
from .terms import PrefixMap
from .turtle import parse_document

ASSET_ENV_VAR = "APPLE_ASSET_DIR"

TAXONOMY_FILE = "apple-taxonomy.ttl"
SCENARIO_FILE = "bioethics-scenario.ttl"
RULES_FILE = "moral-verdict.rules"
CQ_MANIFEST_FILE = "cq-manifest.json"
COUNTS_FILE = "manifest.json"


class AssetError(Exception):
    """A bundled asset is missing, unreadable, or fails its integrity check."""


def asset_dir() -> Path:
    """The directory holding the assets, honoring APPLE_ASSET_DIR."""
    override = os.environ.get(ASSET_ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("applekit"))) / "assets"


@dataclass(frozen=True)
class CqCase:
    id: str
    question: str
    mode: str
    query: str
    expected: tuple[str, ...]
    reconstructed: bool = False


def parse_cq_manifest(text: str) -> tuple[CqCase, ...]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AssetError(f"competency-question manifest is not valid JSON: {exc}") from exc
    cases = []
    for raw in payload.get("cases", []):
        missing = {"id", "mode", "query", "expected"} - set(raw)
        if missing:
            raise AssetError(f"manifest case is missing fields: {', '.join(sorted(missing))}")
        if raw["mode"] not in ("instances", "classes", "select"):
            raise AssetError(f"manifest case {raw['id']}: unknown mode {raw['mode']!r}")
        cases.append(
            CqCase(
                id=raw["id"],
                question=raw.get("question", ""),
                mode=raw["mode"],
                query=raw["query"],
                expected=tuple(sorted(raw["expected"])),
                reconstructed=bool(raw.get("reconstructed", False)),
            )
        )
    if not cases:
        raise AssetError("competency-question manifest contains no cases")
    return tuple(cases)


@dataclass
class AppleAssets:
    """The loaded bundle.  Treat the graphs as read-only; the loader caches
    per asset directory and hands every caller the same objects."""

    taxonomy: Graph
    scenario: Graph
    prefixes: PrefixMap
    schema: SchemaIndex
    catalog: NameCatalog
    rules: list[Rule]
    rules_text: str
    cq_cases: tuple[CqCase, ...]
    counts: dict[str, int]

    def combined(self) -> Graph:
        merged = self.taxonomy.copy()
        for triple in self.scenario:
            merged.insert(triple)
        return merged


def _read(path: Path, name: str) -> str:
    target = path / name
    try:
        return target.read_text(encoding="utf-8")
    except OSError as exc:
        raise AssetError(f"cannot read bundled asset {target}: {exc}") from exc


def load_assets(asset_path: str | Path | None = None) -> AppleAssets:
    """Load, parse, and integrity-check the asset bundle (cached per path)."""
    resolved = str(Path(asset_path) if asset_path is not None else asset_dir())
    return _cached_assets(resolved)


@lru_cache(maxsize=8)
def _cached_assets(resolved: str) -> AppleAssets:
    path = Path(resolved)
    taxonomy_doc = parse_document(_read(path, TAXONOMY_FILE))
    scenario_doc = parse_document(_read(path, SCENARIO_FILE))

    counts_raw = json.loads(_read(path, COUNTS_FILE))
    counts = {key: int(value) for key, value in counts_raw.items()}
    for name, graph in (("taxonomy", taxonomy_doc.graph), ("scenario", scenario_doc.graph)):
        expected = counts.get(name)
        if expected is None:
            raise AssetError(f"asset count manifest has no entry for {name!r}")
        if len(graph) != expected:
            raise AssetError(
                f"bundled {name} graph has {len(graph)} triples, manifest records {expected}; "
                "the assets appear corrupted"
            )

    prefixes = taxonomy_doc.prefixes.copy()
    for prefix, namespace in scenario_doc.prefixes.items():
        prefixes.bind(prefix, namespace)

    combined = taxonomy_doc.graph.copy()
    for triple in scenario_doc.graph:
        combined.insert(triple)
    schema = extract_schema(combined)
    catalog = NameCatalog.from_graph(combined, schema, prefixes)

    rules_text = _read(path, RULES_FILE)
    rules = parse_rules(rules_text, catalog)
    cq_cases = parse_cq_manifest(_read(path, CQ_MANIFEST_FILE))

    return AppleAssets(
        taxonomy=taxonomy_doc.graph,
        scenario=scenario_doc.graph,
        prefixes=prefixes,
        schema=schema,
        catalog=catalog,
        rules=rules,
        rules_text=rules_text,
        cq_cases=cq_cases,
        counts=counts,
    )


def default_catalog() -> NameCatalog:
    """The name catalog of the bundled assets (used when parsers get none)."""
    return load_assets().catalog

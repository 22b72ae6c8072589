"""Decide which items relate to the target country, with provenance.

Two families of rules apply.  Direct properties (country, citizenship, country
of origin) relate an item when any claim value equals the target country
itself.  Place properties (place of birth, location) point at places, not
countries, so the place is resolved transitively: a geographic index built in
a first pass maps every item to its country-chain claim values, and a bounded
breadth-first walk over that index decides whether the target is reachable.

Every satisfied claim contributes one provenance path: ``(property, entity,
..., target)``.  Direct paths come first, then place paths; properties are
visited in ascending id order and claim values in claim order, so results are
deterministic for a given entity.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping

from .entities import EntityId, SlimEntity
from .errors import DuplicateItemError, RulesError

COUNTRY = EntityId.prop(17)
PLACE_OF_BIRTH = EntityId.prop(19)
CITIZENSHIP = EntityId.prop(27)
LOCATION = EntityId.prop(276)
COUNTRY_OF_ORIGIN = EntityId.prop(495)
INSTANCE_OF = EntityId.prop(31)

UNITED_STATES = EntityId.item(30)
DISAMBIGUATION_PAGE = EntityId.item(4167410)

GeoIndex = Mapping[EntityId, tuple[EntityId, ...]]


@dataclass(frozen=True)
class RuleSet:
    """Configuration for attribution.

    ``direct_props`` values must equal ``target``; ``place_props`` values are
    places resolved through ``geo_chain_props`` edges, at most ``max_depth``
    hops.  Items whose instance-of claim hits ``exclude_classes`` are never
    attributed (navigation pages, not topics).
    """

    target: EntityId = UNITED_STATES
    direct_props: frozenset[EntityId] = frozenset({COUNTRY, CITIZENSHIP, COUNTRY_OF_ORIGIN})
    place_props: frozenset[EntityId] = frozenset({PLACE_OF_BIRTH, LOCATION})
    geo_chain_props: tuple[EntityId, ...] = (COUNTRY,)
    max_depth: int = 5
    exclude_classes: frozenset[EntityId] = frozenset({DISAMBIGUATION_PAGE})

    def __post_init__(self):
        if self.direct_props & self.place_props:
            overlap = ", ".join(sorted(str(p) for p in self.direct_props & self.place_props))
            raise ValueError(f"direct and place property sets overlap: {overlap}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")

    @property
    def required_properties(self) -> frozenset[EntityId]:
        """Every property the dump parser must keep for these rules to work."""
        return frozenset(
            {*self.direct_props, *self.place_props, *self.geo_chain_props, INSTANCE_OF}
        )


@dataclass(frozen=True)
class AttributionResult:
    """Whether (and why) one item relates to the target country.

    ``provenance`` holds one path per satisfied claim; each path starts with
    the property and ends at the target.  ``related`` is true exactly when
    provenance is non-empty.
    """

    item: EntityId
    related: bool
    provenance: tuple[tuple[EntityId, ...], ...] = ()

    def __post_init__(self):
        if self.related != bool(self.provenance):
            raise ValueError("related flag must mirror provenance non-emptiness")


def build_geo_index(entities: Iterable[SlimEntity], rules: RuleSet) -> dict[EntityId, tuple[EntityId, ...]]:
    """First pass: map each item to its country-chain claim values, in claim order."""
    index: dict[EntityId, tuple[EntityId, ...]] = {}
    for entity in entities:
        values: list[EntityId] = []
        for prop in rules.geo_chain_props:
            values.extend(entity.entity_values(prop))
        if values:
            index[entity.id] = tuple(values)
    return index


def resolve_place_country(index: GeoIndex, place: EntityId, rules: RuleSet) -> set[EntityId]:
    """All entities reachable from ``place`` within ``max_depth`` hops.

    Breadth-first and depth-bounded, so cyclic geographies terminate; the
    start node itself appears only if some cycle leads back to it.
    """
    found: set[EntityId] = set()
    frontier = [place]
    for _ in range(rules.max_depth):
        next_frontier: list[EntityId] = []
        for node in frontier:
            for value in index.get(node, ()):
                if value not in found:
                    found.add(value)
                    next_frontier.append(value)
        if not next_frontier:
            break
        frontier = next_frontier
    return found


def _path_to_target(index: GeoIndex, start: EntityId, rules: RuleSet) -> tuple[EntityId, ...] | None:
    """Shortest chain ``(start, ..., target)`` over geo edges, or None.

    Breadth-first with parent tracking; ties resolve to the earliest claim in
    the earliest-discovered node, so the chain is deterministic.
    """
    target = rules.target
    parents: dict[EntityId, EntityId] = {}
    frontier = [start]
    seen = {start}

    def chain_to(node: EntityId) -> tuple[EntityId, ...]:
        chain = [node]
        while chain[-1] != start:
            chain.append(parents[chain[-1]])
        chain.reverse()
        return tuple(chain)

    for _ in range(rules.max_depth):
        next_frontier: list[EntityId] = []
        for node in frontier:
            for value in index.get(node, ()):
                if value == target:
                    return (*chain_to(node), target)
                if value in seen:
                    continue
                seen.add(value)
                parents[value] = node
                next_frontier.append(value)
        if not next_frontier:
            return None
        frontier = next_frontier
    return None


def attribute_item(entity: SlimEntity, index: GeoIndex, rules: RuleSet) -> AttributionResult:
    """Attribute one item: direct property matches first, then resolved places."""
    paths: list[tuple[EntityId, ...]] = []
    for prop in sorted(rules.direct_props, key=lambda p: p.number):
        for value in entity.claim_values(prop):
            if value == rules.target:
                paths.append((prop, rules.target))
    for prop in sorted(rules.place_props, key=lambda p: p.number):
        for value in entity.entity_values(prop):
            chain = _path_to_target(index, value, rules)
            if chain is not None:
                paths.append((prop, *chain))
    return AttributionResult(entity.id, bool(paths), tuple(paths))


def is_excluded(entity: SlimEntity, rules: RuleSet) -> bool:
    """True when the item's instance-of claim hits an excluded class."""
    return any(v in rules.exclude_classes for v in entity.entity_values(INSTANCE_OF))


def attribute_all(
    entities: Iterable[SlimEntity], index: GeoIndex, rules: RuleSet
) -> dict[EntityId, AttributionResult]:
    """One result per input item; excluded-class items are forced unrelated."""
    results: dict[EntityId, AttributionResult] = {}
    for entity in entities:
        if entity.id in results:
            raise DuplicateItemError(f"item {entity.id} appears twice in the input stream")
        if is_excluded(entity, rules):
            results[entity.id] = AttributionResult(entity.id, False, ())
        else:
            results[entity.id] = attribute_item(entity, index, rules)
    return results


# -- rules file (key=value lines) -------------------------------------------

_LIST_KEYS = {"direct", "place", "geo_chain", "exclude_classes"}


def _parse_id_list(value: str, line_number: int) -> tuple[EntityId, ...]:
    try:
        return tuple(EntityId.parse(tok.strip()) for tok in value.split(",") if tok.strip())
    except ValueError as exc:
        raise RulesError(f"line {line_number}: {exc}") from exc


def parse_rules(text: str) -> RuleSet:
    """Parse a rules file; unspecified keys keep their defaults."""
    kwargs: dict = {}
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise RulesError(f"line {line_number}: expected key=value, got {raw!r}")
        key, value = key.strip(), value.strip()
        if key == "target":
            try:
                kwargs["target"] = EntityId.parse(value)
            except ValueError as exc:
                raise RulesError(f"line {line_number}: {exc}") from exc
        elif key == "max_depth":
            try:
                kwargs["max_depth"] = int(value)
            except ValueError as exc:
                raise RulesError(f"line {line_number}: max_depth must be an integer") from exc
        elif key in _LIST_KEYS:
            ids = _parse_id_list(value, line_number)
            if key == "direct":
                kwargs["direct_props"] = frozenset(ids)
            elif key == "place":
                kwargs["place_props"] = frozenset(ids)
            elif key == "geo_chain":
                kwargs["geo_chain_props"] = ids
            else:
                kwargs["exclude_classes"] = frozenset(ids)
        else:
            raise RulesError(f"line {line_number}: unknown key {key!r}")
    try:
        return RuleSet(**kwargs)
    except ValueError as exc:
        raise RulesError(str(exc)) from exc


def load_rules(path: Path | str) -> RuleSet:
    with open(path, encoding="utf-8") as handle:
        return parse_rules(handle.read())


# -- attribution TSV ---------------------------------------------------------


def render_provenance(paths: tuple[tuple[EntityId, ...], ...]) -> str:
    return ";".join(">".join(str(node) for node in path) for path in paths)


def parse_provenance(text: str) -> tuple[tuple[EntityId, ...], ...]:
    if not text:
        return ()
    return tuple(
        tuple(EntityId.parse(tok) for tok in segment.split(">")) for segment in text.split(";")
    )


def write_attribution_tsv(results: Mapping[EntityId, AttributionResult], sink: IO[str]) -> None:
    for item in sorted(results, key=lambda e: e.number):
        result = results[item]
        flag = "true" if result.related else "false"
        sink.write(f"{item}\t{flag}\t{render_provenance(result.provenance)}\n")


def read_attribution_tsv(source: Iterable[str]) -> dict[EntityId, AttributionResult]:
    results: dict[EntityId, AttributionResult] = {}
    for line_number, raw in enumerate(source, start=1):
        line = raw.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"line {line_number}: expected 3 fields")
        item = EntityId.parse(parts[0])
        related = parts[1] == "true"
        results[item] = AttributionResult(item, related, parse_provenance(parts[2]))
    return results

"""Fixture builders and independent oracles shared across test modules.

The oracles here deliberately avoid the package's own traversal and
aggregation code: attribution is re-decided by enumerating raw walks over the
claim multigraph, and metric expectations are recomputed with plain loops and
exact fractions.
"""

from __future__ import annotations

import json
import random

from wikicoverage.attribution import INSTANCE_OF, RuleSet
from wikicoverage.entities import OPAQUE, EntityId, SlimEntity

Q = EntityId.item
P = EntityId.prop


# -- dump JSON construction ----------------------------------------------------


def statement(value, rank: str = "normal") -> dict:
    """One claim statement; value may be an EntityId or an opaque payload."""
    if isinstance(value, EntityId):
        datavalue = {
            "type": "wikibase-entityid",
            "value": {"entity-type": value.kind, "numeric-id": value.number},
        }
    else:
        datavalue = {"type": "string", "value": value}
    return {"mainsnak": {"snaktype": "value", "datavalue": datavalue}, "rank": rank}


def entity_json(
    entity_id: str,
    claims: dict[str, list] | None = None,
    sitelinks: dict[str, str] | None = None,
    entity_type: str = "item",
) -> dict:
    obj: dict = {"type": entity_type, "id": entity_id}
    if claims:
        obj["claims"] = {
            prop: [v if isinstance(v, dict) else statement(v) for v in values]
            for prop, values in claims.items()
        }
    if sitelinks:
        obj["sitelinks"] = {wiki: {"title": title} for wiki, title in sitelinks.items()}
    return obj


def dump_text(objects: list[dict | str], terminator: bool = True) -> str:
    """Full dump text: bracket lines around one JSON object (or raw line) each."""
    lines = ["[\n"]
    for index, obj in enumerate(objects):
        body = obj if isinstance(obj, str) else json.dumps(obj, ensure_ascii=False)
        comma = "," if index < len(objects) - 1 else ""
        lines.append(body + comma + "\n")
    if terminator:
        lines.append("]\n")
    return "".join(lines)


# -- random slim entities (store round-trip fixtures) ---------------------------

_TITLE_CHARS = "abcdefgh XYZ_%|\t'(),:;=é中"


def random_title(rng: random.Random) -> str:
    length = rng.randint(1, 12)
    return "".join(rng.choice(_TITLE_CHARS) for _ in range(length))


def random_entities(rng: random.Random, count: int) -> list[SlimEntity]:
    """Entities with unique ids, mixed claims (incl. opaque) and odd titles."""
    numbers = rng.sample(range(1, max(count * 10, 1000)), count)
    entities = []
    props = [P(17), P(19), P(27), P(31), P(276), P(495)]
    wikis = ["enwiki", "dewiki", "frwiki", "plwiki", "zh_min_nanwiki"]
    for number in numbers:
        claims = {}
        for prop in rng.sample(props, rng.randint(0, len(props))):
            values = tuple(
                OPAQUE if rng.random() < 0.2 else Q(rng.randint(1, 5000))
                for _ in range(rng.randint(1, 3))
            )
            claims[prop] = values
        sitelinks = {
            wiki: random_title(rng)
            for wiki in rng.sample(wikis, rng.randint(0, len(wikis)))
        }
        entities.append(SlimEntity(Q(number), claims, sitelinks))
    return entities


# -- attribution oracle ----------------------------------------------------------


def oracle_related(entity: SlimEntity, geo_graph: dict[EntityId, list[EntityId]], rules: RuleSet) -> bool:
    """Independent attribution decision by brute-force walk enumeration.

    ``geo_graph`` is built directly from raw claims (see
    :func:`oracle_geo_graph`), not from the package's index.  A place claim
    satisfies when any walk of 1..max_depth edges reaches the target.
    """
    for value in entity.entity_values(INSTANCE_OF):
        if value in rules.exclude_classes:
            return False
    for prop in rules.direct_props:
        for value in entity.claim_values(prop):
            if value == rules.target:
                return True

    def walk_hits_target(node: EntityId, budget: int) -> bool:
        if budget == 0:
            return False
        for nxt in geo_graph.get(node, ()):
            if nxt == rules.target:
                return True
            if walk_hits_target(nxt, budget - 1):
                return True
        return False

    for prop in rules.place_props:
        for value in entity.entity_values(prop):
            if walk_hits_target(value, rules.max_depth):
                return True
    return False


def oracle_geo_graph(entities: list[SlimEntity], rules: RuleSet) -> dict[EntityId, list[EntityId]]:
    graph: dict[EntityId, list[EntityId]] = {}
    for entity in entities:
        edges: list[EntityId] = []
        for prop in rules.geo_chain_props:
            edges.extend(entity.entity_values(prop))
        if edges:
            graph[entity.id] = edges
    return graph


def random_attribution_fixture(rng: random.Random, size: int) -> list[SlimEntity]:
    """A mixed entity population for oracle-equivalence checks.

    Roughly: a handful of country nodes (the target among them), a geographic
    layer whose country chains sometimes cycle or dead-end, and a topic layer
    with direct country claims, place claims, opaque noise and the occasional
    excluded navigation page.
    """
    target = Q(30)
    countries = [target, Q(183), Q(142), Q(145)]
    place_count = max(3, size // 5)
    places = [Q(1000 + i) for i in range(place_count)]
    entities: list[SlimEntity] = []

    for country in countries:
        claims = {}
        if rng.random() < 0.5:
            claims[P(17)] = (country,)  # countries often carry a self claim
        entities.append(SlimEntity(country, claims, {}))

    for index, place in enumerate(places):
        edges = []
        for _ in range(rng.randint(0, 3)):
            roll = rng.random()
            if roll < 0.35:
                edges.append(rng.choice(countries))
            else:
                edges.append(rng.choice(places))  # chains, cycles, dead ends
        claims = {P(17): tuple(edges)} if edges else {}
        entities.append(SlimEntity(place, claims, {}))

    next_number = 50_000
    while len(entities) < size:
        claims = {}
        if rng.random() < 0.3:
            claims[P(27)] = tuple(
                rng.choice(countries) for _ in range(rng.randint(1, 2))
            )
        if rng.random() < 0.25:
            claims[P(17)] = (rng.choice(countries),)
        if rng.random() < 0.15:
            claims[P(495)] = (rng.choice(countries),)
        if rng.random() < 0.4:
            claims[P(19)] = (rng.choice(places),)
        if rng.random() < 0.2:
            claims[P(276)] = (rng.choice(places + countries),)
        if rng.random() < 0.1:
            claims[P(31)] = (Q(4167410),)  # excluded navigation page
        if rng.random() < 0.15:
            claims.setdefault(P(27), ())
            claims[P(27)] = claims[P(27)] + (OPAQUE,)
        claims = {prop: values for prop, values in claims.items() if values}
        entities.append(SlimEntity(Q(next_number), claims, {}))
        next_number += 1
    return entities

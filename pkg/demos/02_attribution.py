"""Decide which items relate to a target country, with provenance.

Country-valued properties (country, citizenship, country of origin) match the
target directly.  Place-valued properties (place of birth, location) go
through a geographic index: first pass collects every item's country-chain
claims, then a bounded breadth-first walk resolves each place.
"""

from wikicoverage import (
    EntityId,
    RuleSet,
    SlimEntity,
    attribute_all,
    build_geo_index,
    resolve_place_country,
)
from wikicoverage.attribution import render_provenance

Q, P = EntityId.item, EntityId.prop

rules = RuleSet()  # target Q30, direct P17/P27/P495, places via P19/P276
print(f"target: {rules.target}, max geo depth: {rules.max_depth}")

entities = [
    # geography: a city in the target country, a city elsewhere, and a cycle
    SlimEntity(Q(60), {P(17): (Q(30),)}, {"enwiki": "New York City"}),
    SlimEntity(Q(64), {P(17): (Q(183),)}, {"enwiki": "Berlin"}),
    SlimEntity(Q(111), {P(17): (Q(112),)}),
    SlimEntity(Q(112), {P(17): (Q(111),)}),
    # topics
    SlimEntity(Q(22686), {P(27): (Q(30),), P(19): (Q(60),)}, {"enwiki": "Donald Trump"}),
    SlimEntity(Q(9684), {P(17): (Q(30),)}, {"enwiki": "The New York Times"}),
    SlimEntity(Q(5879), {P(27): (Q(183),), P(19): (Q(64),)}, {"enwiki": "Goethe"}),
    SlimEntity(Q(500), {P(19): (Q(111),)}, {"enwiki": "Nobody In Particular"}),
    # a disambiguation page never counts, even with a matching claim
    SlimEntity(Q(600), {P(17): (Q(30),), P(31): (Q(4167410),)}),
]

index = build_geo_index(entities, rules)
print(f"\ngeo index has {len(index)} entries")
print("resolve Q60 ->", {str(e) for e in resolve_place_country(index, Q(60), rules)})
print("resolve Q111 (cycle) ->", {str(e) for e in resolve_place_country(index, Q(111), rules)})

results = attribute_all(entities, index, rules)
print("\nattribution results:")
for item, result in sorted(results.items(), key=lambda kv: kv[0].number):
    via = render_provenance(result.provenance) or "-"
    print(f"  {item}: related={result.related}  via {via}")

"""Stream a Wikidata-style entity dump into slim records and persist them.

The dump format is one JSON entity per line between a ``[`` and a ``]`` line.
Only the claims and sitelinks we care about survive parsing, so a laptop can
chew through dumps far larger than its RAM.
"""

import io

from wikicoverage import EntityId, parse_dump_stream, read_slim_store, write_slim_store

# a three-entity dump, exactly as it would sit on disk after decompression;
# the middle line is deliberately broken to show error isolation
DUMP = """\
[
{"type": "item", "id": "Q22686", "claims": {"P27": [{"mainsnak": {"snaktype": "value", "datavalue": {"type": "wikibase-entityid", "value": {"entity-type": "item", "numeric-id": 30}}}, "rank": "normal"}]}, "sitelinks": {"enwiki": {"title": "Donald Trump"}}},
{"type": "item", "id": "Q9684", "claims": {"P17": [{"mainsnak": {"snak
{"type": "item", "id": "Q30", "claims": {"P17": [{"mainsnak": {"snaktype": "value", "datavalue": {"type": "wikibase-entityid", "value": {"entity-type": "item", "numeric-id": 30}}}, "rank": "normal"}]}, "sitelinks": {"enwiki": {"title": "United States"}}}
]
"""

keep_props = frozenset({EntityId.prop(17), EntityId.prop(27)})

errors = []
entities = list(
    parse_dump_stream(io.StringIO(DUMP), keep_props, {"enwiki"}, errors=errors)
)

print(f"parsed {len(entities)} entities, skipped {len(errors)} malformed line(s)")
for entity in entities:
    claims = {str(p): [str(v) for v in vs] for p, vs in entity.claims.items()}
    print(f"  {entity.id}: claims={claims} sitelinks={entity.sitelinks}")
for issue in errors:
    print(f"  line {issue.line_number} skipped: {issue.reason}")

# persist to the compact store format and read it back; records come back
# sorted by item number, which is what the two-pass attribution step expects
buffer = io.StringIO()
count = write_slim_store(entities, buffer, keep_props=keep_props, keep_wikis={"enwiki"})
print(f"\nslim store with {count} records:")
print(buffer.getvalue())

restored = list(read_slim_store(io.StringIO(buffer.getvalue())))
print("round trip ok:", restored == sorted(entities, key=lambda e: e.id.number))

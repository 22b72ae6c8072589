"""From pageview lines and a readership table to the four per-language metrics.

* ppcrw -- share of the edition's readers located in its primary country
* vpc   -- share of the edition's views coming from that country
* ras   -- share of the edition's articles related to the target country
* ravs  -- share of article views going to related articles

Values stay exact fractions until they are rendered.
"""

import io

from wikicoverage import (
    EntityId,
    SlimEntity,
    UsageStats,
    aggregate_views,
    build_article_sets,
    compute_all,
    parse_pageviews_stream,
    parse_readership_table,
)
from wikicoverage.attribution import AttributionResult
from wikicoverage.util import percent

Q, P = EntityId.item, EntityId.prop

# pageview dump lines: mobile traffic folds into the base language, the
# wiktionary line is skipped, the broken line is tallied and ignored
PAGEVIEWS = """\
en United_States 120 0
en.m United_States 80 0
en Germany 80 0
en Donald_Trump 135 0
en.d free 999 0
en BadLine x 0
"""

READERSHIP = """\
language,country,readers,views_from
en,US,600,800
en,GB,150,90
en,DE,100,60
en,FR,150,50
"""

issues = []
views = aggregate_views(parse_pageviews_stream(io.StringIO(PAGEVIEWS), errors=issues))
print("view totals:", {f"{l}:{t}": v for (l, t), v in sorted(views.items())})
print("malformed pageview lines:", len(issues))

entities = [
    SlimEntity(Q(30), {P(17): (Q(30),)}, {"enwiki": "United States"}),
    SlimEntity(Q(183), {P(17): (Q(183),)}, {"enwiki": "Germany"}),
    SlimEntity(Q(22686), {P(27): (Q(30),)}, {"enwiki": "Donald Trump"}),
]
attributions = {
    Q(30): AttributionResult(Q(30), True, ((P(17), Q(30)),)),
    Q(183): AttributionResult(Q(183), False, ()),
    Q(22686): AttributionResult(Q(22686), True, ((P(27), Q(30)),)),
}

usage = UsageStats(
    views=views,
    readership=parse_readership_table(io.StringIO(READERSHIP)),
)
rows, failures = compute_all(build_article_sets(entities, {"en"}), attributions, usage)
assert not failures

(row,) = rows
print(f"\nlanguage {row.language}, primary country {row.primary_country}")
print(f"  ppcrw = {row.ppcrw}  ({percent(row.ppcrw)})")
print(f"  vpc   = {row.vpc}  ({percent(row.vpc)})")
print(f"  ras   = {row.ras}  ({percent(row.ras)})   [{row.related_article_count}/{row.article_count} articles]")
print(f"  ravs  = {row.ravs}  ({percent(row.ravs)})   [{row.related_views}/{row.total_views} views]")

"""Per-language coverage metrics.

For each language edition four parameters are computed:

* ``ppcrw`` -- share of the edition's readers located in its primary country,
* ``vpc``   -- share of the edition's views coming from the primary country,
* ``ras``   -- share of the edition's articles related to the target country,
* ``ravs``  -- share of article views going to target-related articles.

The primary country is the one with the most readers of that edition.  All
four values are kept as exact :class:`~fractions.Fraction` internally; any
rendering to decimals happens only at the reporting edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Mapping

from .attribution import AttributionResult
from .entities import EntityId, SlimEntity
from .errors import (
    IncompleteAttributionError,
    NoReadershipError,
    TitleConflictError,
    UndefinedMetricError,
    WikiCoverageError,
)
from .usage import ReadershipRecord, UsageStats
from .util import format_fraction, normalize_sitelink_title, sitelink_key

METRICS_COLUMNS = (
    "language",
    "primary_country",
    "ppcrw",
    "vpc",
    "ras",
    "ravs",
    "article_count",
    "related_article_count",
    "total_views",
    "related_views",
)


@dataclass(frozen=True)
class LanguageArticleSet:
    """All sitelinked articles of one language edition, title -> owning item."""

    language: str
    articles: dict[str, EntityId] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.articles)


@dataclass(frozen=True)
class MetricsRow:
    """One language edition's four metrics plus the raw counts behind them."""

    language: str
    primary_country: str
    ppcrw: Fraction
    vpc: Fraction
    ras: Fraction
    ravs: Fraction
    article_count: int
    related_article_count: int
    total_views: int
    related_views: int

    def __post_init__(self):
        for name in ("ppcrw", "vpc", "ras", "ravs"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} out of [0, 1]: {value}")
        if self.related_article_count > self.article_count:
            raise ValueError("related article count exceeds article count")
        if self.related_views > self.total_views:
            raise ValueError("related views exceed total views")
        if self.article_count > 0 and self.ras != Fraction(
            self.related_article_count, self.article_count
        ):
            raise ValueError("ras does not match its counts")
        if self.total_views > 0 and self.ravs != Fraction(
            self.related_views, self.total_views
        ):
            raise ValueError("ravs does not match its counts")


def build_article_sets(
    entities: Iterable[SlimEntity], languages: Iterable[str]
) -> dict[str, LanguageArticleSet]:
    """Collect each language's sitelinked titles, normalized to underscores.

    Two distinct items claiming the same (language, title) raise
    :class:`TitleConflictError` naming both ids.
    """
    language_list = sorted(set(languages))
    by_language: dict[str, dict[str, EntityId]] = {lang: {} for lang in language_list}
    key_to_language = {sitelink_key(lang): lang for lang in language_list}
    for entity in entities:
        for wiki, title in entity.sitelinks.items():
            language = key_to_language.get(wiki)
            if language is None:
                continue
            normalized = normalize_sitelink_title(title)
            previous = by_language[language].get(normalized)
            if previous is not None and previous != entity.id:
                raise TitleConflictError(
                    f"{language}:{normalized!r} claimed by both {previous} and {entity.id}"
                )
            by_language[language][normalized] = entity.id
    return {
        lang: LanguageArticleSet(lang, articles) for lang, articles in by_language.items()
    }


def primary_country(readership: Iterable[ReadershipRecord]) -> str:
    """Country with the most readers; ties break to the smallest country code."""
    records = list(readership)
    if not records:
        raise NoReadershipError("no readership rows for this language")
    return min(records, key=lambda r: (-r.readers, r.country)).country


def compute_ppcrw(readership: Iterable[ReadershipRecord], primary: str) -> Fraction:
    """Share of readers located in the primary country."""
    records = list(readership)
    if primary not in {r.country for r in records}:
        raise UndefinedMetricError(f"primary country {primary!r} absent from readership")
    total = sum(r.readers for r in records)
    if total == 0:
        raise UndefinedMetricError("zero total readers")
    mine = sum(r.readers for r in records if r.country == primary)
    return Fraction(mine, total)


def compute_vpc(readership: Iterable[ReadershipRecord], primary: str) -> Fraction:
    """Share of views coming from the primary country."""
    records = list(readership)
    if primary not in {r.country for r in records}:
        raise UndefinedMetricError(f"primary country {primary!r} absent from readership")
    total = sum(r.views_from for r in records)
    if total == 0:
        raise UndefinedMetricError("zero total views_from")
    mine = sum(r.views_from for r in records if r.country == primary)
    return Fraction(mine, total)


def compute_ras(
    articles: LanguageArticleSet,
    attributions: Mapping[EntityId, AttributionResult],
) -> tuple[Fraction, int, int]:
    """Related-article share: (share, related count, total count)."""
    total = len(articles.articles)
    if total == 0:
        raise UndefinedMetricError(f"no articles for language {articles.language!r}")
    related = 0
    for title, item in articles.articles.items():
        result = attributions.get(item)
        if result is None:
            raise IncompleteAttributionError(
                f"{articles.language}:{title!r} owner {item} has no attribution"
            )
        if result.related:
            related += 1
    return Fraction(related, total), related, total


def compute_ravs(
    articles: LanguageArticleSet,
    attributions: Mapping[EntityId, AttributionResult],
    views: Mapping[tuple[str, str], int],
) -> tuple[Fraction, int, int]:
    """Related-views share over the article set; absent titles count 0 views."""
    total = 0
    related = 0
    for title, item in articles.articles.items():
        result = attributions.get(item)
        if result is None:
            raise IncompleteAttributionError(
                f"{articles.language}:{title!r} owner {item} has no attribution"
            )
        count = views.get((articles.language, title), 0)
        total += count
        if result.related:
            related += count
    if total == 0:
        raise UndefinedMetricError(f"zero total views for language {articles.language!r}")
    return Fraction(related, total), related, total


def compute_language_row(
    articles: LanguageArticleSet,
    attributions: Mapping[EntityId, AttributionResult],
    usage: UsageStats,
) -> MetricsRow:
    readership = usage.readership.get(articles.language, [])
    primary = primary_country(readership)
    ppcrw = compute_ppcrw(readership, primary)
    vpc = compute_vpc(readership, primary)
    ras, related_articles, article_count = compute_ras(articles, attributions)
    ravs, related_views, total_views = compute_ravs(articles, attributions, usage.views)
    return MetricsRow(
        language=articles.language,
        primary_country=primary,
        ppcrw=ppcrw,
        vpc=vpc,
        ras=ras,
        ravs=ravs,
        article_count=article_count,
        related_article_count=related_articles,
        total_views=total_views,
        related_views=related_views,
    )


def compute_all(
    article_sets: Mapping[str, LanguageArticleSet],
    attributions: Mapping[EntityId, AttributionResult],
    usage: UsageStats,
    languages: Iterable[str] | None = None,
) -> tuple[list[MetricsRow], dict[str, WikiCoverageError]]:
    """One row per language, language-sorted; failures tagged, others produced."""
    requested = sorted(set(languages)) if languages is not None else sorted(article_sets)
    rows: list[MetricsRow] = []
    failures: dict[str, WikiCoverageError] = {}
    for language in requested:
        try:
            articles = article_sets.get(language)
            if articles is None:
                raise UndefinedMetricError(f"no article set for language {language!r}")
            rows.append(compute_language_row(articles, attributions, usage))
        except WikiCoverageError as exc:
            failures[language] = exc
    return rows, failures


# -- metrics TSV --------------------------------------------------------------


def write_metrics_tsv(rows: Iterable[MetricsRow], sink: IO[str]) -> None:
    """Machine-readable metrics table; fractions printed with 6 decimals."""
    sink.write("\t".join(METRICS_COLUMNS) + "\n")
    for row in rows:
        sink.write(
            "\t".join(
                (
                    row.language,
                    row.primary_country,
                    format_fraction(row.ppcrw),
                    format_fraction(row.vpc),
                    format_fraction(row.ras),
                    format_fraction(row.ravs),
                    str(row.article_count),
                    str(row.related_article_count),
                    str(row.total_views),
                    str(row.related_views),
                )
            )
            + "\n"
        )


def read_metrics_tsv(source: Iterable[str]) -> list[MetricsRow]:
    """Reload a metrics TSV; ras/ravs are rebuilt exactly from the counts."""
    lines = iter(source)
    header = next(lines, None)
    if header is None or tuple(header.rstrip("\n").split("\t")) != METRICS_COLUMNS:
        raise ValueError("bad metrics TSV header")
    rows: list[MetricsRow] = []
    for raw in lines:
        line = raw.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != len(METRICS_COLUMNS):
            raise ValueError(f"expected {len(METRICS_COLUMNS)} fields, got {len(fields)}")
        article_count = int(fields[6])
        related_articles = int(fields[7])
        total_views = int(fields[8])
        related_views = int(fields[9])
        rows.append(
            MetricsRow(
                language=fields[0],
                primary_country=fields[1],
                ppcrw=Fraction(fields[2]),
                vpc=Fraction(fields[3]),
                ras=Fraction(related_articles, article_count),
                ravs=Fraction(related_views, total_views),
                article_count=article_count,
                related_article_count=related_articles,
                total_views=total_views,
                related_views=related_views,
            )
        )
    return rows

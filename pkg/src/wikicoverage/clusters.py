"""Cultural-cluster aggregation of per-language metrics.

Languages map to clusters through their primary country via an editable
country->cluster CSV (a seed asset ships with the package).  Cluster shares
pool the raw numerators and denominators of their member languages by
default; an unweighted mean of member shares is available for sensitivity
analysis.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import IO, Iterable, Mapping

from .errors import UndefinedAggregateError
from .metrics import MetricsRow
from .util import format_fraction

POOLED = "pooled"
MEAN = "mean"
AGGREGATION_MODES = (POOLED, MEAN)


@dataclass(frozen=True)
class ClusterRow:
    """Aggregated shares for one cultural cluster."""

    cluster: str
    popularity_share: Fraction
    article_share: Fraction
    member_languages: tuple[str, ...]

    def __post_init__(self):
        if not self.member_languages:
            raise ValueError("cluster has no member languages")
        if not 0 <= self.popularity_share <= 1:
            raise ValueError(f"popularity share out of [0, 1]: {self.popularity_share}")
        if not 0 <= self.article_share <= 1:
            raise ValueError(f"article share out of [0, 1]: {self.article_share}")


def parse_cluster_map(source: Iterable[str]) -> dict[str, str]:
    """Parse a country,cluster CSV; each country maps to exactly one cluster."""
    reader = csv.DictReader(source)
    if reader.fieldnames is None:
        return {}
    for column in ("country", "cluster"):
        if column not in reader.fieldnames:
            raise ValueError(f"cluster map is missing column {column!r}")
    mapping: dict[str, str] = {}
    for row_number, row in enumerate(reader, start=2):
        country = (row["country"] or "").strip()
        cluster = (row["cluster"] or "").strip()
        if not country or not cluster:
            raise ValueError(f"cluster map row {row_number}: empty field")
        if country in mapping and mapping[country] != cluster:
            raise ValueError(f"cluster map row {row_number}: {country} mapped twice")
        mapping[country] = cluster
    return mapping


def load_cluster_map(path) -> dict[str, str]:
    with open(path, encoding="utf-8", newline="") as handle:
        return parse_cluster_map(handle)


def default_cluster_map() -> dict[str, str]:
    """The packaged country->cluster seed asset."""
    text = resources.files("wikicoverage").joinpath("data/cluster_map.csv").read_text("utf-8")
    return parse_cluster_map(text.splitlines())


def assign_clusters(
    rows: Iterable[MetricsRow], cluster_map: Mapping[str, str]
) -> tuple[dict[str, list[MetricsRow]], list[MetricsRow]]:
    """Partition rows by the cluster of their primary country.

    Rows whose primary country is not in the map come back in the second
    element so the caller can flag them; the run continues without them.
    """
    assignments: dict[str, list[MetricsRow]] = {}
    unassigned: list[MetricsRow] = []
    for row in rows:
        cluster = cluster_map.get(row.primary_country)
        if cluster is None:
            unassigned.append(row)
        else:
            assignments.setdefault(cluster, []).append(row)
    return assignments, unassigned


def aggregate_cluster(
    cluster: str, members: Iterable[MetricsRow], *, method: str = POOLED
) -> ClusterRow:
    """Aggregate one cluster's members into popularity and article shares.

    ``pooled`` divides summed numerators by summed denominators; ``mean``
    averages the member shares without weighting.
    """
    member_list = list(members)
    if not member_list:
        raise UndefinedAggregateError(f"cluster {cluster!r} has no members")
    if method not in AGGREGATION_MODES:
        raise ValueError(f"unknown aggregation method {method!r}")
    if method == POOLED:
        total_views = sum(m.total_views for m in member_list)
        total_articles = sum(m.article_count for m in member_list)
        if total_views == 0 or total_articles == 0:
            raise UndefinedAggregateError(f"cluster {cluster!r} has a zero pooled denominator")
        popularity = Fraction(sum(m.related_views for m in member_list), total_views)
        articles = Fraction(sum(m.related_article_count for m in member_list), total_articles)
    else:
        count = len(member_list)
        popularity = sum((m.ravs for m in member_list), Fraction(0)) / count
        articles = sum((m.ras for m in member_list), Fraction(0)) / count
    return ClusterRow(
        cluster=cluster,
        popularity_share=popularity,
        article_share=articles,
        member_languages=tuple(sorted(m.language for m in member_list)),
    )


def aggregate_all(
    assignments: Mapping[str, list[MetricsRow]], *, method: str = POOLED
) -> list[ClusterRow]:
    """One row per cluster, most popular first (ties by cluster name)."""
    rows = [
        aggregate_cluster(cluster, members, method=method)
        for cluster, members in assignments.items()
    ]
    rows.sort(key=lambda r: (-r.popularity_share, r.cluster))
    return rows


def write_clusters_tsv(rows: Iterable[ClusterRow], sink: IO[str]) -> None:
    sink.write("cluster\tpopularity_share\tarticle_share\tlanguages\n")
    for row in rows:
        sink.write(
            f"{row.cluster}\t{format_fraction(row.popularity_share)}"
            f"\t{format_fraction(row.article_share)}\t{','.join(row.member_languages)}\n"
        )

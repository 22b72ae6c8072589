"""Compact intermediate store for parsed entities.

Re-parsing dump JSON on every run defeats the two-pass pipeline, so parsed
entities are persisted in a small line-oriented format:

    WCM1
    count=<n> props=<comma-list> wikis=<comma-list or *>
    <QID>\\t<prop>:<QID|*>[,...][;...]\\t<wiki>=<title>[|...]

Records are sorted by item number.  Titles have ``%``, tab, pipe, CR and LF
percent-encoded; ``*`` in a value list stands for an opaque (non-entity) claim
value.  The header's keep-set lists fingerprint the parse configuration that
produced the store.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

from .entities import OPAQUE, ClaimValue, EntityId, SlimEntity
from .errors import (
    SlimStoreCorruptionError,
    SlimStoreVersionError,
    SlimStoreWriteError,
)

MAGIC = "WCM1"

_HEADER_RE = re.compile(r"count=(\d+) props=(\S*) wikis=(\S*)\Z")
_ESCAPE_RE = re.compile(r"[%\t|\n\r]")
_UNESCAPE_RE = re.compile(r"%(25|09|7C|0A|0D)")
_ESCAPES = {"%": "%25", "\t": "%09", "|": "%7C", "\n": "%0A", "\r": "%0D"}
_UNESCAPES = {"25": "%", "09": "\t", "7C": "|", "0A": "\n", "0D": "\r"}


def _escape_title(title: str) -> str:
    return _ESCAPE_RE.sub(lambda m: _ESCAPES[m.group(0)], title)


def _unescape_title(text: str) -> str:
    return _UNESCAPE_RE.sub(lambda m: _UNESCAPES[m.group(1)], text)


@dataclass(frozen=True)
class StoreHeader:
    count: int
    props: tuple[EntityId, ...]
    wikis: tuple[str, ...] | None  # None = unrestricted


def _value_token(value: ClaimValue) -> str:
    return str(value) if isinstance(value, EntityId) else "*"


def _record_line(entity: SlimEntity) -> str:
    claims = ";".join(
        f"{prop}:" + ",".join(_value_token(v) for v in values)
        for prop, values in sorted(entity.claims.items(), key=lambda kv: kv[0].number)
    )
    links = "|".join(
        f"{wiki}={_escape_title(title)}" for wiki, title in sorted(entity.sitelinks.items())
    )
    return f"{entity.id}\t{claims}\t{links}\n"


def write_slim_store(
    entities: Iterable[SlimEntity],
    sink: IO[str],
    *,
    keep_props: Iterable[EntityId] | None = None,
    keep_wikis: Iterable[str] | None = None,
) -> int:
    """Write entities (re-sorted by id number) to ``sink``; returns the count.

    The header's keep-set lists come from ``keep_props``/``keep_wikis`` when
    given, otherwise from the entities themselves (``wikis=*`` meaning
    unrestricted).  A failed write raises :class:`SlimStoreWriteError` with the
    number of records that made it out before the failure.
    """
    records = sorted(entities, key=lambda e: e.id.number)
    if keep_props is None:
        props = sorted({p for e in records for p in e.claims}, key=lambda p: p.number)
    else:
        props = sorted(set(keep_props), key=lambda p: p.number)
    wikis = "*" if keep_wikis is None else ",".join(sorted(set(keep_wikis)))
    header = f"count={len(records)} props={','.join(str(p) for p in props)} wikis={wikis}\n"

    written = 0
    try:
        sink.write(MAGIC + "\n")
        sink.write(header)
        for record in records:
            sink.write(_record_line(record))
            written += 1
    except OSError as exc:
        raise SlimStoreWriteError(
            f"write failed after {written} of {len(records)} records: {exc}",
            records_written=written,
        ) from exc
    return len(records)


def _parse_header(line: str) -> StoreHeader:
    match = _HEADER_RE.match(line)
    if match is None:
        raise SlimStoreCorruptionError(f"bad store header: {line!r}")
    count = int(match.group(1))
    props_field, wikis_field = match.group(2), match.group(3)
    props = tuple(EntityId.parse(tok) for tok in props_field.split(",") if tok)
    if wikis_field == "*":
        wikis = None
    else:
        wikis = tuple(tok for tok in wikis_field.split(",") if tok)
    return StoreHeader(count, props, wikis)


def _parse_record(line: str, line_number: int) -> SlimEntity:
    parts = line.split("\t")
    if len(parts) != 3:
        raise SlimStoreCorruptionError(
            f"line {line_number}: expected 3 tab-separated fields, got {len(parts)}"
        )
    id_field, claims_field, links_field = parts
    try:
        entity_id = EntityId.parse(id_field)
        claims: dict[EntityId, tuple[ClaimValue, ...]] = {}
        if claims_field:
            for group in claims_field.split(";"):
                prop_text, _, values_text = group.partition(":")
                prop = EntityId.parse(prop_text)
                values = tuple(
                    OPAQUE if tok == "*" else EntityId.parse(tok)
                    for tok in values_text.split(",")
                )
                claims[prop] = values
        sitelinks: dict[str, str] = {}
        if links_field:
            for pair in links_field.split("|"):
                wiki, sep, title = pair.partition("=")
                if not sep:
                    raise ValueError(f"bad sitelink field {pair!r}")
                sitelinks[wiki] = _unescape_title(title)
        return SlimEntity(entity_id, claims, sitelinks)
    except ValueError as exc:
        raise SlimStoreCorruptionError(f"line {line_number}: {exc}") from exc


def read_slim_store(source: Iterable[str]) -> Iterator[SlimEntity]:
    """Yield the stored records in stored order.

    Raises :class:`SlimStoreVersionError` for an unknown format version and
    :class:`SlimStoreCorruptionError` when the header count disagrees with the
    records actually present (checked once the stream is exhausted).
    """
    lines = iter(source)
    magic = next(lines, None)
    if magic is None:
        raise SlimStoreCorruptionError("empty store file")
    magic = magic.rstrip("\n")
    if magic != MAGIC:
        if re.match(r"WCM\d+\Z", magic):
            raise SlimStoreVersionError(f"unsupported store version {magic!r}")
        raise SlimStoreCorruptionError(f"bad magic {magic!r}")
    header_line = next(lines, None)
    if header_line is None:
        raise SlimStoreCorruptionError("store has no header line")
    header = _parse_header(header_line.rstrip("\n"))

    seen = 0
    for line_number, raw in enumerate(lines, start=3):
        line = raw.rstrip("\n")
        if not line:
            continue
        seen += 1
        if seen > header.count:
            raise SlimStoreCorruptionError(
                f"header says {header.count} records but more are present"
            )
        yield _parse_record(line, line_number)
    if seen != header.count:
        raise SlimStoreCorruptionError(
            f"header says {header.count} records but file has {seen}"
        )


def read_store_header(source: Iterable[str]) -> StoreHeader:
    """Read just the header of a store stream."""
    lines = iter(source)
    magic = next(lines, None)
    if magic is None or magic.rstrip("\n") != MAGIC:
        raise SlimStoreCorruptionError("missing store magic")
    header_line = next(lines, None)
    if header_line is None:
        raise SlimStoreCorruptionError("store has no header line")
    return _parse_header(header_line.rstrip("\n"))


def save_slim_store(entities: Iterable[SlimEntity], path: Path | str, **kwargs) -> int:
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        return write_slim_store(entities, sink, **kwargs)


def load_slim_store(path: Path | str) -> list[SlimEntity]:
    with open(path, encoding="utf-8") as source:
        return list(read_slim_store(source))

"""Streaming parser for Wikidata JSON entity dumps.

A dump is a single JSON array laid out one entity per line: the first line is
``[``, the last is ``]``, and every line in between holds one complete entity
object with an optional trailing comma.  The parser walks the stream line by
line, so memory use is bounded by the longest line rather than the file size.

Only item-kind entities survive.  Claims are projected down to a caller-chosen
keep-set of properties, sitelinks to a keep-set of wiki codes; everything else
is dropped on the spot.  Claim values that are not entity references become
:data:`~wikicoverage.entities.OPAQUE` markers, and deprecated-rank statements
are discarded entirely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .entities import ITEM, OPAQUE, ClaimValue, EntityId, SlimEntity
from .errors import DumpTruncatedError

_ENTITY_KINDS = ("item", "property")


@dataclass(frozen=True)
class ParseIssue:
    """One malformed dump line, kept for the caller's error tally."""

    line_number: int
    reason: str


def parse_dump_stream(
    stream: Iterable[str | bytes],
    keep_props: frozenset[EntityId] | set[EntityId],
    keep_wikis: set[str] | frozenset[str] | None = None,
    *,
    errors: list[ParseIssue] | None = None,
    require_terminator: bool = True,
) -> Iterator[SlimEntity]:
    """Yield one :class:`SlimEntity` per item entity, in file order.

    ``keep_props`` must be non-empty; claims outside it are dropped, as are
    sitelinks outside ``keep_wikis`` (``None`` keeps every sitelink).
    Malformed lines are appended to ``errors`` (if given) and skipped; the
    stream keeps going.  A dump that ends without its closing ``]`` raises
    :class:`DumpTruncatedError` unless ``require_terminator`` is false, which
    is the mode used to parse dump fragments split between lines.
    """
    if not keep_props:
        raise ValueError("keep_props must be non-empty")
    prop_by_key = {str(p): p for p in sorted(keep_props, key=lambda p: p.sort_key)}
    wiki_keys = None if keep_wikis is None else sorted(set(keep_wikis))

    saw_terminator = False
    last_line_number = 0
    pending_issue: ParseIssue | None = None

    for line_number, raw in enumerate(stream, start=1):
        if pending_issue is not None:
            if errors is not None:
                errors.append(pending_issue)
            pending_issue = None
        last_line_number = line_number
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError:
                pending_issue = ParseIssue(line_number, "invalid UTF-8")
                continue
        line = raw.strip()
        if not line or line == "[":
            continue
        if line == "]":
            saw_terminator = True
            continue
        if line.endswith(","):
            line = line[:-1]
        entity, reason = _parse_entity_line(line, prop_by_key, wiki_keys)
        if reason is not None:
            pending_issue = ParseIssue(line_number, reason)
        elif entity is not None:
            yield entity

    if require_terminator and not saw_terminator:
        detail = f": {pending_issue.reason}" if pending_issue is not None else ""
        raise DumpTruncatedError(
            f"dump ended at line {last_line_number} without closing ']'{detail}"
        )
    if pending_issue is not None and errors is not None:
        errors.append(pending_issue)


def _parse_entity_line(
    line: str,
    prop_by_key: dict[str, EntityId],
    wiki_keys: list[str] | None,
) -> tuple[SlimEntity | None, str | None]:
    """Parse one entity line; returns (entity, None), (None, reason) on a
    malformed line, or (None, None) for entities that are simply not items."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        return None, f"invalid JSON: {exc.msg}"
    if not isinstance(obj, dict):
        return None, "entity line is not a JSON object"
    kind = obj.get("type")
    if kind is None:
        return None, "entity has no type"
    if kind != ITEM:
        return None, None
    id_raw = obj.get("id")
    try:
        # fast path for the overwhelmingly common "Q<digits>" form
        if id_raw[0] == "Q" and id_raw[1] != "0" and id_raw[1:].isdigit():
            entity_id = EntityId(ITEM, int(id_raw[1:]))
        else:
            entity_id = EntityId.parse(id_raw)
            if not entity_id.is_item:
                return None, f"type/id mismatch for {entity_id}"
    except (TypeError, ValueError, IndexError):
        return None, f"bad entity id: {id_raw!r}"

    claims_obj = obj.get("claims")
    claims: dict[EntityId, tuple[ClaimValue, ...]] = {}
    if isinstance(claims_obj, dict):
        for key, prop in prop_by_key.items():
            statements = claims_obj.get(key)
            if not isinstance(statements, list):
                continue
            values = []
            for statement in statements:
                value = _claim_value(statement)
                if value is not None:
                    values.append(value)
            if values:
                claims[prop] = tuple(values)

    sitelinks_obj = obj.get("sitelinks")
    sitelinks: dict[str, str] = {}
    if isinstance(sitelinks_obj, dict):
        if wiki_keys is None:
            pairs = sorted(sitelinks_obj.items())
        else:
            pairs = [(wiki, sitelinks_obj.get(wiki)) for wiki in wiki_keys]
        for wiki, entry in pairs:
            if not isinstance(entry, dict):
                continue
            title = entry.get("title")
            if isinstance(title, str) and title:
                sitelinks[wiki] = title

    return SlimEntity(entity_id, claims, sitelinks), None


def _claim_value(statement) -> ClaimValue | None:
    """Extract one statement's value; None means the statement is dropped."""
    if not isinstance(statement, dict):
        return OPAQUE
    if statement.get("rank") == "deprecated":
        return None
    mainsnak = statement.get("mainsnak")
    if not isinstance(mainsnak, dict):
        return OPAQUE
    datavalue = mainsnak.get("datavalue")
    if not isinstance(datavalue, dict):
        return OPAQUE  # novalue / somevalue snaks carry no datavalue
    value = datavalue.get("value")
    if isinstance(value, dict):
        kind = value.get("entity-type")
        if kind in _ENTITY_KINDS:
            number = value.get("numeric-id")
            if type(number) is int and number >= 1:
                return EntityId(kind, number)
            if isinstance(value.get("id"), str):
                try:
                    return EntityId.parse(value["id"])
                except ValueError:
                    return OPAQUE
    return OPAQUE

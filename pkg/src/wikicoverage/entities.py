"""Identifier and minimal-entity types shared by the whole pipeline."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

ITEM = "item"
PROPERTY = "property"

_ID_RE = re.compile(r"([QP])([1-9][0-9]*)\Z")
_KIND_LETTER = {ITEM: "Q", PROPERTY: "P"}
_LETTER_KIND = {"Q": ITEM, "P": PROPERTY}


class EntityId(NamedTuple):
    """A Wikidata-style identifier such as ``Q42`` (item) or ``P17`` (property).

    The bare constructor is the trusted fast path used by the dump parser;
    external inputs should come through :meth:`parse`, :meth:`item` or
    :meth:`prop`, which validate.
    """

    kind: str
    number: int

    @staticmethod
    def _checked(kind: str, number: int) -> "EntityId":
        if kind not in _KIND_LETTER:
            raise ValueError(f"unknown entity kind: {kind!r}")
        if not isinstance(number, int) or isinstance(number, bool) or number < 1:
            raise ValueError(f"entity number must be a positive integer, got {number!r}")
        return EntityId(kind, number)

    @classmethod
    def parse(cls, text: str) -> "EntityId":
        """Parse ``Q42``/``P17``.  Round-trips with ``str()``."""
        if not isinstance(text, str):
            raise ValueError(f"not an entity id: {text!r}")
        match = _ID_RE.match(text)
        if match is None:
            raise ValueError(f"not an entity id: {text!r}")
        return cls(_LETTER_KIND[match.group(1)], int(match.group(2)))

    @classmethod
    def item(cls, number: int) -> "EntityId":
        return cls._checked(ITEM, number)

    @classmethod
    def prop(cls, number: int) -> "EntityId":
        return cls._checked(PROPERTY, number)

    @property
    def is_item(self) -> bool:
        return self.kind == ITEM

    @property
    def is_property(self) -> bool:
        return self.kind == PROPERTY

    @property
    def sort_key(self) -> tuple[int, int]:
        return (0 if self.kind == ITEM else 1, self.number)

    def __str__(self) -> str:
        return _KIND_LETTER[self.kind] + str(self.number)


class OpaqueValue:
    """Marker for a kept property's claim value that is not an entity reference.

    String, quantity, coordinate and no/some-value snaks are recorded as this
    single marker and never interpreted further.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other) -> bool:
        return isinstance(other, OpaqueValue)

    def __hash__(self) -> int:
        return hash(OpaqueValue)

    def __repr__(self) -> str:
        return "OPAQUE"


OPAQUE = OpaqueValue()

ClaimValue = EntityId | OpaqueValue


@dataclass(frozen=True, slots=True)
class SlimEntity:
    """The minimal projection of one dump item: id, kept claims, kept sitelinks.

    ``claims`` maps a property id to the ordered claim values that survived
    filtering; ``sitelinks`` maps a wiki code (``enwiki``) to the article title
    exactly as spelled in the dump.  Instances are treated as immutable and are
    safe to share between threads.
    """

    id: EntityId
    claims: dict[EntityId, tuple[ClaimValue, ...]] = field(default_factory=dict)
    sitelinks: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id.is_item:
            raise ValueError(f"entity id must be an item, got {self.id}")
        for prop, values in self.claims.items():
            if not prop.is_property:
                raise ValueError(f"claim key must be a property, got {prop}")
            if not values:
                raise ValueError(f"claim group {prop} is empty")
        for wiki, title in self.sitelinks.items():
            if not wiki:
                raise ValueError("sitelink wiki code is empty")
            if not title:
                raise ValueError(f"sitelink title for {wiki!r} is empty")

    def claim_values(self, prop: EntityId) -> tuple[ClaimValue, ...]:
        return self.claims.get(prop, ())

    def entity_values(self, prop: EntityId) -> tuple[EntityId, ...]:
        """Claim values of ``prop`` that are entity references, in claim order."""
        return tuple(v for v in self.claims.get(prop, ()) if isinstance(v, EntityId))

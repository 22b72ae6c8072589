import io
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wikicoverage.dump import ParseIssue, parse_dump_stream
from wikicoverage.entities import OPAQUE, SlimEntity
from wikicoverage.errors import DumpTruncatedError

from helpers import P, Q, dump_text, entity_json, statement

KEEP = frozenset({P(17), P(19), P(27), P(31), P(276), P(495)})


def parse(text, keep=KEEP, wikis=None, errors=None, **kwargs):
    return list(parse_dump_stream(io.StringIO(text), keep, wikis, errors=errors, **kwargs))


class TestBasicParsing:
    def test_single_entity_with_claim_and_sitelink(self):
        text = dump_text(
            [entity_json("Q22686", {"P27": [Q(30)]}, {"enwiki": "Donald Trump"})]
        )
        (entity,) = parse(text)
        assert entity == SlimEntity(
            Q(22686), {P(27): (Q(30),)}, {"enwiki": "Donald Trump"}
        )

    def test_empty_dump_yields_nothing(self):
        errors = []
        assert parse("[\n]\n", errors=errors) == []
        assert errors == []

    def test_malformed_middle_line_is_tallied_and_skipped(self):
        text = dump_text(
            [
                entity_json("Q1", {"P17": [Q(30)]}),
                '{"type": "item", "id": "Q2", broken',
                entity_json("Q3", {"P17": [Q(183)]}),
            ]
        )
        errors = []
        entities = parse(text, errors=errors)
        assert [e.id for e in entities] == [Q(1), Q(3)]
        assert len(errors) == 1
        assert errors[0].line_number == 3
        assert "JSON" in errors[0].reason

    def test_property_entities_are_dropped_silently(self):
        text = dump_text(
            [
                entity_json("P17", entity_type="property"),
                entity_json("Q5", {"P17": [Q(30)]}),
            ]
        )
        errors = []
        entities = parse(text, errors=errors)
        assert [e.id for e in entities] == [Q(5)]
        assert errors == []

    def test_keep_props_must_be_non_empty(self):
        with pytest.raises(ValueError):
            parse("[\n]\n", keep=frozenset())

    def test_file_order_is_preserved(self):
        text = dump_text([entity_json(f"Q{n}") for n in (9, 2, 7, 4)])
        assert [e.id.number for e in parse(text)] == [9, 2, 7, 4]


class TestFiltering:
    def test_non_kept_claims_are_dropped(self):
        text = dump_text([entity_json("Q1", {"P17": [Q(30)], "P131": [Q(99)]})])
        (entity,) = parse(text)
        assert set(entity.claims) == {P(17)}

    def test_non_kept_sitelinks_are_dropped(self):
        text = dump_text(
            [entity_json("Q1", sitelinks={"enwiki": "A", "dewiki": "B", "enwikiquote": "C"})]
        )
        (entity,) = parse(text, wikis={"enwiki"})
        assert entity.sitelinks == {"enwiki": "A"}

    def test_none_keeps_all_sitelinks(self):
        text = dump_text([entity_json("Q1", sitelinks={"enwiki": "A", "dewiki": "B"})])
        (entity,) = parse(text)
        assert entity.sitelinks == {"enwiki": "A", "dewiki": "B"}

    def test_deprecated_rank_claims_are_dropped(self):
        text = dump_text(
            [
                entity_json(
                    "Q1",
                    {"P17": [statement(Q(30), rank="deprecated"), statement(Q(183))]},
                )
            ]
        )
        (entity,) = parse(text)
        assert entity.claims[P(17)] == (Q(183),)

    def test_non_entity_values_become_opaque(self):
        text = dump_text([entity_json("Q1", {"P17": ["just a string", Q(30)]})])
        (entity,) = parse(text)
        assert entity.claims[P(17)] == (OPAQUE, Q(30))

    def test_novalue_snak_becomes_opaque(self):
        stmt = {"mainsnak": {"snaktype": "novalue"}, "rank": "normal"}
        text = dump_text([entity_json("Q1", {"P17": [stmt]})])
        (entity,) = parse(text)
        assert entity.claims[P(17)] == (OPAQUE,)

    def test_empty_title_sitelink_is_skipped(self):
        obj = {"type": "item", "id": "Q1", "sitelinks": {"enwiki": {"title": ""}}}
        (entity,) = parse(dump_text([obj]))
        assert entity.sitelinks == {}


class TestTruncation:
    def test_missing_terminator_raises(self):
        text = "[\n" + json.dumps(entity_json("Q1")) + "\n"
        with pytest.raises(DumpTruncatedError):
            parse(text)

    def test_truncated_final_line_raises(self):
        text = "[\n" + json.dumps(entity_json("Q1")) + ",\n" + '{"type": "item", "id": "Q2'
        with pytest.raises(DumpTruncatedError):
            parse(text)

    def test_truncated_final_line_not_double_counted(self):
        text = "[\n" + '{"type": "item"'
        errors = []
        with pytest.raises(DumpTruncatedError):
            parse(text, errors=errors)
        assert errors == []

    def test_fragment_mode_allows_missing_brackets(self):
        fragment = json.dumps(entity_json("Q1", {"P17": [Q(30)]})) + ",\n"
        entities = parse(fragment, require_terminator=False)
        assert [e.id for e in entities] == [Q(1)]


class TestChunkBoundaryInvariance:
    def fixture_text(self):
        objects = [
            entity_json(f"Q{n}", {"P17": [Q(30 + n % 3)]}, {"enwiki": f"Article {n}"})
            for n in range(1, 11)
        ]
        objects.insert(4, "this line is broken {")
        return dump_text(objects)

    def test_every_line_boundary_split_matches_one_pass(self):
        text = self.fixture_text()
        one_pass = parse(text)
        lines = text.splitlines(keepends=True)
        for cut in range(1, len(lines)):
            head = "".join(lines[:cut])
            tail = "".join(lines[cut:])
            pieces = parse(head, require_terminator=False) + parse(
                tail, require_terminator=False
            )
            assert pieces == one_pass, f"split at line {cut} diverged"

    def test_three_way_split_matches_one_pass(self):
        text = self.fixture_text()
        lines = text.splitlines(keepends=True)
        rng = random.Random(7)
        for _ in range(10):
            a, b = sorted(rng.sample(range(1, len(lines)), 2))
            pieces = []
            for chunk in ("".join(lines[:a]), "".join(lines[a:b]), "".join(lines[b:])):
                pieces.extend(parse(chunk, require_terminator=False))
            assert pieces == parse(text)


class TestErrorIsolation:
    @given(
        valid=st.integers(min_value=0, max_value=12),
        malformed=st.integers(min_value=0, max_value=6),
        seed=st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=60)
    def test_counts_are_exact(self, valid, malformed, seed):
        rng = random.Random(seed)
        objects: list = [entity_json(f"Q{n + 1}", {"P17": [Q(30)]}) for n in range(valid)]
        for _ in range(malformed):
            objects.insert(rng.randint(0, len(objects)), '{"oops": ')
        errors = []
        entities = parse(dump_text(objects), errors=errors)
        assert len(entities) == valid
        assert len(errors) == malformed


class TestFilteringSoundness:
    @given(
        keep_mask=st.lists(st.booleans(), min_size=6, max_size=6),
        wiki_mask=st.lists(st.booleans(), min_size=3, max_size=3),
        seed=st.integers(min_value=0, max_value=2**31),
    )
    @settings(max_examples=40)
    def test_output_never_leaks_unkept_keys(self, keep_mask, wiki_mask, seed):
        all_props = [P(17), P(19), P(27), P(31), P(276), P(495)]
        all_wikis = ["enwiki", "dewiki", "frwiki"]
        keep = frozenset(p for p, m in zip(all_props, keep_mask) if m) or frozenset({P(17)})
        wikis = {w for w, m in zip(all_wikis, wiki_mask) if m}
        rng = random.Random(seed)
        objects = []
        for n in range(1, 8):
            claims = {
                str(p): [Q(rng.randint(1, 99))]
                for p in rng.sample(all_props, rng.randint(0, 6))
            }
            sitelinks = {
                w: f"T{n}" for w in rng.sample(all_wikis, rng.randint(0, 3))
            }
            objects.append(entity_json(f"Q{n}", claims, sitelinks))
        for entity in parse(dump_text(objects), keep=keep, wikis=wikis):
            assert set(entity.claims) <= keep
            assert set(entity.sitelinks) <= wikis


class TestByteInput:
    def test_bytes_lines_are_decoded(self):
        text = dump_text([entity_json("Q1", sitelinks={"enwiki": "Café"})])
        stream = io.BytesIO(text.encode("utf-8"))
        (entity,) = list(parse_dump_stream(stream, KEEP))
        assert entity.sitelinks["enwiki"] == "Café"

    def test_invalid_utf8_line_is_tallied(self):
        good = json.dumps(entity_json("Q1")).encode("utf-8")
        lines = [b"[\n", b"\xff\xfe broken,\n", good + b"\n", b"]\n"]
        errors = []
        entities = list(parse_dump_stream(iter(lines), KEEP, errors=errors))
        assert [e.id for e in entities] == [Q(1)]
        assert len(errors) == 1 and errors[0].reason == "invalid UTF-8"


def test_parse_issue_is_frozen_record():
    issue = ParseIssue(3, "invalid JSON")
    assert issue.line_number == 3
    with pytest.raises(AttributeError):
        issue.line_number = 4

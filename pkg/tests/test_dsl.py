import dataclasses
import json
from pathlib import Path

import pytest

from rulegrid.dsl import (
    parse_definition,
    serialize_definition,
    validate_definition,
)
from rulegrid.errors import (
    E_CYCLE,
    E_OUT_OF_BOUNDS,
    E_PARSE,
    E_PLAYER_BOUNDS,
    E_REGION_TILING,
    E_SEMANTICS,
    E_UNKNOWN_ACTION,
    E_UNKNOWN_CONDITION,
)
from rulegrid.games import corpus_dir, tictactoe_definition
from rulegrid.model import Coord, TERMINATED, TilesPattern

from helpers import random_playthrough

FIXTURES = Path(__file__).parent / "fixtures"


def codes(diags):
    return sorted({d.code for d in diags})


class TestParse:
    def test_corpus_file_equals_generator_output(self):
        text = (corpus_dir() / "ttt-3x3.game.json").read_text()
        definition, diags = parse_definition(text)
        assert diags == []
        assert definition == tictactoe_definition(3, 3, 3, 2, name="ttt-3x3")

    def test_syntax_error(self):
        definition, diags = parse_definition("{")
        assert definition is None
        assert codes(diags) == [E_PARSE]
        assert "line 1" in diags[0].location

    def test_unknown_condition_kind(self, ttt3):
        doc = json.loads(serialize_definition(ttt3))
        doc["rules"][0]["conditions"][0] = {"kind": "IsWizard"}
        definition, diags = parse_definition(json.dumps(doc))
        assert definition is None
        assert codes(diags) == [E_UNKNOWN_CONDITION]
        assert diags[0].location == "rules[0].conditions[0].kind"

    def test_unknown_action_kind(self, ttt3):
        doc = json.loads(serialize_definition(ttt3))
        doc["rules"][0]["actions"][0] = {"kind": "summon_dragon"}
        _, diags = parse_definition(json.dumps(doc))
        assert codes(diags) == [E_UNKNOWN_ACTION]

    def test_unknown_field_rejected(self, ttt3):
        doc = json.loads(serialize_definition(ttt3))
        doc["flavour"] = "vanilla"
        definition, diags = parse_definition(json.dumps(doc))
        assert definition is None
        assert codes(diags) == [E_SEMANTICS]
        assert "flavour" in diags[0].message

    def test_missing_field_rejected(self, ttt3):
        doc = json.loads(serialize_definition(ttt3))
        del doc["rows"]
        _, diags = parse_definition(json.dumps(doc))
        assert codes(diags) == [E_SEMANTICS]

    def test_non_integer_dimension_rejected(self, ttt3):
        doc = json.loads(serialize_definition(ttt3))
        doc["rows"] = "three"
        _, diags = parse_definition(json.dumps(doc))
        assert codes(diags) == [E_SEMANTICS]


class TestValidate:
    def test_builtin_corpus_is_clean(self, corpus):
        for name, definition in corpus.items():
            assert validate_definition(definition) == [], name

    def test_out_of_bounds_win_pattern(self, ttt3):
        bad = dataclasses.replace(
            ttt3, win_pattern=TilesPattern(groups=((Coord(9, 9),),)))
        assert codes(validate_definition(bad)) == [E_OUT_OF_BOUNDS]

    def test_region_area_mismatch(self, corpus):
        sudoku = corpus["sudoku-4x4-empty"]
        bad = dataclasses.replace(sudoku, region_rows=2, region_cols=3)
        assert codes(validate_definition(bad)) == [E_REGION_TILING]

    def test_player_bounds(self, ttt3):
        bad = dataclasses.replace(ttt3, min_players=0)
        assert E_PLAYER_BOUNDS in codes(validate_definition(bad))

    def test_ownership_domain_must_match_players(self, ttt3):
        bad = dataclasses.replace(ttt3, value_domain=(1, 7))
        assert E_SEMANTICS in codes(validate_definition(bad))

    def test_inconsistent_givens(self, corpus):
        sudoku = corpus["sudoku-4x4-empty"]
        givens = ((1, 0, 0, 1), (0,) * 4, (0,) * 4, (0,) * 4)  # two 1s in a row
        bad = dataclasses.replace(sudoku, givens=givens)
        diags = validate_definition(bad)
        assert any("rows" in d.message for d in diags)

    def test_negative_fixtures_exact_codes(self):
        expected = {
            "bad-cycle.game.json": [E_CYCLE],
            "bad-bounds.game.json": [E_OUT_OF_BOUNDS],
            "bad-region.game.json": [E_REGION_TILING],
        }
        for filename, want in expected.items():
            _, diags = parse_definition((FIXTURES / filename).read_text())
            assert codes(diags) == want, filename


class TestRoundTrip:
    def test_parse_serialize_identity(self, corpus):
        for name, definition in corpus.items():
            text = serialize_definition(definition)
            parsed, diags = parse_definition(text)
            assert diags == [] and parsed == definition, name

    def test_serialize_is_a_byte_fixpoint(self, corpus):
        for name, definition in corpus.items():
            once = serialize_definition(definition)
            parsed, _ = parse_definition(once)
            assert serialize_definition(parsed) == once, name

    def test_equal_definitions_serialize_identically(self):
        a = tictactoe_definition(3, 3, 3, 2, name="ttt-3x3")
        b = tictactoe_definition(3, 3, 3, 2, name="ttt-3x3")
        assert serialize_definition(a) == serialize_definition(b)

    def test_shipped_files_are_canonical(self, corpus):
        for path in sorted(corpus_dir().glob("*.game.json")):
            text = path.read_text()
            parsed, diags = parse_definition(text)
            assert diags == [], path.name
            assert serialize_definition(parsed) == text, path.name
            assert parsed == corpus[path.stem.replace(".game", "")], path.name


class TestSoundness:
    @pytest.mark.parametrize("seed", range(6))
    def test_clean_definitions_play_without_engine_errors(self, corpus, seed):
        # Anything the validator passes must run to termination (or a stuck
        # position) without raising, over random legal play.
        for name, definition in corpus.items():
            if definition.rows > 4:
                continue  # keep the sweep quick; 9x9 legal-move scans are slow
            states = random_playthrough(definition, seed)
            assert states[-1].state in ("started", TERMINATED, "not_started")

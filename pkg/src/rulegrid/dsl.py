"""The textual game-definition format: parse, validate, serialize.

A definition file is a single JSON object (UTF-8, extension ``.game.json``)
describing board, players, turn policy, win pattern, and the rule list. The
serializer emits a canonical form (sorted keys, 2-space indent, trailing
newline) so equal definitions are byte-identical, which golden tests rely on.

Unknown fields are rejected rather than ignored: definitions are written by
hand, and a misspelled key silently doing nothing is the worst failure mode.
"""

from __future__ import annotations

import json
from pathlib import Path

from .engine import groups_all_distinct, validate_rule_graph
from .errors import (
    Diagnostic,
    E_OUT_OF_BOUNDS,
    E_PARSE,
    E_PLAYER_BOUNDS,
    E_REGION_TILING,
    E_SEMANTICS,
    E_UNKNOWN_ACTION,
    E_UNKNOWN_CONDITION,
    InvalidDefinition,
)
from .model import (
    ACT_SEND_MESSAGE,
    ACT_SET_TILE_TO_CURRENT_PLAYER,
    ACT_SET_TILE_TO_EVENT_VALUE,
    ACT_SET_WINNER_MATCHED,
    ACTION_KINDS,
    COND_GAME_TYPE_IS,
    COND_GROUPS_ALL_DISTINCT,
    COND_LEGAL_SYMBOL_PLACEMENT,
    COND_PATTERN_OWNED,
    COND_STATE_IS,
    CONDITION_KINDS,
    EVENT_KINDS,
    FAMILY_ORDER,
    GROUP_FAMILIES,
    OWNERSHIP,
    SEMANTICS,
    STATES,
    SYMBOLS,
    TURN_POLICIES,
    Action,
    CompositePattern,
    Condition,
    Coord,
    GameDefinition,
    LinesPattern,
    Pattern,
    Rule,
    TilesPattern,
    initial_board,
)

FILE_SUFFIX = ".game.json"


# ---------------------------------------------------------------------------
# Encoding


def pattern_doc(p: Pattern | None):
    if p is None:
        return None
    if isinstance(p, TilesPattern):
        return {"tiles": [[[c.row, c.col] for c in group] for group in p.groups]}
    if isinstance(p, LinesPattern):
        families = [f for f in FAMILY_ORDER if f in p.families]
        return {"lines": {"len": p.line_len, "families": families}}
    if isinstance(p, CompositePattern):
        return {"composite": [pattern_doc(part) for part in p.parts]}
    raise TypeError(f"not a pattern: {p!r}")


def condition_doc(c: Condition) -> dict:
    doc = {"kind": c.kind}
    if c.kind == COND_GAME_TYPE_IS:
        doc["name"] = c.name
    elif c.kind == COND_STATE_IS:
        doc["state"] = c.state
    elif c.kind == COND_PATTERN_OWNED:
        doc["pattern"] = pattern_doc(c.pattern)
    elif c.kind == COND_GROUPS_ALL_DISTINCT:
        doc["groups"] = c.groups
    return doc


def action_doc(a: Action) -> dict:
    doc = {"kind": a.kind}
    if a.kind == ACT_SEND_MESSAGE:
        doc["text"] = a.text or ""
    return doc


def rule_doc(r: Rule) -> dict:
    return {
        "name": r.name,
        "on": r.on,
        "conditions": [condition_doc(c) for c in r.conditions],
        "actions": [action_doc(a) for a in r.actions],
        "components": list(r.components),
    }


def definition_doc(d: GameDefinition) -> dict:
    doc = {
        "name": d.name,
        "rows": d.rows,
        "cols": d.cols,
        "semantics": d.semantics,
        "value_domain": {"lo": d.value_domain[0], "hi": d.value_domain[1]},
        "min_players": d.min_players,
        "max_players": d.max_players,
        "turn_policy": d.turn_policy,
        "rules": [rule_doc(r) for r in d.rules],
    }
    if d.win_pattern is not None:
        doc["win_pattern"] = pattern_doc(d.win_pattern)
    if d.givens is not None:
        doc["givens"] = [list(row) for row in d.givens]
    if d.region_rows is not None or d.region_cols is not None:
        doc["region"] = {"rows": d.region_rows, "cols": d.region_cols}
    return doc


def serialize_definition(d: GameDefinition) -> str:
    """Canonical text form; equal definitions serialize byte-identically."""
    return json.dumps(definition_doc(d), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Decoding. Each helper appends diagnostics with a document path and returns
# None on failure; decoding is strict about both types and key sets.


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


class _Decoder:
    def __init__(self):
        self.diags: list[Diagnostic] = []

    def fail(self, code: str, message: str, path: str) -> None:
        self.diags.append(Diagnostic(code=code, message=message, location=path))

    def obj(self, v, path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()):
        if not isinstance(v, dict):
            self.fail(E_SEMANTICS, "expected a JSON object", path)
            return None
        for key in v:
            if key not in required and key not in optional:
                self.fail(E_SEMANTICS, f"unknown field {key!r}", f"{path}.{key}" if path else key)
        missing = [k for k in required if k not in v]
        for key in missing:
            self.fail(E_SEMANTICS, f"missing field {key!r}", f"{path}.{key}" if path else key)
        return None if missing else v

    def int_at(self, v, path: str):
        if not _is_int(v):
            self.fail(E_SEMANTICS, "expected an integer", path)
            return None
        return v

    def str_at(self, v, path: str):
        if not isinstance(v, str):
            self.fail(E_SEMANTICS, "expected a string", path)
            return None
        return v

    def coord(self, v, path: str):
        if (not isinstance(v, list) or len(v) != 2
                or not _is_int(v[0]) or not _is_int(v[1])):
            self.fail(E_SEMANTICS, "expected a [row, col] pair", path)
            return None
        return Coord(v[0], v[1])

    def pattern(self, v, path: str):
        if not isinstance(v, dict) or len(v) != 1:
            self.fail(E_SEMANTICS,
                      "expected an object with exactly one of: tiles, lines, composite", path)
            return None
        key, body = next(iter(v.items()))
        if key == "tiles":
            if not isinstance(body, list):
                self.fail(E_SEMANTICS, "tiles must be a list of coordinate lists", f"{path}.tiles")
                return None
            groups = []
            for i, group in enumerate(body):
                if not isinstance(group, list):
                    self.fail(E_SEMANTICS, "expected a coordinate list", f"{path}.tiles[{i}]")
                    return None
                coords = [self.coord(c, f"{path}.tiles[{i}][{j}]") for j, c in enumerate(group)]
                if any(c is None for c in coords):
                    return None
                groups.append(tuple(coords))
            return TilesPattern(groups=tuple(groups))
        if key == "lines":
            body = self.obj(body, f"{path}.lines", ("len", "families"))
            if body is None:
                return None
            length = self.int_at(body["len"], f"{path}.lines.len")
            fams = body["families"]
            if not isinstance(fams, list) or not all(isinstance(f, str) for f in fams):
                self.fail(E_SEMANTICS, "families must be a list of strings", f"{path}.lines.families")
                return None
            bad = [f for f in fams if f not in FAMILY_ORDER]
            for f in bad:
                self.fail(E_SEMANTICS, f"unknown line family {f!r}", f"{path}.lines.families")
            if length is None or bad:
                return None
            return LinesPattern(line_len=length, families=frozenset(fams))
        if key == "composite":
            if not isinstance(body, list):
                self.fail(E_SEMANTICS, "composite must be a list of patterns", f"{path}.composite")
                return None
            parts = [self.pattern(p, f"{path}.composite[{i}]") for i, p in enumerate(body)]
            if any(p is None for p in parts):
                return None
            return CompositePattern(parts=tuple(parts))
        self.fail(E_SEMANTICS, f"unknown pattern kind {key!r}", path)
        return None

    def condition(self, v, path: str):
        if not isinstance(v, dict) or "kind" not in v:
            self.fail(E_SEMANTICS, "expected a condition object with a 'kind'", path)
            return None
        kind = v["kind"]
        if kind not in CONDITION_KINDS:
            self.fail(E_UNKNOWN_CONDITION, f"unknown condition kind {kind!r}", f"{path}.kind")
            return None
        if kind == COND_GAME_TYPE_IS:
            v = self.obj(v, path, ("kind", "name"))
            if v is None:
                return None
            name = self.str_at(v["name"], f"{path}.name")
            return None if name is None else Condition(kind=kind, name=name)
        if kind == COND_STATE_IS:
            v = self.obj(v, path, ("kind", "state"))
            if v is None:
                return None
            state = self.str_at(v["state"], f"{path}.state")
            return None if state is None else Condition(kind=kind, state=state)
        if kind == COND_PATTERN_OWNED:
            v = self.obj(v, path, ("kind", "pattern"))
            if v is None:
                return None
            if v["pattern"] is None:
                return Condition(kind=kind, pattern=None)
            pattern = self.pattern(v["pattern"], f"{path}.pattern")
            return None if pattern is None else Condition(kind=kind, pattern=pattern)
        if kind == COND_GROUPS_ALL_DISTINCT:
            v = self.obj(v, path, ("kind", "groups"))
            if v is None:
                return None
            groups = self.str_at(v["groups"], f"{path}.groups")
            return None if groups is None else Condition(kind=kind, groups=groups)
        v = self.obj(v, path, ("kind",))
        return None if v is None else Condition(kind=kind)

    def action(self, v, path: str):
        if not isinstance(v, dict) or "kind" not in v:
            self.fail(E_SEMANTICS, "expected an action object with a 'kind'", path)
            return None
        kind = v["kind"]
        if kind not in ACTION_KINDS:
            self.fail(E_UNKNOWN_ACTION, f"unknown action kind {kind!r}", f"{path}.kind")
            return None
        if kind == ACT_SEND_MESSAGE:
            v = self.obj(v, path, ("kind", "text"))
            if v is None:
                return None
            text = self.str_at(v["text"], f"{path}.text")
            return None if text is None else Action(kind=kind, text=text)
        v = self.obj(v, path, ("kind",))
        return None if v is None else Action(kind=kind)

    def rule(self, v, path: str):
        v = self.obj(v, path, ("name", "on", "conditions", "actions", "components"))
        if v is None:
            return None
        name = self.str_at(v["name"], f"{path}.name")
        on = v["on"]
        if on is not None and not isinstance(on, str):
            self.fail(E_SEMANTICS, "'on' must be an event kind or null", f"{path}.on")
            return None
        ok = True
        conditions = []
        if not isinstance(v["conditions"], list):
            self.fail(E_SEMANTICS, "conditions must be a list", f"{path}.conditions")
            ok = False
        else:
            for i, c in enumerate(v["conditions"]):
                cond = self.condition(c, f"{path}.conditions[{i}]")
                ok = ok and cond is not None
                conditions.append(cond)
        actions = []
        if not isinstance(v["actions"], list):
            self.fail(E_SEMANTICS, "actions must be a list", f"{path}.actions")
            ok = False
        else:
            for i, a in enumerate(v["actions"]):
                act = self.action(a, f"{path}.actions[{i}]")
                ok = ok and act is not None
                actions.append(act)
        components = v["components"]
        if not isinstance(components, list) or not all(isinstance(n, str) for n in components):
            self.fail(E_SEMANTICS, "components must be a list of rule names", f"{path}.components")
            ok = False
        if name is None or not ok:
            return None
        return Rule(
            name=name,
            on=on,
            conditions=tuple(conditions),
            actions=tuple(actions),
            components=tuple(components),
        )

    def definition(self, doc) -> GameDefinition | None:
        doc = self.obj(
            doc, "",
            required=("name", "rows", "cols", "semantics", "value_domain",
                      "min_players", "max_players", "turn_policy", "rules"),
            optional=("win_pattern", "givens", "region"),
        )
        if doc is None:
            return None
        name = self.str_at(doc["name"], "name")
        rows = self.int_at(doc["rows"], "rows")
        cols = self.int_at(doc["cols"], "cols")
        semantics = self.str_at(doc["semantics"], "semantics")
        turn_policy = self.str_at(doc["turn_policy"], "turn_policy")
        min_players = self.int_at(doc["min_players"], "min_players")
        max_players = self.int_at(doc["max_players"], "max_players")

        domain = None
        dom = self.obj(doc["value_domain"], "value_domain", ("lo", "hi"))
        if dom is not None:
            lo = self.int_at(dom["lo"], "value_domain.lo")
            hi = self.int_at(dom["hi"], "value_domain.hi")
            if lo is not None and hi is not None:
                domain = (lo, hi)

        win_pattern = None
        if "win_pattern" in doc and doc["win_pattern"] is not None:
            win_pattern = self.pattern(doc["win_pattern"], "win_pattern")
            if win_pattern is None:
                return None

        rules = []
        if not isinstance(doc["rules"], list):
            self.fail(E_SEMANTICS, "rules must be a list", "rules")
            return None
        for i, r in enumerate(doc["rules"]):
            rule = self.rule(r, f"rules[{i}]")
            if rule is None:
                return None
            rules.append(rule)

        givens = None
        if "givens" in doc and doc["givens"] is not None:
            raw = doc["givens"]
            if not isinstance(raw, list) or not all(isinstance(row, list) for row in raw):
                self.fail(E_SEMANTICS, "givens must be a grid (list of rows)", "givens")
                return None
            grid = []
            for i, row in enumerate(raw):
                vals = [self.int_at(v, f"givens[{i}][{j}]") for j, v in enumerate(row)]
                if any(v is None for v in vals):
                    return None
                grid.append(tuple(vals))
            givens = tuple(grid)

        region_rows = region_cols = None
        if "region" in doc and doc["region"] is not None:
            reg = self.obj(doc["region"], "region", ("rows", "cols"))
            if reg is None:
                return None
            region_rows = self.int_at(reg["rows"], "region.rows")
            region_cols = self.int_at(reg["cols"], "region.cols")

        if self.diags:
            return None
        return GameDefinition(
            name=name,
            rows=rows,
            cols=cols,
            semantics=semantics,
            value_domain=domain,
            min_players=min_players,
            max_players=max_players,
            turn_policy=turn_policy,
            win_pattern=win_pattern,
            rules=tuple(rules),
            givens=givens,
            region_rows=region_rows,
            region_cols=region_cols,
        )


def definition_from_doc(doc) -> tuple[GameDefinition | None, list[Diagnostic]]:
    """Decode and validate an already-parsed JSON document."""
    decoder = _Decoder()
    definition = decoder.definition(doc)
    if decoder.diags:
        return None, decoder.diags
    diags = validate_definition(definition)
    if diags:
        return None, diags
    return definition, []


def parse_definition(text: str) -> tuple[GameDefinition | None, list[Diagnostic]]:
    """Parse definition text; returns the definition or the full diagnostic list."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [Diagnostic(
            code=E_PARSE,
            message=exc.msg,
            location=f"line {exc.lineno} col {exc.colno}",
        )]
    return definition_from_doc(doc)


def load_definition(path: str | Path) -> GameDefinition:
    """Read and parse a definition file; raises InvalidDefinition on any problem."""
    text = Path(path).read_text(encoding="utf-8")
    definition, diags = parse_definition(text)
    if definition is None:
        raise InvalidDefinition(diags)
    return definition


# ---------------------------------------------------------------------------
# Validation


def _pattern_problems(p: Pattern, rows: int, cols: int, path: str) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    if isinstance(p, TilesPattern):
        for i, group in enumerate(p.groups):
            for j, c in enumerate(group):
                if not (0 <= c.row < rows and 0 <= c.col < cols):
                    diags.append(Diagnostic(
                        code=E_OUT_OF_BOUNDS,
                        message=f"coordinate ({c.row},{c.col}) outside {rows}x{cols} board",
                        location=f"{path}.tiles[{i}][{j}]",
                    ))
    elif isinstance(p, LinesPattern):
        if p.line_len < 1:
            diags.append(Diagnostic(
                code=E_SEMANTICS, message="line length must be >= 1",
                location=f"{path}.lines.len",
            ))
        for f in p.families:
            if f not in FAMILY_ORDER:
                diags.append(Diagnostic(
                    code=E_SEMANTICS, message=f"unknown line family {f!r}",
                    location=f"{path}.lines.families",
                ))
    elif isinstance(p, CompositePattern):
        for i, part in enumerate(p.parts):
            diags.extend(_pattern_problems(part, rows, cols, f"{path}.composite[{i}]"))
    else:
        diags.append(Diagnostic(code=E_SEMANTICS, message="not a pattern", location=path))
    return diags


def validate_definition(d: GameDefinition) -> list[Diagnostic]:
    """Every problem that would break play later, reported as data."""
    diags: list[Diagnostic] = []

    def fail(code: str, message: str, location: str) -> None:
        diags.append(Diagnostic(code=code, message=message, location=location))

    if not d.name:
        fail(E_SEMANTICS, "name must be non-empty", "name")
    if d.rows < 1:
        fail(E_SEMANTICS, "rows must be >= 1", "rows")
    if d.cols < 1:
        fail(E_SEMANTICS, "cols must be >= 1", "cols")
    if d.semantics not in SEMANTICS:
        fail(E_SEMANTICS, f"semantics must be one of {SEMANTICS}", "semantics")
    if d.turn_policy not in TURN_POLICIES:
        fail(E_SEMANTICS, f"turn_policy must be one of {TURN_POLICIES}", "turn_policy")

    lo, hi = d.value_domain
    if lo < 1:
        fail(E_SEMANTICS, "value domain must start at 1 or above (0 is the empty cell)",
             "value_domain.lo")
    if lo > hi:
        fail(E_SEMANTICS, "value domain is empty", "value_domain")

    if d.min_players < 1 or d.min_players > d.max_players:
        fail(E_PLAYER_BOUNDS,
             f"need 1 <= min_players <= max_players, got {d.min_players}..{d.max_players}",
             "min_players")

    if d.semantics == OWNERSHIP:
        if d.value_domain != (1, d.max_players):
            fail(E_SEMANTICS,
                 "ownership games encode owners as cell values: value_domain must be "
                 f"[1, max_players], got [{lo}, {hi}] with max_players {d.max_players}",
                 "value_domain")
        if d.win_pattern is None:
            fail(E_SEMANTICS, "ownership games need a win_pattern", "win_pattern")
        if d.givens is not None:
            fail(E_SEMANTICS, "givens only apply to symbols games", "givens")
        if d.region_rows is not None or d.region_cols is not None:
            fail(E_SEMANTICS, "regions only apply to symbols games", "region")
    elif d.semantics == SYMBOLS:
        if d.win_pattern is not None:
            fail(E_SEMANTICS, "symbols games terminate by completion, not by win_pattern",
                 "win_pattern")

    has_regions = d.region_rows is not None and d.region_cols is not None
    if (d.region_rows is None) != (d.region_cols is None):
        fail(E_SEMANTICS, "region rows and cols must be set together", "region")
    elif has_regions:
        if d.region_rows < 1 or d.region_cols < 1:
            fail(E_SEMANTICS, "region dimensions must be >= 1", "region")
        else:
            domain_size = hi - lo + 1
            if d.region_rows * d.region_cols != domain_size:
                fail(E_REGION_TILING,
                     f"region area {d.region_rows}x{d.region_cols} != "
                     f"value-domain size {domain_size}", "region")
            elif d.rows % d.region_rows != 0 or d.cols % d.region_cols != 0:
                fail(E_REGION_TILING,
                     f"{d.region_rows}x{d.region_cols} regions do not tile a "
                     f"{d.rows}x{d.cols} board", "region")

    if d.win_pattern is not None:
        diags.extend(_pattern_problems(d.win_pattern, d.rows, d.cols, "win_pattern"))

    if d.givens is not None:
        if len(d.givens) != d.rows or any(len(row) != d.cols for row in d.givens):
            fail(E_SEMANTICS, f"givens grid must be {d.rows}x{d.cols}", "givens")
        else:
            for i, row in enumerate(d.givens):
                for j, v in enumerate(row):
                    if v != 0 and not (lo <= v <= hi):
                        fail(E_OUT_OF_BOUNDS,
                             f"given value {v} outside domain {lo}..{hi}", f"givens[{i}][{j}]")
            if not diags and d.semantics == SYMBOLS:
                board = initial_board(d)
                families = ["rows", "cols"] + (["regions"] if has_regions else [])
                for family in families:
                    if not groups_all_distinct(board, family, d.region_rows, d.region_cols):
                        fail(E_SEMANTICS, f"givens repeat a value within a {family} group",
                             "givens")

    seen_names: set[str] = set()
    for i, rule in enumerate(d.rules):
        rpath = f"rules[{i}]"
        if rule.name in seen_names:
            fail(E_SEMANTICS, f"duplicate rule name {rule.name!r}", f"{rpath}.name")
        seen_names.add(rule.name)
        if rule.on is not None and rule.on not in EVENT_KINDS:
            fail(E_SEMANTICS, f"unknown event kind {rule.on!r}", f"{rpath}.on")
        for j, cond in enumerate(rule.conditions):
            cpath = f"{rpath}.conditions[{j}]"
            if cond.kind not in CONDITION_KINDS:
                fail(E_UNKNOWN_CONDITION, f"unknown condition kind {cond.kind!r}", f"{cpath}.kind")
                continue
            if cond.kind == COND_GAME_TYPE_IS and not cond.name:
                fail(E_SEMANTICS, "game_type_is needs a name", f"{cpath}.name")
            if cond.kind == COND_STATE_IS and cond.state not in STATES:
                fail(E_SEMANTICS, f"state must be one of {STATES}", f"{cpath}.state")
            if cond.kind == COND_GROUPS_ALL_DISTINCT:
                if cond.groups not in GROUP_FAMILIES:
                    fail(E_SEMANTICS, f"groups must be one of {GROUP_FAMILIES}", f"{cpath}.groups")
                elif cond.groups == "regions" and not has_regions:
                    fail(E_SEMANTICS, "groups_all_distinct over regions needs a region setting",
                         f"{cpath}.groups")
            if cond.kind == COND_PATTERN_OWNED:
                if d.semantics != OWNERSHIP:
                    fail(E_SEMANTICS, "pattern ownership applies to ownership games only",
                         f"{cpath}.kind")
                elif cond.pattern is None:
                    if d.win_pattern is None:
                        fail(E_SEMANTICS,
                             "condition defers to win_pattern but the definition has none",
                             f"{cpath}.pattern")
                else:
                    diags.extend(_pattern_problems(cond.pattern, d.rows, d.cols,
                                                   f"{cpath}.pattern"))
            if cond.kind == COND_LEGAL_SYMBOL_PLACEMENT:
                if d.semantics != SYMBOLS or not has_regions:
                    fail(E_SEMANTICS,
                         "legal_symbol_placement needs symbols semantics and regions",
                         f"{cpath}.kind")
        for j, act in enumerate(rule.actions):
            apath = f"{rpath}.actions[{j}]"
            if act.kind not in ACTION_KINDS:
                fail(E_UNKNOWN_ACTION, f"unknown action kind {act.kind!r}", f"{apath}.kind")
                continue
            if act.kind == ACT_SET_TILE_TO_CURRENT_PLAYER and d.semantics != OWNERSHIP:
                fail(E_SEMANTICS, "set_tile_to_current_player needs ownership semantics",
                     f"{apath}.kind")
            if act.kind == ACT_SET_TILE_TO_EVENT_VALUE and d.semantics != SYMBOLS:
                fail(E_SEMANTICS, "set_tile_to_event_value needs symbols semantics",
                     f"{apath}.kind")
            if act.kind == ACT_SET_WINNER_MATCHED and d.win_pattern is None:
                fail(E_SEMANTICS, "set_winner_matched needs a win_pattern", f"{apath}.kind")

    diags.extend(validate_rule_graph(d.rules))
    return diags

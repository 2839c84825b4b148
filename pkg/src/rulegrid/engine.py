"""The event-condition-action interpreter.

An event selects every rule listening on its kind; rules run in definition
order. A rule fires when all of its conditions hold; its actions then apply in
order, and each component rule runs against the updated game, re-evaluating
its own conditions. Every observable change is emitted as a command with a
dense per-game sequence number, which is what keeps client replicas faithful.
"""

from __future__ import annotations

import random
from dataclasses import replace
from functools import lru_cache

from .errors import (
    Diagnostic,
    E_CYCLE,
    E_UNKNOWN_RULE,
    InvalidValue,
    MissingContext,
    OutOfBounds,
    SemanticsError,
    UnknownRule,
    WrongState,
)
from .model import (
    ACT_GAME_OVER_DRAW,
    ACT_SEND_MESSAGE,
    ACT_SET_STATE_STARTED,
    ACT_SET_TILE_TO_CURRENT_PLAYER,
    ACT_SET_TILE_TO_EVENT_VALUE,
    ACT_SET_WINNER_CURRENT,
    ACT_SET_WINNER_MATCHED,
    ACT_SWITCH_PLAYER,
    COND_BOARD_FULL,
    COND_GAME_TYPE_IS,
    COND_GROUPS_ALL_DISTINCT,
    COND_IS_CURRENT_PLAYER,
    COND_LEGAL_SYMBOL_PLACEMENT,
    COND_PATTERN_OWNED,
    COND_STATE_IS,
    COND_TILE_EMPTY,
    COND_TILE_NOT_LOCKED,
    COND_VALUE_IN_DOMAIN,
    DRAW,
    EMPTY,
    FAMILY_ANTIDIAG,
    FAMILY_COLS,
    FAMILY_DIAG,
    FAMILY_ORDER,
    FAMILY_ROWS,
    GROUPS_COLS,
    GROUPS_REGIONS,
    GROUPS_ROWS,
    MESSAGE,
    NOT_STARTED,
    OWNERSHIP,
    RANDOM,
    ROUND_ROBIN,
    SET_CURRENT_PLAYER,
    SET_STATE,
    SET_TILE,
    SET_WINNER,
    STARTED,
    SYMBOLS,
    TERMINATED,
    TILE_CLICK,
    WINNER,
    Action,
    Board,
    Command,
    CompositePattern,
    Condition,
    Coord,
    Event,
    LinesPattern,
    Outcome,
    Pattern,
    Rule,
    RunningGame,
    TilesPattern,
    board_full,
    get_cell,
    in_bounds,
    set_cell,
)

# ---------------------------------------------------------------------------
# Pattern expansion


@lru_cache(maxsize=None)
def expand_pattern(pattern: Pattern, rows: int, cols: int) -> tuple[tuple[Coord, ...], ...]:
    """Expand a pattern into its ordered, duplicate-free coordinate lists.

    Order is pinned so "first match wins" is deterministic: explicit tile
    groups in authored order, then line windows family by family (rows, cols,
    diag, antidiag), scanning start positions in reading order.
    """
    groups: list[tuple[Coord, ...]] = []
    seen: set[tuple[Coord, ...]] = set()

    def add(group: tuple[Coord, ...]) -> None:
        if group not in seen:
            seen.add(group)
            groups.append(group)

    def walk(p: Pattern) -> None:
        if isinstance(p, TilesPattern):
            for group in p.groups:
                for c in group:
                    if not (0 <= c.row < rows and 0 <= c.col < cols):
                        raise OutOfBounds(
                            f"pattern coordinate ({c.row},{c.col}) outside {rows}x{cols} board"
                        )
                add(tuple(group))
        elif isinstance(p, LinesPattern):
            if p.line_len < 1:
                raise SemanticsError("line length must be >= 1")
            for group in _line_windows(p.line_len, p.families, rows, cols):
                add(group)
        elif isinstance(p, CompositePattern):
            for part in p.parts:
                walk(part)
        else:
            raise SemanticsError(f"unknown pattern type {type(p).__name__}")

    walk(pattern)
    return tuple(groups)


def _line_windows(length: int, families: frozenset[str], rows: int, cols: int):
    for family in FAMILY_ORDER:
        if family not in families:
            continue
        if family == FAMILY_ROWS:
            for r in range(rows):
                for c0 in range(cols - length + 1):
                    yield tuple(Coord(r, c0 + i) for i in range(length))
        elif family == FAMILY_COLS:
            for c in range(cols):
                for r0 in range(rows - length + 1):
                    yield tuple(Coord(r0 + i, c) for i in range(length))
        elif family == FAMILY_DIAG:
            for r0 in range(rows - length + 1):
                for c0 in range(cols - length + 1):
                    yield tuple(Coord(r0 + i, c0 + i) for i in range(length))
        elif family == FAMILY_ANTIDIAG:
            for r0 in range(rows - length + 1):
                for c0 in range(length - 1, cols):
                    yield tuple(Coord(r0 + i, c0 - i) for i in range(length))


def check_winner(rg: RunningGame, pattern: Pattern) -> int | None:
    """Owner of the first fully, uniformly owned coordinate list, if any."""
    if rg.definition.semantics != OWNERSHIP:
        raise SemanticsError("winner patterns apply to ownership games only")
    board = rg.board
    for group in expand_pattern(pattern, board.rows, board.cols):
        if not group:
            continue
        first = board.cells[group[0].row * board.cols + group[0].col]
        if first == EMPTY:
            continue
        if all(board.cells[c.row * board.cols + c.col] == first for c in group[1:]):
            return first
    return None


# ---------------------------------------------------------------------------
# Group-distinctness helpers (shared with the builtin sudoku generator)


def region_of(c: Coord, region_rows: int, region_cols: int) -> tuple[int, int]:
    return (c.row // region_rows, c.col // region_cols)


def group_coords(board: Board, family: str, region_rows: int | None = None,
                 region_cols: int | None = None) -> list[list[Coord]]:
    if family == GROUPS_ROWS:
        return [[Coord(r, c) for c in range(board.cols)] for r in range(board.rows)]
    if family == GROUPS_COLS:
        return [[Coord(r, c) for r in range(board.rows)] for c in range(board.cols)]
    if family == GROUPS_REGIONS:
        if not region_rows or not region_cols:
            raise MissingContext("region dimensions are not set")
        out = []
        for r0 in range(0, board.rows, region_rows):
            for c0 in range(0, board.cols, region_cols):
                out.append([
                    Coord(r0 + dr, c0 + dc)
                    for dr in range(region_rows)
                    for dc in range(region_cols)
                ])
        return out
    raise SemanticsError(f"unknown group family {family!r}")


def groups_all_distinct(board: Board, family: str, region_rows: int | None = None,
                        region_cols: int | None = None) -> bool:
    """No group of the family contains a repeated nonzero value."""
    for group in group_coords(board, family, region_rows, region_cols):
        seen: set[int] = set()
        for c in group:
            v = board.cells[c.row * board.cols + c.col]
            if v == EMPTY:
                continue
            if v in seen:
                return False
            seen.add(v)
    return True


def symbol_placement_legal(board: Board, c: Coord, value: int,
                           region_rows: int, region_cols: int) -> bool:
    """Standard symbol-uniqueness placement check.

    Legal iff the cell is not locked and the value is 0 (erase) or appears in
    no other cell of the coordinate's row, column, or region. The value domain
    is 1..region_rows*region_cols.
    """
    if not in_bounds(board, c):
        raise OutOfBounds(f"({c.row},{c.col}) outside {board.rows}x{board.cols} board")
    domain_hi = region_rows * region_cols
    if value != 0 and not (1 <= value <= domain_hi):
        raise InvalidValue(f"value {value} outside domain 1..{domain_hi}")
    if c in board.locked:
        return False
    if value == 0:
        return True
    reg = region_of(c, region_rows, region_cols)
    for r in range(board.rows):
        for col in range(board.cols):
            if r == c.row and col == c.col:
                continue
            if board.cells[r * board.cols + col] != value:
                continue
            if r == c.row or col == c.col:
                return False
            if region_of(Coord(r, col), region_rows, region_cols) == reg:
                return False
    return True


# ---------------------------------------------------------------------------
# Conditions


def eval_condition(rg: RunningGame, ev: Event, cond: Condition) -> bool:
    """Pure predicate; never mutates, never fails on a merely-false check."""
    kind = cond.kind
    if kind == COND_GAME_TYPE_IS:
        return rg.definition.name == cond.name
    if kind == COND_STATE_IS:
        return rg.state == cond.state
    if kind == COND_IS_CURRENT_PLAYER:
        return ev.actor is not None and ev.actor == rg.current_player_id
    if kind == COND_TILE_EMPTY:
        return get_cell(rg.board, _need_coord(ev)) == EMPTY
    if kind == COND_TILE_NOT_LOCKED:
        c = _need_coord(ev)
        if not in_bounds(rg.board, c):
            raise OutOfBounds(f"({c.row},{c.col}) outside the board")
        return c not in rg.board.locked
    if kind == COND_VALUE_IN_DOMAIN:
        if ev.value is None:
            return False
        lo, hi = rg.definition.value_domain
        return ev.value == 0 or lo <= ev.value <= hi
    if kind == COND_PATTERN_OWNED:
        pattern = cond.pattern if cond.pattern is not None else rg.definition.win_pattern
        if pattern is None:
            raise MissingContext("no pattern given and the definition has no win pattern")
        return check_winner(rg, pattern) is not None
    if kind == COND_BOARD_FULL:
        return board_full(rg.board)
    if kind == COND_GROUPS_ALL_DISTINCT:
        return groups_all_distinct(
            rg.board, cond.groups, rg.definition.region_rows, rg.definition.region_cols
        )
    if kind == COND_LEGAL_SYMBOL_PLACEMENT:
        c = _need_coord(ev)
        d = rg.definition
        if not d.region_rows or not d.region_cols:
            raise MissingContext("legal_symbol_placement needs region dimensions")
        if ev.value is None:
            return False
        try:
            return symbol_placement_legal(rg.board, c, ev.value, d.region_rows, d.region_cols)
        except InvalidValue:
            return False
    raise SemanticsError(f"unknown condition kind {kind!r}")


def _need_coord(ev: Event) -> Coord:
    if ev.coord is None:
        raise MissingContext(f"a tile condition needs a coordinate, event {ev.kind!r} has none")
    return ev.coord


# Human-readable rejection vocabulary, keyed by the first failing condition.
_REJECTION_BY_CONDITION = {
    COND_GAME_TYPE_IS: ("wrong_game_type", "event is for a different game type"),
    COND_STATE_IS: ("wrong_state", "game is not in the required state"),
    COND_IS_CURRENT_PLAYER: ("not_your_turn", "not your turn"),
    COND_TILE_EMPTY: ("tile_taken", "tile is already taken"),
    COND_TILE_NOT_LOCKED: ("tile_locked", "tile is locked"),
    COND_VALUE_IN_DOMAIN: ("value_out_of_domain", "value is outside the game's domain"),
    COND_PATTERN_OWNED: ("condition_failed", "no pattern is fully owned"),
    COND_BOARD_FULL: ("condition_failed", "board is not full"),
    COND_GROUPS_ALL_DISTINCT: ("condition_failed", "groups contain duplicates"),
    COND_LEGAL_SYMBOL_PLACEMENT: ("illegal_placement", "placement breaks a uniqueness constraint"),
}


def rejection_reason(rg: RunningGame, ev: Event) -> tuple[str, str]:
    """Explain why an event fired nothing: (stable code, human reason).

    Reports the first failing condition of the first rule listening on the
    event's kind, which for the builtin games is the move rule itself.
    """
    for rule in rg.definition.rules:
        if rule.on != ev.kind:
            continue
        for cond in rule.conditions:
            try:
                ok = eval_condition(rg, ev, cond)
            except MissingContext:
                ok = False
            if not ok:
                return _REJECTION_BY_CONDITION.get(
                    cond.kind, ("condition_failed", f"condition {cond.kind} failed")
                )
        return ("no_effect", "rule fired but produced no change")
    return ("no_rule", "no rule handles this event")


# ---------------------------------------------------------------------------
# Actions


def _switch(rg: RunningGame) -> tuple[RunningGame, Command]:
    if rg.state != STARTED:
        raise WrongState("cannot switch players before the game starts")
    n = len(rg.players)
    if n < 1:
        raise WrongState("no players to switch between")
    cur = rg.current_player
    if rg.definition.turn_policy == ROUND_ROBIN:
        nxt = (cur + 1) % n
        rg2 = replace(rg, current_player=nxt)
    elif rg.definition.turn_policy == RANDOM:
        others = [i for i in range(n) if i != cur]
        if others:
            # One fresh generator per draw, keyed by (seed, draw index), so a
            # game value fully determines the next choice.
            rng = random.Random(rg.rng_seed * 1_000_003 + rg.rng_calls)
            nxt = others[rng.randrange(len(others))]
            rg2 = replace(rg, current_player=nxt, rng_calls=rg.rng_calls + 1)
        else:
            nxt = cur
            rg2 = rg
    else:
        raise SemanticsError(f"unknown turn policy {rg.definition.turn_policy!r}")
    cmd = Command(seq=0, kind=SET_CURRENT_PLAYER, player=rg2.players[nxt].id)
    return rg2, cmd


def switch_player(rg: RunningGame) -> tuple[RunningGame, Command]:
    """Advance the turn per the definition's policy; emits set_current_player."""
    rg2, cmd = _switch(rg)
    return rg2, replace(cmd, seq=rg.last_seq + 1)


def _terminate(rg: RunningGame, outcome: Outcome) -> tuple[RunningGame, list[Command]]:
    if rg.state == TERMINATED:
        raise WrongState("game is already terminated")
    rg2 = replace(rg, state=TERMINATED, outcome=outcome)
    cmds = []
    if outcome.result == WINNER:
        cmds.append(Command(seq=0, kind=SET_WINNER, player=outcome.player))
    cmds.append(Command(seq=0, kind=SET_STATE, state=TERMINATED, outcome=outcome))
    return rg2, cmds


def _apply_action(rg: RunningGame, ev: Event, act: Action) -> tuple[RunningGame, list[Command]]:
    kind = act.kind
    d = rg.definition

    if kind == ACT_SET_STATE_STARTED:
        if rg.state != NOT_STARTED:
            raise WrongState("game has already started")
        if len(rg.players) < d.min_players:
            raise WrongState(
                f"needs at least {d.min_players} players, has {len(rg.players)}"
            )
        rg2 = replace(rg, state=STARTED, current_player=0)
        return rg2, [
            Command(seq=0, kind=SET_STATE, state=STARTED),
            Command(seq=0, kind=SET_CURRENT_PLAYER, player=rg2.players[0].id),
        ]

    if kind == ACT_SET_TILE_TO_CURRENT_PLAYER:
        if d.semantics != OWNERSHIP:
            raise SemanticsError("set_tile_to_current_player needs ownership semantics")
        pid = rg.current_player_id
        if pid is None:
            raise WrongState("no current player")
        c = _need_coord(ev)
        board = set_cell(rg.board, c, pid)
        return replace(rg, board=board), [Command(seq=0, kind=SET_TILE, coord=c, value=pid)]

    if kind == ACT_SET_TILE_TO_EVENT_VALUE:
        if d.semantics != SYMBOLS:
            raise SemanticsError("set_tile_to_event_value needs symbols semantics")
        if ev.value is None:
            raise MissingContext("event carries no value to place")
        lo, hi = d.value_domain
        if ev.value != 0 and not (lo <= ev.value <= hi):
            raise InvalidValue(f"value {ev.value} outside domain {lo}..{hi}")
        c = _need_coord(ev)
        board = set_cell(rg.board, c, ev.value)
        return replace(rg, board=board), [Command(seq=0, kind=SET_TILE, coord=c, value=ev.value)]

    if kind == ACT_SWITCH_PLAYER:
        rg2, cmd = _switch(rg)
        return rg2, [cmd]

    if kind == ACT_SET_WINNER_CURRENT:
        pid = rg.current_player_id
        if pid is None:
            raise WrongState("no current player to declare winner")
        rg2, cmds = _terminate(rg, Outcome(result=WINNER, player=pid))
        return rg2, cmds

    if kind == ACT_SET_WINNER_MATCHED:
        if d.win_pattern is None:
            raise MissingContext("definition has no win pattern to match")
        pid = check_winner(rg, d.win_pattern)
        if pid is None:
            return rg, []  # vacuous: nothing matched, nothing to declare
        rg2, cmds = _terminate(rg, Outcome(result=WINNER, player=pid))
        return rg2, cmds

    if kind == ACT_GAME_OVER_DRAW:
        rg2, cmds = _terminate(rg, Outcome(result=DRAW))
        return rg2, cmds

    if kind == ACT_SEND_MESSAGE:
        return rg, [Command(seq=0, kind=MESSAGE, text=act.text or "")]

    raise SemanticsError(f"unknown action kind {kind!r}")


def apply_action(rg: RunningGame, ev: Event, act: Action) -> tuple[RunningGame, list[Command]]:
    """Apply one action; returned commands are numbered after the game's log."""
    rg2, cmds = _apply_action(rg, ev, act)
    base = rg.last_seq
    return rg2, [replace(c, seq=base + i + 1) for i, c in enumerate(cmds)]


# ---------------------------------------------------------------------------
# Rules


def _run_rule(rg: RunningGame, rule: Rule, ev: Event,
              fired_names: list[str]) -> tuple[RunningGame, list[Command], bool]:
    for cond in rule.conditions:
        if not eval_condition(rg, ev, cond):
            return rg, [], False
    fired_names.append(rule.name)
    commands: list[Command] = []
    for act in rule.actions:
        rg, cmds = _apply_action(rg, ev, act)
        commands.extend(cmds)
    for name in rule.components:
        component = rg.definition.rule_named(name)
        if component is None:
            raise UnknownRule(f"rule {rule.name!r} references unknown component {name!r}")
        rg, cmds, _ = _run_rule(rg, component, ev, fired_names)
        commands.extend(cmds)
    return rg, commands, True


def run_rule(rg: RunningGame, rule: Rule, ev: Event) -> tuple[RunningGame, list[Command], bool]:
    """Run one rule (and its components); commands numbered after the log."""
    fired: list[str] = []
    rg2, cmds, did_fire = _run_rule(rg, rule, ev, fired)
    base = rg.last_seq
    return rg2, [replace(c, seq=base + i + 1) for i, c in enumerate(cmds)], did_fire


def _check_event(rg: RunningGame, ev: Event) -> None:
    if ev.kind == TILE_CLICK:
        if ev.coord is None:
            raise MissingContext("tile_click needs a coordinate")
        if not in_bounds(rg.board, ev.coord):
            raise OutOfBounds(
                f"({ev.coord.row},{ev.coord.col}) outside "
                f"{rg.board.rows}x{rg.board.cols} board"
            )
        if ev.value is not None and ev.value != 0:
            lo, hi = rg.definition.value_domain
            if not (lo <= ev.value <= hi):
                raise InvalidValue(f"value {ev.value} outside domain {lo}..{hi}")


def dispatch_event(rg: RunningGame, ev: Event) -> tuple[RunningGame, list[Command], list[str]]:
    """Run every rule listening on the event's kind, in definition order.

    Returns (game, commands, fired rule names). When nothing fires the game
    comes back unchanged with empty commands — a normal outcome, not an error.
    Fired dispatches are appended to the game's history with densely numbered
    commands.
    """
    _check_event(rg, ev)
    fired: list[str] = []
    commands: list[Command] = []
    g = rg
    for rule in rg.definition.rules:
        if rule.on != ev.kind:
            continue
        g, cmds, _ = _run_rule(g, rule, ev, fired)
        commands.extend(cmds)
    if not fired:
        return rg, [], []
    base = rg.last_seq
    commands = [replace(c, seq=base + i + 1) for i, c in enumerate(commands)]
    g = replace(g, history=g.history + ((ev, tuple(commands)),))
    return g, commands, fired


# ---------------------------------------------------------------------------
# Static rule-graph validation


def validate_rule_graph(rules: tuple[Rule, ...] | list[Rule]) -> list[Diagnostic]:
    """Report unresolved component references and cycles in the rule graph."""
    diagnostics: list[Diagnostic] = []
    by_name = {rule.name: rule for rule in rules}
    for i, rule in enumerate(rules):
        for j, name in enumerate(rule.components):
            if name not in by_name:
                diagnostics.append(Diagnostic(
                    code=E_UNKNOWN_RULE,
                    message=f"rule {rule.name!r} references unknown rule {name!r}",
                    location=f"rules[{i}].components[{j}]",
                ))

    # Cycle detection over resolvable edges (three-colour DFS).
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {name: WHITE for name in by_name}
    stack_path: list[str] = []

    def visit(name: str) -> None:
        colour[name] = GREY
        stack_path.append(name)
        for dep in by_name[name].components:
            if dep not in by_name:
                continue
            if colour[dep] == GREY:
                cycle = stack_path[stack_path.index(dep):] + [dep]
                diagnostics.append(Diagnostic(
                    code=E_CYCLE,
                    message="rule cycle: " + " -> ".join(cycle),
                    location=f"rules[{[r.name for r in rules].index(dep)}]",
                ))
            elif colour[dep] == WHITE:
                visit(dep)
        stack_path.pop()
        colour[name] = BLACK

    for name in by_name:
        if colour[name] == WHITE:
            visit(name)
    return diagnostics

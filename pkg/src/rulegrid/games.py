"""Builtin game generators: the line-completion family and the digit puzzle.

Both generators emit plain GameDefinition values, so everything they produce
can also be written by hand in the definition format. The shipped corpus
(``rulegrid/corpus``) is exactly these generators serialized.
"""

from __future__ import annotations

import math
from pathlib import Path

from .dsl import serialize_definition
from .engine import groups_all_distinct, symbol_placement_legal
from .errors import InvalidGivens, InvalidParams
from .model import (
    ACT_GAME_OVER_DRAW,
    ACT_SEND_MESSAGE,
    ACT_SET_STATE_STARTED,
    ACT_SET_TILE_TO_CURRENT_PLAYER,
    ACT_SET_TILE_TO_EVENT_VALUE,
    ACT_SET_WINNER_CURRENT,
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
    FAMILY_ORDER,
    GAME_START,
    NOT_STARTED,
    OWNERSHIP,
    ROUND_ROBIN,
    STARTED,
    SYMBOLS,
    TILE_CLICK,
    TURN_POLICIES,
    Action,
    Board,
    Condition,
    Coord,
    GameDefinition,
    LinesPattern,
    Rule,
    initial_board,
)

RULE_GAME_START = "Game Start"
RULE_TILE_CLICK = "Tile Click"
RULE_CHECK_WINNER = "Check Winner"
RULE_SWITCH_PLAYER = "Switch Player"
RULE_DRAW_ON_FULL = "Draw On Full"
RULE_CHECK_SOLVED = "Check Solved"


def _game_start_rule(name: str) -> Rule:
    return Rule(
        name=RULE_GAME_START,
        on=GAME_START,
        conditions=(
            Condition(kind=COND_GAME_TYPE_IS, name=name),
            Condition(kind=COND_STATE_IS, state=NOT_STARTED),
        ),
        actions=(
            Action(kind=ACT_SET_STATE_STARTED),
            Action(kind=ACT_SEND_MESSAGE, text="Game started"),
        ),
    )


def tictactoe_definition(rows: int = 3, cols: int = 3, line_len: int = 3,
                         players: int = 2, turn_policy: str = ROUND_ROBIN,
                         name: str | None = None) -> GameDefinition:
    """Line-completion game on a rows x cols board.

    The win pattern is every straight window of ``line_len`` cells across all
    four families (rows, columns, both diagonals). A move claims an empty tile
    for the mover; completing a window wins, filling the board draws.
    """
    if rows < 1 or cols < 1:
        raise InvalidParams(f"board must be at least 1x1, got {rows}x{cols}")
    if line_len < 1 or line_len > max(rows, cols):
        raise InvalidParams(f"line length {line_len} does not fit a {rows}x{cols} board")
    if players < 2:
        raise InvalidParams("ownership games need at least 2 players")
    if turn_policy not in TURN_POLICIES:
        raise InvalidParams(f"unknown turn policy {turn_policy!r}")
    if name is None:
        name = f"ttt-{rows}x{cols}-len{line_len}-{players}p"
    return GameDefinition(
        name=name,
        rows=rows,
        cols=cols,
        semantics=OWNERSHIP,
        value_domain=(1, players),
        min_players=players,
        max_players=players,
        turn_policy=turn_policy,
        win_pattern=LinesPattern(line_len=line_len, families=frozenset(FAMILY_ORDER)),
        rules=(
            _game_start_rule(name),
            Rule(
                name=RULE_TILE_CLICK,
                on=TILE_CLICK,
                conditions=(
                    Condition(kind=COND_GAME_TYPE_IS, name=name),
                    Condition(kind=COND_STATE_IS, state=STARTED),
                    Condition(kind=COND_IS_CURRENT_PLAYER),
                    Condition(kind=COND_TILE_EMPTY),
                ),
                actions=(Action(kind=ACT_SET_TILE_TO_CURRENT_PLAYER),),
                components=(RULE_CHECK_WINNER, RULE_SWITCH_PLAYER),
            ),
            # Runs after Tile Click (definition order); only fires when the
            # filling move neither won nor was rejected.
            Rule(
                name=RULE_DRAW_ON_FULL,
                on=TILE_CLICK,
                conditions=(
                    Condition(kind=COND_STATE_IS, state=STARTED),
                    Condition(kind=COND_BOARD_FULL),
                ),
                actions=(Action(kind=ACT_GAME_OVER_DRAW),),
            ),
            # pattern=None defers to the definition's win_pattern, so editing
            # the pattern retargets this rule too.
            Rule(
                name=RULE_CHECK_WINNER,
                on=None,
                conditions=(
                    Condition(kind=COND_STATE_IS, state=STARTED),
                    Condition(kind=COND_PATTERN_OWNED, pattern=None),
                ),
                actions=(Action(kind=ACT_SET_WINNER_CURRENT),),
            ),
            Rule(
                name=RULE_SWITCH_PLAYER,
                on=None,
                conditions=(Condition(kind=COND_STATE_IS, state=STARTED),),
                actions=(Action(kind=ACT_SWITCH_PLAYER),),
            ),
        ),
    )


def sudoku_definition(side: int, givens: list[list[int]] | tuple | None = None,
                      players: int = 1, region_rows: int | None = None,
                      region_cols: int | None = None, turn_policy: str = ROUND_ROBIN,
                      name: str | None = None) -> GameDefinition:
    """Digit-placement puzzle: fill the board so rows, columns and regions
    hold distinct digits. One player by default; with more, turns rotate and
    whoever completes the grid wins.
    """
    if side < 1:
        raise InvalidParams("side must be >= 1")
    if region_rows is None and region_cols is None:
        root = math.isqrt(side)
        if root * root != side:
            raise InvalidParams(
                f"side {side} is not a perfect square; pass region_rows x region_cols"
            )
        region_rows = region_cols = root
    if region_rows is None or region_cols is None:
        raise InvalidParams("region rows and cols must be given together")
    if region_rows * region_cols != side:
        raise InvalidParams(f"regions {region_rows}x{region_cols} do not produce {side} values")
    if players < 1:
        raise InvalidParams("need at least one player")
    if turn_policy not in TURN_POLICIES:
        raise InvalidParams(f"unknown turn policy {turn_policy!r}")

    givens_grid = None
    if givens is not None:
        givens_grid = tuple(tuple(int(v) for v in row) for row in givens)
        if len(givens_grid) != side or any(len(row) != side for row in givens_grid):
            raise InvalidGivens(f"givens grid must be {side}x{side}")
        for row in givens_grid:
            for v in row:
                if v != 0 and not (1 <= v <= side):
                    raise InvalidGivens(f"given {v} outside 1..{side}")

    if name is None:
        name = f"sudoku-{side}x{side}-{players}p"

    components = [RULE_CHECK_SOLVED]
    rules = [
        _game_start_rule(name),
        Rule(
            name=RULE_TILE_CLICK,
            on=TILE_CLICK,
            conditions=(
                Condition(kind=COND_GAME_TYPE_IS, name=name),
                Condition(kind=COND_STATE_IS, state=STARTED),
                Condition(kind=COND_IS_CURRENT_PLAYER),
                Condition(kind=COND_TILE_NOT_LOCKED),
                Condition(kind=COND_VALUE_IN_DOMAIN),
                Condition(kind=COND_LEGAL_SYMBOL_PLACEMENT),
            ),
            actions=(Action(kind=ACT_SET_TILE_TO_EVENT_VALUE),),
            components=tuple(components + ([RULE_SWITCH_PLAYER] if players > 1 else [])),
        ),
        Rule(
            name=RULE_CHECK_SOLVED,
            on=None,
            conditions=(
                Condition(kind=COND_STATE_IS, state=STARTED),
                Condition(kind=COND_BOARD_FULL),
                Condition(kind=COND_GROUPS_ALL_DISTINCT, groups="rows"),
                Condition(kind=COND_GROUPS_ALL_DISTINCT, groups="cols"),
                Condition(kind=COND_GROUPS_ALL_DISTINCT, groups="regions"),
            ),
            actions=(Action(kind=ACT_SET_WINNER_CURRENT),),
        ),
    ]
    if players > 1:
        rules.append(Rule(
            name=RULE_SWITCH_PLAYER,
            on=None,
            conditions=(Condition(kind=COND_STATE_IS, state=STARTED),),
            actions=(Action(kind=ACT_SWITCH_PLAYER),),
        ))

    definition = GameDefinition(
        name=name,
        rows=side,
        cols=side,
        semantics=SYMBOLS,
        value_domain=(1, side),
        min_players=players,
        max_players=players,
        turn_policy=turn_policy,
        win_pattern=None,
        rules=tuple(rules),
        givens=givens_grid,
        region_rows=region_rows,
        region_cols=region_cols,
    )

    if givens_grid is not None:
        board = initial_board(definition)
        for family in ("rows", "cols", "regions"):
            if not groups_all_distinct(board, family, region_rows, region_cols):
                raise InvalidGivens(f"givens repeat a value within a {family} group")
    return definition


def sudoku_legal_move(board: Board, c: Coord, digit: int,
                      region_rows: int, region_cols: int) -> bool:
    """True iff placing (or erasing with 0) is allowed at this cell."""
    return symbol_placement_legal(board, c, digit, region_rows, region_cols)


def sudoku_solved(board: Board, region_rows: int, region_cols: int) -> bool:
    """Full board with distinct values in every row, column, and region."""
    if 0 in board.cells:
        return False
    return all(
        groups_all_distinct(board, family, region_rows, region_cols)
        for family in ("rows", "cols", "regions")
    )


# A well-known consistent 9x9 starting grid, used by the shipped sample file.
SAMPLE_9X9_GIVENS = [
    [5, 3, 0, 0, 7, 0, 0, 0, 0],
    [6, 0, 0, 1, 9, 5, 0, 0, 0],
    [0, 9, 8, 0, 0, 0, 0, 6, 0],
    [8, 0, 0, 0, 6, 0, 0, 0, 3],
    [4, 0, 0, 8, 0, 3, 0, 0, 1],
    [7, 0, 0, 0, 2, 0, 0, 0, 6],
    [0, 6, 0, 0, 0, 0, 2, 8, 0],
    [0, 0, 0, 4, 1, 9, 0, 0, 5],
    [0, 0, 0, 0, 8, 0, 0, 7, 9],
]


def builtin_corpus() -> dict[str, GameDefinition]:
    """The shipped definitions, keyed by name (= file stem)."""
    return {
        "ttt-3x3": tictactoe_definition(3, 3, 3, 2, name="ttt-3x3"),
        "ttt-4x4-len4": tictactoe_definition(4, 4, 4, 2, name="ttt-4x4-len4"),
        "ttt-4x4-len3": tictactoe_definition(4, 4, 3, 2, name="ttt-4x4-len3"),
        "ttt-3x3-4p": tictactoe_definition(3, 3, 3, 4, name="ttt-3x3-4p"),
        "sudoku-9x9-sample": sudoku_definition(
            9, givens=SAMPLE_9X9_GIVENS, name="sudoku-9x9-sample"
        ),
        "sudoku-4x4-empty": sudoku_definition(4, name="sudoku-4x4-empty"),
    }


def corpus_dir() -> Path:
    return Path(__file__).parent / "corpus"


def write_corpus(target: Path | str) -> list[Path]:
    """Serialize the builtin corpus into a directory of .game.json files."""
    target = Path(target)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name, definition in builtin_corpus().items():
        path = target / f"{name}.game.json"
        path.write_text(serialize_definition(definition), encoding="utf-8")
        written.append(path)
    return written

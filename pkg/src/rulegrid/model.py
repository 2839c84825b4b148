"""Core domain values: board, players, definitions, events, commands, games.

Everything here is an immutable value; operations return new values instead of
mutating. That keeps the rule interpreter pure and makes games safe to share
across server threads (each game is swapped atomically under its own lock).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import (
    GameFull,
    InvalidDefinition,
    InvalidDimensions,
    LockedCell,
    OutOfBounds,
    OutOfOrder,
    WrongState,
)

# Lifecycle states of a running game.
NOT_STARTED = "not_started"
STARTED = "started"
TERMINATED = "terminated"
STATES = (NOT_STARTED, STARTED, TERMINATED)

# Outcome results for a terminated game.
WINNER = "winner"
DRAW = "draw"
ABANDONED = "abandoned"

# Event kinds.
GAME_START = "game_start"
TILE_CLICK = "tile_click"
PLAYER_JOIN = "player_join"
TERMINATION_CHECK = "termination_check"
EVENT_KINDS = (GAME_START, TILE_CLICK, PLAYER_JOIN, TERMINATION_CHECK)

# Command kinds.
SET_TILE = "set_tile"
SET_STATE = "set_state"
SET_CURRENT_PLAYER = "set_current_player"
SET_WINNER = "set_winner"
PLAYER_JOINED = "player_joined"
MESSAGE = "message"

# Cell-value interpretation modes.
OWNERSHIP = "ownership"  # cell value > 0 is the owning player's id
SYMBOLS = "symbols"      # cell value > 0 is a placed symbol (e.g. a digit)
SEMANTICS = (OWNERSHIP, SYMBOLS)

ROUND_ROBIN = "round_robin"
RANDOM = "random"
TURN_POLICIES = (ROUND_ROBIN, RANDOM)

HUMAN = "human"
ROBOT = "robot"
PLAYER_KINDS = (HUMAN, ROBOT)

EMPTY = 0


@dataclass(frozen=True, slots=True)
class Coord:
    row: int
    col: int


@dataclass(frozen=True, slots=True)
class Board:
    """A rows x cols integer matrix; 0 means empty, locked cells are immutable."""

    rows: int
    cols: int
    cells: tuple[int, ...]  # row-major
    locked: frozenset[Coord] = frozenset()

    def grid(self) -> list[list[int]]:
        return [list(self.cells[r * self.cols:(r + 1) * self.cols]) for r in range(self.rows)]


def new_board(rows: int, cols: int, fill: int = EMPTY) -> Board:
    if rows < 1 or cols < 1:
        raise InvalidDimensions(f"board dimensions must be >= 1, got {rows}x{cols}")
    return Board(rows=rows, cols=cols, cells=(fill,) * (rows * cols))


def in_bounds(board: Board, c: Coord) -> bool:
    return 0 <= c.row < board.rows and 0 <= c.col < board.cols


def get_cell(board: Board, c: Coord) -> int:
    if not in_bounds(board, c):
        raise OutOfBounds(f"({c.row},{c.col}) outside {board.rows}x{board.cols} board")
    return board.cells[c.row * board.cols + c.col]


def set_cell(board: Board, c: Coord, value: int) -> Board:
    if not in_bounds(board, c):
        raise OutOfBounds(f"({c.row},{c.col}) outside {board.rows}x{board.cols} board")
    if c in board.locked:
        raise LockedCell(f"({c.row},{c.col}) is locked")
    i = c.row * board.cols + c.col
    return replace(board, cells=board.cells[:i] + (value,) + board.cells[i + 1:])


def board_full(board: Board) -> bool:
    return EMPTY not in board.cells


@dataclass(frozen=True, slots=True)
class Player:
    id: int  # dense, 1-based, assigned in join order
    name: str
    kind: str = HUMAN


# ---------------------------------------------------------------------------
# Rule data. Rules are plain data interpreted by the engine module; keeping the
# types here lets a GameDefinition carry them without import cycles.

TILES = "tiles"
LINES = "lines"
COMPOSITE = "composite"

FAMILY_ROWS = "rows"
FAMILY_COLS = "cols"
FAMILY_DIAG = "diag"
FAMILY_ANTIDIAG = "antidiag"
FAMILY_ORDER = (FAMILY_ROWS, FAMILY_COLS, FAMILY_DIAG, FAMILY_ANTIDIAG)


@dataclass(frozen=True)
class TilesPattern:
    """Explicit coordinate lists; the lowest, fully spelled-out level."""

    groups: tuple[tuple[Coord, ...], ...]


@dataclass(frozen=True)
class LinesPattern:
    """Every straight window of a given length in the selected families."""

    line_len: int
    families: frozenset[str]


@dataclass(frozen=True)
class CompositePattern:
    """Union of child patterns, kept in authored order."""

    parts: tuple["Pattern", ...]


Pattern = TilesPattern | LinesPattern | CompositePattern


# Condition kinds.
COND_GAME_TYPE_IS = "game_type_is"
COND_STATE_IS = "state_is"
COND_IS_CURRENT_PLAYER = "is_current_player"
COND_TILE_EMPTY = "tile_empty"
COND_TILE_NOT_LOCKED = "tile_not_locked"
COND_VALUE_IN_DOMAIN = "value_in_domain"
COND_PATTERN_OWNED = "pattern_owned_by_same_player"
COND_BOARD_FULL = "board_full"
COND_GROUPS_ALL_DISTINCT = "groups_all_distinct"
COND_LEGAL_SYMBOL_PLACEMENT = "legal_symbol_placement"
CONDITION_KINDS = (
    COND_GAME_TYPE_IS,
    COND_STATE_IS,
    COND_IS_CURRENT_PLAYER,
    COND_TILE_EMPTY,
    COND_TILE_NOT_LOCKED,
    COND_VALUE_IN_DOMAIN,
    COND_PATTERN_OWNED,
    COND_BOARD_FULL,
    COND_GROUPS_ALL_DISTINCT,
    COND_LEGAL_SYMBOL_PLACEMENT,
)

GROUPS_ROWS = "rows"
GROUPS_COLS = "cols"
GROUPS_REGIONS = "regions"
GROUP_FAMILIES = (GROUPS_ROWS, GROUPS_COLS, GROUPS_REGIONS)

# Action kinds.
ACT_SET_STATE_STARTED = "set_state_started"
ACT_SET_TILE_TO_CURRENT_PLAYER = "set_tile_to_current_player"
ACT_SET_TILE_TO_EVENT_VALUE = "set_tile_to_event_value"
ACT_SWITCH_PLAYER = "switch_player"
ACT_SET_WINNER_CURRENT = "set_winner_current"
ACT_SET_WINNER_MATCHED = "set_winner_matched"
ACT_GAME_OVER_DRAW = "game_over_draw"
ACT_SEND_MESSAGE = "send_message"
ACTION_KINDS = (
    ACT_SET_STATE_STARTED,
    ACT_SET_TILE_TO_CURRENT_PLAYER,
    ACT_SET_TILE_TO_EVENT_VALUE,
    ACT_SWITCH_PLAYER,
    ACT_SET_WINNER_CURRENT,
    ACT_SET_WINNER_MATCHED,
    ACT_GAME_OVER_DRAW,
    ACT_SEND_MESSAGE,
)


@dataclass(frozen=True)
class Condition:
    """A pure predicate over (game, event). Unused parameter fields stay None.

    For `pattern_owned_by_same_player`, pattern=None means "use the
    definition's win_pattern", so editing the definition's pattern changes the
    rule without touching the rule body.
    """

    kind: str
    name: str | None = None        # game_type_is
    state: str | None = None       # state_is
    pattern: Pattern | None = None  # pattern_owned_by_same_player
    groups: str | None = None      # groups_all_distinct


@dataclass(frozen=True)
class Action:
    kind: str
    text: str | None = None  # send_message


@dataclass(frozen=True)
class Rule:
    """Event-Condition-Action rule with optional component rules.

    `on` is the event kind the rule listens to; None makes the rule
    component-only (it runs only when another rule names it in `components`).
    All conditions must hold (conjunction) for the rule to fire; actions apply
    in order, then each component rule runs against the updated game and
    re-evaluates its own conditions.
    """

    name: str
    on: str | None
    conditions: tuple[Condition, ...] = ()
    actions: tuple[Action, ...] = ()
    components: tuple[str, ...] = ()


@dataclass(frozen=True)
class GameDefinition:
    """A game as pure data; everything a match needs is in here."""

    name: str
    rows: int
    cols: int
    semantics: str
    value_domain: tuple[int, int]  # inclusive [lo, hi], lo >= 1
    min_players: int
    max_players: int
    turn_policy: str
    win_pattern: Pattern | None
    rules: tuple[Rule, ...]
    givens: tuple[tuple[int, ...], ...] | None = None  # pre-filled locked cells
    region_rows: int | None = None  # region tiling for symbols games
    region_cols: int | None = None

    def rule_named(self, name: str) -> Rule | None:
        for rule in self.rules:
            if rule.name == name:
                return rule
        return None


@dataclass(frozen=True)
class Event:
    """Something a player (or the system) did; input to the rule interpreter."""

    kind: str
    actor: int | None = None       # player id
    coord: Coord | None = None     # tile_click
    value: int | None = None       # tile_click in symbols games (0 erases)
    name: str | None = None        # player_join
    player_kind: str | None = None  # player_join


def game_start(actor: int | None = None) -> Event:
    return Event(kind=GAME_START, actor=actor)


def tile_click(actor: int, row: int, col: int, value: int | None = None) -> Event:
    return Event(kind=TILE_CLICK, actor=actor, coord=Coord(row, col), value=value)


def termination_check(actor: int | None = None) -> Event:
    return Event(kind=TERMINATION_CHECK, actor=actor)


@dataclass(frozen=True)
class Outcome:
    result: str  # winner | draw | abandoned
    player: int | None = None  # winner's player id


@dataclass(frozen=True)
class Command:
    """One observable state change, broadcast to clients for replication.

    Seq numbers are dense and per-game: the n-th command ever recorded for a
    game has seq n, no matter which event produced it.
    """

    seq: int
    kind: str
    coord: Coord | None = None
    value: int | None = None
    state: str | None = None
    outcome: Outcome | None = None
    player: int | None = None      # set_current_player / set_winner
    joined: Player | None = None   # player_joined
    text: str | None = None        # message


@dataclass(frozen=True)
class RunningGame:
    """The state machine of one match: not_started -> started -> terminated."""

    id: str
    definition: GameDefinition
    board: Board
    players: tuple[Player, ...] = ()
    current_player: int | None = None  # index into players; Started only
    state: str = NOT_STARTED
    outcome: Outcome | None = None
    history: tuple[tuple[Event, tuple[Command, ...]], ...] = ()
    rng_seed: int = 0
    rng_calls: int = 0  # random draws consumed so far (keeps replays exact)

    @property
    def last_seq(self) -> int:
        return sum(len(cmds) for _, cmds in self.history)

    @property
    def current_player_id(self) -> int | None:
        if self.current_player is None or not (0 <= self.current_player < len(self.players)):
            return None
        return self.players[self.current_player].id


def initial_board(definition: GameDefinition) -> Board:
    """Empty board, or the givens grid with every given cell locked."""
    board = new_board(definition.rows, definition.cols)
    if definition.givens is None:
        return board
    cells = tuple(v for row in definition.givens for v in row)
    locked = frozenset(
        Coord(r, c)
        for r in range(definition.rows)
        for c in range(definition.cols)
        if definition.givens[r][c] != EMPTY
    )
    return replace(board, cells=cells, locked=locked)


def create_running_game(definition: GameDefinition, game_id: str, seed: int) -> RunningGame:
    from .dsl import validate_definition  # local import: dsl builds on this module

    diagnostics = validate_definition(definition)
    if diagnostics:
        raise InvalidDefinition(diagnostics)
    return RunningGame(
        id=game_id,
        definition=definition,
        board=initial_board(definition),
        rng_seed=seed,
    )


def join_player(rg: RunningGame, name: str, kind: str = HUMAN) -> RunningGame:
    """Add a player before the game starts; records the join in the command log."""
    if rg.state != NOT_STARTED:
        raise WrongState("players can only join before the game starts")
    if len(rg.players) >= rg.definition.max_players:
        raise GameFull(f"game already has {rg.definition.max_players} players")
    player = Player(id=len(rg.players) + 1, name=name, kind=kind)
    event = Event(kind=PLAYER_JOIN, name=name, player_kind=kind)
    command = Command(seq=rg.last_seq + 1, kind=PLAYER_JOINED, joined=player)
    return replace(
        rg,
        players=rg.players + (player,),
        history=rg.history + ((event, (command,)),),
    )


def all_commands(rg: RunningGame) -> list[Command]:
    return [cmd for _, cmds in rg.history for cmd in cmds]


# ---------------------------------------------------------------------------
# Client replica: the faithful copy of the server game, advanced only by
# applying the server's command stream in seq order.


@dataclass(frozen=True)
class Replica:
    board: Board
    players: tuple[Player, ...] = ()
    current_player: int | None = None
    state: str = NOT_STARTED
    outcome: Outcome | None = None
    last_seq: int = 0


def replica_of(rg: RunningGame) -> Replica:
    """Server-side projection of a game; what a fully synced client holds."""
    return Replica(
        board=rg.board,
        players=rg.players,
        current_player=rg.current_player,
        state=rg.state,
        outcome=rg.outcome,
        last_seq=rg.last_seq,
    )


def fresh_replica(definition: GameDefinition) -> Replica:
    return Replica(board=initial_board(definition))


def apply_command(replica: Replica, cmd: Command) -> Replica:
    """Apply one command; commands must arrive densely, in seq order."""
    if cmd.seq != replica.last_seq + 1:
        raise OutOfOrder(f"expected seq {replica.last_seq + 1}, got {cmd.seq}")
    r = replace(replica, last_seq=cmd.seq)
    if cmd.kind == SET_TILE:
        if not in_bounds(r.board, cmd.coord):
            raise OutOfBounds(f"command writes outside the board: {cmd.coord}")
        i = cmd.coord.row * r.board.cols + cmd.coord.col
        cells = r.board.cells[:i] + (cmd.value,) + r.board.cells[i + 1:]
        return replace(r, board=replace(r.board, cells=cells))
    if cmd.kind == SET_STATE:
        return replace(r, state=cmd.state, outcome=cmd.outcome or r.outcome)
    if cmd.kind == SET_CURRENT_PLAYER:
        idx = next((i for i, p in enumerate(r.players) if p.id == cmd.player), None)
        return replace(r, current_player=idx)
    if cmd.kind == SET_WINNER:
        return replace(r, outcome=Outcome(result=WINNER, player=cmd.player))
    if cmd.kind == PLAYER_JOINED:
        return replace(r, players=r.players + (cmd.joined,))
    if cmd.kind == MESSAGE:
        return r
    raise ValueError(f"unknown command kind {cmd.kind!r}")

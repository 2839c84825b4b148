"""rulegrid: board games as data.

A game is a definition document (board, players, win pattern, rules); rules
are event-condition-action triples interpreted by a small engine; a server
runs matches for live clients by broadcasting a dense command stream; an
analyzer answers playability questions by exhaustive search.
"""

from .analyzer import (
    SearchBudget,
    SearchResult,
    feature_vector,
    legal_events,
    min_players_without_winner,
    ontology_distance,
    same_type,
    winnable,
)
from .dsl import (
    load_definition,
    parse_definition,
    serialize_definition,
    validate_definition,
)
from .engine import (
    apply_action,
    check_winner,
    dispatch_event,
    eval_condition,
    expand_pattern,
    run_rule,
    switch_player,
    validate_rule_graph,
)
from .errors import Diagnostic, GameError
from .games import (
    builtin_corpus,
    sudoku_definition,
    sudoku_legal_move,
    sudoku_solved,
    tictactoe_definition,
)
from .model import (
    Action,
    Board,
    Command,
    CompositePattern,
    Condition,
    Coord,
    Event,
    GameDefinition,
    LinesPattern,
    Outcome,
    Player,
    Replica,
    Rule,
    RunningGame,
    TilesPattern,
    apply_command,
    create_running_game,
    fresh_replica,
    game_start,
    get_cell,
    join_player,
    new_board,
    replica_of,
    set_cell,
    tile_click,
)
from .snapshots import restore, snapshot

__version__ = "0.1.0"

"""Independent oracles and play drivers shared by the test suite.

The oracles here deliberately avoid the production code paths they check:
window enumeration scans raw start cells and direction vectors, winnability
enumerates whole move sequences without memoization, and the solved-grid
check tests permutations directly.
"""

from __future__ import annotations

import random

from rulegrid import legal_events
from rulegrid.model import (
    RunningGame,
    TERMINATED,
    create_running_game,
    game_start,
    join_player,
)
from rulegrid.engine import dispatch_event

DIRECTIONS = {
    "rows": (0, 1),
    "cols": (1, 0),
    "diag": (1, 1),
    "antidiag": (1, -1),
}


def brute_force_windows(rows: int, cols: int, length: int,
                        families=("rows", "cols", "diag", "antidiag")):
    """Every in-bounds straight window, by scanning all start cells."""
    found = []
    for family in families:
        dr, dc = DIRECTIONS[family]
        for r in range(rows):
            for c in range(cols):
                window = [(r + i * dr, c + i * dc) for i in range(length)]
                if all(0 <= rr < rows and 0 <= cc < cols for rr, cc in window):
                    found.append(tuple(window))
    return found


# The standard 3x3 winning lines, spelled out by hand (reading order: the
# three rows, the three columns, the two diagonals).
HAND_LISTED_3X3_LINES = [
    ((0, 0), (0, 1), (0, 2)),
    ((1, 0), (1, 1), (1, 2)),
    ((2, 0), (2, 1), (2, 2)),
    ((0, 0), (1, 0), (2, 0)),
    ((0, 1), (1, 1), (2, 1)),
    ((0, 2), (1, 2), (2, 2)),
    ((0, 0), (1, 1), (2, 2)),
    ((0, 2), (1, 1), (2, 0)),
]


def naive_winnable(rows: int, cols: int, line_len: int, players: int) -> bool:
    """Exhaustive no-memo enumeration of every move sequence.

    Direct mechanics, no rule engine: the mover claims any empty cell, a
    completed window ends the game with a win, a full board without one is a
    dead end. True iff any sequence produces a winner.
    """
    lines = brute_force_windows(rows, cols, line_len)
    by_cell: dict[int, list] = {i: [] for i in range(rows * cols)}
    for line in lines:
        for (r, c) in line:
            by_cell[r * cols + c].append(line)
    board = [0] * (rows * cols)
    total = rows * cols

    def sequences(moves_made: int) -> bool:
        player = (moves_made % players) + 1
        for i in range(total):
            if board[i] != 0:
                continue
            board[i] = player
            won = any(
                all(board[r * cols + c] == player for (r, c) in line)
                for line in by_cell[i]
            )
            deeper = (not won and moves_made + 1 < total
                      and sequences(moves_made + 1))
            board[i] = 0
            if won or deeper:
                return True
        return False

    return sequences(0)


def solved_grid_oracle(grid: list[list[int]], region_rows: int, region_cols: int) -> bool:
    """A grid is solved iff every row, column, and region is a permutation
    of 1..n."""
    n = len(grid)
    want = list(range(1, n + 1))
    for row in grid:
        if sorted(row) != want:
            return False
    for c in range(n):
        if sorted(grid[r][c] for r in range(n)) != want:
            return False
    for r0 in range(0, n, region_rows):
        for c0 in range(0, n, region_cols):
            block = [grid[r0 + dr][c0 + dc]
                     for dr in range(region_rows) for dc in range(region_cols)]
            if sorted(block) != want:
                return False
    return True


# ---------------------------------------------------------------------------
# Play drivers (production paths, used to reach states — not oracles)


def started_game(definition, seed: int = 0, names=None) -> RunningGame:
    rg = create_running_game(definition, "test", seed)
    count = definition.min_players
    for i in range(count):
        name = names[i] if names else f"P{i + 1}"
        rg = join_player(rg, name)
    rg, _, fired = dispatch_event(rg, game_start(actor=1))
    assert fired, "game start must fire on a fresh game"
    return rg


def random_playthrough(definition, seed: int, max_moves: int | None = None):
    """Play random legal moves; returns the list of games after each event."""
    rng = random.Random(seed)
    rg = create_running_game(definition, f"rand-{seed}", seed)
    states = [rg]
    joins = rng.randint(definition.min_players, definition.max_players)
    for i in range(joins):
        rg = join_player(rg, f"P{i + 1}")
        states.append(rg)
    rg, _, _ = dispatch_event(rg, game_start(actor=1))
    states.append(rg)
    limit = max_moves if max_moves is not None else definition.rows * definition.cols + 5
    for _ in range(limit):
        if rg.state == TERMINATED:
            break
        moves = legal_events(rg)
        if not moves:
            break
        rg, _, _ = dispatch_event(rg, rng.choice(moves))
        states.append(rg)
    return states

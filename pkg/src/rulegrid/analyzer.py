"""Playability analysis by exhaustive search, and definition similarity.

"Winnable" is existential and cooperative: can ANY sequence of legal moves,
turns taken in order, end with a winner? That is the question behind the
player-count bound (how many players make winning impossible for everyone),
and it is brute-forcible at desk scale with memoization.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .engine import dispatch_event, expand_pattern
from .errors import SemanticsError
from .model import (
    LinesPattern,
    OWNERSHIP,
    ROUND_ROBIN,
    RunningGame,
    STARTED,
    SYMBOLS,
    TERMINATED,
    WINNER,
    Coord,
    Event,
    GameDefinition,
    TILE_CLICK,
    create_running_game,
    game_start,
    join_player,
)


class SearchResult(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass
class SearchBudget:
    """Caps the number of states a search may expand.

    ``unknown`` results are only ever produced by running out of budget.
    """

    max_states: int
    states: int = 0

    def spend(self) -> bool:
        self.states += 1
        return self.states <= self.max_states

    @property
    def exhausted(self) -> bool:
        return self.states > self.max_states


DEFAULT_MAX_STATES = 2_000_000


def legal_events(rg: RunningGame) -> list[Event]:
    """Tile clicks by the current player that fire at least one rule.

    Symbols games enumerate every candidate value (including 0, the erase);
    ownership games click bare tiles. Terminated and unstarted games have no
    legal tile clicks.
    """
    if rg.state != STARTED:
        return []
    actor = rg.current_player_id
    out = []
    for ev in _candidate_events(rg, actor):
        _, _, fired = dispatch_event(rg, ev)
        if fired:
            out.append(ev)
    return out


def _candidate_events(rg: RunningGame, actor: int | None):
    d = rg.definition
    if d.semantics == SYMBOLS:
        values = [0] + list(range(d.value_domain[0], d.value_domain[1] + 1))
    else:
        values = [None]
    for r in range(d.rows):
        for c in range(d.cols):
            for v in values:
                yield Event(kind=TILE_CLICK, actor=actor, coord=Coord(r, c), value=v)


def _analysis_definition(definition: GameDefinition, players: int) -> GameDefinition:
    """Widen the player bounds to the requested count and fix round-robin turns.

    Random turn order reaches the same positions as round-robin up to player
    relabeling, so fixing the policy loses nothing for reachability questions.
    """
    d = replace(
        definition,
        min_players=players,
        max_players=players,
        turn_policy=ROUND_ROBIN,
    )
    if definition.semantics == OWNERSHIP:
        d = replace(d, value_domain=(1, players))
    return d


def _start_position(definition: GameDefinition, players: int) -> RunningGame:
    rg = create_running_game(_analysis_definition(definition, players), "analysis", seed=0)
    for i in range(players):
        rg = join_player(rg, f"P{i + 1}")
    rg, _, fired = dispatch_event(rg, game_start(actor=1))
    if not fired:
        raise SemanticsError("definition has no game-start rule; nothing to analyze")
    return replace(rg, history=())


def _coord_transforms(rows: int, cols: int):
    """Candidate board symmetries as (name, fn, swaps_axes) triples."""
    maps = [
        ("id", lambda r, c: (r, c), False),
        ("flip_h", lambda r, c: (r, cols - 1 - c), False),
        ("flip_v", lambda r, c: (rows - 1 - r, c), False),
        ("rot180", lambda r, c: (rows - 1 - r, cols - 1 - c), False),
    ]
    if rows == cols:
        n = rows
        maps += [
            ("rot90", lambda r, c: (c, n - 1 - r), True),
            ("rot270", lambda r, c: (n - 1 - c, r), True),
            ("transpose", lambda r, c: (c, r), True),
            ("anti_transpose", lambda r, c: (n - 1 - c, n - 1 - r), True),
        ]
    return maps


def _definition_patterns(d: GameDefinition):
    """Every pattern play can test: the win pattern plus embedded ones."""
    patterns = []
    if d.win_pattern is not None:
        patterns.append(d.win_pattern)
    for rule in d.rules:
        for cond in rule.conditions:
            if cond.pattern is not None:
                patterns.append(cond.pattern)
    return patterns


def _symmetry_perms(d: GameDefinition) -> list[tuple[int, ...]]:
    """Cell-index permutations under which the definition's dynamics are
    invariant: the board transform must map every pattern's expanded group
    set onto itself, and must fix the locked-cell set.

    Conditions and actions are otherwise coordinate-free (they act relative to
    the clicked tile, which transforms along), with one exception: group
    distinctness names a specific axis family, so any rule using it rules out
    the axis-swapping transforms.
    """
    rows, cols = d.rows, d.cols
    group_sets = [
        {frozenset((c.row, c.col) for c in group)
         for group in expand_pattern(p, rows, cols)}
        for p in _definition_patterns(d)
    ]
    locked = set()
    if d.givens is not None:
        locked = {(r, c) for r in range(rows) for c in range(cols) if d.givens[r][c] != 0}
    uses_group_families = any(
        cond.kind == "groups_all_distinct"
        for rule in d.rules for cond in rule.conditions
    )

    perms = []
    for _name, f, swaps_axes in _coord_transforms(rows, cols):
        ok = not (swaps_axes and uses_group_families)
        ok = ok and {f(r, c) for r, c in locked} == locked
        for groups in group_sets:
            if not ok:
                break
            ok = {frozenset(f(r, c) for r, c in g) for g in groups} == groups
        if ok:
            # perm[target_index] = source_index, so applying the permutation
            # is a single indexed gather over the flat cell tuple.
            perm = [0] * (rows * cols)
            for r in range(rows):
                for c in range(cols):
                    tr, tc = f(r, c)
                    perm[tr * cols + tc] = r * cols + c
            perms.append(tuple(perm))
    return perms


def _canonical_key(cells: tuple[int, ...], current: int | None,
                   perms: list[tuple[int, ...]]) -> tuple:
    """Memo key: the lexicographically smallest symmetric image of the board,
    paired with the player to move."""
    if len(perms) > 1:
        cells = min(tuple(cells[i] for i in perm) for perm in perms)
    return (cells, current)


def winnable(definition: GameDefinition, players: int,
             budget: SearchBudget | None = None) -> SearchResult:
    """Can some legal play end with a winner, with this many participants?

    Depth-first search over positions reachable through the rule engine,
    memoized on (board, player to move). FALSE only after exhausting the
    whole reachable space; UNKNOWN only when the budget runs out.
    """
    if definition.semantics != OWNERSHIP:
        raise SemanticsError(
            "winnability analysis applies to ownership games; "
            "completion games are won by solving"
        )
    if budget is None:
        budget = SearchBudget(DEFAULT_MAX_STATES)
    start = _start_position(definition, players)
    perms = _symmetry_perms(start.definition)

    no_win: set[tuple] = set()
    out_of_budget = False

    def dfs(g: RunningGame) -> bool:
        nonlocal out_of_budget
        if not budget.spend():
            out_of_budget = True
            return False
        key = _canonical_key(g.board.cells, g.current_player, perms)
        if key in no_win:
            return False
        for ev in _candidate_events(g, g.current_player_id):
            child, _, fired = dispatch_event(g, ev)
            if not fired:
                continue
            if child.state == TERMINATED:
                if child.outcome is not None and child.outcome.result == WINNER:
                    return True
                continue
            if dfs(replace(child, history=())):
                return True
            if out_of_budget:
                return False
        no_win.add(key)
        return False

    if dfs(start):
        return SearchResult.TRUE
    return SearchResult.UNKNOWN if out_of_budget else SearchResult.FALSE


def min_players_without_winner(definition: GameDefinition, n_max: int,
                               budget: SearchBudget | None = None
                               ) -> int | None | SearchResult:
    """Smallest player count in [2, n_max] at which no one can win.

    Scans upward; returns None when every tested count is winnable, and
    UNKNOWN as soon as any step runs out of budget. Each step gets a fresh
    budget of the same size.
    """
    if n_max < 2:
        raise SemanticsError("n_max must be at least 2")
    max_states = budget.max_states if budget is not None else DEFAULT_MAX_STATES
    for n in range(2, n_max + 1):
        step = SearchBudget(max_states)
        result = winnable(definition, n, step)
        if budget is not None:
            budget.states += step.states
        if result == SearchResult.UNKNOWN:
            return SearchResult.UNKNOWN
        if result == SearchResult.FALSE:
            return n
    return None


# ---------------------------------------------------------------------------
# Definition similarity


@dataclass(frozen=True)
class FeatureVector:
    """The six comparable features of a definition."""

    dims: tuple[int, int]
    pattern: tuple | None  # fingerprint; None when the game has no win pattern
    semantics: str
    turn_policy: str
    player_range: tuple[int, int]
    domain_size: int


def _pattern_fingerprint(p) -> tuple | None:
    if p is None:
        return None
    if isinstance(p, LinesPattern):
        return ("lines", tuple(sorted(p.families)), p.line_len)
    return (type(p).__name__, repr(p))


def feature_vector(d: GameDefinition) -> FeatureVector:
    return FeatureVector(
        dims=(d.rows, d.cols),
        pattern=_pattern_fingerprint(d.win_pattern),
        semantics=d.semantics,
        turn_policy=d.turn_policy,
        player_range=(d.min_players, d.max_players),
        domain_size=d.value_domain[1] - d.value_domain[0] + 1,
    )


def _num(a: int, b: int) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / max(a, b)


def _feature_distances(a: FeatureVector, b: FeatureVector) -> list[float]:
    # Board dims and player range average their two scalar parts; categorical
    # features are all-or-nothing.
    dims = (_num(a.dims[0], b.dims[0]) + _num(a.dims[1], b.dims[1])) / 2

    if a.pattern is None and b.pattern is None:
        pattern = 0.0
    elif a.pattern is None or b.pattern is None:
        pattern = 1.0
    elif (a.pattern[0] == "lines" and b.pattern[0] == "lines"
          and a.pattern[1] == b.pattern[1]):
        pattern = _num(a.pattern[2], b.pattern[2])
    else:
        pattern = 0.0 if a.pattern == b.pattern else 1.0

    semantics = 0.0 if a.semantics == b.semantics else 1.0
    policy = 0.0 if a.turn_policy == b.turn_policy else 1.0
    players = (_num(a.player_range[0], b.player_range[0])
               + _num(a.player_range[1], b.player_range[1])) / 2
    domain = _num(a.domain_size, b.domain_size)
    return [dims, pattern, semantics, policy, players, domain]


DEFAULT_WEIGHTS = (1.0, 1.0, 1.0, 1.0, 1.0, 1.0)


def ontology_distance(a: GameDefinition, b: GameDefinition,
                      weights: tuple[float, ...] = DEFAULT_WEIGHTS) -> float:
    """Weighted mean of per-feature distances; 0 identical, 1 maximally apart.

    The feature construction is a pragmatic stand-in for a real similarity
    measure over game descriptions; weights are configurable for that reason.
    """
    if len(weights) != 6:
        raise ValueError("need one weight per feature (6)")
    total = sum(weights)
    if total <= 0:
        raise ValueError("weights must sum to a positive number")
    parts = _feature_distances(feature_vector(a), feature_vector(b))
    return sum(w * p for w, p in zip(weights, parts)) / total


def same_type(a: GameDefinition, b: GameDefinition, threshold: float,
              weights: tuple[float, ...] = DEFAULT_WEIGHTS) -> bool:
    """Two definitions count as the same game type when their distance is
    within the threshold."""
    if not (0.0 <= threshold <= 1.0):
        raise ValueError("threshold must be in [0, 1]")
    return ontology_distance(a, b, weights) <= threshold

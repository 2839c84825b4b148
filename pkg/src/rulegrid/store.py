"""Server-side state: the definition library and all running games.

Locking model: a store-wide lock guards the maps; each game has its own lock
so events on one game are applied in a total order while different games
proceed in parallel. The engine stays pure — a game is read, transformed, and
swapped back under its lock, so readers always observe fully applied events.
"""

from __future__ import annotations

import os
import secrets
import tempfile
import threading
from pathlib import Path

from .dsl import parse_definition, serialize_definition
from .engine import dispatch_event, rejection_reason
from .errors import (
    AuthError,
    Diagnostic,
    E_SEMANTICS,
    GameError,
    InvalidDefinition,
    IoError,
    NotFound,
    Rejected,
    error_code,
)
from .model import (
    Command,
    Event,
    GAME_START,
    GameDefinition,
    HUMAN,
    NOT_STARTED,
    RunningGame,
    TERMINATED,
    TILE_CLICK,
    all_commands,
    create_running_game,
    join_player,
)
from .games import write_corpus
from .snapshots import restore, snapshot

GAMES_SUBDIR = "games"
DEFINITIONS_SUBDIR = "definitions"


def atomic_write(path: Path, text: str) -> None:
    """Write via a temp file and rename, so a crash never clobbers the old file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except OSError as exc:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise IoError(f"failed to write {path}: {exc}") from exc


class GameStore:
    def __init__(self, data_dir: str | Path, editor_token: str):
        self.data_dir = Path(data_dir)
        self.editor_token = editor_token
        self._lock = threading.Lock()
        self._game_locks: dict[str, threading.Lock] = {}
        self._games: dict[str, RunningGame] = {}
        self._definitions: dict[str, GameDefinition] = {}

    # -- bootstrap ----------------------------------------------------------

    def bootstrap(self) -> None:
        """Create the data directory, seed it with the builtin definitions if
        empty, and load everything present."""
        defs_dir = self.data_dir / DEFINITIONS_SUBDIR
        (self.data_dir / GAMES_SUBDIR).mkdir(parents=True, exist_ok=True)
        defs_dir.mkdir(parents=True, exist_ok=True)
        if not any(defs_dir.glob("*.game.json")):
            write_corpus(defs_dir)
        for path in sorted(defs_dir.glob("*.game.json")):
            definition, diags = parse_definition(path.read_text(encoding="utf-8"))
            if definition is None:
                raise InvalidDefinition(diags)
            self._definitions[definition.name] = definition

    # -- definitions --------------------------------------------------------

    def list_definitions(self) -> list[str]:
        with self._lock:
            return sorted(self._definitions)

    def get_definition(self, name: str) -> GameDefinition:
        with self._lock:
            if name not in self._definitions:
                raise NotFound(f"no definition named {name!r}")
            return self._definitions[name]

    def put_definition(self, name: str, text: str, token: str | None) -> GameDefinition:
        """Validate and store a definition document; requires the editor token.

        Running games keep the definition they started with; only games
        created afterwards see the change.
        """
        if token != self.editor_token:
            raise AuthError("editor token missing or wrong")
        definition, diags = parse_definition(text)
        if definition is None:
            raise InvalidDefinition(diags)
        if definition.name != name:
            raise InvalidDefinition([Diagnostic(
                code=E_SEMANTICS,
                message=f"document name {definition.name!r} does not match {name!r}",
                location="name",
            )])
        atomic_write(
            self.data_dir / DEFINITIONS_SUBDIR / f"{name}.game.json",
            serialize_definition(definition),
        )
        with self._lock:
            self._definitions[name] = definition
        return definition

    # -- games ---------------------------------------------------------------

    def _lock_for(self, game_id: str) -> threading.Lock:
        with self._lock:
            if game_id not in self._games:
                raise NotFound(f"no game {game_id!r}")
            return self._game_locks[game_id]

    def create_game(self, definition_name: str, seed: int | None = None) -> RunningGame:
        definition = self.get_definition(definition_name)
        if seed is None:
            seed = secrets.randbits(63)
        game_id = secrets.token_hex(8)
        rg = create_running_game(definition, game_id, seed)
        with self._lock:
            self._games[game_id] = rg
            self._game_locks[game_id] = threading.Lock()
        return rg

    def get_state(self, game_id: str) -> RunningGame:
        with self._lock:
            if game_id not in self._games:
                raise NotFound(f"no game {game_id!r}")
            return self._games[game_id]

    def join(self, game_id: str, name: str, kind: str = HUMAN) -> tuple[RunningGame, list[Command]]:
        lock = self._lock_for(game_id)
        with lock:
            rg = self._games[game_id]
            before = rg.last_seq
            rg = join_player(rg, name, kind)
            self._games[game_id] = rg
            return rg, all_commands(rg)[before:]

    def submit_event(self, game_id: str, actor: int | None,
                     event: Event) -> tuple[RunningGame, list[Command], list[str]]:
        """Run one event through the rules under the game's total order.

        A dispatch that fires nothing is a rejection: the game is untouched,
        nothing is broadcast, and the reason names the first failed check.
        """
        lock = self._lock_for(game_id)
        with lock:
            rg = self._games[game_id]
            event = Event(
                kind=event.kind, actor=actor, coord=event.coord, value=event.value,
                name=event.name, player_kind=event.player_kind,
            )
            if event.kind == TILE_CLICK:
                if actor is None or all(p.id != actor for p in rg.players):
                    raise Rejected("unknown_player", f"no joined player with id {actor}")
            if event.kind == GAME_START:
                if rg.state == NOT_STARTED and len(rg.players) < rg.definition.min_players:
                    raise Rejected(
                        "not_enough_players",
                        f"needs {rg.definition.min_players} players, "
                        f"has {len(rg.players)}",
                    )
            try:
                rg2, commands, fired = dispatch_event(rg, event)
            except GameError as exc:
                raise Rejected(error_code(exc), str(exc)) from exc
            if not fired:
                code, reason = rejection_reason(rg, event)
                raise Rejected(code, reason)
            self._games[game_id] = rg2
            if rg2.state == TERMINATED:
                self._persist_locked(rg2)
            return rg2, commands, fired

    def commands_since(self, game_id: str, since: int) -> list[Command]:
        rg = self.get_state(game_id)
        return [c for c in all_commands(rg) if c.seq > since]

    # -- persistence ----------------------------------------------------------

    def _game_path(self, game_id: str) -> Path:
        return self.data_dir / GAMES_SUBDIR / f"{game_id}.json"

    def _persist_locked(self, rg: RunningGame) -> None:
        atomic_write(self._game_path(rg.id), snapshot(rg))

    def persist_game(self, game_id: str) -> Path:
        lock = self._lock_for(game_id)
        with lock:
            rg = self._games[game_id]
            self._persist_locked(rg)
            return self._game_path(game_id)

    def load_game(self, game_id: str) -> RunningGame:
        """Restore a game from disk into the live store."""
        path = self._game_path(game_id)
        if not path.exists():
            raise NotFound(f"no saved game {game_id!r}")
        rg = restore(path.read_text(encoding="utf-8"))
        with self._lock:
            self._games[rg.id] = rg
            self._game_locks.setdefault(rg.id, threading.Lock())
        return rg

"""Canonical JSON form of a running game, for persistence and the wire.

``restore(snapshot(game))`` is structural identity, including history, seed,
and draw count, so a saved game resumes exactly where it stopped. Canonical
form (sorted keys, 2-space indent) keeps snapshots byte-stable for golden
tests.
"""

from __future__ import annotations

import json

from .dsl import definition_doc, definition_from_doc
from .errors import CorruptSnapshot
from .model import (
    Board,
    Command,
    Coord,
    Event,
    Outcome,
    Player,
    Replica,
    RunningGame,
    STATES,
)


def _coord_doc(c: Coord | None):
    return None if c is None else [c.row, c.col]


def _coord_from(v) -> Coord | None:
    if v is None:
        return None
    return Coord(int(v[0]), int(v[1]))


def player_doc(p: Player) -> dict:
    return {"id": p.id, "name": p.name, "kind": p.kind}


def _player_from(v) -> Player:
    return Player(id=int(v["id"]), name=str(v["name"]), kind=str(v["kind"]))


def outcome_doc(o: Outcome | None):
    if o is None:
        return None
    doc = {"result": o.result}
    if o.player is not None:
        doc["player"] = o.player
    return doc


def _outcome_from(v) -> Outcome | None:
    if v is None:
        return None
    return Outcome(result=str(v["result"]), player=v.get("player"))


def event_doc(ev: Event) -> dict:
    doc = {"kind": ev.kind}
    if ev.actor is not None:
        doc["actor"] = ev.actor
    if ev.coord is not None:
        doc["coord"] = _coord_doc(ev.coord)
    if ev.value is not None:
        doc["value"] = ev.value
    if ev.name is not None:
        doc["name"] = ev.name
    if ev.player_kind is not None:
        doc["player_kind"] = ev.player_kind
    return doc


def event_from_doc(v: dict) -> Event:
    return Event(
        kind=str(v["kind"]),
        actor=v.get("actor"),
        coord=_coord_from(v.get("coord")),
        value=v.get("value"),
        name=v.get("name"),
        player_kind=v.get("player_kind"),
    )


def command_doc(cmd: Command) -> dict:
    doc = {"seq": cmd.seq, "kind": cmd.kind}
    if cmd.coord is not None:
        doc["coord"] = _coord_doc(cmd.coord)
    if cmd.value is not None:
        doc["value"] = cmd.value
    if cmd.state is not None:
        doc["state"] = cmd.state
    if cmd.outcome is not None:
        doc["outcome"] = outcome_doc(cmd.outcome)
    if cmd.player is not None:
        doc["player"] = cmd.player
    if cmd.joined is not None:
        doc["joined"] = player_doc(cmd.joined)
    if cmd.text is not None:
        doc["text"] = cmd.text
    return doc


def command_from_doc(v: dict) -> Command:
    return Command(
        seq=int(v["seq"]),
        kind=str(v["kind"]),
        coord=_coord_from(v.get("coord")),
        value=v.get("value"),
        state=v.get("state"),
        outcome=_outcome_from(v.get("outcome")),
        player=v.get("player"),
        joined=_player_from(v["joined"]) if v.get("joined") is not None else None,
        text=v.get("text"),
    )


def board_doc(board: Board) -> dict:
    return {
        "rows": board.rows,
        "cols": board.cols,
        "cells": board.grid(),
        "locked": sorted([c.row, c.col] for c in board.locked),
    }


def board_from_doc(v: dict) -> Board:
    rows, cols = int(v["rows"]), int(v["cols"])
    grid = v["cells"]
    cells = tuple(int(x) for row in grid for x in row)
    if len(cells) != rows * cols:
        raise CorruptSnapshot("board cell count does not match its dimensions")
    locked = frozenset(Coord(int(r), int(c)) for r, c in v["locked"])
    return Board(rows=rows, cols=cols, cells=cells, locked=locked)


def game_doc(rg: RunningGame) -> dict:
    return {
        "id": rg.id,
        "definition": definition_doc(rg.definition),
        "board": board_doc(rg.board),
        "players": [player_doc(p) for p in rg.players],
        "current_player": rg.current_player,
        "state": rg.state,
        "outcome": outcome_doc(rg.outcome),
        "history": [
            {"event": event_doc(ev), "commands": [command_doc(c) for c in cmds]}
            for ev, cmds in rg.history
        ],
        "rng_seed": rg.rng_seed,
        "rng_calls": rg.rng_calls,
    }


def snapshot(rg: RunningGame) -> str:
    return json.dumps(game_doc(rg), sort_keys=True, indent=2) + "\n"


def game_from_doc(doc: dict) -> RunningGame:
    try:
        definition, diags = definition_from_doc(doc["definition"])
        if definition is None:
            raise CorruptSnapshot(
                "embedded definition is invalid: "
                + "; ".join(d.code for d in diags)
            )
        state = str(doc["state"])
        if state not in STATES:
            raise CorruptSnapshot(f"unknown state {state!r}")
        history = tuple(
            (event_from_doc(entry["event"]),
             tuple(command_from_doc(c) for c in entry["commands"]))
            for entry in doc["history"]
        )
        return RunningGame(
            id=str(doc["id"]),
            definition=definition,
            board=board_from_doc(doc["board"]),
            players=tuple(_player_from(p) for p in doc["players"]),
            current_player=doc["current_player"],
            state=state,
            outcome=_outcome_from(doc["outcome"]),
            history=history,
            rng_seed=int(doc["rng_seed"]),
            rng_calls=int(doc["rng_calls"]),
        )
    except CorruptSnapshot:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CorruptSnapshot(f"malformed snapshot: {exc}") from exc


def restore(text: str) -> RunningGame:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptSnapshot(f"not valid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise CorruptSnapshot("snapshot must be a JSON object")
    return game_from_doc(doc)


def replica_from_game_doc(doc: dict) -> Replica:
    """Client bootstrap: build a replica from a full state document."""
    try:
        board = board_from_doc(doc["board"])
        if "last_seq" in doc:
            last_seq = int(doc["last_seq"])
        else:
            last_seq = sum(len(entry["commands"]) for entry in doc["history"])
        return Replica(
            board=board,
            players=tuple(_player_from(p) for p in doc["players"]),
            current_player=doc["current_player"],
            state=str(doc["state"]),
            outcome=_outcome_from(doc["outcome"]),
            last_seq=last_seq,
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CorruptSnapshot(f"malformed state document: {exc}") from exc

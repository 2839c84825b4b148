"""Command line entry point.

Subcommands:
    serve     run the HTTP service from a config file
    validate  check a definition file, print diagnostics
    play      run a scripted game headlessly and print the transcript
    analyze   winnability / player-count bound by exhaustive search
    distance  similarity of two definition files

Exit codes: 0 ok, 1 validation problems, 2 I/O problems, 3 move rejected
mid-script, 4 analysis unsupported for the game type.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analyzer import (
    SearchBudget,
    SearchResult,
    min_players_without_winner,
    ontology_distance,
    winnable,
)
from .dsl import parse_definition
from .engine import dispatch_event, rejection_reason
from .errors import GameError
from .model import (
    OWNERSHIP,
    WINNER,
    DRAW,
    TERMINATED,
    create_running_game,
    game_start,
    join_player,
    tile_click,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_REJECTED = 3
EXIT_UNSUPPORTED = 4


def _load_definition(path: str):
    """Returns (definition, diagnostics, exit_code)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None, [], EXIT_IO
    definition, diags = parse_definition(text)
    if definition is None:
        return None, diags, EXIT_VALIDATION
    return definition, [], EXIT_OK


def cmd_validate(args) -> int:
    definition, diags, code = _load_definition(args.file)
    if code == EXIT_IO:
        return EXIT_IO
    if args.json:
        print(json.dumps({"diagnostics": [d.as_dict() for d in diags]}, indent=2))
    else:
        for d in diags:
            print(f"{d.code} {d.location}: {d.message}")
    return EXIT_OK if definition is not None else EXIT_VALIDATION


def cmd_play(args) -> int:
    definition, diags, code = _load_definition(args.file)
    if definition is None:
        for d in diags:
            print(f"{d.code} {d.location}: {d.message}", file=sys.stderr)
        return code
    try:
        script = json.loads(Path(args.script).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"error: cannot read {args.script}: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: script is not valid JSON: {exc.msg}", file=sys.stderr)
        return EXIT_VALIDATION
    if not isinstance(script, list):
        print("error: script must be a JSON list of moves", file=sys.stderr)
        return EXIT_VALIDATION

    wanted = max([definition.min_players]
                 + [int(m.get("player", 1)) for m in script if isinstance(m, dict)])
    players = min(wanted, definition.max_players)
    rg = create_running_game(definition, "cli", seed=args.seed)
    transcript: list[dict] = []
    for i in range(players):
        rg = join_player(rg, f"Player{i + 1}")
    rg, _, fired = dispatch_event(rg, game_start(actor=1))
    transcript.append({"step": "start", "fired": fired})

    exit_code = EXIT_OK
    for i, move in enumerate(script):
        ev = tile_click(int(move["player"]), int(move["row"]), int(move["col"]),
                        move.get("value"))
        try:
            rg2, _, fired = dispatch_event(rg, ev)
        except GameError as exc:
            transcript.append({"step": i + 1, "move": move, "rejected": str(exc)})
            exit_code = EXIT_REJECTED
            break
        if not fired:
            _, reason = rejection_reason(rg, ev)
            transcript.append({"step": i + 1, "move": move, "rejected": reason})
            exit_code = EXIT_REJECTED
            break
        rg = rg2
        transcript.append({"step": i + 1, "move": move, "fired": fired})

    final = {"state": rg.state}
    if rg.state == TERMINATED and rg.outcome is not None:
        final["outcome"] = rg.outcome.result
        if rg.outcome.player is not None:
            final["winner"] = rg.outcome.player

    if args.json:
        print(json.dumps({"transcript": transcript, "final": final,
                          "board": rg.board.grid()}, indent=2))
        return exit_code

    for entry in transcript:
        if entry.get("step") == "start":
            print(f"start fired: {', '.join(entry['fired'])}")
        elif "rejected" in entry:
            m = entry["move"]
            print(f"move {entry['step']}: player {m['player']} -> "
                  f"({m['row']},{m['col']}) rejected: {entry['rejected']}")
        else:
            m = entry["move"]
            print(f"move {entry['step']}: player {m['player']} -> "
                  f"({m['row']},{m['col']}) fired: {', '.join(entry['fired'])}")
    for row in rg.board.grid():
        print(" ".join(str(v) for v in row))
    if final.get("outcome") == WINNER:
        print(f"winner: {final['winner']}")
    elif final.get("outcome") == DRAW:
        print("draw")
    else:
        print(f"state: {rg.state}")
    return exit_code


def cmd_analyze(args) -> int:
    definition, diags, code = _load_definition(args.file)
    if definition is None:
        for d in diags:
            print(f"{d.code} {d.location}: {d.message}", file=sys.stderr)
        return code
    if definition.semantics != OWNERSHIP:
        print("error: winnability analysis applies to ownership games only",
              file=sys.stderr)
        return EXIT_UNSUPPORTED

    budget = SearchBudget(args.budget)
    try:
        return _run_analysis(args, definition, budget)
    except GameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


def _run_analysis(args, definition, budget) -> int:
    if args.mode == "winnable":
        result = winnable(definition, args.players, budget)
        report = {
            "mode": "winnable",
            "players": args.players,
            "result": result.value,
            "states_explored": budget.states,
            "budget_exhausted": budget.exhausted,
        }
        line = f"winnable with {args.players} players: {result.value}"
    else:
        result = min_players_without_winner(definition, args.max, budget)
        if result is SearchResult.UNKNOWN:
            value = "unknown"
        elif result is None:
            value = "none"
        else:
            value = result
        report = {
            "mode": "min-players",
            "n_max": args.max,
            "result": value,
            "states_explored": budget.states,
            "budget_exhausted": value == "unknown",
        }
        line = f"smallest player count with no possible winner (up to {args.max}): {value}"

    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(line)
        print(f"states explored: {report['states_explored']}")
    return EXIT_OK


def cmd_distance(args) -> int:
    a, diags_a, code_a = _load_definition(args.file_a)
    if a is None:
        for d in diags_a:
            print(f"{d.code} {d.location}: {d.message}", file=sys.stderr)
        return code_a
    b, diags_b, code_b = _load_definition(args.file_b)
    if b is None:
        for d in diags_b:
            print(f"{d.code} {d.location}: {d.message}", file=sys.stderr)
        return code_b
    d = ontology_distance(a, b)
    if args.json:
        print(json.dumps({"a": a.name, "b": b.name, "distance": d}, indent=2))
    else:
        print(f"{d:.6f}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .config import load_config
    from .service import create_app

    try:
        config = load_config(args.config)
        config.check()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rulegrid", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True, help="path to the JSON config file")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("validate", help="validate a definition file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("play", help="play a scripted game headlessly")
    p.add_argument("file")
    p.add_argument("--script", required=True,
                   help="JSON list of {player, row, col, value?}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("analyze", help="playability analysis")
    p.add_argument("file")
    mode = p.add_subparsers(dest="mode", required=True)
    w = mode.add_parser("winnable", help="can anyone win with N players?")
    w.add_argument("--players", type=int, required=True)
    m = mode.add_parser("min-players", help="smallest player count with no winner")
    m.add_argument("--max", type=int, required=True)
    for q in (w, m):
        q.add_argument("--budget", type=int, default=2_000_000,
                       help="max states to explore before answering unknown")
        q.add_argument("--json", action="store_true")
    w.set_defaults(func=cmd_analyze, mode="winnable")
    m.set_defaults(func=cmd_analyze, mode="min-players")

    p = sub.add_parser("distance", help="similarity of two definitions")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_distance)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

// The client-side copy of a game. It changes in exactly two ways: replacing
// it with a full server snapshot, or applying server commands in seq order.
// No other code path may touch the board.

import { CommandDoc, OutcomeDoc, PlayerDoc, StateDoc } from "./protocol.js";

export class OutOfOrderError extends Error {
  constructor(expected: number, got: number) {
    super(`expected seq ${expected}, got ${got}`);
  }
}

export interface GameView {
  gameId: string;
  rows: number;
  cols: number;
  cells: number[]; // row-major
  locked: Set<string>; // "r,c"
  players: PlayerDoc[];
  currentPlayer: number | null; // index into players
  state: string;
  outcome: OutcomeDoc | null;
  lastSeq: number;
}

export function lockKey(row: number, col: number): string {
  return `${row},${col}`;
}

export function viewFromState(doc: StateDoc): GameView {
  return {
    gameId: doc.id,
    rows: doc.board.rows,
    cols: doc.board.cols,
    cells: doc.board.cells.flat(),
    locked: new Set(doc.board.locked.map(([r, c]) => lockKey(r, c))),
    players: [...doc.players],
    currentPlayer: doc.current_player,
    state: doc.state,
    outcome: doc.outcome,
    lastSeq: doc.last_seq,
  };
}

export function applyCommand(view: GameView, cmd: CommandDoc): GameView {
  if (cmd.seq !== view.lastSeq + 1) {
    throw new OutOfOrderError(view.lastSeq + 1, cmd.seq);
  }
  const next: GameView = { ...view, cells: view.cells, players: view.players, lastSeq: cmd.seq };
  switch (cmd.kind) {
    case "set_tile": {
      const [r, c] = cmd.coord!;
      const cells = view.cells.slice();
      cells[r * view.cols + c] = cmd.value!;
      next.cells = cells;
      break;
    }
    case "set_state":
      next.state = cmd.state!;
      if (cmd.outcome) next.outcome = cmd.outcome;
      break;
    case "set_current_player": {
      const idx = view.players.findIndex((p) => p.id === cmd.player);
      next.currentPlayer = idx >= 0 ? idx : null;
      break;
    }
    case "set_winner":
      next.outcome = { result: "winner", player: cmd.player };
      break;
    case "player_joined":
      next.players = [...view.players, cmd.joined!];
      break;
    case "message":
      break; // surfaced elsewhere; no state change
    default:
      throw new Error(`unknown command kind ${cmd.kind}`);
  }
  return next;
}

export function applyCommands(view: GameView, commands: CommandDoc[]): GameView {
  for (const cmd of commands) view = applyCommand(view, cmd);
  return view;
}

export function currentPlayerId(view: GameView): number | null {
  if (view.currentPlayer === null) return null;
  const player = view.players[view.currentPlayer];
  return player ? player.id : null;
}

import { describe, expect, it } from "vitest";

import { applyCommand, applyCommands, currentPlayerId, OutOfOrderError, viewFromState }
  from "../src/replica.js";
import { CommandDoc, StateDoc } from "../src/protocol.js";

const baseState: StateDoc = {
  id: "g1",
  definition: {
    name: "ttt-3x3",
    rows: 3,
    cols: 3,
    semantics: "ownership",
    value_domain: { lo: 1, hi: 2 },
    min_players: 2,
    max_players: 2,
    turn_policy: "round_robin",
    rules: [],
  },
  board: { rows: 3, cols: 3, cells: [[0, 0, 0], [0, 0, 0], [0, 0, 0]], locked: [] },
  players: [],
  current_player: null,
  state: "not_started",
  outcome: null,
  last_seq: 0,
};

const joinAlice: CommandDoc = {
  seq: 1, kind: "player_joined", joined: { id: 1, name: "Alice", kind: "human" },
};
const joinBob: CommandDoc = {
  seq: 2, kind: "player_joined", joined: { id: 2, name: "Bob", kind: "human" },
};

describe("viewFromState", () => {
  it("flattens the board and carries the seq", () => {
    const view = viewFromState(baseState);
    expect(view.cells).toHaveLength(9);
    expect(view.lastSeq).toBe(0);
    expect(view.state).toBe("not_started");
  });

  it("keeps locked givens", () => {
    const doc = structuredClone(baseState);
    doc.board.locked = [[0, 0], [2, 2]];
    const view = viewFromState(doc);
    expect(view.locked.has("0,0")).toBe(true);
    expect(view.locked.has("1,1")).toBe(false);
  });
});

describe("applyCommand", () => {
  it("applies a full start sequence", () => {
    let view = viewFromState(baseState);
    view = applyCommands(view, [
      joinAlice,
      joinBob,
      { seq: 3, kind: "set_state", state: "started" },
      { seq: 4, kind: "set_current_player", player: 1 },
      { seq: 5, kind: "message", text: "Game started" },
      { seq: 6, kind: "set_tile", coord: [0, 0], value: 1 },
      { seq: 7, kind: "set_current_player", player: 2 },
    ]);
    expect(view.state).toBe("started");
    expect(view.cells[0]).toBe(1);
    expect(currentPlayerId(view)).toBe(2);
    expect(view.lastSeq).toBe(7);
  });

  it("records a winner and termination", () => {
    let view = viewFromState(baseState);
    view = applyCommands(view, [
      joinAlice,
      joinBob,
      { seq: 3, kind: "set_winner", player: 1 },
      { seq: 4, kind: "set_state", state: "terminated",
        outcome: { result: "winner", player: 1 } },
    ]);
    expect(view.state).toBe("terminated");
    expect(view.outcome).toEqual({ result: "winner", player: 1 });
  });

  it("rejects a seq gap", () => {
    const view = viewFromState(baseState);
    expect(() => applyCommand(view, { seq: 2, kind: "message" }))
      .toThrow(OutOfOrderError);
  });

  it("rejects a replay of an old seq", () => {
    let view = viewFromState(baseState);
    view = applyCommand(view, joinAlice);
    expect(() => applyCommand(view, joinAlice)).toThrow(OutOfOrderError);
  });

  it("does not mutate the previous view", () => {
    const view = viewFromState(baseState);
    applyCommand(view, { seq: 1, kind: "set_tile", coord: [1, 1], value: 2 });
    expect(view.cells[4]).toBe(0);
    expect(view.lastSeq).toBe(0);
  });
});

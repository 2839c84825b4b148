import { describe, expect, it } from "vitest";

import { ApiError } from "../src/api.js";
import {
  diagnosticsAt,
  openSession,
  saveSession,
  setLineFamilies,
  setLineLength,
} from "../src/editor.js";
import { DefinitionDoc } from "../src/protocol.js";

function linesDefinition(): DefinitionDoc {
  return {
    name: "ttt-4x4-len4", rows: 4, cols: 4, semantics: "ownership",
    value_domain: { lo: 1, hi: 2 }, min_players: 2, max_players: 2,
    turn_policy: "round_robin",
    win_pattern: { lines: { len: 4, families: ["rows", "cols", "diag", "antidiag"] } },
    rules: [],
  };
}

describe("document edits", () => {
  it("changes the line length without touching the original", () => {
    const doc = linesDefinition();
    const edited = setLineLength(doc, 3);
    expect(edited.win_pattern!.lines!.len).toBe(3);
    expect(doc.win_pattern!.lines!.len).toBe(4);
  });

  it("keeps families in canonical order", () => {
    const edited = setLineFamilies(linesDefinition(), ["antidiag", "rows"]);
    expect(edited.win_pattern!.lines!.families).toEqual(["rows", "antidiag"]);
  });

  it("refuses on tile-list patterns", () => {
    const doc = linesDefinition();
    doc.win_pattern = { tiles: [[[0, 0]]] };
    expect(() => setLineLength(doc, 3)).toThrow();
  });
});

describe("diagnosticsAt", () => {
  it("matches a location and its children", () => {
    const diags = [
      { code: "E_SEMANTICS", message: "x", location: "rules[1].conditions[0].kind" },
      { code: "E_OUT_OF_BOUNDS", message: "y", location: "win_pattern" },
    ];
    expect(diagnosticsAt(diags, "rules[1]")).toHaveLength(1);
    expect(diagnosticsAt(diags, "win_pattern")).toHaveLength(1);
    expect(diagnosticsAt(diags, "rules[2]")).toHaveLength(0);
  });
});

describe("saveSession", () => {
  function fakeApi(fail?: ApiError) {
    const calls: unknown[] = [];
    return {
      calls,
      putDefinition: async (name: string, doc: DefinitionDoc, token: string) => {
        calls.push([name, doc, token]);
        if (fail) throw fail;
        return { name };
      },
    };
  }

  it("clears the dirty flag on success", async () => {
    const session = openSession(linesDefinition(), "tok");
    session.dirty = true;
    const api = fakeApi();
    expect(await saveSession(api as never, session)).toBe("saved");
    expect(session.dirty).toBe(false);
    expect(api.calls).toHaveLength(1);
  });

  it("keeps the document and surfaces diagnostics on 422", async () => {
    const session = openSession(linesDefinition(), "tok");
    session.dirty = true;
    const err = new ApiError(422, "invalid_definition", "bad",
                             [{ code: "E_SEMANTICS", message: "m", location: "rows" }]);
    expect(await saveSession(fakeApi(err) as never, session)).toBe("invalid");
    expect(session.dirty).toBe(true);
    expect(session.diagnostics).toHaveLength(1);
  });

  it("reports a bad token without losing work", async () => {
    const session = openSession(linesDefinition(), "wrong");
    session.dirty = true;
    const err = new ApiError(401, "auth", "editor token missing or wrong");
    expect(await saveSession(fakeApi(err) as never, session)).toBe("unauthorized");
    expect(session.dirty).toBe(true);
  });
});

// Rules editor: a working copy of a definition document, edited through
// enum-constrained form controls and saved through the server (which
// re-validates and answers with diagnostics we render inline).

import { ApiClient, ApiError } from "./api.js";
import {
  ACTION_KINDS,
  CONDITION_KINDS,
  DefinitionDoc,
  DiagnosticDoc,
  LINE_FAMILIES,
  RuleDoc,
} from "./protocol.js";

export interface EditorSession {
  doc: DefinitionDoc;
  dirty: boolean;
  token: string;
  diagnostics: DiagnosticDoc[];
}

export function openSession(doc: DefinitionDoc, token: string): EditorSession {
  return { doc: structuredClone(doc), dirty: false, token, diagnostics: [] };
}

export function touch(session: EditorSession): void {
  session.dirty = true;
}

// -- pure document edits (unit-tested) --------------------------------------

export function setLineLength(doc: DefinitionDoc, len: number): DefinitionDoc {
  const next = structuredClone(doc);
  if (!next.win_pattern?.lines) {
    throw new Error("definition's win pattern is not line-based");
  }
  next.win_pattern.lines.len = len;
  return next;
}

export function setLineFamilies(doc: DefinitionDoc, families: string[]): DefinitionDoc {
  const next = structuredClone(doc);
  if (!next.win_pattern?.lines) {
    throw new Error("definition's win pattern is not line-based");
  }
  next.win_pattern.lines.families = LINE_FAMILIES.filter((f) => families.includes(f));
  return next;
}

export function diagnosticsAt(diags: DiagnosticDoc[], location: string): DiagnosticDoc[] {
  return diags.filter((d) => d.location === location || d.location.startsWith(location + "."));
}

export async function saveSession(api: ApiClient, session: EditorSession):
    Promise<"saved" | "invalid" | "unauthorized"> {
  try {
    await api.putDefinition(session.doc.name, session.doc, session.token);
    session.dirty = false;
    session.diagnostics = [];
    return "saved";
  } catch (err) {
    if (err instanceof ApiError && err.status === 422) {
      session.diagnostics = err.diagnostics;
      return "invalid";
    }
    if (err instanceof ApiError && err.status === 401) {
      return "unauthorized";
    }
    throw err;
  }
}

// -- form rendering ----------------------------------------------------------

type Rerender = () => void;

function field(label: string, input: HTMLElement): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "field";
  const span = document.createElement("span");
  span.textContent = label;
  wrap.append(span, input);
  return wrap;
}

function numberInput(value: number, onInput: (v: number) => void): HTMLInputElement {
  const el = document.createElement("input");
  el.type = "number";
  el.value = String(value);
  el.addEventListener("change", () => onInput(Number(el.value)));
  return el;
}

function select(options: readonly string[], value: string,
                onInput: (v: string) => void): HTMLSelectElement {
  const el = document.createElement("select");
  for (const opt of options) {
    const o = document.createElement("option");
    o.value = opt;
    o.textContent = opt;
    if (opt === value) o.selected = true;
    el.appendChild(o);
  }
  el.addEventListener("change", () => onInput(el.value));
  return el;
}

function diagnosticsBlock(diags: DiagnosticDoc[], location: string): HTMLElement | null {
  const here = diagnosticsAt(diags, location);
  if (here.length === 0) return null;
  const el = document.createElement("div");
  el.className = "diagnostics";
  for (const d of here) {
    const line = document.createElement("div");
    line.textContent = `${d.code} ${d.location}: ${d.message}`;
    el.appendChild(line);
  }
  return el;
}

function renderPatternEditor(session: EditorSession, rerender: Rerender): HTMLElement {
  const doc = session.doc;
  const box = document.createElement("fieldset");
  const legend = document.createElement("legend");
  legend.textContent = "Win pattern";
  box.appendChild(legend);
  const diag = diagnosticsBlock(session.diagnostics, "win_pattern");
  if (diag) box.appendChild(diag);

  if (doc.win_pattern?.lines) {
    const lines = doc.win_pattern.lines;
    box.appendChild(field("line length", numberInput(lines.len, (v) => {
      lines.len = v;
      touch(session);
    })));
    const fams = document.createElement("div");
    fams.className = "families";
    for (const family of LINE_FAMILIES) {
      const label = document.createElement("label");
      const cb = document.createElement("input");
      cb.type = "checkbox";
      cb.checked = lines.families.includes(family);
      cb.addEventListener("change", () => {
        session.doc = cb.checked
          ? setLineFamilies(doc, [...lines.families, family])
          : setLineFamilies(doc, lines.families.filter((f) => f !== family));
        touch(session);
        rerender();
      });
      label.append(cb, document.createTextNode(family));
      fams.appendChild(label);
    }
    box.appendChild(field("families", fams));
  } else if (doc.win_pattern) {
    // tiles / composite patterns: structured JSON editing
    const area = document.createElement("textarea");
    area.value = JSON.stringify(doc.win_pattern, null, 2);
    area.addEventListener("change", () => {
      try {
        doc.win_pattern = JSON.parse(area.value);
        touch(session);
      } catch {
        area.classList.add("bad-json");
      }
    });
    box.appendChild(field("pattern (JSON)", area));
  } else {
    const note = document.createElement("p");
    note.textContent = "This game has no win pattern (completion game).";
    box.appendChild(note);
  }
  return box;
}

function renderRule(session: EditorSession, rule: RuleDoc, index: number,
                    rerender: Rerender): HTMLElement {
  const box = document.createElement("fieldset");
  box.className = "rule";
  const legend = document.createElement("legend");
  legend.textContent = rule.name;
  box.appendChild(legend);
  const diag = diagnosticsBlock(session.diagnostics, `rules[${index}]`);
  if (diag) box.appendChild(diag);

  const onValues = ["(component only)", "game_start", "tile_click", "player_join",
                    "termination_check"];
  box.appendChild(field("on event", select(onValues, rule.on ?? "(component only)", (v) => {
    rule.on = v === "(component only)" ? null : v;
    touch(session);
  })));

  const conditions = document.createElement("div");
  conditions.className = "conditions";
  rule.conditions.forEach((cond, ci) => {
    const row = document.createElement("div");
    row.className = "condition-row";
    row.appendChild(select(CONDITION_KINDS, cond.kind, (v) => {
      rule.conditions[ci] = { kind: v };
      touch(session);
      rerender();
    }));
    if (cond.kind === "game_type_is") {
      const input = document.createElement("input");
      input.value = cond.name ?? "";
      input.addEventListener("change", () => {
        cond.name = input.value;
        touch(session);
      });
      row.appendChild(input);
    } else if (cond.kind === "state_is") {
      row.appendChild(select(["not_started", "started", "terminated"],
                             cond.state ?? "started", (v) => {
        cond.state = v;
        touch(session);
      }));
    } else if (cond.kind === "groups_all_distinct") {
      row.appendChild(select(["rows", "cols", "regions"], cond.groups ?? "rows", (v) => {
        cond.groups = v;
        touch(session);
      }));
    } else if (cond.kind === "pattern_owned_by_same_player") {
      const note = document.createElement("span");
      note.className = "hint";
      note.textContent = cond.pattern ? "(embedded pattern)" : "(uses the win pattern above)";
      row.appendChild(note);
    }
    const remove = document.createElement("button");
    remove.textContent = "✕";
    remove.addEventListener("click", () => {
      rule.conditions.splice(ci, 1);
      touch(session);
      rerender();
    });
    row.appendChild(remove);
    conditions.appendChild(row);
  });
  const addCond = document.createElement("button");
  addCond.textContent = "+ condition";
  addCond.addEventListener("click", () => {
    rule.conditions.push({ kind: "state_is", state: "started" });
    touch(session);
    rerender();
  });
  conditions.appendChild(addCond);
  box.appendChild(field("conditions", conditions));

  const actions = document.createElement("div");
  actions.className = "actions";
  rule.actions.forEach((action, ai) => {
    const row = document.createElement("div");
    row.className = "action-row";
    row.appendChild(select(ACTION_KINDS, action.kind, (v) => {
      rule.actions[ai] = v === "send_message" ? { kind: v, text: "" } : { kind: v };
      touch(session);
      rerender();
    }));
    if (action.kind === "send_message") {
      const input = document.createElement("input");
      input.value = action.text ?? "";
      input.addEventListener("change", () => {
        action.text = input.value;
        touch(session);
      });
      row.appendChild(input);
    }
    const remove = document.createElement("button");
    remove.textContent = "✕";
    remove.addEventListener("click", () => {
      rule.actions.splice(ai, 1);
      touch(session);
      rerender();
    });
    row.appendChild(remove);
    actions.appendChild(row);
  });
  const addAction = document.createElement("button");
  addAction.textContent = "+ action";
  addAction.addEventListener("click", () => {
    rule.actions.push({ kind: "send_message", text: "" });
    touch(session);
    rerender();
  });
  actions.appendChild(addAction);
  box.appendChild(field("actions", actions));

  const comps = document.createElement("input");
  comps.value = rule.components.join(", ");
  comps.addEventListener("change", () => {
    rule.components = comps.value.split(",").map((s) => s.trim()).filter(Boolean);
    touch(session);
  });
  box.appendChild(field("components", comps));
  return box;
}

export function renderEditor(root: HTMLElement, api: ApiClient, session: EditorSession,
                             onSaved: () => void): void {
  const rerender = () => renderEditor(root, api, session, onSaved);
  root.innerHTML = "";

  const head = document.createElement("div");
  head.className = "editor-head";
  const title = document.createElement("h2");
  title.textContent = `Edit: ${session.doc.name}`;
  const dirty = document.createElement("span");
  dirty.className = "dirty";
  dirty.textContent = session.dirty ? "unsaved changes" : "";
  head.append(title, dirty);
  root.appendChild(head);

  const topDiag = diagnosticsBlock(session.diagnostics, "");
  if (topDiag) root.appendChild(topDiag);

  root.appendChild(renderPatternEditor(session, rerender));

  session.doc.rules.forEach((rule, i) => {
    root.appendChild(renderRule(session, rule, i, rerender));
  });

  const controls = document.createElement("div");
  controls.className = "editor-controls";
  const tokenInput = document.createElement("input");
  tokenInput.type = "password";
  tokenInput.placeholder = "editor token";
  tokenInput.value = session.token;
  tokenInput.addEventListener("change", () => {
    session.token = tokenInput.value;
  });
  const save = document.createElement("button");
  save.textContent = "Save";
  save.addEventListener("click", () => {
    void (async () => {
      const result = await saveSession(api, session);
      if (result === "unauthorized") {
        tokenInput.classList.add("bad-token");
        tokenInput.focus();
      }
      rerender();
      if (result === "saved") onSaved();
    })();
  });
  controls.append(field("token", tokenInput), save);
  root.appendChild(controls);
}

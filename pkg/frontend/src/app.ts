// Page wiring: a lobby (pick a definition, create or join a game), the live
// game view, and the definition editor. Routing is hash-based so the bundle
// stays a static file set.

import { ApiClient, ApiError } from "./api.js";
import { boardModel, renderBoard, toast } from "./board.js";
import { openSession, renderEditor } from "./editor.js";
import { pickDigit } from "./picker.js";
import { DefinitionDoc } from "./protocol.js";
import { GameView, lockKey, viewFromState } from "./replica.js";
import { SyncLoop } from "./sync.js";

const api = new ApiClient("");
let activeSync: SyncLoop | null = null;

function el<K extends keyof HTMLElementTagNameMap>(tag: K, text?: string,
                                                   className?: string) {
  const node = document.createElement(tag);
  if (text) node.textContent = text;
  if (className) node.className = className;
  return node;
}

function root(): HTMLElement {
  return document.getElementById("app")!;
}

function stopSync(): void {
  activeSync?.stop();
  activeSync = null;
}

// -- lobby -------------------------------------------------------------------

async function showLobby(): Promise<void> {
  stopSync();
  const app = root();
  app.innerHTML = "";
  app.appendChild(el("h1", "rulegrid"));
  const list = el("div", undefined, "lobby");
  const { definitions } = await api.listDefinitions();
  for (const name of definitions) {
    const row = el("div", undefined, "lobby-row");
    row.appendChild(el("span", name, "def-name"));
    const play = el("button", "New game");
    play.addEventListener("click", () => {
      void (async () => {
        const created = await api.createGame(name);
        location.hash = `#/game/${created.id}`;
      })();
    });
    const edit = el("button", "Edit rules");
    edit.addEventListener("click", () => {
      location.hash = `#/editor/${encodeURIComponent(name)}`;
    });
    row.append(play, edit);
    list.appendChild(row);
  }
  const joinRow = el("div", undefined, "lobby-row");
  const input = document.createElement("input");
  input.placeholder = "game id";
  const go = el("button", "Open game");
  go.addEventListener("click", () => {
    if (input.value.trim()) location.hash = `#/game/${input.value.trim()}`;
  });
  joinRow.append(input, go);
  list.appendChild(joinRow);
  app.appendChild(list);
}

// -- game --------------------------------------------------------------------

interface Seat {
  playerId: number | null;
}

async function showGame(gameId: string): Promise<void> {
  stopSync();
  const app = root();
  app.innerHTML = "";
  const state = await api.getState(gameId);
  const definition = state.definition;
  const seat: Seat = { playerId: null };

  const header = el("div", undefined, "game-head");
  header.appendChild(el("h1", definition.name));
  const share = el("span", `game ${gameId}`, "share");
  header.appendChild(share);
  const back = el("button", "Lobby");
  back.addEventListener("click", () => {
    location.hash = "#/";
  });
  header.appendChild(back);
  app.appendChild(header);

  const joinBar = el("div", undefined, "join-bar");
  const nameInput = document.createElement("input");
  nameInput.placeholder = "your name";
  const joinBtn = el("button", "Join");
  const startBtn = el("button", "Start game");
  joinBar.append(nameInput, joinBtn, startBtn);
  app.appendChild(joinBar);

  const boardRoot = el("div", undefined, "board-root");
  app.appendChild(boardRoot);
  const staleNote = el("div", "connection lost; showing last known state", "stale");
  staleNote.style.display = "none";
  app.appendChild(staleNote);

  const redraw = (view: GameView) => {
    staleNote.style.display = activeSync?.stale ? "" : "none";
    renderBoard(boardRoot, boardModel(view, definition, seat.playerId),
                view.cols, (row, col) => void onTileClick(view, row, col));
  };

  const sync = new SyncLoop(api, viewFromState(state), redraw, 1000);
  activeSync = sync;

  async function onTileClick(view: GameView, row: number, col: number): Promise<void> {
    if (seat.playerId === null) {
      toast("join the game first");
      return;
    }
    if (view.state !== "started") {
      toast(view.state === "not_started" ? "game has not started" : "game is over");
      return;
    }
    let value: number | null | undefined;
    if (definition.semantics === "symbols") {
      if (view.locked.has(lockKey(row, col))) {
        toast("that cell is a given");
        return;
      }
      value = await pickDigit(definition.value_domain.hi, boardRoot);
      if (value === null) return; // picker dismissed
    }
    try {
      const result = await api.submitEvent(view.gameId, {
        kind: "tile_click",
        actor: seat.playerId,
        coord: [row, col],
        value: value ?? null,
      });
      sync.absorb(result.commands);
    } catch (err) {
      if (err instanceof ApiError) {
        toast(err.message); // rejection: board stays as the server left it
      } else {
        toast("network error; retry");
      }
    }
  }

  joinBtn.addEventListener("click", () => {
    void (async () => {
      const name = nameInput.value.trim() || "Player";
      try {
        const joined = await api.join(gameId, name);
        seat.playerId = joined.player.id;
        joinBar.classList.add("joined");
        toast(`joined as ${joined.player.name} (#${joined.player.id})`);
        await sync.tick();
      } catch (err) {
        toast(err instanceof ApiError ? err.message : "join failed");
      }
    })();
  });

  startBtn.addEventListener("click", () => {
    void (async () => {
      try {
        const result = await api.submitEvent(gameId, {
          kind: "game_start",
          actor: seat.playerId,
        });
        sync.absorb(result.commands);
      } catch (err) {
        toast(err instanceof ApiError ? err.message : "start failed");
      }
    })();
  });

  redraw(sync.view);
  sync.start();
}

// -- editor -------------------------------------------------------------------

async function showEditor(name: string): Promise<void> {
  stopSync();
  const app = root();
  app.innerHTML = "";
  const back = el("button", "Lobby");
  back.addEventListener("click", () => {
    if (!session.dirty || confirm("Discard unsaved changes?")) location.hash = "#/";
  });
  app.appendChild(back);
  const doc: DefinitionDoc = await api.getDefinition(name);
  const token = sessionStorage.getItem("editorToken") ?? "";
  const session = openSession(doc, token);
  const editorRoot = el("div", undefined, "editor-root");
  app.appendChild(editorRoot);
  renderEditor(editorRoot, api, session, () => {
    sessionStorage.setItem("editorToken", session.token);
    toast("saved");
  });
}

// -- router -------------------------------------------------------------------

export async function route(): Promise<void> {
  const hash = location.hash || "#/";
  const game = hash.match(/^#\/game\/([A-Za-z0-9_-]+)/);
  const editor = hash.match(/^#\/editor\/(.+)$/);
  try {
    if (game) await showGame(game[1]);
    else if (editor) await showEditor(decodeURIComponent(editor[1]));
    else await showLobby();
  } catch (err) {
    root().innerHTML = "";
    root().appendChild(el("p", err instanceof Error ? err.message : "load failed", "error"));
  }
}

export function startApp(): void {
  window.addEventListener("hashchange", () => void route());
  void route();
}

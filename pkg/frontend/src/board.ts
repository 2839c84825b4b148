// Board presentation. boardModel() is pure (unit-tested); renderBoard()
// applies it to the DOM. Cells never change here — they only reflect the
// replica.

import { DefinitionDoc } from "./protocol.js";
import { GameView, currentPlayerId, lockKey } from "./replica.js";

// Marks for ownership games, indexed by player id.
const MARKS = ["", "X", "O", "△", "◻", "✦", "✚", "⬡", "◎", "✪"];

export interface CellModel {
  row: number;
  col: number;
  text: string;
  classes: string[];
  clickable: boolean;
}

export interface BoardModel {
  banner: string;
  playersChip: string;
  cells: CellModel[];
  finished: boolean;
}

export function cellText(definition: DefinitionDoc, value: number): string {
  if (value === 0) return "";
  if (definition.semantics === "ownership") {
    return MARKS[value] ?? String(value);
  }
  return String(value);
}

export function banner(view: GameView): string {
  if (view.state === "not_started") return "Not Started";
  if (view.state === "terminated") {
    if (view.outcome?.result === "winner") {
      const winner = view.players.find((p) => p.id === view.outcome?.player);
      return `${winner ? winner.name : `Player${view.outcome.player}`} won the game`;
    }
    if (view.outcome?.result === "draw") return "Draw";
    return "Game over";
  }
  const pid = currentPlayerId(view);
  const player = view.players.find((p) => p.id === pid);
  return player ? `${player.name}'s turn` : "Started";
}

export function boardModel(view: GameView, definition: DefinitionDoc,
                           myPlayerId: number | null): BoardModel {
  const cells: CellModel[] = [];
  const live = view.state === "started";
  for (let r = 0; r < view.rows; r++) {
    for (let c = 0; c < view.cols; c++) {
      const value = view.cells[r * view.cols + c];
      const locked = view.locked.has(lockKey(r, c));
      const classes = ["cell"];
      if (locked) classes.push("locked");
      if (definition.semantics === "ownership" && value > 0) {
        classes.push(`owner-${value}`);
      }
      cells.push({
        row: r,
        col: c,
        text: cellText(definition, value),
        classes,
        clickable: live && !locked && myPlayerId !== null,
      });
    }
  }
  return {
    banner: banner(view),
    playersChip: `${view.players.length} Player${view.players.length === 1 ? "" : "s"}`,
    cells,
    finished: view.state === "terminated",
  };
}

export type TileClickHandler = (row: number, col: number) => void;

export function renderBoard(root: HTMLElement, model: BoardModel, cols: number,
                            onClick: TileClickHandler): void {
  root.innerHTML = "";
  const status = document.createElement("div");
  status.className = "status";
  const bannerEl = document.createElement("span");
  bannerEl.className = "banner";
  bannerEl.textContent = model.banner;
  const chip = document.createElement("span");
  chip.className = "chip";
  chip.textContent = model.playersChip;
  status.append(bannerEl, chip);
  root.appendChild(status);

  const grid = document.createElement("div");
  grid.className = "grid";
  grid.style.gridTemplateColumns = `repeat(${cols}, var(--cell))`;
  for (const cell of model.cells) {
    const el = document.createElement("button");
    el.className = cell.classes.join(" ");
    el.textContent = cell.text;
    el.disabled = !cell.clickable;
    el.dataset.row = String(cell.row);
    el.dataset.col = String(cell.col);
    el.addEventListener("click", () => onClick(cell.row, cell.col));
    grid.appendChild(el);
  }
  root.appendChild(grid);
}

export function toast(message: string): void {
  const el = document.createElement("div");
  el.className = "toast";
  el.textContent = message;
  document.body.appendChild(el);
  setTimeout(() => el.remove(), 2500);
}

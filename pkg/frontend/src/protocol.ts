// Wire types for the game server's JSON protocol. Shapes mirror the server's
// documents exactly; nothing here adds meaning of its own.

export interface PlayerDoc {
  id: number;
  name: string;
  kind: string;
}

export interface OutcomeDoc {
  result: "winner" | "draw" | "abandoned";
  player?: number;
}

export interface CommandDoc {
  seq: number;
  kind: string;
  coord?: [number, number];
  value?: number;
  state?: string;
  outcome?: OutcomeDoc | null;
  player?: number;
  joined?: PlayerDoc;
  text?: string;
}

export interface BoardDoc {
  rows: number;
  cols: number;
  cells: number[][];
  locked: [number, number][];
}

export interface ValueDomainDoc {
  lo: number;
  hi: number;
}

export interface ConditionDoc {
  kind: string;
  name?: string;
  state?: string;
  pattern?: PatternDoc | null;
  groups?: string;
}

export interface ActionDoc {
  kind: string;
  text?: string;
}

export interface RuleDoc {
  name: string;
  on: string | null;
  conditions: ConditionDoc[];
  actions: ActionDoc[];
  components: string[];
}

export interface LinesDoc {
  len: number;
  families: string[];
}

export interface PatternDoc {
  tiles?: [number, number][][];
  lines?: LinesDoc;
  composite?: PatternDoc[];
}

export interface DefinitionDoc {
  name: string;
  rows: number;
  cols: number;
  semantics: "ownership" | "symbols";
  value_domain: ValueDomainDoc;
  min_players: number;
  max_players: number;
  turn_policy: string;
  win_pattern?: PatternDoc;
  rules: RuleDoc[];
  givens?: number[][];
  region?: { rows: number; cols: number };
}

export interface StateDoc {
  id: string;
  definition: DefinitionDoc;
  board: BoardDoc;
  players: PlayerDoc[];
  current_player: number | null;
  state: string;
  outcome: OutcomeDoc | null;
  last_seq: number;
}

export interface DiagnosticDoc {
  code: string;
  message: string;
  location: string;
}

// The closed rule vocabulary, used by the editor's pickers.
export const CONDITION_KINDS = [
  "game_type_is",
  "state_is",
  "is_current_player",
  "tile_empty",
  "tile_not_locked",
  "value_in_domain",
  "pattern_owned_by_same_player",
  "board_full",
  "groups_all_distinct",
  "legal_symbol_placement",
] as const;

export const ACTION_KINDS = [
  "set_state_started",
  "set_tile_to_current_player",
  "set_tile_to_event_value",
  "switch_player",
  "set_winner_current",
  "set_winner_matched",
  "game_over_draw",
  "send_message",
] as const;

export const LINE_FAMILIES = ["rows", "cols", "diag", "antidiag"] as const;

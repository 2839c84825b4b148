// Thin fetch wrapper for the server endpoints. Every board mutation the UI
// ever shows originates from these responses, never from local game logic.

import {
  CommandDoc,
  DefinitionDoc,
  DiagnosticDoc,
  PlayerDoc,
  StateDoc,
} from "./protocol.js";

export class ApiError extends Error {
  status: number;
  code: string;
  diagnostics: DiagnosticDoc[];

  constructor(status: number, code: string, reason: string, diagnostics: DiagnosticDoc[] = []) {
    super(reason);
    this.status = status;
    this.code = code;
    this.diagnostics = diagnostics;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "error";
  let reason = `${response.status}`;
  let diagnostics: DiagnosticDoc[] = [];
  try {
    const body = await response.json();
    code = body.code ?? code;
    reason = body.reason ?? reason;
    diagnostics = body.diagnostics ?? [];
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, reason, diagnostics);
}

export interface EventRequest {
  kind: string;
  actor: number | null;
  coord?: [number, number];
  value?: number | null;
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown,
                           token?: string): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (token) headers["Authorization"] = `Bearer ${token}`;
    const response = await fetch(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  listDefinitions(): Promise<{ definitions: string[] }> {
    return this.request("GET", "/definitions");
  }

  getDefinition(name: string): Promise<DefinitionDoc> {
    return this.request("GET", `/definitions/${encodeURIComponent(name)}`);
  }

  putDefinition(name: string, doc: DefinitionDoc, token: string): Promise<{ name: string }> {
    return this.request("PUT", `/definitions/${encodeURIComponent(name)}`, doc, token);
  }

  createGame(definition: string, seed?: number): Promise<{ id: string; seed: number; game: StateDoc }> {
    return this.request("POST", "/games", { definition, seed: seed ?? null });
  }

  join(gameId: string, name: string, kind = "human"):
      Promise<{ player: PlayerDoc; commands: CommandDoc[] }> {
    return this.request("POST", `/games/${gameId}/join`, { name, kind });
  }

  submitEvent(gameId: string, event: EventRequest):
      Promise<{ fired: string[]; commands: CommandDoc[] }> {
    return this.request("POST", `/games/${gameId}/events`, event);
  }

  getState(gameId: string): Promise<StateDoc> {
    return this.request("GET", `/games/${gameId}`);
  }

  getCommands(gameId: string, since: number):
      Promise<{ commands: CommandDoc[]; last_seq: number }> {
    return this.request("GET", `/games/${gameId}/commands?since=${since}`);
  }
}

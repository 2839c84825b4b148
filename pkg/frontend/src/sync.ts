// Polling synchronisation: pull commands past our last seq and apply them in
// order; any gap, decode problem, or missed thread falls back to replacing
// the view with a full snapshot. Polling stops once the game terminates.

import { ApiClient } from "./api.js";
import { GameView, applyCommands, viewFromState } from "./replica.js";

export class SyncLoop {
  private timer: ReturnType<typeof setInterval> | null = null;
  private inFlight = false;
  stale = false;

  constructor(
    private api: ApiClient,
    public view: GameView,
    private onChange: (view: GameView) => void,
    private intervalMs = 1000,
  ) {}

  // One poll step; factored out so tests can drive it without timers.
  async tick(): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    try {
      const batch = await this.api.getCommands(this.view.gameId, this.view.lastSeq);
      try {
        if (batch.last_seq < this.view.lastSeq) {
          // we believe we are ahead of the server: the thread is lost
          throw new Error("ahead of server");
        }
        this.view = applyCommands(this.view, batch.commands);
      } catch {
        // lost the thread: recover from a full snapshot
        this.view = viewFromState(await this.api.getState(this.view.gameId));
      }
      this.stale = false;
      this.onChange(this.view);
      if (this.view.state === "terminated") this.stop();
    } catch {
      this.stale = true; // network trouble; keep the last good view
      this.onChange(this.view);
    } finally {
      this.inFlight = false;
    }
  }

  // Apply commands we already have (e.g. from a submit response) without
  // waiting for the next poll.
  absorb(commands: Parameters<typeof applyCommands>[1]): void {
    try {
      this.view = applyCommands(this.view, commands);
      this.onChange(this.view);
      if (this.view.state === "terminated") this.stop();
    } catch {
      void this.tick();
    }
  }

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => void this.tick(), this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  get running(): boolean {
    return this.timer !== null;
  }
}

// Digit picker for symbols games: choose 1..hi or erase before the click is
// sent to the server.

export function pickDigit(hi: number, anchor: HTMLElement): Promise<number | null> {
  return new Promise((resolve) => {
    const overlay = document.createElement("div");
    overlay.className = "picker-overlay";
    const panel = document.createElement("div");
    panel.className = "picker";

    const finish = (value: number | null) => {
      overlay.remove();
      resolve(value);
    };

    for (let v = 1; v <= hi; v++) {
      const b = document.createElement("button");
      b.textContent = String(v);
      b.addEventListener("click", () => finish(v));
      panel.appendChild(b);
    }
    const erase = document.createElement("button");
    erase.textContent = "erase";
    erase.className = "erase";
    erase.addEventListener("click", () => finish(0));
    panel.appendChild(erase);

    overlay.addEventListener("click", (ev) => {
      if (ev.target === overlay) finish(null);
    });
    overlay.appendChild(panel);
    anchor.ownerDocument.body.appendChild(overlay);
  });
}

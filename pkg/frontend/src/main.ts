// Minimal DOM wiring: an autocomplete box per tuple cell, a submit button,
// the ranked answer table (with a promote button per row), and the query
// graph edge list.

import { makeClient, type QueryResponse } from "./api.js";
import {
  canSubmit,
  commitDraft,
  draftComplete,
  newSession,
  promoteAnswer,
  setCell,
  submitQuery,
  type SessionState,
} from "./session.js";

const client = makeClient("");
const ARITY = 2;

const session: SessionState = newSession(ARITY);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) node.textContent = text;
  return node;
}

function showError(message: string): void {
  const banner = document.getElementById("error")!;
  banner.textContent = message;
  banner.hidden = message === "";
}

function renderTuples(): void {
  const list = document.getElementById("tuples")!;
  list.replaceChildren(
    ...session.tuples.map((t) => el("li", t.join(" | "))),
  );
  (document.getElementById("submit") as HTMLButtonElement).disabled =
    !canSubmit(session);
}

function renderResponse(res: QueryResponse): void {
  const answers = document.getElementById("answers")!;
  answers.replaceChildren();
  for (const row of res.answers) {
    const tr = el("tr");
    tr.append(
      el("td", String(row.rank)),
      el("td", row.entities.join(" | ")),
      el("td", row.score.toFixed(6)),
    );
    const promote = el("button", "promote");
    promote.addEventListener("click", () => {
      try {
        promoteAnswer(session, row.entities);
        showError("");
        renderTuples();
      } catch (err) {
        showError((err as Error).message);
      }
    });
    const cell = el("td");
    cell.append(promote);
    tr.append(cell);
    answers.append(tr);
  }
  const mqg = document.getElementById("mqg")!;
  mqg.replaceChildren(
    ...res.mqg.map((e) =>
      el(
        "li",
        `${e.subj} -${e.label}-> ${e.obj}  ` +
          `(weight ${e.weight.toFixed(4)}, depth ${e.depth})`,
      ),
    ),
  );
  document.getElementById("stats")!.textContent =
    `${res.stats.nodes_evaluated} query graphs evaluated, ` +
    `${res.stats.nodes_pruned} pruned, ${res.stats.millis} ms`;
}

function wireCell(index: number): void {
  const input = document.getElementById(`cell-${index}`) as HTMLInputElement;
  const list = document.getElementById(`matches-${index}`)!;
  input.addEventListener("input", async () => {
    if (input.value.length < 2) {
      list.replaceChildren();
      return;
    }
    const matches = await client.autocomplete(input.value, 8);
    list.replaceChildren(
      ...matches.map((name) => {
        const item = el("li", name);
        item.addEventListener("click", () => {
          // Only resolved entities ever land in the draft.
          setCell(session, index, name);
          input.value = name;
          list.replaceChildren();
          maybeCommit();
        });
        return item;
      }),
    );
  });
}

function maybeCommit(): void {
  if (!draftComplete(session)) return;
  try {
    commitDraft(session);
    showError("");
    for (let i = 0; i < ARITY; i++) {
      (document.getElementById(`cell-${i}`) as HTMLInputElement).value = "";
    }
    renderTuples();
  } catch (err) {
    showError((err as Error).message);
  }
}

export function init(): void {
  for (let i = 0; i < ARITY; i++) wireCell(i);
  document.getElementById("submit")!.addEventListener("click", async () => {
    try {
      const res = await submitQuery(session, client);
      if (res) {
        showError("");
        renderResponse(res);
      }
    } catch (err) {
      showError((err as Error).message);
    }
  });
  renderTuples();
}

if (typeof document !== "undefined" && document.getElementById("submit")) {
  init();
}

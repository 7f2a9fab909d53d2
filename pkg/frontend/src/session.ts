// Session state: example tuples under construction, committed tuples, and
// the latest response.  Pure functions over plain objects so the DOM layer
// stays thin and the logic is testable without a browser.

import type { Client, QueryParams, QueryResponse } from "./api.js";

export type TupleDraft = { cells: (string | null)[] };

export type SessionState = {
  arity: number;
  params: QueryParams;
  draft: TupleDraft;
  tuples: string[][];
  lastResponse: QueryResponse | null;
  // Monotonic submission counter; responses carrying a stale sequence
  // number are dropped.
  seq: number;
};

export const DEFAULT_PARAMS: QueryParams = { k: 10, kprime: 100, d: 2, r: 15 };

export function newSession(
  arity: number,
  params: Partial<QueryParams> = {},
): SessionState {
  if (!Number.isInteger(arity) || arity < 1) {
    throw new Error(`arity must be a positive integer, got ${arity}`);
  }
  return {
    arity,
    params: { ...DEFAULT_PARAMS, ...params },
    draft: emptyDraft(arity),
    tuples: [],
    lastResponse: null,
    seq: 0,
  };
}

function emptyDraft(arity: number): TupleDraft {
  return { cells: new Array<string | null>(arity).fill(null) };
}

export function setCell(
  session: SessionState,
  index: number,
  entity: string,
): void {
  if (index < 0 || index >= session.arity) {
    throw new Error(`cell index ${index} out of range`);
  }
  session.draft.cells[index] = entity;
}

export function draftComplete(session: SessionState): boolean {
  return session.draft.cells.every((c) => c !== null);
}

function sameTuple(a: string[], b: string[]): boolean {
  return a.length === b.length && a.every((v, i) => v === b[i]);
}

/** Move the finished draft into the committed tuples. */
export function commitDraft(session: SessionState): void {
  if (!draftComplete(session)) {
    throw new Error("draft has unresolved cells");
  }
  const t = session.draft.cells as string[];
  if (session.tuples.some((u) => sameTuple(u, t))) {
    throw new Error("tuple already committed");
  }
  session.tuples.push([...t]);
  session.draft = emptyDraft(session.arity);
}

/** Add an answer row as a further example tuple. Duplicates are rejected. */
export function promoteAnswer(session: SessionState, entities: string[]): void {
  if (entities.length !== session.arity) {
    throw new Error(
      `answer arity ${entities.length} does not match session arity ${session.arity}`,
    );
  }
  if (session.tuples.some((t) => sameTuple(t, entities))) {
    throw new Error("tuple already committed");
  }
  session.tuples.push([...entities]);
}

export function canSubmit(session: SessionState): boolean {
  return session.tuples.length >= 1;
}

/**
 * POST the committed tuples.  If another submission started in the
 * meantime, the response is discarded and null is returned.
 */
export async function submitQuery(
  session: SessionState,
  client: Client,
): Promise<QueryResponse | null> {
  if (!canSubmit(session)) {
    throw new Error("no committed tuples");
  }
  const seq = ++session.seq;
  const response = await client.query(session.tuples, session.params);
  if (seq !== session.seq) {
    return null; // superseded by a later submission
  }
  session.lastResponse = response;
  return response;
}

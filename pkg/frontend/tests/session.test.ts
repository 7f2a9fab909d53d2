import { describe, expect, it } from "vitest";

import type { Client, QueryResponse } from "../src/api.js";
import { formatWeight, mqgDumpLines } from "../src/api.js";
import {
  canSubmit,
  commitDraft,
  draftComplete,
  newSession,
  promoteAnswer,
  setCell,
  submitQuery,
} from "../src/session.js";

const emptyResponse: QueryResponse = {
  answers: [],
  mqg: [],
  stats: { nodes_evaluated: 0, nodes_pruned: 0, millis: 0 },
};

function fakeClient(onQuery: Client["query"]): Client {
  return {
    health: async () => ({ status: "ok", entities: 0, edges: 0 }),
    autocomplete: async () => [],
    query: onQuery,
  };
}

describe("session", () => {
  it("requires a positive arity", () => {
    expect(() => newSession(0)).toThrow();
    expect(() => newSession(1.5)).toThrow();
  });

  it("commits only complete drafts", () => {
    const s = newSession(2);
    expect(draftComplete(s)).toBe(false);
    setCell(s, 0, "Jerry Yang");
    expect(() => commitDraft(s)).toThrow(/unresolved/);
    setCell(s, 1, "Yahoo!");
    commitDraft(s);
    expect(s.tuples).toEqual([["Jerry Yang", "Yahoo!"]]);
    expect(s.draft.cells).toEqual([null, null]);
  });

  it("disables submit until a tuple exists", () => {
    const s = newSession(2);
    expect(canSubmit(s)).toBe(false);
    setCell(s, 0, "a");
    setCell(s, 1, "b");
    commitDraft(s);
    expect(canSubmit(s)).toBe(true);
  });

  it("rejects promoting a duplicate tuple", () => {
    const s = newSession(2);
    setCell(s, 0, "Jerry Yang");
    setCell(s, 1, "Yahoo!");
    commitDraft(s);
    promoteAnswer(s, ["Steve Wozniak", "Apple Inc."]);
    expect(() => promoteAnswer(s, ["Steve Wozniak", "Apple Inc."])).toThrow(
      /already committed/,
    );
    expect(s.tuples).toHaveLength(2);
  });

  it("rejects promoting with the wrong arity", () => {
    const s = newSession(2);
    expect(() => promoteAnswer(s, ["solo"])).toThrow(/arity/);
  });

  it("stores the response of the current submission", async () => {
    const s = newSession(1);
    promoteAnswer(s, ["C"]);
    const res = await submitQuery(
      s,
      fakeClient(async () => emptyResponse),
    );
    expect(res).toBe(emptyResponse);
    expect(s.lastResponse).toBe(emptyResponse);
  });

  it("drops stale responses when a newer submission started", async () => {
    const s = newSession(1);
    promoteAnswer(s, ["C"]);
    let release: () => void = () => {};
    const slow = new Promise<void>((r) => (release = r));
    const first = submitQuery(
      s,
      fakeClient(async () => {
        await slow;
        return emptyResponse;
      }),
    );
    const second: QueryResponse = { ...emptyResponse, stats: { nodes_evaluated: 1, nodes_pruned: 0, millis: 1 } };
    await submitQuery(
      s,
      fakeClient(async () => second),
    );
    release();
    expect(await first).toBeNull();
    expect(s.lastResponse).toBe(second);
  });

  it("refuses to submit with no tuples", async () => {
    const s = newSession(1);
    await expect(
      submitQuery(s, fakeClient(async () => emptyResponse)),
    ).rejects.toThrow(/no committed/);
  });
});

describe("mqg dump formatting", () => {
  it("orders by idx and tab-separates the fields", () => {
    const lines = mqgDumpLines([
      { idx: 1, subj: "w2", label: "hq", obj: "Sunnyvale", weight: 0.5, depth: 1 },
      { idx: 0, subj: "w1", label: "founded", obj: "w2", weight: 2.598565968, depth: 0 },
    ]);
    expect(lines).toEqual([
      "0\tw1\tfounded\tw2\t2.598565968\t0",
      "1\tw2\thq\tSunnyvale\t0.5\t1",
    ]);
  });

  it("keeps a trailing .0 on integral weights", () => {
    expect(formatWeight(2)).toBe("2.0");
    expect(formatWeight(0.25)).toBe("0.25");
  });
});

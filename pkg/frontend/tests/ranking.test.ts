import { beforeEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api";
import { RankingStore, emptyDraft, validateDraft } from "../src/ranking";
import type { RankingRecord } from "../src/types";
import wordFixture from "./fixtures/desirability_words.json";

const WORDS = wordFixture as string[];
const METHODS = ["lda", "nmf", "embed"];

/** In-memory stand-in for the rankings endpoints, mimicking the recorded API. */
function fakeServer() {
  const stored: RankingRecord[] = [];
  const fetchImpl = vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
    const path = String(url);
    if (path.endsWith("/rankings") && init?.method === "POST") {
      const record = JSON.parse(String(init.body)) as RankingRecord;
      const allowed = new Set(WORDS.map((w) => w.toLowerCase()));
      for (const [method, picks] of Object.entries(record.words)) {
        if (picks.length > 5) {
          return new Response(
            JSON.stringify({ detail: { errors: { [`words.${method}`]: "at most 5 words per method" } } }),
            { status: 422 },
          );
        }
        if (picks.some((w) => !allowed.has(w.toLowerCase()))) {
          return new Response(
            JSON.stringify({ detail: { errors: { [`words.${method}`]: "words not in the configured list" } } }),
            { status: 422 },
          );
        }
      }
      const withStamp = { ...record, timestamp: 1700000000 + stored.length };
      stored.push(withStamp);
      return new Response(JSON.stringify(withStamp), { status: 201 });
    }
    if (path.endsWith("/rankings")) {
      return new Response(JSON.stringify(stored), { status: 200 });
    }
    return new Response("not found", { status: 404 });
  });
  return { stored, fetchImpl };
}

function validDraft() {
  const draft = emptyDraft("fixture", METHODS);
  draft.reviewer = "p1";
  draft.ordering = ["embed", "lda", "nmf"];
  draft.words.embed = ["Useful", "Meaningful"];
  return draft;
}

describe("draft validation", () => {
  it("accepts a valid draft", () => {
    expect(validateDraft(validDraft(), METHODS, WORDS)).toEqual({});
  });

  it("rejects a non-permutation ordering", () => {
    const draft = validDraft();
    draft.ordering = ["lda", "lda", "nmf"];
    expect(validateDraft(draft, METHODS, WORDS)).toHaveProperty("ordering");
  });

  it("rejects more than five words for one method", () => {
    const draft = validDraft();
    draft.words.lda = ["Clean", "Clear", "Useful", "Usable", "Fast", "Fresh"];
    const errors = validateDraft(draft, METHODS, WORDS);
    expect(errors["words.lda"]).toMatch(/at most 5/);
  });

  it("requires picks to come from the configured word list", () => {
    const draft = validDraft();
    draft.words.nmf = ["Sparkly"];
    expect(validateDraft(draft, METHODS, WORDS)).toHaveProperty("words.nmf");
  });
});

describe("ranking store", () => {
  let server: ReturnType<typeof fakeServer>;
  let store: RankingStore;

  beforeEach(() => {
    server = fakeServer();
    store = new RankingStore(new ApiClient("http://api", server.fetchImpl), METHODS, WORDS);
  });

  it("round-trips a valid draft into history", async () => {
    const outcome = await store.submit(validDraft());
    expect(outcome.ok).toBe(true);
    await store.refresh();
    expect(store.history).toHaveLength(1);
    expect(store.history[0].reviewer).toBe("p1");
    expect(store.history[0].ordering).toEqual(["embed", "lda", "nmf"]);
  });

  it("rejects an over-limit word selection inline without sending a request", async () => {
    const draft = validDraft();
    draft.words.lda = ["Clean", "Clear", "Useful", "Usable", "Fast", "Fresh"];
    const outcome = await store.submit(draft);
    expect(outcome.ok).toBe(false);
    if (!outcome.ok) expect(outcome.kind).toBe("validation");
    expect(server.fetchImpl).not.toHaveBeenCalled();
    expect(server.stored).toHaveLength(0);
  });

  it("surfaces server-side field errors inline", async () => {
    // store without a word list: membership can only be checked server-side
    const permissive = new RankingStore(
      new ApiClient("http://api", server.fetchImpl),
      METHODS,
      null,
    );
    const draft = validDraft();
    draft.words.lda = ["NotAWord"];
    const outcome = await permissive.submit(draft);
    expect(outcome.ok).toBe(false);
    if (!outcome.ok && outcome.kind === "validation") {
      expect(outcome.errors["words.lda"]).toMatch(/not in the configured list/);
    } else {
      throw new Error("expected a validation outcome");
    }
    expect(server.stored).toHaveLength(0);
  });

  it("preserves the draft and offers retry on network failure", async () => {
    const flaky = vi
      .fn()
      .mockRejectedValueOnce(new TypeError("fetch failed"))
      .mockImplementation(server.fetchImpl);
    const flakyStore = new RankingStore(new ApiClient("http://api", flaky), METHODS, WORDS);
    const draft = validDraft();
    const outcome = await flakyStore.submit(draft);
    expect(outcome.ok).toBe(false);
    if (!outcome.ok) expect(outcome.kind).toBe("network");
    expect(flakyStore.canRetry()).toBe(true);
    expect(server.stored).toHaveLength(0);

    const retried = await flakyStore.retry();
    expect(retried.ok).toBe(true);
    expect(server.stored).toHaveLength(1);
    expect(server.stored[0].notes).toBe(draft.notes);
    expect(flakyStore.canRetry()).toBe(false);
  });
});

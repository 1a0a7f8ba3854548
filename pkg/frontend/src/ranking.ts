import { ApiClient, ApiError, NetworkError, type FieldErrors } from "./api";
import { MAX_WORDS_PER_METHOD, type RankingRecord } from "./types";

export interface RankingDraft {
  dataset: string;
  reviewer: string;
  ordering: string[];
  words: Record<string, string[]>;
  notes: string;
}

export function emptyDraft(dataset: string, methods: string[]): RankingDraft {
  return {
    dataset,
    reviewer: "",
    ordering: [...methods],
    words: Object.fromEntries(methods.map((m) => [m, []])),
    notes: "",
  };
}

/** Client-side mirror of the server's validation; returns field -> message. */
export function validateDraft(
  draft: RankingDraft,
  methods: string[],
  wordList: string[] | null = null,
): FieldErrors {
  const errors: FieldErrors = {};
  if (!draft.reviewer.trim()) {
    errors.reviewer = "reviewer is required";
  }
  const sortedOrdering = [...draft.ordering].sort();
  const sortedMethods = [...methods].sort();
  if (
    sortedOrdering.length !== sortedMethods.length ||
    sortedOrdering.some((m, i) => m !== sortedMethods[i])
  ) {
    errors.ordering = `ordering must be a permutation of ${sortedMethods.join(", ")}`;
  }
  const allowed = wordList ? new Set(wordList.map((w) => w.toLowerCase())) : null;
  for (const [method, picks] of Object.entries(draft.words)) {
    if (picks.length > MAX_WORDS_PER_METHOD) {
      errors[`words.${method}`] = `at most ${MAX_WORDS_PER_METHOD} words per method`;
    } else if (allowed && picks.some((w) => !allowed.has(w.toLowerCase()))) {
      errors[`words.${method}`] = "pick words from the desirability list";
    }
  }
  return errors;
}

export type SubmitOutcome =
  | { ok: true; record: RankingRecord }
  | { ok: false; kind: "validation"; errors: FieldErrors }
  | { ok: false; kind: "network"; draft: RankingDraft };

/**
 * Ranking submission with draft preservation: a network failure keeps the
 * draft for retry instead of dropping it or blindly re-posting.
 */
export class RankingStore {
  history: RankingRecord[] = [];
  pendingDraft: RankingDraft | null = null;

  constructor(
    private api: ApiClient,
    private methods: string[],
    private wordList: string[] | null = null,
  ) {}

  async refresh(): Promise<RankingRecord[]> {
    this.history = await this.api.rankings();
    return this.history;
  }

  async submit(draft: RankingDraft): Promise<SubmitOutcome> {
    const errors = validateDraft(draft, this.methods, this.wordList);
    if (Object.keys(errors).length > 0) {
      return { ok: false, kind: "validation", errors };
    }
    try {
      const record = await this.api.submitRanking({ ...draft });
      this.pendingDraft = null;
      this.history = [...this.history, record];
      return { ok: true, record };
    } catch (err) {
      if (err instanceof ApiError) {
        return { ok: false, kind: "validation", errors: err.fieldErrors };
      }
      if (err instanceof NetworkError) {
        this.pendingDraft = draft;
        return { ok: false, kind: "network", draft };
      }
      throw err;
    }
  }

  canRetry(): boolean {
    return this.pendingDraft !== null;
  }

  async retry(): Promise<SubmitOutcome> {
    if (!this.pendingDraft) {
      throw new Error("nothing to retry");
    }
    return this.submit(this.pendingDraft);
  }
}

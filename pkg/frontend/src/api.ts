import type {
  ChordGraphPayload,
  DatasetInfo,
  DocumentSample,
  ModelInfo,
  RankingRecord,
  TopicInfo,
} from "./types";

export type FieldErrors = Record<string, string>;

export class ApiError extends Error {
  constructor(
    message: string,
    public status: number,
    public fieldErrors: FieldErrors = {},
  ) {
    super(message);
  }
}

export class NetworkError extends Error {}

type FetchLike = typeof fetch;

/** Thin typed client over the workbench HTTP API. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new NetworkError(`request to ${path} failed: ${err}`);
    }
    if (!response.ok) {
      let fieldErrors: FieldErrors = {};
      let detail = `${response.status}`;
      try {
        const body = await response.json();
        if (body && typeof body === "object" && "detail" in body) {
          const d = (body as { detail: unknown }).detail;
          if (d && typeof d === "object" && "errors" in (d as object)) {
            fieldErrors = (d as { errors: FieldErrors }).errors;
          }
          detail = JSON.stringify(d);
        }
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(detail, response.status, fieldErrors);
    }
    return (await response.json()) as T;
  }

  datasets(): Promise<DatasetInfo[]> {
    return this.request("/datasets");
  }

  models(dataset: string): Promise<ModelInfo[]> {
    return this.request(`/datasets/${encodeURIComponent(dataset)}/models`);
  }

  topics(modelId: string): Promise<TopicInfo[]> {
    return this.request(`/models/${encodeURIComponent(modelId)}/topics`);
  }

  chord(modelId: string, threshold?: number): Promise<ChordGraphPayload> {
    const query = threshold === undefined ? "" : `?threshold=${threshold}`;
    return this.request(`/models/${encodeURIComponent(modelId)}/chord${query}`);
  }

  documents(modelId: string, topicId: number, limit = 20): Promise<DocumentSample[]> {
    return this.request(
      `/models/${encodeURIComponent(modelId)}/topics/${topicId}/documents?limit=${limit}`,
    );
  }

  rankings(): Promise<RankingRecord[]> {
    return this.request("/rankings");
  }

  submitRanking(record: RankingRecord): Promise<RankingRecord> {
    return this.request("/rankings", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(record),
    });
  }

  desirabilityWords(): Promise<string[]> {
    return this.request("/desirability-words");
  }
}

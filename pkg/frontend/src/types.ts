// Payload shapes of the workbench API. The UI renders these verbatim and
// computes no metrics or statistics of its own.

export interface DatasetInfo {
  name: string;
  models: string[];
}

export interface ModelInfo {
  id: string;
  dataset: string;
  method: string;
  num_topics: number;
  runtime_seconds: number;
  seed: number;
}

export interface KeywordEntry {
  word: string;
  weight: number;
}

export interface TopicInfo {
  topic_id: number;
  keywords: KeywordEntry[];
  size: number;
}

export interface ChordNode {
  topic_id: number;
  top_words: string[];
  size: number;
}

export interface ChordEdge {
  source: number;
  target: number;
  shared_documents: number;
}

export interface ChordGraphPayload {
  nodes: ChordNode[];
  edges: ChordEdge[];
  membership_threshold: number;
}

export interface DocumentSample {
  id: string;
  text: string;
  comment_count: number;
}

export interface RankingRecord {
  dataset: string;
  reviewer: string;
  ordering: string[];
  words: Record<string, string[]>;
  notes: string;
  timestamp?: number;
}

export const MAX_WORDS_PER_METHOD = 5;

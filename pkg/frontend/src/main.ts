import { ApiClient, NetworkError } from "./api";
import { renderChord } from "./chord";
import { RankingStore, emptyDraft, type RankingDraft } from "./ranking";
import type { ChordGraphPayload, ModelInfo, TopicInfo } from "./types";

interface ChordViewState {
  dataset: string | null;
  modelId: string | null;
  selectedTopic: number | null;
  threshold: number;
}

const state: ChordViewState = {
  dataset: null,
  modelId: null,
  selectedTopic: null,
  threshold: 0.1,
};

const api = new ApiClient("");
// Chord payloads are cached frozen per (model, threshold); a slider change
// always refetches under the new threshold and never mutates a cached value.
const chordCache = new Map<string, Readonly<ChordGraphPayload>>();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function fetchChord(modelId: string, threshold: number): Promise<ChordGraphPayload> {
  const key = `${modelId}@${threshold}`;
  const cached = chordCache.get(key);
  if (cached) return cached;
  const graph = Object.freeze(await api.chord(modelId, threshold));
  chordCache.set(key, graph);
  return graph;
}

async function refreshChord(): Promise<void> {
  if (!state.modelId) return;
  const graph = await fetchChord(state.modelId, state.threshold);
  renderChord(el("chord-panel"), graph, {
    onTopicClick: (topicId) => {
      state.selectedTopic = topicId;
      void showDocuments(topicId);
    },
  });
}

async function showDocuments(topicId: number): Promise<void> {
  if (!state.modelId) return;
  const docs = await api.documents(state.modelId, topicId);
  const panel = el("documents-panel");
  panel.replaceChildren();
  const heading = document.createElement("h3");
  heading.textContent = `Topic ${topicId} sample (${docs.length})`;
  panel.appendChild(heading);
  for (const doc of docs) {
    const item = document.createElement("article");
    item.className = "document-sample";
    const title = document.createElement("strong");
    title.textContent = doc.id;
    const body = document.createElement("p");
    body.textContent = doc.text.slice(0, 400);
    item.append(title, body);
    panel.appendChild(item);
  }
}

function renderTopicTable(container: HTMLElement, model: ModelInfo, topics: TopicInfo[]): void {
  const section = document.createElement("section");
  section.className = "model-column";
  const heading = document.createElement("h3");
  heading.textContent = `${model.method} (${model.num_topics} topics)`;
  section.appendChild(heading);
  const table = document.createElement("table");
  table.className = "keyword-table";
  for (const topic of topics) {
    const row = table.insertRow();
    row.insertCell().textContent = String(topic.topic_id);
    const cell = row.insertCell();
    for (const kw of topic.keywords) {
      const span = document.createElement("span");
      span.className = "keyword";
      // font size scaled by payload weight: biggest word first, no math on
      // the weights beyond presentation scaling
      const scale = topic.keywords[0].weight > 0 ? kw.weight / topic.keywords[0].weight : 1;
      span.style.fontSize = `${0.75 + 0.45 * scale}em`;
      span.textContent = kw.word;
      cell.appendChild(span);
    }
    row.insertCell().textContent = String(topic.size);
  }
  section.appendChild(table);
  container.appendChild(section);
}

async function showComparison(dataset: string): Promise<void> {
  const models = await api.models(dataset);
  const container = el("comparison-panel");
  container.replaceChildren();
  for (const model of models) {
    renderTopicTable(container, model, await api.topics(model.id));
  }
  buildRankingForm(dataset, models.map((m) => m.method));
}

let store: RankingStore | null = null;

function buildRankingForm(dataset: string, methods: string[]): void {
  const form = el("ranking-form");
  form.replaceChildren();
  void (async () => {
    const words = await api.desirabilityWords();
    store = new RankingStore(api, methods, words);
    await store.refresh();
    renderHistory();

    const draft = emptyDraft(dataset, methods);
    const reviewer = document.createElement("input");
    reviewer.placeholder = "reviewer id";
    reviewer.addEventListener("input", () => (draft.reviewer = reviewer.value));
    form.appendChild(reviewer);

    const orderingBox = document.createElement("div");
    orderingBox.className = "ordering";
    methods.forEach((method, index) => {
      const select = document.createElement("select");
      for (const m of methods) {
        const option = document.createElement("option");
        option.value = m;
        option.textContent = m;
        option.selected = m === draft.ordering[index];
        select.appendChild(option);
      }
      select.addEventListener("change", () => (draft.ordering[index] = select.value));
      orderingBox.appendChild(select);
    });
    form.appendChild(orderingBox);

    for (const method of methods) {
      const picker = document.createElement("select");
      picker.multiple = true;
      picker.dataset.method = method;
      for (const word of words) {
        const option = document.createElement("option");
        option.value = word;
        option.textContent = word;
        picker.appendChild(option);
      }
      picker.addEventListener("change", () => {
        draft.words[method] = [...picker.selectedOptions].map((o) => o.value);
      });
      form.appendChild(picker);
    }

    const notes = document.createElement("textarea");
    notes.placeholder = "notes";
    notes.addEventListener("input", () => (draft.notes = notes.value));
    form.appendChild(notes);

    const errorBox = document.createElement("div");
    errorBox.className = "form-errors";
    form.appendChild(errorBox);

    const submit = document.createElement("button");
    submit.textContent = "submit ranking";
    submit.addEventListener("click", (event) => {
      event.preventDefault();
      void submitDraft(draft, errorBox);
    });
    form.appendChild(submit);
  })();
}

async function submitDraft(draft: RankingDraft, errorBox: HTMLElement): Promise<void> {
  if (!store) return;
  errorBox.replaceChildren();
  const outcome = await store.submit(draft);
  if (outcome.ok) {
    renderHistory();
    return;
  }
  if (outcome.kind === "validation") {
    for (const [field, message] of Object.entries(outcome.errors)) {
      const line = document.createElement("p");
      line.className = "field-error";
      line.dataset.field = field;
      line.textContent = `${field}: ${message}`;
      errorBox.appendChild(line);
    }
    return;
  }
  const line = document.createElement("p");
  line.className = "network-error";
  line.textContent = "network failure; draft kept";
  const retry = document.createElement("button");
  retry.textContent = "retry";
  retry.addEventListener("click", (event) => {
    event.preventDefault();
    void submitDraft(draft, errorBox);
  });
  errorBox.append(line, retry);
}

function renderHistory(): void {
  if (!store) return;
  const panel = el("history-panel");
  panel.replaceChildren();
  for (const record of store.history) {
    const item = document.createElement("article");
    item.className = "ranking-record";
    const head = document.createElement("strong");
    head.textContent = `${record.reviewer}: ${record.ordering.join(" > ")}`;
    const words = document.createElement("p");
    words.textContent = Object.entries(record.words)
      .map(([method, picks]) => `${method}: ${picks.join(", ")}`)
      .join(" | ");
    item.append(head, words);
    panel.appendChild(item);
  }
}

async function boot(): Promise<void> {
  try {
    const datasets = await api.datasets();
    const picker = el<HTMLSelectElement>("dataset-picker");
    for (const dataset of datasets) {
      const option = document.createElement("option");
      option.value = dataset.name;
      option.textContent = dataset.name;
      picker.appendChild(option);
    }
    picker.addEventListener("change", () => void selectDataset(picker.value));
    if (datasets.length > 0) {
      picker.value = datasets[0].name;
      await selectDataset(datasets[0].name);
    }
  } catch (err) {
    if (err instanceof NetworkError) {
      el("chord-panel").textContent = "cannot reach the workbench API";
      return;
    }
    throw err;
  }

  const slider = el<HTMLInputElement>("threshold-slider");
  slider.addEventListener("input", () => {
    state.threshold = Number(slider.value);
    el("threshold-value").textContent = slider.value;
    void refreshChord();
  });
}

async function selectDataset(dataset: string): Promise<void> {
  state.dataset = dataset;
  const models = await api.models(dataset);
  const picker = el<HTMLSelectElement>("model-picker");
  picker.replaceChildren();
  for (const model of models) {
    const option = document.createElement("option");
    option.value = model.id;
    option.textContent = `${model.method} (K=${model.num_topics})`;
    picker.appendChild(option);
  }
  picker.onchange = () => {
    state.modelId = picker.value;
    void refreshChord();
  };
  if (models.length > 0) {
    state.modelId = models[0].id;
    picker.value = models[0].id;
    await refreshChord();
  }
  await showComparison(dataset);
}

if (typeof document !== "undefined" && document.getElementById("dataset-picker")) {
  void boot();
}

export { boot, fetchChord, refreshChord, selectDataset, state, chordCache };

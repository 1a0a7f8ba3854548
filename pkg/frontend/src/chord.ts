import * as d3 from "d3";
import type { ChordEdge, ChordGraphPayload, ChordNode } from "./types";

export interface ChordHandlers {
  onTopicClick?: (topicId: number) => void;
  onEdgeHover?: (edge: ChordEdge) => void;
}

interface ArcSlot {
  node: ChordNode;
  startAngle: number;
  endAngle: number;
  midAngle: number;
}

const TAU = Math.PI * 2;
const PAD_ANGLE = 0.04;

/** Angular slots proportional to node size (minimum sliver for empty topics). */
export function layoutArcs(nodes: ChordNode[]): ArcSlot[] {
  const weights = nodes.map((n) => Math.max(n.size, 1));
  const total = weights.reduce((a, b) => a + b, 0);
  const padTotal = PAD_ANGLE * nodes.length;
  const usable = TAU - padTotal;
  let angle = 0;
  return nodes.map((node, i) => {
    const span = (weights[i] / total) * usable;
    const slot = {
      node,
      startAngle: angle,
      endAngle: angle + span,
      midAngle: angle + span / 2,
    };
    angle += span + PAD_ANGLE;
    return slot;
  });
}

/** Ribbon width in pixels, linear in shared-document count. */
export function ribbonWidth(edge: ChordEdge, maxShared: number, maxWidth = 18): number {
  if (maxShared <= 0) return 1;
  return Math.max(1, (edge.shared_documents / maxShared) * maxWidth);
}

export function renderChord(
  container: HTMLElement,
  graph: ChordGraphPayload,
  handlers: ChordHandlers = {},
  size = 560,
): void {
  container.replaceChildren();
  if (graph.nodes.length === 0) {
    const empty = document.createElement("p");
    empty.className = "placeholder";
    empty.textContent = "no topics";
    container.appendChild(empty);
    return;
  }

  const radius = size / 2 - 90;
  const svg = d3
    .select(container)
    .append("svg")
    .attr("viewBox", `0 0 ${size} ${size}`)
    .attr("role", "img");
  const root = svg
    .append("g")
    .attr("transform", `translate(${size / 2},${size / 2})`);

  const slots = layoutArcs(graph.nodes);
  const byId = new Map(slots.map((s) => [s.node.topic_id, s]));
  const maxShared = Math.max(0, ...graph.edges.map((e) => e.shared_documents));

  const point = (mid: number, r: number): [number, number] => [
    Math.sin(mid) * r,
    -Math.cos(mid) * r,
  ];

  // Ribbons first so arcs draw on top of their endpoints.
  for (const edge of graph.edges) {
    const a = byId.get(edge.source);
    const b = byId.get(edge.target);
    if (!a || !b) continue;
    const [x1, y1] = point(a.midAngle, radius - 4);
    const [x2, y2] = point(b.midAngle, radius - 4);
    const path = root
      .append("path")
      .attr("class", "ribbon")
      .attr("d", `M${x1},${y1} Q0,0 ${x2},${y2}`)
      .attr("fill", "none")
      .attr("stroke-width", ribbonWidth(edge, maxShared))
      .attr("data-shared", edge.shared_documents)
      .attr("data-source", edge.source)
      .attr("data-target", edge.target);
    path.append("title").text(`${edge.shared_documents} shared documents`);
    if (handlers.onEdgeHover) {
      path.on("mouseenter", () => handlers.onEdgeHover?.(edge));
    }
  }

  const arcGen = d3
    .arc<ArcSlot>()
    .innerRadius(radius - 2)
    .outerRadius(radius + 14)
    .startAngle((s) => s.startAngle)
    .endAngle((s) => s.endAngle);

  for (const slot of slots) {
    const group = root.append("g").attr("class", "topic-arc-group");
    const arc = group
      .append("path")
      .attr("class", "arc")
      .attr("d", arcGen(slot) ?? "")
      .attr("data-topic-id", slot.node.topic_id)
      .attr("data-size", slot.node.size);
    arc
      .append("title")
      .text(`Topic ${slot.node.topic_id}: ${slot.node.top_words.join(", ")}`);

    const [lx, ly] = point(slot.midAngle, radius + 26);
    const anchor = slot.midAngle > Math.PI ? "end" : "start";
    const label = group
      .append("text")
      .attr("class", "arc-label")
      .attr("x", lx)
      .attr("y", ly)
      .attr("text-anchor", anchor);
    label
      .append("tspan")
      .attr("class", "arc-label-id")
      .text(`Topic ${slot.node.topic_id}`);
    label
      .append("tspan")
      .attr("class", "arc-label-words")
      .attr("x", lx)
      .attr("dy", "1.1em")
      .text(slot.node.top_words.slice(0, 4).join(" "));

    if (handlers.onTopicClick) {
      group.style("cursor", "pointer");
      group.on("click", () => handlers.onTopicClick?.(slot.node.topic_id));
    }
  }
}

/**
 * Interactive network view: overview first, zoom and filter, then
 * details-on-demand via the node side panel.
 */

import { fmt } from "./format.js";
import { runLayout } from "./layout.js";
import type { ResultDocument } from "./types.js";
import {
  MalformedDocumentError,
  NetworkViewModel,
  deriveNetworkView,
} from "./viewmodel.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const LEVEL_COLORS = ["#b2182b", "#ef8a62", "#67a9cf", "#2166ac", "#553388"];

export class NetworkView {
  private readonly doc: Document;
  private viewModel: NetworkViewModel | null = null;
  private levelFilter: number | null = null;
  private scale = 1;
  private offsetX = 0;
  private offsetY = 0;
  private result: ResultDocument | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly width = 960,
    private readonly height = 600,
  ) {
    this.doc = root.ownerDocument;
  }

  /** Render a result document; a malformed one yields only an error panel. */
  render(result: ResultDocument): void {
    this.root.textContent = "";
    let vm: NetworkViewModel;
    try {
      vm = deriveNetworkView(result, {
        width: this.width,
        height: this.height,
        levelFilter: this.levelFilter,
      });
    } catch (error) {
      if (error instanceof MalformedDocumentError) {
        const panel = this.doc.createElement("div");
        panel.className = "error-panel";
        panel.textContent = `Cannot render network: ${error.message}`;
        this.root.appendChild(panel);
        return;
      }
      throw error;
    }
    this.result = result;
    this.viewModel = vm;

    const index = new Map(vm.nodes.map((n, i) => [n.id, i]));
    runLayout(
      vm.nodes,
      vm.edges
        .filter((e) => index.has(e.src) && index.has(e.dst))
        .map((e) => ({
          source: index.get(e.src)!,
          target: index.get(e.dst)!,
          strength: e.weight,
        })),
      { width: this.width, height: this.height },
    );

    this.root.appendChild(this.buildToolbar(vm));
    this.root.appendChild(this.buildSvg(vm));
    const details = this.doc.createElement("div");
    details.className = "node-details";
    details.dataset.empty = "true";
    details.textContent = "Click a node for details.";
    this.root.appendChild(details);
  }

  setLevelFilter(level: number | null): void {
    this.levelFilter = level;
    if (this.result) {
      this.render(this.result);
    }
  }

  private buildToolbar(vm: NetworkViewModel): HTMLElement {
    const bar = this.doc.createElement("div");
    bar.className = "network-toolbar";
    const label = this.doc.createElement("label");
    label.textContent = "level ";
    const select = this.doc.createElement("select");
    select.className = "level-filter";
    const all = this.doc.createElement("option");
    all.value = "";
    all.textContent = "all";
    select.appendChild(all);
    for (const level of vm.levels) {
      const option = this.doc.createElement("option");
      option.value = String(level);
      option.textContent = String(level);
      select.appendChild(option);
    }
    select.value = this.levelFilter === null ? "" : String(this.levelFilter);
    select.addEventListener("change", () => {
      this.setLevelFilter(select.value === "" ? null : Number(select.value));
    });
    label.appendChild(select);
    bar.appendChild(label);

    const hint = this.doc.createElement("span");
    hint.className = "hint";
    hint.textContent = ` horizon k=${vm.horizon}; wheel zooms, drag pans`;
    bar.appendChild(hint);
    return bar;
  }

  private buildSvg(vm: NetworkViewModel): SVGSVGElement {
    const svg = this.doc.createElementNS(SVG_NS, "svg") as SVGSVGElement;
    svg.setAttribute("viewBox", `0 0 ${this.width} ${this.height}`);
    svg.setAttribute("class", "network-canvas");
    const stage = this.doc.createElementNS(SVG_NS, "g");
    stage.setAttribute("class", "stage");
    svg.appendChild(stage);

    const applyTransform = () => {
      stage.setAttribute(
        "transform",
        `translate(${this.offsetX} ${this.offsetY}) scale(${this.scale})`,
      );
    };
    applyTransform();

    svg.addEventListener("wheel", (event: WheelEvent) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.15 : 1 / 1.15;
      this.scale = Math.min(8, Math.max(0.2, this.scale * factor));
      applyTransform();
    });
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    svg.addEventListener("mousedown", (event: MouseEvent) => {
      dragging = true;
      lastX = event.clientX;
      lastY = event.clientY;
    });
    svg.addEventListener("mousemove", (event: MouseEvent) => {
      if (!dragging) return;
      this.offsetX += event.clientX - lastX;
      this.offsetY += event.clientY - lastY;
      lastX = event.clientX;
      lastY = event.clientY;
      applyTransform();
    });
    svg.addEventListener("mouseup", () => {
      dragging = false;
    });

    const positions = new Map(vm.nodes.map((n) => [n.id, n]));
    for (const edge of vm.edges) {
      const a = positions.get(edge.src)!;
      const b = positions.get(edge.dst)!;
      const line = this.doc.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", a.x.toFixed(1));
      line.setAttribute("y1", a.y.toFixed(1));
      line.setAttribute("x2", b.x.toFixed(1));
      line.setAttribute("y2", b.y.toFixed(1));
      line.setAttribute("class", "link");
      line.setAttribute("stroke-opacity", edge.opacity.toFixed(3));
      line.dataset.src = edge.src;
      line.dataset.dst = edge.dst;
      stage.appendChild(line);
    }

    for (const node of vm.nodes) {
      const group = this.doc.createElementNS(SVG_NS, "g");
      group.setAttribute("class", "node");
      group.dataset.id = node.id;
      const circle = this.doc.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", node.x.toFixed(1));
      circle.setAttribute("cy", node.y.toFixed(1));
      circle.setAttribute("r", node.radius.toFixed(2));
      circle.setAttribute(
        "fill",
        LEVEL_COLORS[node.level % LEVEL_COLORS.length],
      );
      group.appendChild(circle);
      const text = this.doc.createElementNS(SVG_NS, "text");
      text.setAttribute("x", node.x.toFixed(1));
      text.setAttribute("y", (node.y - node.radius - 4).toFixed(1));
      text.setAttribute("text-anchor", "middle");
      text.textContent = node.id;
      group.appendChild(text);
      group.addEventListener("click", () => this.showDetails(node.id));
      stage.appendChild(group);
    }
    return svg;
  }

  /** Details-on-demand: metrics for one node, straight from the document. */
  showDetails(nodeId: string): void {
    if (!this.viewModel) return;
    const node = this.viewModel.nodes.find((n) => n.id === nodeId);
    const panel = this.root.querySelector(".node-details");
    if (!node || !panel) return;
    this.viewModel.selected = nodeId;
    panel.removeAttribute("data-empty");
    const row = node.row;
    panel.innerHTML = "";
    const title = this.doc.createElement("h3");
    title.textContent = `${row.label} (${row.id})`;
    panel.appendChild(title);
    const dl = this.doc.createElement("dl");
    const fields: [string, string][] = [
      ["level", String(row.level)],
      ["value", fmt(row.value)],
      ["aggregate", fmt(row.aggregate)],
      ["effective", fmt(row.effective)],
      ["vulnerability", fmt(row.vulnerability)],
      ["in-degree", fmt(row.in_degree)],
      ["out-degree", fmt(row.out_degree)],
      ["centrality", fmt(row.centrality)],
      ["class", row.classification ?? "-"],
    ];
    for (const [key, value] of fields) {
      const dt = this.doc.createElement("dt");
      dt.textContent = key;
      const dd = this.doc.createElement("dd");
      dd.dataset.metric = key;
      dd.textContent = value;
      dl.appendChild(dt);
      dl.appendChild(dd);
    }
    panel.appendChild(dl);
  }
}
